"""Observables of two-spin states and their closed-form time dependences.

State-derived quantities go through explicit operator algebra. The
``analytic_*`` functions are written directly from hyperbolic closed forms and
share no code with the propagators, so agreement between the two is a real
check.

Closed forms accept a complex coupling ``|Gamma| e^{i alpha}``. Quantities
that depend on the relative phase of the two amplitudes (Bell-state
concurrence, parity-minus total spin) carry ``alpha`` explicitly; at
``alpha = 0`` they reduce to the familiar real-coupling expressions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .algebra import bell_state, expectation, pauli, pauli_pair, spin_component, total_spin_squared
from .engine import Scenario, SectorParams, static_phase
from .errors import DegenerateCoupling

ALPHA, BETA = "alpha", "beta"


def _branch_sign(branch: str) -> int:
    b = str(branch).lower()
    if b in (ALPHA, "a", "α"):
        return 1
    if b in (BETA, "b", "β"):
        return -1
    raise ValueError(f"branch must be alpha or beta, got {branch!r}")


def _sech(x: float) -> float:
    return 0.0 if abs(x) > 700.0 else 1.0 / math.cosh(x)


# --- state-derived ---------------------------------------------------------------

def concurrence(state) -> float:
    c = np.asarray(state, dtype=complex)
    return float(2.0 * abs(c[0] * c[3] - c[1] * c[2]))


class Covariances(NamedTuple):
    """Spin-spin covariances <A1 B2> - <A1><B2>.

    ``xy`` pairs sigma1x with sigma2y. For parity-definite states
    concurrence**2 = xx**2 + xy**2.
    """

    xx: float
    yy: float
    xy: float


def _covariance(state, a: str, b: str) -> float:
    return expectation(state, pauli_pair(a, b)) - expectation(state, pauli(a, 1)) * expectation(state, pauli(b, 2))


def covariances(state) -> Covariances:
    return Covariances(_covariance(state, "x", "x"), _covariance(state, "y", "y"), _covariance(state, "x", "y"))


def spin_expectations(state, hbar: float = 1.0) -> tuple[float, float, float]:
    """(<S^z>, <S^2>, <S^x>) of the total spin."""
    return (
        expectation(state, spin_component("z", hbar)),
        expectation(state, total_spin_squared(hbar)),
        expectation(state, spin_component("x", hbar)),
    )


@dataclass(frozen=True)
class ObservableSample:
    t: float
    sz: float
    s2: float
    sx: float
    concurrence: float
    cxx: float
    cyy: float
    cxy: float

    @classmethod
    def from_state(cls, t: float, state, hbar: float = 1.0) -> "ObservableSample":
        sz, s2, sx = spin_expectations(state, hbar)
        cov = covariances(state)
        return cls(t, sz, s2, sx, concurrence(state), cov.xx, cov.yy, cov.xy)


def bell_fidelity(state, which: str) -> float:
    return float(abs(np.vdot(bell_state(which), np.asarray(state, dtype=complex))) ** 2)


def survival_probability(state_t, state_0) -> float:
    return float(abs(np.vdot(np.asarray(state_0, dtype=complex), np.asarray(state_t, dtype=complex))) ** 2)


# --- closed forms -------------------------------------------------------------------

def _rate(scenario: Scenario, p: SectorParams) -> float:
    if p.gamma_abs == 0.0:
        raise DegenerateCoupling("closed form undefined for |Gamma| = 0")
    k = 2.0 if scenario is Scenario.S1 else 1.0
    return k * p.gamma_abs / p.hbar


def _two_ab(scenario: Scenario, x: float) -> float:
    """2|a||b| at dimensionless time x = gamma t."""
    if scenario is Scenario.S1:
        return math.tanh(x)
    return 2.0 * math.tanh(x) * _sech(x)


def analytic_sz_parity_plus(t: float, scenario, branch, p: SectorParams) -> float:
    """<S^z> starting from |++> (alpha) or |--> (beta) in sector +1."""
    scenario = Scenario.parse(scenario)
    x = _rate(scenario, p) * t
    s = _branch_sign(branch)
    if scenario is Scenario.S1:
        return s * p.hbar * _sech(x)
    return s * p.hbar * (2.0 * _sech(x) ** 2 - 1.0)


def analytic_s2_parity_minus(t: float, scenario, branch, p: SectorParams, static_phi: float | None = None) -> float:
    """<S^2> starting from |+-> (alpha) or |-+> (beta) in sector -1.

    ``scenario`` is S1, S2 or "static"; the static form oscillates at the
    Bohr frequency 2|Gamma_-|/hbar with phase ``static_phi`` (defaults to the
    phase fixed by Gamma_-).
    """
    s = _branch_sign(branch)
    h2 = p.hbar ** 2
    if str(scenario).lower() == "static":
        if p.gamma_abs == 0.0:
            raise DegenerateCoupling("static form undefined for |Gamma_-| = 0")
        phi = static_phase(p.gamma) if static_phi is None else static_phi
        return h2 * (1.0 - s * math.sin(2.0 * p.gamma_abs * t / p.hbar) * math.cos(phi))
    scenario = Scenario.parse(scenario)
    x = _rate(scenario, p) * t
    # sin(Theta - alpha) with sin Theta = tanh x, cos Theta = sech x
    sin_rel = math.tanh(x) * math.cos(p.gamma_phase) - _sech(x) * math.sin(p.gamma_phase)
    return h2 * (1.0 + s * _two_ab(scenario, x) * sin_rel)


def analytic_sx_asymptotic(t: float, c) -> float:
    """Late-time <S^x> from the state with all amplitudes 1/2, both sectors in S1.

    ``c`` is a :class:`~spindimer.dimer.DimerCouplings`. Valid when Gamma_+
    and Gamma_- are real and positive.
    """
    gamma_plus_abs, gamma_minus_abs = abs(c.gamma(1)), abs(c.gamma(-1))
    gamma_zz, hbar = c.gzz, c.hbar
    if gamma_plus_abs == 0.0:
        raise DegenerateCoupling("asymptote undefined for |Gamma_+| = 0")
    tau = 2.0 * gamma_plus_abs * t / hbar
    freq = -gamma_zz / gamma_plus_abs + gamma_minus_abs / (2.0 * gamma_plus_abs) - 0.5
    return 0.5 * hbar * math.cos(freq * tau)


def analytic_concurrence(t: float, source: str, scenario, p: SectorParams) -> float:
    """Concurrence from a basis state (from_pp) or the in-sector Bell state (from_bell).

    For the parity-minus sector pass that sector's parameters; the sector
    exchange needs no other change.
    """
    scenario = Scenario.parse(scenario)
    x = _rate(scenario, p) * t
    two_ab = _two_ab(scenario, x)
    if source == "from_pp":
        return abs(two_ab)
    if source != "from_bell":
        raise ValueError(f"source must be from_pp or from_bell, got {source!r}")
    # 2R = gamma t (S1) or sinh(gamma t) (S2)
    two_r = x if scenario is Scenario.S1 else math.sinh(x)
    return math.sqrt(max(0.0, 1.0 - (two_ab * math.sin(two_r + p.gamma_phase)) ** 2))


class EntanglementInstant(NamedTuple):
    tau: float
    phi: float
    theta: float


def entanglement_instants(n: int) -> EntanglementInstant:
    """Instants gamma t = arcsinh(n pi) of maximal entanglement from the Bell state (S2)."""
    if n < 0 or int(n) != n:
        raise ValueError("n must be a non-negative integer")
    x = n * math.pi
    r = math.sqrt(1.0 + x * x)
    phi = math.sqrt((r - 1.0) / (r + 1.0))
    theta = math.atan((-1) ** (n + 1) * x)
    return EntanglementInstant(math.asinh(x), phi, theta)


__all__ = [
    "ALPHA",
    "BETA",
    "Covariances",
    "EntanglementInstant",
    "ObservableSample",
    "analytic_concurrence",
    "analytic_s2_parity_minus",
    "analytic_sx_asymptotic",
    "analytic_sz_parity_plus",
    "bell_fidelity",
    "concurrence",
    "covariances",
    "entanglement_instants",
    "spin_expectations",
    "survival_probability",
]
