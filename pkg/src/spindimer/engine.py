"""Exactly solvable single-spin dynamics.

A fictitious spin 1/2 governed by::

    H(t) = [[ Omega(t),  Gamma ],
            [ Gamma*,   -Omega(t) ]]

has the propagator::

    E(t) = [[  |a| e^{i phi_a},   |b| e^{i phi_b} ],
            [ -|b| e^{-i phi_b},  |a| e^{-i phi_a} ]]

whenever Omega is engineered from an auxiliary angle Theta(t) with
Theta(0) = 0. This module carries the two closed-form scenarios (S1, which
ends in an equal superposition, and S2, which inverts the spin) and the
generic Theta-driven construction evaluated by quadrature.

The closed-form phase functions below are written for a real positive
coupling. A complex coupling ``|Gamma| e^{i alpha}`` only rotates the
off-diagonal phase: :func:`scenario_propagator` and
:func:`propagator_from_theta` add ``alpha`` to ``phi_b``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from . import drives
from .errors import CotangentSingularity, DegenerateCoupling
from .quadrature import DEFAULT_TOL, adaptive_simpson

# sech/cosh overflow guard, in units of the dimensionless time gamma*t
_OVERFLOW = 700.0
# distance from a multiple of pi below which cot(.) is treated as divergent
_SINGULAR = 1e-9
_HALF_PI = 0.5 * math.pi


class Scenario(str, Enum):
    S1 = "S1"
    S2 = "S2"

    @classmethod
    def parse(cls, value) -> "Scenario":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().upper())
        except ValueError:
            raise ValueError(f"unknown scenario {value!r}; expected S1 or S2") from None


@dataclass(frozen=True)
class SectorParams:
    """Transverse coupling of one sector, ``Gamma = gamma_abs * exp(i gamma_phase)``."""

    gamma_abs: float
    gamma_phase: float = 0.0
    hbar: float = 1.0

    def __post_init__(self):
        if not self.gamma_abs >= 0.0:
            raise ValueError("gamma_abs must be non-negative")
        if not self.hbar > 0.0:
            raise ValueError("hbar must be positive")

    @classmethod
    def from_complex(cls, gamma: complex, hbar: float = 1.0) -> "SectorParams":
        return cls(abs(gamma), cmath.phase(gamma) if gamma != 0 else 0.0, hbar)

    @property
    def gamma(self) -> complex:
        return cmath.rect(self.gamma_abs, self.gamma_phase)


@dataclass(frozen=True)
class Propagator2:
    a_abs: float
    b_abs: float
    phi_a: float
    phi_b: float
    t: float | None = None

    def __post_init__(self):
        if self.a_abs < 0 or self.b_abs < 0:
            raise ValueError("moduli must be non-negative; use Propagator2.from_signed")
        if abs(self.a_abs ** 2 + self.b_abs ** 2 - 1.0) > 1e-12:
            raise ValueError("|a|^2 + |b|^2 must equal 1")

    @classmethod
    def from_signed(cls, a: float, b: float, phi_a: float, phi_b: float, t=None) -> "Propagator2":
        """Build from possibly negative ``a``, ``b``; signs move into the phases."""
        if a < 0:
            a, phi_a = -a, phi_a + math.pi
        if b < 0:
            b, phi_b = -b, phi_b + math.pi
        return cls(a, b, phi_a, phi_b, t)

    @classmethod
    def identity(cls, t: float = 0.0) -> "Propagator2":
        return cls(1.0, 0.0, 0.0, -_HALF_PI, t)

    def matrix(self) -> np.ndarray:
        ea = cmath.exp(1j * self.phi_a)
        eb = cmath.exp(1j * self.phi_b)
        return np.array(
            [
                [self.a_abs * ea, self.b_abs * eb],
                [-self.b_abs * eb.conjugate(), self.a_abs * ea.conjugate()],
            ],
            dtype=complex,
        )


@dataclass(frozen=True)
class ThetaDrive:
    """Auxiliary angle Theta(t) and its derivative; Theta(0) must vanish."""

    theta: Callable[[float], float]
    theta_dot: Callable[[float], float]
    t_max: float = math.inf

    def __post_init__(self):
        if self.theta(0.0) != 0.0:
            raise ValueError("ThetaDrive requires theta(0) == 0")


def _require_coupling(p: SectorParams) -> None:
    if p.gamma_abs == 0.0:
        raise DegenerateCoupling("scenario undefined for |Gamma| = 0")


def _require_time(t: float) -> None:
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")


def scenario_rate(scenario, p: SectorParams) -> float:
    """gamma = 2|Gamma|/hbar for S1 and |Gamma|/hbar for S2."""
    _require_coupling(p)
    if Scenario.parse(scenario) is Scenario.S1:
        return 2.0 * p.gamma_abs / p.hbar
    return p.gamma_abs / p.hbar


def _sech(x: float) -> float:
    return 0.0 if x > _OVERFLOW else 1.0 / math.cosh(x)


# --- scenario S1 ---------------------------------------------------------

def scenario1_amplitudes(t: float, p: SectorParams) -> tuple[float, float]:
    _require_time(t)
    x = scenario_rate(Scenario.S1, p) * t
    if x > _OVERFLOW:
        r = math.sqrt(0.5)
        return r, r
    # sqrt((cosh+1)/(2cosh)) and sqrt((cosh-1)/(2cosh)) without cancellation
    c = math.cosh(x)
    return math.cosh(0.5 * x) / math.sqrt(c), math.sinh(0.5 * x) / math.sqrt(c)


def scenario1_phases(t: float, p: SectorParams) -> tuple[float, float]:
    _require_time(t)
    x = scenario_rate(Scenario.S1, p) * t
    common = -math.atan(math.tanh(0.5 * x))
    return common - 0.5 * x, common + 0.5 * x - _HALF_PI


def scenario1_omega(t: float, p: SectorParams) -> float:
    x = scenario_rate(Scenario.S1, p) * t
    return 2.0 * p.gamma_abs * _sech(abs(x))


# --- scenario S2 ---------------------------------------------------------

def scenario2_amplitudes(t: float, p: SectorParams) -> tuple[float, float]:
    _require_time(t)
    x = scenario_rate(Scenario.S2, p) * t
    return _sech(x), math.tanh(x)


def scenario2_phases(t: float, p: SectorParams) -> tuple[float, float]:
    """Raises OverflowError once sinh(gamma t) leaves double range."""
    _require_time(t)
    x = scenario_rate(Scenario.S2, p) * t
    common = -math.atan(math.tanh(0.5 * x))
    half_sinh = 0.5 * math.sinh(x)
    return common - half_sinh, common + half_sinh - _HALF_PI


def scenario2_omega(t: float, p: SectorParams) -> float:
    x = abs(scenario_rate(Scenario.S2, p) * t)
    if x > _OVERFLOW:
        return -math.inf
    c = math.cosh(x)
    return 0.5 * p.gamma_abs * (3.0 / c - c)


# --- scenario dispatch ----------------------------------------------------

_AMPLITUDES = {Scenario.S1: scenario1_amplitudes, Scenario.S2: scenario2_amplitudes}
_PHASES = {Scenario.S1: scenario1_phases, Scenario.S2: scenario2_phases}
_OMEGA = {Scenario.S1: scenario1_omega, Scenario.S2: scenario2_omega}


def scenario_amplitudes(scenario, t, p):
    return _AMPLITUDES[Scenario.parse(scenario)](t, p)


def scenario_phases(scenario, t, p):
    return _PHASES[Scenario.parse(scenario)](t, p)


def scenario_omega(scenario, t, p):
    return _OMEGA[Scenario.parse(scenario)](t, p)


def scenario_propagator(scenario, t: float, p: SectorParams) -> Propagator2:
    """Closed-form sector propagator, including the phase of Gamma."""
    a, b = scenario_amplitudes(scenario, t, p)
    phi_a, phi_b = scenario_phases(scenario, t, p)
    return Propagator2(a, b, phi_a, phi_b + p.gamma_phase, t)


def scenario_omega_drive(scenario, p: SectorParams) -> drives.Drive:
    """Omega(t) of a scenario as a closed-form :class:`~spindimer.drives.Drive`."""
    scenario = Scenario.parse(scenario)
    rate = scenario_rate(scenario, p)
    if scenario is Scenario.S1:
        return drives.sech(2.0 * p.gamma_abs, rate)
    return drives.sech(1.5 * p.gamma_abs, rate) + drives.cosh(-0.5 * p.gamma_abs, rate)


def scenario_theta(scenario, p: SectorParams) -> ThetaDrive:
    """Theta = 2 arctan(tanh(gamma t / 2)), shared by both scenarios."""
    rate = scenario_rate(scenario, p)
    return ThetaDrive(
        theta=lambda t: 2.0 * math.atan(math.tanh(0.5 * rate * t)),
        theta_dot=lambda t: rate * _sech(abs(rate * t)),
    )


# --- generic Theta-driven construction -----------------------------------

def _cos_theta_integral(d: ThetaDrive, t: float, tol: float) -> float:
    return adaptive_simpson(lambda s: math.cos(d.theta(s)), 0.0, t, tol)


def _check_domain(d: ThetaDrive, t: float) -> None:
    if t < 0 or t > d.t_max:
        raise ValueError(f"t={t} outside the drive domain [0, {d.t_max}]")


def omega_from_theta(d: ThetaDrive, t: float, p: SectorParams, tol: float = DEFAULT_TOL) -> float:
    """Longitudinal field realising the drive ``d``:

    Omega = (hbar/2) Theta' + |Gamma| sin(Theta) cot[(2|Gamma|/hbar) int_0^t cos Theta].
    """
    _require_coupling(p)
    _check_domain(d, t)
    arg = 2.0 * p.gamma_abs * _cos_theta_integral(d, t, tol) / p.hbar
    k = round(arg / math.pi)
    if abs(arg - k * math.pi) < _SINGULAR and k == 0:
        # both sin(Theta) and the cot argument vanish linearly at t = 0
        return p.hbar * d.theta_dot(t)
    sin_theta = math.sin(d.theta(t))
    base = 0.5 * p.hbar * d.theta_dot(t)
    if sin_theta == 0.0:
        return base
    if abs(arg - k * math.pi) < _SINGULAR:
        raise CotangentSingularity(f"engineered field diverges at t={t!r}", t=t)
    return base + p.gamma_abs * sin_theta / math.tan(arg)


_SCAN_POINTS = 256


def _locate_singularity(d: ThetaDrive, t: float, p: SectorParams, tol: float) -> None:
    """Raise CotangentSingularity if |(2|Gamma|/hbar) int cos Theta| reaches pi on (0, t].

    The argument starts at 0 and is continuous, so the first nonzero multiple
    of pi it can meet is +-pi. Scanned on a grid, then bisected.
    """
    k = 2.0 * p.gamma_abs / p.hbar
    grid = np.linspace(0.0, t, _SCAN_POINTS + 1)
    arg = 0.0
    for lo, hi in zip(grid[:-1], grid[1:]):
        nxt = arg + k * adaptive_simpson(lambda s: math.cos(d.theta(s)), lo, hi, tol)
        if abs(nxt) >= math.pi - _SINGULAR:
            a, b, base = lo, hi, arg
            for _ in range(60):
                m = 0.5 * (a + b)
                val = base + k * adaptive_simpson(lambda s: math.cos(d.theta(s)), lo, m, tol)
                if abs(val) >= math.pi - _SINGULAR:
                    b = m
                else:
                    a = m
            raise CotangentSingularity(f"phase integral diverges at t={b!r}", t=b)
        arg = nxt


def propagator_from_theta(d: ThetaDrive, t: float, p: SectorParams, tol: float = DEFAULT_TOL) -> Propagator2:
    """Sector propagator for the field of :func:`omega_from_theta`, by quadrature.

    Raises CotangentSingularity if (2|Gamma|/hbar) int cos Theta reaches a
    nonzero multiple of pi on (0, t], where the phase integral diverges.
    """
    _require_coupling(p)
    _check_domain(d, t)
    g, hbar = p.gamma_abs, p.hbar

    # 1/sin(arg) amplifies noise in the inner integral, so resolve it well
    # below the outer tolerance to keep the outer integrand smooth
    inner_tol = max(tol * 1e-4, 1e-16)

    def ratio(s: float) -> float:
        arg = 2.0 * g * _cos_theta_integral(d, s, inner_tol) / hbar
        k = round(arg / math.pi)
        if abs(arg - k * math.pi) < _SINGULAR:
            if k != 0:
                raise CotangentSingularity(f"phase integral diverges at t={s!r}", t=s)
            # removable 0/0: first-order series of numerator and denominator
            return hbar * d.theta_dot(s) / (2.0 * g * math.cos(d.theta(s)))
        return math.sin(d.theta(s)) / math.sin(arg)

    _locate_singularity(d, t, p, inner_tol)
    x = g * _cos_theta_integral(d, t, tol) / hbar
    phase_integral = g / hbar * adaptive_simpson(ratio, 0.0, t, tol)
    theta = d.theta(t)
    phi_a = -(0.5 * theta + phase_integral)
    phi_b = -0.5 * theta + phase_integral - _HALF_PI + p.gamma_phase
    return Propagator2.from_signed(math.cos(x), math.sin(x), phi_a, phi_b, t)


# --- static sector ---------------------------------------------------------

def static_phase(gamma_minus: complex) -> float:
    """Phi with exp(i Phi) = -i Gamma/|Gamma|, i.e. arg(Gamma) - pi/2."""
    return math.atan2(-gamma_minus.real, gamma_minus.imag)


def static_sector_propagator2(t: float, gamma_minus: complex, hbar: float = 1.0) -> Propagator2:
    """Propagator of the constant sector Hamiltonian [[0, G], [G*, 0]]."""
    x = abs(gamma_minus) * t / hbar
    return Propagator2.from_signed(math.cos(x), math.sin(x), 0.0, static_phase(gamma_minus), t)


def static_sector_propagator(t: float, gamma_minus: complex, gamma_zz: float, hbar: float = 1.0) -> np.ndarray:
    """Parity-minus block when omega_1 = omega_2, including the gamma_zz phase.

    The sector Hamiltonian is [[0, G], [G*, 0]] - gamma_zz, hence the
    overall factor exp(+i gamma_zz t / hbar).
    """
    x = abs(gamma_minus) * t / hbar
    c, s = math.cos(x), math.sin(x)
    e = cmath.exp(1j * static_phase(gamma_minus))
    block = np.array([[c, e * s], [-e.conjugate() * s, c]], dtype=complex)
    return cmath.exp(1j * gamma_zz * t / hbar) * block
