"""Field schedules realising the exactly solvable classes.

The sector drives are Omega_pm = hbar (omega1 +- omega2), so fixing a scenario
in one sector pins one combination of the local frequencies while the other
combination stays free. Schedules are kept as closed-form function objects
(:class:`~spindimer.drives.Drive` where possible) and are only sampled at the
command-line boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import drives
from .algebra import pauli
from .dimer import (
    MINUS,
    PLUS,
    DimerCouplings,
    Propagator4,
    assemble_propagator,
    coupling_part,
    SECTOR_SLOTS,
    dimer_hamiltonian,
    evolve,
    static_full_propagator,
)
from .engine import Propagator2, Scenario, scenario_omega_drive, scenario_propagator
from .errors import DegenerateCoupling, InvalidEqualOmega, UnsolvedSector, ZeroGFactor
from .oracle import LinearHamiltonian

# Bohr magneton over hbar, rad s^-1 T^-1, so that omega = mu_B g B / 2 is an
# angular frequency
MU_B = 8.7941007832e10

STATIC = "static"

TimeFunction = Callable[[float], float]


def _default_samples(c: DimerCouplings) -> np.ndarray:
    # ten coupling times is well past every transient of the closed forms
    scale = max(abs(c.gamma(PLUS)), abs(c.gamma(MINUS)), 1e-300)
    return np.linspace(0.0, 10.0 * c.hbar / scale, 1001)


def _combine(a, b, ka: float, kb: float):
    """ka * a + kb * b, staying a Drive when both inputs are Drives."""
    if isinstance(a, drives.Drive) and isinstance(b, drives.Drive):
        return a * ka + b * kb
    return lambda t: ka * a(t) + kb * b(t)


@dataclass(frozen=True)
class FieldSchedule:
    omega1: TimeFunction
    omega2: TimeFunction
    scenario_plus: Optional[Scenario]
    scenario_minus: Optional[object]  # Scenario, STATIC or None
    couplings: DimerCouplings

    def big_omega(self, sector: int) -> TimeFunction:
        """Omega_sector(t) = hbar (omega1 +- omega2)."""
        h = self.couplings.hbar
        return _combine(self.omega1, self.omega2, h, h * sector)

    @property
    def native_ok(self) -> bool:
        return isinstance(self.omega1, drives.Drive) and isinstance(self.omega2, drives.Drive)


def _check_driven(c: DimerCouplings, sector: int) -> None:
    if abs(c.gamma(sector)) == 0.0:
        name = "+" if sector == PLUS else "-"
        raise DegenerateCoupling(f"|Gamma_{name}| = 0: sector {name}1 has no driven scenario")


def full_schedule(c: DimerCouplings, pair) -> FieldSchedule:
    """omega1 = (Omega_+ + Omega_-)/2hbar, omega2 = (Omega_+ - Omega_-)/2hbar."""
    sp, sm = (Scenario.parse(s) for s in pair)
    _check_driven(c, PLUS)
    _check_driven(c, MINUS)
    om_p = scenario_omega_drive(sp, c.sector_params(PLUS))
    om_m = scenario_omega_drive(sm, c.sector_params(MINUS))
    k = 0.5 / c.hbar
    return FieldSchedule(om_p * k + om_m * k, om_p * k - om_m * k, sp, sm, c)


def subspace_schedule(c: DimerCouplings, sector: int, scenario, free: TimeFunction = drives.ZERO,
                      samples=None) -> FieldSchedule:
    """Constrain one sector to ``scenario``; ``free`` is the other combination.

    For sector +1, free = omega1 - omega2; for sector -1, free = omega1 + omega2.
    """
    if sector not in (PLUS, MINUS):
        raise ValueError("sector must be +1 or -1")
    scenario = Scenario.parse(scenario)
    _check_driven(c, sector)
    pinned = scenario_omega_drive(scenario, c.sector_params(sector)) / c.hbar
    if sector == PLUS:
        w1 = _combine(pinned, free, 0.5, 0.5)
        w2 = _combine(pinned, free, 0.5, -0.5)
        free_zero = isinstance(free, drives.Drive) and free.is_zero()
        return FieldSchedule(w1, w2, scenario, STATIC if free_zero else None, c)
    w1 = _combine(free, pinned, 0.5, 0.5)
    w2 = _combine(free, pinned, 0.5, -0.5)
    ts = _default_samples(c) if samples is None else np.asarray(samples, dtype=float)
    if all(w1(t) == w2(t) for t in ts):
        raise InvalidEqualOmega("sector -1 scenarios require omega1(t) != omega2(t)")
    return FieldSchedule(w1, w2, None, scenario, c)


def static_schedule(c: DimerCouplings, scenario_plus) -> FieldSchedule:
    """omega1 = omega2 with sector +1 in ``scenario_plus``; sector -1 is static."""
    return subspace_schedule(c, PLUS, scenario_plus, drives.ZERO)


def closed_form_propagator(s: FieldSchedule, t: float) -> Propagator4:
    c = s.couplings
    if s.scenario_plus is None:
        raise UnsolvedSector("sector +1 has no closed form for this schedule")
    p_plus = scenario_propagator(s.scenario_plus, t, c.sector_params(PLUS))
    if s.scenario_minus == STATIC:
        return static_full_propagator(c, p_plus, t)
    if s.scenario_minus is None:
        raise UnsolvedSector("sector -1 has no closed form for this schedule")
    p_minus = scenario_propagator(s.scenario_minus, t, c.sector_params(MINUS))
    return assemble_propagator(p_plus, p_minus, c, t, f"{s.scenario_plus.value},{s.scenario_minus.value}")


def propagate_state(s: FieldSchedule, state, t: float) -> np.ndarray:
    """Closed-form evolution of ``state`` to time ``t``.

    Schedules solved in only one sector accept states confined to that sector.
    """
    psi = np.asarray(state, dtype=complex)
    try:
        u = closed_form_propagator(s, t)
    except UnsolvedSector:
        solved = PLUS if s.scenario_plus is not None else MINUS
        other = MINUS if solved == PLUS else PLUS
        if any(psi[i] != 0 for i in SECTOR_SLOTS[other]):
            raise
        p = sector_propagator(s, solved, t)
        ident = Propagator2.identity(t)
        pair = (p, ident) if solved == PLUS else (ident, p)
        u = assemble_propagator(*pair, s.couplings, t, "partial")
    return evolve(psi, u)


def schedule_hamiltonian(s: FieldSchedule) -> LinearHamiltonian:
    """The 4x4 H(t) of a schedule, for the integrator."""
    if s.native_ok:
        return dimer_hamiltonian(s.couplings, s.omega1, s.omega2)
    h = s.couplings.hbar
    w1, w2 = s.omega1, s.omega2
    return LinearHamiltonian(
        coupling_part(s.couplings),
        ((lambda t: h * w1(t), pauli("z", 1)), (lambda t: h * w2(t), pauli("z", 2))),
    )


def sector_propagator(s: FieldSchedule, sector: int, t: float):
    """Closed-form sector propagator, for schedules solved in only one sector."""
    scen = s.scenario_plus if sector == PLUS else s.scenario_minus
    if scen is None or scen == STATIC:
        raise UnsolvedSector(f"sector {sector:+d} has no driven closed form")
    return scenario_propagator(scen, t, s.couplings.sector_params(sector))


# --- laboratory fields ---------------------------------------------------------------

@dataclass(frozen=True)
class LabField:
    b1z: TimeFunction
    b2z: TimeFunction
    g1zz: float
    g2zz: float
    mu_B: float = MU_B

    def omega1(self, t: float) -> float:
        return self.mu_B * self.g1zz * self.b1z(t) / 2.0

    def omega2(self, t: float) -> float:
        return self.mu_B * self.g2zz * self.b2z(t) / 2.0


def omega_to_field(s: FieldSchedule, g1zz: float, g2zz: float, mu_B: float = MU_B) -> LabField:
    if g1zz == 0 or g2zz == 0:
        raise ZeroGFactor("g-factors must be nonzero")
    k1 = 2.0 / (mu_B * g1zz)
    k2 = 2.0 / (mu_B * g2zz)
    w1, w2 = s.omega1, s.omega2
    return LabField(lambda t: k1 * w1(t), lambda t: k2 * w2(t), g1zz, g2zz, mu_B)


def field_to_omega(f: LabField) -> tuple[TimeFunction, TimeFunction]:
    return f.omega1, f.omega2


def equal_omega_check(f: LabField, samples, tol: float = 1e-10) -> bool:
    """True iff g1 B1(t) = g2 B2(t) at every sampled t."""
    for t in np.asarray(samples, dtype=float):
        x1 = f.g1zz * f.b1z(t)
        x2 = f.g2zz * f.b2z(t)
        if abs(x1 - x2) > tol * max(abs(x1), abs(x2)):
            return False
    return True


def homogeneous_field_feasible(c: DimerCouplings, pair, g1zz: float, g2zz: float,
                               samples=None, tol: float = 1e-10) -> bool:
    """Can one field B1 = B2 = B(t) realise scenarios in both sectors at once?

    With omega_i = k_i B, sector +1 needs (k1 + k2) B = Omega_+/hbar and
    sector -1 needs (k1 - k2) B = Omega_-/hbar, so the two scenario drives
    must satisfy (k1 - k2) Omega_+ = (k1 + k2) Omega_- at every t.
    """
    if g1zz == 0 or g2zz == 0:
        raise ZeroGFactor("g-factors must be nonzero")
    sp, sm = (Scenario.parse(x) for x in pair)
    _check_driven(c, PLUS)
    _check_driven(c, MINUS)
    om_p = scenario_omega_drive(sp, c.sector_params(PLUS))
    om_m = scenario_omega_drive(sm, c.sector_params(MINUS))
    k1, k2 = g1zz, g2zz  # the common factor mu_B / 2 cancels
    ts = _default_samples(c) if samples is None else np.asarray(samples, dtype=float)
    for t in ts:
        lhs = (k1 - k2) * om_p(t)
        rhs = (k1 + k2) * om_m(t)
        if abs(lhs - rhs) > tol * max(abs(lhs), abs(rhs)):
            return False
    return True


__all__ = [
    "MU_B",
    "STATIC",
    "FieldSchedule",
    "LabField",
    "full_schedule",
    "subspace_schedule",
    "static_schedule",
    "closed_form_propagator",
    "propagate_state",
    "schedule_hamiltonian",
    "sector_propagator",
    "omega_to_field",
    "field_to_omega",
    "equal_omega_check",
    "homogeneous_field_feasible",
]
