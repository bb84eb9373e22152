import csv
import math
from pathlib import Path

import numpy as np
import pytest

from spindimer import drives
from spindimer.algebra import basis_state
from spindimer.dimer import MINUS, PLUS, DimerCouplings
from spindimer.errors import DegenerateCoupling, InvalidEqualOmega, UnsolvedSector, ZeroGFactor
from spindimer.oracle import integrate_state
from spindimer.schedules import (
    MU_B,
    STATIC,
    LabField,
    closed_form_propagator,
    equal_omega_check,
    field_to_omega,
    full_schedule,
    homogeneous_field_feasible,
    omega_to_field,
    propagate_state,
    schedule_hamiltonian,
    sector_propagator,
    static_schedule,
    subspace_schedule,
)
from spindimer.verify import ORACLE_CFG

from conftest import random_state

DATA = Path(__file__).parent / "data"
PAIRS = [(a, b) for a in ("S1", "S2") for b in ("S1", "S2")]


def sech(x):
    return 1.0 / math.cosh(x)


def test_full_schedule_initial_values():
    c = DimerCouplings.special(1.0)
    s = full_schedule(c, ("S1", "S1"))
    assert s.omega1(0.0) == pytest.approx(3.0, abs=1e-15)
    assert s.omega2(0.0) == pytest.approx(-1.0, abs=1e-15)
    assert s.native_ok


@pytest.mark.parametrize("pair", PAIRS)
def test_schedule_identities(pair):
    c = DimerCouplings.special(0.7, hbar=1.3)
    s = full_schedule(c, pair)
    gp, gm = abs(c.gamma(PLUS)), abs(c.gamma(MINUS))

    def om(scen, g, t):
        if scen == "S1":
            return 2 * g * sech(2 * g * t / c.hbar)
        x = g * t / c.hbar
        return g * (1.5 * sech(x) - 0.5 * math.cosh(x))

    for t in np.linspace(0.0, 10.0, 1000):
        plus = c.hbar * (s.omega1(t) + s.omega2(t))
        minus = c.hbar * (s.omega1(t) - s.omega2(t))
        ref_p, ref_m = om(pair[0], gp, t), om(pair[1], gm, t)
        assert abs(plus - ref_p) <= 1e-12 * max(1.0, abs(ref_p))
        assert abs(minus - ref_m) <= 1e-12 * max(1.0, abs(ref_m))


def test_fig3_golden():
    c = DimerCouplings.special(1.0)
    s = full_schedule(c, ("S1", "S1"))
    with open(DATA / "fig3_omegas.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 100
    for r in rows:
        x = float(r["tau_c"])
        assert s.omega1(x) == pytest.approx(float(r["hbar_omega1_over_c"]), abs=1e-12)
        assert s.omega2(x) == pytest.approx(float(r["hbar_omega2_over_c"]), abs=1e-12)


def test_full_schedule_degenerate():
    with pytest.raises(DegenerateCoupling):
        full_schedule(DimerCouplings(gxx=1.0, gyy=1.0), ("S1", "S1"))


def test_subspace_plus_free_zero():
    c = DimerCouplings.special(0.8)
    s = subspace_schedule(c, PLUS, "S1")
    for t in np.linspace(0, 5, 11):
        expected = 0.8 * sech(1.6 * t)
        assert s.omega1(t) == pytest.approx(expected, abs=1e-15)
        assert s.omega2(t) == pytest.approx(expected, abs=1e-15)
    assert s.scenario_minus == STATIC
    assert static_schedule(c, "S1").scenario_minus == STATIC


def test_subspace_minus_free_const():
    c = DimerCouplings.special(0.5)
    s = subspace_schedule(c, MINUS, "S2", drives.constant(0.3))
    for t in np.linspace(0, 5, 11):
        x = 1.0 * t
        assert s.omega1(t) - s.omega2(t) == pytest.approx(1.5 * sech(x) - 0.5 * math.cosh(x), abs=1e-12)
        assert s.omega1(t) + s.omega2(t) == pytest.approx(0.3, abs=1e-12)
    assert s.scenario_plus is None
    with pytest.raises(UnsolvedSector):
        closed_form_propagator(s, 1.0)


def test_subspace_plus_free_callable_becomes_unsolved():
    c = DimerCouplings.special(0.5)
    s = subspace_schedule(c, PLUS, "S1", lambda t: 0.2 * t)
    assert s.scenario_minus is None and not s.native_ok
    with pytest.raises(UnsolvedSector):
        sector_propagator(s, MINUS, 1.0)


def test_subspace_validation():
    c = DimerCouplings.special(1.0)
    with pytest.raises(ValueError):
        subspace_schedule(c, 0, "S1")
    with pytest.raises(DegenerateCoupling):
        subspace_schedule(DimerCouplings(gxx=1.0, gyy=1.0), PLUS, "S1")


def test_invalid_equal_omega(monkeypatch):
    # the scenario drives never vanish identically, so zero the pinned drive
    import spindimer.schedules as sch

    c = DimerCouplings.special(1.0)
    s = subspace_schedule(c, MINUS, "S1", drives.ZERO)
    assert any(s.omega1(t) != s.omega2(t) for t in np.linspace(0, 5, 6))
    monkeypatch.setattr(sch, "scenario_omega_drive", lambda scen, p: drives.ZERO)
    with pytest.raises(InvalidEqualOmega):
        subspace_schedule(c, MINUS, "S1", drives.sin(1.0, 1.0))


@pytest.mark.parametrize("pair", PAIRS)
def test_schedule_against_oracle(pair, rng):
    c = DimerCouplings.special(1.0, gzz=0.3)
    s = full_schedule(c, pair)
    t_end = 10.0 / 2.0
    grid = np.linspace(0, t_end, 6)
    psi0 = random_state(rng, 4)
    traj = integrate_state(schedule_hamiltonian(s), psi0, t_end, ORACLE_CFG, t_eval=grid)
    for t, y in zip(grid, traj.y):
        assert np.linalg.norm(y - propagate_state(s, psi0, t)) <= 1e-6


def test_single_sector_propagation():
    c = DimerCouplings.special(1.0, gzz=0.2)
    s = subspace_schedule(c, MINUS, "S1", drives.cos(0.4, 1.0))
    psi0 = basis_state("+-")
    traj = integrate_state(schedule_hamiltonian(s), psi0, 3.0, ORACLE_CFG)
    assert np.linalg.norm(traj.final - propagate_state(s, psi0, 3.0)) <= 1e-8
    with pytest.raises(UnsolvedSector):
        propagate_state(s, basis_state("++"), 3.0)


def test_callable_schedule_hamiltonian():
    c = DimerCouplings.special(1.0)
    s = subspace_schedule(c, PLUS, "S1", lambda t: 0.1 * math.sin(t))
    traj = integrate_state(schedule_hamiltonian(s), basis_state("++"), 2.0, ORACLE_CFG)
    assert traj.backend == "python"
    assert np.linalg.norm(traj.final - propagate_state(s, basis_state("++"), 2.0)) <= 1e-8


# --- laboratory fields -------------------------------------------------------------

def test_omega_to_field_examples():
    c = DimerCouplings.special(1.0)
    s = full_schedule(c, ("S1", "S1"))
    f = omega_to_field(s, 2.0, 1.5)
    for t in np.linspace(0, 4, 9):
        assert f.b1z(t) == pytest.approx(2 * s.omega1(t) / (MU_B * 2.0))
        assert f.b2z(t) == pytest.approx(2 * s.omega2(t) / (MU_B * 1.5))
    zero = LabField(lambda t: 0.0, lambda t: 1e-3, 2.0, 2.0)
    w1, w2 = field_to_omega(zero)
    assert w1(1.0) == 0.0 and w2(1.0) == pytest.approx(MU_B * 1e-3)
    with pytest.raises(ZeroGFactor):
        omega_to_field(s, 0.0, 2.0)


def test_omega_to_field_zero_drive():
    from spindimer.schedules import FieldSchedule

    s = FieldSchedule(drives.ZERO, drives.sech(1.0, 1.0), None, None, DimerCouplings.special())
    f = omega_to_field(s, 2.0, 2.0)
    assert all(f.b1z(t) == 0.0 for t in np.linspace(0, 3, 7))


def test_field_roundtrip():
    f = LabField(lambda t: 1e-3 * math.sin(t), lambda t: 2e-3 * math.cos(t), 2.0023, 1.98)
    from spindimer.schedules import FieldSchedule

    w1, w2 = field_to_omega(f)
    back = omega_to_field(FieldSchedule(w1, w2, None, None, DimerCouplings()), f.g1zz, f.g2zz)
    for t in np.linspace(0, 6, 13):
        assert abs(back.b1z(t) - f.b1z(t)) <= 1e-12 * 1e-3
        assert abs(back.b2z(t) - f.b2z(t)) <= 1e-12 * 2e-3


def test_equal_g_equal_field_gives_equal_omega():
    f = LabField(lambda t: 0.5 * t, lambda t: 0.5 * t, 2.0, 2.0)
    assert all(f.omega1(t) == f.omega2(t) for t in np.linspace(0, 2, 5))


def test_equal_omega_check():
    ts = np.linspace(0, 5, 51)
    b = lambda t: 1e-2 * math.exp(-t)  # noqa: E731
    assert equal_omega_check(LabField(b, b, 2.0, 2.0), ts)
    assert equal_omega_check(LabField(lambda t: 2 * b(t), b, 1.0, 2.0), ts)
    assert not equal_omega_check(LabField(b, b, 2.0, 1.9), ts)


def test_homogeneous_field_infeasible():
    c = DimerCouplings.special(1.0)
    for pair in PAIRS:
        assert not homogeneous_field_feasible(c, pair, 2.0, 1.5)
    with pytest.raises(ZeroGFactor):
        homogeneous_field_feasible(c, ("S1", "S1"), 0.0, 1.0)
