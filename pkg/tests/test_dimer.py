import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from spindimer import drives
from spindimer.algebra import BASIS_LABELS, basis_state, parity_operator, pauli
from spindimer.dimer import (
    MINUS,
    PLUS,
    DimerCouplings,
    Propagator4,
    assemble_propagator,
    build_hamiltonian,
    commutes_with_parity,
    conjugated_blocks,
    dimer_hamiltonian,
    evolve,
    sector_gamma,
    sector_hamiltonian,
    static_full_propagator,
    symmetry_u,
)
from spindimer.engine import Propagator2, SectorParams, scenario_propagator, static_phase
from spindimer.errors import TimeMismatch
from spindimer.oracle import integrate_propagator
from spindimer.verify import ORACLE_CFG, STATIC_TEST_DRIVES, assembly_error, random_propagator2

from conftest import random_state

reals = st.floats(-3, 3, allow_nan=False)
ZZ = np.kron(np.diag([1, -1]), np.diag([1, -1]))
OFF_BLOCK = [(0, 1), (0, 2), (1, 0), (1, 3), (2, 0), (2, 3), (3, 1), (3, 2)]


def test_couplings_validation():
    with pytest.raises(ValueError):
        DimerCouplings(hbar=0.0)
    with pytest.raises(ValueError):
        DimerCouplings(gxx=math.nan)


def test_hamiltonian_examples():
    assert np.all(build_hamiltonian(DimerCouplings(), 0.0, 0.0) == 0)
    h = build_hamiltonian(DimerCouplings(gzz=0.7), 0.0, 0.0)
    assert np.allclose(h, np.diag([0.7, -0.7, -0.7, 0.7]), atol=0)


@given(reals, reals, reals, reals, reals, reals, reals)
def test_hamiltonian_hermitian_and_parity(gxx, gyy, gzz, gxy, gyx, w1, w2):
    h = build_hamiltonian(DimerCouplings(gxx, gyy, gzz, gxy, gyx), w1, w2)
    assert np.max(np.abs(h - h.conj().T)) <= 1e-14
    assert commutes_with_parity(h, 1e-14)


def test_symmetry_u():
    u = symmetry_u()
    assert np.array_equal(u @ u, np.eye(4))
    assert np.array_equal(u, u.conj().T)
    perm = np.eye(4)[[0, 1, 3, 2]]
    assert np.array_equal(u, perm)
    assert np.array_equal(u @ ZZ @ u, pauli("z", 2))


def test_sector_gamma_examples():
    c = DimerCouplings.special(1.3)
    assert abs(sector_gamma(c, PLUS)) == pytest.approx(1.3, abs=1e-15)
    assert abs(sector_gamma(c, MINUS)) == pytest.approx(2.6, abs=1e-15)
    iso = DimerCouplings(gxx=0.4, gyy=0.4)
    assert sector_gamma(iso, PLUS) == 0 and sector_gamma(iso, MINUS) == 0.8
    # antisymmetric xy couplings: Gamma_pm = -i(+-D - D)
    dm = DimerCouplings(gxy=0.5, gyx=-0.5)
    assert sector_gamma(dm, PLUS) == 0 and sector_gamma(dm, MINUS) == 1j
    with pytest.raises(ValueError):
        sector_gamma(dm, 0)


def test_from_sector_gammas_roundtrip(rng):
    for _ in range(20):
        gp, gm = rng.normal(size=2) + 1j * rng.normal(size=2)
        c = DimerCouplings.from_sector_gammas(gp, gm)
        assert abs(c.gamma(PLUS) - gp) < 1e-15 and abs(c.gamma(MINUS) - gm) < 1e-15
    real = DimerCouplings.special_real(0.9)
    assert real.gamma(PLUS) == pytest.approx(0.9, abs=1e-15)
    assert real.gamma(MINUS) == pytest.approx(1.8, abs=1e-15)


def test_sector_blocks_match_conjugation(rng):
    worst = 0.0
    for _ in range(100):
        c = DimerCouplings(*rng.normal(size=5), hbar=rng.uniform(0.5, 2))
        w1, w2 = rng.normal(size=2)
        plus, minus = conjugated_blocks(build_hamiltonian(c, w1, w2))
        worst = max(worst, np.max(np.abs(plus - sector_hamiltonian(c, w1, w2, PLUS))),
                    np.max(np.abs(minus - sector_hamiltonian(c, w1, w2, MINUS))))
    assert worst <= 1e-13


def test_sector_hamiltonian_examples():
    c = DimerCouplings.special(1.0, 0.2)
    assert sector_hamiltonian(c, 0.8, 0.8, MINUS)[0, 0] == pytest.approx(-0.2, abs=1e-15)
    free = sector_hamiltonian(DimerCouplings(hbar=2.0), 0.3, 0.1, PLUS)
    assert np.allclose(free, np.diag([0.8, -0.8]), atol=1e-15)


def test_assemble_identity():
    ident = Propagator2.identity(0.0)
    u = assemble_propagator(ident, ident, DimerCouplings.special(1.0, 0.5), 0.0)
    assert np.allclose(u.matrix, np.eye(4), atol=1e-15)


def test_assembly_against_conjugation(rng):
    assert assembly_error(rng, draws=100) <= 1e-13


def test_assembled_unitary_and_sparse(rng):
    for _ in range(50):
        c = DimerCouplings(*rng.normal(size=5))
        t = rng.uniform(0, 4)
        u = assemble_propagator(random_propagator2(rng, t), random_propagator2(rng, t), c, t)
        assert np.max(np.abs(u.matrix.conj().T @ u.matrix - np.eye(4))) <= 1e-12
        assert all(u.matrix[i, j] == 0 for i, j in OFF_BLOCK)
        assert commutes_with_parity(u.matrix)


def test_time_mismatch():
    c = DimerCouplings.special()
    with pytest.raises(TimeMismatch):
        assemble_propagator(Propagator2.identity(1.0), Propagator2.identity(2.0), c, 1.0)
    with pytest.raises(TimeMismatch):
        static_full_propagator(c, Propagator2.identity(1.0), 2.0)


def test_propagator4_immutable_and_unitary():
    u = Propagator4(np.eye(4), 0.0, "oracle")
    with pytest.raises(ValueError):
        u.matrix[0, 0] = 2.0
    with pytest.raises(ValueError):
        Propagator4(2 * np.eye(4), 0.0, "oracle")


def test_evolve_examples():
    c = DimerCouplings.special(1.0, 0.4)
    t = 0.9
    zeta = c.gzz * t / c.hbar
    pp = scenario_propagator("S1", t, c.sector_params(PLUS))
    pm = scenario_propagator("S2", t, c.sector_params(MINUS))
    u = assemble_propagator(pp, pm, c, t)
    out = evolve(basis_state("++"), u)
    expected = [pp.a_abs * np.exp(1j * (pp.phi_a - zeta)), 0, 0, -pp.b_abs * np.exp(-1j * (pp.phi_b + zeta))]
    assert np.allclose(out, expected, atol=1e-15)
    out = evolve(basis_state("-+"), u)
    expected = [0, pm.b_abs * np.exp(1j * (pm.phi_b + zeta)), pm.a_abs * np.exp(-1j * (pm.phi_a - zeta)), 0]
    assert np.allclose(out, expected, atol=1e-15)
    with pytest.raises(ValueError):
        evolve([1, 1, 0, 0], u)


def test_evolve_norm_and_parity(rng):
    c = DimerCouplings.special(0.7, -0.3)
    t = 2.2
    u = assemble_propagator(scenario_propagator("S2", t, c.sector_params(PLUS)),
                            scenario_propagator("S1", t, c.sector_params(MINUS)), c, t)
    par = parity_operator()
    for _ in range(10):
        psi = random_state(rng, 4)
        out = evolve(psi, u)
        assert abs(np.vdot(out, out).real - 1) <= 1e-12
        assert abs(np.vdot(out, par @ out) - np.vdot(psi, par @ psi)) <= 1e-10


def test_gzz_phase_sign_against_oracle():
    """Sector +1 picks up exp(-i gzz t/hbar), sector -1 exp(+i gzz t/hbar)."""
    c = DimerCouplings(gzz=0.8)
    h = dimer_hamiltonian(c, drives.ZERO, drives.ZERO)
    t = 1.3
    u = integrate_propagator(h, t, ORACLE_CFG).final
    ident = Propagator2.identity(t)
    closed = assemble_propagator(ident, ident, c, t).matrix
    assert np.max(np.abs(u - closed)) <= 1e-9
    assert u[0, 0] == pytest.approx(np.exp(-0.8j * t))


def test_static_full_examples(rng):
    c = DimerCouplings(0.6, 0.2, 0.3, -0.4, 0.1)
    u0 = static_full_propagator(c, Propagator2.identity(0.0), 0.0)
    assert np.allclose(u0.matrix, np.eye(4), atol=1e-15)
    p1 = scenario_propagator("S1", 1.5, c.sector_params(PLUS))
    p2 = scenario_propagator("S2", 1.5, c.sector_params(PLUS))
    a = static_full_propagator(c, p1, 1.5).sector_block(MINUS)
    b = static_full_propagator(c, p2, 1.5).sector_block(MINUS)
    assert np.array_equal(a, b)


def test_static_phase_branch():
    c = DimerCouplings(0.6, 0.2, 0.0, -0.4, 0.1)
    ours = static_phase(c.gamma(MINUS))
    literal = math.atan2(c.gxx + c.gyy, c.gyx - c.gxy)
    assert math.remainder(ours - literal - math.pi, 2 * math.pi) == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("name", sorted(STATIC_TEST_DRIVES))
def test_static_full_against_oracle(name):
    c = DimerCouplings(0.6, 0.2, 0.3, -0.4, 0.1)
    drv = STATIC_TEST_DRIVES[name]
    t = 6.0
    u = integrate_propagator(dimer_hamiltonian(c, drv, drv), t, ORACLE_CFG).final
    inner = u[np.ix_((1, 2), (1, 2))]
    closed = static_full_propagator(c, Propagator2.identity(t), t).sector_block(MINUS)
    assert np.max(np.abs(inner - closed)) <= 1e-6


def test_basis_order():
    assert BASIS_LABELS == ("++", "+-", "-+", "--")
