"""Two coupled spins: Hamiltonian, parity sectors and the full propagator.

Basis order is |++>, |+->, |-+>, |-->. The parity sigma1z sigma2z splits the
space into sector +1 (slots 0 and 3) and sector -1 (slots 1 and 2). In each
sector the dynamics is that of one fictitious spin 1/2::

    H_pm = +-gamma_zz + [[Omega_pm, Gamma_pm], [Gamma_pm*, -Omega_pm]]

with Omega_pm = hbar (omega1 +- omega2) and
Gamma_pm = (gxx -+ gyy) - i (+-gxy + gyx).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import drives
from .algebra import I2, SIGMA_Z, is_unitary, pauli, pauli_pair, parity_operator
from .engine import Propagator2, SectorParams, static_sector_propagator
from .errors import TimeMismatch
from .oracle import LinearHamiltonian

PLUS, MINUS = 1, -1
# basis slots occupied by each sector, in (upper, lower) order
SECTOR_SLOTS = {PLUS: (0, 3), MINUS: (1, 2)}

_UNITARY_TOL = 1e-10


def _check_sector(sector: int) -> int:
    if sector not in (PLUS, MINUS):
        raise ValueError(f"sector must be +1 or -1, got {sector!r}")
    return sector


@dataclass(frozen=True)
class DimerCouplings:
    gxx: float = 0.0
    gyy: float = 0.0
    gzz: float = 0.0
    gxy: float = 0.0
    gyx: float = 0.0
    hbar: float = 1.0

    def __post_init__(self):
        vals = (self.gxx, self.gyy, self.gzz, self.gxy, self.gyx, self.hbar)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("couplings must be finite")
        if not self.hbar > 0:
            raise ValueError("hbar must be positive")

    @classmethod
    def special(cls, c: float = 1.0, gzz: float = 0.0, hbar: float = 1.0) -> "DimerCouplings":
        """gxx = gyy = c, gxy = gyx = c/2: |Gamma_+| = c, |Gamma_-| = 2c."""
        return cls(c, c, gzz, 0.5 * c, 0.5 * c, hbar)

    @classmethod
    def special_real(cls, c: float = 1.0, gzz: float = 0.0, hbar: float = 1.0) -> "DimerCouplings":
        """Same sector moduli as :meth:`special` but with real Gamma_+ = c, Gamma_- = 2c."""
        return cls(1.5 * c, 0.5 * c, gzz, 0.0, 0.0, hbar)

    @classmethod
    def from_sector_gammas(cls, gamma_plus: complex, gamma_minus: complex, gzz: float = 0.0,
                           hbar: float = 1.0) -> "DimerCouplings":
        """Invert Gamma_pm = (gxx -+ gyy) - i(+-gxy + gyx)."""
        gp, gm = complex(gamma_plus), complex(gamma_minus)
        return cls(
            0.5 * (gp.real + gm.real),
            0.5 * (gm.real - gp.real),
            gzz,
            0.5 * (gm.imag - gp.imag),
            -0.5 * (gp.imag + gm.imag),
            hbar,
        )

    def gamma(self, sector: int) -> complex:
        return sector_gamma(self, sector)

    def sector_params(self, sector: int) -> SectorParams:
        return SectorParams.from_complex(self.gamma(sector), self.hbar)


@dataclass(frozen=True)
class Propagator4:
    matrix: np.ndarray
    t: float
    provenance: str

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError("Propagator4 needs a 4x4 matrix")
        if not is_unitary(m, _UNITARY_TOL):
            raise ValueError("Propagator4 matrix is not unitary")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def sector_block(self, sector: int) -> np.ndarray:
        i, j = SECTOR_SLOTS[_check_sector(sector)]
        return self.matrix[np.ix_((i, j), (i, j))]


# --- operators ---------------------------------------------------------------

_SZ1, _SZ2 = pauli("z", 1), pauli("z", 2)
_COUPLING_OPS = {
    "gxx": pauli_pair("x", "x"),
    "gyy": pauli_pair("y", "y"),
    "gzz": pauli_pair("z", "z"),
    "gxy": pauli_pair("x", "y"),
    "gyx": pauli_pair("y", "x"),
}


def coupling_part(c: DimerCouplings) -> np.ndarray:
    """The field-independent part of the Hamiltonian."""
    return sum(getattr(c, name) * op for name, op in _COUPLING_OPS.items())


def build_hamiltonian(c: DimerCouplings, omega1: float, omega2: float) -> np.ndarray:
    return c.hbar * omega1 * _SZ1 + c.hbar * omega2 * _SZ2 + coupling_part(c)


def symmetry_u() -> np.ndarray:
    """(1 + s1z + s2x - s1z s2x) / 2: involutory, swaps |-+> and |-->."""
    return 0.5 * (np.eye(4) + _SZ1 + pauli("x", 2) - _SZ1 @ pauli("x", 2))


def sector_gamma(c: DimerCouplings, sector: int) -> complex:
    s = _check_sector(sector)
    return complex(c.gxx - s * c.gyy, -(s * c.gxy + c.gyx))


def sector_hamiltonian(c: DimerCouplings, omega1: float, omega2: float, sector: int) -> np.ndarray:
    s = _check_sector(sector)
    big_omega = c.hbar * (omega1 + s * omega2)
    g = sector_gamma(c, s)
    return s * c.gzz * I2 + np.array([[big_omega, g], [g.conjugate(), -big_omega]], dtype=complex)


def conjugated_blocks(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Blocks of U h U on sigma2z = +1 and sigma2z = -1, by explicit matrix algebra."""
    u = symmetry_u()
    hu = u @ h @ u
    return hu[np.ix_((0, 2), (0, 2))], hu[np.ix_((1, 3), (1, 3))]


# --- assembly ------------------------------------------------------------------

def _embed(block_plus: np.ndarray, block_minus: np.ndarray) -> np.ndarray:
    m = np.zeros((4, 4), dtype=complex)
    for s, blk in ((PLUS, block_plus), (MINUS, block_minus)):
        i, j = SECTOR_SLOTS[s]
        m[i, i], m[i, j] = blk[0, 0], blk[0, 1]
        m[j, i], m[j, j] = blk[1, 0], blk[1, 1]
    return m


def _phased_block(p: Propagator2, zeta: float, sign: int) -> np.ndarray:
    """Sector block with phases Phi = phi - sign*zeta, Phi' = phi + sign*zeta."""
    big_a = p.phi_a - sign * zeta
    big_a_p = p.phi_a + sign * zeta
    big_b = p.phi_b - sign * zeta
    big_b_p = p.phi_b + sign * zeta
    return np.array(
        [
            [p.a_abs * cmath.exp(1j * big_a), p.b_abs * cmath.exp(1j * big_b)],
            [-p.b_abs * cmath.exp(-1j * big_b_p), p.a_abs * cmath.exp(-1j * big_a_p)],
        ],
        dtype=complex,
    )


def assemble_propagator(p_plus: Propagator2, p_minus: Propagator2, c: DimerCouplings, t: float,
                        provenance: str = "closed-form") -> Propagator4:
    """Full propagator from the two sector propagators.

    Sector +- evolves under +-gamma_zz + H'_pm, so its block is
    exp(-+i gamma_zz t / hbar) E_pm; the scalar phase is attached here.
    """
    for p in (p_plus, p_minus):
        if p.t is not None and not math.isclose(p.t, t, rel_tol=1e-15, abs_tol=1e-15):
            raise TimeMismatch(f"sector propagator at t={p.t!r}, assembling at t={t!r}")
    zeta = c.gzz * t / c.hbar
    m = _embed(_phased_block(p_plus, zeta, PLUS), _phased_block(p_minus, zeta, MINUS))
    return Propagator4(m, t, provenance)


def static_full_propagator(c: DimerCouplings, p_plus: Propagator2, t: float) -> Propagator4:
    """Full propagator when omega1(t) = omega2(t); sector -1 is time independent."""
    if p_plus.t is not None and not math.isclose(p_plus.t, t, rel_tol=1e-15, abs_tol=1e-15):
        raise TimeMismatch(f"sector propagator at t={p_plus.t!r}, assembling at t={t!r}")
    zeta = c.gzz * t / c.hbar
    inner = static_sector_propagator(t, sector_gamma(c, MINUS), c.gzz, c.hbar)
    m = _embed(_phased_block(p_plus, zeta, PLUS), inner)
    return Propagator4(m, t, "static")


def evolve(state0, u: Propagator4) -> np.ndarray:
    psi = np.asarray(state0, dtype=complex)
    if abs(np.vdot(psi, psi).real - 1.0) > 1e-9:
        raise ValueError("initial state must be normalized")
    return u.matrix @ psi


def commutes_with_parity(m: np.ndarray, tol: float = 1e-12) -> bool:
    p = parity_operator()
    return bool(np.max(np.abs(m @ p - p @ m)) <= tol)


# --- Hamiltonians for the integrator ------------------------------------------------

def dimer_hamiltonian(c: DimerCouplings, omega1: drives.Drive, omega2: drives.Drive) -> LinearHamiltonian:
    """Time-dependent 4x4 H(t) for drives omega1(t), omega2(t) (angular frequencies)."""
    return LinearHamiltonian(
        coupling_part(c),
        ((omega1 * c.hbar, _SZ1), (omega2 * c.hbar, _SZ2)),
    )


def sector_linear_hamiltonian(p: SectorParams, big_omega: drives.Drive, offset: float = 0.0) -> LinearHamiltonian:
    """2x2 H(t) = offset + [[Omega(t), Gamma], [Gamma*, -Omega(t)]]."""
    g = p.gamma
    static = offset * I2 + np.array([[0.0, g], [g.conjugate(), 0.0]], dtype=complex)
    return LinearHamiltonian(static, ((big_omega, SIGMA_Z),))


__all__ = [
    "PLUS",
    "MINUS",
    "SECTOR_SLOTS",
    "DimerCouplings",
    "Propagator4",
    "build_hamiltonian",
    "symmetry_u",
    "sector_gamma",
    "sector_hamiltonian",
    "conjugated_blocks",
    "assemble_propagator",
    "static_full_propagator",
    "evolve",
    "commutes_with_parity",
    "dimer_hamiltonian",
    "sector_linear_hamiltonian",
    "coupling_part",
]
