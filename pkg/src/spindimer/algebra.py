"""Dense complex linear algebra for the two-spin problem.

Everything here lives in dimension 2 or 4. States and operators are plain
``numpy`` arrays of dtype ``complex128``.

Basis convention
----------------
Four-component objects are always expressed in the ordered product basis::

    index 0: |++>    index 1: |+->    index 2: |-+>    index 3: |-->

where the first sign is the sigma^z eigenvalue of spin 1 and the second the
one of spin 2. ``kron(a, b)`` places ``a`` on spin 1, so this ordering is the
natural row-major tensor ordering. All other modules rely on it.
"""

from __future__ import annotations

import numpy as np

from .errors import NonHermitian

BASIS_LABELS = ("++", "+-", "-+", "--")

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

_SIGMA = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}


def kron(a, b):
    """Tensor product with ``a`` acting on spin 1 and ``b`` on spin 2."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise ValueError("kron expects two 2x2 matrices")
    return np.kron(a, b)


def sigma(axis: str) -> np.ndarray:
    try:
        return _SIGMA[axis].copy()
    except KeyError:
        raise ValueError(f"unknown axis {axis!r}") from None


def pauli(axis: str, site: int) -> np.ndarray:
    """Pauli matrix ``axis`` on ``site`` (1 or 2), identity on the other spin."""
    s = sigma(axis)
    if site == 1:
        return kron(s, I2)
    if site == 2:
        return kron(I2, s)
    raise ValueError(f"site must be 1 or 2, got {site!r}")


def pauli_pair(axis1: str, axis2: str) -> np.ndarray:
    """``sigma_1^{axis1} sigma_2^{axis2}``."""
    return kron(sigma(axis1), sigma(axis2))


def spin_component(axis: str, hbar: float = 1.0) -> np.ndarray:
    """Collective spin component S^a = (hbar/2)(sigma_1^a + sigma_2^a)."""
    return 0.5 * hbar * (pauli(axis, 1) + pauli(axis, 2))


def total_spin_squared(hbar: float = 1.0) -> np.ndarray:
    """S^2 = (S_1 + S_2)^2 assembled from the Pauli constructors."""
    out = np.zeros((4, 4), dtype=complex)
    for axis in "xyz":
        s = spin_component(axis, hbar)
        out += s @ s
    return out


def parity_operator() -> np.ndarray:
    """sigma_1^z sigma_2^z, the conserved parity."""
    return pauli_pair("z", "z")


def is_unitary(m, tol: float) -> bool:
    if tol <= 0:
        raise ValueError("tol must be positive")
    m = np.asarray(m, dtype=complex)
    n = m.shape[0]
    return bool(np.max(np.abs(m.conj().T @ m - np.eye(n))) <= tol)


def is_hermitian(m, tol: float = 1e-12) -> bool:
    m = np.asarray(m, dtype=complex)
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def expectation(state, obs, *, herm_tol: float = 1e-12, imag_tol: float = 1e-10) -> float:
    """<state|obs|state> for a Hermitian ``obs``; returns the real part.

    Raises NonHermitian when ``obs`` fails the symmetry check, and
    ArithmeticError if the imaginary part exceeds ``imag_tol``.
    """
    obs = np.asarray(obs, dtype=complex)
    if not is_hermitian(obs, herm_tol):
        raise NonHermitian("observable is not Hermitian within tolerance")
    psi = np.asarray(state, dtype=complex)
    value = np.vdot(psi, obs @ psi)
    if abs(value.imag) > imag_tol:
        raise ArithmeticError(f"expectation has imaginary part {value.imag:.3e}")
    return float(value.real)


def norm_squared(state) -> float:
    psi = np.asarray(state, dtype=complex)
    return float(np.vdot(psi, psi).real)


def is_normalized(state, tol: float = 1e-12) -> bool:
    return abs(norm_squared(state) - 1.0) <= tol


def basis_state(label: str) -> np.ndarray:
    """Product state such as ``"+-"`` in the ordered basis."""
    out = np.zeros(4, dtype=complex)
    out[BASIS_LABELS.index(label)] = 1.0
    return out


_R2 = 1.0 / np.sqrt(2.0)

BELL_STATES = {
    "phi_plus": np.array([_R2, 0, 0, _R2], dtype=complex),
    "phi_minus": np.array([_R2, 0, 0, -_R2], dtype=complex),
    "psi_plus": np.array([0, _R2, _R2, 0], dtype=complex),
    "psi_minus": np.array([0, _R2, -_R2, 0], dtype=complex),
}


def bell_state(which: str) -> np.ndarray:
    key = which.lower().replace("+", "_plus").replace("-", "_minus").replace("__", "_")
    aliases = {"Φ⁺": "phi_plus", "Φ⁻": "phi_minus", "Ψ⁺": "psi_plus", "Ψ⁻": "psi_minus"}
    key = aliases.get(which, key)
    try:
        return BELL_STATES[key].copy()
    except KeyError:
        raise ValueError(f"unknown Bell state {which!r}") from None
