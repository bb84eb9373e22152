"""Brute-force integration of the time-dependent Schrodinger equation.

This is the independent ground truth for every closed form in the package.
It knows nothing about sectors, scenarios or the symmetry transformation:
it only sees a Hamiltonian ``H(t)`` and integrates ``i hbar dy/dt = H(t) y``
with classic fourth-order Runge-Kutta and step doubling.

Two backends implement the same stepper. A compiled kernel handles
:class:`LinearHamiltonian` inputs whose drives are closed-form
:class:`~spindimer.drives.Drive` objects; everything else (and everything,
when the extension is not built) runs on the pure-Python reference. Set
``SPIN_DIMER_PURE=1`` to force the reference backend.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from ..drives import Drive
from ..errors import NonHermitian, StepLimitExceeded, ToleranceUnreachable
from . import _reference

try:
    from . import _native
except ImportError:  # extension not built
    _native = None

__all__ = [
    "IntegrationConfig",
    "LinearHamiltonian",
    "Trajectory",
    "integrate_state",
    "integrate_propagator",
    "native_available",
    "active_backend",
]


def native_available() -> bool:
    return _native is not None


def _pure_forced() -> bool:
    return os.environ.get("SPIN_DIMER_PURE", "") not in ("", "0")


def active_backend() -> str:
    return "native" if native_available() and not _pure_forced() else "python"


@dataclass(frozen=True)
class IntegrationConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    initial_step: float = 1e-3
    max_steps: int = 50_000_000
    adaptive: bool = True

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if not self.initial_step > 0:
            raise ValueError("initial_step must be positive")
        if self.max_steps <= 0:
            raise ValueError("max_steps must be positive")


@dataclass(frozen=True)
class LinearHamiltonian:
    """``H(t) = static + sum_k coefficient_k(t) * matrix_k``.

    When every coefficient is a :class:`~spindimer.drives.Drive` the compiled
    kernel can evaluate H(t) natively.
    """

    static: np.ndarray
    terms: tuple = field(default=())

    def __post_init__(self):
        static = np.array(self.static, dtype=complex)
        object.__setattr__(self, "static", static)
        object.__setattr__(
            self, "terms", tuple((coef, np.array(m, dtype=complex)) for coef, m in self.terms)
        )

    @property
    def dim(self) -> int:
        return self.static.shape[0]

    def __call__(self, t: float) -> np.ndarray:
        h = self.static.copy()
        for coef, m in self.terms:
            h += coef(t) * m
        return h

    @property
    def native_ok(self) -> bool:
        return all(isinstance(coef, Drive) for coef, _ in self.terms)

    def kernel_tables(self):
        n = self.dim
        mats = np.zeros((len(self.terms), n, n), dtype=complex)
        shapes, amps, rates, owners = [], [], [], []
        for k, (coef, m) in enumerate(self.terms):
            mats[k] = m
            s, a, r = coef.table()
            shapes += s
            amps += a
            rates += r
            owners += [k] * len(s)
        return (
            np.ascontiguousarray(self.static.ravel()),
            np.ascontiguousarray(mats.ravel()),
            np.array(shapes, dtype=np.intc),
            np.array(amps, dtype=float),
            np.array(rates, dtype=float),
            np.array(owners, dtype=np.intc),
            len(self.terms),
        )


@dataclass(frozen=True)
class Trajectory:
    """Integrated values ``y[k]`` at times ``t[k]``."""

    t: np.ndarray
    y: np.ndarray
    steps: int
    norm_drift: float
    backend: str

    @property
    def final(self) -> np.ndarray:
        return self.y[-1]


def _check_hermitian(h, t_end: float, dim: int) -> None:
    probes = [0.0, t_end]
    if t_end > 0:
        rng = np.random.default_rng(0x5D)
        probes += list(rng.uniform(0.0, t_end, 8))
    for t in probes:
        m = np.asarray(h(t), dtype=complex)
        if m.shape != (dim, dim):
            raise ValueError(f"Hamiltonian has shape {m.shape}, expected {(dim, dim)}")
        if np.max(np.abs(m - m.conj().T)) > 1e-12 * max(1.0, np.max(np.abs(m))):
            raise NonHermitian(f"Hamiltonian not Hermitian at t={t!r}")


def _time_grid(t_end, t_eval):
    if t_eval is None:
        grid = np.array([float(t_end)])
    else:
        grid = np.asarray(t_eval, dtype=float).ravel()
        if grid.size == 0 or np.any(np.diff(grid) < 0) or grid[0] < 0:
            raise ValueError("t_eval must be non-empty, sorted and non-negative")
    return np.ascontiguousarray(grid)


def _run(h, y0, grid, hbar, cfg):
    backend = active_backend()
    use_native = backend == "native" and isinstance(h, LinearHamiltonian) and h.native_ok
    n = y0.shape[0]
    m = 1 if y0.ndim == 1 else y0.shape[1]
    if use_native:
        h0, mats, shapes, amps, rates, owners, nmat = h.kernel_tables()
        ys, steps, status, t_fail = _native.integrate_linear(
            h0, mats, shapes, amps, rates, owners, nmat,
            np.ascontiguousarray(y0.reshape(-1), dtype=complex), n, m, grid,
            float(hbar), cfg.abs_tol, cfg.rel_tol, cfg.initial_step, cfg.max_steps, cfg.adaptive,
        )
        ys = ys.reshape((len(grid),) + y0.shape)
        backend = "native"
    else:
        ys, steps, status, t_fail = _reference.integrate(
            h, y0, grid, hbar, cfg.abs_tol, cfg.rel_tol, cfg.initial_step, cfg.max_steps, cfg.adaptive
        )
        backend = "python"
    if status == _reference.STEP_LIMIT:
        raise StepLimitExceeded(f"more than {cfg.max_steps} steps before t={t_fail!r}", t=t_fail)
    if status == _reference.TOL_UNREACHABLE:
        raise ToleranceUnreachable(f"step size underflow at t={t_fail!r}", t=t_fail)
    return ys, int(steps), backend


def integrate_state(h, state0, t_end: float, cfg: IntegrationConfig | None = None, *,
                    t_eval=None, hbar: float = 1.0) -> Trajectory:
    """Evolve ``state0`` from t = 0 under ``h`` (a LinearHamiltonian or any callable)."""
    cfg = cfg or IntegrationConfig()
    psi0 = np.array(state0, dtype=complex)
    if abs(np.vdot(psi0, psi0).real - 1.0) > 1e-9:
        raise ValueError("initial state must be normalized")
    grid = _time_grid(t_end, t_eval)
    _check_hermitian(h, float(grid[-1]), psi0.shape[0])
    ys, steps, backend = _run(h, psi0, grid, hbar, cfg)
    drift = float(np.max(np.abs(np.einsum("ki,ki->k", ys.conj(), ys).real - 1.0)))
    return Trajectory(grid, ys, steps, drift, backend)


def integrate_propagator(h, t_end: float, cfg: IntegrationConfig | None = None, *,
                         t_eval=None, hbar: float = 1.0, dim: int | None = None) -> Trajectory:
    """Propagator U(t) with U(0) = identity."""
    cfg = cfg or IntegrationConfig()
    grid = _time_grid(t_end, t_eval)
    n = dim or np.asarray(h(0.0)).shape[0]
    _check_hermitian(h, float(grid[-1]), n)
    ys, steps, backend = _run(h, np.eye(n, dtype=complex), grid, hbar, cfg)
    eye = np.eye(n)
    drift = max(float(np.max(np.abs(u.conj().T @ u - eye))) for u in ys)
    return Trajectory(grid, ys, steps, drift, backend)
