"""Oracle-equivalence and invariant checks.

Each check compares a closed form against the brute-force integrator (or a
structural identity) and reports the worst error seen. ``run_checks("fast")``
is a quick smoke test; ``"full"`` adds randomized draws over couplings.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import drives
from .algebra import is_unitary, parity_operator
from .dimer import (
    MINUS,
    PLUS,
    DimerCouplings,
    assemble_propagator,
    build_hamiltonian,
    dimer_hamiltonian,
    sector_linear_hamiltonian,
    symmetry_u,
)
from .engine import (
    Propagator2,
    Scenario,
    SectorParams,
    scenario_omega_drive,
    scenario_propagator,
    scenario_rate,
    static_sector_propagator,
)
from .oracle import IntegrationConfig, integrate_propagator
from .schedules import closed_form_propagator, full_schedule, schedule_hamiltonian

# tight enough that the S2 phase (~sinh(10)/2 rad at gamma t = 10) stays accurate
ORACLE_CFG = IntegrationConfig(abs_tol=1e-11, rel_tol=1e-11)
SEED_ENV = "SPIN_DIMER_SEED"
DEFAULT_SEED = 20240


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_error: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.max_error <= self.tol)

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"{flag} {self.name}: max error {self.max_error:.3e} (tol {self.tol:.1e})"


def seed_from_env() -> int:
    raw = os.environ.get(SEED_ENV)
    return DEFAULT_SEED if raw in (None, "") else int(raw)


# --- individual comparisons -----------------------------------------------------------

def sector_oracle_error(scenario, p: SectorParams, gamma_t_max: float = 10.0, n_eval: int = 21,
                        cfg: IntegrationConfig = ORACLE_CFG) -> float:
    """Max entry error between closed-form and integrated 2x2 propagators."""
    scenario = Scenario.parse(scenario)
    h = sector_linear_hamiltonian(p, scenario_omega_drive(scenario, p))
    grid = np.linspace(0.0, gamma_t_max / scenario_rate(scenario, p), n_eval)
    traj = integrate_propagator(h, grid[-1], cfg, t_eval=grid, hbar=p.hbar)
    return max(
        float(np.max(np.abs(u - scenario_propagator(scenario, t, p).matrix())))
        for t, u in zip(grid, traj.y)
    )


def full_oracle_error(c: DimerCouplings, pair, gamma_plus_t_max: float = 10.0, n_eval: int = 21,
                      cfg: IntegrationConfig = ORACLE_CFG) -> float:
    """Max entry error of the assembled 4x4 propagator against integration.

    Time runs over gamma_+ t in [0, gamma_plus_t_max] with gamma_+ = 2|Gamma_+|/hbar.
    """
    s = full_schedule(c, pair)
    t_end = gamma_plus_t_max * c.hbar / (2.0 * abs(c.gamma(PLUS)))
    grid = np.linspace(0.0, t_end, n_eval)
    traj = integrate_propagator(schedule_hamiltonian(s), t_end, cfg, t_eval=grid, hbar=c.hbar)
    return max(
        float(np.max(np.abs(u - closed_form_propagator(s, t).matrix))) for t, u in zip(grid, traj.y)
    )


STATIC_TEST_DRIVES = {
    "sin": drives.sin(0.8, 1.3) + drives.constant(0.2),
    "gauss": drives.gauss(1.5, 0.7),
    "tanh": drives.tanh(-0.6, 2.0) + drives.cos(0.3, 0.5),
}


def static_oracle_error(c: DimerCouplings, omega: drives.Drive, t_end: float = 10.0, n_eval: int = 21,
                        cfg: IntegrationConfig = ORACLE_CFG) -> float:
    """Inner-block error when omega1 = omega2 = omega(t), against the static form."""
    grid = np.linspace(0.0, t_end, n_eval)
    traj = integrate_propagator(dimer_hamiltonian(c, omega, omega), t_end, cfg, t_eval=grid, hbar=c.hbar)
    err = 0.0
    for t, u in zip(grid, traj.y):
        inner = u[np.ix_((1, 2), (1, 2))]
        err = max(err, float(np.max(np.abs(inner - static_sector_propagator(t, c.gamma(MINUS), c.gzz, c.hbar)))))
    return err


def random_propagator2(rng: np.random.Generator, t: float) -> Propagator2:
    theta = rng.uniform(0.0, 0.5 * math.pi)
    pa, pb = rng.uniform(-math.pi, math.pi, 2)
    return Propagator2(math.cos(theta), math.sin(theta), pa, pb, t)


def assembly_error(rng: np.random.Generator, draws: int = 100) -> float:
    """assemble_propagator against U (E_+ (x) |+><+| + E_- (x) |-><-|) U."""
    u = symmetry_u()
    up, dn = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])
    err = 0.0
    for _ in range(draws):
        c = DimerCouplings(*rng.normal(size=5))
        t = rng.uniform(0.0, 5.0)
        pp, pm = random_propagator2(rng, t), random_propagator2(rng, t)
        zeta = c.gzz * t / c.hbar
        tilde_p = np.exp(-1j * zeta) * pp.matrix()
        tilde_m = np.exp(1j * zeta) * pm.matrix()
        brute = u @ (np.kron(tilde_p, up) + np.kron(tilde_m, dn)) @ u
        err = max(err, float(np.max(np.abs(assemble_propagator(pp, pm, c, t).matrix - brute))))
    return err


def invariant_error(rng: np.random.Generator, draws: int = 20) -> float:
    """Unitarity, parity commutation and block zeros of closed-form propagators."""
    par = parity_operator()
    zero_mask = np.array([[par[i, i] != par[j, j] for j in range(4)] for i in range(4)])
    err = 0.0
    pairs = [(a, b) for a in Scenario for b in Scenario]
    for k in range(draws):
        c = random_couplings(rng)
        s = full_schedule(c, pairs[k % 4])
        t = rng.uniform(0.0, 3.0)
        m = closed_form_propagator(s, t).matrix
        err = max(
            err,
            float(np.max(np.abs(m.conj().T @ m - np.eye(4)))),
            float(np.max(np.abs(m @ par - par @ m))),
            float(np.max(np.abs(m[zero_mask]))),
        )
        if not is_unitary(m, 1e-10):
            err = max(err, 1.0)
    return err


def hermiticity_error(rng: np.random.Generator, draws: int = 20) -> float:
    err = 0.0
    for _ in range(draws):
        c = DimerCouplings(*rng.normal(size=5))
        h = build_hamiltonian(c, *rng.normal(size=2))
        err = max(err, float(np.max(np.abs(h - h.conj().T))))
    return err


def random_couplings(rng: np.random.Generator) -> DimerCouplings:
    """Random complex Gamma_pm with 0.5 <= |Gamma_-|/|Gamma_+| <= 2.

    The ratio bound keeps the S2 window gamma_- t within 10 when
    gamma_+ t runs to 10, so the oracle cost stays bounded.
    """
    gp = rng.uniform(0.5, 2.0)
    gm = gp * rng.uniform(0.5, 2.0)
    a, b = rng.uniform(-math.pi, math.pi, 2)
    return DimerCouplings.from_sector_gammas(gp * np.exp(1j * a), gm * np.exp(1j * b), rng.uniform(-1.0, 1.0))


# --- suites ----------------------------------------------------------------------------

def _fast_checks(rng) -> list[tuple[str, Callable[[], float], float]]:
    special = DimerCouplings.special(1.0, gzz=0.3)
    return [
        ("hamiltonian_hermitian", lambda: hermiticity_error(rng), 1e-14),
        ("assembly_vs_conjugation", lambda: assembly_error(rng), 1e-13),
        ("closed_form_invariants", lambda: invariant_error(rng), 1e-10),
        ("sector_S1_oracle", lambda: sector_oracle_error("S1", SectorParams(1.3, 0.4)), 1e-6),
        ("sector_S2_oracle", lambda: sector_oracle_error("S2", SectorParams(0.8, -1.1)), 1e-6),
        ("full_S1_S1_oracle", lambda: full_oracle_error(special, ("S1", "S1")), 1e-6),
        ("static_sector_oracle", lambda: static_oracle_error(special, STATIC_TEST_DRIVES["sin"]), 1e-6),
    ]


def _full_checks(rng, draws: int) -> list[tuple[str, Callable[[], float], float]]:
    checks = []
    for scen in Scenario:
        gammas = rng.uniform(0.1, 5.0, draws)
        phases = rng.uniform(-math.pi, math.pi, draws)
        checks.append((
            f"sector_{scen.value}_random_{draws}",
            lambda scen=scen, g=gammas, ph=phases: max(
                sector_oracle_error(scen, SectorParams(gi, pi)) for gi, pi in zip(g, ph)
            ),
            1e-6,
        ))
    for pair in [(a, b) for a in Scenario for b in Scenario]:
        cs = [random_couplings(rng) for _ in range(draws)]
        checks.append((
            f"full_{pair[0].value}_{pair[1].value}_random_{draws}",
            lambda pair=pair, cs=cs: max(full_oracle_error(c, pair, n_eval=6) for c in cs),
            1e-6,
        ))
    special = DimerCouplings.special(1.0, gzz=0.3)
    for name, drv in STATIC_TEST_DRIVES.items():
        checks.append((f"static_{name}", lambda drv=drv: static_oracle_error(special, drv), 1e-6))
    return checks


def run_checks(level: str = "fast", seed: int | None = None, draws: int = 20,
               report: Callable[[str], None] | None = None) -> list[CheckResult]:
    if level not in ("fast", "full"):
        raise ValueError("level must be fast or full")
    rng = np.random.default_rng(seed_from_env() if seed is None else seed)
    checks = _fast_checks(rng)
    if level == "full":
        checks += _full_checks(rng, draws)
    results = []
    for name, fn, tol in checks:
        try:
            err = fn()
        except Exception as exc:  # noqa: BLE001 - a crash is a failed check
            err = math.inf
            if report:
                report(f"ERROR {name}: {type(exc).__name__}: {exc}")
        res = CheckResult(name, err, tol)
        results.append(res)
        if report:
            report(res.line())
    return results


__all__ = [
    "CheckResult",
    "ORACLE_CFG",
    "STATIC_TEST_DRIVES",
    "assembly_error",
    "full_oracle_error",
    "invariant_error",
    "random_couplings",
    "run_checks",
    "sector_oracle_error",
    "static_oracle_error",
]
