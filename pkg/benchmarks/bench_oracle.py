"""Compare the compiled and pure-Python integration kernels.

    python3 benchmarks/bench_oracle.py [--repeat N]

Each case integrates the same Hamiltonian with both backends, checks that the
results agree, and reports wall time, step count and speed-up.
"""

from __future__ import annotations

import argparse
import os
import time

import numpy as np

from spindimer.dimer import DimerCouplings, PLUS, sector_linear_hamiltonian
from spindimer.engine import SectorParams, scenario_omega_drive
from spindimer.oracle import IntegrationConfig, integrate_propagator, native_available
from spindimer.schedules import full_schedule, schedule_hamiltonian


def _cases():
    p = SectorParams(1.0)
    yield "sector S1, gamma t = 10", sector_linear_hamiltonian(p, scenario_omega_drive("S1", p)), 5.0
    yield "sector S2, gamma t = 6", sector_linear_hamiltonian(p, scenario_omega_drive("S2", p)), 6.0
    c = DimerCouplings.special(1.0, gzz=0.3)
    t_end = 10.0 / (2.0 * abs(c.gamma(PLUS)))
    yield "dimer (S1,S1), gamma+ t = 10", schedule_hamiltonian(full_schedule(c, ("S1", "S1"))), t_end
    yield "dimer (S2,S1), gamma+ t = 10", schedule_hamiltonian(full_schedule(c, ("S2", "S1"))), t_end


def _time(h, t_end, cfg, pure: bool, repeat: int):
    os.environ["SPIN_DIMER_PURE"] = "1" if pure else "0"
    best, traj = np.inf, None
    for _ in range(repeat):
        start = time.perf_counter()
        traj = integrate_propagator(h, t_end, cfg)
        best = min(best, time.perf_counter() - start)
    return best, traj


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if not native_available():
        raise SystemExit("compiled kernel not built; run `pip install -e . --no-build-isolation`")
    cfg = IntegrationConfig(abs_tol=1e-10, rel_tol=1e-10)
    saved = os.environ.get("SPIN_DIMER_PURE")
    print(f"{'case':32s} {'steps':>8s} {'python s':>10s} {'native s':>10s} {'speed-up':>9s} {'max diff':>9s}")
    try:
        for name, h, t_end in _cases():
            t_py, slow = _time(h, t_end, cfg, True, args.repeat)
            t_nat, fast = _time(h, t_end, cfg, False, args.repeat)
            diff = float(np.max(np.abs(slow.final - fast.final)))
            print(f"{name:32s} {fast.steps:8d} {t_py:10.4f} {t_nat:10.4f} {t_py / t_nat:8.1f}x {diff:9.1e}")
    finally:
        if saved is None:
            os.environ.pop("SPIN_DIMER_PURE", None)
        else:
            os.environ["SPIN_DIMER_PURE"] = saved


if __name__ == "__main__":
    main()
