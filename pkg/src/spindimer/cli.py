"""Command-line front end: ``spin-dimer {propagate,observables,figure,verify}``.

Runs are configured by an INI file (section ``[run]``) plus ``--set key=value``
overrides. Output is CSV with 17 significant digits and ``\\n`` line endings,
so identical configurations give byte-identical files.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 infeasible schedule.
"""

from __future__ import annotations

import argparse
import configparser
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import basis_state, bell_state
from .dimer import MINUS, PLUS, DimerCouplings
from .engine import Scenario, SectorParams, scenario_propagator
from .errors import DegenerateCoupling, ScheduleInfeasible, UnsolvedSector
from .observables import (
    ObservableSample,
    analytic_concurrence,
    analytic_s2_parity_minus,
    analytic_sx_asymptotic,
    analytic_sz_parity_plus,
    bell_fidelity,
)
from .schedules import (
    FieldSchedule,
    full_schedule,
    omega_to_field,
    propagate_state,
    subspace_schedule,
)
from .verify import run_checks

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_INFEASIBLE = 0, 1, 2, 3

NAMED_STATES = {
    "pp": lambda: basis_state("++"),
    "pm": lambda: basis_state("+-"),
    "mp": lambda: basis_state("-+"),
    "mm": lambda: basis_state("--"),
    "bell_phi_plus": lambda: bell_state("phi_plus"),
    "bell_psi_plus": lambda: bell_state("psi_plus"),
    "sx_max": lambda: np.full(4, 0.5, dtype=complex),
}

OBSERVABLE_COLUMNS = ("sz", "s2", "sx", "concurrence", "cxx", "cyy", "cxy", "fidelities")
FIDELITY_TARGETS = ("phi_plus", "phi_minus", "psi_plus", "psi_minus")

DEFAULTS = {
    "gxx": "1.0",
    "gyy": "1.0",
    "gzz": "0.0",
    "gxy": "0.5",
    "gyx": "0.5",
    "hbar": "1.0",
    "schedule": "S1,S1",
    "state": "pp",
    "t_max": "10.0",
    "samples": "101",
    "g1zz": "2.0",
    "g2zz": "2.0",
}


class ConfigError(Exception):
    pass


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_csv(path, header, rows) -> None:
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")


# --- configuration -------------------------------------------------------------------

@dataclass(frozen=True)
class RunConfig:
    couplings: DimerCouplings
    schedule: str
    state: np.ndarray
    t_max: float
    samples: int
    g1zz: float = 2.0
    g2zz: float = 2.0
    si: bool = False

    def times(self) -> np.ndarray:
        """Sample times; t_max is in units of hbar/|Gamma_+| (seconds with --si)."""
        if self.si:
            scale = 1.0
        else:
            g = abs(self.couplings.gamma(PLUS)) or abs(self.couplings.gamma(MINUS))
            if g == 0.0:
                raise DegenerateCoupling("both sector couplings vanish; no time unit")
            scale = self.couplings.hbar / g
        n = self.samples
        return np.array([self.t_max * scale * i / (n - 1) for i in range(n)]) if n > 1 else np.array([0.0])


def _parse_state(text: str) -> np.ndarray:
    key = text.strip()
    if key in NAMED_STATES:
        return NAMED_STATES[key]()
    try:
        amps = np.array([complex(tok.strip().replace(" ", "")) for tok in key.split(",")], dtype=complex)
    except ValueError as exc:
        raise ConfigError(f"cannot parse state {text!r}") from exc
    if amps.shape != (4,):
        raise ConfigError("state needs exactly 4 amplitudes")
    if abs(np.vdot(amps, amps).real - 1.0) > 1e-9:
        raise ConfigError("state amplitudes are not normalized")
    return amps


def load_config(path: str | None, overrides: list[str], si: bool = False) -> RunConfig:
    parser = configparser.ConfigParser()
    parser.read_dict({"run": DEFAULTS})
    if path:
        if not Path(path).is_file():
            raise ConfigError(f"config file {path!r} not found")
        try:
            parser.read(path, encoding="utf-8")
        except configparser.Error as exc:
            raise ConfigError(str(exc)) from exc
    run = parser["run"]
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not key=value")
        k, v = item.split("=", 1)
        run[k.strip()] = v.strip()
    unknown = set(run) - set(DEFAULTS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    try:
        couplings = DimerCouplings(*(float(run[k]) for k in ("gxx", "gyy", "gzz", "gxy", "gyx", "hbar")))
        t_max = float(run["t_max"])
        samples = int(run["samples"])
        g1, g2 = float(run["g1zz"]), float(run["g2zz"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if samples < 1 or not (t_max >= 0 and math.isfinite(t_max)):
        raise ConfigError("need samples >= 1 and finite t_max >= 0")
    return RunConfig(couplings, run["schedule"].strip(), _parse_state(run["state"]), t_max, samples, g1, g2, si)


def build_schedule(cfg: RunConfig) -> FieldSchedule:
    """Schedule string: "S1,S2" (both sectors), "plus:S1", "minus:S2" or "static:S1"."""
    text = cfg.schedule.replace(" ", "")
    try:
        if ":" in text:
            kind, scen = text.split(":", 1)
            scen = Scenario.parse(scen)
            if kind in ("plus", "+", "static"):
                return subspace_schedule(cfg.couplings, PLUS, scen)
            if kind in ("minus", "-"):
                return subspace_schedule(cfg.couplings, MINUS, scen)
            raise ConfigError(f"unknown schedule kind {kind!r}")
        pair = text.split(",")
        if len(pair) != 2:
            raise ConfigError(f"cannot parse schedule {cfg.schedule!r}")
        return full_schedule(cfg.couplings, tuple(Scenario.parse(p) for p in pair))
    except ValueError as exc:
        if isinstance(exc, ScheduleInfeasible | DegenerateCoupling):
            raise
        raise ConfigError(str(exc)) from exc


def _trajectory(cfg: RunConfig):
    sched = build_schedule(cfg)
    ts = cfg.times()
    states = [propagate_state(sched, cfg.state, t) for t in ts]
    return sched, ts, states


def _field_columns(cfg: RunConfig, sched: FieldSchedule, ts):
    field = omega_to_field(sched, cfg.g1zz, cfg.g2zz)
    return [[field.b1z(t), field.b2z(t)] for t in ts]


# --- commands --------------------------------------------------------------------------

def cmd_propagate(cfg: RunConfig, out) -> None:
    sched, ts, states = _trajectory(cfg)
    header = ["t", "re_cpp", "im_cpp", "re_cpm", "im_cpm", "re_cmp", "im_cmp", "re_cmm", "im_cmm", "norm"]
    rows = []
    for t, psi in zip(ts, states):
        row = [t]
        for c in psi:
            row += [c.real, c.imag]
        row.append(float(np.linalg.norm(psi)))
        rows.append(row)
    if cfg.si:
        header += ["b1z_tesla", "b2z_tesla"]
        rows = [r + f for r, f in zip(rows, _field_columns(cfg, sched, ts))]
    write_csv(out, header, rows)


def cmd_observables(cfg: RunConfig, columns, out) -> None:
    cols = list(columns)
    bad = [c for c in cols if c not in OBSERVABLE_COLUMNS]
    if bad or not cols:
        raise ConfigError(f"unknown observable columns {bad}; choose from {', '.join(OBSERVABLE_COLUMNS)}")
    sched, ts, states = _trajectory(cfg)
    header = ["t"]
    for c in cols:
        header += [f"fid_{w}" for w in FIDELITY_TARGETS] if c == "fidelities" else [c]
    rows = []
    for t, psi in zip(ts, states):
        smp = ObservableSample.from_state(t, psi, cfg.couplings.hbar)
        row = [t]
        for c in cols:
            if c == "fidelities":
                row += [bell_fidelity(psi, w) for w in FIDELITY_TARGETS]
            else:
                row.append(getattr(smp, c))
        rows.append(row)
    if cfg.si:
        header += ["b1z_tesla", "b2z_tesla"]
        rows = [r + f for r, f in zip(rows, _field_columns(cfg, sched, ts))]
    write_csv(out, header, rows)


# --- figures ---------------------------------------------------------------------------

N_FIGURE_SAMPLES = 1000
_UNIT = SectorParams(1.0)  # |Gamma| = 1, hbar = 1


def _grid(density: int) -> list[float]:
    """tau_i = i / density: integer density keeps round abscissae exact."""
    return [i / density for i in range(N_FIGURE_SAMPLES)]


def _sech(x: float) -> float:
    return 1.0 / math.cosh(x)


def _figure_rows(n: int):
    if n == 1:
        return ["tau_1", "omega_over_gamma"], [[x, 2.0 * _sech(x)] for x in _grid(200)]
    if n == 2:
        return ["tau_2", "omega_over_gamma"], [[x, 0.5 * (3.0 * _sech(x) - math.cosh(x))] for x in _grid(250)]
    if n == 3:
        c = DimerCouplings.special(1.0)
        s = full_schedule(c, ("S1", "S1"))
        return (["tau_c", "hbar_omega1_over_c", "hbar_omega2_over_c"],
                [[x, s.omega1(x), s.omega2(x)] for x in _grid(166)])
    if n in (4, 5):
        scen = "S1" if n == 4 else "S2"
        rate = 2.0 if n == 4 else 1.0
        name = "tau_plus" if n == 4 else "tau_prime_plus"
        rows = [[x, analytic_sz_parity_plus(x / rate, scen, "alpha", _UNIT),
                 analytic_sz_parity_plus(x / rate, scen, "beta", _UNIT)] for x in _grid(200)]
        return [name, "sz_alpha_over_hbar", "sz_beta_over_hbar"], rows
    if n in (6, 7):
        scen = "S1" if n == 6 else "S2"
        rate = 2.0 if n == 6 else 1.0
        name = "tau_minus" if n == 6 else "tau_prime_minus"
        density = 200 if n == 6 else 100
        rows = [[x, analytic_s2_parity_minus(x / rate, scen, "alpha", _UNIT),
                 analytic_s2_parity_minus(x / rate, scen, "beta", _UNIT)] for x in _grid(density)]
        return [name, "s2_alpha_over_hbar2", "s2_beta_over_hbar2"], rows
    if n == 8:
        # real-gauge couplings with the same sector moduli as the special choice
        c = DimerCouplings.special_real(1.0)
        s = full_schedule(c, ("S1", "S1"))
        psi0 = NAMED_STATES["sx_max"]()
        rows = []
        for x in _grid(25):
            t = x / 2.0
            psi = propagate_state(s, psi0, t)
            rows.append([x, ObservableSample.from_state(t, psi).sx, analytic_sx_asymptotic(t, c)])
        return ["tau_plus", "sx_over_hbar", "sx_asymptote_over_hbar"], rows
    if n in (9, 10):
        src = "from_pp" if n == 9 else "from_bell"
        density = 200 if n == 9 else 50
        return (["tau_plus", "concurrence"],
                [[x, analytic_concurrence(x / 2.0, src, "S1", _UNIT)] for x in _grid(density)])
    if n in (11, 12):
        src = "from_pp" if n == 11 else "from_bell"
        return (["tau_prime_plus", "concurrence"],
                [[x, analytic_concurrence(x, src, "S2", _UNIT)] for x in _grid(250)])
    if n == 13:
        bell = NAMED_STATES["bell_phi_plus"]()
        rows = []
        for x in _grid(250):
            m = scenario_propagator("S2", x, _UNIT).matrix()
            cpp, cmm = m @ bell[[0, 3]]
            rows.append([x, abs(cpp), abs(cmm), 2.0 * abs(cpp * cmm)])
        return ["tau_prime_plus", "abs_cpp", "abs_cmm", "concurrence"], rows
    raise ConfigError(f"figure number must be 1..13, got {n}")


def cmd_figure(n: int, out_dir) -> Path:
    header, rows = _figure_rows(n)
    path = Path(out_dir) / f"figure_{n}.csv"
    write_csv(path, header, rows)
    return path


def cmd_verify(level: str, out=None) -> int:
    out = out or sys.stdout
    results = run_checks(level, report=lambda line: print(line, file=out))
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed", file=out)
    return EXIT_VERIFY if failed else EXIT_OK


# --- entry point -----------------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spin-dimer", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def run_args(p):
        p.add_argument("--config", help="INI file with a [run] section")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a config key")
        p.add_argument("--out", required=True, help="output CSV path")
        p.add_argument("--si", action="store_true",
                       help="couplings in rad/s, t_max in seconds, add lab-field columns in tesla")

    run_args(sub.add_parser("propagate", help="closed-form state amplitudes"))
    obs = sub.add_parser("observables", help="observables from the propagated state")
    run_args(obs)
    obs.add_argument("--columns", default="sz,s2,sx,concurrence,cxx,cyy",
                     help=f"comma-separated subset of {','.join(OBSERVABLE_COLUMNS)}")
    fig = sub.add_parser("figure", help="regenerate figure data from closed forms")
    grp = fig.add_mutually_exclusive_group(required=True)
    grp.add_argument("--n", type=int, help="figure number 1..13")
    grp.add_argument("--all", action="store_true", help="all figures")
    fig.add_argument("--out-dir", default=".", help="directory for figure_N.csv")
    ver = sub.add_parser("verify", help="oracle-equivalence and invariant checks")
    ver.add_argument("--level", choices=("fast", "full"), default="fast")
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "verify":
            return cmd_verify(args.level)
        if args.command == "figure":
            for n in range(1, 14) if args.all else [args.n]:
                print(cmd_figure(n, args.out_dir))
            return EXIT_OK
        cfg = load_config(args.config, args.set, args.si)
        if args.command == "propagate":
            cmd_propagate(cfg, args.out)
        else:
            cmd_observables(cfg, [c.strip() for c in args.columns.split(",") if c.strip()], args.out)
        return EXIT_OK
    except (ScheduleInfeasible, DegenerateCoupling, UnsolvedSector) as exc:
        print(f"infeasible schedule: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
