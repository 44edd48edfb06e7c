"""Scenario runner.

Verbs:

* ``run <config>``      -- evolve one scenario, write CSV snapshots, a
  diagnostics table and a run manifest;
* ``compare <config> --a <method> --b <method>`` -- same scenario with two
  methods, plus a per-time difference report;
* ``figure <fig1|fig2>`` -- canned potential-step scenarios (packet above /
  below the step) producing the data for a three-panel figure;
* ``check``             -- kernel-identity and oracle self-checks.

Configuration files are flat UTF-8 ``key = value`` text with ``#`` comments;
command-line ``--set key=value`` flags override file keys.  Outputs go to
``--out``, else the directory named by the STEPWELL_OUTPUT_DIR environment
variable, else ``./stepwell_runs/<name>``.  CSV numbers carry 17 significant
digits so doubles round-trip exactly.

Exit codes: 0 success, 2 configuration error, 3 accuracy failure,
4 precondition violation.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .diagnostics import ObservableReport, observables
from .errors import AccuracyFailure, ConfigError, PreconditionViolation, StepwellError
from .oracle import FdGrid, crank_nicolson_evolve, eigen_sum_infinite_well, free_gaussian_analytic
from .packets import GaussianPacket
from .propagators import (
    asym_exact_field,
    asym_inside_approx,
    mirror_well,
    step_climb_approx,
    step_exact_field,
    step_forbidden_approx,
)
from .specfun import M_kernel, rho_of_s
from .units import AsymmetricWell, InfiniteWell, Step, UnitSystem, WaveField

METHODS = ("mirror", "step_exact", "step_approx", "asym_exact", "asym_approx",
           "oracle_cn", "oracle_eigen")

_METHOD_POTENTIALS = {
    "mirror": (InfiniteWell,),
    "oracle_eigen": (InfiniteWell,),
    "step_exact": (Step,),
    "step_approx": (Step,),
    "asym_exact": (AsymmetricWell,),
    "asym_approx": (AsymmetricWell,),
    "oracle_cn": (InfiniteWell, Step, AsymmetricWell),
}

FMT = "%.17g"


@dataclass
class Scenario:
    """One fully-specified evolution problem."""

    potential: InfiniteWell | Step | AsymmetricWell
    packet: GaussianPacket
    method: str
    times: list[float]
    x_min: float
    x_max: float
    dx: float
    dt: float
    n_max: int = 400
    name: str = "scenario"
    units: UnitSystem = field(default_factory=UnitSystem)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}")
        if not isinstance(self.potential, _METHOD_POTENTIALS[self.method]):
            raise ConfigError(
                f"method {self.method!r} is incompatible with "
                f"{type(self.potential).__name__}")
        if any(t < 0 for t in self.times) or sorted(self.times) != list(self.times):
            raise ConfigError("times must be non-negative and ascending")
        if not (self.x_max > self.x_min and self.dx > 0 and self.dt > 0):
            raise ConfigError("grid requires x_max > x_min, dx > 0, dt > 0")

    @property
    def xs(self) -> np.ndarray:
        return FdGrid(self.x_min, self.x_max, self.dx, self.dt).xs


def parse_config_text(text: str) -> dict[str, str]:
    """Parse flat key=value text with # comments into a string dict."""
    out: dict[str, str] = {}
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {ln}: expected key=value, got {raw!r}")
        key, val = line.split("=", 1)
        out[key.strip()] = val.strip()
    return out


def _get(cfg: dict[str, str], key: str, cast, default=None):
    if key not in cfg:
        if default is not None:
            return default
        raise ConfigError(f"missing config key {key!r}")
    try:
        return cast(cfg[key])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for {key!r}: {cfg[key]!r}") from exc


def scenario_from_config(cfg: dict[str, str], name: str = "scenario") -> Scenario:
    kind = _get(cfg, "potential", str)
    if kind == "well":
        pot = InfiniteWell(_get(cfg, "d", float))
    elif kind == "step":
        pot = Step(_get(cfg, "V", float))
    elif kind == "asym":
        pot = AsymmetricWell(_get(cfg, "d", float), _get(cfg, "V", float))
    else:
        raise ConfigError(f"unknown potential {kind!r} (well|step|asym)")
    packet = GaussianPacket(_get(cfg, "alpha", float, 1.0),
                            _get(cfg, "x0", float), _get(cfg, "p0", float))
    times = [float(v) for v in _get(cfg, "times", str).split(",") if v.strip()]
    units = UnitSystem(_get(cfg, "hbar", float, 1.0), _get(cfg, "mass", float, 1.0))
    try:
        return Scenario(
            potential=pot, packet=packet, method=_get(cfg, "method", str),
            times=times, x_min=_get(cfg, "x_min", float),
            x_max=_get(cfg, "x_max", float), dx=_get(cfg, "dx", float),
            dt=_get(cfg, "dt", float), n_max=_get(cfg, "n_max", int, 400),
            name=cfg.get("name", name), units=units)
    except StepwellError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def evolve_scenario(sc: Scenario, t: float, method: str | None = None) -> WaveField:
    """Evaluate one snapshot of the scenario with the requested method."""
    method = method or sc.method
    xs, u, g, pot = sc.xs, sc.units, sc.packet, sc.potential
    if method == "oracle_cn":
        grid = FdGrid(sc.x_min, sc.x_max, sc.dx, sc.dt)
        return crank_nicolson_evolve(g, pot, t, grid, u)
    if method == "mirror":
        return WaveField(t, xs, mirror_well(g, pot.d, t, xs, u=u))
    if method == "oracle_eigen":
        return WaveField(t, xs, eigen_sum_infinite_well(g, pot.d, t, xs, sc.n_max, u))
    if method == "step_exact":
        return step_exact_field(g, pot.V, t, xs, u=u)
    if method == "step_approx":
        k0 = g.p0**2 / (2.0 * u.mass * pot.V)
        fn = step_climb_approx if k0 > 1.0 else step_forbidden_approx
        return WaveField(t, xs, fn(g, pot.V, t, xs, u=u))
    if method == "asym_exact":
        return asym_exact_field(g, pot.d, pot.V, t, xs, u=u)
    if method == "asym_approx":
        if sc.x_min < -pot.d or sc.x_max > 0:
            raise ConfigError("asym_approx needs a grid inside [-d, 0]")
        return WaveField(t, xs, asym_inside_approx(g, pot.d, pot.V, t, xs, u=u))
    raise ConfigError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# output helpers


def _outdir(args, default_name: str) -> Path:
    if getattr(args, "out", None):
        base = Path(args.out)
    elif os.environ.get("STEPWELL_OUTPUT_DIR"):
        base = Path(os.environ["STEPWELL_OUTPUT_DIR"])
    else:
        base = Path.cwd() / "stepwell_runs"
    path = base / default_name
    path.mkdir(parents=True, exist_ok=True)
    return path


def write_snapshot_csv(path: Path, fld: WaveField) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("x,re,im,abs2\n")
        for x, a in zip(fld.xs, fld.amps):
            fh.write(f"{x:.17g},{a.real:.17g},{a.imag:.17g},{abs(a) ** 2:.17g}\n")


def write_diagnostics_csv(path: Path, reports: list[ObservableReport]) -> None:
    cols = ("t", "norm", "mean_x", "mean_p", "sd_x", "sd_p", "left_mass", "right_mass")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(cols) + "\n")
        for r in reports:
            fh.write(",".join(f"{getattr(r, c):.17g}" for c in cols) + "\n")


def write_plot_script(path: Path, csvs: list[str], title: str) -> None:
    lines = ["set datafile separator ','", f"set title '{title}'",
             "set xlabel 'x'", "set ylabel '|psi|^2'", "set key autotitle columnhead"]
    plots = ", ".join(f"'{name}' using 1:4 with lines title '{name}'" for name in csvs)
    lines.append("plot " + plots)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _manifest(outdir: Path, payload: dict) -> None:
    (outdir / "manifest.json").write_text(
        json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n",
        encoding="utf-8")


def _scenario_dict(sc: Scenario) -> dict:
    pot = sc.potential
    return {
        "potential": type(pot).__name__,
        "d": getattr(pot, "d", None), "V": getattr(pot, "V", None),
        "alpha": sc.packet.alpha, "x0": sc.packet.x0, "p0": sc.packet.p0,
        "method": sc.method, "times": sc.times,
        "x_min": sc.x_min, "x_max": sc.x_max, "dx": sc.dx, "dt": sc.dt,
        "n_max": sc.n_max, "hbar": sc.units.hbar, "mass": sc.units.mass,
    }


# ---------------------------------------------------------------------------
# verbs


def _load_scenario(args) -> Scenario:
    path = Path(args.config)
    if not path.exists():
        raise ConfigError(f"config file {path} not found")
    cfg = parse_config_text(path.read_text(encoding="utf-8"))
    for item in args.set or []:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, val = item.split("=", 1)
        cfg[key.strip()] = val.strip()
    return scenario_from_config(cfg, name=path.stem)


def cmd_run(args) -> int:
    sc = _load_scenario(args)
    outdir = _outdir(args, sc.name)
    reports, csvs, issues = [], [], []
    for i, t in enumerate(sc.times):
        try:
            fld = evolve_scenario(sc, t)
        except (AccuracyFailure, PreconditionViolation) as exc:
            issues.append({"t": t, "error": type(exc).__name__, "message": str(exc)})
            print(f"[t={t:g}] {type(exc).__name__}: {exc}", file=sys.stderr)
            continue
        name = f"snapshot_{i:03d}.csv"
        write_snapshot_csv(outdir / name, fld)
        csvs.append(name)
        reports.append(observables(fld, 0.0, sc.units))
        print(f"[t={t:g}] wrote {name}  norm={reports[-1].norm:.6f}")
    write_diagnostics_csv(outdir / "diagnostics.csv", reports)
    write_plot_script(outdir / "plot.gp", csvs, sc.name)
    _manifest(outdir, {"scenario": _scenario_dict(sc), "snapshots": csvs,
                       "issues": issues})
    if issues:
        kind = issues[0]["error"]
        return 4 if kind == "PreconditionViolation" else 3
    print(f"outputs in {outdir}")
    return 0


def cmd_compare(args) -> int:
    sc = _load_scenario(args)
    for m in (args.a, args.b):
        if m not in METHODS:
            raise ConfigError(f"unknown method {m!r}")
        if not isinstance(sc.potential, _METHOD_POTENTIALS[m]):
            raise ConfigError(f"method {m!r} incompatible with the potential")
    outdir = _outdir(args, f"{sc.name}-{args.a}-vs-{args.b}")
    rows = []
    for t in sc.times:
        fa = evolve_scenario(sc, t, args.a)
        fb = evolve_scenario(sc, t, args.b)
        bx = np.interp(fa.xs, fb.xs, fb.amps.real) + 1j * np.interp(fa.xs, fb.xs, fb.amps.imag)
        diff = fa.amps - bx
        l2 = math.sqrt(float(np.trapezoid(np.abs(diff) ** 2, fa.xs)))
        linf = float(np.max(np.abs(diff)))
        ra, rb = observables(fa, 0.0, sc.units), observables(fb, 0.0, sc.units)
        rows.append((t, l2, linf, ra.mean_x - rb.mean_x, ra.mean_p - rb.mean_p,
                     ra.norm - rb.norm))
        print(f"t={t:g}  L2={l2:.3e}  Linf={linf:.3e}")
    with open(outdir / "differences.csv", "w", encoding="utf-8") as fh:
        fh.write("t,l2,linf,d_mean_x,d_mean_p,d_norm\n")
        for row in rows:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
    _manifest(outdir, {"scenario": _scenario_dict(sc),
                       "method_a": args.a, "method_b": args.b,
                       "differences": "differences.csv"})
    print(f"outputs in {outdir}")
    return 0


_FIGURES = {
    # packet above the step (k0 = 3/2): slowed transmission
    "fig1": {"potential": "step", "alpha": "1", "x0": "-10", "p0": "100",
             "V": repr(10000.0 / 3.0), "times": "0,0.1,0.2",
             "x_min": "-40", "x_max": "20", "dx": "0.02", "dt": "1e-4",
             "method": "step_exact", "name": "fig1"},
    # packet below the step (k0 = 1/4): total reflection, evanescent tail
    "fig2": {"potential": "step", "alpha": "1", "x0": "-10", "p0": "10",
             "V": "200", "times": "0,1,2",
             "x_min": "-40", "x_max": "5", "dx": "0.02", "dt": "1e-4",
             "method": "step_exact", "name": "fig2"},
}


def cmd_figure(args) -> int:
    cfg = dict(_FIGURES[args.which])
    sc = scenario_from_config(cfg, name=args.which)
    outdir = _outdir(args, args.which)
    csvs = []
    for i, t in enumerate(sc.times):
        fld = evolve_scenario(sc, t)
        name = f"panel_{chr(ord('a') + i)}.csv"
        write_snapshot_csv(outdir / name, fld)
        csvs.append(name)
        rep = observables(fld, 0.0, sc.units)
        print(f"panel {chr(ord('a') + i)}: t={t:g} norm={rep.norm:.6f} "
              f"right_mass={rep.right_mass:.4f}")
    write_plot_script(outdir / "plot.gp", csvs, args.which)
    _manifest(outdir, {"scenario": _scenario_dict(sc), "panels": csvs})
    print(f"outputs in {outdir}")
    return 0


def cmd_check(args) -> int:
    """Kernel Laplace identities and oracle self-checks."""
    from scipy.integrate import quad

    u = UnitSystem()
    ok = True
    for k in (1, 2, 3):
        worst = 0.0
        for s in np.linspace(0.5, 20.0, 10):
            val, _ = quad(lambda t: np.exp(-s * t) * M_kernel(k, t, 1.0, u),
                          0.0, np.inf, complex_func=True, limit=2000)
            worst = max(worst, abs(val - rho_of_s(s, 1.0, u) ** k))
        flag = worst < 1e-6
        ok &= flag
        print(f"kernel identity k={k}: max |L{{M}} - rho^k| = {worst:.2e} "
              f"{'ok' if flag else 'FAIL'}")
    g = GaussianPacket(1.0, 0.0, 2.0)
    grid = FdGrid(-30.0, 30.0, 0.005, 0.001)
    fld = crank_nicolson_evolve(g, lambda x: np.zeros_like(x), 1.0, grid, u)
    ref = free_gaussian_analytic(g, 1.0, fld.xs, u)
    l2 = math.sqrt(float(np.trapezoid(np.abs(fld.amps - ref) ** 2, fld.xs)))
    flag = l2 < 1e-4
    ok &= flag
    print(f"free-packet oracle cross-check: L2 = {l2:.2e} {'ok' if flag else 'FAIL'}")
    if not ok:
        raise AccuracyFailure("self-checks failed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stepwell",
        description="Wave-packet evolution in piecewise-constant potentials")
    sub = parser.add_subparsers(dest="verb", required=True)

    run = sub.add_parser("run", help="evolve a configured scenario")
    run.add_argument("config")
    run.add_argument("--set", action="append", metavar="KEY=VALUE",
                     help="override a config key")
    run.add_argument("--out", help="output directory")
    run.set_defaults(func=cmd_run)

    cmp_ = sub.add_parser("compare", help="difference report between two methods")
    cmp_.add_argument("config")
    cmp_.add_argument("--a", required=True, choices=METHODS)
    cmp_.add_argument("--b", required=True, choices=METHODS)
    cmp_.add_argument("--set", action="append", metavar="KEY=VALUE")
    cmp_.add_argument("--out")
    cmp_.set_defaults(func=cmd_compare)

    fig = sub.add_parser("figure", help="canned step-potential figure bundles")
    fig.add_argument("which", choices=sorted(_FIGURES))
    fig.add_argument("--out")
    fig.set_defaults(func=cmd_figure)

    chk = sub.add_parser("check", help="kernel and oracle self-checks")
    chk.set_defaults(func=cmd_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except AccuracyFailure as exc:
        print(f"accuracy failure: {exc}", file=sys.stderr)
        return 3
    except PreconditionViolation as exc:
        print(f"precondition violation: {exc} margins={exc.margins}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
