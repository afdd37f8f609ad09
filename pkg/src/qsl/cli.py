"""``qsl`` command line: run, bounds, compare, sweep, catalog.

Exit codes: 0 success, 2 scenario/schema error, 3 propagated state left the
density-matrix set, 4 the two propagation routes disagree, 5 a bound is
violated.
"""

import argparse
import csv
import io
import itertools
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import bounds as _bounds
from .liouville import skew_spectral_norm
from .propagate import PropagationError, evolve, evolve_direct, evolve_superop
from .scenarios import CATALOG, ScenarioError, catalog_names, resolve_scenario

log = logging.getLogger("qsl")

EXIT_OK, EXIT_SCHEMA, EXIT_INVARIANT, EXIT_ORACLE, EXIT_BOUND = 0, 2, 3, 4, 5
ORACLE_ATOL = 1e-8
BOUND_SLACK = 1e-7
FLOOR_SLACK = 1e-9
# Purity deviations below this are roundoff; their logarithm carries no information.
DEVIATION_NOISE_FLOOR = 1e-20
COLUMNS = ["t", "purity", "purity_deviation", "bound_floor", "bound_ceiling", "eq12_floor"]


@dataclass
class RunConfig:
    command: str
    scenario: Optional[str] = None
    output_path: Optional[str] = None
    format: str = "csv"
    seeds: List[int] = field(default_factory=list)
    overrides: dict = field(default_factory=dict)
    method: str = "superop"
    t_from: Optional[float] = None
    t_to: Optional[float] = None
    all_catalog: bool = False
    jobs: int = 1


def parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def parse_overrides(items, allow_lists=False) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise ScenarioError(f"override {item!r} is not key=value")
        key, raw = item.split("=", 1)
        if allow_lists:
            out[key] = [parse_value(v) for v in raw.split(",") if v != ""]
        else:
            out[key] = parse_value(raw)
    return out


def _fmt(x) -> str:
    if x is None or (isinstance(x, float) and np.isnan(x)):
        return ""
    return format(float(x), ".17g")


def _seeded(config: RunConfig, seed) -> dict:
    overrides = dict(config.overrides)
    if seed is not None:
        key = "seed" if config.scenario in CATALOG else "initial_state.params.seed"
        overrides[key] = seed
    return overrides


def eq12_floor(gen, traj) -> Optional[np.ndarray]:
    """Dephasing purity floor along the trajectory, or ``None`` when it does not apply."""
    if not gen.jump_ops or not _bounds.is_dephasing(gen):
        return None
    n = gen.dim
    return 1.0 / n + (traj.purity[0] - 1.0 / n) * np.exp(-traj.bounds["liouville"])


def trajectory_columns(gen, traj) -> dict:
    floor = eq12_floor(gen, traj)
    pd = traj.purity_deviation if traj.purity_deviation is not None else traj.purity
    return {
        "t": traj.times,
        "purity": traj.purity,
        "purity_deviation": pd,
        "bound_floor": traj.bound_floor,
        "bound_ceiling": traj.bound_ceiling,
        "eq12_floor": floor if floor is not None else [None] * len(traj.times),
    }


def run_scenario(spec, method="superop"):
    gen = spec.generator()
    traj = evolve(gen, spec.initial_state, spec.grid, method=method, reference=spec.reference)
    return gen, traj


def write_table(results, path, fmt, with_seed):
    """``results`` is a list of ``(seed, columns)``."""
    if fmt == "json":
        doc = {
            "columns": COLUMNS,
            "trajectories": [
                {"seed": seed, **{c: [None if v is None else float(v) for v in cols[c]] for c in COLUMNS}}
                for seed, cols in results
            ],
        }
        text = json.dumps(doc, indent=1) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow((["seed"] if with_seed else []) + COLUMNS)
        for seed, cols in results:
            for k in range(len(cols["t"])):
                row = [_fmt(cols[c][k]) for c in COLUMNS]
                w.writerow(([str(seed)] if with_seed else []) + row)
        text = buf.getvalue()
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def cmd_run(config: RunConfig) -> int:
    seeds = config.seeds or [None]
    try:
        results = []
        for seed in seeds:
            spec = resolve_scenario(config.scenario, _seeded(config, seed))
            gen, traj = run_scenario(spec, config.method)
            results.append((seed, trajectory_columns(gen, traj)))
    except ScenarioError as exc:
        log.error("scenario error: %s", exc)
        return EXIT_SCHEMA
    except PropagationError as exc:
        log.error("invariant violation: %s", exc)
        return EXIT_INVARIANT
    write_table(results, config.output_path, config.format, bool(config.seeds))
    return EXIT_OK


def cmd_bounds(config: RunConfig) -> int:
    try:
        spec = resolve_scenario(config.scenario, config.overrides)
        gen = spec.generator()
    except ScenarioError as exc:
        log.error("scenario error: %s", exc)
        return EXIT_SCHEMA
    t0 = spec.grid.t_start if config.t_from is None else config.t_from
    t1 = spec.grid.t_end if config.t_to is None else config.t_to
    try:
        report = _bounds.bound_report(
            gen, t0, t1, applies_to="purity" if spec.reference is None else "purity-deviation"
        )
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_SCHEMA
    doc = report.to_dict()
    doc["skew_spectral_norm"] = skew_spectral_norm(gen, t0)
    doc["scenario"] = spec.name
    print(json.dumps(doc, indent=1))
    return EXIT_OK


def bound_violations(traj, gen=None) -> List[str]:
    """Grid points where a logarithmic purity or deviation change exceeds its bound."""
    out = []
    lnp = np.abs(np.log(traj.purity / traj.purity[0]))
    for kind in _bounds.BOUND_KINDS:
        excess = lnp - traj.bounds[kind]
        k = int(np.argmax(excess))
        if excess[k] > BOUND_SLACK:
            out.append(f"purity vs {kind}: excess {excess[k]:.3e} at t={traj.times[k]:.6g}")
    pd = traj.purity_deviation
    if pd is not None and pd[0] > DEVIATION_NOISE_FLOOR:
        ok = pd > DEVIATION_NOISE_FLOOR
        excess = np.abs(np.log(pd[ok] / pd[0])) - traj.bounds["liouville"][ok]
        if excess.size and excess.max() > BOUND_SLACK:
            k = int(np.argmax(excess))
            out.append(f"purity deviation vs liouville: excess {excess[k]:.3e} at t={traj.times[ok][k]:.6g}")
    if gen is not None:
        floor = eq12_floor(gen, traj)
        if floor is not None:
            short = floor - traj.purity
            k = int(np.argmax(short))
            if short[k] > FLOOR_SLACK:
                out.append(f"purity below dephasing floor by {short[k]:.3e} at t={traj.times[k]:.6g}")
    return out


def compare_scenario(spec, superoperator=None, dynamics=None) -> dict:
    """Run both propagation routes and every bound check for one scenario.

    ``superoperator`` replaces the superoperator builder of the expm route and
    ``dynamics`` maps the declared generator to the one actually propagated;
    both exist so that negative controls can be wired in. Bounds always use
    the declared generator.
    """
    declared = spec.generator()
    gen = dynamics(declared) if dynamics is not None else declared
    report = {"scenario": spec.name, "dim": spec.dim}
    try:
        a = evolve_superop(gen, spec.initial_state, spec.grid, reference=spec.reference,
                           superoperator=superoperator)
        b = evolve_direct(gen, spec.initial_state, spec.grid, reference=spec.reference)
    except PropagationError as exc:
        report.update(status="invariant", exit_code=EXIT_INVARIANT, error=str(exc))
        return report
    # Cumulative bounds come from the declared generator.
    a.bounds = b.bounds = _bounds.cumulative_bounds(declared, spec.grid.times)
    discrepancy = a.max_discrepancy(b)
    violations = bound_violations(a, declared) + bound_violations(b, declared)
    report.update(max_discrepancy=discrepancy, violations=violations,
                  skew_spectral_norm=skew_spectral_norm(declared, spec.grid.t_start))
    if discrepancy >= ORACLE_ATOL:
        report.update(status="oracle-mismatch", exit_code=EXIT_ORACLE)
    elif violations:
        report.update(status="bound-violation", exit_code=EXIT_BOUND)
    else:
        report.update(status="ok", exit_code=EXIT_OK)
    return report


def cmd_compare(config: RunConfig, superoperator=None, dynamics=None) -> int:
    names = catalog_names() if config.all_catalog else [config.scenario]
    worst = EXIT_OK
    reports = []
    for name in names:
        try:
            spec = resolve_scenario(name, config.overrides)
        except ScenarioError as exc:
            log.error("scenario error: %s", exc)
            return EXIT_SCHEMA
        rep = compare_scenario(spec, superoperator, dynamics)
        reports.append(rep)
        worst = max(worst, rep["exit_code"])
    print(json.dumps(reports, indent=1))
    return worst


def log_slope(times, values, floor=1e-6):
    """Least-squares slope of ``ln(values/values[0])`` over points above ``floor``."""
    values = np.asarray(values)
    if values[0] <= DEVIATION_NOISE_FLOOR:
        return None
    r = values / values[0]
    ok = r > floor
    if ok.sum() < 2:
        return None
    return float(np.polyfit(np.asarray(times)[ok], np.log(r[ok]), 1)[0])


def _sweep_point(args):
    scenario, overrides, method, out_file, fmt = args
    spec = resolve_scenario(scenario, overrides)
    gen, traj = run_scenario(spec, method)
    write_table([(None, trajectory_columns(gen, traj))], out_file, fmt, False)
    return {"log_slope": log_slope(traj.times, traj.tracked),
            "skew_spectral_norm": skew_spectral_norm(gen, spec.grid.t_start)}


def cmd_sweep(config: RunConfig, sweep: dict) -> int:
    """Cross product over ``sweep`` (key -> list); one file per point plus ``index.json``."""
    out_dir = Path(config.output_path or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    keys = list(sweep)
    points = list(itertools.product(*(sweep[k] for k in keys))) if keys else []
    ext = "json" if config.format == "json" else "csv"
    tasks = []
    for i, values in enumerate(points):
        overrides = {**config.overrides, **dict(zip(keys, values))}
        tasks.append((config.scenario, overrides, config.method, str(out_dir / f"point_{i:04d}.{ext}"), config.format))
    try:
        if config.jobs > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(config.jobs) as pool:
                stats = list(pool.map(_sweep_point, tasks))
        else:
            stats = [_sweep_point(t) for t in tasks]
    except ScenarioError as exc:
        log.error("scenario error: %s", exc)
        return EXIT_SCHEMA
    except PropagationError as exc:
        log.error("invariant violation: %s", exc)
        return EXIT_INVARIANT
    index = {
        "scenario": config.scenario,
        "keys": keys,
        "points": [
            {"index": i, "params": dict(zip(keys, values)), "file": Path(t[3]).name, **st}
            for i, (values, t, st) in enumerate(zip(points, tasks, stats))
        ],
    }
    (out_dir / "index.json").write_text(json.dumps(index, indent=1) + "\n")
    return EXIT_OK


def cmd_catalog(config: RunConfig) -> int:
    for name in catalog_names():
        builder, defaults = CATALOG[name]
        params = ", ".join(f"{k}={v}" for k, v in defaults.items())
        print(f"{name:18s} {builder.__name__}({params})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qsl", description="Purity speed limits for Lindblad dynamics.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--set", action="append", default=[], metavar="KEY=VALUE")

    r = sub.add_parser("run", help="propagate a scenario and write the purity table")
    r.add_argument("scenario")
    r.add_argument("--out", default="-")
    r.add_argument("--format", choices=["csv", "json"], default="csv")
    r.add_argument("--seed", type=int, action="append", default=[])
    r.add_argument("--method", choices=["superop", "direct"], default="superop")
    common(r)

    b = sub.add_parser("bounds", help="print the bound report as JSON")
    b.add_argument("scenario")
    b.add_argument("--from", dest="t_from", type=float)
    b.add_argument("--to", dest="t_to", type=float)
    common(b)

    c = sub.add_parser("compare", help="dual-route oracle and bound validity gate")
    c.add_argument("scenario", nargs="?")
    c.add_argument("--all-catalog", action="store_true")
    common(c)

    s = sub.add_parser("sweep", help="cross-product parameter sweep")
    s.add_argument("scenario")
    s.add_argument("--out-dir", required=True)
    s.add_argument("--format", choices=["csv", "json"], default="csv")
    s.add_argument("--method", choices=["superop", "direct"], default="superop")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--seed", type=int, action="append", default=[])
    common(s)

    sub.add_parser("catalog", help="list built-in scenarios")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "catalog":
            return cmd_catalog(RunConfig("catalog"))
        if args.command == "sweep":
            sweep = parse_overrides(args.set, allow_lists=True)
            if args.seed:
                sweep["seed" if args.scenario in CATALOG else "initial_state.params.seed"] = args.seed
            config = RunConfig("sweep", args.scenario, args.out_dir, args.format,
                               method=args.method, jobs=args.jobs)
            return cmd_sweep(config, sweep)
        overrides = parse_overrides(args.set)
        if args.command == "run":
            return cmd_run(RunConfig("run", args.scenario, args.out, args.format, args.seed,
                                     overrides, args.method))
        if args.command == "bounds":
            return cmd_bounds(RunConfig("bounds", args.scenario, overrides=overrides,
                                        t_from=args.t_from, t_to=args.t_to))
        if args.command == "compare":
            if not args.all_catalog and not args.scenario:
                log.error("compare needs a scenario or --all-catalog")
                return EXIT_SCHEMA
            return cmd_compare(RunConfig("compare", args.scenario, overrides=overrides,
                                         all_catalog=args.all_catalog))
    except ScenarioError as exc:
        log.error("scenario error: %s", exc)
        return EXIT_SCHEMA
    return EXIT_SCHEMA


if __name__ == "__main__":
    sys.exit(main())
