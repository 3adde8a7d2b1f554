"""Command-line entry point: ``qwoptomech <verb> ...``."""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .errors import SimulationError
from .params import ENSEMBLE, EULER_MARUYAMA, METHODS, BACKENDS, RK45_ADAPTIVE, Scenario
from .presets import CATALOG, preset_info, preset_names

OUTPUT_ENV = "QWOPTOMECH_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "output"

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def output_dir(explicit=None, fallback=None):
    if explicit:
        return Path(explicit)
    if fallback:
        return Path(fallback)
    return Path(os.environ.get(OUTPUT_ENV) or DEFAULT_OUTPUT_DIR)


def _add_overrides(p):
    p.add_argument("--backend", choices=BACKENDS)
    p.add_argument("--method", choices=METHODS)
    p.add_argument("--h", type=float, help="fixed step size")
    p.add_argument("--rel-tol", type=float)
    p.add_argument("--abs-tol", type=float)
    p.add_argument("--t-end", type=float)
    p.add_argument("--sample-dt", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--n-traj", type=int)
    p.add_argument("--workers", type=int, default=1, help="processes for ensemble runs")
    p.add_argument("--out", help=f"output directory (default ${OUTPUT_ENV} or ./{DEFAULT_OUTPUT_DIR})")
    p.add_argument("--plot", action="store_true", help="also render SVG figures")


def apply_overrides(scenario, args):
    """Apply CLI flags. Switching to or from Ensemble also switches the
    default integrator, unless ``--method`` is given."""
    integ = {}
    for flag, key in (("method", "method"), ("h", "h"), ("rel_tol", "rel_tol"),
                      ("abs_tol", "abs_tol")):
        value = getattr(args, flag, None)
        if value is not None:
            integ[key] = value
    backend = getattr(args, "backend", None)
    if backend and "method" not in integ:
        if backend == ENSEMBLE:
            integ["method"] = EULER_MARUYAMA
        elif scenario.integrator.method == EULER_MARUYAMA:
            integ["method"] = RK45_ADAPTIVE
    top = {}
    for flag in ("backend", "t_end", "sample_dt", "seed", "n_traj"):
        value = getattr(args, flag, None)
        if value is not None:
            top[flag] = value
    if integ:
        top["integrator"] = dataclasses.replace(scenario.integrator, **integ)
    return scenario.replace(**top) if top else scenario


def _stem_name(source, scenario):
    if scenario.name:
        return scenario.name
    return Path(source).stem


def _run_one(scenario, stem, workers, plot):
    from .output import write_run
    from .runner import primary_series, simulate

    result = simulate(scenario, workers=workers)
    paths = write_run(result, scenario, stem)
    if plot:
        from .plotting import channels_for, plot_series

        paths += plot_series(
            primary_series(result), stem, channels_for(scenario.variant),
            scenario.reference_rate_symbol,
        )
    return result, paths


def cmd_run(args):
    from .scenario_io import load_scenario

    scenario = apply_overrides(load_scenario(args.source), args)
    out = output_dir(args.out)
    _, paths = _run_one(scenario, out / _stem_name(args.source, scenario), args.workers, args.plot)
    for p in paths:
        print(p)
    return EXIT_OK


def _sweep_entry(job):
    scenario, stem, workers = job
    try:
        result, paths = _run_one(scenario, stem, workers, False)
    except (SimulationError, OSError) as exc:
        return stem, None, f"{type(exc).__name__}: {exc}"
    from .runner import primary_series

    return stem, (primary_series(result), paths), None


def cmd_sweep(args):
    from .scenario_io import parse_sweep, preset_sweep_spec

    if args.source in CATALOG:
        spec = preset_sweep_spec(args.source)
    else:
        path = Path(args.source)
        if not path.exists():
            raise SimulationError(f"no such sweep file or preset: {args.source}")
        spec = parse_sweep(path.read_text(encoding="utf-8"), base_dir=path.parent)
    spec = dataclasses.replace(spec, base=apply_overrides(spec.base, args))
    out = output_dir(args.out, spec.output_dir)
    base_name = spec.base.name or Path(args.source).stem
    runs = spec.expand()
    jobs = [(sc, out / f"{base_name}_{suffix}", args.workers) for suffix, sc in runs]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_sweep_entry, [(s, st, 1) for s, st, _ in jobs]))
    else:
        results = [_sweep_entry(j) for j in jobs]

    failures = 0
    curves = []
    for (suffix, _), (stem, ok, err) in zip(runs, results):
        if err:
            failures += 1
            print(f"FAILED {stem.name}: {err}", file=sys.stderr)
            continue
        series, paths = ok
        curves.append((suffix, series))
        for p in paths:
            print(p)
    if args.plot and curves:
        from .plotting import channels_for, plot_channel

        for ch in channels_for(spec.base.variant):
            p = plot_channel(curves, ch, out / f"{base_name}_sweep_{ch}.svg",
                             spec.base.reference_rate_symbol, title=base_name)
            print(p)
    return EXIT_FAILURE if failures else EXIT_OK


def cmd_list_presets(args):
    for name in preset_names():
        info = preset_info(name)
        values = ", ".join(format(v, "g") for v in info.sweep_values)
        print(f"{name}\t{info.channel}\t{info.sweep_key} in {{{values}}}\t{info.description}")
    return EXIT_OK


def cmd_plot(args):
    from .output import read_csv
    from .plotting import plot_series

    path = Path(args.csv)
    series = read_csv(path)
    symbol = "γ"
    meta = path.with_suffix(".json")
    if meta.exists():
        import json

        unit = json.loads(meta.read_text(encoding="utf-8")).get("time_unit", "γ t")
        symbol = unit.split()[0]
    out = Path(args.out) if args.out else path.parent
    for p in plot_series(series, out / path.stem, args.channels, symbol, args.format):
        print(p)
    return EXIT_OK


def cmd_validate(args):
    from .scenario_io import load_scenario

    scenario = load_scenario(args.file)
    print(f"ok: {scenario.variant} / {scenario.backend}" + (f" ({scenario.name})" if scenario.name else ""))
    return EXIT_OK


def cmd_defaults(args):
    from .params import ModelParams
    from .scenario_io import write_scenario

    example = Scenario(variant="ClassicalMirror", params=ModelParams())
    print(f"# qwoptomech {__version__}")
    print(f"# output directory: ${OUTPUT_ENV} or ./{DEFAULT_OUTPUT_DIR}")
    print("# sweep cap (max_runs): 10000")
    print("# default scenario (variant is the only required key):")
    sys.stdout.write(write_scenario(example))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="qwoptomech", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("run", help="run a scenario file, sidecar JSON or preset")
    p.add_argument("source")
    _add_overrides(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="run a sweep file, or a preset's two-point sweep")
    p.add_argument("source")
    _add_overrides(p)
    p.add_argument("--jobs", type=int, default=1, help="sweep entries run concurrently")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("list-presets", help="list the built-in presets")
    p.set_defaults(func=cmd_list_presets)

    p = sub.add_parser("plot", help="plot channels of a run CSV")
    p.add_argument("csv")
    p.add_argument("--channels", nargs="+", default=["A", "B", "q"])
    p.add_argument("--format", default="svg", choices=["svg", "png", "pdf"])
    p.add_argument("--out")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("validate", help="check a scenario file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("defaults", help="print default settings")
    p.set_defaults(func=cmd_defaults)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SimulationError, ValueError, KeyError, OSError) as exc:
        msg = str(exc) if not isinstance(exc, KeyError) or hasattr(exc, "name") else exc.args[0]
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_USAGE if isinstance(exc, (ValueError, KeyError)) else EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
