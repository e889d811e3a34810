"""Command-line driver.

Subcommands::

    quasilorentz points   --field fibonacci --from 0 --to 10
    quasilorentz simulate --field fibonacci --epsilon 1e-3 --n 1000000 --seed 7 --out runs/
    quasilorentz compare  --epsilon 1e-3 --n 1000000 --out runs/

Exit codes: 0 success, 2 configuration error, 3 resource limit.
"""

import argparse
import logging
import os
import sys
import time

from . import output, pointsets as ps, stats
from .errors import ResourceLimitError
from .simulate import ConfigError, SimConfig, default_threads, run_batch

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RESOURCE = 3

#: obstacle seed = run seed XOR this, so obstacles and trajectories use separate streams
POISSON_SEED_SALT = 0x5DEECE66D2F1A3B7

FIT_RANGE = (0.5, 5.0)
POISSON_FIT_RANGE = (0.5, 3.0)
SUP_T_MIN = 0.5
COMPARE_FIELDS = ("fibonacci", "periodic", "poisson")


def _parse_float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")


def _add_field_flags(p, multi=False):
    if multi:
        p.add_argument("--field", default=",".join(COMPARE_FIELDS),
                       help="comma-separated subset of fibonacci,periodic,poisson")
    else:
        p.add_argument("--field", required=True, choices=["fibonacci", "chain", "periodic", "poisson"])
        p.add_argument("--slope", type=float, help="chain slope (> 1)")
    p.add_argument("--spacing", type=float, default=None,
                   help="periodic spacing (default: nu/tau^2, the Fibonacci mean gap)")
    p.add_argument("--intensity", type=float, default=None,
                   help="Poisson intensity (default: tau^2/nu)")
    p.add_argument("--field-seed", type=int, default=None,
                   help="Poisson obstacle seed (default: run seed XOR a fixed salt)")
    p.add_argument("--cell-size", type=float, default=None, help="Poisson cell width")


def _add_run_flags(p):
    p.add_argument("--n", type=int, default=10**6, help="number of trajectories")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-steps", type=int, default=None, help="censoring cap (default ceil(t_max/eps))")
    p.add_argument("--t-max", type=float, default=50.0)
    p.add_argument("--q0-span", type=float, default=None)
    p.add_argument("--v-max", type=float, default=None)
    p.add_argument("--threads", type=int, default=None, help="worker threads (output does not depend on it)")
    p.add_argument("--backend", choices=["auto", "numba", "numpy"], default="auto")
    p.add_argument("--fit-range", type=float, nargs=2, metavar=("T_LO", "T_HI"), default=None)
    p.add_argument("--out", required=True, help="output directory")


def build_parser():
    parser = argparse.ArgumentParser(prog="quasilorentz", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("points", help="dump field points in [from, to)")
    _add_field_flags(p)
    p.add_argument("--seed", type=int, default=0, help="run seed (only feeds the Poisson default)")
    p.add_argument("--from", dest="lo", type=float, required=True)
    p.add_argument("--to", dest="hi", type=float, required=True)
    p.add_argument("--output", default="-", help="file path or - for stdout")

    p = sub.add_parser("simulate", help="survival curve for one field")
    _add_field_flags(p)
    p.add_argument("--epsilon", type=float, required=True)
    _add_run_flags(p)

    p = sub.add_parser("compare", help="Fibonacci vs periodic vs Poisson at matched density")
    _add_field_flags(p, multi=True)
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--epsilons", type=_parse_float_list, default=None,
                   help="comma-separated epsilons; adds sup-distances between consecutive curves")
    p.add_argument("--poisson-fit-range", type=float, nargs=2, metavar=("T_LO", "T_HI"), default=None)
    p.add_argument("--sup-t-min", type=float, default=SUP_T_MIN)
    _add_run_flags(p)
    return parser


def make_field(name, args):
    if name == "fibonacci":
        return ps.Fibonacci()
    if name == "chain":
        if args.slope is None:
            raise ConfigError("slope", "--slope is required for --field chain")
        try:
            return ps.Chain(args.slope)
        except ValueError as e:
            raise ConfigError("slope", str(e))
    if name == "periodic":
        spacing = ps.GOLDEN.spacing if args.spacing is None else args.spacing
        try:
            return ps.Periodic(spacing)
        except ValueError as e:
            raise ConfigError("spacing", str(e))
    if name == "poisson":
        intensity = ps.GOLDEN.alpha if args.intensity is None else args.intensity
        seed = (args.seed ^ POISSON_SEED_SALT) if args.field_seed is None else args.field_seed
        try:
            return ps.Poisson(intensity, seed=seed, cell_size=args.cell_size)
        except ValueError as e:
            raise ConfigError("intensity", str(e))
    raise ConfigError("field", f"unknown field {name!r}")


def make_config(args, epsilon):
    kw = {"epsilon": epsilon, "n_trajectories": args.n, "seed": args.seed,
          "max_steps": args.max_steps, "t_max": args.t_max}
    if args.q0_span is not None:
        kw["q0_span"] = args.q0_span
    if args.v_max is not None:
        kw["v_max"] = args.v_max
    if epsilon is None:
        raise ConfigError("epsilon", "is required")
    if args.threads is not None and args.threads < 1:
        raise ConfigError("threads", f"must be >= 1, got {args.threads}")
    return SimConfig(**kw)


def _fit_range(requested, default, censor_limit):
    if requested is not None:
        lo, hi = requested
    else:
        lo, hi = default[0], min(default[1], 0.5 * censor_limit)
    if not 0 < lo < hi <= censor_limit:
        raise ConfigError("fit-range", f"need 0 < T_lo < T_hi <= {censor_limit}, got [{lo}, {hi}]")
    return lo, hi


def _fits(curve, power_range, exp_range):
    """Both tail models; a fit with too few points is logged and left as None."""
    out = {}
    for name, fn, rng in (("power_law", stats.fit_power_tail, power_range),
                          ("exponential", stats.fit_exponential_tail, exp_range)):
        try:
            out[name] = fn(curve, rng)
        except stats.InsufficientDataError as e:
            logging.getLogger(__name__).warning("%s fit skipped: %s", name, e)
            out[name] = None
    return out


def _csv_name(tag, epsilon):
    return f"{tag}_eps{epsilon:g}.csv"


def cmd_points(args):
    fld = make_field(args.field, args)
    if not args.lo < args.hi:
        raise ConfigError("from/to", f"need --from < --to, got [{args.lo}, {args.hi})")
    pts = ps.enumerate_points(fld, args.lo, args.hi)
    text = "".join(output.format_float(x) + "\n" for x in pts)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with output.AtomicWriter(os.path.dirname(os.path.abspath(args.output))) as w:
            w.write(os.path.basename(args.output), text)
    return EXIT_OK


def cmd_simulate(args):
    t0 = time.perf_counter()
    fld = make_field(args.field, args)
    cfg = make_config(args, args.epsilon)
    fit_range = _fit_range(args.fit_range, POISSON_FIT_RANGE if args.field == "poisson" else FIT_RANGE,
                           cfg.censor_limit)
    result = run_batch(cfg, fld, threads=args.threads, backend=args.backend)
    curve = stats.survival_from_batch(result)
    fits = _fits(curve, fit_range, fit_range)
    primary = fits["exponential"] if args.field == "poisson" else fits["power_law"]
    summary = output.run_summary(result, curve, primary, [f for f in fits.values() if f is not None])
    name = _csv_name(fld.tag, cfg.epsilon)
    manifest = output.RunManifest(cfg.to_dict(), [fld.describe()], args.out)
    with output.AtomicWriter(args.out) as w:
        manifest.emitted_files.append((fld.tag, w.write(name, output.curve_to_csv(curve))))
        w.write(name.replace(".csv", ".json"), output.dumps_json(summary))
        manifest.wall_time = time.perf_counter() - t0
        w.write("manifest.json", output.dumps_json(manifest.to_dict()))
    return EXIT_OK


def cmd_compare(args):
    t0 = time.perf_counter()
    if args.epsilons:
        epsilons = args.epsilons
    elif args.epsilon is not None:
        epsilons = [args.epsilon]
    else:
        epsilons = [1e-3]
    names = [x.strip() for x in args.field.split(",") if x.strip()]
    for name in names:
        if name not in COMPARE_FIELDS:
            raise ConfigError("field", f"compare supports {', '.join(COMPARE_FIELDS)}; got {name!r}")
    if not names:
        raise ConfigError("field", "no fields selected")
    configs = [make_config(args, eps) for eps in epsilons]
    fields = [make_field(name, args) for name in names]
    # one threshold grid for every curve so they can be compared point by point
    grid = stats.default_grid(min(c.censor_limit for c in configs))
    limit = min(c.censor_limit for c in configs)
    power_range = _fit_range(args.fit_range, FIT_RANGE, limit)
    exp_range = _fit_range(args.poisson_fit_range, POISSON_FIT_RANGE, limit)

    runs, curves, texts = [], {}, []
    for cfg in configs:
        for fld in fields:
            result = run_batch(cfg, fld, threads=args.threads, backend=args.backend)
            curve = stats.survival_from_steps(result.histogram(), result.censored, cfg.epsilon, grid, fld.tag)
            # Poisson: both models on the exponential range so residuals compare like for like
            t_range = exp_range if fld.tag == "poisson" else power_range
            fits = _fits(curve, t_range, t_range)
            primary = fits["exponential"] if fld.tag == "poisson" else fits["power_law"]
            runs.append(output.run_summary(result, curve, primary, [f for f in fits.values() if f is not None]))
            curves[(fld.tag, cfg.epsilon)] = curve
            texts.append((fld.tag, _csv_name(fld.tag, cfg.epsilon), output.curve_to_csv(curve)))

    table = {"density": ps.GOLDEN.alpha, "runs": runs,
             "fit_defaults": {"power_law": list(power_range), "exponential": list(exp_range)}}
    if len(epsilons) > 1:
        table["sup_distance"] = [
            {"field": fld.tag, "epsilons": [e1, e2], "t_min": args.sup_t_min,
             "value": stats.curve_sup_distance(curves[(fld.tag, e1)], curves[(fld.tag, e2)], args.sup_t_min)}
            for fld in fields for e1, e2 in zip(epsilons, epsilons[1:])
        ]
    manifest = output.RunManifest(
        {**configs[0].to_dict(), "epsilons": epsilons}, [f.describe() for f in fields], args.out
    )
    with output.AtomicWriter(args.out) as w:
        for tag, name, text in texts:
            manifest.emitted_files.append((tag, w.write(name, text)))
        w.write("summary.json", output.dumps_json(table))
        manifest.wall_time = time.perf_counter() - t0
        w.write("manifest.json", output.dumps_json(manifest.to_dict()))
    return EXIT_OK


FLAG_NAMES = {
    "epsilon": "--epsilon",
    "n_trajectories": "--n",
    "max_steps": "--max-steps",
    "q0_span": "--q0-span",
    "v_max": "--v-max",
    "t_max": "--t-max",
    "threads": "--threads",
    "field": "--field",
    "slope": "--slope",
    "spacing": "--spacing",
    "intensity": "--intensity",
    "fit-range": "--fit-range",
    "from/to": "--from/--to",
}

COMMANDS = {"points": cmd_points, "simulate": cmd_simulate, "compare": cmd_compare}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConfigError as e:
        print(f"error: {FLAG_NAMES.get(e.param, e.param)}: {e.message}", file=sys.stderr)
        return EXIT_CONFIG
    except (ResourceLimitError, MemoryError) as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
