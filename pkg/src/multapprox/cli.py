"""Command line entry point: ``multapprox <subcommand> [flags]``.

Subcommands: count, predict, volume, bohr, exponent, experiment, selfcheck.
Every subcommand accepts ``--config file.ini``; keys in the section named after
the subcommand fill any flag not given on the command line.

Exit codes: 0 success, 1 usage error, 2 hypothesis violations under --strict.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time

from . import __version__, bohr, counting, exponents, experiments, geometry, predictors
from .fixedpoint import Frac64, parse
from .psi import parse_psi

EXIT_OK, EXIT_USAGE, EXIT_STRICT = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _vector(text) -> tuple[Frac64, ...]:
    if text is None:
        return None
    if isinstance(text, (tuple, list)):
        return tuple(text)
    return tuple(parse(tok) for tok in str(text).split(",") if tok.strip())


def _ints(text) -> list[int]:
    return [int(float(t)) for t in str(text).split(",") if t.strip()]


def _floats(text) -> list[float]:
    return [float(t) for t in str(text).split(",") if t.strip()]


def _common(p):
    p.add_argument("--config", help="INI file; section named after the subcommand")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--threads", type=int)
    p.add_argument("--strict", action="store_true",
                   help="exit 2 when hypothesis checks fail")
    p.add_argument("--seed", type=int)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="multapprox", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("count", help="exact count for one alpha")
    _common(p)
    p.add_argument("--mode", choices=[m.value for m in counting.Mode])
    p.add_argument("--k", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--psi")
    p.add_argument("--alpha", help="comma list: 0x<hex raw>, decimal, a/b, sqrt:m, golden")
    p.add_argument("--gamma")
    p.add_argument("--max-hits", type=int, dest="max_hits")

    p = sub.add_parser("predict", help="predictor partial sums")
    _common(p)
    p.add_argument("--kind", help="comma list of predictor kinds, or 'all'")
    p.add_argument("--k", type=int)
    p.add_argument("--N", help="comma list of checkpoints")
    p.add_argument("--psi")

    p = sub.add_parser("volume", help="exact and Monte Carlo volume of B_k / C_k")
    _common(p)
    p.add_argument("--k", type=int)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--samples", type=int)
    p.add_argument("--box", choices=("unit", "half"))

    p = sub.add_parser("bohr", help="Bohr set size, density and dyadic cells")
    _common(p)
    p.add_argument("--N", type=int)
    p.add_argument("--alpha")
    p.add_argument("--gamma")
    p.add_argument("--delta")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--w", type=float)
    p.add_argument("--kappa", type=float)
    p.add_argument("--list", action="store_true", help="include the members")

    p = sub.add_parser("exponent", help="exponent estimate / Littlewood record trail")
    _common(p)
    p.add_argument("--alpha")
    p.add_argument("--N", type=int)
    p.add_argument("--n-min", type=int, dest="n_min")
    p.add_argument("--metric", choices=[m.value for m in exponents.Metric])

    p = sub.add_parser("experiment", help="seeded batch of random-alpha trials")
    _common(p)
    p.add_argument("--theorem", choices=[t.value for t in experiments.PlanTheorem])
    p.add_argument("--k", type=int)
    p.add_argument("--psi")
    p.add_argument("--gamma")
    p.add_argument("--checkpoints", "--N", dest="checkpoints")
    p.add_argument("--trials", type=int)
    p.add_argument("--fibre")
    p.add_argument("--w", type=float)
    p.add_argument("--kappa", type=float)

    p = sub.add_parser("selfcheck", help="compare fast paths with brute-force oracles")
    _common(p)
    return ap


_DEFAULTS = {
    "count": {"mode": "multiplicative", "format": "json", "max_hits": 0},
    "predict": {"kind": "all", "k": 2, "format": "csv"},
    "volume": {"k": 2, "samples": 10**6, "seed": 0, "box": "unit", "format": "csv"},
    "bohr": {"format": "json"},
    "exponent": {"metric": "littlewood", "n_min": exponents.N_MIN, "format": "csv"},
    "experiment": {"trials": 20, "seed": 0, "format": "csv"},
    "selfcheck": {"seed": 0},
}

_TYPES = {"k": int, "N": str, "samples": int, "seed": int, "threads": int, "trials": int,
          "max_hits": int, "n_min": int, "lam": float, "epsilon": float, "w": float,
          "kappa": float, "strict": lambda s: str(s).lower() in ("1", "true", "yes", "on")}


def _merge(args, command):
    """Fill unset flags from the config section, then from built-in defaults."""
    cfg = experiments.load_config(args.config, command) if args.config else {}
    if "lambda" in cfg:
        cfg["lam"] = cfg.pop("lambda")
    defaults = _DEFAULTS.get(command, {})
    for key in {**defaults, **cfg}:
        if getattr(args, key, None) not in (None, False):
            continue
        if key in cfg:
            setattr(args, key, _TYPES.get(key, str)(cfg[key]))
        else:
            setattr(args, key, defaults[key])
    return args


def _need(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + m for m in missing))


def _emit(text, args):
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(rows, header, comments=()) -> str:
    buf = io.StringIO()
    for c in comments:
        buf.write(f"# {c}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def cmd_count(args) -> int:
    _need(args, "N", "psi", "alpha")
    alpha = _vector(args.alpha)
    if args.k is not None and args.k != len(alpha):
        raise UsageError(f"--k {args.k} but {len(alpha)} alpha coordinates given")
    q = counting.CountQuery(alpha, int(args.N), parse_psi(args.psi), args.mode,
                            _vector(args.gamma))
    t0 = time.perf_counter()
    res = counting.count(q, threads=args.threads, max_hits=args.max_hits)
    rec = {"mode": q.mode.value, "k": q.k, "N": q.N, "count": res.count,
           "elapsed": round(time.perf_counter() - t0, 6)}
    if res.flags:
        rec["flags"] = res.flags
    if args.max_hits:
        rec["hits"] = res.hits.tolist()
        rec["truncated"] = res.truncated
    _emit(json.dumps(rec) + "\n", args)
    return EXIT_OK


def cmd_predict(args) -> int:
    _need(args, "N", "psi")
    psi = parse_psi(args.psi)
    kinds = ([k for k in predictors.Kind] if args.kind == "all"
             else [predictors.Kind(k) for k in args.kind.split(",")])
    cps = _ints(args.N)
    rows, notes = [], []
    for kind in kinds:
        k = 1 if kind is predictors.Kind.ABH_PSI else args.k
        s = predictors.series(kind, cps, k, psi, threads=args.threads)
        rows += [(N, kind.value, repr(s.partial_sums[N])) for N in cps]
        notes += [f"{kind.value}: {f}" for f in s.flags]
    if args.format == "json":
        text = "".join(json.dumps({"N": N, "kind": kd, "value": float(v)}) + "\n"
                       for N, kd, v in rows)
    else:
        text = _csv(rows, ("N", "kind", "value"),
                    [f"psi: {psi.spec()}", f"k: {args.k}"] + notes)
    _emit(text, args)
    return EXIT_OK


def cmd_volume(args) -> int:
    _need(args, "lam")
    region = geometry.ProductRegion(args.k, args.lam, args.box)
    exact = region.exact()
    est, se = geometry.volume_monte_carlo(region, args.samples, args.seed)
    header = ("k", "lambda", "exact", "mc_estimate", "mc_stderr", "samples", "seed")
    row = (args.k, repr(args.lam), repr(exact), repr(est), repr(se), args.samples, args.seed)
    if args.format == "json":
        _emit(json.dumps(dict(zip(header, (args.k, args.lam, exact, est, se,
                                           args.samples, args.seed)))) + "\n", args)
    else:
        _emit(_csv([row], header), args)
    return EXIT_OK


def cmd_bohr(args) -> int:
    _need(args, "N", "alpha", "delta")
    alpha = _vector(args.alpha)
    spec = bohr.BohrSetSpec(int(args.N), alpha, _floats(args.delta), _vector(args.gamma))
    members = bohr.enumerate_bohr(spec, threads=args.threads)
    dens = bohr.bohr_density_report(spec, threads=args.threads)
    rec = {"N": spec.N, "k_minus_1": len(alpha), "delta": list(spec.delta),
           "count": dens.count, "normalized_ratio": dens.normalized_ratio,
           "expected": dens.expected}
    eps = args.epsilon
    if eps is None and args.w is not None and args.kappa is not None:
        choice = bohr.epsilon_select(len(alpha) + 1, args.w, args.kappa)
        eps = choice.epsilon
        rec["epsilon_halved"] = choice.halved
    if eps is not None:
        rec["epsilon"] = eps
        rec["hat_count"] = int(len(bohr.restrict_hat(members, spec.N, eps)))
        if spec.N >= 4:
            cells = bohr.dyadic_cells(spec.N, len(alpha) + 1, eps)
            rec["cells_per_axis"] = cells.per_axis
            rec["cell_count"] = cells.count
            rec["cells"] = [list(c) for c in cells.cells]
    if args.list:
        rec["members"] = members.tolist()
    _emit(json.dumps(rec) + "\n", args)
    return EXIT_OK


def cmd_exponent(args) -> int:
    _need(args, "alpha", "N")
    alpha = _vector(args.alpha)
    N = int(args.N)
    comments = []
    if args.metric == "littlewood":
        if len(alpha) != 2:
            raise UsageError("littlewood metric needs exactly two alpha coordinates")
        trail = exponents.littlewood_records(alpha[0], alpha[1], N, threads=args.threads)
    else:
        trail = exponents.exponent_trail(alpha, N, args.n_min)
    if N > args.n_min >= 2:
        est = exponents.estimate_mult_exponent(alpha, N, args.n_min, threads=args.threads)
        comments.append(f"exponent_estimate: {est!r}")
    rows = [(n, repr(float(v))) for n, v in trail.records]
    if args.format == "json":
        _emit("".join(json.dumps({"n": n, "value": float(v)}) + "\n"
                      for n, v in trail.records), args)
    else:
        _emit(_csv(rows, ("n", "value"), [f"metric: {trail.metric.value}"] + comments), args)
    return EXIT_OK


def cmd_experiment(args) -> int:
    _need(args, "theorem", "k", "psi", "checkpoints")
    plan = experiments.ExperimentPlan(
        theorem=args.theorem, k=args.k, psi=parse_psi(args.psi),
        checkpoints=tuple(_ints(args.checkpoints)), trials=args.trials, seed=args.seed,
        gamma=_vector(args.gamma), fixed_fibre=_vector(args.fibre),
        declared_w=args.w, kappa=args.kappa)
    result = experiments.run_plan(plan, threads=args.threads)
    text = experiments.ratio_table(result, fmt=args.format)
    _emit(text, args)
    for N, s in result.summary.items():
        print(f"N={N} median={s['median']} iqr={s['iqr']} min={s['min']}", file=sys.stderr)
    if args.strict and not result.hypotheses.ok:
        print("hypothesis violations: " + ", ".join(result.hypotheses.violations),
              file=sys.stderr)
        return EXIT_STRICT
    return EXIT_OK


def cmd_selfcheck(args) -> int:
    from .selfcheck import run_all

    results = run_all(seed=args.seed)
    for name, ok in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
    return EXIT_OK if all(ok for _, ok in results) else EXIT_USAGE


_COMMANDS = {"count": cmd_count, "predict": cmd_predict, "volume": cmd_volume,
             "bohr": cmd_bohr, "exponent": cmd_exponent, "experiment": cmd_experiment,
             "selfcheck": cmd_selfcheck}


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    if not argv:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        args = _merge(args, args.command)
        return _COMMANDS[args.command](args)
    except (UsageError, ValueError, TypeError) as exc:
        print(f"multapprox {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
