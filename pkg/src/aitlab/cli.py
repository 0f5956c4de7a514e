"""``aitlab`` command line: one subcommand per lab operation.

Results go to stdout as JSON with the run manifest under ``"manifest"``;
curve-style subcommands also accept ``--csv``. Exit codes: 0 success,
1 usage error, 2 input error, 3 unresolved within the declared bounds.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import distinguish, posp, truthtable
from .formula import FormulaError, parse_dimacs, parse_expr
from .manifest import RunManifest, dumps, rational
from .toymachine import complexity, enumeration, predictor
from .toymachine.machine import INSTRUCTION_SET_VERSION, as_bits

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_UNRESOLVED = 0, 1, 2, 3

TOY_COMMANDS = {"kexact", "uprob", "kraft", "codinggap", "census", "predict", "sseries"}
# flags that never change a payload and so stay out of the manifest
_NOT_ECHOED = {"command", "threads", "csv", "func"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


class _Unresolved(Exception):
    def __init__(self, payload):
        self.payload = payload


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _bits(text: str) -> str:
    try:
        return as_bits(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _load_formula(args):
    if args.dimacs and args.expr:
        raise UsageError("give either --dimacs or --expr, not both")
    if args.dimacs:
        return parse_dimacs(Path(args.dimacs).read_text())
    if args.expr is not None:
        return parse_expr(args.expr, args.n)
    raise UsageError("a formula is required (--dimacs FILE or --expr STRING)")


# -- formula-side commands ------------------------------------------------

def cmd_table(args):
    f = _load_formula(args)
    if args.out:
        ts = truthtable.write_table(f, Path(args.out), threads=args.threads)
    else:
        ts = truthtable.emit_table(f, threads=args.threads)
    return ts.to_json()


def cmd_count(args):
    f = _load_formula(args)
    ts = truthtable.emit_table(f, threads=args.threads)
    return ts.to_json()


def cmd_posp(args):
    f = _load_formula(args)
    return {"answer": posp.posp_decide(f, args.threshold),
            "threshold": rational(args.threshold)}


def cmd_sat(args):
    return {"satisfiable": posp.sat_decide(_load_formula(args))}


def cmd_sharpsat(args):
    f = _load_formula(args)
    if args.via_posp:
        k, trace = posp.sharp_sat_via_posp(f, verify=args.verify)
        return {"k": k, "n": f.num_vars, "trace": trace.to_json()}
    return {"k": truthtable.count_ones(f, threads=args.threads), "n": f.num_vars}


def cmd_bd(args):
    f = _load_formula(args)
    if args.search:
        answer, trace = posp.bd_search(f, args.g0, args.g1)
    else:
        answer, trace = posp.bd_via_posp(f, args.g0, args.g1, check_promise=args.check_promise)
    return {"answer": answer.value, "trace": trace.to_json()}


def cmd_entropy(args):
    return {"gamma": rational(args.gamma), "H": truthtable.binary_entropy(args.gamma)}


def cmd_classify(args):
    if args.k is not None:
        if args.n is None:
            raise UsageError("--k needs --n")
        ts = truthtable.TableSummary(args.n, args.k)
    else:
        f = _load_formula(args)
        ts = truthtable.emit_table(f, threads=args.threads)
    kind = truthtable.classify(ts, lambda n: n ** args.poly_degree, args.band)
    payload = {"type": kind.value, "summary": ts.to_json(),
               "poly_budget": ts.n ** args.poly_degree}
    if args.k is None:
        payload["description_bound"] = {"bits": truthtable.description_upper_bound(f),
                                        "c0": truthtable.DESCRIPTION_CONSTANT}
    return payload


def cmd_sample(args):
    buckets = truthtable.sample_ensemble(args.n, args.count, args.density, args.seed,
                                         width=args.width)
    return {"buckets": [{"gamma": rational(b.gamma), "members": b.members} for b in buckets]}


# -- toy machine commands -------------------------------------------------

def cmd_kexact(args):
    rec = complexity.k_exact(args.x, args.max_len, args.budget, workers=args.threads)
    payload = rec.to_json()
    if not rec.resolved:
        raise _Unresolved(payload)
    return payload


def cmd_uprob(args):
    pu = complexity.universal_probability(args.x, args.max_len, args.budget, args.mode,
                                          workers=args.threads)
    return {"x": args.x, "mode": args.mode, "pu": rational(pu),
            "minus_log2_pu": None if pu == 0 else -complexity.log2_fraction(pu)}


def cmd_kraft(args):
    census = enumeration.program_census(args.max_len, args.budget, workers=args.threads)
    rows = []
    for L in range(1, args.max_len + 1):
        s = census.restrict(L).kraft_sum()
        rows.append({"max_len": L, "kraft_sum": rational(s), "value": float(s)})
    if args.csv:
        return _csv(["max_len", "num", "den", "value"],
                    [[r["max_len"], r["kraft_sum"]["num"], r["kraft_sum"]["den"], r["value"]]
                     for r in rows])
    return {"kraft_sum": rational(census.kraft_sum()), "halting_programs": len(census.programs),
            "min_oob_len": census.min_oob_len, "curve": rows}


def cmd_codinggap(args):
    if args.x is not None:
        rec = complexity.k_exact(args.x, args.max_len, args.budget)
        if not rec.resolved:
            raise _Unresolved({"x": args.x, "error": "unresolved within bounds"})
        return {"x": args.x, "gap": complexity.coding_gap(args.x, args.max_len, args.budget),
                "record": rec.to_json()}
    table = complexity.coding_gap_table(args.up_to, args.max_len, args.budget)
    worst = max(table, key=lambda x: (table[x], -len(x), x))
    return {"resolved": len(table), "max_gap": table[worst], "argmax": worst,
            "gaps": table}


def cmd_census(args):
    cen = complexity.incompressibility_census(args.len, args.max_len, args.budget)
    if args.csv:
        return _csv(["k", "count", "bound"],
                    [[k, c, 2 ** (cen.L - k)] for k, c in sorted(cen.counts.items())])
    out = cen.to_json()
    out["bound_holds"] = cen.bound_holds()
    if cen.partial:
        raise _Unresolved(out)
    return out


def cmd_predict(args):
    try:
        pred = predictor.predict_next(args.prefix, args.max_len, args.budget)
    except complexity.Unresolved as exc:
        raise _Unresolved({"prefix": args.prefix, "error": str(exc)}) from None
    return {"prefix": args.prefix, "pu_prefix": rational(pred.pu_prefix),
            "P0": rational(pred.p0), "P1": rational(pred.p1), "leak": rational(pred.leak),
            "P0_value": float(pred.p0), "P1_value": float(pred.p1)}


def cmd_sseries(args):
    mu = predictor.Measure.parse(args.measure)
    series = predictor.prediction_error_series(mu, args.horizon, args.max_len, args.budget)
    if args.csv:
        run = 0.0
        rows = []
        for i, v in enumerate(series.s, start=1):
            run += v
            rows.append([i, repr(v), repr(run)])
        return _csv(["n", "S_n", "cumulative"], rows)
    return series.to_json()


# -- distinguishability commands ------------------------------------------

def cmd_statdist(args):
    out = {"distance": distinguish.stat_distance(args.p1, args.p2)}
    if args.m is not None:
        out["report"] = distinguish.report(args.p1, args.p2, args.m).to_json()
    return out


def cmd_theta(args):
    out = {"integral": distinguish.stat_distance_theta(args.theta1, args.theta2),
           "difference": args.theta2 - args.theta1}
    if args.m is not None:
        dt = distinguish.theta_uncertainty(args.theta1, args.m)
        out["theta_uncertainty"] = None if math.isinf(dt) else dt
    return out


def cmd_pack(args):
    ms = args.ms or [args.m]
    if ms == [None]:
        raise UsageError("pack needs --m or --ms")
    curve = distinguish.packing_curve(args.p1, args.p2, ms)
    if args.csv:
        return _csv(["m", "packing_count", "count_over_sqrt_m"],
                    [[m, c, repr(r)] for m, c, r in curve])
    return {"distance": distinguish.stat_distance(args.p1, args.p2),
            "curve": [{"m": m, "packing_count": c, "count_over_sqrt_m": r} for m, c, r in curve]}


def cmd_mintrials(args):
    return {"m": distinguish.min_trials_from_zero(args.p2)}


def cmd_mc(args):
    res = distinguish.mc_distinguish(args.p_true, args.p1, args.p2, args.m, args.runs,
                                     args.seed, threads=args.threads)
    return res.to_json()


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# -- parser ---------------------------------------------------------------

def _formula_flags(p):
    p.add_argument("--dimacs", metavar="FILE")
    p.add_argument("--expr", metavar="STRING")
    p.add_argument("--n", type=int, help="variable count for --expr (default: largest index)")


def _toy_flags(p, max_len=enumeration.DEFAULT_MAX_LEN):
    p.add_argument("--max-len", type=int, default=max_len, metavar="BITS")
    p.add_argument("--budget", type=int, default=enumeration.DEFAULT_BUDGET, metavar="STEPS")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="aitlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        p.add_argument("--threads", type=int, default=os.cpu_count() or 1, metavar="N")
        return p

    p = add("table", cmd_table, "emit the truth table (packed bits + JSON sidecar)")
    _formula_flags(p)
    p.add_argument("--out", metavar="FILE")
    p = add("count", cmd_count, "count satisfying assignments by brute force")
    _formula_flags(p)
    p = add("posp", cmd_posp, "is the fraction of ones above a threshold?")
    _formula_flags(p)
    p.add_argument("--threshold", type=_fraction, required=True)
    p = add("sat", cmd_sat, "satisfiability as the zero-threshold question")
    _formula_flags(p)
    p = add("sharpsat", cmd_sharpsat, "model count, optionally by threshold bisection")
    _formula_flags(p)
    p.add_argument("--via-posp", action="store_true")
    p.add_argument("--verify", action="store_true")
    p = add("bd", cmd_bd, "decide between two promised densities")
    _formula_flags(p)
    p.add_argument("--g0", type=_fraction, required=True)
    p.add_argument("--g1", type=_fraction, required=True)
    p.add_argument("--check-promise", action="store_true")
    p.add_argument("--search", action="store_true", help="bisection form (debug)")
    p = add("entropy", cmd_entropy, "binary entropy of a density")
    p.add_argument("--gamma", type=_fraction, required=True)
    p = add("classify", cmd_classify, "Type1 / Type2 / Other for a table summary")
    _formula_flags(p)
    p.add_argument("--k", type=int)
    p.add_argument("--poly-degree", type=int, default=2)
    p.add_argument("--band", type=float, default=1.0)
    p = add("sample", cmd_sample, "bucket random CNF formulas by density")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--density", type=float, default=4.0)
    p.add_argument("--width", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)

    p = add("kexact", cmd_kexact, "shortest printer within bounds")
    p.add_argument("--x", type=_bits, required=True)
    _toy_flags(p)
    p = add("uprob", cmd_uprob, "printer mass of a string")
    p.add_argument("--x", type=_bits, required=True)
    p.add_argument("--mode", choices=[complexity.EXACT, complexity.PREFIX],
                   default=complexity.EXACT)
    _toy_flags(p)
    p = add("kraft", cmd_kraft, "Kraft sum of halting programs")
    _toy_flags(p)
    p.add_argument("--csv", action="store_true")
    p = add("codinggap", cmd_codinggap, "K(x) + log2 P(x) for one string or all short ones")
    p.add_argument("--x", type=_bits)
    p.add_argument("--up-to", type=int, default=6)
    _toy_flags(p)
    p = add("census", cmd_census, "incompressibility census for strings of one length")
    p.add_argument("--len", type=int, required=True)
    _toy_flags(p, max_len=None)
    p.add_argument("--csv", action="store_true")
    p = add("predict", cmd_predict, "next-bit prediction from printer mass")
    p.add_argument("--prefix", type=_bits, required=True)
    _toy_flags(p)
    p = add("sseries", cmd_sseries, "prediction error series against a reference measure")
    p.add_argument("--measure", default="zeros",
                   help="zeros | alternating | bernoulli:R (R dyadic)")
    p.add_argument("--horizon", type=int, default=32)
    _toy_flags(p)
    p.add_argument("--csv", action="store_true")

    p = add("statdist", cmd_statdist, "statistical distance between two probabilities")
    p.add_argument("--p1", type=float, required=True)
    p.add_argument("--p2", type=float, required=True)
    p.add_argument("--m", type=int)
    p = add("theta", cmd_theta, "statistical distance between two angles by quadrature")
    p.add_argument("--theta1", type=float, required=True)
    p.add_argument("--theta2", type=float, required=True)
    p.add_argument("--m", type=int)
    p = add("pack", cmd_pack, "greedy count of mutually distinguishable probabilities")
    p.add_argument("--p1", type=float, required=True)
    p.add_argument("--p2", type=float, required=True)
    p.add_argument("--m", type=int)
    p.add_argument("--ms", type=int, nargs="+")
    p.add_argument("--csv", action="store_true")
    p = add("mintrials", cmd_mintrials, "trials needed to tell p2 from 0")
    p.add_argument("--p2", type=_fraction, required=True)
    p = add("mc", cmd_mc, "Monte Carlo maximum-likelihood discrimination")
    p.add_argument("--p-true", type=float, required=True)
    p.add_argument("--p1", type=float, required=True)
    p.add_argument("--p2", type=float, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--runs", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _params(args) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in _NOT_ECHOED or v is None or v is False:
            continue
        out[k] = rational(v) if isinstance(v, Fraction) else v
    return out


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.version:
            from . import __version__
            print(__version__, file=stdout)
            return EXIT_OK
        if args.command is None:
            raise UsageError(parser.format_usage().rstrip())
        if getattr(args, "threads", 1) < 1:
            raise UsageError("--threads must be >= 1")
        if args.command == "census" and args.max_len is None:
            args.max_len = max(args.len - 1, 2)
        payload = args.func(args)
        code = EXIT_OK
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except _Unresolved as exc:
        payload, code = exc.payload, EXIT_UNRESOLVED
    except (FormulaError, OSError, ValueError, posp.OracleFault,
            posp.PromiseViolation, complexity.Unresolved) as exc:
        print(f"aitlab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if isinstance(payload, str):  # CSV
        stdout.write(payload)
        return code
    manifest = RunManifest(
        args.command, _params(args), seed=getattr(args, "seed", None),
        instruction_set=INSTRUCTION_SET_VERSION if args.command in TOY_COMMANDS else None)
    payload = dict(payload)
    payload["manifest"] = manifest.to_json()
    stdout.write(dumps(payload) + "\n")
    return code


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
