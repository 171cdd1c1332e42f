"""Command-line interface.  Exit codes: 0 success, 1 usage or input format
error, 2 numeric or solver diagnostics."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .core import EXACT, InstanceFormatError, ObjectiveDescriptor, emit_instance, load_instance, vector
from .hull import LpError, SeparationError

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2

SCHEMA_HELP = """\
Instance files are JSON documents:
  {"n": int, "m": int, "K": int, "arithmetic": "exact" | "float",
   "matrices": [[[num | "p/q", ...], ...], ...],   # m matrices, row-major
   "a": [num | "p/q", ...],
   "objective": {"kind": "linear" | "l1" | "l2sq" | "linf", "c": [...]}}
Exact instances take integers or "p/q" strings; float instances take numbers.
"""


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _fmt(v):
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return repr(float(v))


def _vec(x):
    return "(" + ", ".join(_fmt(v) for v in x) + ")"


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _options(args):
    from .hull import Tolerance
    from .solver import SolverOptions

    rescale = None
    if getattr(args, "rescale", None) is not None:
        rescale = args.rescale
    return SolverOptions(
        engine=getattr(args, "engine", "auto"),
        rescale=rescale,
        tolerance=Tolerance(cross=args.tol, extreme=args.tol) if getattr(args, "tol", None) else Tolerance(),
        time_limit=getattr(args, "time_limit", None),
        lp_method=getattr(args, "lp_method", "clarkson"),
    )


def _instance(args):
    inst = load_instance(args.instance)
    kind = getattr(args, "objective", None)
    if kind:
        c = None
        if kind == "linear":
            if not args.c:
                raise UsageError("--objective linear needs --c")
            c = vector([Fraction(t) if inst.arithmetic == EXACT else float(t) for t in args.c.split(",")],
                       inst.arithmetic)
        inst = inst.with_objective(ObjectiveDescriptor(kind, c=c))
    return inst


# --- commands -----------------------------------------------------------------------


def cmd_solve(args):
    from .analysis import NkTrace, nk_csv
    from .solver import solve

    inst = _instance(args)
    res = solve(inst, _options(args))
    if args.json:
        print(json.dumps({"value": _fmt(res.value), "sequence": list(res.sequence),
                          "xK": [_fmt(v) for v in res.xK], "nk_trace": list(res.nk_trace), "engine": res.engine}))
    else:
        print(f"value: {_fmt(res.value)}")
        print(f"sequence: {' '.join(map(str, res.sequence))}")
        print(f"x(K): {_vec(res.xK)}")
        print(f"max N_k: {max(res.nk_trace)}  engine: {res.engine}")
    if args.trace_out:
        _write(args.trace_out, nk_csv(NkTrace(args.instance, res.nk_trace)))
    return EXIT_OK


def cmd_brute_force(args):
    from .solver import brute_force

    inst = _instance(args)
    value, seq, X = brute_force(inst, cap=args.cap)
    print(f"value: {_fmt(value)}")
    print(f"sequence: {' '.join(map(str, seq))}")
    print(f"|X_K|: {len(X)}")
    return EXIT_OK


def cmd_trace_nk(args):
    from .analysis import nk_csv, trace_nk

    inst = load_instance(args.instance)
    tr = trace_nk(inst, args.K, _options(args), instance_id=args.instance)
    _write(args.csv, nk_csv(tr))
    return EXIT_OK


def cmd_classify(args):
    from .analysis import classification_csv, classify_trace

    inst = load_instance(args.instance)
    if inst.n != 2:
        raise UsageError("classify needs a planar (n = 2) instance")
    _write(args.csv, classification_csv(classify_trace(inst, args.k)))
    return EXIT_OK


def cmd_gen_random(args):
    from .generate import GenSpec, gen_random

    inst = gen_random(GenSpec(args.n, args.m, args.K, seed=args.seed, mode=args.mode, objective=args.objective))
    _write(args.out, emit_instance(inst))
    return EXIT_OK


def cmd_gen_sat(args):
    from .reductions import dpll, parse_dimacs, sat_to_instance

    formula = parse_dimacs(Path(args.cnf).read_text(encoding="utf-8"))
    art = sat_to_instance(formula, right_stochastic=args.right_stochastic)
    _write(args.out, emit_instance(art.instance))
    print(f"threshold: {_fmt(art.threshold)} (satisfiable iff optimum equals it)", file=sys.stderr)
    if args.check:
        print(f"dpll: {'satisfiable' if dpll(formula) is not None else 'unsatisfiable'}", file=sys.stderr)
    return EXIT_OK


def cmd_check_mortal(args):
    from .reductions import check_k_mortal

    inst = load_instance(args.instance)
    mortal = check_k_mortal(inst.matrices, args.k, _options(args))
    print(f"{args.k}-mortal: {'yes' if mortal else 'no'}")
    return EXIT_OK


def cmd_jsr_bound(args):
    from .reductions import jsr_lower_bound

    inst = load_instance(args.instance)
    bound = jsr_lower_bound(inst.matrices, args.k, inst.a, args.p, _options(args))
    print(f"lower bound: {bound!r}")
    return EXIT_OK


def cmd_export_minlp(args):
    from .minlp import export_minlp

    inst = _instance(args)
    exp = export_minlp(inst)
    if args.out_prefix:
        Path(args.out_prefix + ".mod").write_text(exp.model, encoding="utf-8")
        Path(args.out_prefix + ".dat").write_text(exp.data, encoding="utf-8")
        print(f"wrote {args.out_prefix}.mod and {args.out_prefix}.dat "
              f"({exp.state_constraints} state rows, {exp.assignment_constraints} assignment rows, "
              f"{exp.binaries} binaries)")
    else:
        sys.stdout.write("# ---- model ----\n" + exp.model + "# ---- data ----\n" + exp.data)
    return EXIT_OK


def cmd_bench(args):
    from .bench import bench, parse_grid, report_csv, report_json, summarize

    spec = args.grid
    if Path(spec).is_file():
        spec = Path(spec).read_text(encoding="utf-8")
    try:
        grid = parse_grid(spec)
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        raise UsageError(f"bad grid: {exc}") from None
    records = bench(grid, args.time_limit, args.workers)
    if args.json:
        _write(args.json, report_json(records))
    if args.csv:
        _write(args.csv, report_csv(records))
    for row in summarize(records):
        mean = "-" if row["mean_seconds"] is None else f"{row['mean_seconds']:.3f}"
        print(f"(n,m,K)=({row['n']},{row['m']},{row['K']}): {row['solved']}/{row['instances']} solved, mean {mean} s")
    return EXIT_OK


# --- parser ---------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="switchmax", description="Optimal switching sequences for discrete-time switched linear systems.",
                epilog=SCHEMA_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", parser_class=_Parser, metavar="command")
    sub.required = True

    def solver_flags(sp, engine=True):
        if engine:
            sp.add_argument("--engine", choices=("auto", "lp", "graham"), default="auto")
            sp.add_argument("--lp-method", choices=("clarkson", "direct"), default="clarkson")
        sp.add_argument("--rescale", dest="rescale", action="store_true", default=None,
                        help="normalize each layer (default: on for float instances)")
        sp.add_argument("--no-rescale", dest="rescale", action="store_false")
        sp.add_argument("--tol", type=float, default=None, help="float tolerance for hull predicates")
        sp.add_argument("--time-limit", type=float, default=None)

    def objective_flags(sp):
        sp.add_argument("--objective", choices=("linear", "l1", "l2sq", "linf"))
        sp.add_argument("--c", help="comma-separated coefficients for --objective linear")

    s = sub.add_parser("solve", help="solve an instance")
    s.add_argument("instance")
    objective_flags(s)
    solver_flags(s)
    s.add_argument("--trace-out", help="write the k,N_k trace as CSV")
    s.add_argument("--json", action="store_true", help="print the result as JSON")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("brute-force", help="enumerate all m^K sequences")
    s.add_argument("instance")
    objective_flags(s)
    s.add_argument("--cap", type=int, default=2 ** 24)
    s.set_defaults(func=cmd_brute_force)

    s = sub.add_parser("trace-nk", help="vertex counts N_0..N_K as CSV")
    s.add_argument("instance")
    s.add_argument("--K", type=int, required=True)
    s.add_argument("--csv", default="-")
    solver_flags(s)
    s.set_defaults(func=cmd_trace_nk)

    s = sub.add_parser("classify", help="E0..E4 vertex classes per layer as CSV (n = 2)")
    s.add_argument("instance")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--csv", default="-")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("gen-random", help="seeded random instance")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--K", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--mode", choices=("float", "integer"), default="float")
    s.add_argument("--objective", choices=("l1", "l2sq", "linf"), default="l2sq")
    s.add_argument("-o", "--out", default="-")
    s.set_defaults(func=cmd_gen_random)

    s = sub.add_parser("gen-sat", help="instance from a DIMACS 3-CNF file")
    s.add_argument("cnf")
    s.add_argument("--right-stochastic", action="store_true")
    s.add_argument("--check", action="store_true", help="also report DPLL satisfiability")
    s.add_argument("-o", "--out", default="-")
    s.set_defaults(func=cmd_gen_sat)

    s = sub.add_parser("check-mortal", help="is some product of k matrices zero?")
    s.add_argument("instance")
    s.add_argument("--k", type=int, required=True)
    solver_flags(s)
    s.set_defaults(func=cmd_check_mortal)

    s = sub.add_parser("jsr-bound", help="lower bound (max ||x(k)||_p)^(1/k) using the instance's a")
    s.add_argument("instance")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--p", choices=("1", "2", "inf"), default="2")
    solver_flags(s)
    s.set_defaults(func=cmd_jsr_bound)

    s = sub.add_parser("export-minlp", help="AMPL model and data files")
    s.add_argument("instance")
    objective_flags(s)
    s.add_argument("--out-prefix", help="write <prefix>.mod and <prefix>.dat")
    s.set_defaults(func=cmd_export_minlp)

    s = sub.add_parser("bench", help="run a benchmark grid, e.g. '2,2,500x10;5,5,100x3'")
    s.add_argument("grid", help="grid spec, JSON text or a file holding either")
    s.add_argument("--time-limit", type=float, default=600.0)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--json", help="write per-instance records as JSON")
    s.add_argument("--csv", help="write per-instance records as CSV")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    from .analysis import FamilyError
    from .reductions import CnfError
    from .solver import SolverError

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except InstanceFormatError as exc:
        print(f"error: {exc}\n\n{SCHEMA_HELP}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, CnfError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SolverError, SeparationError, LpError, FamilyError, ValueError, KeyError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
