"""Command-line front end.

    fusionlim lambda -p 2 -G "Sym(3)" -M "natural(2)" --max-i 2
    fusionlim fusion-report -G "semidirect(tensor(natural(2),natural(2),natural(2)), prod(Sym(3),Sym(3),Sym(3)))"
    fusionlim verify-paper [--include-stretch] [--json]

Exit codes: 0 success, 1 a verification row failed, 2 malformed input,
3 budget exceeded, 4 internal consistency check failed.
"""

from __future__ import annotations

import argparse
import json
import signal
import sys

from .categories import CategoryError
from .expr import ParseError, build_group, build_module, module_prime
from .groups import BudgetExceeded, GroupError, is_prime
from .linalg import ComplexError
from .modules import ModuleError

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_BUDGET, EXIT_INTERNAL = 0, 1, 2, 3, 4


class TimeLimit(BudgetExceeded):
    pass


def _alarm(seconds: float | None):
    if not seconds or not hasattr(signal, "SIGALRM"):
        return

    def handler(signum, frame):
        raise TimeLimit(f"time limit of {seconds:g}s exceeded")

    signal.signal(signal.SIGALRM, handler)
    signal.setitimer(signal.ITIMER_REAL, seconds)


def _emit(obj: dict, as_json: bool, human: str, out_path: str | None = None):
    text = json.dumps(obj, indent=2, sort_keys=True, default=str)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    print(text if as_json else human)


def cmd_lambda(args) -> int:
    from .lam import lambda_bar_oracle, lambda_poset, lambda_resolution, vanishing_preflight

    G = build_group(args.group)
    p = module_prime(args.module)
    if args.prime is not None and args.prime != p:
        raise ParseError(f"-p {args.prime} does not match the module prime {p}")
    M = build_module(args.module, G)
    results = {}
    if args.backend in ("poset", "both"):
        results["poset"] = lambda_poset(G, M, args.max_i, max_orbits=args.budget_orbits)
    if args.backend in ("bar", "both"):
        results["bar"] = lambda_bar_oracle(G, M, args.max_i, max_chains=args.budget_chains)
    if args.backend == "resolution":
        results["resolution"] = lambda_resolution(G, M, args.max_i)
    dims = {k: r.dims for k, r in results.items()}
    agree = len({tuple(d) for d in dims.values()}) == 1
    report = {
        "prime": p, "group_spec": args.group, "module_spec": args.module,
        "group_order": G.order, "module_dim": M.dim, "max_i": args.max_i,
        "dims": next(iter(dims.values())), "backends": dims, "agree": agree,
        "certificate": vanishing_preflight(G, M),
    }
    human = "\n".join(f"Lambda^{i} = {d}" for i, d in enumerate(report["dims"]))
    if len(dims) > 1:
        human += f"\nbackends agree: {agree}"
    _emit(report, args.json, human, args.output)
    if not agree:
        return EXIT_INTERNAL
    return EXIT_OK


def cmd_fusion_report(args) -> int:
    from .fusion import classify_linking_systems, fusion_context

    if not args.group.replace(" ", "").startswith("semidirect("):
        raise ParseError("fusion-report needs a semidirect(ModExpr, GroupExpr) group")
    fc = fusion_context(args.group, p=args.prime, module_spec=args.module)
    report = classify_linking_systems(fc, i_max=args.max_i, max_orbits=args.budget_orbits)
    report.pop("seconds", None)
    lines = [f"Lambda^i(Gamma; M) = {report['lambda_dims']}",
             f"X-linking systems up to isomorphism: {report['x_classes']}",
             f"Y-linking systems up to isomorphism: {report['y_classes']} "
             f"({report['extendable_y_classes']} extends to X)",
             "per class: rep order |Out_F(P)| dim Z(P) Lambda^*(Out_F(P); Z(P))"]
    for row in report["per_class_table"]:
        lines.append(f"  {row['rep']:>6} {row['order']:>6} {row['outF_order']:>6} "
                     f"{row['zP_dim']:>3} {row['lambda_dims']}")
    _emit(report, args.json, "\n".join(lines), args.output)
    return EXIT_OK


def cmd_verify_paper(args) -> int:
    from .acceptance import run_all

    echo = None if args.json else print
    only = set(args.only.split(",")) if args.only else None
    rows = run_all(include_stretch=args.include_stretch, echo=echo, only=only)
    table = {"rows": [r.as_dict() for r in rows],
             "all_required_pass": all(r.passed for r in rows if r.required)}
    if args.json:
        print(json.dumps(table, indent=2, sort_keys=True, default=str))
    if args.output:
        with open(args.output, "w") as fh:
            json.dump(table, fh, indent=2, sort_keys=True, default=str)
    return EXIT_OK if table["all_required_pass"] else EXIT_FAIL


def _positive(kind):
    def conv(text):
        v = kind(text)
        if v <= 0:
            raise argparse.ArgumentTypeError("must be positive")
        return v
    return conv


def _prime(text):
    v = int(text)
    if not is_prime(v):
        raise argparse.ArgumentTypeError(f"{v} is not prime")
    return v


def _degree(text):
    v = int(text)
    if not 0 <= v <= 4:
        raise argparse.ArgumentTypeError("degree bound must be between 0 and 4")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fusionlim",
                                 description="Higher limits, fusion systems and linking systems.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-p", "--prime", type=_prime)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("-o", "--output", help="also write the JSON report here")
    common.add_argument("--budget-chains", type=_positive(int), default=5_000_000,
                        help="maximum normalized chains for the bar oracle")
    common.add_argument("--budget-orbits", type=_positive(int), default=100_000,
                        help="maximum chain orbits for the poset backend")
    common.add_argument("--time-limit", type=_positive(float), default=None,
                        help="seconds before giving up (exit 3)")
    sub = ap.add_subparsers(dest="command", required=True)

    lam = sub.add_parser("lambda", parents=[common], help="dimensions of Lambda^i(Gamma; M)")
    lam.add_argument("-G", "--group", required=True)
    lam.add_argument("-M", "--module", required=True)
    lam.add_argument("--max-i", type=_degree, default=3)
    lam.add_argument("--backend", choices=["poset", "bar", "both", "resolution"], default="poset")
    lam.set_defaults(func=cmd_lambda)

    fr = sub.add_parser("fusion-report", parents=[common],
                        help="classification report for G = M x| Gamma")
    fr.add_argument("-G", "--group", required=True)
    fr.add_argument("-M", "--module", default=None, help="label for the module (optional)")
    fr.add_argument("--max-i", type=_degree, default=4)
    fr.set_defaults(func=cmd_fusion_report)

    vp = sub.add_parser("verify-paper", parents=[common], help="run the acceptance battery")
    vp.add_argument("--include-stretch", action="store_true")
    vp.add_argument("--only", default=None, help="comma-separated criterion ids, e.g. 1,3")
    vp.set_defaults(func=cmd_verify_paper)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_PARSE if e.code else EXIT_OK
    _alarm(args.time_limit)
    try:
        return args.func(args)
    except (ParseError, ModuleError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (ComplexError, CategoryError, GroupError) as e:
        print(f"internal check failed: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    finally:
        if args.time_limit and hasattr(signal, "SIGALRM"):
            signal.setitimer(signal.ITIMER_REAL, 0)


if __name__ == "__main__":
    sys.exit(main())
