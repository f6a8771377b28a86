"""Command line entry point ``fhlie``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .. import exactalg as ea
from .. import freelie as fl
from .. import frobenius as fb
from ..liering import LieRingError, parse_lie_ring
from ..pgroup import groups as gr
from . import dashboards as db
from .report import MAX_EXIT, Report
from .scenario import ScenarioError, load_scenario

INPUT_ERROR = 126  # above every verdict count, so never confused with failures


def _read(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text()


def _lie(args) -> Report:
    L = parse_lie_ring(_read(args.input))
    if args.action == "validate":
        return db.lie_validate(L)
    if args.action == "series":
        return db.lie_series(L)
    if args.phi is None or args.k is None:
        raise ValueError("lie components needs --phi and --k")
    phi, _ = ea.parse_matrix(_read(args.phi))
    h = ea.parse_matrix(_read(args.h))[0] if args.h else None
    return db.lie_components(L, phi, args.k, h, args.r)


def _group(args) -> Report:
    if args.action == "example1":
        return db.example1_sweep([args.n], args.budget, oracle=args.report)
    return db.group_report(db.named_group(args.name), args.name, args.budget)


def _freelie(args) -> Report:
    inst = fl.Prop2Instance(args.p, args.k, args.q, args.r, args.c, tuple(args.indices), args.wmax)
    if args.f is not None and args.f != inst.f:
        raise ValueError(f"--f {args.f} but {inst.f} indices were given")
    return db.prop2(inst, oracles=not args.no_oracles)


def _fh(args) -> Report:
    if args.action == "validate":
        return db.fh_validate(fb.FHSpec(args.p, args.k, args.q, args.r))
    return db.section_lemma(fb.parse_module(_read(args.input)))


def _run(args) -> Report:
    sc = load_scenario(args.scenario)
    if args.budget_given or sc.budget is None:
        sc.budget = args.budget
    if args.out is None and sc.output:
        args.out = str(sc.path("output") if sc.output != "-" else "-")
    return db.run(sc)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS keeps a subcommand's copy from clobbering a value given earlier
    common.add_argument("--out", default=argparse.SUPPRESS, help="write the TSV tables and verdicts here")
    common.add_argument("--budget", type=int, default=argparse.SUPPRESS, help="cap on enumerated elements")

    ap = argparse.ArgumentParser(prog="fhlie", description="Exact checks for Lie rings and p-groups with "
                                 "Frobenius groups of automorphisms.", parents=[common])
    sub = ap.add_subparsers(dest="command", required=True)

    lie = sub.add_parser("lie", parents=[common], help="Lie rings over Z/p^a")
    lie.add_argument("action", choices=["validate", "series", "components"])
    lie.add_argument("--input", required=True, help="Lie ring text file ('-' for stdin)")
    lie.add_argument("--phi", help="matrix file of the automorphism")
    lie.add_argument("--k", type=int, help="phi has order p^k")
    lie.add_argument("--h", help="matrix file of h (optional)")
    lie.add_argument("--r", type=int, help="h^-1 phi h = phi^r")
    lie.set_defaults(func=_lie)

    grp = sub.add_parser("group", parents=[common], help="enumerable p-groups")
    gsub = grp.add_subparsers(dest="action", required=True)
    ex = gsub.add_parser("example1", parents=[common], help="the BCH 2-group T = L/2^n L")
    ex.add_argument("--n", type=int, required=True)
    ex.add_argument("--report", action="store_true", help="also run the closure oracle for the derived length")
    rp = gsub.add_parser("report", parents=[common], help="series and associated Lie ring of a named group")
    rp.add_argument("name")
    grp.set_defaults(func=_group)

    fr = sub.add_parser("freelie", parents=[common], help="free Lie ring verifier")
    fsub = fr.add_subparsers(dest="action", required=True)
    p2 = fsub.add_parser("prop2", parents=[common], help="smallest w with n^w [y_1,...,y_f] in the zero-sum ideal")
    for name in ("p", "k", "q", "r", "c"):
        p2.add_argument(f"--{name}", type=int, required=True)
    p2.add_argument("--f", type=int)
    p2.add_argument("--indices", type=int, nargs="+", required=True)
    p2.add_argument("--wmax", type=int, default=8)
    p2.add_argument("--no-oracles", action="store_true")
    fr.set_defaults(func=_freelie)

    fh = sub.add_parser("fh", parents=[common], help="Frobenius groups FH and their modules")
    hsub = fh.add_subparsers(dest="action", required=True)
    va = hsub.add_parser("validate", parents=[common])
    for name in ("p", "k", "q", "r"):
        va.add_argument(f"--{name}", type=int, required=True)
    sl = hsub.add_parser("section-lemma", parents=[common])
    sl.add_argument("--input", required=True, help="module file ('-' for stdin)")
    fh.set_defaults(func=_fh)

    run = sub.add_parser("run", parents=[common], help="run a scenario file")
    run.add_argument("scenario")
    run.set_defaults(func=_run)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    args.budget_given = hasattr(args, "budget")
    args.out = getattr(args, "out", None)
    args.budget = getattr(args, "budget", gr.DEFAULT_BUDGET)
    try:
        rep = args.func(args)
    except (ScenarioError, ValueError, LieRingError, fb.HypothesisError, gr.GroupError, OSError) as e:
        print(f"fhlie: error: {e}", file=sys.stderr)
        return INPUT_ERROR
    except gr.BudgetExceeded as e:
        print(f"fhlie: budget exceeded: {e}", file=sys.stderr)
        return INPUT_ERROR
    tsv = rep.to_tsv()
    if args.out and args.out != "-":
        Path(args.out).write_text(tsv)
    else:
        sys.stdout.write(tsv + "\n")
    sys.stdout.write(rep.summary())
    return min(rep.exit_code, MAX_EXIT)


if __name__ == "__main__":
    sys.exit(main())
