"""Command-line front end.

Exit status is 0 when every requested check holds, 1 when one fails (the
report carries a witness) and 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import os
import shlex
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import catalog, congruence, ideals, lattice, sasaki, terms
from .report import ERROR, Report


def _workers():
    raw = os.environ.get("ALLAB_THREADS", "0")
    try:
        k = int(raw)
    except ValueError:
        k = 0
    return k if k > 0 else (os.cpu_count() or 1)


def _labels(L, elems):
    return sorted((L.labels[i] for i in elems), key=L.index)


def _asg(L, assignment):
    return {v: L.labels[i] for v, i in assignment.items()}


def _at(L, assignment):
    return ", ".join(f"{v}={L.labels[i]}" for v, i in assignment.items())


def _subset(L, text):
    return [L.index(s.strip()) for s in text.split(",") if s.strip()]


def _load(args):
    return lattice.load(args.input)


# sub-commands


def cmd_validate(args, rep):
    L = _load(args)
    rep.info("elements", str(L.n), L.labels)
    rep.info("covers", str(len(L.covers())))
    rep.info("complemented", "yes" if L.is_complemented else "no")


def cmd_classify(args, rep):
    L = _load(args)
    flags = lattice.classify(L)
    for name, value in flags.flags().items():
        wit = flags.witnesses.get(name)
        detail = "true" if value else "false"
        if wit:
            detail += " at " + ", ".join(f"{k}={v}" for k, v in wit.items())
        rep.info(name, detail, wit)


def _variety(L, rep):
    if not L.is_complemented:
        why = sasaki.membership_failure(L)
        rep.verdict("variety", False, witness={"x": L.labels[why[1]["x"]]},
                    fail_detail=f"unary map is not a complementation at {_at(L, why[1])}")
        return
    fails = {}
    for key in ("b", "e"):
        r = terms.check_identity(L, sasaki.CONDITIONS[key])
        if r != terms.HOLDS:
            fails[key] = r.assignment
    detail = "; ".join(f"identity ({k}) fails at {_at(L, a)}" for k, a in fails.items())
    rep.verdict("variety", not fails, "complemented, identities (b) and (e) hold",
                witness={k: _asg(L, a) for k, a in fails.items()}, fail_detail=detail)


CHECKS = ("adjoint", "variety", "conditions", "forcing")


def cmd_check(args, rep):
    L = _load(args)
    wanted = [k for k in CHECKS if getattr(args, k)] or list(CHECKS)
    if "adjoint" in wanted:
        a = sasaki.check_adjoint(L)
        wit = None
        if not a.holds:
            wit = {"x": L.labels[a.witness[0]], "y": L.labels[a.witness[1]],
                   "z": L.labels[a.witness[2]], "direction": a.direction}
        rep.verdict("adjoint", a.holds, f"{a.triples} triples", wit, a.describe(L))
    if "variety" in wanted:
        _variety(L, rep)
    if "conditions" in wanted:
        if not L.is_complemented:
            rep.add("conditions", ERROR, "unary map is not a complementation")
        else:
            t = sasaki.check_conditions(L)
            for k, ok in t.verdicts.items():
                cex = t.counterexamples.get(k)
                rep.verdict(f"condition ({k})", ok, witness=cex and _asg(L, cex),
                            fail_detail=cex and f"fails at {_at(L, cex)}")
            rep.verdict("groups agree", t.first_group_agrees and t.second_group_agrees,
                        "(a)=(b)=(c) and (d)=(e)=(f)", witness=t.verdicts,
                        fail_detail="conditions within a group disagree")
    if "forcing" in wanted:
        v = sasaki.check_complement_forcing(L)
        rep.verdict("forcing", v != sasaki.VIOLATION, v, witness={"verdict": v})


def cmd_congruences(args, rep):
    L = _load(args)
    cons = congruence.all_congruences(L)
    if args.list or not (args.properties or args.malcev or args.regularity_terms):
        rep.info("count", str(len(cons)))
        for i, c in enumerate(cons):
            rep.info(f"congruence {i}", c.describe(L), c.labelled_blocks(L))
    if args.properties:
        p = congruence.check_congruence_properties(L, cons)
        for name, ok in p.flags().items():
            if name in ("simple", "subdirectly_irreducible"):
                rep.info(name, "true" if ok else "false")
                continue
            wit = p.witnesses.get(name)
            rep.verdict(name, ok, witness=wit and [_c_or_x(L, w) for w in wit],
                        fail_detail=wit and "witness " + " ; ".join(
                            str(_c_or_x(L, w)) for w in wit))
        if "monolith" in p.witnesses:
            rep.info("monolith", p.witnesses["monolith"].describe(L))
    if args.malcev or args.regularity_terms:
        sasaki.require_member(L)
        tr = congruence.verify_witness_terms(L)
        if args.malcev:
            for text, r in {**tr.malcev, **tr.majority}.items():
                _identity_verdict(L, rep, text, r)
        if args.regularity_terms:
            _identity_verdict(L, rep, "reg1(x,y,z) = reg2(x,y,z) = z iff x = y", tr.regularity)


def _c_or_x(L, w):
    if isinstance(w, congruence.Congruence):
        return w.labelled_blocks(L)
    return L.labels[w]


def _identity_verdict(L, rep, name, result):
    if result == terms.HOLDS:
        rep.add(name, "holds")
    else:
        rep.add(name, "fails", f"fails at {_at(L, result.assignment)}",
                _asg(L, result.assignment))


def cmd_ideals(args, rep):
    L = _load(args)
    sasaki.require_member(L)
    if args.list or not (args.closure or args.theta or args.coincidence):
        found = ideals.all_ideals(L)
        rep.info("count", str(len(found)))
        for I in found:
            labs = _labels(L, I)
            rep.info("ideal", "{" + ",".join(labs) + "}", labs)
    if args.closure is not None:
        c = ideals.ideal_closure(L, _subset(L, args.closure))
        labs = _labels(L, c)
        rep.info("closure", "{" + ",".join(labs) + "}", labs)
    if args.theta is not None:
        S = _subset(L, args.theta)
        if not ideals.is_ideal(L, S):
            raise ideals.NotAnIdeal(f"{{{args.theta}}} is not an ideal")
        th = ideals.theta_of_ideal(L, S)
        rep.add("theta", "holds", th.describe(L))
        rep.info("theta blocks", th.describe(L), th.labelled_blocks(L))
    if args.coincidence:
        r = ideals.verify_kernel_coincidence(L)
        rep.verdict("coincidence", r.holds, f"{len(r.ideals)} ideals = {len(r.kernels)} kernels",
                    witness={"only_ideals": [_labels(L, i) for i in r.only_ideals],
                             "only_kernels": [_labels(L, k) for k in r.only_kernels],
                             "injective": r.injective},
                    fail_detail="ideals and congruence kernels differ")


def cmd_generate(args, rep):
    if args.family != "m_n":
        raise ValueError(f"unknown family {args.family!r}")
    L = catalog.make_m_n(args.n, args.perm)
    if args.out:
        L.save(args.out)
        rep.info("wrote", args.out)
    else:
        rep.info("lattice", L.to_json(), L.to_dict())
    rep.info("variety", "yes" if sasaki.is_member_of_V(L) else "no")


def _sweep(n):
    rows = []
    for L in catalog.enumerate_bounded_lattices(n):
        comps = lattice.all_complementations(L)
        members = [c for c in comps if sasaki.is_member_of_V(L.with_unary(c))]
        rows.append((L.name, L.to_dict(), len(comps), len(members)))
    return rows


def cmd_enumerate(args, rep):
    if args.max_n > catalog.MAX_ENUM_N:
        raise ValueError(f"--max-n is capped at {catalog.MAX_ENUM_N}")
    ns = list(range(1, args.max_n + 1))
    if _workers() > 1 and len(ns) > 1:
        with ProcessPoolExecutor(max_workers=min(_workers(), len(ns))) as pool:
            results = list(pool.map(_sweep, ns))
    else:
        results = [_sweep(n) for n in ns]
    out_dir = Path(args.out_dir) if args.out_dir else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
    for n, rows in zip(ns, results):
        if args.filter == "variety":
            kept = [r for r in rows if r[3]]
            total = sum(r[3] for r in rows)
            rep.info(f"n={n}", f"{len(kept)} lattices admit a complementation in the variety; "
                               f"{total} (lattice, complementation) members")
        elif args.filter == "complemented":
            kept = [r for r in rows if r[2]]
            rep.info(f"n={n}", f"{len(kept)} complemented lattices")
        else:
            kept = rows
            rep.info(f"n={n}", f"{len(kept)} lattices")
        if out_dir:
            for name, data, _, _ in kept:
                (out_dir / f"{name}.json").write_text(json.dumps(data, indent=2) + "\n")


def cmd_identities(args, rep):
    L = _load(args)
    path = Path(args.file)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc.strerror}") from None
    for lineno, line, stmt in terms.parse_identity_file(text):
        r = terms.check_statement(L, stmt)
        _identity_verdict(L, rep, f"line {lineno}: {line}", r)


COMMANDS = {
    "validate": cmd_validate,
    "classify": cmd_classify,
    "check": cmd_check,
    "congruences": cmd_congruences,
    "ideals": cmd_ideals,
    "generate": cmd_generate,
    "enumerate": cmd_enumerate,
    "identities": cmd_identities,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the report as JSON")
    with_input = argparse.ArgumentParser(add_help=False, parents=[common])
    with_input.add_argument("--in", dest="input", required=True, metavar="FILE",
                            help="lattice interchange file")

    parser = argparse.ArgumentParser(prog="allab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[with_input], help="parse and validate a lattice file")
    sub.add_parser("classify", parents=[with_input], help="structural flags with witnesses")

    p = sub.add_parser("check", parents=[with_input], help="adjointness and variety membership")
    p.add_argument("--adjoint", action="store_true", help="the adjointness condition")
    p.add_argument("--variety", action="store_true", help="membership in the variety")
    # the second spelling of each flag is kept for compatibility
    p.add_argument("--conditions", "--theorem1", dest="conditions", action="store_true",
                   help="conditions (a)-(f) and the agreement of their two groups")
    p.add_argument("--forcing", "--lemma1", dest="forcing", action="store_true",
                   help="adjointness forces a complementation")

    p = sub.add_parser("congruences", parents=[with_input], help="congruence lattice and terms")
    p.add_argument("--list", action="store_true")
    p.add_argument("--properties", action="store_true")
    p.add_argument("--malcev", action="store_true")
    p.add_argument("--regularity-terms", action="store_true")

    p = sub.add_parser("ideals", parents=[with_input], help="ideals and their congruences")
    p.add_argument("--list", action="store_true")
    p.add_argument("--closure", metavar="S", help="comma-separated labels")
    p.add_argument("--theta", metavar="S", help="comma-separated labels of an ideal")
    p.add_argument("--coincidence", action="store_true")

    p = sub.add_parser("generate", parents=[common], help="generate a named family member")
    p.add_argument("family", choices=["m_n"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--perm", default=None, help="derangement in cycle notation, e.g. '(1 2)(3 4)'")
    p.add_argument("--out", default=None)

    p = sub.add_parser("enumerate", parents=[common], help="bounded lattices up to isomorphism")
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--filter", choices=["variety", "complemented"], default=None)
    p.add_argument("--out-dir", default=None)

    p = sub.add_parser("identities", parents=[with_input], help="check an identities file")
    p.add_argument("--file", required=True)
    return parser


INPUT_ERRORS = (
    lattice.LatticeError, terms.ParseError, terms.UnknownTerm, sasaki.NotInV,
    sasaki.NotComplemented, ideals.NotAnIdeal, catalog.NotADerangement, ValueError, OSError,
)


def run(argv=None):
    """Run one command and return ``(report, exit_status)``."""
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    rep = Report("allab " + shlex.join(argv))
    try:
        COMMANDS[args.command](args, rep)
    except INPUT_ERRORS as exc:
        rep.add("input", ERROR, str(exc))
    return rep, rep.exit_status


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        rep, status = run(argv)
    except SystemExit as exc:
        # argparse usage errors
        return 2 if exc.code else 0
    print(rep.to_json() if "--json" in argv else rep.to_text())
    return status


if __name__ == "__main__":
    sys.exit(main())
