"""Command-line front end.

Exit statuses: 0 success, 1 verification failure (or a negative answer),
2 inconclusive, 3 usage or parse error.  ``--json`` prints one object that
follows ``schemas/report.schema.json``; ``cluster ... json`` follows
``schemas/cluster.schema.json`` instead.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from . import abelian, cluster, fn, hnn
from .machines import evaluate_word
from .relations import FAMILIES, verify_relation_family
from .rewrite import BudgetExceeded, Inconclusive, Verdict, is_identity, to_standard_form
from .seq import ArityError, Seq, Variant, parse_word
from .words import GroupWord, ParseError, parse_word_text, x_only_treepair

EXIT_OK, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 3
_STATUS = {EXIT_OK: "ok", EXIT_FAIL: "fail", EXIT_INCONCLUSIVE: "inconclusive"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _word(text: str, n: int) -> GroupWord:
    return parse_word_text(text, n)


def _x_word(text: str, n: int) -> fn.TreePair:
    w = _word(text, n)
    if any(not l.is_x for l in w):
        raise UsageError("this command needs a word in x letters only")
    return x_only_treepair(w)


# -- subcommands; each returns (exit code, text, json result) -----------------


def cmd_eval(a, n):
    w = _word(a.word, n)
    img = evaluate_word(w, Seq.parse(a.point, n))
    return EXIT_OK, str(img), str(img)


def cmd_eq(a, n):
    w1, w2 = _word(a.left, n), _word(a.right, n)
    res = is_identity(w1 * w2.inverse(), budget=a.budget)
    if res.verdict is Verdict.TRUE:
        return EXIT_OK, "EQUAL", {"verdict": "EQUAL", "route": res.route}
    if res.verdict is Verdict.FALSE:
        wit = str(res.witness) if res.witness is not None else None
        text = "DIFFERENT" + (f" (moved point {wit})" if wit else "")
        return EXIT_FAIL, text, {"verdict": "DIFFERENT", "witness": wit, "route": res.route}
    return EXIT_INCONCLUSIVE, "INCONCLUSIVE", {"verdict": "INCONCLUSIVE"}


def cmd_std(a, n):
    sf = to_standard_form(_word(a.word, n))
    return EXIT_OK, str(sf), {"fpart": str(sf.fpart), "ypart": [str(l) for l in sf.ypart]}


def cmd_abel(a, n):
    if a.map == "a":
        if a.verify:
            raise UsageError("--verify applies to the variant maps")
        vec = fn.abelianization_a(_x_word(a.word, n))
        return EXIT_OK, " ".join(map(str, vec)), list(vec)
    variant = Variant.parse(a.map)
    if a.verify:
        cert = abelian.rank_certificate(variant, n)
        rep = abelian.verify_pi_well_defined(variant, n, samples=a.samples)
        ok = cert.ok and rep.ok
        lines = [f"generators: {' '.join(cert.generators)}", f"determinant: {cert.determinant}",
                 f"relations checked: {a.samples} x {len(FAMILIES)}, failures: {len(rep.failures)}"]
        lines += rep.failures[:10]
        lines.append("PASS" if ok else "FAIL")
        return (EXIT_OK if ok else EXIT_FAIL), "\n".join(lines), {
            "generators": cert.generators, "matrix": cert.matrix, "determinant": cert.determinant,
            "failures": rep.failures}
    if a.word is None:
        raise UsageError("abel needs a word unless --verify is given")
    vec = abelian.pi_word(variant, _word(a.word, n))
    return EXIT_OK, " ".join(map(str, vec)), list(vec)


def cmd_rel(a, n):
    variants = [Variant.parse(a.variant)] if a.variant else list(Variant)
    families = [a.family] if a.family else list(FAMILIES)
    lines, result, code = [], [], EXIT_OK
    for v in variants:
        for f in families:
            rep = verify_relation_family(f, v, n, samples=a.samples, seed=a.seed)
            status = "PASS" if rep.ok else ("INCONCLUSIVE" if not rep.failures else "FAIL")
            lines.append(f"{v.name} family {f}: {status} ({rep.samples} samples, "
                         f"{len(rep.failures)} failures, {rep.inconclusive} inconclusive)")
            lines += [f"  {lhs}: {why}" for lhs, why in rep.failures[:5]]
            result.append({"variant": v.name, "family": f, "failures": len(rep.failures),
                           "inconclusive": rep.inconclusive})
            if rep.failures:
                code = EXIT_FAIL
            elif rep.inconclusive and code == EXIT_OK:
                code = EXIT_INCONCLUSIVE
    return code, "\n".join(lines), result


def cmd_hnn(a, n):
    case = hnn.get_case(a.case)
    if a.action == "verify":
        rep = hnn.verify_ascending(case, n, depth=a.depth)
        text = [f"{case.id.name}: {case.whole_name()} ascending over its base, "
                f"{rep.checked} generators checked, rules {rep.rules}"]
        text += rep.failures[:10] + ["PASS" if rep.ok else "FAIL"]
        return (EXIT_OK if rep.ok else EXIT_FAIL), "\n".join(text), {
            "case": case.id.name, "checked": rep.checked, "rules": rep.rules, "failures": rep.failures}
    if a.action == "witness":
        w = hnn.strictness_witness(case, n)
        ok = hnn.check_witness(w, n)
        text = [f"{case.id.name}: element {w.element}", f"mode {w.mode.value}"]
        if w.point is not None:
            text.append(f"point {w.point}")
        if w.cylinder is not None:
            text.append(f"cylinder {''.join(map(str, w.cylinder))}")
        if w.note:
            text.append(w.note)
        text.append("PASS" if ok else "FAIL")
        return (EXIT_OK if ok else EXIT_FAIL), "\n".join(text), {
            "case": case.id.name, "element": str(w.element), "mode": w.mode.value,
            "point": None if w.point is None else str(w.point), "ok": ok}
    if a.word is None:
        raise UsageError("conjugate needs a word")
    img = hnn.conjugate_by_stable(case, _word(a.word, n), direction=-1 if a.inverse else 1)
    return EXIT_OK, str(img), str(img)


def _parse_type2(text: Optional[str]) -> frozenset[int]:
    if not text:
        return frozenset()
    try:
        return frozenset(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise UsageError(f"bad --type2 list {text!r}")


def cmd_cluster(a, n):
    c = cluster.cluster(cluster.Arrangement(a.m, _parse_type2(a.type2)))
    if a.action == "euler":
        chi = cluster.euler_characteristic(c)
        return EXIT_OK, str(chi), chi
    if a.action == "cells":
        lines = [f"dim {d}: {k}" for d, k in enumerate(c.counts())]
        lines += [f"{cell.dim} {list(cell.sign)}" for cell in c.cells] if a.verbose else []
        return EXIT_OK, "\n".join(lines), list(c.counts())
    if a.action == "dot":
        dot = cluster.to_dot(c)
        return EXIT_OK, dot, dot
    return EXIT_OK, json.dumps(cluster.to_json(c)), None


def cmd_special(a, n):
    ok = cluster.is_special(_word(a.word, n), n)
    return (EXIT_OK if ok else EXIT_FAIL), ("special" if ok else "not special"), ok


def cmd_hgraph(a, n):
    lines = Path(a.list).read_text(encoding="utf-8").splitlines()
    sl = cluster.SortedList.parse(lines, n)
    if not (sl.is_sorted() and sl.is_proper()):
        raise UsageError("the list must be sorted and proper")
    base = _word(a.base, n) if a.base else None
    if a.action == "build":
        h = cluster.h_subgraph(sl, base)
        code = EXIT_OK if h.distinct else (EXIT_INCONCLUSIVE if h.undecided else EXIT_FAIL)
        return code, h.to_dot(), {"vertices": h.vertex_count(), "edges": len(h.edges),
                                  "distinct": h.distinct}
    rep = cluster.skeleton_report(sl, base)
    text = f"Y = {sorted(rep.Y)}; cluster edges {len(rep.cluster_edges)}, H edges {len(rep.h_edges)}: " + (
        "MATCH" if rep.ok else "MISMATCH")
    return (EXIT_OK if rep.ok else EXIT_FAIL), text, {"Y": sorted(rep.Y), "match": rep.ok}


def cmd_support(a, n):
    ivs = fn.support(_x_word(a.word, n))
    return EXIT_OK, "\n".join(map(str, ivs)) or "empty", [[str(i.lo), str(i.hi)] for i in ivs]


def cmd_dense(a, n):
    tp = fn.dense_support_element(parse_word(a.prefix, n), n)
    return EXIT_OK, str(tp), str(tp)


def _global_options(p: argparse.ArgumentParser, default) -> None:
    pick = lambda value: value if default is None else default
    p.add_argument("-n", type=int, default=pick(None), help="arity (2..10), required")
    p.add_argument("--json", action="store_true", default=pick(False), help="machine-readable output")
    p.add_argument("--samples", type=int, default=pick(200))
    p.add_argument("--depth", type=int, default=pick(5))
    p.add_argument("--budget", type=int, default=pick(60_000), help="configuration budget of the exact search")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lmwb", description="Thompson-like and Lodha-Moore groups: words, actions and complexes.")
    _global_options(p, None)
    # the same flags are accepted after the subcommand; SUPPRESS keeps the earlier value
    shared = argparse.ArgumentParser(add_help=False)
    _global_options(shared, argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, **kw) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[shared], **kw)

    s = add("eval", help="apply a word to an eventually periodic point")
    s.add_argument("word")
    s.add_argument("point", help="prefix(period), e.g. 001(10)")
    s.set_defaults(func=cmd_eval)

    s = add("eq", help="decide whether two words are equal")
    s.add_argument("left")
    s.add_argument("right")
    s.set_defaults(func=cmd_eq)

    s = add("std", help="standard form f . (y word)")
    s.add_argument("word")
    s.set_defaults(func=cmd_std)

    s = add("abel", help="abelianization maps")
    s.add_argument("word", nargs="?")
    s.add_argument("--map", default="a", choices=["a", "G0", "yG", "Gy", "yGy"])
    s.add_argument("--verify", action="store_true", help="rank certificate and well-definedness")
    s.set_defaults(func=cmd_abel)

    s = add("rel", help="verify the relation families on random instances")
    s.add_argument("--variant", choices=["G0", "yG", "Gy", "yGy"])
    s.add_argument("--family", type=int, choices=list(FAMILIES))
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_rel)

    s = add("hnn", help="ascending HNN decompositions")
    s.add_argument("--case", required=True, choices=[c.name for c in hnn.CaseId])
    s.add_argument("action", choices=["verify", "witness", "conjugate"])
    s.add_argument("word", nargs="?")
    s.add_argument("--inverse", action="store_true", help="conjugate by the inverse stable letter")
    s.set_defaults(func=cmd_hnn)

    s = add("cluster", help="m-clusters of admissible arrangements")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--type2", default="", help="comma separated i with hyperplane x_i = x_{i+1}")
    s.add_argument("--verbose", action="store_true")
    s.add_argument("action", choices=["cells", "euler", "dot", "json"])
    s.set_defaults(func=cmd_cluster)

    s = add("special", help="is a signed y word special")
    s.add_argument("word")
    s.set_defaults(func=cmd_special)

    s = add("hgraph", help="coset subgraphs of sorted lists")
    s.add_argument("--list", required=True, help="file with one special word per line")
    s.add_argument("--base", help="right factor of every vertex")
    s.add_argument("action", choices=["build", "match"])
    s.set_defaults(func=cmd_hgraph)

    s = add("support", help="support intervals of an F(n) word")
    s.add_argument("word")
    s.set_defaults(func=cmd_support)

    s = add("dense", help="element with support (s0^omega, (n-1)^omega)")
    s.add_argument("prefix")
    s.set_defaults(func=cmd_dense)
    return p


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    n = args.n
    if n is None:
        parser.error("the arity flag -n is required")
    try:
        if not 2 <= n <= 10:
            raise UsageError("arity must satisfy 2 <= n <= 10")
        code, text, result = args.func(args, n)
    except (ParseError, ArityError, UsageError, hnn.NotInBase, cluster.NotSpecial, OSError) as exc:
        kind = {ParseError: "PARSE_ERROR", ArityError: "ARITY_ERROR"}.get(type(exc), "USAGE_ERROR")
        print(f"{kind}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (Inconclusive, BudgetExceeded) as exc:
        code, text, result = EXIT_INCONCLUSIVE, f"INCONCLUSIVE: {exc}", None
    except ValueError as exc:
        print(f"USAGE_ERROR: {exc}", file=sys.stderr)
        return EXIT_USAGE
    raw = args.command == "cluster" and args.action == "json"
    if args.json and not raw:
        payload: Any = {"command": args.command, "n": n, "status": _STATUS[code], "result": result}
        print(json.dumps(payload, sort_keys=True), file=out)
    else:
        print(text, file=out)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
