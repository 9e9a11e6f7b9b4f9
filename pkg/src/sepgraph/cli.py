"""Command line driver: ``sepgraph [--graph G] [--json] [--seed N] COMMAND ...``.

Exit status is 0 on success, 1 on domain errors and 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import catalog
from .algebra import MODES, Algebra, format_algebra, format_monomial, iota_injectivity
from .cohn_q import Corner, format_blocked, q_basis, q_membership
from .graph import GraphError, ParseError, SeparatedGraph, load_graph, validate
from .paths import DomainError, format_path
from .socle import (cohn_socle, ecb_element, ecb_search, fim_report, filtration_check,
                    isotropy_trivial, orbit, orbit_dot, socle_report)
from .trees import format_tree, has_exits, is_reduced_for, parse_tree


class Report:
    """Text lines for people, one JSON object per line with --json."""

    def __init__(self, as_json: bool, stream=None):
        self.as_json = as_json
        self.stream = stream or sys.stdout

    def line(self, text: str, **data):
        if self.as_json:
            self.stream.write(json.dumps(data, sort_keys=True) + "\n")
        else:
            self.stream.write(text + "\n")


def resolve_graph(name) -> SeparatedGraph:
    if name is None:
        raise DomainError("no graph given (use --graph FILE or a catalog name)")
    if os.path.exists(name):
        return load_graph(name)
    try:
        return catalog.get(name)
    except KeyError:
        names = ", ".join(catalog.names())
        raise DomainError(f"no graph file or catalog graph named {name!r} (catalog: {names})") from None


# -- commands

def cmd_validate(args, rep):
    g = resolve_graph(args.graph)
    problems = validate(g)
    for p in problems:
        rep.line(f"error: {p}", diagnostic=p)
    nblocks = len(list(g.blocks()))
    rep.line(f"ok: {len(g.vertices)} vertices, {len(g.edges)} edges, {nblocks} blocks",
             ok=not problems, vertices=len(g.vertices), edges=len(g.edges), blocks=nblocks)
    return 1 if problems else 0


def cmd_normalize(args, rep):
    alg = Algebra(resolve_graph(args.graph), args.mode)
    a = alg.parse(args.expr)
    rep.line(format_algebra(a), mode=args.mode, normal_form=format_algebra(a))
    return 0


def cmd_mul(args, rep):
    alg = Algebra(resolve_graph(args.graph), args.mode)
    a = alg.parse(args.left) * alg.parse(args.right)
    rep.line(format_algebra(a), mode=args.mode, product=format_algebra(a))
    return 0


def cmd_basis(args, rep):
    alg = Algebra(resolve_graph(args.graph), args.mode)
    mons = alg.basis(args.bound)
    for t, g in mons:
        rep.line(format_monomial(t, g), monomial=format_monomial(t, g))
    rep.line(f"count: {len(mons)}", count=len(mons), bound=args.bound, mode=args.mode)
    return 0


def cmd_q_basis(args, rep):
    g = resolve_graph(args.graph)
    els = q_basis(g, args.bound, count_blocks=(args.measure == "extended"))
    for q in els:
        rep.line(format_blocked(q), element=format_blocked(q))
    rep.line(f"count: {len(els)}", count=len(els), bound=args.bound, measure=args.measure)
    return 0


def cmd_in_q(args, rep):
    alg = Algebra(resolve_graph(args.graph), "cohn")
    a = alg.parse(args.expr)
    ok, img = q_membership(a)
    rep.line("true" if ok else "false", member=ok)
    rep.line(f"witness: {format_algebra(img)}", witness=format_algebra(img))
    return 0


def cmd_phi_bar(args, rep):
    g = resolve_graph(args.graph)
    corner = Corner(g)
    a = corner.source.parse(args.expr)
    img = corner.phi(a)
    for ref, d in sorted(corner.added.items()):
        rep.line(f"added: {d} for block {ref[0]}:{ref[1]} {{{' '.join(g.block(ref))}}}",
                 added_edge=d, block=f"{ref[0]}:{ref[1]}")
    rep.line(format_algebra(img), image=format_algebra(img))
    return 0


def cmd_socle(args, rep):
    bound = args.bound
    if args.fim is not None:
        if args.fim < 1:
            raise DomainError("--fim needs an alphabet of size at least 1")
        r = fim_report(args.fim, bound)
        rep.line("blocks: " + ",".join(map(str, r["blocks"])), blocks=r["blocks"], bound=bound,
                 alphabet=args.fim)
        rep.line("routes agree: " + ("yes" if r["agree"] else "no"), agree=r["agree"])
        return 0 if r["agree"] else 1
    g = resolve_graph(args.graph)
    if args.cohn:
        classes = cohn_socle(g, bound)
        for c in classes:
            tag = " (continues past bound)" if c.truncated else ""
            rep.line(f"class {format_tree(c.members[0])}: size {c.size}{tag}",
                     base=format_tree(c.members[0]), size=c.size, truncated=c.truncated)
        rep.line("blocks: " + ",".join(str(c.size) for c in classes),
                 blocks=[c.size for c in classes], bound=bound)
        return 0
    classes = socle_report(g, bound, args.cap)
    for c in classes:
        rep.line(f"class {format_tree(c.base)}: size {c.size}",
                 base=format_tree(c.base), size=c.size,
                 points=[format_tree(t) for t in c.orbit.nodes],
                 transversal=[format_path(c.orbit.words[t]) for t in c.orbit.nodes])
    rep.line("blocks: " + ",".join(str(c.size) for c in classes),
             blocks=[c.size for c in classes], bound=bound)
    return 0


def cmd_ecb(args, rep):
    g = resolve_graph(args.graph)
    entries, certs = ecb_search(g, args.bound)
    alg = Algebra(g, "cohn")
    for e in entries:
        fam = ", ".join(f"{format_path(b.anchor)}@{b.ref[0]}:{b.ref[1]}" for b in e.blocks)
        rep.line(f"{format_tree(e.tree)} \\ {fam}: {format_algebra(ecb_element(alg, e))}",
                 tree=format_tree(e.tree), family=fam,
                 ecb=format_algebra(ecb_element(alg, e)), point=format_tree(e.extended))
    n_inf = sum(1 for v in certs.values() if v == "infinite")
    n_empty = sum(1 for v in certs.values() if v == "empty")
    rep.line(f"found: {len(entries)}; infinite neighbourhood: {n_inf}; empty neighbourhood: {n_empty}",
             found=len(entries), infinite=n_inf, empty=n_empty, bound=args.bound)
    return 0


def cmd_orbit(args, rep):
    g = resolve_graph(args.graph)
    t = parse_tree(g, args.tree)
    if not is_reduced_for(t, g.singleton_edges()):
        raise DomainError(f"{format_tree(t)} is not a Leavitt tree")
    if has_exits(t):
        raise DomainError(f"{format_tree(t)} has exits, so it is not an isolated point")
    og = orbit(t, args.cap)
    if args.emit_dot:
        sys.stdout.write(orbit_dot(og) + "\n")
        return 0
    for s in og.nodes:
        rep.line(f"point {format_tree(s)} via {format_path(og.words[s])}",
                 point=format_tree(s), word=format_path(og.words[s]))
    for a, e, b in og.edges:
        rep.line(f"edge {format_tree(a)} -{e}-> {format_tree(b)}",
                 source=format_tree(a), letter=e, target=format_tree(b))
    status = "complete" if og.complete else f"cut at {args.cap} points"
    triv = isotropy_trivial(og)
    rep.line(f"size: {len(og.nodes)} ({status}); trivial isotropy: {'yes' if triv else 'no'}",
             size=len(og.nodes), complete=og.complete, trivial_isotropy=triv)
    return 0


def cmd_fim(args, rep):
    r = fim_report(args.n, args.bound)
    rep.line("blocks: " + ",".join(map(str, r["blocks"])), blocks=r["blocks"])
    checked, fails = filtration_check(args.n, args.bound, args.samples, args.seed)
    rep.line(f"filtration: {checked} products, {len(fails)} violations",
             products=checked, violations=len(fails))
    return 0 if r["agree"] and not fails else 1


def cmd_verify(args, rep):
    from .oracle import closure_vs_engine, random_neutral_monomial, rewriter_form, tree_form
    g = resolve_graph(args.graph)
    rng = random.Random(args.seed)
    ok_all = True
    for mode in ("cohn", "leavitt"):
        alg = Algebra(g, mode)
        bad = 0
        for i in range(args.samples):
            ps = random_neutral_monomial(g, rng)
            a = rewriter_form(g, ps, mode, seed=rng.random())
            b = rewriter_form(g, ps, mode, seed=rng.random())
            if not (a == b == tree_form(alg, ps)):
                bad += 1
        ok_all &= bad == 0
        rep.line(f"rewriter {mode}: {args.samples} monomials, {bad} disagreements",
                 check=f"rewriter-{mode}", samples=args.samples, failures=bad)
    n, vals, unsound, incomplete = closure_vs_engine(g, args.cap)
    ok_all &= not unsound and not incomplete
    rep.line(f"congruence closure (words <= {args.cap}): {n} classes, {vals} canonical forms, "
             f"{len(unsound)} unsound, {len(incomplete)} split",
             check="closure", classes=n, forms=vals, unsound=len(unsound), split=len(incomplete))
    inj = iota_injectivity(g, args.bound)
    ok_all &= not inj["collisions"]
    rep.line(f"injectivity (size <= {args.bound}): {inj['count']} elements, "
             f"{len(inj['collisions'])} collisions",
             check="injectivity", elements=inj["count"], collisions=len(inj["collisions"]))
    rep.line("verify: " + ("pass" if ok_all else "FAIL"), ok=ok_all)
    return 0 if ok_all else 1


# -- argument parsing

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", default=argparse.SUPPRESS,
                        help="graph file or catalog name (" + ", ".join(catalog.names()) + ")")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="one JSON object per output line")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="sepgraph", parents=[common],
                                description="Normal forms, Q-bases and socles for separated graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    add("validate", cmd_validate, "check a graph file")
    sp = add("normalize", cmd_normalize, "normal form of an expression")
    sp.add_argument("--mode", choices=MODES, default="leavitt")
    sp.add_argument("expr")
    sp = add("mul", cmd_mul, "product of two expressions")
    sp.add_argument("--mode", choices=MODES, default="leavitt")
    sp.add_argument("left")
    sp.add_argument("right")
    sp = add("basis", cmd_basis, "basis monomials up to a size")
    sp.add_argument("--mode", choices=MODES, default="leavitt")
    sp.add_argument("--bound", type=int, required=True)
    sp = add("q-basis", cmd_q_basis, "the basis B(Q) of the ideal Q")
    sp.add_argument("--bound", type=int, required=True)
    sp.add_argument("--measure", choices=("extended", "tree"), default="extended",
                    help="count blocking edges in the size (extended) or not (tree)")
    sp = add("in-q", cmd_in_q, "decide membership in Q")
    sp.add_argument("expr")
    sp = add("phi-bar", cmd_phi_bar, "map into the Leavitt algebra of the extended graph")
    sp.add_argument("expr")
    sp = add("socle", cmd_socle, "socle blocks")
    sp.add_argument("--bound", type=int, default=3)
    sp.add_argument("--fim", type=int, default=None, help="alphabet size of a free inverse monoid")
    sp.add_argument("--cohn", action="store_true", help="socle of the Cohn algebra inside Q")
    sp.add_argument("--cap", type=int, default=200)
    sp = add("ecb", cmd_ecb, "completely blocked trees")
    sp.add_argument("--bound", type=int, required=True)
    sp = add("orbit", cmd_orbit, "orbit of an isolated point")
    sp.add_argument("tree")
    sp.add_argument("--cap", type=int, default=200)
    sp.add_argument("--emit-dot", action="store_true")
    sp = add("fim", cmd_fim, "free inverse monoid socle and filtration")
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--bound", type=int, default=3)
    sp.add_argument("--samples", type=int, default=200)
    sp = add("verify", cmd_verify, "run the brute-force oracles")
    sp.add_argument("--samples", type=int, default=200)
    sp.add_argument("--cap", type=int, default=4)
    sp.add_argument("--bound", type=int, default=2)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    for name, default in (("graph", None), ("json", False), ("seed", 0)):
        if not hasattr(args, name):
            setattr(args, name, default)
    rep = Report(args.json)
    try:
        return args.func(args, rep)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, GraphError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
