"""Brute-force ground truth kept independent of the tree machinery: geodesic
compatibility, bounded congruence closure of the semigroup presentation, a
literal rewriter for the commutative neutral relations, and exact rank."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .graph import SeparatedGraph, default_choice
from .paths import Path, bad_pair, inv_letter, letter_end, letter_start

# -- compatibility by pairwise geodesics


def geodesic(lam: Path, mu: Path):
    """Letters of the reduced path lam^{-1} mu (both starting at one vertex)."""
    k = 0
    while k < min(len(lam.word), len(mu.word)) and lam.word[k] == mu.word[k]:
        k += 1
    back = [inv_letter(x) for x in reversed(lam.word[k:])]
    return back + list(mu.word[k:])


def separated_letters(graph: SeparatedGraph, word) -> bool:
    return not any(bad_pair(graph, word[i], word[i + 1]) for i in range(len(word) - 1))


def pair_compatible(lam: Path, mu: Path) -> bool:
    return lam.base == mu.base and separated_letters(lam.graph, geodesic(lam, mu))


def geodesic_compatible(paths) -> bool:
    """A set of paths is compatible when every pairwise geodesic is C-separated."""
    paths = list(paths)
    return all(pair_compatible(p, q) for p, q in itertools.combinations(paths, 2))


# -- congruence closure

ZERO = "0"


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        while p != self.parent[p]:
            self.parent[p] = self.parent[self.parent[p]]
            p = self.parent[p]
        self.parent[x] = p
        return p

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        # keep ZERO or the shortest word as the representative
        if rb == ZERO or (ra != ZERO and (len(rb), rb) < (len(ra), ra)):
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def _gen_ends(graph, x):
    """Source and range of a generator: a vertex name or a letter."""
    if isinstance(x, str):
        return x, x
    return letter_start(graph, x), letter_end(graph, x)


def _inv_gen(x):
    return x if isinstance(x, str) else inv_letter(x)


def _inv_word(w):
    return tuple(_inv_gen(x) for x in reversed(w))


def composable_words(graph: SeparatedGraph, cap: int):
    gens = list(graph.vertices) + [(e, s) for e in graph.edges for s in (False, True)]
    words = [(g,) for g in gens]
    out = list(words)
    for _ in range(cap - 1):
        nxt = []
        for w in words:
            end = _gen_ends(graph, w[-1])[1]
            for g in gens:
                if _gen_ends(graph, g)[0] == end:
                    nxt.append(w + (g,))
        out += nxt
        words = nxt
    return out


def _local_rules(graph: SeparatedGraph, w):
    """Relations (1)-(5) of the presentation as rewrites of short factors;
    yields (start, length, replacement) with replacement a tuple or ZERO."""
    for i in range(len(w) - 1):
        x, y = w[i], w[i + 1]
        if isinstance(x, str) and isinstance(y, str):
            yield i, 2, ((x,) if x == y else ZERO)            # (1)
        elif isinstance(x, str):
            yield i, 2, ((y,) if _gen_ends(graph, y)[0] == x else ZERO)  # (2)
        elif isinstance(y, str):
            yield i, 2, ((x,) if _gen_ends(graph, x)[1] == y else ZERO)  # (3)
        else:
            if _gen_ends(graph, x)[1] != _gen_ends(graph, y)[0]:
                yield i, 2, ZERO
            elif x[1] and not y[1] and graph.same_block(x[0], y[0]):  # (4)
                yield i, 2, ((graph.range[x[0]],) if x[0] == y[0] else ZERO)
            elif not x[1] and y == (x[0], True) and graph.is_singleton(x[0]):  # (5)
                yield i, 2, (graph.source[x[0]],)


def _inverse_rules(w):
    """u u^{-1} u = u and commuting idempotents u u^{-1} v v^{-1} = v v^{-1} u u^{-1}."""
    n = len(w)
    for i in range(n):
        for k in range(1, (n - i) // 3 + 1):
            u = w[i:i + k]
            if w[i + k:i + 2 * k] == _inv_word(u) and w[i + 2 * k:i + 3 * k] == u:
                yield i, 3 * k, u
        for a in range(1, (n - i) // 2 + 1):
            u = w[i:i + a]
            if w[i + a:i + 2 * a] != _inv_word(u):
                continue
            for b in range(1, (n - i - 2 * a) // 2 + 1):
                v = w[i + 2 * a:i + 2 * a + b]
                if w[i + 2 * a + b:i + 2 * a + 2 * b] == _inv_word(v):
                    yield i, 2 * a + 2 * b, v + _inv_word(v) + u + _inv_word(u)


def congruence_closure(graph: SeparatedGraph, cap: int = 6):
    """Union-find over composable words of length <= cap (incomposable words
    are zero by (1)-(3)), closed under the defining relations, the inverse
    semigroup laws, and substitution of equal factors."""
    words = composable_words(graph, cap)
    wordset = set(words)
    uf = _UnionFind()
    uf.find(ZERO)
    for w in words:
        uf.find(w)

    def link(w, i, k, rep):
        if rep == ZERO:
            return uf.union(w, ZERO)
        nw = w[:i] + tuple(rep) + w[i + k:]
        if not nw:
            return False
        if nw in wordset:
            return uf.union(w, nw)
        if len(nw) <= cap:  # incomposable replacement
            return uf.union(w, ZERO)
        return False

    for w in words:
        for i, k, rep in _local_rules(graph, w):
            link(w, i, k, rep)
        for i, k, rep in _inverse_rules(w):
            link(w, i, k, rep)

    changed = True
    while changed:
        changed = False
        for w in words:
            n = len(w)
            for i in range(n):
                for j in range(i + 1, n + 1):
                    if j - i == n:
                        continue
                    r = uf.find(w[i:j])
                    if r == ZERO:
                        changed |= uf.union(w, ZERO)
                    elif r != w[i:j]:
                        changed |= link(w, i, j - i, r)
    classes = {}
    for w in words:
        classes.setdefault(uf.find(w), []).append(w)
    return classes, uf


def word_element(graph, w, regime):
    """The engine value of a word of generators (None for zero)."""
    from .semigroup import letter_element, multiply, vertex_element

    out = None
    for i, x in enumerate(w):
        y = vertex_element(graph, x, regime) if isinstance(x, str) else \
            letter_element(graph, x[0], x[1], regime)
        out = y if i == 0 else multiply(out, y)
        if out is None:
            return None
    return out


def closure_vs_engine(graph: SeparatedGraph, cap: int = 6):
    """Compare congruence classes with Leavitt-Munn canonical forms. Returns
    (classes, values, unsound, incomplete): unsound lists classes holding two
    engine values, incomplete lists engine values split over several classes."""
    from .semigroup import make_regime

    regime = make_regime(graph, "leavitt")
    classes, uf = congruence_closure(graph, cap)
    value_of = {}
    unsound = []
    for rep, ws in classes.items():
        vals = {word_element(graph, w, regime) for w in ws}
        if rep == ZERO:
            vals.add(None)
        if len(vals) > 1:
            unsound.append((rep, vals))
        for v in vals:
            value_of.setdefault(v, set()).add(rep)
    incomplete = [(v, reps) for v, reps in value_of.items() if len(reps) > 1]
    return len(classes), len(value_of), unsound, incomplete


# -- literal rewriting of neutral monomials

def _prefix_leq(mu: Path, lam: Path) -> bool:
    return mu.base == lam.base and lam.word[:len(mu.word)] == mu.word


def _redexes(graph, mono, chosen):
    """All applicable rules in a monomial (a sorted tuple of paths)."""
    out = []
    for i, j in itertools.combinations(range(len(mono)), 2):
        lam, mu = mono[i], mono[j]
        if lam.base != mu.base:
            out.append(("1", i, j))
        elif _prefix_leq(mu, lam):
            out.append(("2", i, j))
        elif _prefix_leq(lam, mu):
            out.append(("2", j, i))
        elif not pair_compatible(lam, mu):
            out.append(("3", i, j))
    for i, lam in enumerate(mono):
        if lam.word and lam.word[-1][1]:
            out.append(("4", i, None))
        elif lam.word and lam.word[-1][0] in chosen:
            out.append(("5", i, None))
    return out


def _mono(paths):
    return tuple(sorted(paths))


def rewrite(graph: SeparatedGraph, poly: dict, chosen, seed=None, rule_blocks=None):
    """Apply the rewriting rules in a random (seeded) order until no monomial
    has a redex. ``poly`` maps sorted tuples of paths to coefficients."""
    rng = random.Random(seed)
    chosen = frozenset(chosen)
    block_of_chosen = {e: graph.block(graph.block_of(e)) for e in chosen}
    poly = {m: Fraction(c) for m, c in poly.items() if c}
    while True:
        work = [(m, r) for m in sorted(poly) for r in [_redexes(graph, m, chosen)] if r]
        if not work:
            return poly
        m, reds = rng.choice(work)
        kind, i, j = rng.choice(reds)
        c = poly.pop(m)
        rest = [p for k, p in enumerate(m) if k not in (i, j)]
        if kind in ("1", "3"):
            new = {}
        elif kind == "2":
            new = {_mono(rest + [m[i]]): 1}
        elif kind == "4":
            new = {_mono(rest + [m[i].parent()]): 1}
        else:
            lam = m[i].parent()
            e = m[i].word[-1][0]
            new = {_mono(rest + [lam]): 1}
            for f in block_of_chosen[e]:
                if f != e:
                    key = _mono(rest + [lam.child((f, False))])
                    new[key] = new.get(key, 0) - 1
        for k, v in new.items():
            poly[k] = poly.get(k, 0) + c * v
            if not poly[k]:
                del poly[k]


def monomial_rewriter(graph: SeparatedGraph, paths, mode: str = "leavitt", seed=None,
                      choice=None):
    """Normal form of the commutative monomial prod lam lam^* (lam in paths)."""
    ch = dict(default_choice(graph))
    if choice:
        ch.update(choice)
    if mode == "cohn":
        blocks = ()
    elif mode == "leavitt":
        blocks = graph.blocks()
    else:
        blocks = graph.relative
    chosen = {ch[b] for b in blocks}
    return rewrite(graph, {_mono(paths): 1}, chosen, seed)


def maxima_key(paths):
    """Canonical label of an irreducible monomial: its paths as a set."""
    return frozenset(paths)


def tree_form(alg, paths) -> dict:
    """The same monomial normalised by the tree engine, relabelled by maxima."""
    from .trees import is_c_compatible, lower_set

    paths = list(paths)
    if len({p.base for p in paths}) > 1:
        return {}
    t = lower_set(alg.graph, paths[0].base, paths)
    if not is_c_compatible(t):
        return {}
    out = {}
    for s, c in alg.neutral_form(t).items():
        ms = s.maxima()
        out[maxima_key(ms)] = c
    return out


def rewriter_form(graph, paths, mode, seed, choice=None) -> dict:
    out = {}
    for m, c in monomial_rewriter(graph, paths, mode, seed, choice).items():
        out[maxima_key(m)] = out.get(maxima_key(m), 0) + c
    return {k: v for k, v in out.items() if v}


def random_separated_path(graph: SeparatedGraph, v, length: int, rng: random.Random) -> Path:
    word = []
    cur = v
    for _ in range(length):
        opts = [(e, False) for e in graph.out_edges(cur)] + [(e, True) for e in graph.in_edges(cur)]
        if word:
            last = word[-1]
            opts = [x for x in opts if x != inv_letter(last) and not bad_pair(graph, last, x)]
        if not opts:
            break
        x = rng.choice(opts)
        word.append(x)
        cur = letter_end(graph, x)
    return Path(graph, v, word)


def random_neutral_monomial(graph: SeparatedGraph, rng: random.Random, max_paths=3, max_len=3):
    v = rng.choice(list(graph.vertices))
    k = rng.randint(1, max_paths)
    return [random_separated_path(graph, v, rng.randint(0, max_len), rng) for _ in range(k)]


# -- exact rank

def _reduce(v: dict, rows: dict) -> dict:
    v = dict(v)
    for k in [k for k in v if k in rows]:
        c = v.get(k)
        if not c:
            continue
        for kk, cc in rows[k].items():
            nv = v.get(kk, 0) - c * cc
            if nv:
                v[kk] = nv
            else:
                v.pop(kk, None)
    return v


class RowSpace:
    """Reduced row echelon form over the rationals, rows stored sparsely."""

    def __init__(self, key=repr):
        self.rows = {}
        self.key = key

    def add(self, vec: dict) -> bool:
        v = _reduce({k: Fraction(c) for k, c in vec.items() if c}, self.rows)
        if not v:
            return False
        p = min(v, key=self.key)
        c = v[p]
        v = {k: x / c for k, x in v.items()}
        for k, row in self.rows.items():
            if p in row:
                f = row[p]
                for kk, cc in v.items():
                    nv = row.get(kk, 0) - f * cc
                    if nv:
                        row[kk] = nv
                    else:
                        row.pop(kk, None)
        self.rows[p] = v
        return True

    def contains(self, vec: dict) -> bool:
        return not _reduce({k: Fraction(c) for k, c in vec.items() if c}, self.rows)

    @property
    def rank(self):
        return len(self.rows)


def rank_check(vectors, key=repr) -> int:
    space = RowSpace(key)
    for v in vectors:
        space.add(v)
    return space.rank


def element_vector(a) -> dict:
    """Coordinates of an algebra element in its normal-form basis."""
    return dict(a.normalize().terms)
