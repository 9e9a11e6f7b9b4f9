"""Tame Cohn, Leavitt and Cohn-Leavitt algebras as rational combinations of
monomials e(T) |> g, with the tree-level normal form."""

from __future__ import annotations

from fractions import Fraction

from .graph import ParseError, SeparatedGraph, default_choice
from .paths import DomainError, Path, edge_path, format_path, reduced_prefix, trivial
from .semigroup import (Element, canonical, enumerate_elements, invert, make_regime,
                        multiply)
from .trees import (Tree, enumerate_trees, format_tree, is_c_compatible, reduce_tree,
                    vertex_tree)

MODES = ("cohn", "leavitt", "cl")
_REGIME_OF = {"cohn": "is", "leavitt": "leavitt", "cl": "cl"}


class Algebra:
    """One graph, one mode and one choice function, with a memoised normaliser."""

    def __init__(self, graph: SeparatedGraph, mode: str = "leavitt", choice=None):
        if mode not in MODES:
            raise DomainError(f"unknown mode {mode}")
        self.graph = graph
        self.mode = mode
        self.regime = make_regime(graph, _REGIME_OF[mode])
        self.U = self.regime.U
        if mode == "cohn":
            self.rule_blocks = frozenset()
        elif mode == "leavitt":
            self.rule_blocks = frozenset(graph.blocks())
        else:
            self.rule_blocks = frozenset(graph.relative)
        self.choice = dict(default_choice(graph))
        if choice:
            self.choice.update(choice)
        self.chosen = frozenset(self.choice[b] for b in self.rule_blocks)
        self._nf = {}

    # -- generators
    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def monomial(self, tree: Tree, g: Path, coeff=1) -> "AlgebraElement":
        return AlgebraElement(self, {(tree, g): Fraction(coeff)})

    def from_element(self, x, coeff=1) -> "AlgebraElement":
        if x is None:
            return self.zero()
        return self.monomial(x.tree, x.marker, coeff)

    def vertex(self, v) -> "AlgebraElement":
        return self.monomial(vertex_tree(self.graph, v), trivial(self.graph, v))

    def edge(self, e, star: bool = False) -> "AlgebraElement":
        g = edge_path(self.graph, e, star)
        return self.from_element(canonical(vertex_tree(self.graph, g.base), g, self.regime))

    def path(self, g: Path) -> "AlgebraElement":
        """The product of the letters of g (edges and ghost edges)."""
        out = self.vertex(g.base)
        for x in g.word:
            out = out * self.edge(x[0], x[1])
        return out

    def projection(self, g: Path) -> "AlgebraElement":
        """g g^* as an element."""
        return self.path(g) * self.path(g).star()

    def generator(self, name: str) -> "AlgebraElement":
        if name in self.graph.vertices:
            return self.vertex(name)
        if name in self.graph.source:
            return self.edge(name)
        raise DomainError(f"unknown vertex or edge {name}")

    # -- normal form
    def _leaf_to_expand(self, t: Tree):
        """The deepest-leftmost maximal element that ends in an inverse letter or
        a chosen edge of a rule block; None when t is reduced."""
        best = None
        for m in t.maxima():
            if not m.word:
                continue
            x = m.word[-1]
            if x[1] or x[0] in self.chosen:
                key = (-len(m.word), m.word)
                if best is None or key < best[0]:
                    best = (key, m)
        return None if best is None else best[1]

    def neutral_form(self, t: Tree) -> dict:
        """n(e(T)) for a compatible tree, as {tree: coefficient}."""
        hit = self._nf.get(t)
        if hit is not None:
            return hit
        leaf = self._leaf_to_expand(t)
        if leaf is None:
            out = {t: Fraction(1)}
        else:
            x = leaf.word[-1]
            rest = t.without(leaf)
            out = dict(self.neutral_form(rest))
            if not x[1]:
                lam = leaf.parent()
                for y in self.graph.block(self.graph.block_of(x[0])):
                    if y == x[0]:
                        continue
                    s = Tree(self.graph, t.root, rest.nodes | {lam.child((y, False))})
                    if not is_c_compatible(s):
                        continue
                    for k, c in self.neutral_form(s).items():
                        out[k] = out.get(k, 0) - c
                out = {k: c for k, c in out.items() if c}
        self._nf[t] = out
        return out

    def normal_monomial(self, tree: Tree, g: Path) -> dict:
        """n^g(e(T) |> g) as {(tree, g): coefficient}."""
        w = tree.with_paths([g])
        if not is_c_compatible(w):
            return {}
        gr = reduced_prefix(g, self.U)
        out = {}
        for s, c in self.neutral_form(w).items():
            s2 = s.with_paths([gr]) if gr not in s.nodes else s
            if s2 is not s and not is_c_compatible(s2):
                continue
            key = (s2, g)
            out[key] = out.get(key, 0) + c
        return {k: c for k, c in out.items() if c}

    def is_basis_monomial(self, tree: Tree, g: Path) -> bool:
        if g.base != tree.root or not is_c_compatible(tree.with_paths([g])):
            return False
        if reduce_tree(tree, self.U) != tree:
            return False
        gr = reduced_prefix(g, self.U)
        if gr not in tree.nodes:
            return False
        for m in tree.maxima():
            if m != gr and m.word and m.word[-1][0] in self.chosen:
                return False
        return True

    def basis(self, bound: int, roots=None):
        """Basis monomials (T, g) with T u g^down of total length <= bound."""
        found = set()
        for w in enumerate_trees(self.graph, bound + 1, roots=roots):
            for g in w.nodes:
                t = reduce_tree(w, self.U)
                if self.is_basis_monomial(t, g) and len(t.with_paths([g]).nodes) <= bound + 1:
                    found.add((t, g))
        return sorted(found, key=lambda k: monomial_key(*k))

    # -- parsing
    def parse(self, text: str) -> "AlgebraElement":
        return ExprParser(self, text).parse()


def monomial_key(tree: Tree, g: Path):
    return (len(g.word), g.base, g.word, tree.sort_key())


class AlgebraElement:
    __slots__ = ("alg", "terms")

    def __init__(self, alg: Algebra, terms: dict):
        self.alg = alg
        self.terms = {k: Fraction(c) for k, c in terms.items() if c}

    def _check(self, other):
        if other.alg.graph is not self.alg.graph or other.alg.mode != self.alg.mode:
            raise DomainError("mode mismatch between algebra elements")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return AlgebraElement(self.alg, out)

    def __neg__(self):
        return AlgebraElement(self.alg, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = Fraction(c)
        return AlgebraElement(self.alg, {k: c * v for k, v in self.terms.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __mul__(self, other):
        if not isinstance(other, AlgebraElement):
            return self.scale(other)
        self._check(other)
        a, b = self.normalize(), other.normalize()
        out = {}
        reg = self.alg.regime
        for (t1, g1), c1 in a.terms.items():
            x = Element(t1, g1, reg)
            for (t2, g2), c2 in b.terms.items():
                z = multiply(x, Element(t2, g2, reg))
                if z is None:
                    continue
                for k, c in self.alg.normal_monomial(z.tree, z.marker).items():
                    out[k] = out.get(k, 0) + c1 * c2 * c
        return AlgebraElement(self.alg, out)

    def star(self):
        out = {}
        reg = self.alg.regime
        for (t, g), c in self.normalize().terms.items():
            y = invert(Element(t, g, reg))
            for k, v in self.alg.normal_monomial(y.tree, y.marker).items():
                out[k] = out.get(k, 0) + c * v
        return AlgebraElement(self.alg, out)

    def normalize(self):
        out = {}
        for (t, g), c in self.terms.items():
            for k, v in self.alg.normal_monomial(t, g).items():
                out[k] = out.get(k, 0) + c * v
        return AlgebraElement(self.alg, out)

    def is_zero(self) -> bool:
        return not self.normalize().terms

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: monomial_key(*kv[0]))

    def __repr__(self):
        return format_algebra(self)


def format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_monomial(tree: Tree, g: Path) -> str:
    return f"e{format_tree(tree, bare_root=False)} |> {format_path(g)}"


def format_algebra(a: AlgebraElement) -> str:
    terms = a.sorted_terms()
    if not terms:
        return "0"
    parts = []
    for i, ((t, g), c) in enumerate(terms):
        body = f"{format_coeff(abs(c))} * {format_monomial(t, g)}"
        if i == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


def elements_of(alg: Algebra, bound: int):
    return enumerate_elements(alg.graph, alg.regime, bound)


# -- expression parsing

class ExprParser:
    """expr := term (('+'|'-') term)*; term := [RATIONAL '*'] factor ('*' factor)*;
    factor := atom ["'"]; atom := IDENT | '(' expr ')'."""

    def __init__(self, alg: Algebra, text: str):
        self.alg = alg
        self.text = text
        self.toks = self._tokenize(text)
        self.i = 0

    @staticmethod
    def _tokenize(text):
        toks, i = [], 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch.isalpha() or ch == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                toks.append(("IDENT", text[i:j], i))
                i = j
            elif ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                if j < len(text) and text[j] == "/" and j + 1 < len(text) and text[j + 1].isdigit():
                    j += 1
                    while j < len(text) and text[j].isdigit():
                        j += 1
                toks.append(("NUM", text[i:j], i))
                i = j
            elif ch in "+-*'()":
                toks.append((ch, ch, i))
                i += 1
            else:
                raise ParseError(f"unexpected character {ch!r}", 1, i + 1)
        toks.append(("END", "", len(text)))
        return toks

    def peek(self):
        return self.toks[self.i]

    def take(self, kind):
        tok = self.toks[self.i]
        if tok[0] != kind:
            raise ParseError(f"expected {kind} but found {tok[1] or 'end of input'!r}", 1, tok[2] + 1)
        self.i += 1
        return tok

    def parse(self) -> AlgebraElement:
        val = self.expr()
        if self.peek()[0] != "END":
            tok = self.peek()
            raise ParseError(f"unexpected {tok[1]!r}", 1, tok[2] + 1)
        return val.normalize()

    def expr(self):
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take(self.peek()[0])[0] == "-" else 1
        val = self.term().scale(sign)
        while self.peek()[0] in ("+", "-"):
            op = self.take(self.peek()[0])[0]
            t = self.term()
            val = val + t if op == "+" else val - t
        return val

    def term(self):
        coeff = Fraction(1)
        if self.peek()[0] == "NUM":
            coeff = Fraction(self.take("NUM")[1])
            self.take("*")
        val = self.factor()
        while self.peek()[0] == "*":
            self.take("*")
            val = val * self.factor()
        return val.scale(coeff)

    def factor(self):
        val = self.atom()
        while self.peek()[0] == "'":
            self.take("'")
            val = val.star()
        return val

    def atom(self):
        tok = self.peek()
        if tok[0] == "IDENT":
            self.take("IDENT")
            try:
                return self.alg.generator(tok[1])
            except DomainError as exc:
                raise DomainError(f"{exc} (col {tok[2] + 1})") from None
        if tok[0] == "(":
            self.take("(")
            val = self.expr()
            self.take(")")
            return val
        raise ParseError(f"expected a name or '(' but found {tok[1] or 'end of input'!r}", 1, tok[2] + 1)


# -- checks built on the normal form

def iota_injectivity(graph: SeparatedGraph, bound: int):
    """Map every Leavitt-Munn element of size <= bound to its normal form and
    look for collisions."""
    alg = Algebra(graph, "leavitt")
    seen = {}
    collisions = []
    elems = elements_of(alg, bound)
    for x in elems:
        img = frozenset(alg.normal_monomial(x.tree, x.marker).items())
        if img in seen:
            collisions.append((seen[img], x))
        else:
            seen[img] = x
    return {"count": len(elems), "collisions": collisions}


def _common_suffix(lam: Path, mu: Path) -> int:
    k = 0
    while k < min(len(lam), len(mu)) and lam.word[-1 - k] == mu.word[-1 - k]:
        k += 1
    return k


def zel_crosscheck(graph: SeparatedGraph, lam: Path, mu: Path, choice=None) -> dict:
    """Compare the tree normal form of lam mu^* with the classical reduced form
    lam mu^* -> sum of reduced lam' mu'^*, each read off as a Scheiblich monomial."""
    if any(len(graph.partition[v]) > 1 for v in graph.vertices):
        raise DomainError("the classical comparison needs a non-separated graph")
    if any(x[1] for x in lam.word + mu.word):
        raise DomainError("lambda and mu must be paths of positive edges")
    if lam.end != mu.end:
        raise DomainError("r(lambda) must equal r(mu)")
    cohn = Algebra(graph, "cohn", choice)
    leav = Algebra(graph, "leavitt", choice)

    def scheiblich(alg, l, m):
        k = _common_suffix(l, m)
        l1, m1 = l.prefix(len(l) - k), m.prefix(len(m) - k)
        from .paths import compose, inverse
        g = compose(l1, inverse(m1))
        if k:
            tree = vertex_tree(graph, l.base).with_paths([l])
        else:
            tree = vertex_tree(graph, l.base).with_paths([reduced_prefix(g, alg.U)])
        return tree, g

    direct_cohn = (cohn.path(lam) * cohn.path(mu).star()).normalize()
    t, g = scheiblich(cohn, lam, mu)
    cohn_ok = direct_cohn.terms == {(vertex_tree(graph, lam.base).with_paths([lam]), g): 1}

    # classical reduction: strip a common chosen last edge x and replace x x^*
    out = {}
    stack = [(lam, mu, Fraction(1))]
    chosen = {leav.choice[b] for b in graph.blocks()}
    while stack:
        l, m, c = stack.pop()
        if l.word and m.word and l.word[-1] == m.word[-1] and l.word[-1][0] in chosen:
            x = l.word[-1][0]
            lp, mp = l.parent(), m.parent()
            stack.append((lp, mp, c))
            for y in graph.block(graph.block_of(x)):
                if y != x:
                    stack.append((lp.child((y, False)), mp.child((y, False)), -c))
            continue
        key = scheiblich(leav, l, m)
        out[key] = out.get(key, 0) + c
    classical = AlgebraElement(leav, out)
    direct = (leav.path(lam) * leav.path(mu).star()).normalize()
    return {
        "scheiblich": format_monomial(t, g),
        "cohn_ok": cohn_ok,
        "leavitt_form": format_algebra(direct),
        "classical_form": format_algebra(classical),
        "agree": classical.terms == direct.terms,
    }
