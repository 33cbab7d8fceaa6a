"""Symbolic graph groupoids: germs, basic bisections and their exact calculus.

A basic compact open bisection ``Z((a, b) \\ F)`` collects the germs
``(a.t, |a|-|b|, b.t)`` over all tails ``t`` whose first edge avoids the
finite excluded set ``F``.  Products, intersections and differences of such
sets are decided purely by prefix comparison of the words involved, with
exclusion sets propagated; no infinite path is ever materialized.

The distinguished graph here is the *infinite bouquet*: one vertex with
countably many loops.  Its path space has every finite path as a unit, so
the empty tail is always admissible; all word-level reasoning below includes
the empty tail, which is exact for the bouquet and for any vertex with
infinitely many receivers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .graph_model import (
    Edge,
    GraphAutomorphismBase,
    PathWord,
    path_from_edges,
    vertex_path,
)
from .validation import StructuralError

# ---------------------------------------------------------------------------
# The infinite bouquet (one vertex, loops e_0, e_1, ...)
# ---------------------------------------------------------------------------

BOUQUET_VERTEX = "v"


@dataclass(frozen=True)
class InfiniteBouquet:
    """One vertex with lazily indexed loop edges e_i, i in N.

    Operations touching the edge family demand an explicit index bound; the
    receiver set of the vertex is infinite, so every finite path is a unit
    of the associated groupoid.
    """

    vertex: str = BOUQUET_VERTEX

    requires_edge_bound = True
    finite_paths_are_units = True

    def edge(self, i: int) -> Edge:
        if i < 0:
            raise ValueError("edge index must be nonnegative")
        return Edge(i, self.vertex, self.vertex)

    def edges_with_range(self, v, bound: int) -> tuple[Edge, ...]:
        if v != self.vertex:
            raise ValueError(f"unknown vertex {v!r}")
        return tuple(self.edge(i) for i in range(bound))

    def has_infinite_receivers(self, v) -> bool:
        return v == self.vertex

    def path(self, indices: Sequence[int]) -> PathWord:
        if not indices:
            return vertex_path(self.vertex)
        return path_from_edges([self.edge(i) for i in indices])

    def unit(self) -> PathWord:
        return vertex_path(self.vertex)


# ---------------------------------------------------------------------------
# Shifts, tails and germs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SymbolicTail:
    """A universally quantified tail variable anchored at a vertex."""

    range_vertex: object
    name: str = "z"

    def __str__(self) -> str:
        return self.name


def shift(p, n: int):
    """Remove the first ``n`` edges; the zero shift is the identity.

    Symbolic tails have unknown length and reject positive shifts.
    """
    if n < 0:
        raise ValueError("shift exponent must be nonnegative")
    if isinstance(p, SymbolicTail):
        if n == 0:
            return p
        raise ValueError("cannot shift a symbolic tail of unknown length")
    if n > len(p):
        raise ValueError(f"cannot shift {n} edges off a path of length {len(p)}")
    if n == 0:
        return p
    rest = p.edges[n:]
    if not rest:
        return vertex_path(p.source_vertex)
    return PathWord(rest)


@dataclass(frozen=True)
class GermElement:
    """The germ (mu.z, |mu|-|nu|, nu.z); the tail is a concrete word or a
    symbolic variable."""

    mu: PathWord
    nu: PathWord
    tail: PathWord | SymbolicTail

    def __post_init__(self):
        if self.mu.source_vertex != self.nu.source_vertex:
            raise StructuralError("germ words must share their source vertex")
        if self.tail.range_vertex != self.mu.source_vertex:
            raise StructuralError("tail must extend the shared source vertex")

    @property
    def degree(self) -> int:
        return len(self.mu) - len(self.nu)

    @property
    def concrete(self) -> bool:
        return isinstance(self.tail, PathWord)

    def triple(self) -> tuple[PathWord, int, PathWord]:
        if not self.concrete:
            raise ValueError("symbolic germ has no concrete triple")
        return (self.mu.concat(self.tail), self.degree, self.nu.concat(self.tail))

    def inverse(self) -> "GermElement":
        return GermElement(self.nu, self.mu, self.tail)

    def is_unit(self) -> bool:
        return self.mu == self.nu

    def compose(self, other: "GermElement") -> "GermElement":
        """Exact composition; concrete germs match on full middle words,
        symbolic germs require a literal middle match and a shared tail."""
        if self.concrete and other.concrete:
            x, p, y = self.triple()
            y2, q, z = other.triple()
            if y != y2:
                raise ValueError("germs are not composable")
            return GermElement(x, z, vertex_path(x.source_vertex), )
        if (
            not self.concrete
            and not other.concrete
            and self.tail == other.tail
            and self.nu == other.mu
        ):
            return GermElement(self.mu, other.nu, self.tail)
        raise ValueError("symbolic germs compose only on a literal middle match")


# ---------------------------------------------------------------------------
# Basic bisections
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BasicBisection:
    """Z((range_word, source_word) \\ excluded)."""

    range_word: PathWord
    source_word: PathWord
    excluded: frozenset = frozenset()

    def __post_init__(self):
        if self.range_word.source_vertex != self.source_word.source_vertex:
            raise StructuralError("bisection words must share their source vertex")
        for e in self.excluded:
            if e.range_vertex != self.range_word.source_vertex:
                raise StructuralError(
                    "excluded edges must extend the shared source vertex"
                )

    @property
    def degree(self) -> int:
        return len(self.range_word) - len(self.source_word)

    def inverse(self) -> "BasicBisection":
        return BasicBisection(self.source_word, self.range_word, self.excluded)

    def is_unit_set(self) -> bool:
        return self.range_word == self.source_word

    def range_set(self) -> "BasicBisection":
        return BasicBisection(self.range_word, self.range_word, self.excluded)

    def source_set(self) -> "BasicBisection":
        return BasicBisection(self.source_word, self.source_word, self.excluded)

    def contains_germ(self, triple: tuple[PathWord, int, PathWord]) -> bool:
        x, p, y = triple
        if p != self.degree:
            return False
        if not self.range_word.is_prefix_of(x) or not self.source_word.is_prefix_of(y):
            return False
        tx = x.edges[len(self.range_word):]
        ty = y.edges[len(self.source_word):]
        if tx != ty:
            return False
        return not tx or tx[0] not in self.excluded

    def admits_empty_tail(self) -> bool:
        return True


def unit_bisection(word: PathWord, excluded: Iterable[Edge] = ()) -> BasicBisection:
    """Z(u \\ F) viewed inside the groupoid (a unit-space basic open)."""
    return BasicBisection(word, word, frozenset(excluded))


def _suffix(longer: PathWord, shorter: PathWord) -> tuple[Edge, ...] | None:
    """Edges of ``longer`` past ``shorter`` if ``shorter`` is a prefix."""
    if not shorter.is_prefix_of(longer):
        return None
    return longer.edges[len(shorter):]


def bisection_product(a: BasicBisection, b: BasicBisection) -> "BisectionSum":
    """The exact set product {gh : g in a, h in b, s(g) = r(h)}.

    Decided by prefix comparison of b's range word against a's source word;
    the result is empty or a single basic bisection.
    """
    mu = _suffix(b.range_word, a.source_word)
    if mu is not None:
        if len(mu) == 0:
            piece = BasicBisection(
                a.range_word, b.source_word, a.excluded | b.excluded
            )
            return BisectionSum((piece,))
        if mu[0] in a.excluded:
            return BisectionSum(())
        piece = BasicBisection(
            a.range_word.concat(path_from_edges(mu)), b.source_word, b.excluded
        )
        return BisectionSum((piece,))
    nu = _suffix(a.source_word, b.range_word)
    if nu is not None and len(nu) >= 1:
        if nu[0] in b.excluded:
            return BisectionSum(())
        piece = BasicBisection(
            a.range_word, b.source_word.concat(path_from_edges(nu)), a.excluded
        )
        return BisectionSum((piece,))
    return BisectionSum(())


def intersect_basic(a: BasicBisection, b: BasicBisection) -> BasicBisection | None:
    """Intersection of two basic bisections: basic or empty (None)."""
    if a.degree != b.degree:
        return None
    for shallow, deep in ((a, b), (b, a)):
        mu_r = _suffix(deep.range_word, shallow.range_word)
        mu_s = _suffix(deep.source_word, shallow.source_word)
        if mu_r is None or mu_s is None or mu_r != mu_s:
            continue
        if len(mu_r) == 0:
            return BasicBisection(
                a.range_word, a.source_word, a.excluded | b.excluded
            )
        if mu_r[0] in shallow.excluded:
            return None
        return deep
    return None


def basic_subset(a: BasicBisection, b: BasicBisection) -> bool:
    """Decide a <= b by the prefix criterion."""
    if a.degree != b.degree:
        return False
    mu_r = _suffix(a.range_word, b.range_word)
    mu_s = _suffix(a.source_word, b.source_word)
    if mu_r is None or mu_s is None or mu_r != mu_s:
        return False
    if len(mu_r) == 0:
        return b.excluded <= a.excluded
    return mu_r[0] not in b.excluded


def basic_proper_subset(a: BasicBisection, b: BasicBisection) -> bool:
    return basic_subset(a, b) and not basic_subset(b, a)


def difference_basic(a: BasicBisection, b: BasicBisection) -> tuple[BasicBisection, ...]:
    """a minus b as a finite disjoint list of basic bisections."""
    inter = intersect_basic(a, b)
    if inter is None:
        return (a,)
    if basic_subset(a, inter):
        return ()
    mu = _suffix(inter.range_word, a.range_word)
    out: list[BasicBisection] = []
    if len(mu) == 0:
        # Same words, excluded set grew: peel the newly excluded edges.
        for e in sorted(inter.excluded - a.excluded):
            out.append(
                BasicBisection(
                    a.range_word.concat(path_from_edges((e,))),
                    a.source_word.concat(path_from_edges((e,))),
                    frozenset(),
                )
            )
        return tuple(out)
    # Tails losing the mu-prefix at each position.
    first = mu[0]
    out.append(
        BasicBisection(a.range_word, a.source_word, a.excluded | {first})
    )
    for r in range(1, len(mu)):
        pre = path_from_edges(mu[:r])
        out.append(
            BasicBisection(
                a.range_word.concat(pre),
                a.source_word.concat(pre),
                frozenset({mu[r]}),
            )
        )
    # Full mu-prefix tails that land in the deeper excluded set.
    pre = path_from_edges(mu)
    for e in sorted(inter.excluded):
        out.append(
            BasicBisection(
                a.range_word.concat(pre).concat(path_from_edges((e,))),
                a.source_word.concat(pre).concat(path_from_edges((e,))),
                frozenset(),
            )
        )
    return tuple(out)


@dataclass(frozen=True)
class BisectionSum:
    """A finite disjoint union of basic bisections."""

    pieces: tuple[BasicBisection, ...]

    def __post_init__(self):
        for x, y in itertools.combinations(self.pieces, 2):
            if intersect_basic(x, y) is not None:
                raise StructuralError(f"overlapping pieces: {x} and {y}")

    @property
    def empty(self) -> bool:
        return not self.pieces

    def single(self) -> BasicBisection:
        if len(self.pieces) != 1:
            raise ValueError("not a single basic bisection")
        return self.pieces[0]

    def product(self, other: "BisectionSum") -> "BisectionSum":
        raw: list[BasicBisection] = []
        for a in self.pieces:
            for b in other.pieces:
                raw.extend(bisection_product(a, b).pieces)
        return disjoint_sum(raw)

    def inverse(self) -> "BisectionSum":
        return BisectionSum(tuple(p.inverse() for p in self.pieces))

    def contains_germ(self, triple) -> bool:
        return any(p.contains_germ(triple) for p in self.pieces)


def disjoint_sum(pieces: Iterable[BasicBisection]) -> BisectionSum:
    """Rewrite an arbitrary finite family as a disjoint union of basics."""
    result: list[BasicBisection] = []
    queue = list(pieces)
    fuel = 10000
    while queue:
        fuel -= 1
        if fuel <= 0:
            raise RuntimeError("disjointification did not terminate")
        p = queue.pop()
        overlap = next(
            ((i, q) for i, q in enumerate(result) if intersect_basic(p, q) is not None),
            None,
        )
        if overlap is None:
            result.append(p)
            continue
        i, q = overlap
        inter = intersect_basic(p, q)
        result[i:i + 1] = list(difference_basic(q, inter)) + [inter]
        queue.extend(difference_basic(p, inter))
    return BisectionSum(tuple(result))


# ---------------------------------------------------------------------------
# The cylinder finder
# ---------------------------------------------------------------------------


def find_cylinder_inside(W: BasicBisection) -> PathWord:
    """A word whose full cylinder sits inside the basic open unit set ``W``.

    For ``W = Z(u \\ F)`` over the bouquet: ``u`` itself when ``F`` is empty,
    else ``u.e_n`` with ``n = max{j : e_j in F} + 1``.
    """
    if not W.is_unit_set():
        raise ValueError("find_cylinder_inside expects a unit-space basic open")
    u = W.range_word
    if not W.excluded:
        return u
    indices = [e.label for e in W.excluded]
    if not all(isinstance(i, int) for i in indices):
        raise ValueError("cylinder finder needs integer-indexed edge families")
    n = max(indices) + 1
    fresh = Edge(n, u.source_vertex, u.source_vertex)
    return u.concat(path_from_edges((fresh,)))


def appended_edge_contraction(lam: PathWord, edge_index: int = 1) -> BasicBisection:
    """Z(lam.e_i, lam): the canonical bouquet bisection whose range
    Z(lam.e_i) sits properly inside its source Z(lam)."""
    fresh = Edge(edge_index, lam.source_vertex, lam.source_vertex)
    return BasicBisection(lam.concat(path_from_edges((fresh,))), lam)


def repeat_word(word: PathWord, times: int) -> PathWord:
    """word^times; needs s(word) = r(word) (automatic on the bouquet)."""
    if times < 0:
        raise ValueError("repeat count must be nonnegative")
    out = vertex_path(word.range_vertex)
    for _ in range(times):
        out = out.concat(word)
    return out


# ---------------------------------------------------------------------------
# Lifting graph automorphisms to the groupoid
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SymbolicGroupoidAutomorphism:
    """A graph automorphism acting edgewise on paths, germwise on germs and
    setwise on basic bisections."""

    base: GraphAutomorphismBase

    def on_path(self, p: PathWord) -> PathWord:
        return self.base.path_image(p)

    def on_tail(self, t):
        if isinstance(t, SymbolicTail):
            return SymbolicTail(self.base.vertex_image(t.range_vertex), t.name)
        return self.base.path_image(t)

    def on_germ(self, g: GermElement) -> GermElement:
        return GermElement(
            self.base.path_image(g.mu), self.base.path_image(g.nu), self.on_tail(g.tail)
        )

    def on_bisection(self, b: BasicBisection) -> BasicBisection:
        return BasicBisection(
            self.base.path_image(b.range_word),
            self.base.path_image(b.source_word),
            frozenset(self.base.edge_image(e) for e in b.excluded),
        )

    def on_sum(self, s: BisectionSum) -> BisectionSum:
        return BisectionSum(tuple(self.on_bisection(p) for p in s.pieces))

    def power(self, k: int) -> "SymbolicGroupoidAutomorphism":
        return SymbolicGroupoidAutomorphism(self.base.power(k))


def lift_graph_automorphism(a: GraphAutomorphismBase) -> SymbolicGroupoidAutomorphism:
    return SymbolicGroupoidAutomorphism(a)


# ---------------------------------------------------------------------------
# Germ enumeration (brute-force oracle backing the calculus)
# ---------------------------------------------------------------------------


def words_from(graph, anchor, max_len: int, edge_bound: int | None = None):
    """All paths with range ``anchor`` of length 0..max_len."""
    from .graph_model import enumerate_paths

    out = []
    for n in range(max_len + 1):
        out.extend(enumerate_paths(graph, anchor, n, edge_bound))
    return out


def germs_in_bisection(
    b: BasicBisection, graph, max_tail_len: int, edge_bound: int | None = None
) -> set:
    """Concrete germ triples of ``b`` with tail length at most ``max_tail_len``."""
    out = set()
    for t in words_from(graph, b.range_word.source_vertex, max_tail_len, edge_bound):
        if t.edges and t.edges[0] in b.excluded:
            continue
        out.add(
            (
                b.range_word.concat(t),
                b.degree,
                b.source_word.concat(t),
            )
        )
    return out


def compose_germ_triples(g, h):
    """Compose concrete germ triples when the middle paths literally match."""
    x, p, y = g
    y2, q, z = h
    if y != y2:
        return None
    return (x, p + q, z)


# ---------------------------------------------------------------------------
# Text notation
# ---------------------------------------------------------------------------


def render_edge_label(label) -> str:
    if isinstance(label, int):
        return f"e{label}"
    return str(label)


def render_path(p: PathWord) -> str:
    if not p.edges:
        return str(p.range_vertex)
    return ".".join(render_edge_label(e.label) for e in p.edges)


def render_bisection(b: BasicBisection) -> str:
    excl = ""
    if b.excluded:
        labels = sorted(b.excluded, key=lambda e: repr(e.label))
        excl = "∖{" + ",".join(render_edge_label(e.label) for e in labels) + "}"
    if b.is_unit_set():
        return f"Z({render_path(b.range_word)}{excl})"
    return f"Z(({render_path(b.range_word)}, {render_path(b.source_word)}){excl})"


def render_sum(s: BisectionSum) -> str:
    if s.empty:
        return "∅"
    return " ⊔ ".join(render_bisection(p) for p in s.pieces)
