"""Independent brute-force oracles shared across the test suite.

Everything here recomputes expected values from first principles (path
enumeration, germ membership, orbit walking) without touching the code
paths under test.
"""

from __future__ import annotations

from groupoid_forge.graph_groupoid import BasicBisection, BisectionSum
from groupoid_forge.graph_model import path_from_edges, vertex_path


def all_words(graph, anchor, max_len: int, edge_bound=None):
    """Every path word with the given range, lengths 0..max_len, by direct
    recursive extension (independent of enumerate_paths)."""
    words = [vertex_path(anchor)]
    frontier = [vertex_path(anchor)]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            if edge_bound is not None:
                outgoing = graph.edges_with_range(w.source_vertex, edge_bound)
            else:
                outgoing = graph.edges_with_range(w.source_vertex)
            for e in outgoing:
                nxt.append(w.concat(path_from_edges((e,))))
        words.extend(nxt)
        frontier = nxt
    return words


def germ_universe(graph, anchor, max_len: int, edge_bound=None):
    """All candidate germ triples (x, |x|-|y|, y) with word lengths bounded.

    Single-anchor graphs only: every pair of words shares the terminal
    vertex, so every pair is a genuine germ of the shift space.
    """
    words = all_words(graph, anchor, max_len, edge_bound)
    return [
        (x, len(x) - len(y), y)
        for x in words
        for y in words
        if x.source_vertex == y.source_vertex
    ]


def product_member_oracle(a: BasicBisection, b: BasicBisection, candidate) -> bool:
    """Membership of a germ in the set product a.b, decided by factoring
    through a (unique since a is a bisection)."""
    x, p, y = candidate
    if p != a.degree + b.degree:
        return False
    if not a.range_word.is_prefix_of(x):
        return False
    tail = x.edges[len(a.range_word):]
    if tail and tail[0] in a.excluded:
        return False
    middle = a.source_word if not tail else a.source_word.concat(path_from_edges(tail))
    return b.contains_germ((middle, b.degree, y))


def sum_contains(s: BisectionSum, candidate) -> bool:
    return any(p.contains_germ(candidate) for p in s.pieces)


def brute_orbit_length(apply_fn, start) -> int:
    x = apply_fn(start)
    n = 1
    while x != start:
        x = apply_fn(x)
        n += 1
        assert n < 10**6
    return n
