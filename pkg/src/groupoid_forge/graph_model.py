"""Directed graphs, Bratteli diagrams, path words and graph automorphisms.

Conventions (kept throughout the package):

* an edge ``e`` has a *range* vertex ``r(e)`` and a *source* vertex ``s(e)``;
  a path ``p = e_1 ... e_n`` requires ``s(e_i) = r(e_{i+1})``, its range is
  ``r(e_1)`` and its source ``s(e_n)``;
* a Bratteli diagram is leveled: an edge at level ``n`` has its range in
  level ``n`` and its source in level ``n+1``, so paths run downward;
* diagram vertices are pairs ``(level, index)``; diagram edge labels are
  ``(level, range_index, source_index, copy)`` with 0-based copies.

Diagrams carry an explicit horizon.  An optional ``repeat_from`` index
declares an eventually-periodic continuation of the multiplicity matrices;
anything beyond the horizon without that rule is an error, never a guess.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Hashable, Mapping, Sequence

from .matrices import IntMatrix, as_matrix, shape
from .validation import StructuralError, ValidationReport, Violation, report_from

Vertex = Hashable


@dataclass(frozen=True, order=True)
class Edge:
    label: Hashable
    range_vertex: Vertex
    source_vertex: Vertex


@dataclass(frozen=True)
class PathWord:
    """A finite path; the empty path is anchored at a vertex."""

    edges: tuple[Edge, ...] = ()
    anchor: Vertex | None = None

    def __post_init__(self):
        if not self.edges and self.anchor is None:
            raise StructuralError("empty path needs an anchor vertex")
        for a, b in zip(self.edges, self.edges[1:]):
            if a.source_vertex != b.range_vertex:
                raise StructuralError(f"edges do not compose: {a} then {b}")
        if self.edges and self.anchor is not None:
            # the anchor is redundant on nonempty paths; normalize so that
            # structural equality of paths is equality of edge sequences
            object.__setattr__(self, "anchor", None)

    @property
    def range_vertex(self) -> Vertex:
        return self.edges[0].range_vertex if self.edges else self.anchor

    @property
    def source_vertex(self) -> Vertex:
        return self.edges[-1].source_vertex if self.edges else self.anchor

    def __len__(self) -> int:
        return len(self.edges)

    def concat(self, other: "PathWord") -> "PathWord":
        if self.source_vertex != other.range_vertex:
            raise ValueError(f"paths do not compose: {self} . {other}")
        if not other.edges:
            return self
        return PathWord(self.edges + other.edges, self.anchor)

    def prefix(self, n: int) -> "PathWord":
        if n > len(self):
            raise ValueError("prefix longer than path")
        if n == 0:
            return vertex_path(self.range_vertex)
        return PathWord(self.edges[:n])

    def is_prefix_of(self, other: "PathWord") -> bool:
        if len(self) > len(other):
            return False
        if len(self) == 0:
            return self.range_vertex == other.range_vertex
        return other.edges[: len(self)] == self.edges

    def sort_key(self):
        return tuple(e.label for e in self.edges)

    def __str__(self) -> str:
        if not self.edges:
            return str(self.anchor)
        return ".".join(str(e.label) for e in self.edges)


def vertex_path(v: Vertex) -> PathWord:
    return PathWord((), v)


def path_from_edges(edges: Sequence[Edge]) -> PathWord:
    return PathWord(tuple(edges))


@dataclass(frozen=True)
class DirectedGraph:
    """Finite directed graph; vertices with infinitely many receivers can be
    declared via ``infinite_receiver_vertices`` (their edge list is then only
    a materialized finite window)."""

    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]
    infinite_receiver_vertices: frozenset = frozenset()

    def __post_init__(self):
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise StructuralError("duplicate vertices")
        for e in self.edges:
            if e.range_vertex not in vset or e.source_vertex not in vset:
                raise StructuralError(f"edge {e.label} references undeclared vertex")
        if len({e.label for e in self.edges}) != len(self.edges):
            raise StructuralError("duplicate edge labels")

    requires_edge_bound = False

    def edges_with_range(self, v: Vertex) -> tuple[Edge, ...]:
        return tuple(sorted((e for e in self.edges if e.range_vertex == v)))

    def edges_with_source(self, v: Vertex) -> tuple[Edge, ...]:
        return tuple(sorted((e for e in self.edges if e.source_vertex == v)))

    def has_infinite_receivers(self, v: Vertex) -> bool:
        return v in self.infinite_receiver_vertices


def validate_graph(g: DirectedGraph) -> ValidationReport:
    """No sources: every vertex must receive at least one edge."""
    violations = []
    for v in g.vertices:
        if not g.edges_with_range(v) and not g.has_infinite_receivers(v):
            violations.append(Violation("no-sources (r^{-1}(v) nonempty)", f"vertex {v}"))
    return report_from(violations)


def loop_graph(n_loops: int, vertex: Vertex = "v") -> DirectedGraph:
    """One vertex with ``n_loops`` loop edges labelled 0..n_loops-1."""
    edges = tuple(Edge(i, vertex, vertex) for i in range(n_loops))
    return DirectedGraph((vertex,), edges)


# ---------------------------------------------------------------------------
# Bratteli diagrams
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BratteliDiagram:
    """Leveled multiplicity data.  ``mult[n][i][j]`` is the number of edges
    with range ``(n, i)`` and source ``(n+1, j)``."""

    level_sizes: tuple[int, ...]
    mult: tuple[IntMatrix, ...]
    repeat_from: int | None = None

    def __post_init__(self):
        if not self.level_sizes:
            raise StructuralError("diagram needs at least one level")
        if any(c <= 0 for c in self.level_sizes):
            raise StructuralError("level sizes must be positive")
        if len(self.mult) != len(self.level_sizes) - 1:
            raise StructuralError(
                f"expected {len(self.level_sizes) - 1} multiplicity matrices, "
                f"got {len(self.mult)}"
            )
        for n, m in enumerate(self.mult):
            if shape(m) != (self.level_sizes[n], self.level_sizes[n + 1]):
                raise StructuralError(f"matrix at level {n} has wrong shape")
            if any(x < 0 for row in m for x in row):
                raise StructuralError(f"negative multiplicity at level {n}")
        if self.repeat_from is not None:
            if not 0 <= self.repeat_from < len(self.mult):
                raise StructuralError("repeat_from outside stored matrices")
            if self.level_sizes[-1] != self.level_sizes[self.repeat_from]:
                raise StructuralError(
                    "repetition rule needs matching level sizes at the seam"
                )

    requires_edge_bound = False

    @property
    def horizon(self) -> int:
        return len(self.level_sizes) - 1

    def has_level(self, n: int) -> bool:
        return 0 <= n <= self.horizon or self.repeat_from is not None

    def level_size(self, n: int) -> int:
        if n < 0:
            raise StructuralError("negative level")
        if n <= self.horizon:
            return self.level_sizes[n]
        if self.repeat_from is None:
            raise StructuralError(f"level {n} beyond horizon and no repetition rule")
        period = len(self.mult) - self.repeat_from
        return self.level_sizes[self.repeat_from + (n - self.repeat_from) % period]

    def multiplicity_matrix(self, n: int) -> IntMatrix:
        """Matrix for edges between levels ``n`` and ``n+1``."""
        if n < 0:
            raise StructuralError("negative level")
        if n < len(self.mult):
            return self.mult[n]
        if self.repeat_from is None:
            raise StructuralError(f"edges at level {n} beyond horizon, no repetition rule")
        period = len(self.mult) - self.repeat_from
        return self.mult[self.repeat_from + (n - self.repeat_from) % period]

    def vertices_at(self, n: int) -> tuple[Vertex, ...]:
        return tuple((n, i) for i in range(self.level_size(n)))

    def edges_between(self, n: int) -> tuple[Edge, ...]:
        m = self.multiplicity_matrix(n)
        out = []
        for i, row in enumerate(m):
            for j, k in enumerate(row):
                out.extend(
                    Edge((n, i, j, t), (n, i), (n + 1, j)) for t in range(k)
                )
        return tuple(out)

    def edges_with_range(self, v: Vertex) -> tuple[Edge, ...]:
        n, i = v
        m = self.multiplicity_matrix(n)
        return tuple(
            Edge((n, i, j, t), (n, i), (n + 1, j))
            for j, k in enumerate(m[i])
            for t in range(k)
        )

    def edges_with_source(self, v: Vertex) -> tuple[Edge, ...]:
        n, j = v
        if n == 0:
            return ()
        m = self.multiplicity_matrix(n - 1)
        return tuple(
            Edge((n - 1, i, j, t), (n - 1, i), (n, j))
            for i in range(len(m))
            for t in range(m[i][j])
        )

    def has_infinite_receivers(self, v: Vertex) -> bool:
        return False

    def to_json(self) -> dict:
        edges = []
        for n, m in enumerate(self.mult):
            for i, row in enumerate(m):
                for j, k in enumerate(row):
                    if k:
                        edges.append({"level": n, "range": i, "source": j, "mult": k})
        out = {
            "levels": [{"size": c} for c in self.level_sizes],
            "edges": edges,
        }
        if self.repeat_from is not None:
            out["repeat_from"] = self.repeat_from
        return out


def constant_diagram(k: int, levels: int = 2) -> BratteliDiagram:
    """Single vertex per level, ``k`` parallel edges, repeating forever."""
    return BratteliDiagram(
        tuple(1 for _ in range(levels)),
        tuple(as_matrix([[k]]) for _ in range(levels - 1)),
        repeat_from=0,
    )


def diagram_from_json(data: dict | str) -> BratteliDiagram:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        sizes = tuple(int(entry["size"]) for entry in data["levels"])
    except (KeyError, TypeError) as exc:
        raise StructuralError(f"malformed levels: {exc}") from exc
    n_levels = len(sizes)
    if n_levels < 1:
        raise StructuralError("diagram needs at least one level")
    tables = [
        [[0] * sizes[n + 1] for _ in range(sizes[n])] for n in range(n_levels - 1)
    ]
    seen = set()
    for entry in data.get("edges", ()):
        try:
            n = int(entry["level"])
            i = int(entry["range"])
            j = int(entry["source"])
            k = int(entry["mult"])
        except (KeyError, TypeError, ValueError) as exc:
            raise StructuralError(f"malformed edge entry {entry}") from exc
        if "source_level" in entry and int(entry["source_level"]) != n + 1:
            raise StructuralError(
                f"edge at level {n} must have its source at level {n + 1}"
            )
        if not 0 <= n < n_levels - 1:
            raise StructuralError(f"edge level {n} out of range")
        if not 0 <= i < sizes[n]:
            raise StructuralError(f"range index {i} out of range at level {n}")
        if not 0 <= j < sizes[n + 1]:
            raise StructuralError(f"source index {j} out of range at level {n + 1}")
        if k < 0:
            raise StructuralError("negative multiplicity")
        if (n, i, j) in seen:
            raise StructuralError(f"duplicate edge entry for {(n, i, j)}")
        seen.add((n, i, j))
        tables[n][i][j] = k
    repeat = data.get("repeat_from")
    return BratteliDiagram(
        sizes,
        tuple(as_matrix(t) for t in tables),
        None if repeat is None else int(repeat),
    )


def validate_bratteli(d: BratteliDiagram) -> ValidationReport:
    """Check the leveled-graph invariants on the stored data.

    The receiver condition ``r^{-1}(v) != empty`` is checked wherever the
    next-level matrix is available (stored or via the repetition rule); a
    truncated final level is not a violation.
    """
    violations = []
    n_matrices = len(d.mult) + (1 if d.repeat_from is not None else 0)
    for n in range(len(d.level_sizes)):
        try:
            m = d.multiplicity_matrix(n)
        except StructuralError:
            m = None
        if m is not None:
            for i in range(d.level_size(n)):
                if not any(m[i]):
                    violations.append(
                        Violation(
                            "receiver (vE^1 nonempty: vertex must receive from the "
                            "next level)",
                            f"vertex ({n}, {i})",
                        )
                    )
        if n >= 1:
            prev = d.multiplicity_matrix(n - 1)
            for j in range(d.level_size(n)):
                if not any(prev[i][j] for i in range(len(prev))):
                    violations.append(
                        Violation(
                            "emitter (E^1v nonempty for v outside level 0)",
                            f"vertex ({n}, {j})",
                        )
                    )
        if d.repeat_from is None and n >= len(d.mult):
            break
    return report_from(violations)


def telescope(d: BratteliDiagram, subsequence: Sequence[int]) -> BratteliDiagram:
    """Collapse levels along ``subsequence``; new multiplicities count paths
    between the chosen levels (product of the intermediate matrices)."""
    subsequence = tuple(int(x) for x in subsequence)
    if len(subsequence) < 2:
        raise ValueError("subsequence needs at least two levels")
    if subsequence[0] != 0:
        raise ValueError("subsequence must start at level 0")
    if any(a >= b for a, b in zip(subsequence, subsequence[1:])):
        raise ValueError("subsequence must be strictly increasing")
    if d.repeat_from is None and subsequence[-1] > d.horizon:
        raise ValueError("subsequence exceeds the diagram horizon")
    sizes = tuple(d.level_size(t) for t in subsequence)
    mats = []
    for a, b in zip(subsequence, subsequence[1:]):
        # Path counts from level a to level b: right-to-left product keeps
        # the (upper level) x (lower level) orientation of the tables.
        prod = d.multiplicity_matrix(a)
        for n in range(a + 1, b):
            prod = _mat_mul_tables(prod, d.multiplicity_matrix(n))
        mats.append(prod)
    return BratteliDiagram(sizes, tuple(mats), None)


def _mat_mul_tables(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    ra, ca = shape(a)
    rb, cb = shape(b)
    if ca != rb:
        raise ValueError("level sizes do not chain")
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(ca)) for j in range(cb))
        for i in range(ra)
    )


def path_count_matrix(d: BratteliDiagram, from_level: int, to_level: int) -> IntMatrix:
    """Number of paths between two levels, as a matrix (adjacency power)."""
    if to_level < from_level:
        raise ValueError("to_level must be >= from_level")
    if to_level == from_level:
        from .matrices import identity

        return identity(d.level_size(from_level))
    prod = d.multiplicity_matrix(from_level)
    for n in range(from_level + 1, to_level):
        prod = _mat_mul_tables(prod, d.multiplicity_matrix(n))
    return prod


def enumerate_paths(
    g, anchor: Vertex, depth: int, edge_bound: int | None = None
) -> tuple[PathWord, ...]:
    """All paths of the given length with range ``anchor``, sorted
    lexicographically by edge label sequence.

    Graphs with infinite edge families must be called with ``edge_bound``.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if getattr(g, "requires_edge_bound", False) and edge_bound is None:
        raise ValueError("this graph has infinite edge families: pass edge_bound")
    _check_anchor(g, anchor)
    paths = [vertex_path(anchor)]
    for _ in range(depth):
        nxt = []
        for p in paths:
            if getattr(g, "requires_edge_bound", False):
                outgoing = g.edges_with_range(p.source_vertex, edge_bound)
            else:
                outgoing = g.edges_with_range(p.source_vertex)
            nxt.extend(p.concat(PathWord((e,))) for e in outgoing)
        paths = nxt
    return tuple(sorted(paths, key=PathWord.sort_key))


def _check_anchor(g, anchor) -> None:
    if isinstance(g, BratteliDiagram):
        n, i = anchor
        if not (g.has_level(n) and 0 <= i < g.level_size(n)):
            raise ValueError(f"anchor {anchor} not in diagram")
    elif isinstance(g, DirectedGraph):
        if anchor not in g.vertices:
            raise ValueError(f"anchor {anchor} not in graph")
    # duck-typed graphs (e.g. the infinite bouquet) check their own anchors


# ---------------------------------------------------------------------------
# Graph automorphisms
# ---------------------------------------------------------------------------


class GraphAutomorphismBase:
    """Common path/inverse plumbing; subclasses provide vertex/edge images."""

    def vertex_image(self, v: Vertex) -> Vertex:
        raise NotImplementedError

    def edge_image(self, e: Edge) -> Edge:
        raise NotImplementedError

    def path_image(self, p: PathWord) -> PathWord:
        if not p.edges:
            return vertex_path(self.vertex_image(p.anchor))
        return PathWord(tuple(self.edge_image(e) for e in p.edges))

    def power(self, k: int) -> "GraphAutomorphismBase":
        raise NotImplementedError

    def inverse(self) -> "GraphAutomorphismBase":
        return self.power(-1)


@dataclass(frozen=True)
class MappingGraphAutomorphism(GraphAutomorphismBase):
    """Automorphism of a finite graph given by explicit bijections."""

    graph: DirectedGraph
    vertex_map: Mapping[Vertex, Vertex]
    edge_map: Mapping[Edge, Edge]

    def __post_init__(self):
        vs, es = set(self.graph.vertices), set(self.graph.edges)
        if set(self.vertex_map) != vs or set(self.vertex_map.values()) != vs:
            raise ValueError("vertex map is not a bijection on the vertex set")
        if set(self.edge_map) != es or set(self.edge_map.values()) != es:
            raise ValueError("edge map is not a bijection on the edge set")
        for e, img in self.edge_map.items():
            if img.range_vertex != self.vertex_map[e.range_vertex]:
                raise ValueError(f"range not preserved on edge {e.label}")
            if img.source_vertex != self.vertex_map[e.source_vertex]:
                raise ValueError(f"source not preserved on edge {e.label}")

    def vertex_image(self, v: Vertex) -> Vertex:
        return self.vertex_map[v]

    def edge_image(self, e: Edge) -> Edge:
        return self.edge_map[e]

    def power(self, k: int) -> "MappingGraphAutomorphism":
        n = self.order()
        k %= n
        vmap = {v: v for v in self.graph.vertices}
        emap = {e: e for e in self.graph.edges}
        for _ in range(k):
            vmap = {v: self.vertex_map[w] for v, w in vmap.items()}
            emap = {e: self.edge_map[f] for e, f in emap.items()}
        return MappingGraphAutomorphism(self.graph, vmap, emap)

    def order(self) -> int:
        n = 1
        for orbit_len in _orbit_lengths(self.edge_map):
            n = math.lcm(n, orbit_len)
        for orbit_len in _orbit_lengths(self.vertex_map):
            n = math.lcm(n, orbit_len)
        return n


def _orbit_lengths(mapping: Mapping) -> list[int]:
    seen = set()
    lengths = []
    for start in mapping:
        if start in seen:
            continue
        x, n = start, 0
        while True:
            seen.add(x)
            x = mapping[x]
            n += 1
            if x == start:
                break
        lengths.append(n)
    return lengths


def edge_permutation_automorphism(
    g: DirectedGraph, edge_label_map: Mapping[Hashable, Hashable]
) -> MappingGraphAutomorphism:
    """Vertex-fixing automorphism from a permutation of edge labels."""
    by_label = {e.label: e for e in g.edges}
    emap = {by_label[a]: by_label[b] for a, b in edge_label_map.items()}
    for e in g.edges:
        emap.setdefault(e, e)
    return MappingGraphAutomorphism(g, {v: v for v in g.vertices}, emap)


@dataclass(frozen=True)
class EdgeCycleAutomorphism(GraphAutomorphismBase):
    """Vertex-fixing diagram automorphism cycling each parallel-edge class.

    With the default labelling, the edge copy ``t`` of a ``(level, i, j)``
    class with multiplicity ``k`` maps to copy ``(t + step) mod k``.  A custom
    labelling gives, per class, the cyclic order in which copies are cycled.
    """

    diagram: BratteliDiagram
    step: int = 1
    labelling: Mapping[tuple[int, int, int], tuple[int, ...]] | None = None

    def __post_init__(self):
        if self.labelling is not None:
            for key, order in self.labelling.items():
                n, i, j = key
                k = self.diagram.multiplicity_matrix(n)[i][j]
                if sorted(order) != list(range(k)):
                    raise ValueError(
                        f"labelling for class {key} is not a bijection onto its "
                        f"{k} edge copies"
                    )

    def _cycle_order(self, n: int, i: int, j: int) -> tuple[int, ...]:
        if self.labelling is not None and (n, i, j) in self.labelling:
            return self.labelling[(n, i, j)]
        return tuple(range(self.diagram.multiplicity_matrix(n)[i][j]))

    def vertex_image(self, v: Vertex) -> Vertex:
        return v

    def edge_image(self, e: Edge) -> Edge:
        n, i, j, t = e.label
        order = self._cycle_order(n, i, j)
        pos = order.index(t)
        t2 = order[(pos + self.step) % len(order)]
        return Edge((n, i, j, t2), e.range_vertex, e.source_vertex)

    def power(self, k: int) -> "EdgeCycleAutomorphism":
        return EdgeCycleAutomorphism(self.diagram, self.step * k, self.labelling)

    def order(self, max_level: int) -> int:
        """lcm of the class sizes over levels 0..max_level-1."""
        n = 1
        for lvl in range(max_level):
            for row in self.diagram.multiplicity_matrix(lvl):
                for k in row:
                    if k:
                        n = math.lcm(n, k)
        return n


def edge_cycle_automorphism(
    d: BratteliDiagram,
    labelling: Mapping[tuple[int, int, int], Sequence[int]] | None = None,
) -> EdgeCycleAutomorphism:
    """The automorphism fixing every vertex and cycling each parallel class."""
    canonical = None
    if labelling is not None:
        canonical = {k: tuple(v) for k, v in labelling.items()}
    return EdgeCycleAutomorphism(d, 1, canonical)
