"""Rank-2 Bratteli diagrams: red cycles, blue edges, the factorization
permutation, edge orders and the telescoping algorithm.

Vertices are triples ``(level, cycle, position)``.  Each level is a disjoint
union of red cycles; the red edge sourced at position ``p`` ranges at the
cyclic predecessor ``p + orientation``.  Blue edges connect consecutive
levels (range above, source below) and carry the factorization permutation
``F``, which shifts both endpoints to their red predecessors.

The canonical layout built from matrix data (A, B, T) indexes the blue edges
of a cycle pair 0..A(i,j)*T(j)-1, anchors endpoint positions by reduction
mod the cycle lengths and lets F add one; its single F-orbit per cycle pair
gives the order formula o(e) = A(i,j)*T(j) exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

from .graph_model import Edge
from .matrices import IntMatrix, as_matrix, is_proper, mat_mul, min_entry, shape
from .validation import StructuralError, ValidationReport, Violation, report_from

Vertex = tuple[int, int, int]
BlueLabel = tuple[int, int, int, int]  # (level, range cycle, source cycle, index)


@dataclass(frozen=True)
class Rank2Diagram:
    cycle_sizes: tuple[tuple[int, ...], ...]
    blue: tuple[Edge, ...]
    f_map: Mapping[BlueLabel, BlueLabel]
    orientation: int = 1

    def __post_init__(self):
        if self.orientation not in (1, -1):
            raise StructuralError("orientation must be +1 or -1")
        if any(s <= 0 for level in self.cycle_sizes for s in level):
            raise StructuralError("cycle sizes must be positive")
        labels = [e.label for e in self.blue]
        if len(set(labels)) != len(labels):
            raise StructuralError("duplicate blue edge labels")
        if set(self.f_map) != set(labels) or set(self.f_map.values()) != set(labels):
            raise StructuralError("factorization permutation must biject the blue edges")
        for e in self.blue:
            n, j, p = e.range_vertex
            n2, i, q = e.source_vertex
            if n2 != n + 1:
                raise StructuralError(f"blue edge {e.label} skips a level")
            if not self._vertex_ok(e.range_vertex) or not self._vertex_ok(e.source_vertex):
                raise StructuralError(f"blue edge {e.label} references a bad vertex")

    def _vertex_ok(self, v: Vertex) -> bool:
        n, j, p = v
        return (
            0 <= n < len(self.cycle_sizes)
            and 0 <= j < len(self.cycle_sizes[n])
            and 0 <= p < self.cycle_sizes[n][j]
        )

    def levels(self) -> int:
        return len(self.cycle_sizes)

    def cycle_count(self, n: int) -> int:
        return len(self.cycle_sizes[n])

    def cycle_size(self, n: int, j: int) -> int:
        return self.cycle_sizes[n][j]

    def vertices_at(self, n: int) -> tuple[Vertex, ...]:
        return tuple(
            (n, j, p)
            for j in range(self.cycle_count(n))
            for p in range(self.cycle_size(n, j))
        )

    def red_predecessor(self, v: Vertex) -> Vertex:
        n, j, p = v
        return (n, j, (p + self.orientation) % self.cycle_size(n, j))

    def red_walk(self, v: Vertex, steps: int) -> Vertex:
        n, j, p = v
        return (n, j, (p + self.orientation * steps) % self.cycle_size(n, j))

    def red_path_source(self, range_vertex: Vertex, degree: int) -> Vertex:
        """Source of the unique red path of the given degree ranging here."""
        return self.red_walk(range_vertex, -degree)

    @cached_property
    def _by_level(self) -> Mapping[int, tuple[Edge, ...]]:
        out: dict[int, list[Edge]] = {}
        for e in self.blue:
            out.setdefault(e.range_vertex[0], []).append(e)
        return {n: tuple(v) for n, v in out.items()}

    def blue_edges_at(self, n: int) -> tuple[Edge, ...]:
        return self._by_level.get(n, ())

    @cached_property
    def _by_label(self) -> Mapping[BlueLabel, Edge]:
        return {e.label: e for e in self.blue}

    def blue_by_label(self) -> Mapping[BlueLabel, Edge]:
        return self._by_label


def validate_rank2(d: Rank2Diagram) -> ValidationReport:
    """Factorization consistency plus the blue-skeleton degree conditions."""
    v: list[Violation] = []
    by_label = d.blue_by_label()
    for e in d.blue:
        img = by_label[d.f_map[e.label]]
        if img.range_vertex != d.red_predecessor(e.range_vertex):
            v.append(
                Violation("F shifts the range to its red predecessor", f"edge {e.label}")
            )
        if img.source_vertex != d.red_predecessor(e.source_vertex):
            v.append(
                Violation("F shifts the source to its red predecessor", f"edge {e.label}")
            )
    for n in range(d.levels() - 1):
        received = {e.range_vertex for e in d.blue_edges_at(n)}
        for vertex in d.vertices_at(n):
            if vertex not in received:
                v.append(Violation("blue graph has no sources", f"vertex {vertex}"))
    for n in range(1, d.levels()):
        emitted = {e.source_vertex for e in d.blue_edges_at(n - 1)}
        for vertex in d.vertices_at(n):
            if vertex not in emitted:
                v.append(
                    Violation("blue sinks only at level 0", f"vertex {vertex}")
                )
    return report_from(v)


# ---------------------------------------------------------------------------
# Matrix data and the canonical builder
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Rank2Data:
    """Input sequences: A_n, B_n of shape (c_{n+1}, c_n) and diagonal vectors
    T_n; an optional repetition rule extends them periodically."""

    A: tuple[IntMatrix, ...]
    B: tuple[IntMatrix, ...]
    T: tuple[tuple[int, ...], ...]
    repeat_from: int | None = None
    orientation: int = 1

    def __post_init__(self):
        if len(self.T) != len(self.A) + 1 or len(self.A) != len(self.B):
            raise StructuralError("need T_0..T_N and matching A_0..A_{N-1}, B_0..B_{N-1}")
        if any(t <= 0 for vec in self.T for t in vec):
            raise StructuralError("T must be diagonal with positive entries")
        for n, (a, b) in enumerate(zip(self.A, self.B)):
            want = (len(self.T[n + 1]), len(self.T[n]))
            if shape(a) != want or shape(b) != want:
                raise StructuralError(f"matrices at level {n} must have shape {want}")
            for i in range(want[0]):
                for j in range(want[1]):
                    if a[i][j] * self.T[n][j] != self.T[n + 1][i] * b[i][j]:
                        raise StructuralError(
                            f"compatibility A_n T_n = T_(n+1) B_n fails at "
                            f"level {n}, entry ({i},{j})"
                        )
        if self.repeat_from is not None:
            if not 0 <= self.repeat_from < len(self.A):
                raise StructuralError("repeat_from outside stored matrices")
            if self.T[-1] != self.T[self.repeat_from]:
                raise StructuralError("repetition rule needs matching T at the seam")

    def _index(self, n: int) -> int:
        if n < len(self.A):
            return n
        if self.repeat_from is None:
            raise StructuralError(f"level {n} beyond horizon, no repetition rule")
        period = len(self.A) - self.repeat_from
        return self.repeat_from + (n - self.repeat_from) % period

    def a_at(self, n: int) -> IntMatrix:
        return self.A[self._index(n)]

    def b_at(self, n: int) -> IntMatrix:
        return self.B[self._index(n)]

    def t_at(self, n: int) -> tuple[int, ...]:
        if n <= len(self.A):
            return self.T[n]
        return self.T[self._index(n)]

    def a_chain(self, top: int, bottom: int) -> IntMatrix:
        """A_{top-1} ... A_{bottom} mapping level ``bottom`` to ``top``."""
        if top < bottom:
            raise ValueError("top must be >= bottom")
        acc = as_matrix([[1 if i == j else 0 for j in range(len(self.t_at(bottom)))]
                         for i in range(len(self.t_at(bottom)))])
        for n in range(bottom, top):
            acc = mat_mul(self.a_at(n), acc)
        return acc

    def b_chain(self, top: int, bottom: int) -> IntMatrix:
        if top < bottom:
            raise ValueError("top must be >= bottom")
        acc = as_matrix([[1 if i == j else 0 for j in range(len(self.t_at(bottom)))]
                         for i in range(len(self.t_at(bottom)))])
        for n in range(bottom, top):
            acc = mat_mul(self.b_at(n), acc)
        return acc

    def to_json(self) -> dict:
        out = {
            "A": [list(map(list, m)) for m in self.A],
            "B": [list(map(list, m)) for m in self.B],
            "T": [list(v) for v in self.T],
            "orientation": "+1" if self.orientation == 1 else "-1",
        }
        if self.repeat_from is not None:
            out["repeat_from"] = self.repeat_from
        return out


def rank2_data_from_json(data: dict | str) -> tuple[Rank2Data, int | None]:
    """Parse the rank-2 schema; returns the data and the optional horizon hint."""
    if isinstance(data, str):
        data = json.loads(data)
    try:
        A = tuple(as_matrix(m) for m in data["A"])
        B = tuple(as_matrix(m) for m in data["B"])
        T = tuple(tuple(int(x) for x in v) for v in data["T"])
    except (KeyError, TypeError, ValueError) as exc:
        raise StructuralError(f"malformed rank-2 data: {exc}") from exc
    orientation = {"+1": 1, "-1": -1}.get(str(data.get("orientation", "+1")))
    if orientation is None:
        raise StructuralError("orientation must be '+1' or '-1'")
    repeat = data.get("repeat_from")
    horizon = data.get("horizon")
    return (
        Rank2Data(A, B, T, None if repeat is None else int(repeat), orientation),
        None if horizon is None else int(horizon),
    )


def build_rank2(data: Rank2Data, levels: int) -> Rank2Diagram:
    """Materialize the canonical diagram for the matrix data.

    Between cycle j at level n and cycle i at level n+1 there are
    A_n(i,j) * T_n(j) blue edges; edge k ranges at position k mod T_n(j),
    sources at position k mod T_{n+1}(i), and F advances k by the
    orientation, cyclically.
    """
    if levels < 1:
        raise ValueError("need at least one level")
    for n in range(levels - 1):
        if not is_proper(data.a_at(n)) or not is_proper(data.b_at(n)):
            raise StructuralError(f"matrices at level {n} must be proper")
    sizes = tuple(tuple(data.t_at(n)) for n in range(levels))
    blue: list[Edge] = []
    f_map: dict[BlueLabel, BlueLabel] = {}
    for n in range(levels - 1):
        a = data.a_at(n)
        t_low, t_high = data.t_at(n), data.t_at(n + 1)
        for i in range(len(t_high)):
            for j in range(len(t_low)):
                count = a[i][j] * t_low[j]
                for k in range(count):
                    label: BlueLabel = (n, j, i, k)
                    blue.append(
                        Edge(label, (n, j, k % t_low[j]), (n + 1, i, k % t_high[i]))
                    )
                    f_map[label] = (n, j, i, (k + data.orientation) % count)
    return Rank2Diagram(sizes, tuple(blue), f_map, data.orientation)


# ---------------------------------------------------------------------------
# Orders
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrderData:
    """Orders o(e) of the blue edges under F, level lcms O_n, and the
    recursion m_0 = 0, m_{n+1} = m_n + n * O_n."""

    edge_orders: Mapping[BlueLabel, int]
    level_lcm: tuple[int, ...]
    m: tuple[int, ...]
    orbit_position: Mapping[BlueLabel, tuple[tuple[BlueLabel, ...], int]]

    @cached_property
    def _level_orders(self) -> Mapping[int, tuple[int, ...]]:
        buckets: dict[int, set[int]] = {}
        for label, o in self.edge_orders.items():
            buckets.setdefault(label[0], set()).add(o)
        return {n: tuple(sorted(v)) for n, v in buckets.items()}

    def orders_at(self, n: int) -> tuple[int, ...]:
        return self._level_orders.get(n, ())

    def min_order_at(self, n: int) -> int:
        return self._level_orders[n][0]

    def max_edge_level(self) -> int:
        return max(self._level_orders)

    def f_power(self, label: BlueLabel, k: int) -> BlueLabel:
        orbit, pos = self.orbit_position[label]
        return orbit[(pos + k) % len(orbit)]


def compute_orders(d: Rank2Diagram) -> OrderData:
    orbit_position: dict[BlueLabel, tuple[tuple[BlueLabel, ...], int]] = {}
    edge_orders: dict[BlueLabel, int] = {}
    seen: set[BlueLabel] = set()
    for e in d.blue:
        if e.label in seen:
            continue
        orbit = [e.label]
        x = d.f_map[e.label]
        while x != e.label:
            orbit.append(x)
            x = d.f_map[x]
        orbit_t = tuple(orbit)
        for pos, label in enumerate(orbit_t):
            seen.add(label)
            orbit_position[label] = (orbit_t, pos)
            edge_orders[label] = len(orbit_t)
    n_levels = d.levels()
    level_lcm = []
    for n in range(n_levels - 1):
        lcm = 1
        for label, o in edge_orders.items():
            if label[0] == n:
                lcm = math.lcm(lcm, o)
        level_lcm.append(lcm)
    m = [0]
    for n in range(n_levels - 1):
        m.append(m[-1] + n * level_lcm[n])
    return OrderData(edge_orders, tuple(level_lcm), tuple(m), orbit_position)


# ---------------------------------------------------------------------------
# Telescoping (subsequence + bound bookkeeping)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TelescopeResult:
    complete: bool
    l_prime: tuple[int, ...]
    l: tuple[int, ...]
    M: tuple[int, ...]
    telescoped: Rank2Data | None
    certificate: tuple[dict, ...]
    source: Rank2Data
    failure: str | None = None

    def to_json(self) -> dict:
        return {
            "complete": self.complete,
            "l_prime": list(self.l_prime),
            "l": list(self.l),
            "M": list(self.M),
            "certificate": list(self.certificate),
            "telescoped": None if self.telescoped is None else self.telescoped.to_json(),
            "source": self.source.to_json(),
            "failure": self.failure,
        }


def telescope_rank2(data: Rank2Data, levels_out: int, horizon_cap: int = 4096) -> TelescopeResult:
    """Choose the level subsequence making edge orders outrun the m-recursion.

    Seed levels come from a subsequence along which every entry of the
    chained matrices reaches n; then M_0 = M_1 = 0 and each further level is
    the first whose chained matrix has every entry above (n+1) * M_{n+1},
    where M_{n+1} = M_n + n * prod(A_chain(i,j) * T(j)).
    """
    if levels_out < 3:
        raise ValueError("telescoping needs at least three output levels")
    l_prime: list[int] = [0]
    try:
        for i in range(1, 3):
            m = _first_level_with_min_entry(data, l_prime[-1], i, horizon_cap, strict=False)
            l_prime.append(m)
    except _HorizonExhausted as exc:
        return TelescopeResult(
            False, tuple(l_prime), tuple(l_prime), (0, 0), None, (), data, str(exc)
        )
    l = list(l_prime[:3])
    M = [0, 0]
    certificate: list[dict] = []
    for step in range(2, levels_out - 1):
        chained = data.a_chain(l[step], l[step - 1])
        t_vec = data.t_at(l[step - 1])
        prod = 1
        for i in range(len(chained)):
            for j in range(len(chained[0])):
                prod *= chained[i][j] * t_vec[j]
        M.append(M[-1] + (step - 1) * prod)
        bound = step * M[step]
        try:
            nxt = _first_level_with_min_entry(data, l[step], bound, horizon_cap, strict=True)
        except _HorizonExhausted as exc:
            return TelescopeResult(
                False, tuple(l_prime), tuple(l), tuple(M), None, tuple(certificate), data, str(exc)
            )
        l.append(nxt)
        certificate.append(
            {
                "step": step,
                "level": nxt,
                "min_entry": min_entry(data.a_chain(nxt, l[step])),
                "strict_bound": bound,
            }
        )
    A_out = tuple(data.a_chain(l[n + 1], l[n]) for n in range(levels_out - 1))
    B_out = tuple(data.b_chain(l[n + 1], l[n]) for n in range(levels_out - 1))
    T_out = tuple(tuple(data.t_at(l[n])) for n in range(levels_out))
    telescoped = Rank2Data(A_out, B_out, T_out, None, data.orientation)
    return TelescopeResult(
        True, tuple(l_prime), tuple(l), tuple(M), telescoped, tuple(certificate), data
    )


class _HorizonExhausted(Exception):
    pass


def _first_level_with_min_entry(
    data: Rank2Data, start: int, bound: int, cap: int, strict: bool
) -> int:
    acc = None
    for m in range(start + 1, cap + 1):
        acc = data.a_chain(m, start) if acc is None else mat_mul(data.a_at(m - 1), acc)
        low = min_entry(acc)
        if (low > bound) if strict else (low >= bound):
            return m
    raise _HorizonExhausted(
        f"no level within cap {cap} has entries {'>' if strict else '>='} {bound} "
        f"from level {start}"
    )


def reverify_telescope(result: TelescopeResult) -> bool:
    """Re-check every recorded entry bound from the embedded source data."""
    if not result.complete:
        return False
    data = result.source
    for entry in result.certificate:
        step, nxt, bound = entry["step"], entry["level"], entry["strict_bound"]
        chained = data.a_chain(nxt, result.l[step])
        if min_entry(chained) <= bound:
            return False
        if bound != step * result.M[step]:
            return False
    return True


# ---------------------------------------------------------------------------
# Blue-red paths and the order automorphism
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Rank2Path:
    """A path in blue-red normal form: descending blue edges, then a red
    segment given by its degree (the red part is determined by its range
    vertex and degree)."""

    blue: tuple[BlueLabel, ...]
    red_degree: int
    anchor: Vertex | None = None

    def __post_init__(self):
        if not self.blue and self.anchor is None:
            raise StructuralError("a blueless path needs an anchor vertex")
        if self.red_degree < 0:
            raise StructuralError("red degree must be nonnegative")
        if self.blue and self.anchor is not None:
            object.__setattr__(self, "anchor", None)

    @property
    def degree(self) -> tuple[int, int]:
        return (len(self.blue), self.red_degree)


def path_range(d: Rank2Diagram, p: Rank2Path) -> Vertex:
    if p.blue:
        return d.blue_by_label()[p.blue[0]].range_vertex
    return p.anchor


def path_source(d: Rank2Diagram, p: Rank2Path) -> Vertex:
    if p.blue:
        last = d.blue_by_label()[p.blue[-1]].source_vertex
    else:
        last = p.anchor
    return d.red_path_source(last, p.red_degree)


def make_path(d: Rank2Diagram, blue: Sequence[BlueLabel], red_degree: int = 0,
              anchor: Vertex | None = None) -> Rank2Path:
    by_label = d.blue_by_label()
    for a, b in zip(blue, blue[1:]):
        if by_label[a].source_vertex != by_label[b].range_vertex:
            raise StructuralError(f"blue edges do not compose: {a} then {b}")
    return Rank2Path(tuple(blue), red_degree, anchor)


def compose_paths(d: Rank2Diagram, orders: OrderData, p: Rank2Path, q: Rank2Path) -> Rank2Path:
    """Concatenate in normal form: the leading red part of degree s passes
    through each following blue edge as F^s."""
    if path_source(d, p) != path_range(d, q):
        raise ValueError("paths do not compose")
    shifted = tuple(orders.f_power(label, p.red_degree) for label in q.blue)
    return make_path(
        d,
        p.blue + shifted,
        p.red_degree + q.red_degree,
        anchor=path_range(d, p) if not (p.blue or shifted) else None,
    )


def blue_skeleton(d: Rank2Diagram):
    """The blue graph as an ordinary leveled diagram (forgetting red data).

    Vertices (n, j, p) flatten to a per-level index; multiplicities count the
    blue edges between vertex pairs.
    """
    from .graph_model import BratteliDiagram

    flat_index: dict[Vertex, int] = {}
    sizes = []
    for n in range(d.levels()):
        verts = d.vertices_at(n)
        sizes.append(len(verts))
        for idx, v in enumerate(verts):
            flat_index[v] = idx
    tables = []
    for n in range(d.levels() - 1):
        table = [[0] * sizes[n + 1] for _ in range(sizes[n])]
        for e in d.blue_edges_at(n):
            table[flat_index[e.range_vertex]][flat_index[e.source_vertex]] += 1
        tables.append(as_matrix(table))
    return BratteliDiagram(tuple(sizes), tuple(tables), None)


@dataclass(frozen=True)
class Rank2Automorphism:
    """Blue edges at level n map through F^{m_n}; vertices rotate inside
    their red cycles accordingly, and red segments re-anchor by degree."""

    diagram: Rank2Diagram
    orders: OrderData

    def blue_image(self, label: BlueLabel) -> BlueLabel:
        return self.orders.f_power(label, self.m_at(label[0]))

    def blue_preimage(self, label: BlueLabel) -> BlueLabel:
        return self.orders.f_power(label, -self.m_at(label[0]))

    def m_at(self, n: int) -> int:
        return self.orders.m[n]

    def vertex_image(self, v: Vertex) -> Vertex:
        return self.diagram.red_walk(v, self.m_at(v[0]))

    def vertex_preimage(self, v: Vertex) -> Vertex:
        return self.diagram.red_walk(v, -self.m_at(v[0]))

    def path_image(self, p: Rank2Path) -> Rank2Path:
        blue = tuple(self.blue_image(label) for label in p.blue)
        anchor = None if p.blue else self.vertex_image(p.anchor)
        return Rank2Path(blue, p.red_degree, anchor)

    def path_preimage(self, p: Rank2Path) -> Rank2Path:
        blue = tuple(self.blue_preimage(label) for label in p.blue)
        anchor = None if p.blue else self.vertex_preimage(p.anchor)
        return Rank2Path(blue, p.red_degree, anchor)


def rank2_automorphism(d: Rank2Diagram, orders: OrderData | None = None) -> Rank2Automorphism:
    """Build and verify the F^{m_n} automorphism.

    Well-definedness needs the image of a blue edge's source to match the
    rotation applied at the next level, i.e. every receiving red cycle's
    length must divide n * O_n; a violation signals an inconsistent F.
    """
    orders = orders or compute_orders(d)
    auto = Rank2Automorphism(d, orders)
    by_label = d.blue_by_label()
    for e in d.blue:
        n = e.range_vertex[0]
        if n + 1 >= d.levels():
            continue
        expected = d.red_walk(e.source_vertex, orders.m[n + 1])
        got = by_label[auto.blue_image(e.label)].source_vertex
        if got != expected:
            raise StructuralError(
                f"order automorphism ill-defined at edge {e.label}: source "
                f"rotation mismatch (F inconsistency)"
            )
    return auto
