"""Direct limits of integer lattices as ordered groups, at a finite horizon.

Elements are (level, vector) representatives; equality and positivity are
decided by pushing along the connecting matrices.  Verdicts are tri-state:
a No always carries a recorded justification (injectivity of the tail for
equality, properness trapping for positivity), and a horizon exhausted
without a decision is an explicit Unknown, never a silent pass.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .graph_model import BratteliDiagram
from .matrices import (
    IntMatrix,
    IntVector,
    as_matrix,
    is_injective,
    is_proper,
    mat_vec,
    shape,
    transpose,
)
from .validation import StructuralError


@dataclass(frozen=True)
class Verdict:
    value: str
    level: int | None = None
    justification: object | None = None

    def __post_init__(self):
        if self.value not in ("yes", "no", "unknown"):
            raise ValueError(f"bad verdict {self.value!r}")
        if self.value == "no" and self.justification is None:
            raise ValueError("a No verdict requires a recorded justification")

    @property
    def is_yes(self) -> bool:
        return self.value == "yes"

    @property
    def is_no(self) -> bool:
        return self.value == "no"

    @property
    def decided(self) -> bool:
        return self.value != "unknown"

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "level": self.level,
            "justification": self.justification,
        }


@dataclass(frozen=True)
class DimensionGroupSpec:
    """Sizes c_n and connecting matrices of shape (c_{n+1}, c_n); an optional
    repetition rule declares an eventually periodic tail."""

    sizes: tuple[int, ...]
    matrices: tuple[IntMatrix, ...]
    repeat_from: int | None = None

    def __post_init__(self):
        if len(self.matrices) != len(self.sizes) - 1:
            raise StructuralError("need one connecting matrix per consecutive pair")
        for n, m in enumerate(self.matrices):
            if shape(m) != (self.sizes[n + 1], self.sizes[n]):
                raise StructuralError(f"matrix {n} has shape {shape(m)}")
            if any(x < 0 for row in m for x in row):
                raise StructuralError("connecting matrices must be nonnegative")
        if self.repeat_from is not None:
            if not 0 <= self.repeat_from < len(self.matrices):
                raise StructuralError("repeat_from outside stored matrices")
            if self.sizes[-1] != self.sizes[self.repeat_from]:
                raise StructuralError("repetition rule needs matching sizes at the seam")

    @property
    def horizon(self) -> int:
        return len(self.sizes) - 1

    def size(self, n: int) -> int:
        if n <= self.horizon:
            return self.sizes[n]
        if self.repeat_from is None:
            raise StructuralError(f"level {n} beyond horizon, no repetition rule")
        period = len(self.matrices) - self.repeat_from
        return self.sizes[self.repeat_from + (n - self.repeat_from) % period]

    def matrix(self, n: int) -> IntMatrix:
        if n < len(self.matrices):
            return self.matrices[n]
        if self.repeat_from is None:
            raise StructuralError(f"matrix {n} beyond horizon, no repetition rule")
        period = len(self.matrices) - self.repeat_from
        return self.matrices[self.repeat_from + (n - self.repeat_from) % period]

    def repeating_block(self) -> tuple[IntMatrix, ...]:
        if self.repeat_from is None:
            return ()
        return self.matrices[self.repeat_from:]

    def is_proper_spec(self) -> bool:
        return all(is_proper(m) for m in self.matrices)


@dataclass(frozen=True)
class DimGroupElement:
    level: int
    vector: IntVector

    def __post_init__(self):
        object.__setattr__(self, "vector", tuple(int(x) for x in self.vector))


def dg_element(level: int, vector: Sequence[int]) -> DimGroupElement:
    return DimGroupElement(level, tuple(vector))


def dg_push_to_level(
    spec: DimensionGroupSpec, a: DimGroupElement, m: int
) -> DimGroupElement:
    """Representative of the same limit element at a deeper level."""
    if m < a.level:
        raise ValueError("cannot push to a shallower level")
    if len(a.vector) != spec.size(a.level):
        raise ValueError("vector length does not match its level")
    v = a.vector
    for n in range(a.level, m):
        v = mat_vec(spec.matrix(n), v)
    return DimGroupElement(m, v)


def dg_equal(
    spec: DimensionGroupSpec, a: DimGroupElement, b: DimGroupElement, horizon: int
) -> Verdict:
    """Yes when the pushed images coincide at some level within the horizon;
    No when they differ there and every tail matrix is injective over Q."""
    start = max(a.level, b.level)
    va = dg_push_to_level(spec, a, start).vector
    vb = dg_push_to_level(spec, b, start).vector
    level = start
    while True:
        if va == vb:
            return Verdict("yes", level=level)
        if level >= horizon:
            break
        va = mat_vec(spec.matrix(level), va)
        vb = mat_vec(spec.matrix(level), vb)
        level += 1
    block = spec.repeating_block()
    if block and all(is_injective(m) for m in block):
        return Verdict(
            "no",
            level=horizon,
            justification={
                "reason": "images differ at the horizon and every repeating tail "
                "matrix has full column rank over Q",
                "tail_matrices": [list(map(list, m)) for m in block],
            },
        )
    return Verdict("unknown", level=horizon, justification="horizon reached")


def dg_is_positive(
    spec: DimensionGroupSpec, a: DimGroupElement, horizon: int
) -> Verdict:
    """Yes when some push is entrywise nonnegative; No when a push is
    entrywise negative and all tail matrices are proper (the image then stays
    entrywise negative forever)."""
    v = dg_push_to_level(spec, a, a.level).vector
    level = a.level
    while True:
        if all(x >= 0 for x in v):
            return Verdict("yes", level=level)
        if all(x < 0 for x in v):
            stored_tail = spec.matrices[level:]
            block = spec.repeating_block()
            tail_proper = all(is_proper(m) for m in stored_tail) and (
                block == () or all(is_proper(m) for m in block)
            )
            if tail_proper and block:
                return Verdict(
                    "no",
                    level=level,
                    justification={
                        "reason": "entrywise negative image and proper tail "
                        "matrices keep every later image entrywise negative",
                        "vector": list(v),
                    },
                )
        if level >= horizon:
            return Verdict("unknown", level=horizon, justification="horizon reached")
        v = mat_vec(spec.matrix(level), v)
        level += 1


# ---------------------------------------------------------------------------
# K-theory data of Bratteli diagrams
# ---------------------------------------------------------------------------


def dimension_group_of(d: BratteliDiagram) -> DimensionGroupSpec:
    """The ordered K0 data of a Bratteli diagram: connecting matrix entries
    (w, v) count the edges from v down to w."""
    return DimensionGroupSpec(
        d.level_sizes,
        tuple(transpose(m) for m in d.mult),
        d.repeat_from,
    )


def k0_vertex_class(d: BratteliDiagram, v) -> DimGroupElement:
    """The class of the vertex projection: the standard basis vector at the
    vertex's level."""
    n, i = v
    size = d.level_size(n)
    if not 0 <= i < size:
        raise ValueError(f"unknown vertex {v!r}")
    return DimGroupElement(n, tuple(1 if j == i else 0 for j in range(size)))


def k0_corner_class(d: BratteliDiagram, level: int, a: Sequence[int]) -> DimGroupElement:
    """Class of a corner built from `a(v)` copies of each vertex cylinder."""
    a = tuple(int(x) for x in a)
    if len(a) != d.level_size(level):
        raise ValueError("corner vector length must match the level size")
    if any(x < 0 for x in a):
        raise ValueError("corner vector must be entrywise nonnegative")
    return DimGroupElement(level, a)


# ---------------------------------------------------------------------------
# K-theory matrices of rank-2 diagrams
# ---------------------------------------------------------------------------


def rank2_k_matrices(diagram) -> tuple[tuple[IntMatrix, ...], tuple[IntMatrix, ...], tuple[IntMatrix, ...]]:
    """Count the (A_n, B_n, T_n) matrix data off a rank-2 diagram.

    The counts must be independent of the representative vertex chosen in
    each cycle (exhaustive recount), and the compatibility A_n T_n =
    T_{n+1} B_n must hold exactly; both failures reject the diagram.
    """
    from .matrices import diagonal, mat_mul
    from .rank2_diagrams import Rank2Diagram

    if not isinstance(diagram, Rank2Diagram):
        raise TypeError("rank2_k_matrices expects a rank-2 diagram")
    A_list, B_list, T_list = [], [], []
    for n in range(diagram.levels()):
        T_list.append(diagonal(diagram.cycle_sizes[n]))
    for n in range(diagram.levels() - 1):
        cn = diagram.cycle_count(n)
        cn1 = diagram.cycle_count(n + 1)
        per_v: dict[tuple[int, int], dict] = {}
        per_w: dict[tuple[int, int], dict] = {}
        for i in range(cn1):
            for j in range(cn):
                per_v[(i, j)] = {
                    (n, j, p): 0 for p in range(diagram.cycle_size(n, j))
                }
                per_w[(i, j)] = {
                    (n + 1, i, q): 0 for q in range(diagram.cycle_size(n + 1, i))
                }
        for e in diagram.blue_edges_at(n):
            key = (e.source_vertex[1], e.range_vertex[1])
            per_v[key][e.range_vertex] += 1
            per_w[key][e.source_vertex] += 1
        A = [[0] * cn for _ in range(cn1)]
        B = [[0] * cn for _ in range(cn1)]
        for (i, j), counts in per_v.items():
            values = set(counts.values())
            values_w = set(per_w[(i, j)].values())
            if len(values) != 1 or len(values_w) != 1:
                raise StructuralError(
                    f"blue-edge count between cycles ({n},{j}) and ({n + 1},{i}) "
                    "depends on the representative vertex"
                )
            A[i][j] = values.pop()
            B[i][j] = values_w.pop()
        A_list.append(as_matrix(A))
        B_list.append(as_matrix(B))
    for n in range(len(A_list)):
        left = mat_mul(A_list[n], T_list[n])
        right = mat_mul(T_list[n + 1], B_list[n])
        if left != right:
            raise StructuralError(
                f"compatibility A_n T_n = T_(n+1) B_n fails at level {n}"
            )
    return tuple(A_list), tuple(B_list), tuple(T_list)
