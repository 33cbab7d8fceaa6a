"""Small exact linear algebra over the integers and rationals.

Matrices are immutable tuples of tuples of Python ints (arbitrary precision),
so telescoped products never overflow.  Rank computations run over the
rationals with ``fractions.Fraction``; nothing here ever touches a float.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

IntMatrix = tuple[tuple[int, ...], ...]
IntVector = tuple[int, ...]


def as_matrix(rows: Iterable[Sequence[int]]) -> IntMatrix:
    mat = tuple(tuple(int(x) for x in row) for row in rows)
    if mat and any(len(row) != len(mat[0]) for row in mat):
        raise ValueError("ragged matrix")
    return mat


def shape(a: IntMatrix) -> tuple[int, int]:
    return (len(a), len(a[0]) if a else 0)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    ra, ca = shape(a)
    rb, cb = shape(b)
    if ca != rb:
        raise ValueError(f"shape mismatch: {shape(a)} @ {shape(b)}")
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(ca)) for j in range(cb)) for i in range(ra)
    )


def mat_vec(a: IntMatrix, v: IntVector) -> IntVector:
    ra, ca = shape(a)
    if ca != len(v):
        raise ValueError(f"shape mismatch: {shape(a)} @ vector of length {len(v)}")
    return tuple(sum(a[i][k] * v[k] for k in range(ca)) for i in range(ra))


def chain_product(mats: Sequence[IntMatrix]) -> IntMatrix:
    """Product ``mats[-1] @ ... @ mats[0]`` (apply first matrix first)."""
    if not mats:
        raise ValueError("empty chain")
    acc = mats[0]
    for m in mats[1:]:
        acc = mat_mul(m, acc)
    return acc


def transpose(a: IntMatrix) -> IntMatrix:
    ra, ca = shape(a)
    return tuple(tuple(a[i][j] for i in range(ra)) for j in range(ca))


def min_entry(a: IntMatrix) -> int:
    return min(x for row in a for x in row)


def is_proper(a: IntMatrix) -> bool:
    """Every row and every column has a nonzero entry."""
    ra, ca = shape(a)
    rows_ok = all(any(a[i][j] for j in range(ca)) for i in range(ra))
    cols_ok = all(any(a[i][j] for i in range(ra)) for j in range(ca))
    return rows_ok and cols_ok


def is_nonnegative(a: IntMatrix) -> bool:
    return all(x >= 0 for row in a for x in row)


def diagonal(entries: Sequence[int]) -> IntMatrix:
    n = len(entries)
    return tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n))


def column_rank(a: IntMatrix) -> int:
    """Rank of ``a`` over the rationals (Gaussian elimination with Fractions)."""
    rows = [[Fraction(x) for x in row] for row in a]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    rank = 0
    pivot_row = 0
    for col in range(ncols):
        pivot = next((r for r in range(pivot_row, nrows) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[pivot_row], rows[pivot] = rows[pivot], rows[pivot_row]
        inv = rows[pivot_row][col]
        rows[pivot_row] = [x / inv for x in rows[pivot_row]]
        for r in range(nrows):
            if r != pivot_row and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[pivot_row])]
        pivot_row += 1
        rank += 1
    return rank


def is_injective(a: IntMatrix) -> bool:
    """Full column rank, i.e. injective as a map on integer column vectors."""
    return column_rank(a) == shape(a)[1]
