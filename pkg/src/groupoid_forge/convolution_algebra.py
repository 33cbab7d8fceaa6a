"""Exact convolution *-algebras over groupoid backends.

Finitely supported functions with Gaussian-rational coefficients, over
either a finite groupoid (support: elements) or the twisted product of the
bouquet groupoid with a finite G (support: pairs of a basic bisection and a
G-element, kept in disjoint canonical form).  Convolution on the symbolic
backend routes through the bisection product with coefficient bookkeeping;
nothing is ever approximated.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping

from .gaussian import ONE, ZERO, GaussianRational
from .graph_groupoid import (
    BasicBisection,
    bisection_product,
    difference_basic,
    intersect_basic,
    render_bisection,
)
from .graph_model import vertex_path
from .groupoid_core import FiniteGroupoid, GroupoidAutomorphism
from .twisted_product import BouquetTwistedProduct
from .validation import StructuralError


class InternalConsistencyError(RuntimeError):
    """Raised when algebra output escapes a range it provably cannot leave."""


Coeff = GaussianRational


def _coeff(x) -> Coeff:
    return GaussianRational.of(x)


# ---------------------------------------------------------------------------
# Finite backend
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteConvElement:
    groupoid: FiniteGroupoid
    coeffs: Mapping[object, Coeff]

    def __post_init__(self):
        object.__setattr__(
            self,
            "coeffs",
            {g: _coeff(c) for g, c in self.coeffs.items() if _coeff(c)},
        )
        for g in self.coeffs:
            if g not in set(self.groupoid.elements):
                raise StructuralError(f"support element {g!r} outside the groupoid")

    def __call__(self, g) -> Coeff:
        return self.coeffs.get(g, ZERO)

    def is_zero(self) -> bool:
        return not self.coeffs

    def add(self, other: "FiniteConvElement") -> "FiniteConvElement":
        _same_backend(self, other)
        out = dict(self.coeffs)
        for g, c in other.coeffs.items():
            out[g] = out.get(g, ZERO) + c
        return FiniteConvElement(self.groupoid, out)

    def scale(self, c) -> "FiniteConvElement":
        c = _coeff(c)
        return FiniteConvElement(self.groupoid, {g: c * x for g, x in self.coeffs.items()})

    def sub(self, other: "FiniteConvElement") -> "FiniteConvElement":
        return self.add(other.scale(-1))

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteConvElement):
            return NotImplemented
        return self.groupoid is other.groupoid and dict(self.coeffs) == dict(other.coeffs)

    def __hash__(self):
        return hash((id(self.groupoid), frozenset(self.coeffs.items())))


def delta(G: FiniteGroupoid, g, c=1) -> FiniteConvElement:
    return FiniteConvElement(G, {g: _coeff(c)})


def unit_indicator(G: FiniteGroupoid) -> FiniteConvElement:
    return FiniteConvElement(G, {u: ONE for u in G.units})


def compose_with_automorphism_inverse(
    f: FiniteConvElement, alpha: GroupoidAutomorphism, power: int = 1
) -> FiniteConvElement:
    """The function g -> f(alpha^{-power}(g))."""
    fwd = alpha.power(power)
    return FiniteConvElement(f.groupoid, {fwd(g): c for g, c in f.coeffs.items()})


def _same_backend(x, y) -> None:
    if type(x) is not type(y):
        raise TypeError("mixed convolution backends")
    if isinstance(x, FiniteConvElement) and x.groupoid is not y.groupoid:
        raise TypeError("elements live over different groupoids")
    if isinstance(x, SymbolicConvElement) and x.model is not y.model:
        raise TypeError("elements live over different twisted products")


# ---------------------------------------------------------------------------
# Symbolic backend (bouquet twisted with a finite G)
# ---------------------------------------------------------------------------


def canonical_pieces(
    pieces: Iterable[tuple[BasicBisection, Coeff]]
) -> dict[BasicBisection, Coeff]:
    """Rewrite a coefficiented family of bisections in disjoint form.

    Overlaps are split with the exact intersection/difference calculus and
    coefficients added on the common part; zero pieces are dropped.
    """
    result: list[tuple[BasicBisection, Coeff]] = []
    queue = [(b, _coeff(c)) for b, c in pieces]
    fuel = 20000
    while queue:
        fuel -= 1
        if fuel <= 0:
            raise InternalConsistencyError("canonicalization did not terminate")
        p, c = queue.pop()
        hit = None
        for idx, (q, cq) in enumerate(result):
            inter = intersect_basic(p, q)
            if inter is not None:
                hit = (idx, q, cq, inter)
                break
        if hit is None:
            result.append((p, c))
            continue
        idx, q, cq, inter = hit
        replacement = [(piece, cq) for piece in difference_basic(q, inter)]
        replacement.append((inter, cq + c))
        result[idx:idx + 1] = replacement
        queue.extend((piece, c) for piece in difference_basic(p, inter))
    return {b: c for b, c in result if c}


@dataclass(frozen=True)
class SymbolicConvElement:
    """Finitely supported function on the bouquet twisted product, stored as
    coefficients on (bisection, G-element) pairs with disjoint bisections per
    G-element."""

    model: BouquetTwistedProduct
    coeffs: Mapping[tuple[BasicBisection, object], Coeff]

    def __post_init__(self):
        by_g: dict[object, list[tuple[BasicBisection, Coeff]]] = {}
        for (b, g), c in self.coeffs.items():
            by_g.setdefault(g, []).append((b, _coeff(c)))
        flat: dict[tuple[BasicBisection, object], Coeff] = {}
        for g, pieces in by_g.items():
            if g not in set(self.model.g.elements):
                raise StructuralError(f"support element {g!r} outside the groupoid")
            for b, c in canonical_pieces(pieces).items():
                flat[(b, g)] = c
        object.__setattr__(self, "coeffs", flat)

    def is_zero(self) -> bool:
        return not self.coeffs

    def add(self, other: "SymbolicConvElement") -> "SymbolicConvElement":
        _same_backend(self, other)
        pieces = list(self.coeffs.items()) + list(other.coeffs.items())
        merged: dict[tuple[BasicBisection, object], Coeff] = {}
        for key, c in pieces:
            merged[key] = merged.get(key, ZERO) + c
        return SymbolicConvElement(self.model, merged)

    def scale(self, c) -> "SymbolicConvElement":
        c = _coeff(c)
        return SymbolicConvElement(
            self.model, {k: c * x for k, x in self.coeffs.items()}
        )

    def sub(self, other: "SymbolicConvElement") -> "SymbolicConvElement":
        return self.add(other.scale(-1))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymbolicConvElement):
            return NotImplemented
        if self.model is not other.model:
            return False
        return self.sub(other).is_zero()

    def __hash__(self):
        return hash(id(self.model))

    def describe(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for (b, g), c in sorted(
            self.coeffs.items(), key=lambda kv: (repr(kv[0][1]), render_bisection(kv[0][0]))
        ):
            parts.append(f"({c})*1[{render_bisection(b)} x {g!r}]")
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# The operations
# ---------------------------------------------------------------------------


def convolve(x, y):
    """Exact convolution (xi * eta)(g) = sum over hk = g of xi(h) eta(k)."""
    _same_backend(x, y)
    if isinstance(x, FiniteConvElement):
        G = x.groupoid
        out: dict[object, Coeff] = {}
        for g, cg in x.coeffs.items():
            for h, ch in y.coeffs.items():
                if G.composable(g, h):
                    k = G.mul(g, h)
                    out[k] = out.get(k, ZERO) + cg * ch
        return FiniteConvElement(G, out)
    model = x.model
    G, alpha = model.g, model.alpha
    pieces: dict[tuple[BasicBisection, object], Coeff] = {}
    for (b1, g1), c1 in x.coeffs.items():
        d1 = b1.degree
        fwd = alpha.power(d1)
        back = alpha.power(-d1)
        for (b2, g2), c2 in y.coeffs.items():
            if fwd(G.s(g1)) != G.r(g2):
                continue
            g12 = G.mul(g1, back(g2))
            for piece in bisection_product(b1, b2).pieces:
                key = (piece, g12)
                pieces[key] = pieces.get(key, ZERO) + c1 * c2
    return SymbolicConvElement(model, pieces)


def involution(x):
    """xi*(g) = conj(xi(g^{-1})); bisections invert by swapping their words."""
    if isinstance(x, FiniteConvElement):
        G = x.groupoid
        return FiniteConvElement(
            G, {G.inv(g): c.conjugate() for g, c in x.coeffs.items()}
        )
    model = x.model
    out: dict[tuple[BasicBisection, object], Coeff] = {}
    for (b, g), c in x.coeffs.items():
        d = b.degree
        key = (b.inverse(), model.alpha.power(d)(model.g.inv(g)))
        out[key] = out.get(key, ZERO) + c.conjugate()
    return SymbolicConvElement(model, out)


def full_unit_bisection(model: BouquetTwistedProduct) -> BasicBisection:
    v = vertex_path(model.bouquet.vertex)
    return BasicBisection(v, v)


def iota_embed(f: FiniteConvElement, model: BouquetTwistedProduct) -> SymbolicConvElement:
    """1_{unit space} x f: the embedding of the G-algebra."""
    if f.groupoid is not model.g:
        raise TypeError("f must live over the model's G backend")
    unit = full_unit_bisection(model)
    return SymbolicConvElement(model, {(unit, g): c for g, c in f.coeffs.items()})


def iota_inverse(x: SymbolicConvElement) -> FiniteConvElement:
    """Invert the embedding; support escaping its image is a bug signal."""
    unit = full_unit_bisection(x.model)
    out: dict[object, Coeff] = {}
    for (b, g), c in x.coeffs.items():
        if b != unit:
            raise InternalConsistencyError(
                f"support escapes the embedded copy of the G-algebra: {render_bisection(b)}"
            )
        out[g] = out.get(g, ZERO) + c
    return FiniteConvElement(x.model.g, out)


def generator_times(model: BouquetTwistedProduct, i: int, f: FiniteConvElement) -> SymbolicConvElement:
    """x_i x f where x_i is the indicator of Z(e_i, v)."""
    if f.groupoid is not model.g:
        raise TypeError("f must live over the model's G backend")
    v = vertex_path(model.bouquet.vertex)
    e = model.bouquet.path([i])
    b = BasicBisection(e, v)
    return SymbolicConvElement(model, {(b, g): c for g, c in f.coeffs.items()})


def right_action(x: SymbolicConvElement, fprime: FiniteConvElement) -> SymbolicConvElement:
    """x . f' = x * iota(f')."""
    return convolve(x, iota_embed(fprime, x.model))


def left_action(fprime: FiniteConvElement, x: SymbolicConvElement) -> SymbolicConvElement:
    """f' . x = iota(f') * x."""
    return convolve(iota_embed(fprime, x.model), x)


def module_inner_product(x: SymbolicConvElement, y: SymbolicConvElement) -> FiniteConvElement:
    """<x, y> = iota^{-1}(x* * y); orthogonal across distinct generators."""
    _same_backend(x, y)
    return iota_inverse(convolve(involution(x), y))


# ---------------------------------------------------------------------------
# Regular representation (finite backend only)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RegRepMatrix:
    basis: tuple
    entries: tuple[tuple[Coeff, ...], ...]

    def matmul(self, other: "RegRepMatrix") -> "RegRepMatrix":
        if self.basis != other.basis:
            raise ValueError("matrices over different bases")
        n = len(self.basis)
        rows = tuple(
            tuple(
                sum((self.entries[i][k] * other.entries[k][j] for k in range(n)), ZERO)
                for j in range(n)
            )
            for i in range(n)
        )
        return RegRepMatrix(self.basis, rows)

    def dagger(self) -> "RegRepMatrix":
        n = len(self.basis)
        return RegRepMatrix(
            self.basis,
            tuple(
                tuple(self.entries[j][i].conjugate() for j in range(n)) for i in range(n)
            ),
        )


def regular_representation(G: FiniteGroupoid, u, xi: FiniteConvElement) -> RegRepMatrix:
    """The matrix of left convolution on the source fiber at ``u``."""
    if not isinstance(xi, FiniteConvElement):
        raise TypeError("the regular representation needs the finite backend")
    if xi.groupoid is not G:
        raise TypeError("element lives over a different groupoid")
    if u not in G.units:
        raise ValueError(f"{u!r} is not a unit")
    basis = G.elements_with_source(u)
    index = {g: k for k, g in enumerate(basis)}
    n = len(basis)
    rows = [[ZERO] * n for _ in range(n)]
    for j, g in enumerate(basis):
        for h, c in xi.coeffs.items():
            if G.s(h) == G.r(g):
                rows[index[G.mul(h, g)]][j] = rows[index[G.mul(h, g)]][j] + c
    return RegRepMatrix(tuple(basis), tuple(tuple(r) for r in rows))


def determinant(entries: tuple[tuple[Coeff, ...], ...]) -> Coeff:
    """Exact determinant over the Gaussian rationals."""
    n = len(entries)
    rows = [list(r) for r in entries]
    det = ONE
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col]), None)
        if pivot is None:
            return ZERO
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = det * GaussianRational.of(-1)
        det = det * rows[col][col]
        inv = rows[col][col]
        for r in range(col + 1, n):
            if rows[r][col]:
                factor = rows[r][col] / inv
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[col])]
    return det


def is_psd_hermitian(m: RegRepMatrix) -> bool:
    """All principal minors of a Hermitian matrix are real and nonnegative."""
    n = len(m.basis)
    if m.dagger().entries != m.entries:
        return False
    for size in range(1, n + 1):
        for subset in itertools.combinations(range(n), size):
            sub = tuple(
                tuple(m.entries[i][j] for j in subset) for i in subset
            )
            d = determinant(sub)
            if d.im != 0 or d.re < 0:
                return False
    return True


# ---------------------------------------------------------------------------
# The closed-form identities of the module structure
# ---------------------------------------------------------------------------


def comp_identity_sides(model, i, j, f, fprime):
    """(x_i x f)* * (x_j x f') against delta_ij iota((f o a^{-1})* * (f' o a^{-1}))."""
    lhs = convolve(involution(generator_times(model, i, f)), generator_times(model, j, fprime))
    fa = compose_with_automorphism_inverse(f, model.alpha, 1)
    fpa = compose_with_automorphism_inverse(fprime, model.alpha, 1)
    inner = convolve(involution(fa), fpa)
    if i == j:
        rhs = iota_embed(inner, model)
    else:
        rhs = SymbolicConvElement(model, {})
    return lhs, rhs


def comp2_identity_sides(model, i, f, fprime):
    """iota(f') * (x_i x f) against x_i x (f' * f)."""
    lhs = left_action(fprime, generator_times(model, i, f))
    rhs = generator_times(model, i, convolve(fprime, f))
    return lhs, rhs


def right_action_identity_sides(model, i, f, fprime):
    """(x_i x f) . f' against x_i x (f * (f' o a))."""
    lhs = right_action(generator_times(model, i, f), fprime)
    fpa = compose_with_automorphism_inverse(fprime, model.alpha, -1)
    rhs = generator_times(model, i, convolve(f, fpa))
    return lhs, rhs
