"""Finite discrete groupoids with exhaustive verification.

Elements are opaque hashable ids and composition is a table, not a formula;
twisted products, restrictions and stabilizations all reuse this single
backend.  Everything is immutable and every check is exhaustive.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping

from .validation import StructuralError, ValidationReport, Violation, report_from

El = Hashable


@dataclass(frozen=True)
class FiniteGroupoid:
    elements: tuple[El, ...]
    units: frozenset
    range_map: Mapping[El, El]
    source_map: Mapping[El, El]
    composition: Mapping[tuple[El, El], El]
    inverse_map: Mapping[El, El]

    def __post_init__(self):
        eset = set(self.elements)
        if len(eset) != len(self.elements):
            raise StructuralError("duplicate elements")
        if not self.units <= eset:
            raise StructuralError("units not contained in elements")
        for m, name in (
            (self.range_map, "range"),
            (self.source_map, "source"),
            (self.inverse_map, "inverse"),
        ):
            if set(m) != eset:
                raise StructuralError(f"{name} map not total on elements")

    def r(self, g: El) -> El:
        return self.range_map[g]

    def s(self, g: El) -> El:
        return self.source_map[g]

    def inv(self, g: El) -> El:
        return self.inverse_map[g]

    def mul(self, g: El, h: El) -> El:
        return self.composition[(g, h)]

    def composable(self, g: El, h: El) -> bool:
        return self.s(g) == self.r(h)

    def elements_with_source(self, u: El) -> tuple[El, ...]:
        return tuple(g for g in self.elements if self.s(g) == u)

    def elements_with_range(self, u: El) -> tuple[El, ...]:
        return tuple(g for g in self.elements if self.r(g) == u)

    def __len__(self) -> int:
        return len(self.elements)

    def to_json(self) -> dict:
        key = {g: repr(g) for g in self.elements}
        return {
            "elements": [key[g] for g in self.elements],
            "units": sorted(key[u] for u in self.units),
            "range": {key[g]: key[self.r(g)] for g in self.elements},
            "source": {key[g]: key[self.s(g)] for g in self.elements},
            "inverse": {key[g]: key[self.inv(g)] for g in self.elements},
            "compose": sorted(
                [key[g], key[h], key[k]] for (g, h), k in self.composition.items()
            ),
        }


def build_groupoid(
    elements: Iterable[El],
    units: Iterable[El],
    range_map: Mapping[El, El],
    source_map: Mapping[El, El],
    composition: Mapping[tuple[El, El], El],
    inverse_map: Mapping[El, El],
) -> FiniteGroupoid:
    return FiniteGroupoid(
        tuple(elements),
        frozenset(units),
        dict(range_map),
        dict(source_map),
        dict(composition),
        dict(inverse_map),
    )


def _revive(name: str):
    """Element names in dumps are reprs; structured literals come back as
    their Python values so rebuilt groupoids support structured tooling."""
    import ast

    try:
        return ast.literal_eval(name)
    except (ValueError, SyntaxError):
        return name


def groupoid_from_json(data: dict | str) -> FiniteGroupoid:
    """Inverse of ``FiniteGroupoid.to_json``."""
    if isinstance(data, str):
        data = json.loads(data)
    try:
        elements = tuple(_revive(g) for g in data["elements"])
        units = frozenset(_revive(u) for u in data["units"])
        rng = {_revive(g): _revive(u) for g, u in data["range"].items()}
        src = {_revive(g): _revive(u) for g, u in data["source"].items()}
        inv = {_revive(g): _revive(u) for g, u in data["inverse"].items()}
        comp = {(_revive(g), _revive(h)): _revive(k) for g, h, k in data["compose"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise StructuralError(f"malformed groupoid dump: {exc}") from exc
    return build_groupoid(elements, units, rng, src, comp, inv)


def verify_groupoid_axioms(G: FiniteGroupoid) -> ValidationReport:
    """Exhaustively check every groupoid axiom; name each offender."""
    v: list[Violation] = []
    eset = set(G.elements)

    for u in G.units:
        if G.r(u) != u or G.s(u) != u:
            v.append(Violation("unit fixed by r and s", f"unit {u!r}"))
    for g in G.elements:
        if G.r(g) not in G.units or G.s(g) not in G.units:
            v.append(Violation("r,s land in units", f"element {g!r}"))
        if G.inv(g) not in eset:
            v.append(Violation("inverse closed", f"element {g!r}"))

    composable = {(g, h) for g in G.elements for h in G.elements if G.composable(g, h)}
    defined = set(G.composition)
    for pair in defined - composable:
        v.append(Violation("composition only on s(g)=r(h)", f"pair {pair!r}"))
    for pair in composable - defined:
        v.append(Violation("composition total on composable pairs", f"pair {pair!r}"))

    for g, h in composable & defined:
        gh = G.mul(g, h)
        if gh not in eset:
            v.append(Violation("composition closed", f"pair {(g, h)!r}"))
            continue
        if G.r(gh) != G.r(g):
            v.append(Violation("r(gh) = r(g)", f"pair {(g, h)!r}"))
        if G.s(gh) != G.s(h):
            v.append(Violation("s(gh) = s(h)", f"pair {(g, h)!r}"))

    for g in G.elements:
        ru, su = G.r(g), G.s(g)
        if (ru, g) in defined and G.mul(ru, g) != g:
            v.append(Violation("r(g)g = g", f"element {g!r}"))
        if (g, su) in defined and G.mul(g, su) != g:
            v.append(Violation("gs(g) = g", f"element {g!r}"))
        gi = G.inv(g)
        if (gi, g) in defined and G.mul(gi, g) != su:
            v.append(Violation("g^{-1}g = s(g)", f"element {g!r}"))
        if (g, gi) in defined and G.mul(g, gi) != ru:
            v.append(Violation("gg^{-1} = r(g)", f"element {g!r}"))

    # Associativity over all composable triples.
    by_range: dict[El, list[El]] = {}
    for h in G.elements:
        by_range.setdefault(G.r(h), []).append(h)
    for g in G.elements:
        for h in by_range.get(G.s(g), ()):
            gh = G.composition.get((g, h))
            if gh is None:
                continue
            for k in by_range.get(G.s(h), ()):
                hk = G.composition.get((h, k))
                left = G.composition.get((gh, k))
                right = G.composition.get((g, hk)) if hk is not None else None
                if left != right or left is None:
                    v.append(Violation("associativity", f"triple {(g, h, k)!r}"))

    return report_from(v)


def isotropy_group(G: FiniteGroupoid, u: El) -> frozenset:
    """All g with r(g) = s(g) = u; trivial for principal groupoids."""
    if u not in G.units:
        raise ValueError(f"{u!r} is not a unit")
    return frozenset(g for g in G.elements if G.r(g) == u and G.s(g) == u)


def orbit(G: FiniteGroupoid, u: El) -> frozenset:
    """The orbit r(G_u) of a unit."""
    if u not in G.units:
        raise ValueError(f"{u!r} is not a unit")
    return frozenset(G.r(g) for g in G.elements if G.s(g) == u)


def orbits(G: FiniteGroupoid) -> tuple[frozenset, ...]:
    seen: set = set()
    parts = []
    for u in sorted(G.units, key=repr):
        if u in seen:
            continue
        o = orbit(G, u)
        seen |= o
        parts.append(o)
    return tuple(parts)


def is_principal(G: FiniteGroupoid) -> bool:
    return all(isotropy_group(G, u) == {u} for u in G.units)


def is_minimal(G: FiniteGroupoid) -> bool:
    """Single orbit (density in a finite discrete unit space)."""
    return len(orbits(G)) == 1


# ---------------------------------------------------------------------------
# Factories
# ---------------------------------------------------------------------------


def full_relation(points: Iterable[Hashable]) -> FiniteGroupoid:
    """The complete equivalence relation: elements (a, b), units (a, a)."""
    pts = tuple(points)
    elements = tuple((a, b) for a in pts for b in pts)
    units = frozenset((a, a) for a in pts)
    rng = {(a, b): (a, a) for a, b in elements}
    src = {(a, b): (b, b) for a, b in elements}
    comp = {
        ((a, b), (b2, c)): (a, c)
        for a, b in elements
        for b2, c in elements
        if b == b2
    }
    inv = {(a, b): (b, a) for a, b in elements}
    return build_groupoid(elements, units, rng, src, comp, inv)


def cyclic_group_groupoid(n: int) -> FiniteGroupoid:
    """Z/n as a groupoid with a single unit 0."""
    if n < 1:
        raise ValueError("n must be positive")
    elements = tuple(range(n))
    comp = {(a, b): (a + b) % n for a in elements for b in elements}
    return build_groupoid(
        elements,
        {0},
        {a: 0 for a in elements},
        {a: 0 for a in elements},
        comp,
        {a: (-a) % n for a in elements},
    )


def group_bundle(fibers: Mapping[Hashable, int]) -> FiniteGroupoid:
    """Disjoint union of cyclic groups: fiber Z/k at each base point."""
    elements = tuple((u, t) for u, k in sorted(fibers.items(), key=repr) for t in range(k))
    units = frozenset((u, 0) for u in fibers)
    rng = {(u, t): (u, 0) for (u, t) in elements}
    comp = {
        ((u, a), (u2, b)): (u, (a + b) % fibers[u])
        for (u, a) in elements
        for (u2, b) in elements
        if u == u2
    }
    inv = {(u, t): (u, (-t) % fibers[u]) for (u, t) in elements}
    return build_groupoid(elements, units, rng, dict(rng), comp, inv)


def disjoint_union(G1: FiniteGroupoid, G2: FiniteGroupoid) -> FiniteGroupoid:
    elements = tuple((0, g) for g in G1.elements) + tuple((1, g) for g in G2.elements)
    units = frozenset({(0, u) for u in G1.units} | {(1, u) for u in G2.units})
    rng = {(t, g): (t, (G1 if t == 0 else G2).r(g)) for (t, g) in elements}
    src = {(t, g): (t, (G1 if t == 0 else G2).s(g)) for (t, g) in elements}
    comp = {}
    for (g, h), k in G1.composition.items():
        comp[((0, g), (0, h))] = (0, k)
    for (g, h), k in G2.composition.items():
        comp[((1, g), (1, h))] = (1, k)
    inv = {(t, g): (t, (G1 if t == 0 else G2).inv(g)) for (t, g) in elements}
    return build_groupoid(elements, units, rng, src, comp, inv)


def cartesian_product(G1: FiniteGroupoid, G2: FiniteGroupoid) -> FiniteGroupoid:
    """Componentwise product groupoid."""
    elements = tuple((g, k) for g in G1.elements for k in G2.elements)
    units = frozenset((u, w) for u in G1.units for w in G2.units)
    rng = {(g, k): (G1.r(g), G2.r(k)) for (g, k) in elements}
    src = {(g, k): (G1.s(g), G2.s(k)) for (g, k) in elements}
    comp = {}
    for (g1, g2), gp in G1.composition.items():
        for (k1, k2), kp in G2.composition.items():
            comp[((g1, k1), (g2, k2))] = (gp, kp)
    inv = {(g, k): (G1.inv(g), G2.inv(k)) for (g, k) in elements}
    return build_groupoid(elements, units, rng, src, comp, inv)


def product_with_full_relation(G: FiniteGroupoid, N: int) -> FiniteGroupoid:
    """Stabilization at desk scale: G x (full relation on {-N..N})."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    K = full_relation(range(-N, N + 1))
    return cartesian_product(G, K)


# ---------------------------------------------------------------------------
# Cocycles and automorphisms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Cocycle:
    groupoid: FiniteGroupoid
    values: Mapping[El, int]

    def __post_init__(self):
        if set(self.values) != set(self.groupoid.elements):
            raise StructuralError("cocycle not total on elements")

    def __call__(self, g: El) -> int:
        return self.values[g]

    def validate(self) -> ValidationReport:
        v = []
        G = self.groupoid
        for (g, h), k in G.composition.items():
            if self.values[k] != self.values[g] + self.values[h]:
                v.append(Violation("c(gh) = c(g) + c(h)", f"pair {(g, h)!r}"))
        for u in G.units:
            if self.values[u] != 0:
                v.append(Violation("c vanishes on units", f"unit {u!r}"))
        return report_from(v)

    def value_range(self) -> frozenset:
        return frozenset(self.values.values())

    def isotropy_value_range(self) -> frozenset:
        """Cocycle values attained on isotropy elements.

        Finite subgroups of the integers are trivial, so a valid cocycle
        vanishes on all isotropy: this is {0} whenever the cocycle validates.
        """
        G = self.groupoid
        return frozenset(
            self.values[g] for g in G.elements if G.r(g) == G.s(g)
        )


def zero_cocycle(G: FiniteGroupoid) -> Cocycle:
    return Cocycle(G, {g: 0 for g in G.elements})


def weight_cocycle(G: FiniteGroupoid, weights: Mapping[El, int]) -> Cocycle:
    """The coboundary c(g) = w(r(g)) - w(s(g)) of a unit weighting."""
    if set(weights) != set(G.units):
        raise StructuralError("weights must be given on exactly the units")
    return Cocycle(G, {g: weights[G.r(g)] - weights[G.s(g)] for g in G.elements})


@dataclass(frozen=True)
class GroupoidAutomorphism:
    groupoid: FiniteGroupoid
    mapping: Mapping[El, El]

    def __post_init__(self):
        eset = set(self.groupoid.elements)
        if set(self.mapping) != eset or set(self.mapping.values()) != eset:
            raise StructuralError("automorphism mapping is not a bijection")

    def __call__(self, g: El) -> El:
        return self.mapping[g]

    def validate(self) -> ValidationReport:
        v = []
        G = self.groupoid
        a = self.mapping
        for u in G.units:
            if a[u] not in G.units:
                v.append(Violation("units preserved", f"unit {u!r}"))
        for g in G.elements:
            if a[G.r(g)] != G.r(a[g]):
                v.append(Violation("r equivariance", f"element {g!r}"))
            if a[G.s(g)] != G.s(a[g]):
                v.append(Violation("s equivariance", f"element {g!r}"))
            if a[G.inv(g)] != G.inv(a[g]):
                v.append(Violation("inverse equivariance", f"element {g!r}"))
        for (g, h), k in G.composition.items():
            if G.composition.get((a[g], a[h])) != a[k]:
                v.append(Violation("multiplicativity", f"pair {(g, h)!r}"))
        return report_from(v)

    def power(self, k: int) -> "GroupoidAutomorphism":
        n = self.order()
        k %= n
        out = {g: g for g in self.groupoid.elements}
        for _ in range(k):
            out = {g: self.mapping[h] for g, h in out.items()}
        return GroupoidAutomorphism(self.groupoid, out)

    def order(self) -> int:
        import math

        n = 1
        seen: set = set()
        for start in self.mapping:
            if start in seen:
                continue
            x, ln = start, 0
            while True:
                seen.add(x)
                x = self.mapping[x]
                ln += 1
                if x == start:
                    break
            n = math.lcm(n, ln)
        return n


def identity_automorphism(G: FiniteGroupoid) -> GroupoidAutomorphism:
    return GroupoidAutomorphism(G, {g: g for g in G.elements})


def relation_automorphism(
    G: FiniteGroupoid, point_map: Mapping[Hashable, Hashable]
) -> GroupoidAutomorphism:
    """Automorphism of a full relation induced by a permutation of points:
    (a, b) -> (pi(a), pi(b))."""
    return GroupoidAutomorphism(
        G, {(a, b): (point_map[a], point_map[b]) for (a, b) in G.elements}
    )


def cyclic_multiplier_automorphism(G: FiniteGroupoid, a: int) -> GroupoidAutomorphism:
    """k -> a*k mod n on a cyclic group groupoid; needs gcd(a, n) = 1."""
    import math

    n = len(G.elements)
    if math.gcd(a, n) != 1:
        raise ValueError("multiplier must be invertible mod n")
    return GroupoidAutomorphism(G, {k: (a * k) % n for k in G.elements})


def product_automorphism(
    G: FiniteGroupoid, a1: GroupoidAutomorphism, a2: GroupoidAutomorphism
) -> GroupoidAutomorphism:
    """alpha x beta on a cartesian_product groupoid."""
    return GroupoidAutomorphism(
        G, {(g, k): (a1(g), a2(k)) for (g, k) in G.elements}
    )
