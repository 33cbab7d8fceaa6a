"""Deterministic seeded families of small groupoids, cocycles and
automorphisms, shared by tests and demo scripts."""

from __future__ import annotations

import math
import random
from fractions import Fraction

from .gaussian import GaussianRational
from .groupoid_core import (
    FiniteGroupoid,
    GroupoidAutomorphism,
    cyclic_group_groupoid,
    cyclic_multiplier_automorphism,
    disjoint_union,
    full_relation,
    group_bundle,
    identity_automorphism,
    relation_automorphism,
    weight_cocycle,
    zero_cocycle,
)


def rng_for(seed: int) -> random.Random:
    return random.Random(seed)


def random_h_with_cocycle(rng: random.Random, max_size: int = 24):
    """A finite groupoid with a validated integer cocycle (weight cocycles
    vanish on isotropy, which is the only option on a finite groupoid)."""
    shape = rng.choice(["relation", "two_relations", "bundle_mix", "cyclic"])
    if shape == "relation":
        m = rng.randint(2, 4)
        H = full_relation(range(m))
    elif shape == "two_relations":
        m1, m2 = rng.randint(2, 3), rng.randint(2, 3)
        H = disjoint_union(full_relation(range(m1)), full_relation(range(m2)))
    elif shape == "bundle_mix":
        H = disjoint_union(
            group_bundle({0: rng.randint(2, 3)}), full_relation(range(rng.randint(2, 3)))
        )
    else:
        H = cyclic_group_groupoid(rng.randint(2, 6))
        return H, zero_cocycle(H)
    weights = {u: rng.randint(-3, 3) for u in H.units}
    return H, weight_cocycle(H, weights)


def random_g_with_automorphism(rng: random.Random, max_size: int = 24):
    """A finite groupoid together with a validated automorphism."""
    shape = rng.choice(["relation", "cyclic", "two_orbits", "swap"])
    if shape == "relation":
        m = rng.randint(2, 4)
        G = full_relation(range(m))
        points = list(range(m))
        rng.shuffle(points)
        return G, relation_automorphism(G, dict(zip(range(m), points)))
    if shape == "cyclic":
        n = rng.randint(2, 6)
        G = cyclic_group_groupoid(n)
        units = [a for a in range(1, n) if math.gcd(a, n) == 1]
        return G, cyclic_multiplier_automorphism(G, rng.choice(units))
    if shape == "two_orbits":
        m1, m2 = rng.randint(2, 3), rng.randint(2, 3)
        G = disjoint_union(full_relation(range(m1)), full_relation(range(m2)))
        return G, identity_automorphism(G)
    m = rng.randint(2, 3)
    G = disjoint_union(full_relation(range(m)), full_relation(range(m)))
    mapping = {}
    for (tag, g) in G.elements:
        mapping[(tag, g)] = (1 - tag, g)
    return G, GroupoidAutomorphism(G, mapping)


def seeded_twisted_instances(count: int, seed: int, max_size: int = 24):
    rng = rng_for(seed)
    out = []
    while len(out) < count:
        H, c = random_h_with_cocycle(rng, max_size)
        G, alpha = random_g_with_automorphism(rng, max_size)
        if len(H) <= max_size and len(G) <= max_size:
            out.append((H, c, G, alpha))
    return out


def random_gaussian(rng: random.Random) -> GaussianRational:
    return GaussianRational(
        Fraction(rng.randint(-3, 3), rng.randint(1, 4)),
        Fraction(rng.randint(-2, 2), rng.randint(1, 3)),
    )


def random_conv_element(rng: random.Random, G: FiniteGroupoid):
    from .convolution_algebra import FiniteConvElement

    support = rng.sample(list(G.elements), k=min(len(G.elements), rng.randint(1, 4)))
    return FiniteConvElement(G, {g: random_gaussian(rng) for g in support})


def seeded_groupoids_for_representation(count: int, seed: int, max_size: int = 12):
    """(groupoid, unit, element, element) quadruples for matrix checks."""
    rng = rng_for(seed)
    out = []
    while len(out) < count:
        shape = rng.choice(["relation", "cyclic", "two"])
        if shape == "relation":
            G = full_relation(range(rng.randint(2, 3)))
        elif shape == "cyclic":
            G = cyclic_group_groupoid(rng.randint(2, 8))
        else:
            G = disjoint_union(
                full_relation(range(2)), cyclic_group_groupoid(rng.randint(2, 4))
            )
        if len(G) > max_size:
            continue
        u = rng.choice(sorted(G.units, key=repr))
        out.append((G, u, random_conv_element(rng, G), random_conv_element(rng, G)))
    return out


def seeded_bouquet_windows(count: int, seed: int, max_index: int = 9, max_len: int = 4):
    """Unit-space basic opens Z(u \\ F) over the bouquet."""
    from .graph_groupoid import InfiniteBouquet, unit_bisection

    rng = rng_for(seed)
    bouquet = InfiniteBouquet()
    out = []
    for _ in range(count):
        u = bouquet.path([rng.randint(0, max_index) for _ in range(rng.randint(0, max_len))])
        f_size = rng.choice([0, 1, 1, 2, 3])
        excluded = {bouquet.edge(i) for i in rng.sample(range(max_index + 1), k=f_size)}
        out.append(unit_bisection(u, excluded))
    return out
