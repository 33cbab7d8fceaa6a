#!/usr/bin/env python3
"""The convolution *-algebra over the bouquet twisted product and the three
closed-form module identities, printed side by side with exact coefficients.

Pieces are indicators of (bisection x G-element) rectangles with Gaussian
rational coefficients; equality below is exact, never numerical.
"""

from groupoid_forge import full_relation
from groupoid_forge.convolution_algebra import (
    comp2_identity_sides,
    comp_identity_sides,
    delta,
    involution,
    convolve,
    generator_times,
    module_inner_product,
    regular_representation,
    right_action_identity_sides,
    unit_indicator,
)
from groupoid_forge.gaussian import gauss
from groupoid_forge.groupoid_core import relation_automorphism
from groupoid_forge.twisted_product import bouquet_twisted_product

G = full_relation(range(2))
alpha = relation_automorphism(G, {0: 1, 1: 0})
model = bouquet_twisted_product(G, alpha)

f = delta(G, (0, 1), gauss(1, 1))
fp = delta(G, (1, 0), gauss(2))

print("== transpose-against-generator identity ==")
for i, j in [(1, 1), (1, 2)]:
    lhs, rhs = comp_identity_sides(model, i, j, f, fp)
    print(f"i={i}, j={j}")
    print("  lhs:", lhs.describe())
    print("  rhs:", rhs.describe())
    print("  exact equality:", lhs == rhs)

print("\n== left module action ==")
lhs, rhs = comp2_identity_sides(model, 0, f, fp)
print("  lhs:", lhs.describe())
print("  rhs:", rhs.describe())
print("  exact equality:", lhs == rhs)

print("\n== right module action (picks up the automorphism) ==")
lhs, rhs = right_action_identity_sides(model, 0, f, fp)
print("  lhs:", lhs.describe())
print("  rhs:", rhs.describe())
print("  exact equality:", lhs == rhs)

print("\n== inner products ==")
one = unit_indicator(G)
x1 = generator_times(model, 1, one)
x2 = generator_times(model, 2, one)
print("  <x1, x2> =", module_inner_product(x1, x2).coeffs, "(orthogonal)")
print("  <x1, x1> =", dict(module_inner_product(x1, x1).coeffs))

print("\n== regular representation ==")
xi = delta(G, (0, 1))
m = regular_representation(G, (1, 1), xi)
print("  matrix of delta_(0,1) on the source fiber at (1,1):")
for row in m.entries:
    print("   ", [str(x) for x in row])
sq = regular_representation(G, (1, 1), convolve(xi, involution(xi)))
print("  R(xi * xi^*) equals R(xi) R(xi)^dagger:",
      sq.entries == m.matmul(m.dagger()).entries)
