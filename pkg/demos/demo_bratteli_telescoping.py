#!/usr/bin/env python3
"""Leveled diagrams: validation, path counting, telescoping and the
edge-cycling automorphism.

The running example is the simplest interesting diagram: one vertex per
level with two parallel edges between consecutive levels, repeated forever.
"""

from groupoid_forge import (
    constant_diagram,
    edge_cycle_automorphism,
    enumerate_paths,
    telescope,
    validate_bratteli,
)
from groupoid_forge.graph_model import path_count_matrix

d = constant_diagram(2)
print("diagram:", d.to_json())
print("validation:", validate_bratteli(d).describe())

print("\npaths from the top vertex:")
for depth in range(5):
    print(f"  depth {depth}: {len(enumerate_paths(d, (0, 0), depth))} paths")

print("\npath-count matrix level 0 -> 4:", path_count_matrix(d, 0, 4))

# Collapsing levels multiplies the multiplicity tables.
t = telescope(d, (0, 2, 4))
print("\ntelescoped by (0, 2, 4):", [m[0][0] for m in t.mult], "edges per level")

# Choosing growing gaps makes multiplicities outrun the level index, the
# combinatorial engine behind the freeness certificates downstream.
sub = (0, 1, 2, 4, 6, 9, 12)
grown = telescope(d, sub)
print(f"\ntelescoped by {sub}:")
for n in range(6):
    k = grown.mult[n][0][0]
    print(f"  level {n}: multiplicity {k} > {n}: {k > n}")

# The vertex-fixing automorphism cycling each parallel class.
alpha = edge_cycle_automorphism(grown)
e = grown.edges_between(2)[0]
orbit = [e]
while True:
    nxt = alpha.edge_image(orbit[-1])
    if nxt == orbit[0]:
        break
    orbit.append(nxt)
print(f"\nedge-cycle orbit of {e.label} has size {len(orbit)} "
      f"(= the class multiplicity {grown.mult[2][0][0]})")
print("automorphism order through level 6:", alpha.order(6))
