#!/usr/bin/env python3
"""Reading the value order off the ball structure, and deciding similarity.

In an ultrametric space the base-precedes-legs relation on distances is the
containment relation on closed balls, diameter by diameter.  And for tables
that carry their minimal value order, combinatorial similarity and weak
(order-respecting) similarity are the same decision.
"""

from fractions import Fraction

from ultrasim import (
    closed_balls,
    combinatorially_similar,
    mapping_from_realization,
    realization_from_matrix,
    similarity_coincidence_check,
    u_relation,
    u_via_balls,
    verify_witness,
)

from oracles_demo_support import transformed_copy  # tiny local helper

# A three-level ultrametric on six points: two triangles of side 1 and 2,
# joined at distance 3.
matrix = [
    [0, 1, 1, 3, 3, 3],
    [1, 0, 1, 3, 3, 3],
    [1, 1, 0, 3, 3, 3],
    [3, 3, 3, 0, 2, 2],
    [3, 3, 3, 2, 0, 2],
    [3, 3, 3, 2, 2, 0],
]
r = realization_from_matrix([[Fraction(v) for v in row] for row in matrix], kind="ultrametric")

print("closed balls (members, diameter):")
for members, diam in closed_balls(r):
    print("   ", sorted(members), str(diam))

print("\nu-relation from triples:        ", sorted(u_relation(mapping_from_realization(r)).pairs()))
print("u-relation from ball containment:", sorted(u_via_balls(r).pairs()))
print(
    "\nNote (1, 1) and (2, 2) are present: each triangle is a ball of its own\n"
    "diameter splitting three ways.  (3, 3) is absent: the whole space splits\n"
    "into only TWO balls at level 3, so no equilateral triple of side 3 exists.\n"
)

# Similarity: shuffle points and rename values; the decider reconstructs both.
a = mapping_from_realization(r)
b = transformed_copy(a, seed=11)
witness = combinatorially_similar(a, b)
print("point matching:", witness.g)
print("value matching:", witness.f_dict())
print("witness re-validates:", verify_witness(witness, a, b))

report = similarity_coincidence_check(a, b)
print("combinatorial and weak verdicts agree:", report.agree)
