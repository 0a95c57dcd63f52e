#!/usr/bin/env python3
"""Distances valued in a partial order, and what survives a change of poset.

Three notions, strictly ordered by strength on a fixed poset Q:
poset-valued ultrametric  =>  ultrametric distance  =>  nothing much.
The antichain example separates the first two.  Transfers along isotone
bottom-preserving maps keep pseudoultrametrics; keeping ULTRAmetrics needs
exactly one extra condition on the map's kernel.
"""

from ultrasim import (
    FinitePoset,
    FiniteMapping,
    ValueMap,
    check_ultrametric_preserving,
    compose_isotone,
    is_q_ultrametric,
    is_ultrametric_distance,
    two_point_mapping,
)


def identity_embed(m):
    return ValueMap(tuple((v, v) for v in m.values))


# Q: a bottom below three pairwise-incomparable values.
q = FinitePoset.from_pairs(
    ("q0", "a", "b", "c"), [("q0", "a"), ("q0", "b"), ("q0", "c")]
)

# Three points whose off-diagonal values are pairwise distinct.
d = FiniteMapping.from_labels(
    ("x1", "x2", "x3"),
    [["q0", "a", "c"], ["a", "q0", "b"], ["c", "b", "q0"]],
)

print("ultrametric distance axioms:", is_ultrametric_distance(d, q, identity_embed(d)))
print("poset-valued ultrametric:  ", is_q_ultrametric(d, q, identity_embed(d)))
print(
    "\nWith a, b, c incomparable, the level sets {pairs <= gamma} are all tiny\n"
    "and transitivity never bites -- the distance axioms hold.  But the triple\n"
    "(x1, x2, x3) has three distinct side values, so no isosceles permutation\n"
    "exists and the poset-ultrametric condition fails.\n"
)

# Transfer: collapse a chain 0 < 1 < 2 onto a two-element chain.
chain3 = FinitePoset.from_pairs(("0", "1", "2"), [("0", "1"), ("1", "2")])
chain2 = FinitePoset.from_pairs(("lo", "hi"), [("lo", "hi")])

collapsing = ValueMap.from_dict({"0": "lo", "1": "lo", "2": "hi"})
print("collapsing map ultrametric-preserving?", check_ultrametric_preserving(collapsing, chain3, chain2))

counterexample = two_point_mapping("0", "1")
image = compose_isotone(collapsing, counterexample, chain3, chain2)
print("two-point table at the collapsed value 1, after transfer:")
for row in image.label_rows():
    print("   ", row)
print("image is a poset ultrametric:", is_q_ultrametric(image, chain2, identity_embed(image)))

healthy = ValueMap.from_dict({"0": "lo", "1": "hi", "2": "hi"})
print("\nnon-collapsing map ultrametric-preserving?", check_ultrametric_preserving(healthy, chain3, chain2))
good = compose_isotone(healthy, counterexample, chain3, chain2)
print("same two-point table under it:", is_q_ultrametric(good, chain2, identity_embed(good)))
