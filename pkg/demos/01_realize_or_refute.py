#!/usr/bin/env python3
"""Realize a value table as an ultrametric, or get told exactly why you can't.

Two four-point tables that look superficially alike end very differently:
one picks up a rational realization, the other a two-value cycle that no
relabeling can escape.
"""

from ultrasim import (
    FiniteMapping,
    Realization,
    realize_ultrametric,
    realize_pseudoultrametric,
    scalene_triple,
    strong_triangle_violations,
    u_relation,
)

# A four-point cycle: sides 1, both diagonals 2.  As a metric this is the
# circle with four equally spaced points; it is NOT an ultrametric (1 + 1 is
# not >= 2 in the strong sense), but some relabeling of its values is.
quadruple = FiniteMapping.from_labels(
    ("x1", "x2", "x3", "x4"),
    [
        ["0", "1", "2", "1"],
        ["1", "0", "1", "2"],
        ["2", "1", "0", "1"],
        ["1", "2", "1", "0"],
    ],
)

print("side values of the quadruple:", quadruple.values)
print("base-precedes-legs relation:", sorted(u_relation(quadruple).pairs()))

result = realize_ultrametric(quadruple)
assert isinstance(result, Realization)
print("\nrealized matrix (note: the old diagonal value 2 now ranks BELOW 1):")
for row in result.matrix:
    print("   ", [str(d) for d in row])
print("value ranks:", {k: str(v) for k, v in result.assignment.entries})
print("strong-triangle violations:", strong_triangle_violations(result.matrix))

# Now the counterexample: three rays of length pi/2 glued at a hub, with the
# hub removed.  Every triangle is isosceles, yet no pseudoultrametric is
# combinatorially similar to it.
two_scale = FiniteMapping.from_labels(
    ("x1", "x2", "x3", "x4"),
    [
        ["z", "h", "p", "p"],
        ["h", "z", "h", "p"],
        ["p", "h", "z", "p"],
        ["p", "p", "p", "z"],
    ],
)

print("\nsecond table: scalene triple?", scalene_triple(two_scale))
print("base-precedes-legs relation:", sorted(u_relation(two_scale).pairs()))
certificate = realize_pseudoultrametric(two_scale)
print("verdict:", certificate)
print("certificate re-checks against the table:", certificate.verify(two_scale))
print(
    "\nThe pair (h, p) appears in BOTH orders: h would have to rank both "
    "strictly above and strictly below p.  No injective rank assignment "
    "exists, and the cycle is the proof."
)
