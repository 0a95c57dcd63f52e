#!/usr/bin/env python3
"""The weakest value order a table imposes, and the chain that attains it.

minimal_order computes the smallest partial order on the value labels under
which a table is a poset-valued pseudoultrametric.  The canonical chain
construction shows the other direction: every finite chain is the minimal
order of some ultrametric, namely the one the chain induces on itself.
"""

from ultrasim import (
    canonical_chain_ultrametric,
    embed_ranks,
    linear_extension,
    minimal_order,
    smallest_element,
)

from ultrasim import FiniteMapping

# Two merge events that never interact: heights 1 and 2 on disjoint pairs,
# joined at height 3.  The values 1 and 2 stay incomparable in the minimal
# order: no triple ever forces a comparison between them.
table = FiniteMapping.from_labels(
    ("a", "b", "c", "d"),
    [
        ["0", "1", "3", "3"],
        ["1", "0", "3", "3"],
        ["3", "3", "0", "2"],
        ["3", "3", "2", "0"],
    ],
)

order = minimal_order(table)
print("value set:", order.elements)
print("strict pairs of the minimal order:", order.strict_pairs())
print("bottom:", smallest_element(order))
print("is the minimal order total?", order.is_total())

total = linear_extension(order)
print("\none linear extension (lexicographic tie-break):", total)
ranks = embed_ranks(total, total[0])
print("integer ranks:", {k: str(v) for k, v in ranks.entries})

# The canonical chain ultrametric: points ARE the chain elements, the
# distance of two distinct points is the larger one.
mapping, chain = canonical_chain_ultrametric(["0", "1", "2", "3", "4"])
print("\ncanonical chain table on 0..4:")
for row in mapping.label_rows():
    print("   ", row)
recovered = minimal_order(mapping)
print("minimal order == the chain itself:", recovered == chain)
