"""Small helper shared by the demo scripts."""

import numpy as np

from ultrasim import FiniteMapping


def transformed_copy(m: FiniteMapping, seed: int = 0) -> FiniteMapping:
    """A copy of m with shuffled points and renamed values."""
    rng = np.random.default_rng(seed)
    perm = rng.permutation(m.n)
    rename = {v: f"v{i}" for i, v in enumerate(rng.permutation(m.values))}
    points = tuple(f"y{i}" for i in range(m.n))
    rows = [
        [rename[m.value_at(int(perm[x]), int(perm[y]))] for y in range(m.n)]
        for x in range(m.n)
    ]
    return FiniteMapping.from_labels(points, rows)
