"""
The T region and its tilings
============================

``T`` is the set of points with every coordinate and every pairwise
coordinate difference in ``[-h, h)``, where ``h = 1/(2N)``. Its translates by
the lattice spanned by ``(1, ..., 2, ..., 1) / (2N)`` tile space with no gaps
or overlaps.
"""
import numpy as np

from qrecurrence.oracle import mc_volume_T
from qrecurrence.tiling import check_T_partition_rows, volume_T

rng = np.random.default_rng(0)

# Every point lands in exactly one tile.
for D in (2, 3):
    for N in (1, 2):
        X = rng.uniform(-3, 3, size=(20_000, D))
        roundtrip, unique = check_T_partition_rows(X, N)
        print(f"D={D} N={N}: {roundtrip.mean():.0%} recovered, {unique.mean():.0%} in a single tile")

# %%
# The volume of ``T`` in ``D = d - 1`` dimensions is ``d / (2N)^D``. Monte Carlo agrees
# within its standard error.
print()
for d in (3, 4, 5):
    for N in (1, 2):
        est, se = mc_volume_T(d, N, 200_000, seed=1)
        exact = float(volume_T(d, N))
        print(f"d={d} N={N}: exact {exact:.5f}  estimate {est:.5f} +- {se:.5f}")
