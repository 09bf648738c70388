"""
Approximating differences of real numbers
=========================================

Pigeonhole on a tiling of the unit cube finds one integer ``q`` such that all
pairwise differences ``(q a_j - l_j) - (q a_k - l_k)`` are smaller than ``1/N``.
The three tilings give three different guarantees on ``q``.
"""
import math
from fractions import Fraction

from qrecurrence import brute_min_q, diff_approx, method_q_bound, pair_errors

alphas = [0.0, math.sqrt(2), math.sqrt(3), math.pi]
N = 5
d = len(alphas)

print(f"{'method':14s} {'q':>6s} {'bound':>6s} {'max pair error':>16s}   1/(qN)")
for method in ("hypercube", "two_cube", "simplex_hull"):
    res = diff_approx(alphas, N, method)
    err = pair_errors(alphas, res.q, res.l)
    print(f"{method:14s} {res.q:6d} {method_q_bound(method, d, N):6d} "
          f"{float(err):16.3e}   {1 / (res.q * N):.3e}")
    assert err < Fraction(1, res.q * N)

# %%
# The bounds are worst cases. Exhaustive search shows the smallest q that works.
q, l = brute_min_q(alphas, N, 200)
print("\nsmallest q by exhaustive search:", q, "with l =", l)

# %%
# When two of the numbers differ by an integer their difference can be
# removed up front, which costs one dimension less.
res = diff_approx([0.0, math.sqrt(2), 1.0], N, integer_pair=(2, 0))
print("with integer pair (2, 0): q =", res.q, "bound", res.q_bound)
