"""
How the recurrence bounds scale
===============================

Each bound is a base period times a pigeonhole count in ``N = ceil(pi/eps)``.
The hypercube count grows like ``(2N)^(d-2)``, the simplex count like
``(2N+2)^(d-2) / (d-1)``, so for ``d >= 4`` the simplex bound is smaller by
about a factor ``d - 1``. At ``d = 3`` the two-cube count ``N`` edges out the
simplex count ``N + 1``.
"""
from qrecurrence import applicable_bounds

print(f"{'d':>2s} {'eps':>5s} " + "".join(f"{name:>12s}" for name in ("T1", "T3a", "T3b")))
for d in (3, 4, 5, 6):
    for eps in (0.5, 0.1, 0.01):
        rows = {b.theorem: b.value for b in applicable_bounds("continuous", d, eps, span=1.0)}
        cells = "".join(f"{rows.get(k, float('nan')):12.4g}" for k in ("T1", "T3a", "T3b"))
        print(f"{d:2d} {eps:5.2f} {cells}")

# %%
# Discrete time uses the largest phase gap ``max_R`` instead of the span.
print()
for b in applicable_bounds("discrete", 4, 0.1, max_R=1.0):
    print(f"{b.theorem}: literal {b.value:.4g}, with integer base step {b.adjusted_value:.4g}")
