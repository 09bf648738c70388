"""
Recurrence of a single qubit
============================

Two levels with energies 0 and 1 return exactly after one period, 2 pi.
"""
import math

import numpy as np

from qrecurrence import (
    find_recurrence_constructive,
    make_spectrum,
    trace_distance_pure,
    worst_case_trace_distance,
)

s = make_spectrum([0.0, 1.0])

# The worst case over all initial states only depends on how far apart the
# two phases have drifted on the circle.
for t in np.linspace(0, 2 * math.pi, 9):
    print(f"t = {t:6.3f}   sup_psi T = {worst_case_trace_distance(s, t):.6f}")

# %%
# The constructive search certifies t_r = 2 pi and names a state that has
# actually left: the equal superposition is orthogonal to itself at t = pi.
cert = find_recurrence_constructive(s, eps=0.3)
print()
print("recurrence time :", cert.recurrence_time)
print("bound used      :", cert.bound_used, cert.bound_value)
print("witness time    :", cert.witness_time)
print("witness distance:", trace_distance_pure(cert.witness_state, s, cert.witness_time))
