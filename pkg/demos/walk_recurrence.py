"""
Recurrence of a discrete-time walk
==================================

A unitary step ``U`` with eigenphases ``phi_k`` returns after ``m`` steps once
every ``m phi_k`` sits near a common angle. A brute-force scan finds the first
return, and the constructive bound certifies one.
"""
import math

from qrecurrence import find_recurrence_constructive, make_spectrum, scan_first_recurrence

phis = [0.0, 2 * math.pi * (math.sqrt(5) - 1) / 2, 1.0]
s = make_spectrum(phis, "discrete")
eps = 0.2

scan = scan_first_recurrence(s, eps, 1, 5000)
print("first step back within eps :", scan.first_recurrence)

cert = find_recurrence_constructive(s, eps, tile_method="all")
print("certified recurrence step  :", cert.recurrence_time,
      f"({cert.multiplier} x base step {cert.base_time})")
print("bound                      :", cert.bound_used, cert.bound_value)
print("worst case at that step    :", cert.worst_case_at_tr)

# %%
# The certificate is a guarantee, not the first return. It is usually much
# later than what the scan finds but it never exceeds the theorem bound.
assert cert.recurrence_time <= cert.bound_value
