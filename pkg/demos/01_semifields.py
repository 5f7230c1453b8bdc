"""
Commutative presemifields of order 2^k
======================================

The plane is only as good as its coordinate ring, so everything starts with
building a multiplication table and checking it.
"""

import numpy as np

from fanoforge import field_presemifield, knuth_binary_presemifield, verify_axioms
from fanoforge.algebra import format_table, mutate_entry
from fanoforge.gf2 import default_modulus, gf_mul, gf_trace

# GF(4) with the default modulus x^2 + x + 1. Elements are bitmasks:
# 2 is x, 3 is x + 1, and x * x = x + 1.
print("modulus for k=2:", bin(default_modulus(2)))
print("x * x =", gf_mul(2, 2, 2, default_modulus(2)))

F4 = field_presemifield(2)
print(format_table(F4))

# The Knuth-style product x o y = xy + (x Tr(y) + y Tr(x))^2 over GF(2^k),
# k odd. It is commutative by symmetry; the rest is checked by brute force.
K8 = knuth_binary_presemifield(3)
print("traces in GF(8):", [gf_trace(a, 3) for a in range(8)])
print("Knuth order 8 report:", verify_axioms(K8))
print("differs from GF(8):", not np.array_equal(K8.table, field_presemifield(3).table))

# Corrupting one entry is always noticed.
bad = mutate_entry(F4, 2, 3, 0)
print("after mutation:", verify_axioms(bad).failures())

# Above order 64 distributivity is checked through GF(2)-linearity of every
# row and column instead of all n^3 triples.
K128 = knuth_binary_presemifield(7)
print("Knuth order 128:", K128.report.method, K128.report.ok)
