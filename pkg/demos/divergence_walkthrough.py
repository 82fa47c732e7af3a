"""
Why [e^{ih/n} P]^n has no limit
===============================

Walks through the Hilbert-space counterexample numerically: the scalar c_n,
its n-th power along n = 2^m and n = 3*2^m, and the gap between the two.
Run with ``python3 demos/divergence_walkthrough.py``.
"""

# %%
# c_n is the mean of e^{ih/n} over [0, 1]. Its lacunary form is
# sum_k 2^-k exp(i pi 2^k / n), and the package evaluates it exactly by
# following the orbit of 2^k modulo 2n.
from trotterproj import bound_constants, certify_divergence, cn_hilbert, to_decimal

for n in (1, 3, 4, 12, 1000):
    c = cn_hilbert(n)
    print(f"c_{n:<5d} = {to_decimal(c.value.real, 12):>20s} + {to_decimal(c.value.imag, 12)} i")

# %%
# The Trotter iterate applied to 1 is c_n^{n-1} e^{ih/n}, so its norm is
# |c_n|^{n-1}. Compare |c_n|^n along the two subsequences.
from trotterproj import subsequence_scan

pow2 = subsequence_scan("hilbert", "pow2", 8, 20)
three = subsequence_scan("hilbert", "three_pow2", 8, 20)
print("\n  m   |c_2^m|^2^m        |c_3*2^m|^3*2^m")
for a, b in zip(pow2, three):
    m = a.n.bit_length() - 1
    print(f"{m:3d}   {to_decimal(a.power, 10):18s} {to_decimal(b.power, 10)}")

# %%
# The two limits are exp(-(4 + pi^2/4)) and exp(-(6 + pi^2/6 - pi^4/4536)).
consts = bound_constants()
print("\nlower constant", to_decimal(consts.lower_bound, 20))
print("upper constant", to_decimal(consts.upper_bound, 20))

# %%
# The 3*2^m powers approach their limit from above and slowly: the imaginary
# part of c_{3*2^m} is about m pi / (3*2^m), which adds roughly
# exp((m pi)^2 / (6*2^m)) to the power. At m = 10 that is 17 %.

# %%
# The certificate packages all of this: liminf and limsup estimates over
# m = 10..40, per-m bound checks and a verdict.
cert = certify_divergence("hilbert")
print("\nverdict ", cert.verdict)
print("liminf  ", to_decimal(cert.liminf_estimate, 15))
print("limsup  ", to_decimal(cert.limsup_estimate, 15))
print("gap     ", to_decimal(cert.gap, 6))
