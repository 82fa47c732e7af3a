"""
Simulating the Trotter product directly
=======================================

The lacunary sums are a shortcut. Here the operators are built explicitly,
on a dyadic grid of [0, 1] and on a sparse cosine basis of [0, 2pi], and the
product [S(t/n) P]^n is iterated step by step.
"""

# %%
from fractions import Fraction

from trotterproj import cn_hilbert, cn_lp, to_decimal
from trotterproj import operator_sim as sim

# multiplication by e^{ith} on 2^16 cells; P is the mean
S, P, one = sim.hilbert_preset(16)
n = 64
f = sim.trotter_iterate(S, P, 1, n, one)
print("||f_64|| on the grid      ", f.norm())
print("|c_64|^63 from the sum    ", float(abs(cn_hilbert(n).value)) ** 63)

# %%
# The truncated symbol h_D differs from h only on the cell next to 0, so the
# grid mean of e^{ih/n} is within 2.5 * 2^-D of c_n.
for n in (3, 64, 1024):
    grid = sim.grid_cn(n, 16)
    exact = complex(cn_hilbert(n).value)
    print(f"n={n:5d}  |grid - exact| = {abs(grid - exact):.2e}   bound {2.5 * 2**-16:.2e}")

# %%
# The rank-one projection reduces the product to one scalar power; the
# literal loop and the reduction agree to rounding.
reduced = sim.rank_one_reduction(S, one, 1, 64, one)
print("\nliteral vs reduced        ", (f - reduced).norm())

# %%
# The L_p example: translation by 2 pi t and projection onto the positive
# function g. Its c_n is 16/17 + (1/17) sum 2^-k cos(pi 2^k / n).
T, Pg, g = sim.lp_preset(40)
for n in (2, 3, 256):
    print(f"n={n:4d}  <g, S(1/n) g> = {sim.fourier_cn(n, 40):.15f}   "
          f"c_n = {to_decimal(cn_lp(n).value.real, 15)}")

# %%
# The probe classifies the Hilbert iterates along a mixed schedule.
schedule = sorted([2**m for m in range(5, 15)] + [3 * 2**m for m in range(5, 12)])
verdict = sim.convergence_probe(S, P, Fraction(1), one, schedule, 5e-4)
print("\nprobe verdict", verdict.kind, " separation", round(verdict.separation, 6))
