"""
A convergent case for contrast
==============================

For the heat semigroup e^{t d^2/dx^2}, which is self-adjoint and sectorial,
the same rank-one Trotter product does converge. With u proportional to
1 + cos x + cos 2x the scalar <S(t/n)u, u>^n tends to exp(-t q) where
q = (0*2 + 1*1 + 4*1) / (2 + 1 + 1) = 5/4.
"""

# %%
import math

from trotterproj import operator_sim as sim

v = sim.positive_control(t=1)
print("verdict", v.kind)
print("   n          ||f_2n - f_n||")
for n, d in v.cauchy_table:
    print(f"{n:11d}   {d:.3e}")

# %%
limit = complex(v.scalar_table[-1][1]).real
print("\nscalar at the last n  ", limit)
print("exp(-5/4)             ", math.exp(-1.25))
print("difference            ", abs(limit - math.exp(-1.25)))

# %%
# The error shrinks like 1/n: log <S(s)u, u> = -q s + O(s^2), raised to n.
