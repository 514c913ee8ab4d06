#!/usr/bin/env python3
"""Exact step-function calculus: lattice operations, the three norms, and
the non-completeness norm sequences.

Everything here runs in exact rational arithmetic; every printed identity is
an equality of Fractions, not a float comparison.
"""

from fractions import Fraction

import numpy as np

from leftprim import RegulatedFn, StepFn, norm, random_stepfn
from leftprim.builders import AlternatingIndicatorTail

F = Fraction

print("== two-bump example ==")
# chi_{(0,1]} - chi_{(1,2]} on [0,2]: the cumulative rises to 1 then falls
f = StepFn.indicator(0, 1, 0, 2) - StepFn.indicator(1, 2, 0, 2)
print("cells:", f.to_cells())
print("Alexiewicz norm (exact):", f.alexiewicz_norm())      # 1
print("L1 norm:", f.l1_norm(), "  sup norm:", f.sup_norm())  # 2, 1
lo_arg, hi_arg = f.alexiewicz_extrema()
print("cumulative extrema attained at:", lo_arg, hi_arg)

print("\n== lattice structure on random step data ==")
rng = np.random.default_rng(0)
g, h = random_stepfn(rng), random_stepfn(rng)
print("join commutes:", g.join(h) == h.join(g))
print("f = f+ - f-   :", g.pos() - g.neg() == g)
print("|f| = f+ + f- :", g.pos() + g.neg() == g.abs())
dom = g.abs().join(h.abs())
print("Riesz monotonicity: ||g|| <= ||dom|| in all three norms:",
      g.abs().l1_norm() <= dom.l1_norm()
      and g.abs().sup_norm() <= dom.sup_norm()
      and g.abs().alexiewicz_norm() <= dom.alexiewicz_norm())

print("\n== the normed spaces are not complete ==")
print("the alternating indicator tails converge in norm to a function whose")
print("left limit at 0 does not exist; the norms follow exact laws:")
for n in (1, 2, 5, 10, 25):
    tail = AlternatingIndicatorTail(n)
    a, l = tail.alexiewicz_exact(), tail.l1_exact()
    print(f"  n={n:3d}: ||F-F_n||_A = {a} = 1/{n+1}-1/{n+2}"
          f"   ||F-F_n||_1 = {l} = 1/{n+1}")
    assert a == F(1, n + 1) - F(1, n + 2) and l == F(1, n + 1)
