#!/usr/bin/env python3
"""Distributions through their primitives: the Dirac measure, integration
by parts against Lipschitz multipliers, and the left-gauge Stieltjes
integral with its gauge-partition verification surface.
"""

from fractions import Fraction

from leftprim import (LeftGauge, Multiplier, RegulatedFn, StepFn, dirac,
                      fine_partition, mu_interval, pairing, parts,
                      primitive_integral, stieltjes, stieltjes_sum)
from leftprim.gauge import PartitionOverflow, uniform_partition
from leftprim.integral import TestFn
from leftprim.stepfn import PiecewisePoly

F = Fraction

print("== the Dirac measure lives here ==")
d = dirac()  # primitive: Heaviside step on [-1, 1]
print("integral over [-1,1]:", primitive_integral(d, -1, 1))
print("endpoint conventions: [0,1) ->", primitive_integral(d, 0, 1),
      "  (0,1) ->", primitive_integral(d, 0, 1, "open_open"))
phi = TestFn(0.0, 0.5)
print("sifting through a bump test function:", pairing(d, phi))

print("\n== integration by parts ==")
g = Multiplier.from_step_density(StepFn.constant(-1, 1, F(1)), F(-1))
value, bound = parts(d, g, -1, 1)
print(f"against g(x) = x+1: value {value} (= g(0)), certified bound {bound}")

print("\n== left-gauge partitions ==")
P = fine_partition(LeftGauge(width=F(1, 4)), F(0), F(1))
print("constant gauge width 1/4:", P.cells)
try:
    fine_partition(LeftGauge(width=lambda y: y / 2), 0, 1, max_cells=16)
except PartitionOverflow as exc:
    print("halving gauge overflows as it must; partial cells down to",
          float(exc.partial.cells[0][0]))

print("\n== Stieltjes integral, exactly on step data ==")
Fs = RegulatedFn.from_step(StepFn([F(0), F(1, 3), F(2, 3), F(1)],
                                  [F(1), F(-2), F(3)]))
g2 = PiecewisePoly([F(0), F(1)], [(F(0), F(0), F(1))])  # g(t) = t^2
val = stieltjes(Fs, g2, F(0), F(1))
print("int F d(t^2) =", val, "(exact rational)")
sums = [stieltjes_sum(Fs, g2, uniform_partition(0, 1, k)) for k in (2, 8, 243)]
print("tagged partition sums converge:", [float(s) for s in sums], "->",
      float(val))
print("atom bookkeeping: mu over (0, 1/3] of a jump-2 step at 1/3:",
      mu_interval(StepFn([F(0), F(1, 3), F(1)], [F(0), F(2)]), F(0), F(1, 3)))
