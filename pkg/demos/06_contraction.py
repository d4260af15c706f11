"""Contracting subgroups towards the full space, and why the
contraction cannot be uniform.

Scaling a full-rank subgroup by t -> 0 drives it to R^n in the metric,
but the speed depends on the norms: a lattice with a huge first norm
stays far from R^n long after a unit lattice has converged.  That is
exactly why the scaling homotopy fixes the trivial group while
dragging sparse lattices the other way.
"""
import numpy as np

import chabauty as ch

full = ch.standard_subgroup(3, 3, 0)
g = ch.random_subgroup(3, (0, 3), seed=5)
print("a random lattice with norms", np.round(ch.norms(g), 3))
for k in range(8):
    t = 2.0 ** -k
    print(f"  d({t:8.5f} * lattice, R^3) = "
          f"{ch.chabauty_distance(ch.scale(g, t), full):.4f}")

sparse = ch.scale(ch.standard_subgroup(2, 0, 2), 100.0)
r2 = ch.standard_subgroup(2, 2, 0)
print("\na lattice with first norm 100 resists the contraction:")
for t in (1.0, 0.5, 0.25):
    print(f"  d({t} * sparse, R^2) = "
          f"{ch.chabauty_distance(ch.scale(sparse, t), r2):.4f}")
print("(the same t = 1/2 step brought the unit lattice below",
      f"{ch.chabauty_distance(ch.scale(ch.standard_subgroup(2, 0, 2), 0.5), r2):.4f})")
