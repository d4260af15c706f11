"""Successive norms, covolume, scale types, and the duality involution.

The i-th norm is the radius at which the subgroup generated by the
elements of norm <= r jumps to rank i.  The dual subgroup collects the
vectors pairing integrally with everything; it swaps type (p, q) with
(n - (p + q), q).
"""
import numpy as np

import chabauty as ch

g = ch.make_subgroup(2, None, [(1.0, 0.0), (0.0, 3.0)])
print("norms of Z(1,0)+Z(0,3):", ch.norms(g))
print("systole:", ch.systole(g))
print("covolume:", ch.covolume(g))

line = ch.standard_subgroup(2, 1, 0)
print("covolume of a line:", ch.covolume(line))  # takes all values at once

# the type seen at a scale: tiny directions look continuous, huge ones
# look like lost rank
squeezed = ch.make_subgroup(2, None, [(0.01, 0.0), (0.0, 5.0)])
print("delta-type of Z(0.01,0)+Z(0,5) at 0.1:",
      tuple(ch.delta_type(squeezed, 0.1)))

# duality swaps the roles of free and constrained directions
half = ch.make_subgroup(2, None, [(2.0, 0.0)])
d = ch.dual(half)
print("dual of 2Z e1 has type", tuple(ch.type_of(d)))
print("  continuous part:", d.continuous_basis, " lattice:",
      d.discrete_basis)

# the involution comes back to the start, and dual points pair
# integrally with the original
dd = ch.dual(d)
print("distance(dual(dual), original) =", ch.chabauty_distance(dd, half))
a = ch.points_in_ball(g, 3.5)
b = ch.points_in_ball(ch.dual(g), 3.5)
pairings = a @ b.T
print("max |pairing - nearest integer| =",
      np.max(np.abs(pairings - np.round(pairings))))
