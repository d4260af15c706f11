"""Scale decompositions near a base point, and the link geometry.

Near the axis-aligned representative of a type, a subgroup is encoded
by a flag, an aligning rotation, a fine-block subgroup, a distinguished
medium basis, a coarse lattice, and coset offsets.  The encoding is
invertible; the link of the base point carries a cone action and a
projection onto normalized fine/coarse shapes.
"""
import chabauty as ch

delta = 0.1
base = ch.standard_subgroup(3, 0, 2)  # Z^2 inside R^3

# a nearby subgroup with an extra huge generator carrying offsets
g = ch.make_subgroup(3, None, [(1, 0, 0), (0, 1, 0), (0.2, 0.3, 50.0)])
print("membership:", ch.in_scale_neighborhood(g, base, delta))

lin, loc = ch.local_decomposition(g, base, delta)
print("distinguished medium basis:\n", loc.medium_basis)
print("coarse lattice:", loc.coarse_basis.ravel())
print("coarse offsets into the medium block:", loc.coarse_offset_medium)

rec = ch.reconstruct(lin, loc)
print("reconstruction distance:", ch.chabauty_distance(rec, g))

# a point on the link of a (1,1) base: fine and coarse scales balance
base11 = ch.standard_subgroup(3, 1, 1)
link_pt = ch.make_subgroup(3, None, [(delta / 4, 0, 0), (0, 1, 0),
                                     (0, 0, 4 / delta)])
print("\non the link of R x Z:", ch.on_link(link_pt, base11, delta))
lin, loc = ch.local_decomposition(link_pt, base11, delta)

fine, coarse, lam = ch.bundle_projection(lin, loc, delta)
print("normalized fine norms:", ch.norms(fine),
      " coarse norms:", ch.norms(coarse), " join coordinate:", lam)

# sliding along the cone scales the two ends in opposite directions
half = ch.cone_map(0.5, lin, loc)
print("after cone slide t=1/2: fine norm",
      ch.norms(half.fine_part)[0], " coarse generator",
      half.coarse_basis.ravel())

# strata bookkeeping: dimensions, incidence order, torus fibers
print("\nstratum dimensions in the plane:",
      [ch.stratum_dimension(2, t)
       for t in [(0, 2), (1, 1), (0, 1), (1, 0), (2, 0), (0, 0)]])
print("covering arrows for n = 2:")
for hi, lo in ch.hasse_diagram(2):
    print(f"  {tuple(hi)} -> {tuple(lo)}")
print("torus fiber dimensions over the strata above Z in R^3:",
      {tuple(t): ch.fiber_dimension(3, (0, 1), t)
       for t in [(0, 2), (0, 3)]})
