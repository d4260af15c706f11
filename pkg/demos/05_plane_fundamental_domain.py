"""The plane case: reduction into the modular fundamental domain, the
glued sphere of base points, stabilizers, suspension, cross-section.

A unit-systole lattice, rotated so a shortest vector becomes 1, is
Z + zZ for a unique z with |z| >= 1 and |Re z| <= 1/2.  Square and
triangular lattices are the only ones with extra rotational symmetry.
"""
import cmath
import math

import numpy as np

import chabauty as ch


def lattice(*gens):
    return ch.make_subgroup(2, None, [(w.real, w.imag)
                                      for w in map(complex, gens)])


square = ch.standard_subgroup(2, 0, 2)
hexagonal = lattice(1.0, cmath.exp(1j * math.pi / 3))
generic = lattice(1.0, 0.3 + 2.0j)

for name, g in [("square", square), ("hexagonal", hexagonal),
                ("generic", generic)]:
    form = ch.reduce_lattice(g)
    print(f"{name:10s} z = {form.z:.6f}  theta = {form.theta:.4f}  "
          f"stabilizer order = {ch.stabilizer_order(g)}")

# rotating the lattice changes theta but not the base point
rot = np.array([[math.cos(0.7), -math.sin(0.7)],
                [math.sin(0.7), math.cos(0.7)]])
spun = ch.apply_linear(rot, generic)
print("base point is rotation invariant:",
      ch.base_point(spun), "=", ch.base_point(generic))

# the two boundary gluings of the domain identify lattices
a = lattice(1.0, 0.5 + 2.0j)
b = lattice(1.0, -0.5 + 2.0j)
print("vertical gluing:", ch.base_point(a) == ch.base_point(b))
u = cmath.exp(1j * (math.pi / 2 + 0.25))
v = cmath.exp(1j * (math.pi / 2 - 0.25))
print("circle gluing:  ", ch.base_point(lattice(1.0, u))
      == ch.base_point(lattice(1.0, v)))

# covolume normalization and the suspension over unit-covolume shapes
unit = ch.normalize_covolume(hexagonal)
print("normalized hexagonal covolume:", ch.covolume(unit))
print("suspension at t=0 is the identity:",
      ch.chabauty_distance(ch.suspension_map(unit, 0.0), unit))
print("suspension of Z^2 at t=inf:",
      ch.suspension_map(square, math.inf))

# the rotation-corrected cross-section stays continuous across the
# circle gluing
theta = 0.2
s_plus = ch.cross_section(cmath.exp(1j * (math.pi / 2 + theta)))
s_minus = ch.cross_section(cmath.exp(1j * (math.pi / 2 - theta)))
print("glued cross-section values agree:",
      ch.chabauty_distance(s_plus, s_minus))

# a small atlas of stabilizer orders over the fundamental domain
rows = ch.atlas_rows(n_re=13, n_im=5, im_max=1.6)
special = [(x, y) for x, y, order in rows if order > 1]
print("grid points with extra symmetry:", special)
