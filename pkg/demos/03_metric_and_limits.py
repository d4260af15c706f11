"""The computable metric on closed subgroups and limit classification.

Two subgroups are close when their traces in every large ball agree up
to a small slack.  The metric aggregates the per-ball gaps over dyadic
radii; degenerating one-parameter families land on the boundary strata
predicted by the incidence order.
"""
import numpy as np

import chabauty as ch

z2 = ch.standard_subgroup(2, 0, 2)
r2 = ch.standard_subgroup(2, 2, 0)
trivial = ch.make_subgroup(2)

print("d(Z^2, Z^2)      =", ch.chabauty_distance(z2, z2))
print("d(Z^2, R^2)      =", ch.chabauty_distance(z2, r2))
stretched = ch.apply_linear(np.diag([1.1, 1.0]), z2)
print("gap at radius 1 against diag(1.1, 1) Z^2:",
      ch.hausdorff_gap(z2, stretched, 1.0))

print("\nsparser and sparser lattices approach the trivial group:")
for k in (2, 8, 32, 128):
    print(f"  d({k} Z^2, 0) = "
          f"{ch.chabauty_distance(ch.scale(z2, float(k)), trivial):.4f}")

print("\nfiner and finer lattices approach the plane:")
for k in (2, 8, 32, 128):
    print(f"  d(Z^2/{k}, R^2) = "
          f"{ch.chabauty_distance(ch.scale(z2, 1.0 / k), r2):.4f}")

# the raw two-sided neighborhood test
print("\n1.05 Z within 0.1 of Z on the ball of radius 10?",
      ch.neighborhood_test(ch.make_subgroup(1, None, [[1.05]]),
                           ch.make_subgroup(1, None, [[1.0]]), 10.0, 0.1))

# one-parameter degenerations realize the covering arrows of the
# incidence diagram: a shrinking generator creates a new continuous
# direction, an escaping one loses rank
for source, target in [((0, 2), (1, 1)), ((0, 2), (0, 1))]:
    family = ch.degeneration_family(2, source, target)
    report = ch.classify_limit(family, [64, 128, 256, 512, 1024], 0.01)
    print(f"\nfamily {source} -> limit type {tuple(report.group_type)}")
    print("  norm indices to zero:", report.to_zero,
          " to infinity:", report.to_infinity)
