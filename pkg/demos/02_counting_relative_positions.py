"""Counting fixed edges by relative position, three ways.

Closed counts are compared with an exhaustive tally on a truncated tree and
with a tally of extended edges in the Bruhat-Tits tree of an actual p-adic
matrix.
"""

from basechange.counts import count_gamma
from basechange.lattice import Building, empirical_counts, fixed_geometry, unramified_instance
from basechange.tree import BALL_AROUND_VERTEX, FixedSetSpec, TruncTree, counts_params_for, tally
from basechange.weyl import elements_of

# abstract tree, fixed set a ball of radius 1 around a vertex, q = 2
spec = FixedSetSpec(BALL_AROUND_VERTEX, q=2, a=1)
res = tally(spec, TruncTree.for_spec(spec, radius=5))
params, _ = counts_params_for(spec)
print("tree oracle (m,b) -> tally / closed count")
for n in range(2 * res.certified_max_r):
    for w in elements_of(n, params.s):
        print(f"  {str(w):10s} {res.counts.get((w.m, w.b), 0):5d} {count_gamma(w, params):5d}")

# a real elliptic element over Q_3 whose fixed set is a ball of radius 2
inst = unramified_instance(3, a=2, s=0)
building = Building(inst.field)
tal = empirical_counts(building, inst.g, twisted=False, radius=4)
geo = fixed_geometry(building, tal)
print(f"\n{inst.name}: fixed set is a {geo.kind} of radius {geo.radius}, {geo.n_fixed_edges} fixed edges")
print(f"certified up to length {tal.certified_max_length}")
for w in tal.certified_elements(0):
    print(f"  {str(w):10s} lattice {tal.counts[0].get(w, 0):5d}  closed {count_gamma(w, inst.params):5d}")
