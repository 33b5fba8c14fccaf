"""Central Bernstein functions z_mu and their base change, printed as tables."""

from basechange.bernstein import base_change, bernstein_function
from basechange.weyl import Cocharacter, admissible_set, length

# the admissible set of a minuscule cocharacter
mu = Cocharacter(0, -1)
print("Adm(0,-1):", " ".join(str(w) for w in admissible_set(mu)))

# coefficients depend only on the length gap l(mu) - l(w)
mu = Cocharacter(2, -1)
z = bernstein_function(mu)
print(f"\nz_mu for mu=(2,-1), {len(z)} terms")
for w in sorted(z, key=lambda w: (-length(w), w.m)):
    print(f"  {str(w):10s} gap {mu.length - length(w)}  {z[w]}")

# base change to the degree f extension is z_{f mu} with q replaced by q^f
for f in (1, 2, 3):
    bz = base_change(Cocharacter(1, 0), f)
    print(f"\nf={f}: b z_(1,0) has {len(bz)} terms, equals z_({f},0): {bz == bernstein_function(Cocharacter(f, 0))}")
