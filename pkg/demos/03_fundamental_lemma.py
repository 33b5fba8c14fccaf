"""The base change identity for z_mu, evaluated at a few residue field sizes.

Each side is computed as a finite sum of counts times Bernstein coefficients
and again from its closed form.
"""

from basechange.counts import CaseParams
from basechange.integrals import check_fundamental_lemma
from basechange.weyl import Cocharacter

cases = [
    CaseParams(q=3, f=2, a=1, s=0, split_in_E=True, eigen_diff_mod4=0),
    CaseParams(q=3, f=2, a=1, s=0, split_in_E=True, eigen_diff_mod4=2),
    CaseParams(q=5, f=3, a=2, s=0),
    CaseParams(q=4, f=2, a=2, ramified=True, s=0),
]
for p in cases:
    print(p.label())
    for mu in (Cocharacter(p.s, 0) if p.s else Cocharacter(0, 0), Cocharacter(p.s + 1, -1), Cocharacter(p.s + 2, -2)):
        r = check_fundamental_lemma(mu, p)
        print(f"  mu=({mu.i},{mu.j})  twisted {r.twisted_sum}  orbital {r.orbital_sum}  agree {r.agree}")

# the same identity in Q(u), u^2 = q, with q left symbolic
r = check_fundamental_lemma(Cocharacter(1, -1), CaseParams(q=2, f=3, a=1, s=0), formal=True)
print("\nformal:", r.twisted_sum, "==", r.orbital_sum, r.agree)
