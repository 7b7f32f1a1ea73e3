"""
Measuring a subgroup by its transvections
=========================================

sigma(F) records, for each ordered pair of atoms, the join of all x for which F
meets the transvection class H_ij(x).  Taking instead every component of
every f(e_i) overshoots: the monomial subgroup swaps the two atoms, so its
component hull is the full net even though it holds no transvection.
"""

# %% the monomial subgroup of the F7 model
from modlat import gl_instance
from modlat.nets import component_hull, elementary_net_group, sigma_of
from modlat.verify import enumerate_intermediate

inst = gl_instance("F7", 2)
family = enumerate_intermediate(inst.G, inst.H)
for F in family:
    print(f"|F|={F.order:>3}  sigma={sigma_of(inst, F).off_diagonal()}  "
          f"hull={component_hull(inst, F).off_diagonal()}")

# %% only sigma keeps F above its elementary group and below the normalizer
from modlat.autgroup import normalizer
from modlat.nets import g_of_k_tau

monomial = family[1]
for name, tau in (("sigma", sigma_of(inst, monomial)), ("hull", component_hull(inst, monomial))):
    E = elementary_net_group(inst, tau)
    N = normalizer(inst.G, g_of_k_tau(inst, tau))
    print(name, "E <= F:", E.issubset(monomial), " F <= N:", monomial.issubset(N))
