"""
A local ring: Z/49
==================

Over Z/49 the radical of each frame atom is the submodule 7 e_i, and their
sum w = 7R^2 cuts out an upper interval that looks like the F7 model.
"""

# %% build the model (about two seconds)
from modlat import gl_instance
from modlat.conditions import check_all

inst = gl_instance("Z/49", 2)
print(inst)
ws, w = inst.radicals
print("w_i:", ws, " w:", w, " equals 7R^2:", w == inst.action.module.span([[7, 0], [0, 7]]))
print("interval above w:", inst.upper.size, "elements, length", inst.upper.length)

# %% conditions, then the two radical lemmas
from modlat.nets import enumerate_nets
from modlat.verify import verify_lemma1, verify_lemma2

reports = check_all(inst)
print("failing conditions:", [r.condition for r in reports if not r.holds])
print("lemma 1:", verify_lemma1(inst, reports).outcome)
for tau in enumerate_nets(inst):
    v = verify_lemma2(inst, tau, reports)
    print(f"  tau={tau.off_diagonal()} rho={v.details['rho']} "
          f"|G(K_rho)|={v.details['G(K_rho)']:>6} {v.outcome}")

# %% a seeded sample still covers every reduced item here
sampled = check_all(inst, sample=10_000, seed=7)
print([(r.condition, r.domain_sizes["covered"]) for r in sampled])
