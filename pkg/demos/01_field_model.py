"""
The projective line over F7
===========================

Submodules of F7^2 form a lattice with ten elements: zero, the eight lines
and the whole space.  GL_2(F7) acts on it through PGL_2(F7).
"""

# %% build the model
from modlat import gl_instance
from modlat.conditions import check_all

inst = gl_instance("F7", 2)
print(inst)
print("frame atoms:", inst.atoms, " kernel of the action:", inst.action.kernel_order)

# %% every condition holds, decided exhaustively
reports = check_all(inst)
for r in reports:
    print(f"{r.condition:>3} {r.verdict:<6} items={r.domain_sizes['items']:<4} {r.elapsed_ms:.1f} ms")

# %% the four nets and the normalizer index of each stabilizer G(K_tau)
from modlat.nets import enumerate_nets
from modlat.verify import verify_theorem2

for tau in enumerate_nets(inst):
    v = verify_theorem2(inst, tau, reports)
    print(tau.off_diagonal(), v.outcome, "index", v.details["index"])

# %% subgroups between H and G, placed in their sandwiches
from modlat.verify import bv_classify

c = bv_classify(inst)
print(c.to_text())
