"""
Where the hypotheses break: F2 and F3
=====================================

Over F2 no diagonal matrix separates the two frame atoms, so condition 4
fails.  Over F3 condition 11 fails, and the subgroup classification fails
with it.
"""

# %% failing conditions come with replayable witnesses
from modlat import gl_instance
from modlat.conditions import check_all, replay

for ring in ("F2", "F3"):
    inst = gl_instance(ring, 2)
    bad = [r for r in check_all(inst) if not r.holds]
    for r in bad:
        print(ring, "fails", r.condition, r.witness, "replays:", replay(inst, r.witness))

# %% theorem 1 is skipped by default and can be forced
from modlat.verify import enumerate_intermediate, verify_theorem1

inst = gl_instance("F3", 2)
reports = check_all(inst)
for F in enumerate_intermediate(inst.G, inst.H):
    skipped = verify_theorem1(inst, F, reports).outcome
    forced = verify_theorem1(inst, F, reports, unconditional=True)
    print(f"|F|={F.order:>3} default={skipped:<8} forced={forced.outcome:<6} {forced.clauses}")

# %% the classification runs in expect-failure mode
from modlat.verify import bv_classify

print(bv_classify(inst).to_text())
