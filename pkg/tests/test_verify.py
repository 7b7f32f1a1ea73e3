import json

import numpy as np
import pytest

from modlat.conditions import ConditionReport, check_all
from modlat.errors import PreconditionsNotChecked
from modlat.models import FIXTURES, gl_instance
from modlat.nets import enumerate_nets, zero_net
from modlat.verify import (all_nets_theorem2, bv_classify, enumerate_intermediate,
                           hypotheses_status, sigma_monotone, sublattices_of, verify_lemma1,
                           verify_lemma2, verify_theorem1)
import oracles


def all_hold():
    return [ConditionReport(k, "holds") for k in range(1, 17)]


@pytest.fixture(scope="module")
def f7_subgroups(f7):
    return enumerate_intermediate(f7.G, f7.H)


def test_intermediate_subgroups_match_oracle(f7, f7_subgroups):
    # the oracle works with 2x2 matrices mod 7 containing diagonal matrices and scalars
    orders = [F.order for F in f7_subgroups]
    kernel = f7.action.kernel_order
    assert [o * kernel for o in orders] == sorted(map(len, oracles.intermediate_subgroups_gl2(7)))
    assert orders == [6, 12, 42, 42, 336]


@pytest.mark.parametrize("p", [2, 3])
def test_intermediate_counts_small_fields(p):
    inst = gl_instance(f"F{p}", 2)
    subs = enumerate_intermediate(inst.G, inst.H)
    assert len(subs) == len(oracles.intermediate_subgroups_gl2(p))


def test_intermediate_family_is_closed(f7, f7_subgroups):
    keys = [frozenset(np.flatnonzero(F.mask_in(f7.G)).tolist()) for F in f7_subgroups]
    for a in keys:
        for b in keys:
            assert a & b in keys
    assert enumerate_intermediate(f7.G, f7.G)[0].same_elements(f7.G)


def test_sublattices(f7):
    subs = sublattices_of(f7, f7.l0_prime)
    assert all(len(s) >= 1 for s in subs)
    assert frozenset(f7.l0_prime) in subs


def test_theorem1_holds_on_f7(f7, f7_reports, f7_subgroups):
    for F in f7_subgroups:
        v = verify_theorem1(f7, F, f7_reports)
        assert v.outcome == "holds", v
        assert v.details["entailed"]


def test_theorem1_requires_reports(f7, f7_subgroups):
    with pytest.raises(PreconditionsNotChecked):
        verify_theorem1(f7, f7_subgroups[0])
    with pytest.raises(PreconditionsNotChecked):
        verify_theorem1(f7, f7_subgroups[0], all_hold()[:5])
    assert hypotheses_status(all_hold(), range(1, 13)) == (True, [])


def test_theorem1_skipped_and_unconditional_on_f3(f3):
    reports = check_all(f3)
    subs = enumerate_intermediate(f3.G, f3.H)
    assert all(verify_theorem1(f3, F, reports).outcome == "skipped" for F in subs)
    forced = [verify_theorem1(f3, F, reports, unconditional=True) for F in subs]
    assert {v.outcome for v in forced} == {"holds", "fails"}


def test_false_reports_expose_definition_mismatch(f3):
    # pretending every condition holds turns the F3 failure into a mismatch
    subs = enumerate_intermediate(f3.G, f3.H)
    outcomes = {verify_theorem1(f3, F, all_hold()).outcome for F in subs}
    assert "definition-mismatch" in outcomes


def test_theorem2_indices_on_f7(f7, f7_reports):
    verdicts = all_nets_theorem2(f7, f7_reports)
    assert all(v.ok for v in verdicts)
    by_tau = {v.target: v.details["index"] for v in verdicts}
    assert by_tau[str(zero_net(f7).off_diagonal())] == 2
    assert sorted(by_tau.values()) == [1, 1, 1, 2]
    v = verdicts[0]
    assert json.loads(json.dumps(v.to_json()))["statement"] == "theorem2"


def test_lemmas_on_z49(z49):
    reports = check_all(z49)
    v1 = verify_lemma1(z49, reports)
    assert v1.ok and v1.details["entailed"]
    for t in enumerate_nets(z49):
        assert verify_lemma2(z49, t, reports).ok


def test_lemmas_on_z4(z4):
    assert verify_lemma1(z4).ok
    assert all(verify_lemma2(z4, t).ok for t in enumerate_nets(z4))


def test_lemma1_not_entailed_on_adversarial_fixture():
    inst = FIXTURES["m4-swap"].build()
    v = verify_lemma1(inst, check_all(inst))
    assert v.details["entailed"] is False


def test_classification_f7(f7, f7_subgroups):
    c = bv_classify(f7, f7_subgroups)
    assert c.ok and not c.expect_failure
    assert c.interval_sizes() == [2, 1, 1, 1]
    text = c.to_text()
    assert "sandwich: holds" in text and all(line == line.rstrip() for line in text.splitlines())


def test_classification_f3_expect_failure(f3):
    c = bv_classify(f3)
    assert c.expect_failure and not c.sandwich_holds


def test_classification_rank_one():
    inst = gl_instance("F7", 1)
    c = bv_classify(inst)
    assert c.ok and c.interval_sizes() == [1]


def test_sigma_monotone(f7, f7_subgroups):
    assert sigma_monotone(f7, f7_subgroups) == []
