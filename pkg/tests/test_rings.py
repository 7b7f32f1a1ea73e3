import pytest

from modlat.errors import ParseError, SizeCap
from modlat.rings import build_ring, check_ring_axioms
from oracles import units_mod


@pytest.mark.parametrize("spec", ["Z/2", "Z/12", "Z/49", "F4", "F8", "F9", "F7 x F7", "Z/4xF3"])
def test_axioms_hold(spec):
    assert check_ring_axioms(build_ring(spec))


def test_z49_structure():
    R = build_ring("Z/49")
    assert len(R.units) == len(units_mod(49)) == 42
    assert [len(I) for I in R.ideals] == [1, 7, 49]
    assert R.residue_field_sizes == (7,)
    assert R.is_local and not R.is_field
    assert R.gl_order(2) == 4840416


def test_fields():
    for q in (2, 3, 4, 5, 7, 8, 9):
        R = build_ring(f"F{q}")
        assert R.is_field and len(R.units) == q - 1 and R.residue_field_sizes == (q,)


def test_semilocal_product():
    R = build_ring("F7 x F7")
    assert len(R.ideals) == 4
    assert R.residue_field_sizes == (7, 7)
    assert not R.is_local
    assert R.gl_order(1) == 36


def test_gl_orders_match_counts():
    from oracles import invertible_2x2
    for m in (2, 3, 4, 6, 7):
        assert build_ring(f"Z/{m}").gl_order(2) == len(invertible_2x2(m))


def test_generators_reach_everything():
    R = build_ring("Z/12")
    gens = R.unit_group_generators()
    reached = {R.one}
    for _ in range(12):
        reached |= {int(R.mul[a, g]) for a in reached for g in gens}
    assert reached == set(R.units)
    assert build_ring("Z/49").additive_generators() == [1]


def test_ideal_generated():
    R = build_ring("Z/12")
    assert R.ideal_generated([4, 6]) == frozenset(range(0, 12, 2))
    assert R.ideal_generated([]) == frozenset({0})


@pytest.mark.parametrize("bad", ["", "Q", "Z/", "F6", "F1", "Z/1", "F7 x", "F7 xx F7"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        build_ring(bad)


def test_size_cap():
    with pytest.raises(SizeCap):
        build_ring("Z/101 x Z/101", max_size=10_000)
