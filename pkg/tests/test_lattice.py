import itertools

import numpy as np
import pytest

from modlat.errors import BadInterval, CyclicCovers, NotALattice, SizeCap
from modlat.lattice import (atoms_of, build_lattice, chain_length, check_modular_triple,
                            coatoms_of, is_modular, is_order_automorphism, is_sublattice,
                            join_all, lattice_from_relation, meet_all, sublattice_closure)
from modlat.models import chain, m_lattice, pentagon


def boolean_lattice(k):
    subsets = [frozenset(s) for r in range(k + 1) for s in itertools.combinations(range(k), r)]
    return lattice_from_relation(subsets, lambda a, b: a <= b)


def test_boolean_tables_match_set_operations():
    lat, elems = boolean_lattice(3)
    for a, b in itertools.product(range(lat.size), repeat=2):
        assert elems[lat.meet[a, b]] == elems[a] & elems[b]
        assert elems[lat.join[a, b]] == elems[a] | elems[b]
    assert elems[lat.bottom] == frozenset() and elems[lat.top] == frozenset(range(3))


def test_divisor_lattice_uses_gcd_and_lcm():
    from math import gcd
    divisors = [d for d in range(1, 37) if 36 % d == 0]
    lat, elems = lattice_from_relation(divisors, lambda a, b: b % a == 0)
    for a, b in itertools.product(range(lat.size), repeat=2):
        x, y = elems[a], elems[b]
        assert elems[lat.meet[a, b]] == gcd(x, y)
        assert elems[lat.join[a, b]] == x * y // gcd(x, y)


def test_redundant_covers_are_reduced_to_hasse_diagram():
    lat = build_lattice([(0, 1), (1, 2), (0, 2)])
    assert lat.covers == [(0, 1), (1, 2)]


def test_missing_join_is_reported():
    with pytest.raises(NotALattice) as info:
        build_lattice([(0, 1), (0, 2)])
    assert info.value.kind == "join"


def test_two_maximal_and_two_minimal_elements():
    # 0,1 below both 2 and 3: no meet of 2, 3 exists either
    with pytest.raises(NotALattice):
        build_lattice([(0, 2), (0, 3), (1, 2), (1, 3)])


def test_cycles_and_caps():
    with pytest.raises(CyclicCovers):
        build_lattice([(0, 1), (1, 0)])
    with pytest.raises(CyclicCovers):
        build_lattice([(0, 0)])
    with pytest.raises(SizeCap):
        build_lattice([(i, i + 1) for i in range(30)], max_elements=10)
    with pytest.raises(ValueError):
        build_lattice([(0, 5)], n=3)


def test_single_element_lattice():
    lat = build_lattice([], n=1)
    assert lat.bottom == lat.top == 0
    assert chain_length(lat, 0, 0) == 0


def test_pentagon_is_not_modular_and_triple_replays():
    lat = pentagon()
    ok, triple = is_modular(lat)
    assert not ok
    assert check_modular_triple(lat, triple)


def test_m3_and_boolean_are_modular():
    assert is_modular(m_lattice(3))[0]
    assert is_modular(boolean_lattice(3)[0])[0]


def test_atoms_coatoms_and_length():
    lat = m_lattice(4)
    assert atoms_of(lat, 0, 5) == [1, 2, 3, 4]
    assert coatoms_of(lat, 0, 5) == [1, 2, 3, 4]
    assert chain_length(lat, 0, 5) == 2
    assert chain_length(chain(5), 1, 4) == 3
    with pytest.raises(BadInterval):
        lat.interval(1, 2)
    assert list(lat.interval(0, 1)) == [0, 1]


def test_empty_folds_are_bounds():
    lat = m_lattice(3)
    assert join_all(lat, []) == lat.bottom
    assert meet_all(lat, []) == lat.top
    assert join_all(lat, [1, 2]) == lat.top


def test_sublattice_closure():
    lat = m_lattice(3)
    assert sublattice_closure(lat, [1, 2]) == frozenset({0, 1, 2, 4})
    assert is_sublattice(lat, [0, 1, 4])
    assert not is_sublattice(lat, [1, 2])


def test_order_automorphism_validator():
    lat = m_lattice(3)
    assert is_order_automorphism(lat, [0, 2, 3, 1, 4])
    assert not is_order_automorphism(lat, [1, 0, 2, 3, 4])
    assert not is_order_automorphism(lat, [0, 1, 2, 3])
    assert not is_order_automorphism(lat, [0, 1, 1, 3, 4])


def test_tables_are_read_only():
    lat = m_lattice(2)
    with pytest.raises(ValueError):
        lat.meet[0, 0] = 1
    assert np.array_equal(lat.meet, lat.meet.T)
