import numpy as np
import pytest

from modlat.errors import Condition1Violation, NotBoolean
from modlat.frame import (build_frame, component, component_vector, interval_view, l0_prime,
                          radical_elements, upper_lattice)
from modlat.models import chain, m_lattice
from modlat.modules import submodule_lattice
from modlat.rings import build_ring


def projection_id(M, x, j):
    """Submodule spanned by the j-th coordinates of the members of x."""
    vecs = []
    for v in M.members(x):
        w = [0] * M.n
        w[j] = int(v[j])
        vecs.append(w)
    return M.span(vecs)


@pytest.mark.parametrize("ring", ["F7", "Z/4", "Z/9", "F2xF3"])
def test_component_is_coordinate_projection(ring):
    M = submodule_lattice(build_ring(ring), 2)
    for x in range(M.lattice.size):
        for j in range(2):
            assert component(M.frame, x, j) == projection_id(M, x, j)


def test_frame_elements_and_complements():
    M = submodule_lattice(build_ring("F7"), 2)
    fr = M.frame
    lat = M.lattice
    assert fr.frame_elements[0] == lat.bottom and fr.frame_elements[-1] == lat.top
    assert fr.complements == (fr.atoms[1], fr.atoms[0])
    assert len(fr.l0) == 4
    assert component_vector(fr, lat.top) == fr.atoms


def test_decomposables_in_field_and_local_models():
    assert len(l0_prime(submodule_lattice(build_ring("F7"), 2).frame)) == 4
    # pairs (I e_1 + J e_2) of ideals of Z/49
    assert len(l0_prime(submodule_lattice(build_ring("Z/49"), 2).frame)) == 9


def test_not_boolean_and_condition1():
    with pytest.raises(NotBoolean):
        build_frame(chain(3), (1, 2))
    with pytest.raises(NotBoolean):
        build_frame(m_lattice(3), (1, 1))
    with pytest.raises(Condition1Violation):
        build_frame(chain(2), (1,))


def test_radicals_of_z49_are_seven_times_module():
    M = submodule_lattice(build_ring("Z/49"), 2)
    ws, w = radical_elements(M.frame)
    members = {tuple(int(c) for c in v) for v in M.members(w)}
    assert members == {(a, b) for a in range(0, 49, 7) for b in range(0, 49, 7)}
    for j, wj in enumerate(ws):
        assert M.members(wj).shape[0] == 7
    up = upper_lattice(M.frame)
    assert up.size == 10 and up.length == 2
    assert w in up and M.lattice.bottom not in up


def test_radicals_of_fields_are_zero():
    M = submodule_lattice(build_ring("F7"), 2)
    ws, w = radical_elements(M.frame)
    assert w == M.lattice.bottom and set(ws) == {M.lattice.bottom}


def test_interval_view_relabels():
    lat = m_lattice(3)
    view = interval_view(lat, 1, 4)
    assert view.elements == (1, 4)
    assert view.lattice.size == 2 and view.length == 1
    assert np.array_equal(view.lattice.leq, np.array([[True, True], [False, True]]))
