"""The finite Boolean sublattice L0 spanned by a partition of the top.

Components are ``[x]_j = (x + ê_j) · e_j``.  In a submodule lattice with the
coordinate frame this is the j-th coordinate projection, and modularity
gives monotonicity and ``[x]_j = x`` for ``x <= e_j``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import Condition1Violation, DegenerateAtom, NotBoolean
from .lattice import FiniteLattice, chain_length, coatoms_of, join_all, lattice_from_order, meet_all


@dataclass(frozen=True, eq=False)
class BooleanFrame:
    lattice: FiniteLattice
    atoms: tuple[int, ...]
    complements: tuple[int, ...]
    # frame_elements[mask] = join of the atoms whose bits are set in mask
    frame_elements: tuple[int, ...]
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return len(self.atoms)

    def subset_join(self, indices) -> int:
        mask = 0
        for i in indices:
            mask |= 1 << i
        return self.frame_elements[mask]

    @cached_property
    def components(self) -> np.ndarray:
        """Table ``comp[x, j] = [x]_j`` for every element x."""
        lat = self.lattice
        comp = np.empty((lat.size, self.n), dtype=np.int64)
        for j, (e, ehat) in enumerate(zip(self.atoms, self.complements)):
            comp[:, j] = lat.meet[lat.join[:, ehat], e]
        comp.setflags(write=False)
        return comp

    @cached_property
    def l0(self) -> frozenset[int]:
        return frozenset(self.frame_elements)


def build_frame(lat: FiniteLattice, atoms) -> BooleanFrame:
    atoms = tuple(int(a) for a in atoms)
    n = len(atoms)
    for i in range(n):
        for j in range(i + 1, n):
            if lat.meet[atoms[i], atoms[j]] != lat.bottom:
                raise NotBoolean(f"atoms {atoms[i]} and {atoms[j]} are not disjoint")
    joins = []
    for mask in range(1 << n):
        joins.append(join_all(lat, (atoms[i] for i in range(n) if mask >> i & 1)))
    if len(set(joins)) != len(joins):
        raise NotBoolean("distinct atom subsets have equal joins")
    index = {x: m for m, x in enumerate(joins)}
    for m1 in range(1 << n):
        for m2 in range(1 << n):
            x, y = joins[m1], joins[m2]
            if index.get(int(lat.meet[x, y])) != (m1 & m2) or index.get(int(lat.join[x, y])) != (m1 | m2):
                raise NotBoolean("atom joins do not form a Boolean algebra")
    if joins[-1] != lat.top:
        raise Condition1Violation(f"atoms join to {joins[-1]}, not the top {lat.top}")
    full = (1 << n) - 1
    complements = tuple(joins[full & ~(1 << i)] for i in range(n))
    return BooleanFrame(lat, atoms, complements, tuple(joins))


def component(frame: BooleanFrame, x: int, j: int) -> int:
    """``[x]_j``, the j-th component of x."""
    return int(frame.components[x, j])


def component_vector(frame: BooleanFrame, x: int) -> tuple[int, ...]:
    return tuple(int(c) for c in frame.components[x])


def l0_prime(frame: BooleanFrame) -> frozenset[int]:
    """Decomposable elements: those equal to the join of their components."""
    key = "l0_prime"
    if key not in frame._cache:
        lat = frame.lattice
        frame._cache[key] = frozenset(
            x for x in lat.elements() if join_all(lat, frame.components[x]) == x)
    return frame._cache[key]


def radical_elements(frame: BooleanFrame) -> tuple[tuple[int, ...], int]:
    """``(w_1..w_n, w)``: meets of the coatoms of each [0, e_i] and their join."""
    key = "radicals"
    if key not in frame._cache:
        lat = frame.lattice
        ws = []
        for e in frame.atoms:
            if e == lat.bottom:
                raise DegenerateAtom(f"atom {e} is the bottom element")
            ws.append(meet_all(lat, coatoms_of(lat, lat.bottom, e)))
        frame._cache[key] = (tuple(ws), join_all(lat, ws))
    return frame._cache[key]


@dataclass(frozen=True, eq=False)
class IntervalView:
    """An interval [low, high] of a parent lattice.

    ``elements[k]`` is the parent id of element k of ``lattice``.
    """
    parent: FiniteLattice
    low: int
    high: int
    elements: tuple[int, ...]
    lattice: FiniteLattice

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def length(self) -> int:
        return chain_length(self.parent, self.low, self.high)

    def __contains__(self, x) -> bool:
        return bool(self.parent.leq[self.low, x] and self.parent.leq[x, self.high])


def interval_view(lat: FiniteLattice, low: int, high: int) -> IntervalView:
    ids = lat.interval(low, high)
    sub = lattice_from_order(lat.leq[np.ix_(ids, ids)])
    return IntervalView(lat, low, high, tuple(int(i) for i in ids), sub)


def upper_lattice(frame: BooleanFrame) -> IntervalView:
    """``L^w``, the interval [w, 1] above the radical element."""
    _, w = radical_elements(frame)
    return interval_view(frame.lattice, w, frame.lattice.top)
