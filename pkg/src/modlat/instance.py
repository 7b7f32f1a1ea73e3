"""A concrete (L, L0, G) triple with cached derived objects."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .autgroup import (AutGroup, DEFAULT_BUDGET, fixed_elements, frame_stabilizer, gw_subgroup,
                       h_i_set, transvection_labels)
from .errors import NonFaithfulFrame
from .frame import BooleanFrame, l0_prime, radical_elements, upper_lattice


@dataclass(eq=False)
class Instance:
    name: str
    frame: BooleanFrame
    G: AutGroup
    H: AutGroup | None = None
    action: object = None
    budget: int = DEFAULT_BUDGET
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        stab = frame_stabilizer(self.G, self.frame)
        if self.H is None:
            self.H = stab
        elif not self.H.same_elements(stab):
            raise NonFaithfulFrame("supplied H differs from G(L0)")

    def __repr__(self):
        return f"Instance({self.name!r}, |L|={self.lattice.size}, |G|={self.G.order}, |H|={self.H.order})"

    @property
    def lattice(self):
        return self.frame.lattice

    @property
    def n(self) -> int:
        return self.frame.n

    @property
    def atoms(self) -> tuple[int, ...]:
        return self.frame.atoms

    @property
    def comp(self) -> np.ndarray:
        return self.frame.components

    @cached_property
    def l0_prime(self) -> frozenset[int]:
        return l0_prime(self.frame)

    @cached_property
    def lbar0(self) -> frozenset[int]:
        """Elements fixed by every member of H."""
        return fixed_elements(self.H)

    @property
    def radicals(self):
        return radical_elements(self.frame)

    @cached_property
    def upper(self):
        return upper_lattice(self.frame)

    @cached_property
    def gw(self) -> AutGroup:
        return gw_subgroup(self.G, self.frame)

    def h_i(self, i: int) -> AutGroup:
        key = ("H_i", i)
        if key not in self._cache:
            self._cache[key] = h_i_set(self.G, self.frame, i, H=self.H)
        return self._cache[key]

    def labels(self, i: int, j: int) -> np.ndarray:
        """Per-element x with g in H_ij(x), or -1."""
        key = ("labels", i, j)
        if key not in self._cache:
            self._cache[key] = transvection_labels(self.G, self.frame, i, j)
        return self._cache[key]

    def hij_indices(self, i: int, j: int, x: int) -> np.ndarray:
        return np.flatnonzero(self.labels(i, j) == x)

    def hij_nonempty(self, i: int, j: int) -> frozenset[int]:
        """The x with H_ij(x) nonempty."""
        key = ("nonempty", i, j)
        if key not in self._cache:
            lab = self.labels(i, j)
            self._cache[key] = frozenset(int(x) for x in np.unique(lab[lab >= 0]))
        return self._cache[key]

    def below(self, x: int) -> np.ndarray:
        return self.lattice.down_set(x)

    def pairs(self):
        return [(i, j) for i in range(self.n) for j in range(self.n) if i != j]
