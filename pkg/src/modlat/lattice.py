"""Finite bounded lattices with dense order, meet and join tables.

Every lattice here is finite, so completeness is automatic: arbitrary
suprema and infima are finite folds of the binary operations.
"""
from __future__ import annotations

from collections import deque
from typing import Iterable

import numpy as np

from .errors import BadInterval, CyclicCovers, NotALattice, SizeCap

DEFAULT_MAX_ELEMENTS = 20_000


class FiniteLattice:
    """Immutable finite lattice on element ids ``0..n-1``.

    ``leq[a, b]`` is True iff a <= b.  ``meet`` and ``join`` are full
    ``n x n`` tables.  ``covers`` is the canonical sorted Hasse diagram.
    """

    def __init__(self, leq, meet, join, covers, bottom, top, order):
        self.leq = leq
        self.meet = meet
        self.join = join
        self.covers = covers
        self.bottom = int(bottom)
        self.top = int(top)
        # a linear extension of the order (position -> element)
        self.order = order
        for arr in (leq, meet, join, order):
            arr.setflags(write=False)
        self._upper_covers = None

    @property
    def size(self) -> int:
        return self.leq.shape[0]

    def __len__(self):
        return self.size

    def __repr__(self):
        return f"FiniteLattice(size={self.size}, covers={len(self.covers)})"

    def elements(self) -> range:
        return range(self.size)

    def upper_covers(self, x: int) -> list[int]:
        if self._upper_covers is None:
            up = [[] for _ in range(self.size)]
            for a, b in self.covers:
                up[a].append(b)
            self._upper_covers = up
        return self._upper_covers[x]

    def interval(self, a: int, b: int) -> np.ndarray:
        """Sorted ids of the interval [a, b]."""
        if not self.leq[a, b]:
            raise BadInterval(f"{a} is not below {b}")
        return np.flatnonzero(self.leq[a] & self.leq[:, b])

    def down_set(self, x: int) -> np.ndarray:
        return np.flatnonzero(self.leq[:, x])

    def up_set(self, x: int) -> np.ndarray:
        return np.flatnonzero(self.leq[x])


def _topological_order(n, covers):
    indeg = np.zeros(n, dtype=np.int64)
    succ = [[] for _ in range(n)]
    for a, b in covers:
        succ[a].append(b)
        indeg[b] += 1
    queue = deque(i for i in range(n) if indeg[i] == 0)
    order = []
    while queue:
        x = queue.popleft()
        order.append(x)
        for y in succ[x]:
            indeg[y] -= 1
            if indeg[y] == 0:
                queue.append(y)
    if len(order) != n:
        raise CyclicCovers("cover relation contains a cycle")
    return np.array(order, dtype=np.int64), succ


def _bound_table(leq, pos, kind):
    # For "meet": candidates are common lower bounds, pick the one latest in
    # the linear extension and check it dominates every other lower bound.
    n = leq.shape[0]
    table = np.empty((n, n), dtype=np.int32)
    rel = leq if kind == "meet" else leq.T
    score_base = pos if kind == "meet" else -pos
    for a in range(n):
        common = rel[:, a][:, None] & rel  # common[c, b]: c below both a and b
        score = np.where(common, score_base[:, None], np.iinfo(np.int64).min)
        cand = score.argmax(axis=0)
        if not common[cand, np.arange(n)].all():
            b = int(np.flatnonzero(~common[cand, np.arange(n)])[0])
            raise NotALattice((a, b), kind)
        bad = (common & ~rel[:, cand]).any(axis=0)
        if bad.any():
            raise NotALattice((a, int(np.flatnonzero(bad)[0])), kind)
        table[a] = cand
    return table


def _order_from_covers(n, covers):
    order, succ = _topological_order(n, covers)
    leq = np.eye(n, dtype=bool)
    for x in order[::-1]:
        for y in succ[x]:
            leq[x] |= leq[y]
    return leq, order


def hasse_covers(leq: np.ndarray) -> list[tuple[int, int]]:
    """Cover pairs (a, b), a covered by b, of a partial order matrix."""
    strict = leq & ~np.eye(leq.shape[0], dtype=bool)
    si = strict.astype(np.int32)
    two_step = (si @ si) > 0
    cov = strict & ~two_step
    return [(int(a), int(b)) for a, b in zip(*np.nonzero(cov))]


def build_lattice(covers: Iterable[tuple[int, int]], n: int | None = None,
                  max_elements: int = DEFAULT_MAX_ELEMENTS) -> FiniteLattice:
    """Build and validate a lattice from an order-generating relation.

    ``covers`` may contain redundant (transitive) pairs; the stored cover
    list is the canonical Hasse diagram.
    """
    pairs = [(int(a), int(b)) for a, b in covers]
    if n is None:
        n = 1 + max((max(p) for p in pairs), default=0)
    if n <= 0:
        raise ValueError("a lattice needs at least one element")
    if n > max_elements:
        raise SizeCap(f"{n} elements exceeds cap {max_elements}")
    for a, b in pairs:
        if not (0 <= a < n and 0 <= b < n):
            raise ValueError(f"cover ({a}, {b}) out of range for {n} elements")
        if a == b:
            raise CyclicCovers(f"self-cover at {a}")
    leq, order = _order_from_covers(n, pairs)
    pos = np.empty(n, dtype=np.int64)
    pos[order] = np.arange(n)
    meet = _bound_table(leq, pos, "meet")
    join = _bound_table(leq, pos, "join")
    bottom = _fold(meet, range(n), int(order[-1]))
    top = _fold(join, range(n), int(order[0]))
    return FiniteLattice(leq, meet, join, hasse_covers(leq), bottom, top, order)


def lattice_from_order(leq: np.ndarray, **kw) -> FiniteLattice:
    return build_lattice(hasse_covers(np.asarray(leq, dtype=bool)), n=leq.shape[0], **kw)


def _fold(table, items, start):
    acc = start
    for x in items:
        acc = int(table[acc, x])
    return acc


def join_all(lat: FiniteLattice, subset: Iterable[int]) -> int:
    """Least upper bound of ``subset``; the empty join is the bottom."""
    return _fold(lat.join, subset, lat.bottom)


def meet_all(lat: FiniteLattice, subset: Iterable[int]) -> int:
    """Greatest lower bound of ``subset``; the empty meet is the top."""
    return _fold(lat.meet, subset, lat.top)


def is_modular(lat: FiniteLattice):
    """Return ``(True, None)`` or ``(False, (a, x, b))`` with a <= b and
    a + x*b != (a + x)*b."""
    n = lat.size
    xs = np.arange(n)
    for a in range(n):
        bs = np.flatnonzero(lat.leq[a])
        lhs = lat.join[a][lat.meet[np.ix_(xs, bs)]]
        rhs = lat.meet[lat.join[a][:, None], bs[None, :]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            x, k = bad[0]
            return False, (a, int(x), int(bs[k]))
    return True, None


def check_modular_triple(lat: FiniteLattice, triple) -> bool:
    """True when the triple (a, x, b) violates the modular law."""
    a, x, b = triple
    return bool(lat.leq[a, b]) and lat.join[a, lat.meet[x, b]] != lat.meet[lat.join[a, x], b]


def atoms_of(lat: FiniteLattice, a: int, b: int) -> list[int]:
    """Atoms of the interval [a, b]."""
    if not lat.leq[a, b]:
        raise BadInterval(f"{a} is not below {b}")
    return sorted(c for c in lat.upper_covers(a) if lat.leq[c, b])


def coatoms_of(lat: FiniteLattice, a: int, b: int) -> list[int]:
    """Coatoms of the interval [a, b]."""
    if not lat.leq[a, b]:
        raise BadInterval(f"{a} is not below {b}")
    return sorted(c for c, d in lat.covers if d == b and lat.leq[a, c])


def sublattice_closure(lat: FiniteLattice, subset: Iterable[int]) -> frozenset[int]:
    """Smallest superset of ``subset`` closed under binary meet and join."""
    current = np.unique(np.fromiter(subset, dtype=np.int64))
    while True:
        grid = np.ix_(current, current)
        nxt = np.union1d(np.union1d(current, lat.meet[grid].ravel()), lat.join[grid].ravel())
        if len(nxt) == len(current):
            return frozenset(int(x) for x in current)
        current = nxt


def is_sublattice(lat: FiniteLattice, subset: Iterable[int]) -> bool:
    s = np.fromiter(subset, dtype=np.int64)
    if len(s) == 0:
        return True
    grid = np.ix_(s, s)
    return bool(np.isin(lat.meet[grid], s).all() and np.isin(lat.join[grid], s).all())


def chain_length(lat: FiniteLattice, a: int, b: int) -> int:
    """Length (number of covers) of the longest chain in [a, b]."""
    if not lat.leq[a, b]:
        raise BadInterval(f"{a} is not below {b}")
    inside = lat.leq[a] & lat.leq[:, b]
    height = {a: 0}
    for x in lat.order:
        x = int(x)
        if x not in height:
            continue
        for y in lat.upper_covers(x):
            if inside[y]:
                height[y] = max(height.get(y, 0), height[x] + 1)
    return height[b]


def is_order_automorphism(lat: FiniteLattice, perm) -> bool:
    """True iff ``perm`` is a bijection with x <= y <=> perm[x] <= perm[y]."""
    p = np.asarray(perm)
    if p.shape != (lat.size,) or not np.array_equal(np.sort(p), np.arange(lat.size)):
        return False
    return bool(np.array_equal(lat.leq[np.ix_(p, p)], lat.leq))


def lattice_from_relation(elements, le) -> tuple[FiniteLattice, list]:
    """Build a lattice from Python objects and a ``le(x, y)`` predicate.

    Returns the lattice and the element list in id order.
    """
    elements = list(elements)
    n = len(elements)
    leq = np.array([[bool(le(x, y)) for y in elements] for x in elements])
    return lattice_from_order(leq), elements
