"""Groups of lattice automorphisms stored as permutation arrays.

A group is a canonically sorted ``(order, N)`` integer array whose rows are
permutations of the lattice element ids.  Composition is ``(g*h)(x) =
g(h(x))``, i.e. ``g[h]`` on rows.  Membership tests go through 64-bit
linear row hashes and are always confirmed by exact row comparison.
"""
from __future__ import annotations

import hashlib
from typing import Iterable

import numpy as np

from .errors import (BadIndices, ClosureBudgetExceeded, NotAnAutomorphism, NotSubgroup,
                     XNotUnderAtom)
from .lattice import FiniteLattice, is_order_automorphism

DEFAULT_BUDGET = 10**6
_CHUNK = 1 << 15


def perm_dtype(n: int):
    return np.int16 if n < 2**15 else np.int32


_weight_cache: dict[int, np.ndarray] = {}


def _weights(n: int) -> np.ndarray:
    if n not in _weight_cache:
        rng = np.random.default_rng(0x6A09E667)
        _weight_cache[n] = rng.integers(1, 2**63, size=n, dtype=np.uint64) | np.uint64(1)
    return _weight_cache[n]


def row_keys(rows: np.ndarray) -> np.ndarray:
    rows = np.atleast_2d(rows)
    w = _weights(rows.shape[1])
    with np.errstate(over="ignore"):
        return (rows.astype(np.uint64) * w).sum(axis=1, dtype=np.uint64)


def canonical_sort(rows: np.ndarray) -> np.ndarray:
    if len(rows) <= 1:
        return rows
    return rows[np.lexsort(rows.T[::-1])]


def compose(g: np.ndarray, h: np.ndarray) -> np.ndarray:
    """``g * h`` (apply h first).  Either argument may be a stack of rows."""
    if g.ndim == 1:
        return g[h]
    if h.ndim == 1:
        return g[:, h]
    return np.take_along_axis(g, h, axis=1)


def invert(rows: np.ndarray) -> np.ndarray:
    return np.argsort(rows, axis=-1).astype(rows.dtype)


def identity_perm(n: int) -> np.ndarray:
    return np.arange(n, dtype=perm_dtype(n))


def as_automorphism(lat: FiniteLattice, images) -> np.ndarray:
    """Validate ``images`` as an order automorphism of ``lat``."""
    p = np.asarray(images, dtype=perm_dtype(lat.size))
    if not is_order_automorphism(lat, p):
        raise NotAnAutomorphism(f"{list(map(int, p))} is not an order automorphism")
    return p


class AutGroup:
    """A finite group of automorphisms of one lattice."""

    def __init__(self, lattice: FiniteLattice, perms, generators=None, parent=None,
                 presorted=False):
        perms = np.asarray(perms, dtype=perm_dtype(lattice.size)).reshape(-1, lattice.size)
        if not presorted:
            perms = canonical_sort(perms)
        perms.setflags(write=False)
        self.lattice = lattice
        self.perms = perms
        self.parent = parent
        self._generators = None if generators is None else np.asarray(generators, dtype=perms.dtype).reshape(-1, lattice.size)
        keys = row_keys(perms)
        self._key_order = np.argsort(keys, kind="stable")
        self._sorted_keys = keys[self._key_order]
        self._inverse_idx = None

    @property
    def order(self) -> int:
        return len(self.perms)

    def __len__(self):
        return self.order

    def __iter__(self):
        return iter(self.perms)

    def __repr__(self):
        return f"AutGroup(order={self.order}, degree={self.lattice.size})"

    def index(self, rows) -> np.ndarray:
        """Row indices of ``rows`` in this group, -1 where absent."""
        rows = np.atleast_2d(np.asarray(rows))
        keys = row_keys(rows)
        pos = np.searchsorted(self._sorted_keys, keys)
        pos = np.minimum(pos, len(self._sorted_keys) - 1)
        idx = self._key_order[pos]
        hit = (self._sorted_keys[pos] == keys) & (self.perms[idx] == rows).all(axis=1)
        return np.where(hit, idx, -1)

    def contains(self, rows) -> np.ndarray:
        return self.index(rows) >= 0

    def __contains__(self, perm) -> bool:
        return bool(self.contains(perm)[0])

    def issubset(self, other: "AutGroup") -> bool:
        return bool(all(other.contains(chunk).all() for chunk in _chunks(self.perms)))

    def same_elements(self, other: "AutGroup") -> bool:
        return self.order == other.order and self.issubset(other)

    def mask_in(self, parent: "AutGroup") -> np.ndarray:
        mask = np.zeros(parent.order, dtype=bool)
        idx = np.concatenate([parent.index(c) for c in _chunks(self.perms)])
        if (idx < 0).any():
            raise NotSubgroup("group is not contained in the given parent")
        mask[idx] = True
        return mask

    def subgroup(self, mask) -> "AutGroup":
        """Subset given by a boolean mask over rows, assumed closed."""
        return AutGroup(self.lattice, self.perms[np.asarray(mask)], parent=self, presorted=True)

    @property
    def inverse_indices(self) -> np.ndarray:
        if self._inverse_idx is None:
            self._inverse_idx = np.concatenate([self.index(invert(c)) for c in _chunks(self.perms)])
        return self._inverse_idx

    @property
    def generators(self) -> np.ndarray:
        if self._generators is None:
            self._generators = _greedy_generators(self)
        return self._generators

    def digest(self) -> str:
        return hashlib.sha256(self.perms.tobytes()).hexdigest()


def _chunks(rows, size=_CHUNK):
    for s in range(0, len(rows), size):
        yield rows[s:s + size]


def _closure_mask(parent: AutGroup, gens: np.ndarray, mask=None, frontier=None,
                  budget=DEFAULT_BUDGET) -> np.ndarray:
    """Close ``mask`` (default: identity) under left multiplication by ``gens``."""
    if mask is None:
        mask = np.zeros(parent.order, dtype=bool)
        mask[0] = True  # identity sorts first
        frontier = np.array([0])
    elif frontier is None:
        frontier = np.flatnonzero(mask)
    mask = mask.copy()
    while len(frontier):
        found = []
        for block in _chunks(frontier, _CHUNK // max(1, len(gens))):
            rows = parent.perms[block]
            for g in gens:
                idx = parent.index(g[rows])
                if (idx < 0).any():
                    raise NotSubgroup("generator does not lie in the parent group")
                new = idx[~mask[idx]]
                if len(new):
                    new = np.unique(new)
                    mask[new] = True
                    found.append(new)
        if mask.sum() > budget:
            raise ClosureBudgetExceeded(f"closure exceeds {budget} elements")
        frontier = np.concatenate(found) if found else np.array([], dtype=np.int64)
    return mask


def _greedy_generators(group: AutGroup) -> np.ndarray:
    gens = []
    mask = np.zeros(group.order, dtype=bool)
    mask[0] = True
    for i in range(group.order):
        if mask[i]:
            continue
        g = group.perms[i]
        gens.append(g)
        stack = np.array(gens)
        mask = _closure_mask(group, stack, mask, frontier=np.flatnonzero(mask))
    return np.array(gens, dtype=group.perms.dtype).reshape(-1, group.lattice.size)


def generate_group(lattice: FiniteLattice, gens, budget: int = DEFAULT_BUDGET,
                   within: AutGroup | None = None, validate: bool = True) -> AutGroup:
    """Group generated by ``gens``; closed inside ``within`` when given."""
    n = lattice.size
    gens = np.asarray(gens, dtype=perm_dtype(n)).reshape(-1, n)
    if validate:
        for g in gens:
            as_automorphism(lattice, g)
    if within is not None:
        mask = np.zeros(within.order, dtype=bool)
        mask[0] = True
        kept = []
        for g in gens:
            idx = within.index(g)[0]
            if idx < 0:
                raise NotSubgroup("generator does not lie in the parent group")
            if mask[idx]:
                continue
            kept.append(g)
            mask = _closure_mask(within, np.array(kept), mask, frontier=np.flatnonzero(mask),
                                 budget=budget)
        return AutGroup(lattice, within.perms[mask], generators=np.array(kept).reshape(-1, n),
                        parent=within, presorted=True)
    return _free_closure(lattice, gens, budget)


def _free_closure(lattice, gens, budget):
    n = lattice.size
    ident = identity_perm(n)
    seen = {int(row_keys(ident)[0])}
    blocks = [ident[None, :]]
    frontier = ident[None, :]
    total = 1
    while len(frontier):
        new_rows = []
        for block in _chunks(frontier, _CHUNK // max(1, len(gens))):
            for g in gens:
                prod = g[block]
                keys = row_keys(prod)
                _, first = np.unique(keys, return_index=True)
                for k in first:
                    kk = int(keys[k])
                    if kk not in seen:
                        seen.add(kk)
                        new_rows.append(prod[k])
            if total + len(new_rows) > budget:
                raise ClosureBudgetExceeded(f"closure exceeds {budget} elements")
        frontier = np.array(new_rows, dtype=ident.dtype).reshape(-1, n)
        total += len(frontier)
        blocks.append(frontier)
    group = AutGroup(lattice, np.concatenate(blocks), generators=gens)
    # hashes only guide the search; confirm exact closure
    if len(np.unique(group.perms, axis=0)) != group.order:
        raise RuntimeError("row hash collision while closing group")
    for g in gens:
        for block in _chunks(group.perms):
            if not group.contains(g[block]).all():
                raise RuntimeError("row hash collision while closing group")
    return group


def pointwise_stabilizer(G: AutGroup, subset: Iterable[int]) -> AutGroup:
    """``G(M)``: elements of G fixing every element of M."""
    m = np.fromiter(subset, dtype=np.int64)
    if len(m) == 0:
        return G
    mask = (G.perms[:, m] == m).all(axis=1)
    return G.subgroup(mask)


def fixed_elements(perms) -> frozenset[int]:
    """Elements fixed by every automorphism in ``perms``."""
    p = np.atleast_2d(np.asarray(perms.perms if isinstance(perms, AutGroup) else perms))
    fixed = (p == np.arange(p.shape[1])).all(axis=0)
    return frozenset(int(x) for x in np.flatnonzero(fixed))


def frame_stabilizer(G: AutGroup, frame) -> AutGroup:
    """``H = G(L0)``."""
    return pointwise_stabilizer(G, sorted(frame.l0))


def transvection_labels(G: AutGroup, frame, i: int, j: int) -> np.ndarray:
    """Label each g in G by x when g lies in ``H_ij(x)``, else -1.

    g lies in ``H_ij(x)`` iff g fixes e_s for s != i, ``[g(e_i)]_i = e_i``,
    ``[g(e_i)]_j = x``, ``[g(e_i)]_k = 0`` for other k, and
    ``g(e_i) · e_j = 0``.
    """
    n = frame.n
    if not (0 <= i < n and 0 <= j < n) or i == j:
        raise BadIndices(f"bad index pair ({i}, {j}) for {n} atoms")
    lat, comp, atoms = frame.lattice, frame.components, frame.atoms
    img = G.perms[:, atoms[i]].astype(np.int64)
    ok = comp[img, i] == atoms[i]
    for s in range(n):
        if s != i:
            ok &= G.perms[:, atoms[s]] == atoms[s]
        if s not in (i, j):
            ok &= comp[img, s] == lat.bottom
    ok &= lat.meet[img, atoms[j]] == lat.bottom
    return np.where(ok, comp[img, j], -1)


def transvection_set(G: AutGroup, frame, i: int, j: int, x: int) -> np.ndarray:
    """Rows of ``H_ij(x)``."""
    if not 0 <= j < frame.n:
        raise BadIndices(f"bad index {j}")
    if not frame.lattice.leq[x, frame.atoms[j]]:
        raise XNotUnderAtom(f"{x} is not below e_{j}")
    labels = transvection_labels(G, frame, i, j)
    return G.perms[labels == x]


def h_i_set(G: AutGroup, frame, i: int, H: AutGroup | None = None) -> AutGroup:
    """``H_i``: elements of H fixing everything below ê_i."""
    if not 0 <= i < frame.n:
        raise BadIndices(f"bad index {i}")
    if H is None:
        H = frame_stabilizer(G, frame)
    return pointwise_stabilizer(H, frame.lattice.down_set(frame.complements[i]))


def gw_subgroup(G: AutGroup, frame) -> AutGroup:
    """``G^w``: elements acting trivially on the interval [w, 1]."""
    from .frame import radical_elements
    _, w = radical_elements(frame)
    return pointwise_stabilizer(G, frame.lattice.up_set(w))


def conjugates(G_rows: np.ndarray, s: np.ndarray) -> np.ndarray:
    """``g s g^-1`` for each row g."""
    return np.take_along_axis(G_rows, s[invert(G_rows)], axis=1)


def normalizer(G: AutGroup, S: AutGroup) -> AutGroup:
    """``N_G(S)``."""
    if not S.issubset(G):
        raise NotSubgroup("S is not contained in G")
    mask = np.ones(G.order, dtype=bool)
    for s in S.generators:
        for start in range(0, G.order, _CHUNK):
            block = slice(start, start + _CHUNK)
            live = np.flatnonzero(mask[block]) + start
            if len(live):
                mask[live] = S.contains(conjugates(G.perms[live], s))
    return G.subgroup(mask)


def is_normal_in(S: AutGroup, F: AutGroup) -> bool:
    """True iff S is a subgroup of F normalized by every element of F."""
    if not S.issubset(F):
        return False
    for s in S.generators:
        if not S.contains(conjugates(F.generators, s)).all():
            return False
    return True


def conjugate(g: np.ndarray, S: AutGroup) -> AutGroup:
    """``g S g^-1``."""
    ginv = invert(g)
    return AutGroup(S.lattice, g[S.perms[:, ginv]])


def product_set(A: AutGroup, B: AutGroup) -> np.ndarray:
    """Canonically sorted rows of ``{a*b : a in A, b in B}``.

    B must be a group: then ``a in a'B`` implies ``aB = a'B``.
    """
    covered: dict[int, set[bytes]] = {}
    blocks = []
    for a in A.perms:
        if a.tobytes() in covered.get(int(row_keys(a)[0]), ()):
            continue
        coset = a[B.perms]
        for k, row in zip(row_keys(coset).tolist(), coset):
            covered.setdefault(k, set()).add(row.tobytes())
        blocks.append(coset)
    return canonical_sort(np.unique(np.concatenate(blocks), axis=0))


def same_rows(r1: np.ndarray, r2: np.ndarray) -> bool:
    a = np.unique(np.atleast_2d(r1), axis=0)
    b = np.unique(np.atleast_2d(r2), axis=0)
    return a.shape == b.shape and bool((a == b).all())


def trivial_statement_holds(perms, x: int, lat: FiniteLattice) -> bool:
    """For a symmetric set A with ``a(x) <= x`` for all a, check ``a(x) = x``.

    Returns True when the hypothesis fails (vacuous) or the conclusion holds.
    """
    A = np.atleast_2d(np.asarray(perms))
    keys = set(int(k) for k in row_keys(A))
    inv = invert(A)
    symmetric = all(int(k) in keys for k in row_keys(inv))
    images = A[:, x]
    if not symmetric or not lat.leq[images, x].all():
        return True
    return bool((images == x).all())
