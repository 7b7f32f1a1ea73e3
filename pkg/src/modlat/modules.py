"""Submodule lattices of R^n and the action of GL_n(R) on them."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .autgroup import AutGroup, frame_stabilizer, generate_group, perm_dtype
from .errors import ClosureBudgetExceeded, NonFaithfulFrame, NotAUnit, SizeCap
from .frame import BooleanFrame, build_frame
from .lattice import FiniteLattice, lattice_from_order
from .rings import FiniteRing

MAX_VECTORS = 4096
FULL_ENUMERATION_LIMIT = 50_000


@dataclass(eq=False)
class ModuleLattice:
    ring: FiniteRing
    n: int
    coords: np.ndarray      # (|R|^n, n) ring codes of each vector code
    masks: np.ndarray       # (k, |R|^n) membership of each submodule
    lattice: FiniteLattice
    frame: BooleanFrame
    _lookup: dict = field(default_factory=dict, repr=False)

    @property
    def vector_count(self) -> int:
        return len(self.coords)

    def encode(self, coords) -> np.ndarray:
        coords = np.asarray(coords)
        weights = self.ring.size ** np.arange(self.n)
        return coords @ weights

    def submodule_id(self, mask) -> int:
        return self._lookup[np.packbits(mask).tobytes()]

    def span(self, vectors) -> int:
        """Id of the submodule generated by the given coordinate vectors."""
        mask = np.zeros(self.vector_count, dtype=bool)
        mask[0] = True
        for v in vectors:
            mask = _add_span(self, mask, np.flatnonzero(_cyclic_mask(self, int(self.encode(v)))))
        return self.submodule_id(mask)

    def ideal_times_atom(self, ideal, j: int) -> int:
        """Id of the submodule ``I * e_j``."""
        vecs = []
        for a in ideal:
            v = [0] * self.n
            v[j] = a
            vecs.append(v)
        return self.span(vecs)

    def members(self, x: int) -> np.ndarray:
        return self.coords[self.masks[x]]

    @cached_property
    def _addtab(self) -> np.ndarray:
        R, V = self.ring, self.vector_count
        tab = np.zeros((V, V), dtype=np.int32)
        for l in range(self.n):
            tab += R.add[self.coords[:, None, l], self.coords[None, :, l]].astype(np.int32) * R.size ** l
        return tab

    def vector_images(self, g: np.ndarray) -> np.ndarray:
        """Code of g*v for every vector code v."""
        g = np.asarray(g)
        R = self.ring
        out = np.zeros((self.vector_count, self.n), dtype=np.int64)
        for k in range(self.n):
            acc = np.full(self.vector_count, R.zero)
            for l in range(self.n):
                acc = R.add[acc, R.mul[g[k, l], self.coords[:, l]]]
            out[:, k] = acc
        return self.encode(out)

    def matrix_perm(self, g: np.ndarray) -> np.ndarray:
        """The lattice automorphism induced by an invertible matrix."""
        vp = self.vector_images(g)
        vpinv = np.empty_like(vp)
        vpinv[vp] = np.arange(len(vp))
        images = self.masks[:, vpinv]
        return np.array([self.submodule_id(m) for m in images], dtype=perm_dtype(self.lattice.size))


def _cyclic_mask(M, v):
    R = M.ring
    mult = R.mul[np.arange(R.size)[:, None], M.coords[v][None, :]]
    mask = np.zeros(M.vector_count, dtype=bool)
    mask[M.encode(mult)] = True
    return mask


def _add_span(M, mask, cyc):
    out = np.zeros_like(mask)
    out[M._addtab[np.ix_(np.flatnonzero(mask), cyc)].ravel()] = True
    return out


def submodule_lattice(R: FiniteRing, n: int, max_vectors: int = MAX_VECTORS) -> ModuleLattice:
    """All R-submodules of R^n ordered by inclusion, with the coordinate frame."""
    V = R.size ** n
    if V > max_vectors:
        raise SizeCap(f"|R|^n = {V} exceeds {max_vectors}")
    codes = np.arange(V)
    coords = np.stack([(codes // R.size ** l) % R.size for l in range(n)], axis=1)
    M = ModuleLattice(R, n, coords, None, None, None)
    cyclic = {}
    for v in range(V):
        m = _cyclic_mask(M, v)
        cyclic.setdefault(np.packbits(m).tobytes(), (m, v))
    found = {k: m for k, (m, _) in cyclic.items()}
    gens = [(m, np.flatnonzero(m)) for m, _ in cyclic.values()]
    frontier = list(found.values())
    while frontier:
        nxt = []
        for S in frontier:
            for C, cyc in gens:
                if (C <= S).all():
                    continue
                T = _add_span(M, S, cyc)
                key = np.packbits(T).tobytes()
                if key not in found:
                    found[key] = T
                    nxt.append(T)
        frontier = nxt
    masks = sorted(found.values(), key=lambda m: (int(m.sum()), np.packbits(m).tobytes()))
    masks = np.array(masks)
    mi = masks.astype(np.int32)
    leq = (mi @ (~masks).astype(np.int32).T) == 0
    M.masks = masks
    M.lattice = lattice_from_order(leq)
    M._lookup = {np.packbits(m).tobytes(): i for i, m in enumerate(masks)}
    atoms = []
    for j in range(n):
        e = [0] * n
        e[j] = R.one
        atoms.append(M.span([e]))
    M.frame = build_frame(M.lattice, atoms)
    return M


# -- matrices ---------------------------------------------------------------

def identity_matrix(R: FiniteRing, n: int) -> np.ndarray:
    g = np.full((n, n), R.zero, dtype=np.int64)
    np.fill_diagonal(g, R.one)
    return g


def diagonal(R: FiniteRing, d) -> np.ndarray:
    d = [int(x) for x in d]
    for x in d:
        if not R.is_unit(x):
            raise NotAUnit(f"{x} is not a unit of {R.spec}")
    g = identity_matrix(R, len(d))
    g[np.arange(len(d)), np.arange(len(d))] = d
    return g


def permutation_matrix(R: FiniteRing, pi) -> np.ndarray:
    """Matrix sending e_k to e_{pi[k]}."""
    n = len(pi)
    g = np.full((n, n), R.zero, dtype=np.int64)
    for k, t in enumerate(pi):
        g[t, k] = R.one
    return g


def transvection(R: FiniteRing, n: int, i: int, j: int, xi: int) -> np.ndarray:
    """``I + xi E_{ji}``: sends e_i to e_i + xi e_j and fixes the other e_s."""
    g = identity_matrix(R, n)
    g[j, i] = xi
    return g


def mat_mul(R: FiniteRing, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    out = np.full((n, n), R.zero, dtype=np.int64)
    for k in range(n):
        out = R.add[out, R.mul[a[:, k][:, None], b[k, :][None, :]]]
    return out


def determinants(R: FiniteRing, mats: np.ndarray) -> np.ndarray:
    """Leibniz determinants of a stack of matrices (m, n, n)."""
    m, n, _ = mats.shape
    det = np.full(m, R.zero)
    for perm in itertools.permutations(range(n)):
        term = np.full(m, R.one)
        for r, c in enumerate(perm):
            term = R.mul[term, mats[:, r, c]]
        inversions = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        if inversions % 2:
            term = R.neg[term]
        det = R.add[det, term]
    return det


def standard_generators(R: FiniteRing, n: int) -> dict[str, list[np.ndarray]]:
    """Diagonal and elementary transvection generators of GL_n(R)."""
    diag = []
    for k in range(n):
        for u in R.unit_group_generators():
            d = [R.one] * n
            d[k] = u
            diag.append(diagonal(R, d))
    trans = [transvection(R, n, i, j, xi)
             for i in range(n) for j in range(n) if i != j
             for xi in R.additive_generators()]
    return {"diagonal": diag, "transvection": trans}


@dataclass(eq=False)
class MatrixGroupAction:
    module: ModuleLattice
    G: AutGroup
    H: AutGroup
    gl_order: int
    kernel_order: int
    mode: str

    @property
    def ring(self) -> FiniteRing:
        return self.module.ring

    @property
    def n(self) -> int:
        return self.module.n

    def image(self, g: np.ndarray) -> np.ndarray:
        return self.module.matrix_perm(g)


def _all_invertible(R, n):
    m = R.size ** (n * n)
    codes = np.arange(m)
    mats = np.stack([(codes // R.size ** t) % R.size for t in range(n * n)], axis=1).reshape(m, n, n)
    unit = np.zeros(R.size, dtype=bool)
    unit[list(R.units)] = True
    return mats[unit[determinants(R, mats)]]


def gl_action(R: FiniteRing, n: int, mode: str = "auto", budget: int = 10**6,
              module: ModuleLattice | None = None) -> MatrixGroupAction:
    """Image of GL_n(R) in the automorphism group of the submodule lattice.

    ``mode="full"`` enumerates every invertible matrix; ``"generators"``
    closes the images of diagonal and elementary generators.
    """
    M = module or submodule_lattice(R, n)
    lat = M.lattice
    gens = standard_generators(R, n)
    if mode == "auto":
        mode = "full" if R.size ** (n * n) <= FULL_ENUMERATION_LIMIT else "generators"
    gl = R.gl_order(n)
    gen_perms = [M.matrix_perm(g) for g in gens["diagonal"] + gens["transvection"]]
    if mode == "full":
        mats = _all_invertible(R, n)
        if len(mats) != gl:
            raise AssertionError(f"enumerated {len(mats)} invertible matrices, expected {gl}")
        perms = np.array([M.matrix_perm(g) for g in mats])
        ident = np.arange(lat.size)
        kernel = int((perms == ident).all(axis=1).sum())
        image = np.unique(perms, axis=0)
        if len(image) > budget:
            raise ClosureBudgetExceeded(f"image has {len(image)} elements, budget {budget}")
        G = AutGroup(lat, image, generators=np.array(gen_perms).reshape(-1, lat.size))
        if len(image) * kernel != gl:
            raise AssertionError("image order times kernel order differs from |GL|")
    elif mode == "generators":
        G = generate_group(lat, np.array(gen_perms).reshape(-1, lat.size), budget=budget)
        if gl % G.order:
            raise AssertionError("image order does not divide |GL|")
        kernel = gl // G.order
    else:
        raise ValueError(f"unknown mode {mode!r}")
    diag_perms = [M.matrix_perm(g) for g in gens["diagonal"]]
    H = generate_group(lat, np.array(diag_perms).reshape(-1, lat.size), within=G, budget=budget)
    if not H.same_elements(frame_stabilizer(G, M.frame)):
        raise NonFaithfulFrame("image of the diagonal matrices differs from G(L0)")
    return MatrixGroupAction(M, G, H, gl, kernel, mode)
