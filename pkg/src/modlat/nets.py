"""Net collections and the groups attached to them.

Orientation: ``tau[i][j]`` bounds the j-component of images of e_i.  In the
matrix model it is the ideal at matrix position (j, i).  Diagonal entries
are fixed at ``tau[i][i] = e_i``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .autgroup import (AutGroup, fixed_elements, generate_group, pointwise_stabilizer,
                       transvection_labels)
from .errors import HNotContained, MalformedNet
from .instance import Instance
from .lattice import join_all


@dataclass(frozen=True)
class NetCollection:
    entries: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij) -> int:
        i, j = ij
        return self.entries[i][j]

    def off_diagonal(self) -> tuple[int, ...]:
        return tuple(self.entries[i][j] for i in range(self.n) for j in range(self.n) if i != j)

    def dumps(self) -> str:
        flat = " ".join(str(x) for row in self.entries for x in row)
        return f"{self.n}\n{flat}\n"

    @classmethod
    def loads(cls, text: str) -> "NetCollection":
        tokens = [int(t) for t in text.split()]
        n = tokens[0]
        if len(tokens) != 1 + n * n:
            raise ValueError("net needs n followed by n^2 entries")
        return cls(tuple(tuple(tokens[1 + i * n:1 + (i + 1) * n]) for i in range(n)))


def make_net(inst: Instance, entries) -> NetCollection:
    """Validate ``entries`` (n x n, diagonal ignored) and pin the diagonal to e_i."""
    lat, atoms, n = inst.lattice, inst.atoms, inst.n
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append(atoms[i])
                continue
            x = int(entries[i][j])
            if not lat.leq[x, atoms[j]]:
                raise MalformedNet(f"entry ({i}, {j}) = {x} is not below e_{j}")
            row.append(x)
        rows.append(tuple(row))
    return NetCollection(tuple(rows))


def zero_net(inst: Instance) -> NetCollection:
    b = inst.lattice.bottom
    return make_net(inst, [[b] * inst.n for _ in range(inst.n)])


def full_net(inst: Instance) -> NetCollection:
    return make_net(inst, [list(inst.atoms) for _ in range(inst.n)])


def net_leq(a: NetCollection, b: NetCollection, inst: Instance) -> bool:
    leq = inst.lattice.leq
    return all(leq[x, y] for ra, rb in zip(a.entries, b.entries) for x, y in zip(ra, rb))


def _bounded_indices(inst, i, j, bound):
    lab = inst.labels(i, j)
    ok = lab >= 0
    ok[ok] = inst.lattice.leq[lab[ok], bound]
    return np.flatnonzero(ok)


def is_net_collection(inst: Instance, tau: NetCollection):
    """Return ``(True, None)`` or ``(False, (k, i, j, g_index))``.

    For pairwise distinct k, i, j and every g in H_ij(y) with y <= tau_ij:
    ``[g(tau_ki)]_j <= tau_kj``.
    """
    lat, comp = inst.lattice, inst.comp
    for i, j in inst.pairs():
        if not lat.leq[tau[i, j], inst.atoms[j]]:
            raise MalformedNet(f"entry ({i}, {j}) is not below e_{j}")
    for k, i, j in itertools.permutations(range(inst.n), 3):
        idx = _bounded_indices(inst, i, j, tau[i, j])
        images = inst.G.perms[idx, tau[k, i]]
        bad = ~lat.leq[comp[images, j], tau[k, j]]
        if bad.any():
            return False, (k, i, j, int(idx[np.argmax(bad)]))
    return True, None


def sigma_of(inst: Instance, F: AutGroup) -> NetCollection:
    """``sigma(F)``: sigma_ij is the join of the x with F meeting H_ij(x)."""
    if not inst.H.issubset(F):
        raise HNotContained("F does not contain H")
    lat = inst.lattice
    entries = [[lat.bottom] * inst.n for _ in range(inst.n)]
    for i, j in inst.pairs():
        lab = transvection_labels(F, inst.frame, i, j)
        entries[i][j] = join_all(lat, np.unique(lab[lab >= 0]))
    return make_net(inst, entries)


def component_hull(inst: Instance, F: AutGroup) -> NetCollection:
    """Join of ``[f(e_i)]_j`` over f in F: the least net bounding F's components."""
    lat, comp = inst.lattice, inst.comp
    entries = [[lat.bottom] * inst.n for _ in range(inst.n)]
    for i, j in inst.pairs():
        entries[i][j] = join_all(lat, np.unique(comp[F.perms[:, inst.atoms[i]], j]))
    return make_net(inst, entries)


def elementary_net_group(inst: Instance, tau: NetCollection) -> AutGroup:
    """``E(tau) = <H, H_ij(x) : x <= tau_ij>``."""
    key = ("E", tau)
    if key not in inst._cache:
        gens = [inst.H.generators]
        for i, j in inst.pairs():
            gens.append(inst.G.perms[_bounded_indices(inst, i, j, tau[i, j])])
        gens = np.concatenate(gens) if gens else np.empty((0, inst.lattice.size))
        inst._cache[key] = generate_group(inst.lattice, gens, within=inst.G, budget=inst.budget,
                                          validate=False)
    return inst._cache[key]


def k_tau(inst: Instance, tau: NetCollection) -> frozenset[int]:
    """Decomposable elements fixed by the elementary net group."""
    return fixed_elements(elementary_net_group(inst, tau)) & inst.l0_prime


def g_of_k_tau(inst: Instance, tau: NetCollection) -> AutGroup:
    key = ("GK", tau)
    if key not in inst._cache:
        inst._cache[key] = pointwise_stabilizer(inst.G, sorted(k_tau(inst, tau)))
    return inst._cache[key]


def component_bounded_mask(inst: Instance, tau: NetCollection) -> np.ndarray:
    """Mask over G of the g with ``[g(e_i)]_j <= tau_ij`` for all i, j."""
    lat, comp, P = inst.lattice, inst.comp, inst.G.perms
    mask = np.ones(inst.G.order, dtype=bool)
    for i in range(inst.n):
        img = P[:, inst.atoms[i]]
        for j in range(inst.n):
            mask &= lat.leq[comp[img, j], tau[i, j]]
    return mask


def component_bounded_set(inst: Instance, tau: NetCollection) -> np.ndarray:
    return inst.G.perms[component_bounded_mask(inst, tau)]


def rho_from(inst: Instance, tau: NetCollection) -> NetCollection:
    """``rho_ij = tau_ij + w_j``, returned without checking the net property."""
    ws, _ = inst.radicals
    lat = inst.lattice
    return NetCollection(tuple(
        tuple(int(lat.join[tau[i, j], ws[j]]) if i != j else tau[i, j] for j in range(inst.n))
        for i in range(inst.n)))


def candidate_nets(inst: Instance):
    """Every matrix with off-diagonal entries below the matching atoms."""
    pairs = inst.pairs()
    choices = [inst.below(inst.atoms[j]) for _, j in pairs]
    for combo in itertools.product(*choices):
        entries = [[inst.lattice.bottom] * inst.n for _ in range(inst.n)]
        for (i, j), x in zip(pairs, combo):
            entries[i][j] = int(x)
        yield make_net(inst, entries)


def enumerate_nets(inst: Instance) -> list[NetCollection]:
    return [tau for tau in candidate_nets(inst) if is_net_collection(inst, tau)[0]]
