"""Model specs and small abstract fixtures.

A model spec is either ``gl(n=<k>,ring=<ringspec>)`` or the name of one of
the abstract fixtures below.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .autgroup import DEFAULT_BUDGET, generate_group, identity_perm
from .errors import NotModular, ParseError, SizeCap
from .frame import build_frame
from .instance import Instance
from .lattice import FiniteLattice, build_lattice, is_modular
from .modules import diagonal, gl_action, permutation_matrix, transvection
from .rings import FiniteRing, build_ring

MAX_RANK = 3
_GL = re.compile(r"^\s*gl\(\s*n\s*=\s*(\d+)\s*,\s*ring\s*=\s*([^)]+?)\s*\)\s*$")


def parse_model_spec(spec: str) -> tuple[int, str]:
    m = _GL.match(spec)
    if not m:
        raise ParseError(f"cannot parse model spec {spec!r}; expected gl(n=<k>,ring=<ring>)")
    n = int(m.group(1))
    if n < 1:
        raise ParseError("rank must be at least 1")
    if n > MAX_RANK:
        raise SizeCap(f"rank {n} exceeds {MAX_RANK}")
    return n, m.group(2)


def canonical_spec(spec: str) -> str:
    """Whitespace-free form of a spec, used for cache keys and report names."""
    if spec in FIXTURES:
        return spec
    n, ring = parse_model_spec(spec)
    return f"gl(n={n},ring={ring.replace(' ', '')})"


def gl_instance(ring: FiniteRing | str, n: int, budget: int = DEFAULT_BUDGET,
                mode: str = "auto") -> Instance:
    R = build_ring(ring) if isinstance(ring, str) else ring
    A = gl_action(R, n, mode=mode, budget=budget)
    name = f"gl(n={n},ring={R.spec.replace(' ', '')})"
    return Instance(name, A.module.frame, A.G, A.H, action=A, budget=budget)


def load_model(spec: str, budget: int = DEFAULT_BUDGET) -> Instance:
    """Build the instance named by ``spec`` (no caching; see ``cache.load_cached``)."""
    if spec in FIXTURES:
        return FIXTURES[spec].build()
    n, ring = parse_model_spec(spec)
    return gl_instance(ring, n, budget=budget)


def standard_elements(R: FiniteRing, n: int) -> dict[str, Callable]:
    """Constructors for the named matrices: diagonal, permutation, transvection."""
    return {
        "diagonal": lambda d: diagonal(R, d),
        "permutation": lambda pi: permutation_matrix(R, pi),
        "transvection": lambda i, j, xi: transvection(R, n, i, j, xi),
    }


# -- abstract fixtures ---------------------------------------------------------

def m_lattice(k: int) -> FiniteLattice:
    """M_k: bottom 0, atoms 1..k, top k+1."""
    top = k + 1
    return build_lattice([(0, a) for a in range(1, k + 1)] + [(a, top) for a in range(1, k + 1)])


def chain(length: int) -> FiniteLattice:
    return build_lattice([(i, i + 1) for i in range(length)])


def pentagon() -> FiniteLattice:
    """N5: 0 < a < b < 1 and 0 < c < 1, ids 0, 1, 2, 4 and 3."""
    return build_lattice([(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)])


def atom_permutation(lat: FiniteLattice, cycles) -> np.ndarray:
    perm = identity_perm(lat.size).astype(np.int64)
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            perm[a] = b
    return perm


def abstract_instance(name: str, lat: FiniteLattice, atoms, gens=(), require_modular=True):
    if require_modular:
        ok, triple = is_modular(lat)
        if not ok:
            raise NotModular(triple)
    frame = build_frame(lat, atoms)
    gens = np.array(gens, dtype=np.int64).reshape(-1, lat.size)
    G = generate_group(lat, gens)
    return Instance(name, frame, G)


@dataclass(frozen=True)
class Fixture:
    name: str
    description: str
    build: Callable[[], Instance]
    expect: str


def _m4_swap():
    # frame atoms 1, 2; G swaps e_1 with atom 3, so atom 4 is never moved to e_1
    lat = m_lattice(4)
    return abstract_instance("m4-swap", lat, (1, 2), [atom_permutation(lat, [[1, 3]])])


FIXTURES: dict[str, Fixture] = {f.name: f for f in (
    Fixture("pentagon", "N5 with frame atoms a, c; rejected as non-modular",
            lambda: abstract_instance("pentagon", pentagon(), (1, 3)), "NotModular"),
    Fixture("chain3-two-atoms", "chain of length 3 with two requested atoms",
            lambda: abstract_instance("chain3-two-atoms", chain(3), (1, 2)), "NotBoolean"),
    Fixture("chain2-n1", "chain of length 2 with a single frame atom; i != j conditions vacuous",
            lambda: abstract_instance("chain2-n1", chain(2), (2,)), "all conditions hold"),
    Fixture("m3-coatoms", "M3 with a single frame atom; every proper element lies under a "
            "coatom, as in every finite lattice, so condition 13 holds",
            lambda: abstract_instance("m3-coatoms", m_lattice(3), (4,)),
            "condition 13 holds"),
    Fixture("m4-swap", "M4 with frame atoms 1, 2 and G generated by swapping atoms 1 and 3",
            _m4_swap, "condition 9 fails"),
)}


def abstract_instances() -> list[Fixture]:
    return list(FIXTURES.values())
