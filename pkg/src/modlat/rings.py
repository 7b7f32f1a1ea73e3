"""Finite commutative rings given by addition and multiplication tables.

Ring spec grammar::

    ring    := factor ( "x" factor )*
    factor  := "Z/" m | "F" q

``Fq`` for a prime power q is built as a polynomial quotient over Z/p with
the first irreducible monic polynomial found by search.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import ParseError, SizeCap

MAX_RING_SIZE = 10_000


@dataclass(eq=False)
class FiniteRing:
    spec: str
    add: np.ndarray
    mul: np.ndarray
    one: int
    zero: int = 0
    factor_specs: tuple[str, ...] = ()
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def size(self) -> int:
        return self.add.shape[0]

    def __repr__(self):
        return f"FiniteRing({self.spec!r}, size={self.size})"

    @cached_property
    def neg(self) -> np.ndarray:
        return np.argmax(self.add == self.zero, axis=1)

    @cached_property
    def units(self) -> tuple[int, ...]:
        return tuple(int(u) for u in np.flatnonzero((self.mul == self.one).any(axis=1)))

    @cached_property
    def inverse(self) -> dict[int, int]:
        return {u: int(np.argmax(self.mul[u] == self.one)) for u in self.units}

    def is_unit(self, a: int) -> bool:
        return a in self.inverse

    @cached_property
    def ideals(self) -> tuple[frozenset[int], ...]:
        """All ideals, sorted by size then content."""
        principal = {frozenset(int(v) for v in np.unique(self.mul[a])) for a in range(self.size)}
        found = set(principal)
        frontier = list(principal)
        while frontier:
            nxt = []
            for I in frontier:
                for J in principal:
                    if J <= I:
                        continue
                    s = frozenset(int(v) for v in np.unique(self.add[np.ix_(sorted(I), sorted(J))]))
                    if s not in found:
                        found.add(s)
                        nxt.append(s)
            frontier = nxt
        return tuple(sorted(found, key=lambda I: (len(I), sorted(I))))

    @cached_property
    def maximal_ideals(self) -> tuple[frozenset[int], ...]:
        proper = [I for I in self.ideals if len(I) < self.size]
        return tuple(I for I in proper if not any(I < J for J in proper))

    @property
    def residue_field_sizes(self) -> tuple[int, ...]:
        return tuple(sorted(self.size // len(m) for m in self.maximal_ideals))

    @property
    def is_local(self) -> bool:
        return len(self.maximal_ideals) == 1

    @property
    def is_field(self) -> bool:
        return len(self.ideals) == 2

    def ideal_generated(self, elements) -> frozenset[int]:
        members = set(int(e) for e in elements) | {self.zero}
        for I in self.ideals:
            if members <= I:
                return I
        raise AssertionError("unreachable: the whole ring is an ideal")

    def gl_order(self, n: int) -> int:
        """``|GL_n(R)|`` from the local factors: ``|R|^(n^2) prod (1 - q^-k)``."""
        total = Fraction(self.size ** (n * n))
        for q in self.residue_field_sizes:
            for k in range(1, n + 1):
                total *= 1 - Fraction(1, q ** k)
        assert total.denominator == 1
        return int(total)

    def unit_group_generators(self) -> list[int]:
        gens, reached = [], {self.one}
        for u in self.units:
            if u in reached:
                continue
            gens.append(u)
            frontier = list(reached)
            while frontier:
                nxt = []
                for a in frontier:
                    for g in gens:
                        b = int(self.mul[a, g])
                        if b not in reached:
                            reached.add(b)
                            nxt.append(b)
                frontier = nxt
        return gens

    def additive_generators(self) -> list[int]:
        gens, reached = [], {self.zero}
        for a in range(self.size):
            if a in reached:
                continue
            gens.append(a)
            frontier = list(reached)
            while frontier:
                nxt = []
                for x in frontier:
                    for g in gens:
                        y = int(self.add[x, g])
                        if y not in reached:
                            reached.add(y)
                            nxt.append(y)
                frontier = nxt
        return gens

    def label(self, a: int) -> str:
        return str(a)


def check_ring_axioms(R: FiniteRing, sample: int | None = None, seed: int = 0) -> bool:
    """Commutative ring axioms; exhaustive unless ``sample`` triples are requested."""
    add, mul, n = R.add, R.mul, R.size
    if not (np.array_equal(add, add.T) and np.array_equal(mul, mul.T)):
        return False
    if not ((add[R.zero] == np.arange(n)).all() and (mul[R.one] == np.arange(n)).all()):
        return False
    if not (add == R.zero).any(axis=1).all():
        return False
    if sample is None:
        a = np.arange(n)[:, None, None]
        b = np.arange(n)[None, :, None]
        c = np.arange(n)[None, None, :]
    else:
        rng = np.random.default_rng(seed)
        a, b, c = (rng.integers(0, n, sample) for _ in range(3))
    return bool((add[add[a, b], c] == add[a, add[b, c]]).all()
                and (mul[mul[a, b], c] == mul[a, mul[b, c]]).all()
                and (mul[a, add[b, c]] == add[mul[a, b], mul[a, c]]).all())


def _zmod(m: int) -> FiniteRing:
    r = np.arange(m)
    return FiniteRing(f"Z/{m}", (r[:, None] + r[None, :]) % m, (r[:, None] * r[None, :]) % m,
                      one=1 % m, factor_specs=(f"Z/{m}",))


def _prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            k, r = 0, q
            while r % p == 0:
                r //= p
                k += 1
            if r != 1:
                raise ParseError(f"F{q}: {q} is not a prime power")
            return p, k
    raise ParseError(f"F{q}: not a prime power")


def _polymulmod(a, b, modulus, p):
    # coefficient lists, lowest degree first; modulus is monic
    k = len(modulus) - 1
    prod = [0] * (2 * k - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            for t in range(k + 1):
                prod[d - k + t] = (prod[d - k + t] - c * modulus[t]) % p
    return prod[:k]


def _is_irreducible(poly, p):
    k = len(poly) - 1
    for d in range(1, k // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            div = list(tail) + [1]
            rem = list(poly)
            for s in range(len(rem) - 1, d - 1, -1):
                c = rem[s]
                if c:
                    for t in range(d + 1):
                        rem[s - d + t] = (rem[s - d + t] - c * div[t]) % p
            if not any(rem[:d]):
                return False
    return True


def _galois_field(q: int) -> FiniteRing:
    p, k = _prime_power(q)
    if k == 1:
        R = _zmod(p)
        R.spec = f"F{q}"
        R.factor_specs = (R.spec,)
        return R
    modulus = next(list(tail) + [1] for tail in itertools.product(range(p), repeat=k)
                   if _is_irreducible(list(tail) + [1], p))
    elems = list(itertools.product(range(p), repeat=k))  # code = sum c_i p^i
    codes = {e: sum(c * p ** i for i, c in enumerate(e)) for e in elems}
    ordered = sorted(elems, key=codes.get)
    add = np.empty((q, q), dtype=np.int64)
    mul = np.empty((q, q), dtype=np.int64)
    for a in ordered:
        for b in ordered:
            add[codes[a], codes[b]] = codes[tuple((x + y) % p for x, y in zip(a, b))]
            mul[codes[a], codes[b]] = codes[tuple(_polymulmod(a, b, modulus, p))]
    return FiniteRing(f"F{q}", add, mul, one=1, factor_specs=(f"F{q}",))


def _product(A: FiniteRing, B: FiniteRing) -> FiniteRing:
    nb = B.size
    ia = np.arange(A.size * nb) // nb
    ib = np.arange(A.size * nb) % nb
    add = A.add[ia[:, None], ia[None, :]] * nb + B.add[ib[:, None], ib[None, :]]
    mul = A.mul[ia[:, None], ia[None, :]] * nb + B.mul[ib[:, None], ib[None, :]]
    return FiniteRing(f"{A.spec} x {B.spec}", add, mul, one=A.one * nb + B.one,
                      factor_specs=A.factor_specs + B.factor_specs)


_FACTOR = re.compile(r"^(?:Z/(\d+)|F(\d+))$")


def build_ring(spec: str, max_size: int = MAX_RING_SIZE) -> FiniteRing:
    """Parse a ring spec such as ``"Z/49"``, ``"F7"`` or ``"F7 x F7"``."""
    parts = [p.strip() for p in re.split(r"\s*x\s*", spec.strip())]
    if not parts or any(not p for p in parts):
        raise ParseError(f"cannot parse ring spec {spec!r}")
    size = 1
    factors = []
    for part in parts:
        m = _FACTOR.match(part)
        if not m:
            raise ParseError(f"cannot parse ring factor {part!r}")
        order = int(m.group(1) or m.group(2))
        if order < 2:
            raise ParseError(f"ring factor {part!r} must have at least two elements")
        size *= order
        if size > max_size:
            raise SizeCap(f"ring {spec!r} exceeds {max_size} elements")
        factors.append(_zmod(order) if m.group(1) else _galois_field(order))
    R = factors[0]
    for S in factors[1:]:
        R = _product(R, S)
    R.spec = " x ".join(parts)
    return R
