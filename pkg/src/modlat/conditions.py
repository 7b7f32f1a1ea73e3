"""Decision procedures for the sixteen structural conditions on (L, L0, G).

Each condition is a literal quantified statement evaluated over finite
domains.  The outermost quantifier ranges over a list of *items* (plain int
tuples); inner quantifiers over G are vectorized.  Where an outer range is
replaced by a quotient (signature classes, double cosets), the reduction is
exact and noted at the condition.

A failing report carries the offending item; ``replay`` re-evaluates it.
"""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .autgroup import _closure_mask, generate_group, invert, transvection_labels
from .errors import DegenerateAtom, PrerequisiteMissing
from .instance import Instance
from .lattice import coatoms_of, join_all

HOLDS, FAILS, SKIPPED = "holds", "fails", "skipped"
READINGS = ("each-t", "some-t")


@dataclass
class ConditionReport:
    condition: int
    verdict: str
    witness: dict | None = None
    domain_sizes: dict = field(default_factory=dict)
    elapsed_ms: float = 0.0
    sampled: bool = False
    details: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    def to_json(self) -> dict:
        return asdict(self)


def _signature_reps(rows: np.ndarray) -> np.ndarray:
    """Index of the first row of each distinct row value."""
    _, first = np.unique(rows, axis=0, return_index=True)
    return np.sort(first)


def _inverse_perms(inst: Instance) -> np.ndarray:
    if "Ginv" not in inst._cache:
        inst._cache["Ginv"] = invert(inst.G.perms)
    return inst._cache["Ginv"]


class Condition:
    number = 0
    needs_radicals = False
    record_all = False

    def domain(self, inst, opts) -> list:
        raise NotImplementedError

    def check(self, inst, item, opts, ctx) -> dict | None:
        raise NotImplementedError

    def details(self, inst, opts, ctx) -> dict:
        return {}


class C1(Condition):
    number = 1

    def domain(self, inst, opts):
        return [()]

    def check(self, inst, item, opts, ctx):
        fe, lat = inst.frame.frame_elements, inst.lattice
        if fe[0] != lat.bottom or fe[-1] != lat.top:
            return {"0_L0": fe[0], "0_L": lat.bottom, "1_L0": fe[-1], "1_L": lat.top}
        return None


class C2(Condition):
    # f enters only through f(e_i): one representative per image value.
    number = 2

    def domain(self, inst, opts):
        items = []
        for i in range(inst.n):
            imgs = inst.G.perms[:, inst.atoms[i]]
            _, reps = np.unique(imgs, return_index=True)
            items += [(i, j, int(f)) for f in np.sort(reps) for j in range(inst.n)]
        return items

    def check(self, inst, item, opts, ctx):
        i, j, f = item
        lat = inst.lattice
        y = inst.G.perms[f, inst.atoms[i]]
        ehat = inst.frame.complements[j]
        if lat.join[y, ehat] == lat.top and lat.meet[y, ehat] != lat.bottom:
            return {"f": f, "i": i, "j": j, "f(e_i)": int(y)}
        return None


class C3(Condition):
    # a enters only through its restriction to [0, e_i].
    number = 3

    def domain(self, inst, opts):
        items = []
        for i in range(inst.n):
            down = inst.below(inst.atoms[i])
            items += [(i, int(a)) for a in _signature_reps(inst.G.perms[:, down])]
        return items

    def check(self, inst, item, opts, ctx):
        i, a = item
        e = inst.atoms[i]
        comp = inst.comp
        perm = inst.G.perms[a]
        if comp[perm[e], i] != e:
            return None
        down = inst.below(e)
        hs = inst.h_i(i).perms
        ha = comp[hs[:, perm[down]], i] == down
        ah = comp[perm[hs[:, down]], i] == down
        if (ha.all(axis=1) & ah.all(axis=1)).any():
            return None
        return {"a": a, "i": i}


def _c4_h_works(inst, h, t, i):
    P, Pinv, comp = inst.G.perms, _inverse_perms(inst), inst.comp
    for x in inst.below(inst.atoms[i]):
        pre = Pinv[:, x].astype(np.int64)                     # a^-1(x)
        lhs = np.take_along_axis(P, h[pre][:, None].astype(np.int64), axis=1)[:, 0]
        rhs = np.take_along_axis(P, comp[pre, t][:, None], axis=1)[:, 0]
        for r in range(inst.n):
            if r == i:
                continue
            bad = comp[lhs, r] != comp[rhs, r]
            if bad.any():
                return False, {"a": int(np.argmax(bad)), "r": r, "x": int(x)}
    return True, None


class C4(Condition):
    """For every t and i there is h in H_t fixing L̄0 pointwise with
    ``[a h a^-1 (x)]_r = [a([a^-1(x)]_t)]_r`` for all a, r != i, x <= e_i.

    Reading ``some-t`` asks instead for one t per i.
    """
    number = 4
    record_all = True

    def domain(self, inst, opts):
        if opts.get("reading4", "each-t") == "some-t":
            return [(i,) for i in range(inst.n)]
        return [(t, i) for t in range(inst.n) for i in range(inst.n)]

    def _candidates(self, inst, t):
        hs = inst.h_i(t).perms
        fixed = np.array(sorted(inst.lbar0))
        return hs[(hs[:, fixed] == fixed).all(axis=1)]

    def _ok(self, inst, t, i, ctx):
        key = (t, i)
        per = ctx.setdefault("per_t", {})
        if key not in per:
            per[key] = False
            for h in self._candidates(inst, t):
                if _c4_h_works(inst, h, t, i)[0]:
                    per[key] = True
                    break
        return per[key]

    def check(self, inst, item, opts, ctx):
        if len(item) == 1:
            (i,) = item
            if any(self._ok(inst, t, i, ctx) for t in range(inst.n)):
                return None
            return {"i": i, "reading": "some-t"}
        t, i = item
        if self._ok(inst, t, i, ctx):
            return None
        return {"t": t, "i": i, "candidates": int(len(self._candidates(inst, t)))}

    def details(self, inst, opts, ctx):
        per = ctx.get("per_t", {})
        return {"reading": opts.get("reading4", "each-t"),
                "per_t": [{"t": t, "i": i, "holds": v} for (t, i), v in sorted(per.items())]}


class C5(Condition):
    number = 5

    def domain(self, inst, opts):
        lat = inst.lattice
        return [(i, u) for i in range(inst.n) for u in sorted(inst.lbar0)
                if lat.leq[inst.atoms[i], u]]

    def check(self, inst, item, opts, ctx):
        i, u = item
        lat, comp, P, atoms = inst.lattice, inst.comp, inst.G.perms, inst.atoms
        ok_t = np.ones(inst.G.order, dtype=bool)
        for s in range(inst.n):
            if s != i:
                ok_t &= P[:, atoms[s]] == atoms[s]
        img = P[:, atoms[i]]
        for j in range(inst.n):
            ok_t &= lat.leq[comp[img, j], comp[u, j]]
        targets = np.unique(img[ok_t])          # the possible t(e_i)
        hyp = comp[P[:, u], i] == atoms[i]
        good = np.zeros(inst.G.order, dtype=bool)
        for y in targets:
            good |= comp[P[:, y], i] == atoms[i]
        bad = hyp & ~good
        if bad.any():
            return {"i": i, "u": u, "g": int(np.argmax(bad))}
        return None


class C6(Condition):
    # f and g enter only through [f(x)]_j for x in L0' below e_i.
    number = 6

    def _xs(self, inst, i):
        e = inst.atoms[i]
        return np.array(sorted(x for x in inst.l0_prime if inst.lattice.leq[x, e]))

    def domain(self, inst, opts):
        items = []
        for i in range(inst.n):
            xs = self._xs(inst, i)
            for j in range(inst.n):
                reps = _signature_reps(inst.comp[inst.G.perms[:, xs], j])
                items += [(i, j, int(f), int(g)) for f in reps for g in reps if f != g]
        return items

    def check(self, inst, item, opts, ctx):
        i, j, f, g = item
        lat, comp, P = inst.lattice, inst.comp, inst.G.perms
        e = inst.atoms[i]
        if not lat.leq[comp[P[f, e], j], comp[P[g, e], j]]:
            return None
        xs = self._xs(inst, i)
        bad = ~lat.leq[comp[P[f, xs], j], comp[P[g, xs], j]]
        if bad.any():
            return {"f": f, "g": g, "i": i, "j": j, "x": int(xs[np.argmax(bad)])}
        return None


class C7(Condition):
    # With a finite lattice, the best family is every admissible y <= u.
    number = 7

    def domain(self, inst, opts):
        return [(i, j, int(u)) for i, j in inst.pairs() for u in inst.below(inst.atoms[j])]

    def check(self, inst, item, opts, ctx):
        i, j, u = item
        ys = [y for y in inst.hij_nonempty(i, j) if inst.lattice.leq[y, u]]
        got = join_all(inst.lattice, ys)
        if got != u:
            return {"i": i, "j": j, "u": u, "best_join": got}
        return None


class C8(Condition):
    # f enters only through u -> [f(u)]_j on [0, e_i].
    number = 8

    def domain(self, inst, opts):
        items = []
        for i, j in inst.pairs():
            down = inst.below(inst.atoms[i])
            reps = _signature_reps(inst.comp[inst.G.perms[:, down], j])
            items += [(i, j, int(f)) for f in reps]
        return items

    def check(self, inst, item, opts, ctx):
        i, j, f = item
        comp, P = inst.comp, inst.G.perms
        down = inst.below(inst.atoms[i])
        x = int(comp[P[f, inst.atoms[i]], j])
        sig = comp[P[f, down], j]
        cands = inst.hij_indices(i, j, x)
        if len(cands) and (comp[P[np.ix_(cands, down)], j] == sig).all(axis=1).any():
            return None
        return {"f": f, "i": i, "j": j, "x": x, "H_ij(x)": int(len(cands))}


class C9(Condition):
    number = 9

    def domain(self, inst, opts):
        return [(y, i, j) for y in range(inst.lattice.size) for i, j in inst.pairs()]

    def check(self, inst, item, opts, ctx):
        y, i, j = item
        lat, comp = inst.lattice, inst.comp
        vec = comp[y]
        if vec[i] != inst.atoms[i] or lat.meet[y, inst.atoms[j]] != lat.bottom:
            return None
        if any(vec[k] != lat.bottom for k in range(inst.n) if k not in (i, j)):
            return None
        x = int(vec[j])
        if x not in inst.hij_nonempty(i, j):
            return None
        cands = inst.hij_indices(i, j, x)
        if (inst.G.perms[cands, y] == inst.atoms[i]).any():
            return None
        return {"y": y, "i": i, "j": j, "x": x}


def _double_coset_mask(inst, K_perms, a, small=10**6):
    """Mask over G of K a K (or K a ∪ a K when that is too large)."""
    G = inst.G
    aK = a[K_perms]
    if len(K_perms) ** 2 <= small:
        rows = np.concatenate([k[aK] for k in K_perms])
    else:
        rows = np.concatenate([aK, K_perms[:, a]])
    mask = np.zeros(G.order, dtype=bool)
    mask[G.index(rows)] = True
    return mask


class C10(Condition):
    """For every family a_alpha in the H_ij(.) and y <= sum x_alpha with
    H_ij(y) nonempty: H_ij(y) lies in <H, a_alpha>.

    Families are grouped by the subgroup K = <H, A> they generate.  The
    family K ∩ (union of H_ij) generates the same K with the largest sum, so
    checking it for each reachable K decides every family exactly.
    """
    number = 10

    def _reachable(self, inst, i, j):
        key = ("c10", i, j)
        if key in inst._cache:
            return inst._cache[key]
        G, H = inst.G, inst.H
        trans = np.flatnonzero(inst.labels(i, j) >= 0)
        start = H.mask_in(G)
        seen = {start.tobytes(): ()}
        queue = [(start, ())]
        while queue:
            mask, A = queue.pop(0)
            skip = mask.copy()
            for a in trans:
                if skip[a]:
                    continue
                skip |= _double_coset_mask(inst, G.perms[mask], G.perms[a])
                gens = np.concatenate([H.generators, G.perms[list(A) + [a]]])
                new = _closure_mask(G, gens, budget=inst.budget)
                k = new.tobytes()
                if k not in seen:
                    seen[k] = A + (int(a),)
                    queue.append((new, A + (int(a),)))
        inst._cache[key] = sorted(seen.values(), key=lambda A: (len(A), A))
        return inst._cache[key]

    def domain(self, inst, opts):
        return [(i, j, A) for i, j in inst.pairs() for A in self._reachable(inst, i, j)]

    def check(self, inst, item, opts, ctx):
        i, j, A = item
        G, H, lat = inst.G, inst.H, inst.lattice
        gens = np.concatenate([H.generators, G.perms[list(A)]])
        mask = _closure_mask(G, gens, budget=inst.budget)
        lab = inst.labels(i, j)
        top = join_all(lat, np.unique(lab[mask & (lab >= 0)]))
        for y in sorted(inst.hij_nonempty(i, j)):
            if not lat.leq[y, top]:
                continue
            idx = inst.hij_indices(i, j, y)
            outside = ~mask[idx]
            if outside.any():
                return {"i": i, "j": j, "A": list(A), "sum": top, "y": y,
                        "g": int(idx[np.argmax(outside)])}
        return None


def double_coset_reps(inst: Instance) -> list[int]:
    """Representatives of H \\ G / H."""
    if "dcosets" not in inst._cache:
        G, Hp = inst.G, inst.H.perms
        seen = np.zeros(G.order, dtype=bool)
        reps = []
        for a in range(G.order):
            if seen[a]:
                continue
            reps.append(a)
            seen |= _double_coset_mask(inst, Hp, G.perms[a])
        inst._cache["dcosets"] = reps
    return inst._cache["dcosets"]


class C11(Condition):
    """For a in G, i != j, t and h in H_t, the set
    ``H_ij([a h a^-1 (e_i)]_j) ∩ <a, H>`` is nonempty.

    The verdict for a depends only on its double coset HaH: replacing a by
    h1 a h2 conjugates every H_ij(x) by h1 and leaves <a, H> unchanged.
    """
    number = 11
    record_all = True

    def domain(self, inst, opts):
        return [(a,) for a in double_coset_reps(inst)]

    def _needed(self, inst, a):
        perm = inst.G.perms[a]
        pinv = np.argsort(perm)
        need = {}
        for t in range(inst.n):
            for h in inst.h_i(t).perms:
                conj = perm[h[pinv]]
                for i, j in inst.pairs():
                    x = int(inst.comp[conj[inst.atoms[i]], j])
                    need.setdefault((i, j, x), set()).add(t)
        return need

    def check(self, inst, item, opts, ctx):
        (a,) = item
        G = inst.G
        need = self._needed(inst, a)
        gens = np.concatenate([inst.H.generators, G.perms[[a]]])
        mask = np.zeros(G.order, dtype=bool)
        mask[0] = True
        frontier = np.array([0])
        missing = set(need)
        while True:
            missing = {k for k in missing if not (mask & (inst.labels(k[0], k[1]) == k[2])).any()}
            if not missing or not len(frontier):
                break
            before = mask.copy()
            mask = _step(G, gens, mask, frontier)
            frontier = np.flatnonzero(mask & ~before)
        failing_t = set()
        for k in missing:
            failing_t |= need[k]
        per = ctx.setdefault("per_t", {})
        for t in range(inst.n):
            per[t] = per.get(t, True) and t not in failing_t
        if not missing:
            return None
        if opts.get("reading11", "each-t") == "some-t" and len(failing_t) < inst.n:
            return None
        i, j, x = sorted(missing)[0]
        return {"a": a, "i": i, "j": j, "x": x, "t": sorted(failing_t)}

    def details(self, inst, opts, ctx):
        return {"reading": opts.get("reading11", "each-t"),
                "per_t": [{"t": t, "holds": v} for t, v in sorted(ctx.get("per_t", {}).items())]}


def _step(G, gens, mask, frontier):
    mask = mask.copy()
    rows = G.perms[frontier]
    for g in gens:
        mask[G.index(g[rows])] = True
    return mask


class C12(Condition):
    number = 12

    def domain(self, inst, opts):
        return [(x,) for x in sorted(inst.l0_prime)]

    def check(self, inst, item, opts, ctx):
        (x,) = item
        if x in inst.lbar0:
            return None
        return {"x": x}


class C13(Condition):
    number = 13

    def domain(self, inst, opts):
        return [(i, int(x)) for i in range(inst.n) for x in inst.below(inst.atoms[i])
                if x != inst.atoms[i]]

    def check(self, inst, item, opts, ctx):
        i, x = item
        lat = inst.lattice
        if any(lat.leq[x, y] for y in coatoms_of(lat, lat.bottom, inst.atoms[i])):
            return None
        return {"i": i, "x": x}


class C14(Condition):
    # Finite lattices have finite length; the measured length is the diagnostic.
    number = 14
    needs_radicals = True

    def domain(self, inst, opts):
        return [()]

    def check(self, inst, item, opts, ctx):
        return None

    def details(self, inst, opts, ctx):
        up = inst.upper
        return {"w": inst.radicals[1], "length": up.length, "size": up.size}


class C15(Condition):
    number = 15
    needs_radicals = True

    def domain(self, inst, opts):
        ws, _ = inst.radicals
        lat = inst.lattice
        items = []
        for i, j in inst.pairs():
            lab = inst.labels(i, j)
            ok = lab >= 0
            ok[ok] = lat.leq[lab[ok], ws[j]]
            items += [(i, j, int(t)) for t in np.flatnonzero(ok)]
        return items

    def check(self, inst, item, opts, ctx):
        i, j, t = item
        up = np.array(inst.upper.elements)
        th = inst.G.perms[t][inst.H.perms]
        if (th[:, up] == up).all(axis=1).any():
            return None
        return {"t": t, "i": i, "j": j}


class C16(Condition):
    number = 16
    needs_radicals = True

    def domain(self, inst, opts):
        return [()]

    def check(self, inst, item, opts, ctx):
        return None

    def details(self, inst, opts, ctx):
        up = set(inst.upper.elements)
        return {"size": len(up & inst.lbar0)}


def _below_count(inst, x):
    return len(inst.below(x))


# Size of each condition's unreduced universal domain: the assignments of
# the outer universally quantified variables that the quotient items stand for.
UNIVERSE = {
    1: lambda inst: 1,
    2: lambda inst: inst.n * inst.n * inst.G.order,
    3: lambda inst: inst.n * inst.G.order,
    4: lambda inst: inst.n * inst.n * inst.G.order,
    5: lambda inst: len(CONDITIONS[5].domain(inst, {})) * inst.G.order,
    6: lambda inst: inst.n * inst.n * inst.G.order ** 2,
    7: lambda inst: sum(_below_count(inst, inst.atoms[j]) for _, j in inst.pairs()),
    8: lambda inst: len(inst.pairs()) * inst.G.order,
    9: lambda inst: inst.lattice.size * len(inst.pairs()),
    10: lambda inst: len(CONDITIONS[10].domain(inst, {})),
    11: lambda inst: inst.G.order,
    12: lambda inst: len(inst.l0_prime),
    13: lambda inst: sum(_below_count(inst, e) - 1 for e in inst.atoms),
    14: lambda inst: 1,
    15: lambda inst: len(CONDITIONS[15].domain(inst, {})),
    16: lambda inst: 1,
}


CONDITIONS: dict[int, Condition] = {c.number: c for c in (
    C1(), C2(), C3(), C4(), C5(), C6(), C7(), C8(), C9(), C10(), C11(), C12(), C13(), C14(),
    C15(), C16())}


def _options(reading4, reading11):
    for r in (reading4, reading11):
        if r not in READINGS:
            raise ValueError(f"unknown reading {r!r}; expected one of {READINGS}")
    return {"reading4": reading4, "reading11": reading11}


def check_condition(inst: Instance, k: int, sample: int | None = None, seed: int = 0,
                    reading4: str = "each-t", reading11: str = "each-t") -> ConditionReport:
    """Evaluate condition k; ``sample`` caps the number of outer items."""
    cond = CONDITIONS[k]
    opts = _options(reading4, reading11)
    start = time.perf_counter()
    if cond.needs_radicals:
        try:
            inst.radicals
        except DegenerateAtom as exc:
            raise PrerequisiteMissing(f"condition {k} needs the radical elements: {exc}") from exc
    dom = cond.domain(inst, opts)
    items, sampled = dom, False
    if sample is not None and len(dom) > sample:
        rng = np.random.default_rng([seed, k])
        items = [dom[t] for t in np.sort(rng.choice(len(dom), size=sample, replace=False))]
        sampled = True
    ctx: dict = {}
    witness = None
    for item in items:
        w = cond.check(inst, item, opts, ctx)
        if w is not None and witness is None:
            witness = {"condition": k, "item": _jsonable(item), "bound": _jsonable(w)}
            if not cond.record_all:
                break
    details = _jsonable(cond.details(inst, opts, ctx))
    if not dom:
        details["vacuous"] = True
    return ConditionReport(
        condition=k,
        verdict=FAILS if witness else HOLDS,
        witness=witness,
        domain_sizes=_sizes(inst, k, dom, items),
        elapsed_ms=round(1000 * (time.perf_counter() - start), 3),
        sampled=sampled,
        details=details,
    )


def check_all(inst: Instance, conditions=range(1, 17), sample: int | None = None, seed: int = 0,
              jobs: int = 1, reading4: str = "each-t", reading11: str = "each-t"):
    """Reports for the requested conditions, in condition order."""
    def run(k):
        try:
            return check_condition(inst, k, sample=sample, seed=seed, reading4=reading4,
                                   reading11=reading11)
        except PrerequisiteMissing as exc:
            return ConditionReport(k, SKIPPED, details={"reason": str(exc)})

    ks = list(conditions)
    if jobs > 1:
        # warm shared caches so workers only read them
        inst.l0_prime, inst.lbar0, inst.upper
        for i, j in inst.pairs():
            inst.labels(i, j)
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(run, ks))
    return [run(k) for k in ks]


def _sizes(inst, k, dom, items):
    universe = UNIVERSE[k](inst)
    covered = universe if len(items) == len(dom) else universe * len(items) // len(dom)
    return {"items": len(dom), "checked": len(items), "universe": universe, "covered": covered,
            "L": inst.lattice.size, "G": inst.G.order, "H": inst.H.order}


def replay(inst: Instance, witness: dict, reading4: str = "each-t",
           reading11: str = "each-t") -> bool:
    """True when the witnessed item still violates its condition."""
    cond = CONDITIONS[witness["condition"]]
    item = _tupled(witness["item"])
    return cond.check(inst, item, _options(reading4, reading11), {}) is not None


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _tupled(obj):
    if isinstance(obj, list):
        return tuple(_tupled(v) for v in obj)
    return obj
