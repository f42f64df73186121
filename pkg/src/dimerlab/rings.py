"""Monomial rings attached to an impression.

``S`` is generated by the images of all cycles; ``R`` consists of the
monomials realised by a cycle at *every* vertex.  Membership in ``R`` is
decided exactly.  Generating sets are computed up to a budget and carry a
flag saying whether a larger budget produced anything new.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .dimer import DimerQuiver, Path
from .graphs import strongly_connected_components
from .impression import Impression, Monomial, degree, divides, evaluate, mono_div, mono_mul
from .rewrite import Rewriter


class SaturationNotReached(RuntimeError):
    pass


@dataclass(frozen=True)
class Generators:
    generators: tuple[Monomial, ...]
    budget: int
    saturated: bool

    def to_json(self, imp: Impression) -> dict:
        return {"generators": [imp.fmt(m) for m in self.generators],
                "budget": self.budget, "saturated": self.saturated}


def _sort_key(m: Monomial) -> tuple:
    return (degree(m), tuple(-e for e in m))


def cycle_witnesses_at(imp: Impression, vertex: str, budget: int) -> dict[Monomial, Path]:
    """A shortest cycle at ``vertex`` for each image reached within the budget."""
    d = imp.dimer
    out = defaultdict(list)
    for a in d.arrows:
        out[a.tail].append((a.id, a.head, imp.arrow_monomial[a.id]))
    one = (0,) * imp.nvars
    seen = {(vertex, one)}
    found = {one: Path((), vertex)}
    frontier = [(vertex, one, ())]
    for _ in range(budget):
        nxt = []
        for v, m, path in frontier:
            for aid, w, am in out[v]:
                st = (w, mono_mul(m, am))
                if st in seen:
                    continue
                seen.add(st)
                nxt.append((w, st[1], path + (aid,)))
                if w == vertex and st[1] not in found:
                    found[st[1]] = Path(path + (aid,))
        frontier = nxt
    return found


def cycle_monomials_at(imp: Impression, vertex: str, budget: int) -> set[Monomial]:
    """Images of cycles at ``vertex`` of length <= budget (including the trivial one)."""
    return set(cycle_witnesses_at(imp, vertex, budget))


def cycle_monomials(imp: Impression, budget: int) -> dict[str, set[Monomial]]:
    return {v: cycle_monomials_at(imp, v, budget) for v in imp.dimer.vertices}


@dataclass(frozen=True)
class CycleFamily:
    """Cycles of one homology class with no null-homologous proper subcycle,
    grouped by base vertex."""

    hom: tuple[int, int]
    cycles: Mapping[str, tuple[Path, ...]]

    def covers(self, vertices: Iterable[str]) -> bool:
        return all(self.cycles.get(v) for v in vertices)

    @property
    def arrows(self) -> set[str]:
        return {a for ps in self.cycles.values() for p in ps for a in p.arrows}

    def all_cycles(self) -> list[Path]:
        return [p for v in sorted(self.cycles) for p in self.cycles[v]]


def _has_null_subcycle(p: tuple[str, ...], tails: Mapping[str, str], heads: Mapping[str, str],
                       labels: Mapping[str, tuple[int, int]]) -> bool:
    n = len(p)
    for i in range(n):
        x = y = 0
        for j in range(i, n):
            dx, dy = labels[p[j]]
            x += dx
            y += dy
            if (i, j) != (0, n - 1) and x == 0 and y == 0 and heads[p[j]] == tails[p[i]]:
                return True
    return False


def is_family_cycle(d: DimerQuiver, p: Path, rewriter: Rewriter | None = None) -> bool:
    """True when ``p`` is a cycle of non-zero class belonging to a cycle family,
    with the same test :func:`cycle_families` applies."""
    from .dimer import homology_labels

    t, h = d.path_ends(p)
    labels = homology_labels(d).labels
    if t != h or not p.arrows or homology_labels(d).hom(p) == (0, 0):
        return False
    rw = rewriter or Rewriter(d)
    amap = d.arrow_map
    tails = {a: amap[a].tail for a in amap}
    heads = {a: amap[a].head for a in amap}
    slack = max(len(f.arrows) for f in d.faces)
    return not any(_has_null_subcycle(m, tails, heads, labels)
                   for m in rw.closure(p.arrows, len(p.arrows) + slack))


def cycle_families(d: DimerQuiver, budget: int, window: int = 1,
                   rewriter: Rewriter | None = None) -> list[CycleFamily]:
    """Families for every non-zero class in ``[-window, window]^2``.

    A cycle qualifies when no path equivalent to it (within a budget of its
    length plus one face) has a proper subpath that is a null-homologous
    cycle.
    """
    from .dimer import homology_labels

    rw = rewriter or Rewriter(d)
    hl = homology_labels(d)
    labels = hl.labels
    amap = d.arrow_map
    tails = {a: amap[a].tail for a in amap}
    heads = {a: amap[a].head for a in amap}
    slack = max(len(f.arrows) for f in d.faces)
    fams: dict[tuple[int, int], dict[str, list[Path]]] = defaultdict(lambda: defaultdict(list))
    for v in sorted(d.vertices):
        stack = [((), v, (0, 0))]
        while stack:
            p, w, h = stack.pop()
            if p and w == v and h != (0, 0) and max(abs(h[0]), abs(h[1])) <= window:
                if not any(_has_null_subcycle(m, tails, heads, labels)
                           for m in rw.closure(p, len(p) + slack)):
                    fams[h][v].append(Path(p))
            if len(p) == budget:
                continue
            for a in sorted(d.out_arrows(w), reverse=True):
                np_ = p + (a,)
                if _has_null_subcycle(np_, tails, heads, labels):
                    continue
                dx, dy = labels[a]
                stack.append((np_, heads[a], (h[0] + dx, h[1] + dy)))
    out = []
    for u in sorted(fams):
        cyc = {v: tuple(sorted(ps, key=lambda x: (len(x), x.arrows))) for v, ps in fams[u].items()}
        out.append(CycleFamily(u, cyc))
    return out


def in_monoid(m: Monomial, gens: Sequence[Monomial]) -> bool:
    gens = tuple(g for g in gens if any(g))

    @lru_cache(maxsize=None)
    def go(r: Monomial) -> bool:
        if not any(r):
            return True
        return any(divides(g, r) and go(mono_div(r, g)) for g in gens)

    return go(tuple(m))


def irreducibles(elements: Iterable[Monomial]) -> tuple[Monomial, ...]:
    """Minimal generators of the monoid generated by ``elements``."""
    kept: list[Monomial] = []
    for m in sorted(set(elements), key=_sort_key):
        if any(m) and not in_monoid(m, kept):
            kept.append(m)
    return tuple(kept)


def generators_S(imp: Impression, budget: int, strict: bool = False) -> Generators:
    def at(L: int) -> tuple[Monomial, ...]:
        allm = set()
        for fam in cycle_monomials(imp, L).values():
            allm |= fam
        return irreducibles(allm)

    g1, g2 = at(budget), at(budget + 2)
    saturated = g1 == g2
    if strict and not saturated:
        raise SaturationNotReached(f"cycle monoid gained generators between budgets {budget} and {budget + 2}")
    return Generators(g1, budget, saturated)


# -- exact membership ---------------------------------------------------------

class CycleOracle:
    """Exact membership of monomials in the per-vertex cycle monoids.

    A cycle at ``i`` with image ``m`` exists iff the state ``(i, 0)`` is
    reachable from ``(i, m)`` where a step along an arrow subtracts its
    monomial; the state space is finite, so no length budget is needed.
    """

    def __init__(self, imp: Impression):
        self.imp = imp
        self.out = defaultdict(list)
        for a in imp.dimer.arrows:
            self.out[a.tail].append((a.id, a.head, imp.arrow_monomial[a.id]))
        self._cache: dict[tuple[str, Monomial], Path | None] = {}

    def witness(self, vertex: str, m: Monomial) -> Path | None:
        """A cycle at ``vertex`` with image ``m``, or None if there is none."""
        key = (vertex, tuple(m))
        if key in self._cache:
            return self._cache[key]
        zero = (0,) * len(m)
        if key[1] == zero:
            self._cache[key] = Path((), vertex)
            return self._cache[key]
        start = (vertex, key[1])
        parent: dict = {start: None}
        todo = deque([start])
        result = None
        while todo and result is None:
            st = todo.popleft()
            v, r = st
            for aid, w, am in self.out[v]:
                if not divides(am, r):
                    continue
                nxt = (w, mono_div(r, am))
                if nxt in parent:
                    continue
                parent[nxt] = (st, aid)
                if nxt == (vertex, zero):
                    result = nxt
                    break
                todo.append(nxt)
        if result is None:
            self._cache[key] = None
            return None
        arrows = []
        node = result
        while parent[node] is not None:
            node, aid = parent[node]
            arrows.append(aid)
        self._cache[key] = Path(tuple(reversed(arrows)))
        return self._cache[key]

    def in_W(self, vertex: str, m: Monomial) -> bool:
        return self.witness(vertex, m) is not None

    def in_R(self, m: Monomial) -> bool:
        return all(self.in_W(v, m) for v in self.imp.dimer.vertices)

    def missing_vertices(self, m: Monomial) -> list[str]:
        return [v for v in self.imp.dimer.vertices if not self.in_W(v, m)]


def monoid_elements(gens: Sequence[Monomial], max_degree: int) -> set[Monomial]:
    gens = [g for g in gens if any(g)]
    if not gens:
        return set()
    one = (0,) * len(gens[0])
    seen = {one}
    todo = [one]
    while todo:
        m = todo.pop()
        for g in gens:
            n = mono_mul(m, g)
            if degree(n) <= max_degree and n not in seen:
                seen.add(n)
                todo.append(n)
    return seen


def generators_R(imp: Impression, budget: int, strict: bool = False,
                 s_gens: Generators | None = None, oracle: CycleOracle | None = None) -> Generators:
    """Irreducible elements of ``R`` among monomials of ``S`` up to a degree bound.

    The degree bound is ``budget``; saturation compares with ``budget + 2``.
    """
    s_gens = s_gens or generators_S(imp, budget)
    oracle = oracle or CycleOracle(imp)

    def at(D: int) -> tuple[Monomial, ...]:
        elems = [m for m in monoid_elements(s_gens.generators, D) if oracle.in_R(m)]
        return irreducibles(elems)

    g1, g2 = at(budget), at(budget + 2)
    saturated = g1 == g2
    if strict and not saturated:
        raise SaturationNotReached(f"R gained generators between degrees {budget} and {budget + 2}")
    return Generators(g1, budget, saturated)


def is_in_R(imp: Impression, m: Monomial) -> bool:
    return CycleOracle(imp).in_R(m)


# -- the locus where S and R agree --------------------------------------------

@dataclass
class LocusVerdict:
    status: str  # InU | NotInU | Unknown
    certificates: list[dict] = field(default_factory=list)
    reason: str = ""

    def to_json(self) -> dict:
        return {"status": self.status, "certificates": self.certificates, "reason": self.reason}


def _nonvanishing_free(imp: Impression, point: Mapping[str, Fraction]) -> str | None:
    """A vertex at which every cycle through arrows alive at ``point`` has image 1.

    At such a vertex the only monomials of ``R`` not vanishing at the point
    are constants, so a generator outside ``R`` cannot be localised into it.
    """
    d = imp.dimer
    dead = imp.vanishing_arrows(point)
    alive = [a for a in d.arrows if a.id not in dead]
    comps = strongly_connected_components(d.vertices, [(a.tail, a.head) for a in alive])
    comp_of = {v: k for k, c in enumerate(comps) for v in c}
    rich = set()
    for a in alive:
        if comp_of[a.tail] == comp_of[a.head] and any(imp.arrow_monomial[a.id]):
            rich.add(comp_of[a.tail])
    for v in d.vertices:
        if comp_of[v] not in rich:
            return v
    return None


def in_U(imp: Impression, point: Mapping[str, Fraction], budget: int,
         s_gens: Generators | None = None, r_gens: Generators | None = None,
         oracle: CycleOracle | None = None) -> LocusVerdict:
    """Decide whether every generator of ``S`` lies in ``R`` localised at ``point``.

    A certificate for a generator ``s`` is a pair ``(s, f)`` with ``f`` in
    ``R``, ``f(point) != 0`` and ``s*f`` in ``R``.  Only monomial ``f`` need be
    searched since ``R`` is spanned by monomials.
    """
    s_gens = s_gens or generators_S(imp, budget)
    oracle = oracle or CycleOracle(imp)
    names = imp.variables
    certs = []
    pending = []
    for s in s_gens.generators:
        if not oracle.in_R(s):
            pending.append(s)
    if not pending:
        return LocusVerdict("InU", certs)
    witness = _nonvanishing_free(imp, point)
    if witness is not None:
        return LocusVerdict("NotInU", certs, f"{imp.fmt(pending[0])} is not in R and every cycle at "
                                             f"{witness} avoiding the zeros of the point is trivial")
    r_gens = r_gens or generators_R(imp, budget, s_gens=s_gens, oracle=oracle)
    alive_gens = [g for g in r_gens.generators if evaluate(g, names, point) != 0]
    multipliers = sorted(monoid_elements(alive_gens, budget), key=lambda m: (degree(m), m))
    for s in pending:
        for f in multipliers:
            if any(f) and oracle.in_R(mono_mul(s, f)):
                certs.append({"generator": imp.fmt(s), "multiplier": imp.fmt(f),
                              "product": imp.fmt(mono_mul(s, f))})
                break
        else:
            return LocusVerdict("Unknown", certs, f"no multiplier found for {imp.fmt(s)} up to degree {budget}")
    return LocusVerdict("InU", certs)
