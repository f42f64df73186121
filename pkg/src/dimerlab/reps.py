"""Thin representations (dimension 0 or 1 at each vertex) with exact values."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .contraction import Contraction
from .dimer import DimerQuiver, Path
from .graphs import is_strongly_connected
from .impression import Impression, evaluate
from .rewrite import rewrite_rules
from .rings import LocusVerdict, in_U


class ContractedArrowVanishes(ValueError):
    pass


@dataclass(frozen=True)
class Representation:
    quiver: DimerQuiver
    dims: Mapping[str, int]
    values: Mapping[str, Fraction]

    def __post_init__(self):
        for v, n in self.dims.items():
            if n not in (0, 1):
                raise ValueError(f"dimension at {v!r} must be 0 or 1")
        for a in self.quiver.arrows:
            if self.values.get(a.id, 0) and not (self.dims[a.tail] and self.dims[a.head]):
                raise ValueError(f"arrow {a.id!r} is non-zero but touches a zero space")

    @property
    def support(self) -> list[str]:
        return [v for v in self.quiver.vertices if self.dims[v]]

    @property
    def dimension_vector(self) -> dict[str, int]:
        return dict(self.dims)

    def live_arrows(self) -> list[str]:
        return [a.id for a in self.quiver.arrows if self.values.get(a.id, 0) != 0]

    def path_value(self, p: Path) -> Fraction:
        t, h = self.quiver.path_ends(p)
        if not (self.dims[t] and self.dims[h]):
            return Fraction(0)
        val = Fraction(1)
        for a in p.arrows:
            val *= self.values.get(a, Fraction(0))
        return val

    def satisfies_relations(self) -> bool:
        return all(self.path_value(Path(r.plus)) == self.path_value(Path(r.minus))
                   for r in rewrite_rules(self.quiver))

    def to_json(self) -> dict:
        return {"dims": dict(self.dims), "values": {a: str(v) for a, v in self.values.items()}}


def rep_from_point(imp: Impression, point: Mapping[str, Fraction]) -> Representation:
    d = imp.dimer
    vals = {a: evaluate(imp.arrow_monomial[a], imp.variables, point) for a in d.arrow_ids}
    return Representation(d, {v: 1 for v in d.vertices}, vals)


def cycle_rep(d: DimerQuiver, p: Path, value: Fraction = Fraction(1)) -> Representation:
    """One-dimensional spaces along the cycle ``p``, zero elsewhere."""
    t, h = d.path_ends(p)
    if t != h:
        raise ValueError("path is not a cycle")
    amap = d.arrow_map
    on = {amap[a].tail for a in p.arrows}
    return Representation(d, {v: int(v in on) for v in d.vertices},
                          {a: Fraction(value) for a in p.arrows})


def is_simple(rep: Representation) -> bool:
    """A thin module is simple iff its support is strongly connected through
    non-zero arrows, since submodules are the vertex sets closed under them."""
    sup = rep.support
    if not sup:
        return False
    edges = [(rep.quiver.tail(a), rep.quiver.head(a)) for a in rep.live_arrows()]
    return is_strongly_connected(sup, edges)


def is_simple_bruteforce(rep: Representation) -> bool:
    """Enumerate every vertex subset of the support and count the closed ones."""
    sup = rep.support
    n = len(sup)
    if n == 0:
        return False
    if n > 22:
        raise ValueError("support too large for exhaustive check")
    idx = {v: k for k, v in enumerate(sup)}
    masks = np.arange(1 << n, dtype=np.int64)
    bad = np.zeros(1 << n, dtype=bool)
    for a in rep.live_arrows():
        u, v = idx[rep.quiver.tail(a)], idx[rep.quiver.head(a)]
        bad |= (((masks >> u) & 1) == 1) & (((masks >> v) & 1) == 0)
    return int(np.count_nonzero(~bad)) == 2


def gl_normalize(rep: Representation, prefer: Sequence[str] = ()) -> tuple[Representation, dict[str, Fraction]]:
    """Rescale by a vertex gauge so a spanning forest of live arrows is 1.

    Arrows in ``prefer`` enter the forest first.  Returns the new module and
    the gauge ``g`` with new value ``g[head] * old / g[tail]``.
    """
    d = rep.quiver
    live = set(rep.live_arrows())
    order = [a for a in prefer if a in live] + sorted(a for a in live if a not in set(prefer))
    parent = {v: v for v in d.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    tree = []
    for a in order:
        x, y = find(d.tail(a)), find(d.head(a))
        if x != y:
            parent[x] = y
            tree.append(a)
    adj = defaultdict(list)
    for a in tree:
        adj[d.tail(a)].append((a, d.head(a), 1))
        adj[d.head(a)].append((a, d.tail(a), -1))
    gauge: dict[str, Fraction] = {}
    for root in d.vertices:
        if root in gauge:
            continue
        gauge[root] = Fraction(1)
        stack = [root]
        while stack:
            v = stack.pop()
            for a, w, direction in adj[v]:
                if w in gauge:
                    continue
                # new value g[h] * val / g[t] must be 1
                val = rep.values[a]
                gauge[w] = gauge[v] / val if direction == 1 else gauge[v] * val
                stack.append(w)
    new_vals = {a: gauge[d.head(a)] * Fraction(v) / gauge[d.tail(a)] for a, v in rep.values.items()}
    return Representation(d, rep.dims, new_vals), gauge


def transfer_back(c: Contraction, rep: Representation) -> Representation:
    """Module over the source: contracted arrows act by 1 between the spaces
    they join, other arrows as their images do."""
    dims = {v: rep.dims[c.vertex_map[v]] for v in c.source.vertices}
    sset = set(c.contracted)
    vals = {}
    for a in c.source.arrows:
        if a.id in sset:
            vals[a.id] = Fraction(dims[a.tail])
        else:
            vals[a.id] = Fraction(rep.values.get(a.id, 0))
    return Representation(c.source, dims, vals)


def transfer_forward(c: Contraction, rep: Representation) -> Representation:
    """Module over the target, defined when every contracted arrow acts invertibly."""
    for a in c.contracted:
        if rep.values.get(a, 0) == 0:
            raise ContractedArrowVanishes(f"contracted arrow {a!r} acts by zero")
    norm, _ = gl_normalize(rep, prefer=c.contracted)
    dims = {c.vertex_map[v]: norm.dims[v] for v in c.source.vertices}
    sset = set(c.contracted)
    vals = {a.id: norm.values.get(a.id, Fraction(0)) for a in c.source.arrows if a.id not in sset}
    return Representation(c.target, dims, vals)


def isomorphic(r1: Representation, r2: Representation) -> bool:
    """Thin modules with the same support and live arrows are isomorphic iff
    their cycle values agree.  Equal live sets give the same forest in
    :func:`gl_normalize`, so the normal forms can be compared directly."""
    if r1.quiver != r2.quiver or dict(r1.dims) != dict(r2.dims):
        return False
    if set(r1.live_arrows()) != set(r2.live_arrows()):
        return False
    n1, _ = gl_normalize(r1)
    n2, _ = gl_normalize(r2)
    return all(n1.values.get(a, 0) == n2.values.get(a, 0) for a in r1.quiver.arrow_ids)


# -- Azumaya loci -------------------------------------------------------------

def azumaya_Aprime(target_imp: Impression, point: Mapping[str, Fraction]) -> bool:
    return is_simple(rep_from_point(target_imp, point))


@dataclass
class AzumayaVerdict:
    status: str  # yes | no | unknown
    in_Aprime: bool
    locus: LocusVerdict | None = field(default=None)

    def to_json(self) -> dict:
        return {"status": self.status, "in_Aprime": self.in_Aprime,
                "in_U": None if self.locus is None else self.locus.to_json()}


def azumaya_A(source_imp: Impression, target_imp: Impression, point: Mapping[str, Fraction],
              budget: int, **locus_kw) -> AzumayaVerdict:
    """Membership in the intersection of the target's Azumaya locus with ``U``.

    Extra keyword arguments (cached generators, a cycle oracle) go to :func:`in_U`.
    """
    prime = azumaya_Aprime(target_imp, point)
    loc = in_U(source_imp, point, budget, **locus_kw)
    if not prime or loc.status == "NotInU":
        return AzumayaVerdict("no", prime, loc)
    if loc.status == "InU":
        return AzumayaVerdict("yes", prime, loc)
    return AzumayaVerdict("unknown", prime, loc)
