"""Contracting a forest of arrows of one dimer to obtain another."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .dimer import DimerError, DimerQuiver, Path, validate
from .graphs import strongly_connected_components
from .impression import Impression, Monomial
from .matchings import enumerate_matchings
from .rewrite import Rewriter, default_budget


class ContractionError(ValueError):
    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(f"{code}: {message}")


@dataclass(frozen=True)
class Contraction:
    source: DimerQuiver
    target: DimerQuiver
    contracted: tuple[str, ...]
    vertex_map: dict[str, str] = field(compare=False)

    def psi(self, p: Path) -> Path:
        """Image path: contracted arrows dropped, empty images keep their base."""
        t, _ = self.source.path_ends(p)
        kept = tuple(a for a in p.arrows if a not in set(self.contracted))
        return Path(kept, None if kept else self.vertex_map[t])

    def impression(self, target_imp: Impression | None = None) -> Impression:
        target_imp = target_imp or Impression.from_dimer(self.target)
        return Impression.pulled_back(self.source, self.contracted, target_imp)


def _union_find(vertices: Iterable[str]):
    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    return parent, find


def contract(d: DimerQuiver, stars: Sequence[str]) -> Contraction:
    """Contract the arrows ``stars``; they must form a forest with no cycles.

    Each merged class of vertices is named after its member of highest
    degree (ties broken by name), so the larger vertex survives.
    """
    amap = d.arrow_map
    unknown = [a for a in stars if a not in amap]
    if unknown:
        raise ContractionError("UnknownArrow", f"arrows {unknown} are not in the quiver")
    stars = tuple(dict.fromkeys(stars))
    edges = [(amap[a].tail, amap[a].head) for a in stars]
    for comp in strongly_connected_components(d.vertices, edges):
        if len(comp) > 1:
            raise ContractionError("CycleContracted", f"arrows among {sorted(comp)} form an oriented cycle")
    for a in stars:
        if amap[a].tail == amap[a].head:
            raise ContractionError("CycleContracted", f"arrow {a!r} is a loop")
    parent, find = _union_find(d.vertices)
    for a in stars:
        x, y = find(amap[a].tail), find(amap[a].head)
        if x == y:
            raise ContractionError("NotForest", f"arrow {a!r} closes an unoriented cycle")
        parent[x] = y

    deg = {v: 0 for v in d.vertices}
    for a in d.arrows:
        deg[a.tail] += 1
        deg[a.head] += 1
    classes: dict[str, list[str]] = {}
    for v in d.vertices:
        classes.setdefault(find(v), []).append(v)
    name = {}
    for members in classes.values():
        rep = min(members, key=lambda v: (-deg[v], v))
        for v in members:
            name[v] = rep
    sset = set(stars)
    raw = {
        "vertices": [v for v in d.vertices if name[v] == v],
        "arrows": [{"id": a.id, "tail": name[a.tail], "head": name[a.head]}
                   for a in d.arrows if a.id not in sset],
        "faces": [{"arrows": [x for x in f.arrows if x not in sset], "sign": f.sign} for f in d.faces],
    }
    try:
        target = validate(raw)
    except DimerError as exc:
        raise ContractionError("TargetNotDimer", str(exc)) from None
    return Contraction(d, target, stars, name)


# -- checks -------------------------------------------------------------------

def check_relations_preserved(c: Contraction, budget: int | None = None) -> list[str]:
    """Arrows whose defining relation fails to map to an equivalence.

    An empty list means every relation of the source is sent to a relation of
    the target within the budget.
    """
    from .rewrite import rewrite_rules
    rw = Rewriter(c.target)
    budget = default_budget(c.target) if budget is None else budget
    bad = []
    for r in rewrite_rules(c.source):
        x, y = c.psi(Path(r.plus)), c.psi(Path(r.minus))
        if not rw.equivalent(x, y, budget).equivalent:
            bad.append(r.arrow)
    return bad


def matching_correspondence(c: Contraction) -> dict:
    """Compare simple matchings of source and target.

    Every simple matching of the target should come from one of the source
    by deleting contracted arrows when the contraction is cyclic.  The
    report lists both sides and which target matchings have a preimage.
    """
    src = enumerate_matchings(c.source).simple_matchings
    tgt = enumerate_matchings(c.target).simple_matchings
    sset = set(c.contracted)
    restricted = {frozenset(m.arrows - sset) for m in src}
    return {
        "source": [sorted(m.arrows) for m in src],
        "target": [sorted(m.arrows) for m in tgt],
        "target_with_preimage": [sorted(m.arrows) for m in tgt if m.arrows in restricted],
        "contracted_in_source_matchings": sorted({a for m in src for a in m.arrows & sset}),
    }


@dataclass
class SComparison:
    status: str  # EqualUpTo | Differ
    budget: int
    source_generators: tuple[Monomial, ...]
    target_generators: tuple[Monomial, ...]
    saturated: bool
    witness: Monomial | None = None
    witness_side: str | None = None  # which monoid contains the witness
    correspondence: dict | None = None

    @property
    def equal(self) -> bool:
        return self.status == "EqualUpTo"

    def to_json(self, imp: Impression) -> dict:
        out = {"status": self.status, "budget": self.budget, "saturated": self.saturated,
               "source_generators": [imp.fmt(m) for m in self.source_generators],
               "target_generators": [imp.fmt(m) for m in self.target_generators]}
        if self.witness is not None:
            out["witness"] = imp.fmt(self.witness)
            out["witness_in"] = self.witness_side
        if self.correspondence is not None:
            out["matching_correspondence"] = self.correspondence
        return out


def check_S_equals_Sprime(c: Contraction, budget: int | None = None,
                          target_imp: Impression | None = None) -> SComparison:
    """Bounded comparison of the cycle monoids before and after contracting.

    Both monoids are read in the target's variables, the source through the
    pulled-back impression.  They agree when each side's generators lie in
    the other's monoid at ``budget`` and at ``budget + 2``.
    """
    from .rings import generators_S, in_monoid
    imp_t = target_imp or Impression.from_dimer(c.target)
    imp_s = c.impression(imp_t)
    budget = default_budget(c.target) if budget is None else budget
    gs = generators_S(imp_s, budget)
    gt = generators_S(imp_t, budget)
    corr = matching_correspondence(c)
    for m in gs.generators:
        if not in_monoid(m, gt.generators):
            return SComparison("Differ", budget, gs.generators, gt.generators,
                               gs.saturated and gt.saturated, m, "source", corr)
    for m in gt.generators:
        if not in_monoid(m, gs.generators):
            return SComparison("Differ", budget, gs.generators, gt.generators,
                               gs.saturated and gt.saturated, m, "target", corr)
    return SComparison("EqualUpTo", budget, gs.generators, gt.generators,
                       gs.saturated and gt.saturated, None, None, corr)
