"""Free subalgebras generated by pairs of non-cancellative cycles.

A witness is a pair of cycles ``w1 = p.r`` and ``w2 = q.r`` at one vertex
(paths read in traversal order) with equal monomial image, not equivalent,
and with image not divisible by the central monomial.  Freeness of the
subalgebra they generate is only ever checked up to a word length.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product

from .contraction import Contraction
from .dimer import DimerQuiver, Path
from .impression import Impression, divides
from .rewrite import Rewriter, noncancellative_pairs


@dataclass(frozen=True)
class FreenessWitness:
    w1: Path
    w2: Path
    p: Path
    q: Path
    r: Path
    vertex: str
    method: str  # "inout" (construction from a degree-one vertex) or "pairs"

    def to_json(self) -> dict:
        return {"w1": list(self.w1.arrows), "w2": list(self.w2.arrows), "p": list(self.p.arrows),
                "q": list(self.q.arrows), "r": list(self.r.arrows), "vertex": self.vertex,
                "method": self.method}


@dataclass
class FreenessResult:
    status: str  # FreeUpTo | RelationFound
    word_length: int
    u: tuple[int, ...] = ()
    v: tuple[int, ...] = ()

    @property
    def free(self) -> bool:
        return self.status == "FreeUpTo"

    def to_json(self) -> dict:
        out = {"status": self.status, "word_length": self.word_length}
        if not self.free:
            out["u"] = ["w1" if k == 0 else "w2" for k in self.u]
            out["v"] = ["w1" if k == 0 else "w2" for k in self.v]
        return out


@dataclass
class WitnessSearch:
    witness: FreenessWitness | None
    budget: int
    rejected: list[dict] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.witness is not None


def inout_hypothesis(c: Contraction) -> bool:
    """Every contracted arrow has an endpoint with exactly one arrow in and one out."""
    d = c.source
    indeg = {v: 0 for v in d.vertices}
    outdeg = {v: 0 for v in d.vertices}
    for a in d.arrows:
        outdeg[a.tail] += 1
        indeg[a.head] += 1
    amap = d.arrow_map
    return all(any(indeg[v] == 1 and outdeg[v] == 1 for v in (amap[x].tail, amap[x].head))
               for x in c.contracted)


def verify_freeness(d: DimerQuiver, w: FreenessWitness, n: int, rewriter: Rewriter | None = None,
                    budget: int | None = None) -> FreenessResult:
    """Check that distinct words of length <= n in ``w1, w2`` stay inequivalent.

    Words of different lengths have different monomial images, so only words
    of equal length are compared, by intersecting bounded closures.
    """
    rw = rewriter or Rewriter(d)
    if w.w1.arrows == w.w2.arrows:
        return FreenessResult("RelationFound", 1, (0,), (1,))
    longest = max(len(w.w1), len(w.w2))
    slack = max(len(f.arrows) for f in rw.dimer.faces)
    gens = (w.w1.arrows, w.w2.arrows)
    for k in range(1, n + 1):
        words = list(product((0, 1), repeat=k))
        seen: dict[tuple[str, ...], tuple[int, ...]] = {}
        L = budget if budget is not None else k * longest + slack
        for word in words:
            path = tuple(x for idx in word for x in gens[idx])
            for member in rw.closure(path, max(L, len(path))):
                other = seen.get(member)
                if other is not None and other != word:
                    return FreenessResult("RelationFound", k, other, word)
                seen[member] = word
    return FreenessResult("FreeUpTo", n)


def _inout_candidates(c: Contraction) -> list[tuple[Path, Path, str, str]]:
    """Pairs (p, q) whose composites with a then b are both faces, for every
    vertex whose only in-arrow a and only out-arrow b follow each other in
    both faces through a."""
    d = c.source
    out = []
    for v in d.vertices:
        ins, outs = d.in_arrows(v), d.out_arrows(v)
        if len(ins) != 1 or len(outs) != 1:
            continue
        a, b = ins[0], outs[0]
        comps = []
        for f in d.faces:
            n = len(f.arrows)
            for k in range(n):
                if f.arrows[k] == a and f.arrows[(k + 1) % n] == b:
                    comps.append(tuple(f.arrows[(k + 2 + j) % n] for j in range(n - 2)))
        if len(comps) == 2 and comps[0] != comps[1] and comps[0] and comps[1]:
            p, q = sorted(comps)
            out.append((Path(p), Path(q), a, b))
    return out


def _connectors(c: Contraction, start: str, goal: str, max_len: int) -> list[Path]:
    """Paths from ``start`` to ``goal`` of length <= max_len, shortest first."""
    d = c.source
    amap = d.arrow_map
    res = []
    if start == goal:
        res.append(Path((), start))
    todo = deque([((), start)])
    while todo:
        p, v = todo.popleft()
        if len(p) == max_len:
            continue
        for a in sorted(d.out_arrows(v)):
            np_ = p + (a,)
            w = amap[a].head
            if w == goal:
                res.append(Path(np_))
            todo.append((np_, w))
    return res


def _pair_candidates(c: Contraction, budget: int, rw: Rewriter) -> list[tuple[Path, Path, str]]:
    d = c.source
    pairs = noncancellative_pairs(d, budget, rewriter=rw)
    pairs = sorted(pairs, key=lambda x: (d.path_ends(x.p)[0] != d.path_ends(x.p)[1],
                                         len(x.p) + len(x.q), x.p.arrows, x.q.arrows))
    return [(ce.p, ce.q, "pairs") for ce in pairs if ce.p.arrows and ce.q.arrows]


def find_witness(c: Contraction, budget: int, word_length: int = 2, imp: Impression | None = None,
                 rewriter: Rewriter | None = None, max_connector: int = 4,
                 pair_budget: int = 8) -> WitnessSearch:
    """Search for a freeness witness in the source of ``c``.

    Candidates come first from the degree-one construction, then from
    bounded non-cancellative pairs.  Each candidate is closed into cycles by
    a connecting path, checked against the three witness conditions, and
    kept only if freeness survives ``word_length``.  Every rejected candidate
    is listed with its reason.
    """
    imp = imp or c.impression()
    rw = rewriter or Rewriter(c.source)
    sigma = imp.sigma()
    d = c.source
    rejected: list[dict] = []
    tried = set()

    def attempt(p: Path, q: Path, method: str) -> FreenessWitness | None:
        i, j = d.path_ends(p)
        reason = "no connecting path"
        for r in _connectors(c, j, i, max_connector):
            w1, w2 = p + r, q + r
            e1 = imp.eta(w1)
            if e1 != imp.eta(w2):
                reason = "images differ"
                continue
            if divides(sigma, e1):
                reason = "image divisible by the unit-cycle monomial"
                continue
            if rw.equivalent(w1, w2, budget).equivalent:
                reason = "cycles are equivalent"
                continue
            wit = FreenessWitness(w1, w2, p, q, r, i, method)
            fr = verify_freeness(d, wit, word_length, rw)
            if fr.free:
                return wit
            reason = "relation between words"
            rejected.append({"p": list(p.arrows), "q": list(q.arrows), "reason": reason,
                             "w1": list(w1.arrows), "w2": list(w2.arrows), **fr.to_json()})
            return None
        rejected.append({"p": list(p.arrows), "q": list(q.arrows), "reason": reason})
        return None

    sources = [lambda: [(p, q, "inout") for p, q, _, _ in _inout_candidates(c)]]
    for pb in sorted({min(budget, x) for x in (4, 6, pair_budget)}):
        sources.append(lambda pb=pb: _pair_candidates(c, pb, rw))
    for source in sources:
        for p, q, method in source():
            if (p.arrows, q.arrows) in tried:
                continue
            tried.add((p.arrows, q.arrows))
            wit = attempt(p, q, method)
            if wit is not None:
                return WitnessSearch(wit, budget, rejected)
    return WitnessSearch(None, budget, rejected)
