"""Bounded decision of path equivalence modulo the superpotential ideal.

Two paths are equivalent iff one is reached from the other by repeatedly
replacing a subpath that is one complement of an arrow (the rest of a face
after that arrow) by the other complement.  The search only visits paths of
length at most a budget ``L``; a failure to connect is reported as
*bounded* inequivalence, never as a proof.
"""

from __future__ import annotations

import os
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterator

from .dimer import DimerQuiver, Path, homology_labels


def default_budget(d: DimerQuiver) -> int:
    env = os.environ.get("DIMERLAB_BUDGET")
    if env:
        return int(env)
    return max(12, 3 * max(len(f.arrows) for f in d.faces))


@dataclass(frozen=True)
class RewriteRule:
    """The two complements of ``arrow``: ``plus`` and ``minus`` run from
    head(arrow) back to tail(arrow) around the face of that sign."""

    arrow: str
    plus: tuple[str, ...]
    minus: tuple[str, ...]


@dataclass(frozen=True)
class Step:
    rule: str
    source: str  # sign of the complement that was removed
    target: str
    position: int

    def to_dict(self) -> dict:
        return {"rule": self.rule, "from": self.source, "to": self.target, "pos": self.position}


@dataclass
class Equivalence:
    status: str  # equivalent | inequivalent | endpoint_mismatch | homology_mismatch | length_mismatch
    certificate: list[Step] = field(default_factory=list)
    budget: int | None = None

    @property
    def equivalent(self) -> bool:
        return self.status == "equivalent"

    @property
    def bounded(self) -> bool:
        return self.status == "inequivalent"

    def __bool__(self) -> bool:
        return self.equivalent


def rewrite_rules(d: DimerQuiver) -> list[RewriteRule]:
    comps: dict[str, dict[str, tuple[str, ...]]] = defaultdict(dict)
    for f in d.faces:
        n = len(f.arrows)
        for k, a in enumerate(f.arrows):
            comps[a][f.sign] = tuple(f.arrows[(k + 1 + j) % n] for j in range(n - 1))
    return [RewriteRule(a, comps[a]["+"], comps[a]["-"]) for a in d.arrow_ids]


class Rewriter:
    """Substitution engine for one dimer; cheap to build, safe to share."""

    def __init__(self, d: DimerQuiver):
        self.dimer = d
        self.rules = rewrite_rules(d)
        self.subs: dict[tuple[str, ...], list[tuple[tuple[str, ...], Step]]] = defaultdict(list)
        for r in self.rules:
            if r.plus == r.minus:
                continue
            self.subs[r.plus].append((r.minus, Step(r.arrow, "+", "-", -1)))
            self.subs[r.minus].append((r.plus, Step(r.arrow, "-", "+", -1)))
        self.side_lengths = sorted({len(k) for k in self.subs})
        self.length_preserving = len({len(f.arrows) for f in d.faces}) == 1
        self._hom = None

    @property
    def hom(self):
        if self._hom is None:
            self._hom = homology_labels(self.dimer)
        return self._hom

    def neighbours(self, p: tuple[str, ...]) -> Iterator[tuple[tuple[str, ...], Step]]:
        n = len(p)
        for i in range(n):
            for ell in self.side_lengths:
                if i + ell > n:
                    break
                key = p[i:i + ell]
                for other, step in self.subs.get(key, ()):
                    yield p[:i] + other + p[i + ell:], Step(step.rule, step.source, step.target, i)

    def closure(self, p: tuple[str, ...], budget: int) -> set[tuple[str, ...]]:
        """All paths reachable from ``p`` through paths of length <= budget."""
        seen = {p}
        todo = deque([p])
        while todo:
            x = todo.popleft()
            for y, _ in self.neighbours(x):
                if len(y) <= budget and y not in seen:
                    seen.add(y)
                    todo.append(y)
        return seen

    def equivalent(self, p: Path, q: Path, budget: int | None = None) -> Equivalence:
        d = self.dimer
        budget = default_budget(d) if budget is None else budget
        if d.path_ends(p) != d.path_ends(q):
            return Equivalence("endpoint_mismatch", budget=budget)
        if self.hom.hom(p) != self.hom.hom(q):
            return Equivalence("homology_mismatch", budget=budget)
        if p.arrows == q.arrows:
            return Equivalence("equivalent", [], budget)
        if self.length_preserving and len(p) != len(q):
            return Equivalence("length_mismatch", budget=budget)
        start, goal = p.arrows, q.arrows
        parent: dict[tuple[str, ...], tuple[tuple[str, ...], Step] | None] = {start: None}
        todo = deque([start])
        while todo:
            x = todo.popleft()
            for y, step in self.neighbours(x):
                if len(y) > budget or y in parent:
                    continue
                parent[y] = (x, step)
                if y == goal:
                    cert = []
                    node = y
                    while parent[node] is not None:
                        prev, st = parent[node]
                        cert.append(st)
                        node = prev
                    return Equivalence("equivalent", cert[::-1], budget)
                todo.append(y)
        return Equivalence("inequivalent", budget=budget)

    def apply(self, p: tuple[str, ...], certificate: list[Step]) -> tuple[str, ...]:
        """Replay a certificate; used to double-check equivalence claims."""
        rules = {r.arrow: r for r in self.rules}
        for st in certificate:
            r = rules[st.rule]
            src = r.plus if st.source == "+" else r.minus
            dst = r.minus if st.source == "+" else r.plus
            if p[st.position:st.position + len(src)] != src:
                raise ValueError(f"certificate step {st} does not apply")
            p = p[:st.position] + dst + p[st.position + len(src):]
        return p


def equivalent(d: DimerQuiver, p: Path, q: Path, budget: int | None = None) -> Equivalence:
    return Rewriter(d).equivalent(p, q, budget)


# -- path spaces and cancellativity ---------------------------------------

class PathSpace:
    """Every path of length <= L, partitioned into bounded equivalence classes.

    Trivial paths are keyed as ``("@", vertex)`` so they never collide with
    arrow tuples.
    """

    def __init__(self, d: DimerQuiver, budget: int, rewriter: Rewriter | None = None):
        self.dimer = d
        self.budget = budget
        self.rw = rewriter or Rewriter(d)
        amap = d.arrow_map
        out = defaultdict(list)
        for a in sorted(d.arrow_ids):
            out[amap[a].tail].append(a)
        self.paths: list[tuple] = []
        self.ends: list[tuple[str, str]] = []
        for v in sorted(d.vertices):
            self.paths.append(("@", v))
            self.ends.append((v, v))
        frontier = [((a,), amap[a].tail, amap[a].head) for v in sorted(d.vertices) for a in out[v]]
        while frontier:
            nxt = []
            for p, t, h in frontier:
                self.paths.append(p)
                self.ends.append((t, h))
                if len(p) < budget:
                    for a in out[h]:
                        nxt.append((p + (a,), t, amap[a].head))
            frontier = nxt
        self.index = {p: i for i, p in enumerate(self.paths)}
        parent = list(range(len(self.paths)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i, p in enumerate(self.paths):
            if p and p[0] == "@":
                continue
            for y, _ in self.rw.neighbours(p):
                j = self.index.get(y)
                if j is not None:
                    ri, rj = find(i), find(j)
                    if ri != rj:
                        parent[max(ri, rj)] = min(ri, rj)
        self.cls = [find(i) for i in range(len(self.paths))]

    def key(self, p: Path):
        return p.arrows if p.arrows else ("@", p.base)

    def class_of(self, p: Path) -> int:
        return self.cls[self.index[self.key(p)]]

    def to_path(self, key) -> Path:
        if key and key[0] == "@":
            return Path((), key[1])
        return Path(tuple(key))

    def members(self) -> dict[int, list[tuple]]:
        out = defaultdict(list)
        for p, c in zip(self.paths, self.cls):
            out[c].append(p)
        return out


@dataclass
class Counterexample:
    p: Path
    q: Path
    arrow: str
    side: str  # "post": p·a ~ q·a (a traversed after);  "pre": a·p ~ a·q
    certificate: list[Step]

    def to_dict(self) -> dict:
        return {"p": list(self.p.arrows), "q": list(self.q.arrows), "arrow": self.arrow,
                "side": self.side, "certificate": [s.to_dict() for s in self.certificate]}


def _rank(key) -> tuple:
    return (0, ()) if key[0] == "@" else (len(key), key)


def noncancellative_pairs(d: DimerQuiver, budget: int, space: PathSpace | None = None,
                          rewriter: Rewriter | None = None) -> list[Counterexample]:
    """All bounded witnesses of non-cancellativity among paths of length < budget.

    One pair of class representatives is reported for every pair of distinct
    classes that become equivalent after composing with one arrow.  Pairs are
    rechecked at a larger budget before being reported.
    """
    rw = rewriter or Rewriter(d)
    space = space or PathSpace(d, budget, rw)
    amap = d.arrow_map
    rep: dict[int, tuple] = {}
    for p, c in zip(space.paths, space.cls):
        if c not in rep or _rank(p) < _rank(rep[c]):
            rep[c] = p
    recheck = budget + 2 * max(len(f.arrows) for f in d.faces)
    found: dict[tuple, Counterexample] = {}
    for a in sorted(d.arrow_ids):
        for side in ("post", "pre"):
            groups: dict[int, set[int]] = defaultdict(set)
            for p, (t, h), c in zip(space.paths, space.ends, space.cls):
                if side == "post" and h != amap[a].tail:
                    continue
                if side == "pre" and t != amap[a].head:
                    continue
                core = () if p[0] == "@" else p
                ext = core + (a,) if side == "post" else (a,) + core
                j = space.index.get(ext)
                if j is None:
                    continue
                groups[space.cls[j]].add(c)
            for classes in groups.values():
                if len(classes) < 2:
                    continue
                reps = sorted((rep[c] for c in classes), key=_rank)
                for i in range(len(reps)):
                    for j in range(i + 1, len(reps)):
                        x, y = space.to_path(reps[i]), space.to_path(reps[j])
                        if d.path_ends(x) != d.path_ends(y):
                            continue
                        key = (reps[i], reps[j])
                        if key in found:
                            continue
                        if rw.equivalent(x, y, recheck).equivalent:
                            continue
                        ax = x + Path((a,)) if side == "post" else Path((a,)) + x
                        ay = y + Path((a,)) if side == "post" else Path((a,)) + y
                        cert = rw.equivalent(ax, ay, budget).certificate
                        found[key] = Counterexample(x, y, a, side, cert)
    return sorted(found.values(), key=lambda c: (len(c.p) + len(c.q), c.p.arrows, c.q.arrows, c.arrow, c.side))


@dataclass
class CancellativityReport:
    cancellative: bool
    budget: int
    counterexample: Counterexample | None = None


def cancellativity_check(d: DimerQuiver, budget: int | None = None) -> CancellativityReport:
    budget = default_budget(d) if budget is None else budget
    pairs = noncancellative_pairs(d, budget)
    if pairs:
        return CancellativityReport(False, budget, pairs[0])
    return CancellativityReport(True, budget)
