"""Perfect matchings, simple matchings and the arrows no simple module kills."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator

from .dimer import DimerQuiver
from .graphs import is_strongly_connected


@dataclass(frozen=True)
class PerfectMatching:
    arrows: frozenset[str]

    def sorted(self) -> tuple[str, ...]:
        return tuple(sorted(self.arrows))


@dataclass(frozen=True)
class MatchingCatalog:
    """All perfect matchings in canonical order, with simplicity flags.

    Variables ``x0, x1, ...`` are assigned to the simple matchings in order.
    """

    matchings: tuple[PerfectMatching, ...]
    simple: tuple[bool, ...]

    @property
    def simple_matchings(self) -> list[PerfectMatching]:
        return [m for m, s in zip(self.matchings, self.simple) if s]

    @property
    def variables(self) -> list[str]:
        return [f"x{k}" for k in range(len(self.simple_matchings))]

    @property
    def degenerate(self) -> bool:
        return not self.matchings

    def to_json(self) -> list[dict]:
        out = []
        k = 0
        for m, s in zip(self.matchings, self.simple):
            entry = {"arrows": list(m.sorted()), "simple": s}
            if s:
                entry["var"] = f"x{k}"
                k += 1
            out.append(entry)
        return out


def _exact_covers(d: DimerQuiver) -> Iterator[frozenset[str]]:
    # arrow -> face multiplicities; a face is satisfied when its D-count is exactly 1
    hits: dict[str, Counter] = defaultdict(Counter)
    for fi, f in enumerate(d.faces):
        for a in f.arrows:
            hits[a][fi] += 1
    candidates = {fi: sorted(set(f.arrows)) for fi, f in enumerate(d.faces)}
    nfaces = len(d.faces)

    def search(count: list[int], chosen: list[str]) -> Iterator[frozenset[str]]:
        open_faces = [fi for fi in range(nfaces) if count[fi] == 0]
        if not open_faces:
            yield frozenset(chosen)
            return
        best = None
        best_opts: list[str] = []
        for fi in open_faces:
            opts = [a for a in candidates[fi]
                    if all(count[g] + m <= 1 for g, m in hits[a].items())]
            if best is None or len(opts) < len(best_opts):
                best, best_opts = fi, opts
                if not opts:
                    break
        for a in best_opts:
            for g, m in hits[a].items():
                count[g] += m
            chosen.append(a)
            yield from search(count, chosen)
            chosen.pop()
            for g, m in hits[a].items():
                count[g] -= m

    yield from search([0] * nfaces, [])


def is_simple_support(d: DimerQuiver, matching: Iterable[str]) -> bool:
    """True iff the arrows outside ``matching`` form a strongly connected quiver."""
    removed = set(matching)
    edges = [(a.tail, a.head) for a in d.arrows if a.id not in removed]
    return is_strongly_connected(d.vertices, edges)


def enumerate_matchings(d: DimerQuiver) -> MatchingCatalog:
    found = {m for m in _exact_covers(d)}
    ordered = sorted(found, key=lambda m: tuple(sorted(m)))
    matchings = tuple(PerfectMatching(m) for m in ordered)
    simple = tuple(is_simple_support(d, m.arrows) for m in matchings)
    return MatchingCatalog(matchings, simple)


def dagger_arrows(d: DimerQuiver, cat: MatchingCatalog | None = None) -> set[str]:
    """Arrows lying in no simple perfect matching.

    By the classification of the 1^{Q_0}-dimensional simples through the
    impression map, these are exactly the arrows that every such simple
    module represents by a non-zero scalar.
    """
    cat = cat or enumerate_matchings(d)
    used = set()
    for m in cat.simple_matchings:
        used |= m.arrows
    return {a for a in d.arrow_ids if a not in used}
