"""Monomial impressions of dimer algebras.

Every arrow is sent to the product of the simple-matching variables whose
matching contains it.  A monomial is an exponent tuple indexed like the
variables, so multiplication is addition and divisibility is a componentwise
comparison.
"""

from __future__ import annotations

import json
from collections import defaultdict, deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .dimer import DimerQuiver, Path
from .matchings import MatchingCatalog, enumerate_matchings

Monomial = tuple[int, ...]


def mono_one(n: int) -> Monomial:
    return (0,) * n


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def degree(a: Monomial) -> int:
    return sum(a)


def mono_str(m: Monomial, names: Sequence[str]) -> str:
    parts = []
    for e, v in zip(m, names):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts) or "1"


def mono_parse(text: str, names: Sequence[str]) -> Monomial:
    idx = {v: k for k, v in enumerate(names)}
    exps = [0] * len(names)
    text = text.strip()
    if text in ("", "1"):
        return tuple(exps)
    for part in text.split("*"):
        var, _, e = part.strip().partition("^")
        if var not in idx:
            raise ValueError(f"unknown variable {var!r}")
        exps[idx[var]] += int(e) if e else 1
    return tuple(exps)


@dataclass(frozen=True)
class Impression:
    """Arrow monomials for a dimer, in the ring of its chosen variables."""

    dimer: DimerQuiver
    variables: tuple[str, ...]
    arrow_monomial: Mapping[str, Monomial]

    @classmethod
    def from_dimer(cls, d: DimerQuiver, cat: MatchingCatalog | None = None) -> "Impression":
        cat = cat or enumerate_matchings(d)
        sm = cat.simple_matchings
        mono = {a: tuple(1 if a in m.arrows else 0 for m in sm) for a in d.arrow_ids}
        return cls(d, tuple(cat.variables), mono)

    @classmethod
    def pulled_back(cls, d: DimerQuiver, contracted: Sequence[str], image: "Impression") -> "Impression":
        """Impression of ``d`` through a contraction: contracted arrows go to 1
        and every other arrow keeps the monomial of its image."""
        n = len(image.variables)
        cset = set(contracted)
        mono = {a: mono_one(n) if a in cset else image.arrow_monomial[a] for a in d.arrow_ids}
        return cls(d, image.variables, mono)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def eta(self, p: Path) -> Monomial:
        self.dimer.path_ends(p)
        out = [0] * self.nvars
        for a in p.arrows:
            for k, e in enumerate(self.arrow_monomial[a]):
                out[k] += e
        return tuple(out)

    def sigma(self) -> Monomial:
        """Image of any unit cycle; checked to be the same for all faces."""
        images = {self.eta(Path(f.arrows)) for f in self.dimer.faces}
        if len(images) != 1:
            raise ValueError(f"faces have different images: {sorted(images)}")
        return images.pop()

    def eta_matrix(self) -> list[list[int]]:
        """Rows are arrows in declaration order, columns are variables."""
        return [list(self.arrow_monomial[a]) for a in self.dimer.arrow_ids]

    def fmt(self, m: Monomial) -> str:
        return mono_str(m, self.variables)

    def parse(self, text: str) -> Monomial:
        return mono_parse(text, self.variables)

    def vanishing_arrows(self, point: Mapping[str, Fraction]) -> set[str]:
        return {a for a in self.dimer.arrow_ids if evaluate(self.arrow_monomial[a], self.variables, point) == 0}


def evaluate(m: Monomial, names: Sequence[str], point: Mapping[str, Fraction]) -> Fraction:
    val = Fraction(1)
    for e, v in zip(m, names):
        if e:
            val *= Fraction(point[v]) ** e
    return val


# -- points -------------------------------------------------------------------

def load_point(path, names: Sequence[str] | None = None) -> dict[str, Fraction]:
    with open(path) as fh:
        return parse_point(json.load(fh), names)


def parse_point(raw: Mapping, names: Sequence[str] | None = None) -> dict[str, Fraction]:
    point = {str(k): Fraction(str(v)) for k, v in raw.items()}
    if names is not None:
        missing = [v for v in names if v not in point]
        extra = [v for v in point if v not in set(names)]
        if missing or extra:
            raise ValueError(f"point variables do not match: missing {missing}, unexpected {extra}")
    return point


def dump_point(point: Mapping[str, Fraction]) -> str:
    return json.dumps({k: str(v) for k, v in point.items()}, indent=2) + "\n"


# -- surjectivity onto the vertex corner rings --------------------------------

def check_impression_surjectivity(imp: Impression, point: Mapping[str, Fraction],
                                  budget: int) -> dict[tuple[str, str], bool]:
    """For each ordered vertex pair, whether some path of length <= budget has
    a monomial not vanishing at ``point``.

    A non-vanishing path exists iff the head is reachable from the tail in
    the subquiver of non-vanishing arrows, and the shortest such path is the
    one found by breadth-first search.
    """
    d = imp.dimer
    alive = [a for a in d.arrows if a.id not in imp.vanishing_arrows(point)]
    adj = defaultdict(list)
    for a in alive:
        adj[a.tail].append(a.head)
    out = {}
    for i in d.vertices:
        dist = {i: 0}
        todo = deque([i])
        while todo:
            v = todo.popleft()
            for w in adj[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    todo.append(w)
        for j in d.vertices:
            out[(i, j)] = j in dist and dist[j] <= budget
    return out
