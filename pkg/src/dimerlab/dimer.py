"""Dimer quivers on the torus: validation, serialization, homology labels.

A dimer is stored purely combinatorially.  Faces are oriented cycles of
arrow ids listed in traversal order (first arrow first), each tagged ``+`` or
``-``.  Paths throughout the package follow the same convention: a tuple of
arrow ids in the order they are traversed.
"""

from __future__ import annotations

import json
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence


class DimerError(ValueError):
    """Raised when a dimer description violates one or more invariants.

    ``problems`` holds ``(code, message)`` pairs, one per violation.
    """

    def __init__(self, problems: list[tuple[str, str]]):
        self.problems = problems
        super().__init__("; ".join(f"{code}: {msg}" for code, msg in problems))

    @property
    def codes(self) -> list[str]:
        return [code for code, _ in self.problems]


class GenusNotOne(DimerError):
    pass


@dataclass(frozen=True)
class Arrow:
    id: str
    tail: str
    head: str


@dataclass(frozen=True)
class Face:
    arrows: tuple[str, ...]
    sign: str  # "+" or "-"


@dataclass(frozen=True)
class Path:
    """A path in a quiver; ``base`` is only meaningful for the empty path."""

    arrows: tuple[str, ...] = ()
    base: str | None = None

    def __len__(self) -> int:
        return len(self.arrows)

    def __add__(self, other: "Path") -> "Path":
        if not self.arrows:
            return other if other.arrows else self
        if not other.arrows:
            return self
        return Path(self.arrows + other.arrows)

    @classmethod
    def of(cls, arrows: Iterable[str] | str, base: str | None = None) -> "Path":
        if isinstance(arrows, str):
            arrows = arrows.split(",") if arrows else []
        return cls(tuple(arrows), base)


@dataclass(frozen=True)
class DimerQuiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]
    faces: tuple[Face, ...]
    warnings: tuple[str, ...] = field(default=(), compare=False)

    # -- lookup helpers -------------------------------------------------
    @property
    def arrow_map(self) -> dict[str, Arrow]:
        return {a.id: a for a in self.arrows}

    @property
    def arrow_ids(self) -> tuple[str, ...]:
        return tuple(a.id for a in self.arrows)

    def tail(self, a: str) -> str:
        return self.arrow_map[a].tail

    def head(self, a: str) -> str:
        return self.arrow_map[a].head

    def out_arrows(self, v: str) -> list[str]:
        return [a.id for a in self.arrows if a.tail == v]

    def in_arrows(self, v: str) -> list[str]:
        return [a.id for a in self.arrows if a.head == v]

    def faces_at(self, v: str) -> list[Face]:
        """Faces passing through ``v``."""
        amap = self.arrow_map
        return [f for f in self.faces if any(amap[a].tail == v for a in f.arrows)]

    def unit_cycle_at(self, v: str) -> Path:
        """The lexicographically first face through ``v``, rotated to start at ``v``."""
        amap = self.arrow_map
        best = None
        for f in self.faces:
            for k, a in enumerate(f.arrows):
                if amap[a].tail == v:
                    rot = f.arrows[k:] + f.arrows[:k]
                    if best is None or rot < best:
                        best = rot
        if best is None:
            raise KeyError(f"no face through vertex {v!r}")
        return Path(best)

    def path_ends(self, p: Path) -> tuple[str, str]:
        """(tail, head) of a composable path; raises ValueError otherwise."""
        if not p.arrows:
            if p.base is None:
                raise ValueError("empty path needs a base vertex")
            return p.base, p.base
        amap = self.arrow_map
        for x, y in zip(p.arrows, p.arrows[1:]):
            if amap[x].head != amap[y].tail:
                raise ValueError(f"arrows {x!r} and {y!r} do not compose")
        return amap[p.arrows[0]].tail, amap[p.arrows[-1]].head

    def is_composable(self, p: Path) -> bool:
        try:
            self.path_ends(p)
        except (ValueError, KeyError):
            return False
        return True

    # -- serialization --------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "arrows": [{"id": a.id, "tail": a.tail, "head": a.head} for a in self.arrows],
            "faces": [{"arrows": list(f.arrows), "sign": f.sign} for f in self.faces],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def validate(raw: Mapping) -> DimerQuiver:
    """Build a :class:`DimerQuiver` from its JSON-shaped description.

    Every violated invariant is collected before raising :class:`DimerError`.
    """
    problems: list[tuple[str, str]] = []
    try:
        vertices = tuple(str(v) for v in raw["vertices"])
        arrows = tuple(Arrow(str(a["id"]), str(a["tail"]), str(a["head"])) for a in raw["arrows"])
        faces = tuple(Face(tuple(str(x) for x in f["arrows"]), str(f["sign"])) for f in raw["faces"])
    except (KeyError, TypeError) as exc:
        raise DimerError([("Malformed", f"missing or bad field: {exc}")]) from None

    if len(set(vertices)) != len(vertices):
        problems.append(("Malformed", "duplicate vertex ids"))
    ids = [a.id for a in arrows]
    if len(set(ids)) != len(ids):
        problems.append(("Malformed", "duplicate arrow ids"))
    vset = set(vertices)
    amap = {a.id: a for a in arrows}
    for a in arrows:
        if a.tail not in vset or a.head not in vset:
            problems.append(("Malformed", f"arrow {a.id!r} has an unknown endpoint"))

    for k, f in enumerate(faces):
        if f.sign not in ("+", "-"):
            problems.append(("Malformed", f"face {k} has sign {f.sign!r}"))
        unknown = [x for x in f.arrows if x not in amap]
        if unknown:
            problems.append(("Malformed", f"face {k} uses unknown arrows {unknown}"))
            continue
        if len(f.arrows) < 2:
            problems.append(("FaceTooShort", f"face {k} has length {len(f.arrows)}"))
        n = len(f.arrows)
        for i in range(n):
            x, y = amap[f.arrows[i]], amap[f.arrows[(i + 1) % n]]
            if x.head != y.tail:
                problems.append(("NotACycle", f"face {k}: {x.id!r} does not compose with {y.id!r}"))
                break
    if problems:
        raise DimerError(problems)

    occurrences: dict[str, list[str]] = defaultdict(list)
    for f in faces:
        for x in f.arrows:
            occurrences[x].append(f.sign)
    for a in arrows:
        if sorted(occurrences.get(a.id, [])) != ["+", "-"]:
            problems.append(("ArrowFaceCount",
                             f"arrow {a.id!r} occurs in faces with signs {sorted(occurrences.get(a.id, []))}"))

    euler = len(vertices) - len(arrows) + len(faces)
    if euler != 0:
        problems.append(("EulerCharacteristic", f"|Q0|-|Q1|+|F| = {euler}, expected 0"))

    if vertices and not _connected(vertices, arrows):
        problems.append(("Disconnected", "underlying graph is not connected"))

    if not any(c == "ArrowFaceCount" for c, _ in problems):
        for v in vertices:
            if not _link_is_circle(v, arrows, faces):
                problems.append(("NonManifoldVertex", f"faces around {v!r} do not form a single disc"))

    if problems:
        raise DimerError(problems)

    d = DimerQuiver(vertices, arrows, faces)
    warnings = []
    # imported lazily: matchings depends on this module
    from .matchings import enumerate_matchings
    covered = set().union(*[m.arrows for m in enumerate_matchings(d).matchings]) if arrows else set()
    for a in arrows:
        if a.id not in covered:
            warnings.append(f"arrow {a.id!r} lies in no perfect matching")
    return DimerQuiver(vertices, arrows, faces, tuple(warnings))


def load(path) -> DimerQuiver:
    with open(path) as fh:
        return validate(json.load(fh))


def loads(text: str) -> DimerQuiver:
    return validate(json.loads(text))


def _connected(vertices: Sequence[str], arrows: Sequence[Arrow]) -> bool:
    adj = defaultdict(set)
    for a in arrows:
        adj[a.tail].add(a.head)
        adj[a.head].add(a.tail)
    seen = {vertices[0]}
    todo = [vertices[0]]
    while todo:
        v = todo.pop()
        for w in adj[v] - seen:
            seen.add(w)
            todo.append(w)
    return len(seen) == len(vertices)


def _link_is_circle(v: str, arrows: Sequence[Arrow], faces: Sequence[Face]) -> bool:
    """Corners at ``v`` glued along shared arrow-ends must form one cycle."""
    amap = {a.id: a for a in arrows}
    # a corner is (face index, position of the incoming arrow)
    ends: dict[tuple[str, str], list[tuple[int, int]]] = defaultdict(list)
    corners = []
    for fi, f in enumerate(faces):
        n = len(f.arrows)
        for k in range(n):
            inc, out = f.arrows[k], f.arrows[(k + 1) % n]
            if amap[inc].head != v:
                continue
            corner = (fi, k)
            corners.append(corner)
            ends[(inc, "in")].append(corner)
            ends[(out, "out")].append(corner)
    if not corners:
        return False
    adj = defaultdict(set)
    for pair in ends.values():
        if len(pair) == 2:
            adj[pair[0]].add(pair[1])
            adj[pair[1]].add(pair[0])
    seen = {corners[0]}
    todo = [corners[0]]
    while todo:
        c = todo.pop()
        for w in adj[c] - seen:
            seen.add(w)
            todo.append(w)
    return len(seen) == len(corners)


# -- homology ------------------------------------------------------------

@dataclass(frozen=True)
class HomologyLabel:
    """Per-arrow vectors in Z^2 realising lifts to the universal cover."""

    labels: Mapping[str, tuple[int, int]]
    generators: tuple[str, str]

    def hom(self, p: Path) -> tuple[int, int]:
        x = y = 0
        for a in p.arrows:
            dx, dy = self.labels[a]
            x += dx
            y += dy
        return x, y


def homology_labels(d: DimerQuiver) -> HomologyLabel:
    """Tree-cotree construction of a Z^2-valued cocycle on the arrows.

    The primal spanning tree gets label 0; a dual spanning tree (faces joined
    by non-tree arrows) is solved leaf-first from the face equations; the two
    leftover arrows get (1, 0) and (0, 1).  All choices are lexicographic so
    the labels are reproducible.
    """
    amap = d.arrow_map
    arrows = sorted(d.arrow_ids)
    root = min(d.vertices)
    in_tree = set()
    seen = {root}
    queue = deque([root])
    incident = defaultdict(list)
    for a in arrows:
        incident[amap[a].tail].append(a)
        incident[amap[a].head].append(a)
    while queue:
        v = queue.popleft()
        for a in incident[v]:
            w = amap[a].head if amap[a].tail == v else amap[a].tail
            if w not in seen:
                seen.add(w)
                in_tree.add(a)
                queue.append(w)

    face_of = defaultdict(list)
    for fi, f in enumerate(d.faces):
        for a in f.arrows:
            face_of[a].append(fi)
    cotree = [a for a in arrows if a not in in_tree]
    dual_tree = set()
    fseen = {0}
    fqueue = deque([0])
    dual_inc = defaultdict(list)
    for a in cotree:
        f1, f2 = face_of[a]
        dual_inc[f1].append(a)
        dual_inc[f2].append(a)
    while fqueue:
        f = fqueue.popleft()
        for a in dual_inc[f]:
            g = face_of[a][1] if face_of[a][0] == f else face_of[a][0]
            if g not in fseen:
                fseen.add(g)
                dual_tree.add(a)
                fqueue.append(g)
    leftover = [a for a in cotree if a not in dual_tree]
    if len(leftover) != 2 or len(fseen) != len(d.faces):
        raise GenusNotOne([("GenusNotOne", f"{len(leftover)} homology generators found, expected 2")])

    labels: dict[str, tuple[int, int]] = {a: (0, 0) for a in in_tree}
    labels[leftover[0]] = (1, 0)
    labels[leftover[1]] = (0, 1)

    # peel leaves of the dual tree
    tree_edges_at = defaultdict(set)
    for a in dual_tree:
        f1, f2 = face_of[a]
        tree_edges_at[f1].add(a)
        tree_edges_at[f2].add(a)
    leaves = deque(sorted(f for f in range(len(d.faces)) if len(tree_edges_at[f]) == 1))
    remaining = set(dual_tree)
    while remaining:
        f = leaves.popleft()
        if len(tree_edges_at[f]) != 1:
            continue
        (a,) = tree_edges_at[f]
        sx = sy = 0
        for b in d.faces[f].arrows:
            if b != a:
                sx += labels[b][0]
                sy += labels[b][1]
        labels[a] = (-sx, -sy)
        remaining.discard(a)
        for g in face_of[a]:
            tree_edges_at[g].discard(a)
            if g != f and len(tree_edges_at[g]) == 1:
                leaves.append(g)
    return HomologyLabel(labels, (leftover[0], leftover[1]))


def lift_endpoint(d: DimerQuiver, p: Path, h: HomologyLabel) -> tuple[str, str, tuple[int, int]]:
    t, hd = d.path_ends(p)
    return t, hd, h.hom(p)
