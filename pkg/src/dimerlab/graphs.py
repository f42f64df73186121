"""Small digraph utilities shared by the matching and representation code."""

from __future__ import annotations

from collections import defaultdict
from typing import Hashable, Iterable, Sequence


def reachable(start: Hashable, adj: dict) -> set:
    seen = {start}
    todo = [start]
    while todo:
        v = todo.pop()
        for w in adj.get(v, ()):
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


def is_strongly_connected(vertices: Sequence[Hashable], edges: Iterable[tuple]) -> bool:
    """Forward and backward reachability from one vertex cover everything."""
    if not vertices:
        return False
    fwd, bwd = defaultdict(list), defaultdict(list)
    for t, h in edges:
        fwd[t].append(h)
        bwd[h].append(t)
    vs = set(vertices)
    v0 = vertices[0]
    return vs <= reachable(v0, fwd) and vs <= reachable(v0, bwd)


def strongly_connected_components(vertices: Sequence[Hashable], edges: Iterable[tuple]) -> list[list]:
    """Tarjan's algorithm, iterative; components listed in discovery order."""
    adj = defaultdict(list)
    for t, h in edges:
        adj[t].append(h)
    index: dict = {}
    low: dict = {}
    on_stack = set()
    stack: list = []
    comps: list[list] = []
    counter = 0
    for root in vertices:
        if root in index:
            continue
        work = [(root, iter(adj[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(adj[w])))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
    return comps
