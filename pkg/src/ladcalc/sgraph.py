"""Serre graphs: vertices, arcs, origin/terminus and an involutive reversal.

Loops are allowed and come in two flavours: orientable (``a != r(a)``, both
arcs are loops at the same vertex) and non-orientable (``a == r(a)``).
Iteration order is always declaration order.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping


class NotATree(ValueError):
    pass


class NotACycleGraph(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SerreGraph:
    vertices: tuple[str, ...]
    arcs: tuple[str, ...]
    origin: Mapping[str, str]
    terminus: Mapping[str, str]
    reverse: Mapping[str, str]
    _out: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        out: dict[str, list[str]] = {v: [] for v in self.vertices}
        for a in self.arcs:
            out.setdefault(self.origin.get(a), []).append(a)
        object.__setattr__(self, "_out", {v: tuple(arcs) for v, arcs in out.items()})

    def __eq__(self, other):
        if not isinstance(other, SerreGraph):
            return NotImplemented
        return (
            self.vertices == other.vertices
            and self.arcs == other.arcs
            and dict(self.origin) == dict(other.origin)
            and dict(self.terminus) == dict(other.terminus)
            and dict(self.reverse) == dict(other.reverse)
        )

    def o(self, a: str) -> str:
        return self.origin[a]

    def t(self, a: str) -> str:
        return self.terminus[a]

    def r(self, a: str) -> str:
        return self.reverse[a]

    def out_arcs(self, v: str) -> tuple[str, ...]:
        """o^-1(v) in declaration order."""
        return self._out.get(v, ())

    def degree(self, v: str) -> int:
        return len(self.out_arcs(v))

    def is_loop(self, a: str) -> bool:
        return self.origin[a] == self.terminus[a]

    def edges(self) -> list[tuple[str, str]]:
        """One (a, r(a)) pair per edge; non-orientable loops appear as (a, a)."""
        seen: set[str] = set()
        out = []
        for a in self.arcs:
            if a in seen:
                continue
            b = self.reverse[a]
            seen.update((a, b))
            out.append((a, b))
        return out

    def neighbours(self, v: str) -> list[str]:
        return [self.terminus[a] for a in self.out_arcs(v)]

    def induced(self, vertices: Iterable[str]) -> SerreGraph:
        keep = set(vertices)
        vs = tuple(v for v in self.vertices if v in keep)
        arcs = tuple(a for a in self.arcs if self.origin[a] in keep and self.terminus[a] in keep)
        return SerreGraph(
            vs,
            arcs,
            {a: self.origin[a] for a in arcs},
            {a: self.terminus[a] for a in arcs},
            {a: self.reverse[a] for a in arcs},
        )


def validate(g: SerreGraph) -> list[str]:
    """Violations of the graph axioms and of connectivity; empty means valid."""
    problems = []
    vset = set(g.vertices)
    if len(vset) != len(g.vertices):
        problems.append("duplicate vertex ids")
    if len(set(g.arcs)) != len(g.arcs):
        problems.append("duplicate arc ids")
    for a in g.arcs:
        o, t, r = g.origin.get(a), g.terminus.get(a), g.reverse.get(a)
        if o not in vset or t not in vset:
            problems.append(f"arc {a}: endpoint is not a declared vertex")
            continue
        if r not in g.reverse:
            problems.append(f"arc {a}: reverse {r} is not a declared arc")
            continue
        if g.reverse[r] != a:
            problems.append(f"arc {a}: r(r({a})) = {g.reverse[r]} != {a}")
        if g.origin.get(r) != t:
            problems.append(f"arc {a}: o(r({a})) != t({a})")
    if not problems:
        comps = components(g)
        if len(comps) > 1:
            problems.append(
                "graph is disconnected: " + " | ".join(",".join(c) for c in comps)
            )
    return problems


def components(g: SerreGraph) -> list[list[str]]:
    seen: set[str] = set()
    comps = []
    for v in g.vertices:
        if v in seen:
            continue
        comp = list(distances(g, v))
        seen.update(comp)
        comps.append(comp)
    return comps


def distances(g: SerreGraph, source: str) -> dict[str, int]:
    """BFS distances from ``source`` to every reachable vertex."""
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in g.neighbours(v):
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def is_connected(g: SerreGraph) -> bool:
    return bool(g.vertices) and len(distances(g, g.vertices[0])) == len(g.vertices)


def is_simple(g: SerreGraph) -> bool:
    pairs = set()
    for a in g.arcs:
        if g.is_loop(a):
            return False
        key = (g.origin[a], g.terminus[a])
        if key in pairs:
            return False
        pairs.add(key)
    return True


def is_tree(g: SerreGraph) -> bool:
    if not g.vertices or not is_simple(g) or not is_connected(g):
        return False
    return len(g.edges()) == len(g.vertices) - 1


def is_cycle_graph(g: SerreGraph) -> int | None:
    """The order of ``g`` if it is a cycle graph, otherwise None.

    Besides the generic case (connected, every vertex of degree two) this
    covers one vertex carrying an orientable loop pair (order 1) and two
    vertices joined by two edges (order 2). A non-orientable loop never
    belongs to a cycle graph.
    """
    if not g.vertices or not is_connected(g):
        return None
    if any(g.reverse[a] == a for a in g.arcs):
        return None
    n = len(g.vertices)
    if n == 1:
        (v,) = g.vertices
        arcs = g.out_arcs(v)
        ok = len(arcs) == 2 and g.reverse[arcs[0]] == arcs[1]
        return 1 if ok else None
    if n == 2:
        ok = all(g.degree(v) == 2 for v in g.vertices) and not any(g.is_loop(a) for a in g.arcs)
        return 2 if ok else None
    if all(g.degree(v) == 2 for v in g.vertices):
        return n
    return None


def cyclic_orientations(g: SerreGraph) -> tuple[frozenset[str], frozenset[str]]:
    """The two orientations picking exactly one outgoing arc at every vertex."""
    if is_cycle_graph(g) is None:
        raise NotACycleGraph("graph is not a cycle graph")
    start = g.vertices[0]
    result = []
    for first in g.out_arcs(start):
        chosen = []
        a = first
        while True:
            chosen.append(a)
            v = g.terminus[a]
            if v == start and len(chosen) == len(g.vertices):
                break
            nxt = [b for b in g.out_arcs(v) if b != g.reverse[a]]
            a = nxt[0]
        result.append(frozenset(chosen))
    return result[0], result[1]


def half_tree(g: SerreGraph, a: str) -> frozenset[str]:
    """Vertices strictly closer to t(a) than to o(a)."""
    if not is_tree(g):
        raise NotATree("half-trees are only defined on trees")
    dt = distances(g, g.terminus[a])
    do = distances(g, g.origin[a])
    return frozenset(v for v in g.vertices if dt[v] < do[v])


def to_dot(g: SerreGraph, name: str = "G") -> str:
    lines = [f'digraph "{name}" {{']
    for v in g.vertices:
        lines.append(f'  "{v}";')
    for a, b in g.edges():
        if a == b:
            lines.append(f'  "{g.o(a)}" -> "{g.t(a)}" [label="{a} self-reverse", dir=none];')
        else:
            lines.append(f'  "{g.o(a)}" -> "{g.t(a)}" [label="{a}/{b}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
