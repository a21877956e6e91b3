"""Strongly confluent partial orientations, attractors, cotrees and the
action-type classifier.

Orientations are sets of core arc ids. Ray gadgets can only be oriented as a
whole: ``ray_dirs`` maps a ray id to ``"out"`` (every arc of the ray points
away from the core) or ``"in"`` (every arc points towards the core). Rays
missing from ``ray_dirs`` are unoriented.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping, Sequence

from . import sgraph
from .lad import Diagram
from .sgraph import NotATree

MAX_SCOPO_EDGES = 16


class EmptyDiagram(ValueError):
    pass


class TooManyEdges(ValueError):
    pass


@dataclass(frozen=True)
class AttractorResult:
    kind: str  # "periodic" or "end"
    vertices: frozenset[str] = frozenset()
    rays: tuple[str, ...] = ()  # unoriented rays lying inside K
    end: str | None = None
    scopo_type: str = "a"

    def describe(self) -> str:
        if self.kind == "end":
            return f"end={self.end}"
        parts = sorted(self.vertices) + [f"ray:{r}" for r in self.rays]
        return "K=" + ",".join(parts)


@dataclass(frozen=True)
class Cotree:
    vertices: tuple[str, ...]
    rays: tuple[str, ...] = ()
    shape: str | None = None  # "vertex", "loop", "cycle" or None
    cycle_order: int | None = None


@dataclass(frozen=True)
class ActionTypeVerdict:
    type: str
    witness: tuple[str, ...]
    cotree: Cotree | None = None
    orientation: frozenset[str] = frozenset()
    extra: Mapping[str, str] = field(default_factory=dict)

    def record(self) -> str:
        fields = [f"type={self.type}", "witness=" + ",".join(self.witness)]
        fields.extend(f"{k}={v}" for k, v in self.extra.items())
        return " ".join(fields)


def _ray_ok(d: Diagram, ray_dirs: Mapping[str, str] | None) -> dict[str, str]:
    dirs = dict(ray_dirs or {})
    ids = {r.id for r in d.rays}
    for rid, direction in dirs.items():
        if rid not in ids or direction not in ("out", "in"):
            raise ValueError(f"bad ray orientation {rid}={direction}")
    return dirs


def is_scopo(d: Diagram, orientation, ray_dirs: Mapping[str, str] | None = None) -> bool:
    """Confluent, strong, and every chosen arc carries a single colour."""
    O = frozenset(orientation)
    dirs = _ray_ok(d, ray_dirs)
    g = d.graph
    for a in O:
        if a not in g.reverse:
            raise KeyError(a)
        if g.r(a) in O:
            return False
        if not d.colours[a].is_singleton:
            return False
    for ray in d.rays:
        direction = dirs.get(ray.id)
        if direction == "out" and not all(cs.is_singleton for cs in ray.outward_sets()):
            return False
        if direction == "in" and not all(cs.is_singleton for cs in ray.inward_sets()):
            return False
    for v in g.vertices:
        chosen = [a for a in g.out_arcs(v) if a in O]
        chosen += [ray.out_arc(1) for ray in d.rays_at(v) if dirs.get(ray.id) == "out"]
        if len(chosen) > 1:
            return False
        if not chosen:
            continue
        for b in g.out_arcs(v):
            if b != chosen[0] and g.r(b) not in O:
                return False
        for ray in d.rays_at(v):
            if ray.out_arc(1) != chosen[0] and dirs.get(ray.id) != "in":
                return False
    # inside a ray every vertex of a fully oriented ray is strong by
    # periodicity, so only the attachment vertex needed checking
    return True


def scopos(d: Diagram, max_edges: int = MAX_SCOPO_EDGES) -> Iterator[frozenset[str]]:
    """Every scopo of a finite diagram, by per-vertex choice with pruning.

    Each vertex chooses nothing or one outgoing singleton arc; the scopo is
    the set of choices.
    """
    if not d.is_finite:
        raise TooManyEdges("scopo enumeration needs a finite diagram")
    g = d.graph
    if len(g.edges()) > max_edges:
        raise TooManyEdges(f"{len(g.edges())} edges exceed the limit of {max_edges}")
    vs = g.vertices
    options = {
        v: [None] + [a for a in g.out_arcs(v) if g.r(a) != a and d.colours[a].is_singleton]
        for v in vs
    }
    choice: dict[str, str | None] = {}

    def consistent(v: str) -> bool:
        for u in choice:
            a = choice[u]
            if a is None:
                continue
            w = g.t(a)
            if w in choice and choice[w] == g.r(a):
                return False
            for b in g.out_arcs(u):
                if b == a:
                    continue
                x = g.t(b)
                if x in choice and choice[x] != g.r(b):
                    return False
        return True

    def rec(i: int):
        if i == len(vs):
            yield frozenset(a for a in choice.values() if a is not None)
            return
        v = vs[i]
        for a in options[v]:
            choice[v] = a
            if consistent(v):
                yield from rec(i + 1)
            del choice[v]

    yield from rec(0)


def step(d: Diagram, orientation, v: str) -> str:
    """f_O on core vertices: follow the chosen outgoing arc, if any."""
    for a in d.graph.out_arcs(v):
        if a in orientation:
            return d.graph.t(a)
    return v


def attractor(d: Diagram, orientation, ray_dirs: Mapping[str, str] | None = None) -> AttractorResult:
    O = frozenset(orientation)
    dirs = _ray_ok(d, ray_dirs)
    g = d.graph
    if not g.vertices:
        raise EmptyDiagram("diagram has no vertices")
    escape = {ray.at: ray.id for ray in d.rays if dirs.get(ray.id) == "out"}
    periodic: set[str] = set()
    for v in g.vertices:
        seen: list[str] = []
        x = v
        while x not in seen:
            if x in escape:
                return AttractorResult("end", end=escape[x], scopo_type="c")
            seen.append(x)
            x = step(d, O, x)
        periodic.update(seen[seen.index(x):])
    free_rays = tuple(r.id for r in d.rays if r.id not in dirs)
    inner = [a for a in O if g.o(a) in periodic and g.t(a) in periodic]
    kind = "b" if inner else "a"
    return AttractorResult("periodic", frozenset(periodic), free_rays, None, kind)


def projecting_first_arcs(d: Diagram, vertices) -> dict[str, str] | None:
    """For a candidate cotree K of a finite diagram, map every outside vertex
    to the first arc of its unique projecting path; None if K is not a
    cotree of the underlying graph."""
    g = d.graph
    keep = set(vertices)
    if not keep or not keep <= set(g.vertices):
        return None
    if not sgraph.is_connected(g.induced(keep)):
        return None
    outside = [v for v in g.vertices if v not in keep]
    sub = g.induced(outside)
    first: dict[str, str] = {}
    for comp in sgraph.components(sub) if outside else []:
        comp_graph = sub.induced(comp)
        if not sgraph.is_tree(comp_graph):
            return None
        bridges = [a for v in comp for a in g.out_arcs(v) if g.t(a) in keep]
        if len(bridges) != 1:
            return None
        (bridge,) = bridges
        root = g.o(bridge)
        first[root] = bridge
        dist = sgraph.distances(comp_graph, root)
        for v in comp:
            if v == root:
                continue
            (a,) = [a for a in comp_graph.out_arcs(v) if dist[comp_graph.t(a)] < dist[v]]
            first[v] = a
    return first


def cotree_orientation(d: Diagram, vertices) -> frozenset[str] | None:
    """O_K: the arcs on projecting paths towards K, or None if K is not a Δ-cotree."""
    first = projecting_first_arcs(d, vertices)
    if first is None:
        return None
    if not all(d.colours[a].is_singleton for a in first.values()):
        return None
    return frozenset(first.values())


def is_cotree(d: Diagram, vertices) -> bool:
    return cotree_orientation(d, vertices) is not None


def _ray_prunable(ray) -> bool:
    return all(cs.is_singleton for cs in ray.inward_sets())


def minimal_cotree(
    d: Diagram,
    chooser: Callable[[Sequence[str]], str] | None = None,
    rng: random.Random | None = None,
) -> Cotree:
    """Smallest cotree by leaf pruning.

    ``chooser`` (or ``rng``) picks which prunable leaf goes next; the
    result does not depend on it.
    """
    g = d.graph
    if not g.vertices:
        raise EmptyDiagram("diagram has no vertices")
    if chooser is None:
        chooser = rng.choice if rng is not None else (lambda xs: xs[0])
    kept_rays = tuple(r.id for r in d.rays if not _ray_prunable(r))
    blocked = {d.ray(rid).at for rid in kept_rays}
    remaining = set(g.vertices)

    def prunable(v: str) -> bool:
        if v in blocked:
            return False
        arcs = g.out_arcs(v)
        if any(g.is_loop(a) for a in arcs):
            return False
        links = [a for a in arcs if g.t(a) in remaining]
        return len(links) == 1 and d.colours[links[0]].is_singleton

    while len(remaining) > 1:
        leaves = [v for v in g.vertices if v in remaining and prunable(v)]
        if not leaves:
            break
        remaining.discard(chooser(leaves))
    if len(remaining) == 1 and not kept_rays:
        (v,) = remaining
        if not any(g.is_loop(a) for a in g.out_arcs(v)):
            # every single-vertex cotree is minimal; pick one canonically
            remaining = {single_vertex_cotrees(d)[0]}
    vs = tuple(v for v in g.vertices if v in remaining)
    return _shape(d, vs, kept_rays)


def _shape(d: Diagram, vs: tuple[str, ...], rays: tuple[str, ...]) -> Cotree:
    sub = d.graph.induced(vs)
    if rays:
        return Cotree(vs, rays)
    if len(vs) == 1 and not sub.arcs:
        return Cotree(vs, (), "vertex")
    if len(vs) == 1 and len(sub.arcs) == 1 and sub.r(sub.arcs[0]) == sub.arcs[0]:
        # the inversion shape needs the loop to carry a single colour
        if d.colours[sub.arcs[0]].is_singleton:
            return Cotree(vs, (), "loop")
        return Cotree(vs)
    n = sgraph.is_cycle_graph(sub)
    if n is not None:
        return Cotree(vs, (), "cycle", n)
    return Cotree(vs)


def single_vertex_cotrees(d: Diagram) -> list[str]:
    g = d.graph
    if not sgraph.is_tree(g) or not all(_ray_prunable(r) for r in d.rays):
        return []
    out = []
    for v in g.vertices:
        dist = sgraph.distances(g, v)
        if all(
            d.colours[a].is_singleton
            for a in g.arcs
            if dist[g.t(a)] < dist[g.o(a)]
        ):
            out.append(v)
    return out


def horocyclic_ends(d: Diagram) -> list[str]:
    g = d.graph
    if not sgraph.is_tree(g):
        raise NotATree("horocyclic ends need a tree core")
    out = []
    for ray in d.rays:
        if not all(cs.is_singleton for cs in ray.outward_sets()):
            continue
        if not all(_ray_prunable(other) for other in d.rays if other.id != ray.id):
            continue
        dist = sgraph.distances(g, ray.at)
        if all(d.colours[a].is_singleton for a in g.arcs if dist[g.t(a)] < dist[g.o(a)]):
            out.append(ray.id)
    return out


def classify(d: Diagram) -> ActionTypeVerdict:
    """Action type of the universal group, probed in decision-tree order."""
    g = d.graph
    tree = sgraph.is_tree(g)
    if tree:
        fixed = single_vertex_cotrees(d)
        if fixed:
            return ActionTypeVerdict("FixedVertex", tuple(fixed), _shape(d, (fixed[0],), ()))
    cot = minimal_cotree(d)
    if cot.shape == "loop":
        (v,) = cot.vertices
        (loop,) = [a for a in g.out_arcs(v) if g.r(a) == a]
        return ActionTypeVerdict("Inversion", (v,), cot, extra={"loop": loop})
    if cot.shape == "cycle":
        sub = g.induced(cot.vertices)
        if all(d.colours[a].is_singleton for a in sub.arcs):
            return ActionTypeVerdict("Lineal", cot.vertices, cot, extra={"cycle": str(cot.cycle_order)})
        for orient in sgraph.cyclic_orientations(sub):
            rest = [a for a in sub.arcs if a not in orient]
            if all(d.colours[a].is_singleton for a in orient) and any(
                d.colours[a].size >= 2 for a in rest
            ):
                arcs = tuple(a for a in sub.arcs if a in orient)
                return ActionTypeVerdict(
                    "Focal", cot.vertices, cot, frozenset(orient), {"orientation": ",".join(arcs)}
                )
    if tree:
        ends = horocyclic_ends(d)
        if len(ends) == 1:
            return ActionTypeVerdict("Horocyclic", (f"ray:{ends[0]}",))
    witness = cot.vertices + tuple(f"ray:{r}" for r in cot.rays)
    return ActionTypeVerdict("General", witness, cot)
