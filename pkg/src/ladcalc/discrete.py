"""Discreteness of the universal group, decided clause by clause from the
action type, plus explicit finite witness sets for the discrete cases."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from . import perm
from .lad import Diagram, PermGroup, SymbolicAction, action_is_semiregular, action_is_trivial, truncate_rays
from .scopo import ActionTypeVerdict, classify


class NotDiscrete(ValueError):
    pass


@dataclass(frozen=True)
class DiscretenessVerdict:
    discrete: bool
    clause: str
    witness: str
    consumed: tuple[str, ...] = ()

    def record(self) -> str:
        out = f"discrete={'yes' if self.discrete else 'no'} clause={self.clause} witness={self.witness}"
        if self.consumed:
            out += " flags=" + ",".join(self.consumed)
        return out


@dataclass(frozen=True)
class Witness:
    """A finite vertex set of the Δ-tree based at ``base``, as coloured paths."""

    base: str
    paths: tuple[tuple[str, ...], ...]
    colours: tuple[str, ...] = ()
    symbolic: tuple[str, ...] = ()

    def describe(self) -> str:
        shown = ";".join("(" + ",".join(p) + ")" for p in self.paths)
        return f"base={self.base} paths={shown}"


class _Audit:
    def __init__(self):
        self.flags: list[str] = []

    def trivial(self, v: str, action) -> bool:
        if isinstance(action, SymbolicAction):
            self.flags.append(f"{v}.trivial")
        return action_is_trivial(action)

    def semiregular(self, v: str, action) -> bool:
        if isinstance(action, SymbolicAction):
            self.flags.append(f"{v}.semiregular")
        return action_is_semiregular(action)

    def finite_base(self, v: str, action) -> bool:
        self.flags.append(f"{v}.finite_base")
        return action.finite_base


def decide(d: Diagram, verdict: ActionTypeVerdict | None = None) -> DiscretenessVerdict:
    verdict = verdict or classify(d)
    kind = verdict.type
    audit = _Audit()

    def out(ok: bool, clause: str, witness: str) -> DiscretenessVerdict:
        return DiscretenessVerdict(ok, clause, witness, tuple(dict.fromkeys(audit.flags)))

    if kind in ("Horocyclic", "Focal"):
        return out(False, kind.lower(), "unconditional")

    if kind == "Lineal":
        for v in d.vertices:
            if not audit.trivial(v, d.actions[v]):
                return out(False, "lineal-trivial", f"nontrivial:{v}")
        for ray in d.rays:
            if not all(perm.is_trivial(ray.segment_group(k)) for k in range(ray.period)):
                return out(False, "lineal-trivial", f"nontrivial:ray:{ray.id}")
        return out(True, "lineal-trivial", "vertex")

    if kind == "General":
        cot = verdict.cotree
        inside = set(cot.vertices)
        for v in d.vertices:
            action = d.actions[v]
            if v in inside and not audit.semiregular(v, action):
                return out(False, "general-semiregular", f"not-semiregular:{v}")
            if v not in inside and not audit.trivial(v, action):
                return out(False, "general-semiregular", f"nontrivial-outside:{v}")
        for ray in d.rays:
            groups = [ray.segment_group(k) for k in range(ray.period)]
            if ray.id in cot.rays:
                if not all(perm.is_semiregular(gr) for gr in groups):
                    return out(False, "general-semiregular", f"not-semiregular:ray:{ray.id}")
            elif not all(perm.is_trivial(gr) for gr in groups):
                return out(False, "general-semiregular", f"nontrivial-outside:ray:{ray.id}")
        return out(True, "general-semiregular", "arc")

    if kind not in ("FixedVertex", "Inversion"):
        raise ValueError(f"unknown action type {kind}")
    clause = "fixed-vertex" if kind == "FixedVertex" else "inversion"
    for ray in d.rays:
        if not all(perm.is_trivial(ray.segment_group(k)) for k in range(ray.period)):
            return out(False, clause, f"almost-trivial:ray:{ray.id}")
    for v in d.vertices:
        if not d.has_infinite_colours(v):
            continue
        action = d.actions[v]
        if not audit.finite_base(v, action):
            return out(False, clause, f"finite-base:{v}")
        for a in d.out_arcs(v):
            if not d.colour_set(a).is_infinite:
                continue
            u, target = _terminus(d, a)
            if not audit.trivial(u, target):
                return out(False, clause, f"infinite-arc:{a}")
    return out(True, clause, "base-paths")


def _terminus(d: Diagram, a: str):
    """t(a) and its action, where t(a) may be the first vertex of a ray."""
    if a in d.colours:
        u = d.graph.t(a)
        return u, d.actions[u]
    for ray in d.rays:
        if a == ray.out_arc(1):
            return ray.vertex(1), ray.action_at(1)
    raise KeyError(a)


def witness_base(d: Diagram, verdict: ActionTypeVerdict) -> str:
    """The diagram vertex at which a Δ-tree witness is rooted."""
    if verdict.type == "FixedVertex":
        return verdict.witness[0]
    if verdict.cotree is not None:
        return verdict.cotree.vertices[0]
    return d.vertices[0]


def discreteness_witness(
    d: Diagram,
    dv: DiscretenessVerdict | None = None,
    verdict: ActionTypeVerdict | None = None,
) -> Witness:
    """A finite set of Δ-tree vertices whose pointwise stabiliser is trivial."""
    verdict = verdict or classify(d)
    dv = dv or decide(d, verdict)
    if not dv.discrete:
        raise NotDiscrete(dv.record())
    base = witness_base(d, verdict)
    if verdict.type == "Lineal":
        return Witness(base, ((),))
    if verdict.type == "General":
        first = d.vertex_colours(base)
        colour = first[0] if first else d.colour_set(d.out_arcs(base)[0]).names[0]
        return Witness(base, ((), (colour,)))
    return _base_paths(d, verdict, base)


def _base_paths(d: Diagram, verdict: ActionTypeVerdict, v: str) -> Witness:
    """Walk the Δ-tree from v, fixing a base of the back-colour stabiliser at
    every vertex whose far side still carries a non-trivial action."""
    # discrete fixed-vertex/inversion diagrams have trivial ray patterns, so
    # one explicit ray vertex is enough to see every colour we need
    full = truncate_rays(d, 1)
    g = full.graph
    index = {c: a for a in g.arcs for c in full.colours[a].names}
    nontrivial = {
        u for u in g.vertices
        if u not in full.frontier and not action_is_trivial(full.actions[u])
    }
    loop = verdict.extra.get("loop") if verdict.type == "Inversion" else None

    def beyond(a: str) -> set[str]:
        if g.is_loop(a):
            return set(g.vertices)
        seen = {g.t(a)}
        queue = deque([g.t(a)])
        while queue:
            x = queue.popleft()
            for b in g.out_arcs(x):
                if b in (a, g.r(a)) or g.is_loop(b):
                    continue
                y = g.t(b)
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return seen

    paths: list[tuple[str, ...]] = [()]
    colours: list[str] = []
    symbolic: list[str] = []
    queue = deque([((), v, None)])
    while queue:
        x, u, back = queue.popleft()
        action = full.actions[u]
        if u in full.frontier:
            continue
        if isinstance(action, SymbolicAction):
            symbolic.append(u)
            continue
        stab = perm.pointwise_stabiliser(action, [back]) if back is not None else action
        F = perm.find_base(stab)
        if not x and loop is not None:
            (lc,) = full.colours[loop].colours
            F = F + [lc] if lc not in F else F
        colours.extend(F)
        for c in F:
            paths.append(x + (c,))
        for c in full.vertex_colours(u):
            a = index[c]
            if c == back or not beyond(a) & nontrivial:
                continue
            y = x + (c,)
            if y not in paths:
                paths.append(y)
            if full.colours[a].is_infinite:
                continue
            queue.append((y, g.t(a), full.colours[g.r(a)].names[0]))
    return Witness(v, tuple(dict.fromkeys(paths)), tuple(dict.fromkeys(colours)), tuple(dict.fromkeys(symbolic)))
