"""Finite pieces of the universal group acting on a truncated Δ-tree.

A root-fixing, π-preserving automorphism of the ball is determined by one
permutation ``σ_x`` of ``X_{π(x)}`` per internal vertex ``x``: it must fix
the back colour of ``x`` and sends the child ``x + (c,)`` to
``g(x) + (σ_x(c),)``. Its local action at ``x`` is then exactly ``σ_x``,
so membership in the universal group amounts to ``σ_x ∈ G(π(x))``. The
stabiliser search below runs over these choices.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable

from . import perm
from .discrete import DiscretenessVerdict, decide, discreteness_witness, witness_base
from .dtree import DeltaTree, Path, UnbuildableRadius, build, format_path
from .lad import Diagram, PermGroup, SymbolicAction
from .perm import Permutation
from .scopo import ActionTypeVerdict, classify

DEFAULT_NODE_CAP = 1_000_000


class BoundaryVertex(ValueError):
    pass


class NotInLocalGroup(ValueError):
    pass


class ColourNotFixed(ValueError):
    pass


class SearchCapExceeded(RuntimeError):
    pass


@dataclass
class BallAutomorphism:
    tree: DeltaTree
    centre: Path
    radius: int
    mapping: dict[Path, Path]

    def __call__(self, x: Path) -> Path:
        return self.mapping[x]

    def moved(self) -> list[tuple[Path, Path]]:
        return [(x, y) for x, y in self.mapping.items() if x != y]

    def is_identity(self) -> bool:
        return not self.moved()

    def serialise(self) -> str:
        pairs = " ".join(f"{format_path(x)}->{format_path(y)}" for x, y in self.moved())
        acts = []
        for x in self.mapping:
            try:
                sigma = local_action(self, x)
            except BoundaryVertex:
                continue
            if not sigma.is_identity():
                acts.append(f"{format_path(x)}:{sigma}")
        return f"moves=[{pairs}] local=[{' '.join(acts)}]"


def _group(t: DeltaTree, x: Path) -> PermGroup:
    action = t.diagram.actions[t.project(x)]
    if isinstance(action, SymbolicAction):
        raise UnbuildableRadius(f"vertex {t.project(x)} carries a symbolic action")
    return action


def _has_full_star(g: BallAutomorphism, x: Path) -> bool:
    t = g.tree
    if x not in g.mapping or t.is_boundary(x) or t.is_boundary(g.mapping[x]):
        return False
    return all(y in g.mapping for _, y in t.out[x])


def local_action(g: BallAutomorphism, x: Path) -> Permutation:
    """σ_{L,x}(g) = L ∘ g ∘ L^{-1} as a permutation of X_{π(x)}."""
    t = g.tree
    if not _has_full_star(g, x):
        raise BoundaryVertex(format_path(x))
    gx = g.mapping[x]
    mapping = {c: t.label(gx, g.mapping[y]) for c, y in t.out[x]}
    return Permutation.from_mapping(tuple(_group(t, x).universe), mapping)


def is_automorphism(g: BallAutomorphism) -> bool:
    """Bijective on its domain, preserves adjacency and π."""
    t = g.tree
    images = list(g.mapping.values())
    if len(set(images)) != len(images) or set(images) != set(g.mapping):
        return False
    for x, y in g.mapping.items():
        if t.project(x) != t.project(y):
            return False
    for x in g.mapping:
        for _, y in t.out[x]:
            if y in g.mapping:
                gx, gy = g.mapping[x], g.mapping[y]
                if not (gy[:-1] == gx or gx[:-1] == gy) or t.project_arc(x, y) != t.project_arc(gx, gy):
                    return False
    return True


def is_member(g: BallAutomorphism, cap: int = perm.DEFAULT_CAP) -> bool:
    """Every visible local action lies in the local group at its projection."""
    for x in g.mapping:
        if not _has_full_star(g, x):
            continue
        if not perm.contains(_group(g.tree, x), local_action(g, x), cap):
            return False
    return True


def compose(g: BallAutomorphism, h: BallAutomorphism) -> BallAutomorphism:
    """g ∘ h on the vertices where both are defined."""
    mapping = {x: g.mapping[y] for x, y in h.mapping.items() if y in g.mapping}
    return BallAutomorphism(g.tree, h.centre, min(g.radius, h.radius), mapping)


def inverse(g: BallAutomorphism) -> BallAutomorphism:
    return BallAutomorphism(g.tree, g.centre, g.radius, {y: x for x, y in g.mapping.items()})


def restrict(g: BallAutomorphism, radius: int) -> BallAutomorphism:
    """Restriction to the vertices of depth at most ``radius``."""
    return BallAutomorphism(
        g.tree, g.centre, radius, {x: y for x, y in g.mapping.items() if len(x) <= radius}
    )


def _distances_from(t: DeltaTree, w: Path, limit: int) -> dict[Path, int]:
    dist = {w: 0}
    queue = deque([w])
    while queue:
        x = queue.popleft()
        if dist[x] >= limit:
            continue
        for _, y in t.out[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def half_tree(t: DeltaTree, x: Path, y: Path) -> set[Path]:
    """Vertices of the ball closer to y than to x, for an arc x -> y."""
    seen = {y}
    queue = deque([y])
    while queue:
        z = queue.popleft()
        for _, n in t.out[z]:
            if n != x and n not in seen:
                seen.add(n)
                queue.append(n)
    return seen


def extend(t: DeltaTree, w: Path, sigma: Permutation, fix: Path | None = None) -> BallAutomorphism:
    """An element fixing ``w`` with local action ``sigma`` at ``w``.

    Further out every vertex gets the first local action in enumeration order
    that is compatible with where its neighbour towards ``w`` went, which is
    the identity whenever the colours already agree. When ``fix`` names a
    neighbour of ``w`` whose colour sigma fixes, the half-tree behind it is
    fixed pointwise.
    """
    if w not in t or t.is_boundary(w):
        raise BoundaryVertex(format_path(w))
    group = _group(t, w)
    if sigma.universe != group.universe:
        sigma = Permutation.from_mapping(group.universe, sigma.as_dict())
    if not perm.contains(group, sigma):
        raise NotInLocalGroup(str(sigma))
    if fix is not None and not sigma.fixes(t.label(w, fix)):
        raise ColourNotFixed(t.label(w, fix))
    k = t.radius - len(w)
    dist = _distances_from(t, w, k)
    mapping = {w: w}
    for c, y in t.out[w]:
        mapping[y] = t.neighbour(w, sigma(c))
    order = sorted(dist, key=dist.__getitem__)
    towards: dict[Path, Path] = {}
    for x in order:
        for _, y in t.out[x]:
            if y in dist and dist[y] == dist[x] + 1:
                towards[y] = x
    for x in order:
        if x == w or dist[x] >= k:
            continue
        p = towards[x]
        gx, gp = mapping[x], mapping[p]
        want_from, want_to = t.label(x, p), t.label(gx, gp)
        local = _group(t, x)
        if want_from == want_to:
            s = local.identity()
        else:
            s = next(e for e in perm.enumerate_elements(local) if e(want_from) == want_to)
        for c, y in t.out[x]:
            if y != p:
                mapping[y] = t.neighbour(gx, s(c))
    return BallAutomorphism(t, w, k, mapping)


# -- root-fixing search ---------------------------------------------------


def slot_candidates(t: DeltaTree, x: Path, fixed: Iterable[str] = ()) -> list[Permutation]:
    """Elements of G(π(x)) fixing the back colour of x and every colour in ``fixed``."""
    group = _group(t, x)
    keep = set(fixed)
    if x:
        keep.add(t.back_colour(x))
    return [e for e in perm.enumerate_elements(group) if all(e.fixes(c) for c in keep)]


def from_choices(t: DeltaTree, choices: dict[Path, Permutation]) -> BallAutomorphism:
    """The root-fixing element with local action ``choices[x]`` at x (identity if absent)."""
    mapping = {(): ()}
    for x in t.vertices:
        if t.is_boundary(x):
            continue
        gx = mapping[x]
        s = choices.get(x)
        for y in t.children(x):
            c = y[-1]
            mapping[y] = gx + ((s(c) if s is not None else c),)
    return BallAutomorphism(t, (), t.radius, mapping)


def _required(t: DeltaTree, F: Iterable[Path]) -> dict[Path, set[str]]:
    need: dict[Path, set[str]] = {}
    for f in F:
        if f not in t:
            raise KeyError(format_path(f))
        for i in range(len(f)):
            need.setdefault(f[:i], set()).add(f[i])
    return need


@dataclass(frozen=True)
class SearchResult:
    found: bool
    element: BallAutomorphism | None = None
    slot: Path | None = None
    nodes: int = 0

    def describe(self) -> str:
        if not self.found:
            return "NoneFound"
        return f"NontrivialElement slot={format_path(self.slot)} {self.element.serialise()}"


def stabiliser_search(
    t: DeltaTree, F: Iterable[Path], inner: int, cap: int = DEFAULT_NODE_CAP
) -> SearchResult:
    """First element fixing F pointwise that moves a vertex of depth <= inner.

    F must contain the root. Slots are visited breadth-first and candidates
    in enumeration order (identity first), so the answer is deterministic.
    """
    F = list(F)
    if () not in F:
        raise ValueError("F must contain the root of the tree")
    if inner > t.radius - 1:
        raise ValueError("inner must be at most R - 1")
    need = _required(t, F)
    slots = [x for x in t.vertices if len(x) < inner]
    nodes = 0

    def search(i: int, choices: dict[Path, Permutation]):
        nonlocal nodes
        nodes += 1
        if nodes > cap:
            raise SearchCapExceeded(f"more than {cap} search nodes")
        if i == len(slots):
            return None
        x = slots[i]
        for s in slot_candidates(t, x, need.get(x, ())):
            choices[x] = s
            if not s.is_identity():
                return x
            found = search(i + 1, choices)
            if found is not None:
                return found
            del choices[x]
        return None

    choices: dict[Path, Permutation] = {}
    slot = search(0, choices) if slots else None
    if slot is None:
        return SearchResult(False, nodes=nodes)
    g = from_choices(t, {slot: choices[slot]})
    return SearchResult(True, g, slot, nodes)


def ball_group(t: DeltaTree, cap: int = DEFAULT_NODE_CAP) -> list[BallAutomorphism]:
    """Every root-fixing element of the ball, by exhausting all slot choices."""
    slots = [x for x in t.vertices if not t.is_boundary(x)]
    options = [slot_candidates(t, x) for x in slots]
    total = 1
    for opts in options:
        total *= len(opts)
        if total > cap:
            raise SearchCapExceeded(f"ball group has more than {cap} elements")
    return [from_choices(t, dict(zip(slots, combo))) for combo in product(*options)]


def ball_group_order(t: DeltaTree) -> int:
    """Closed form: the product of the slot candidate counts."""
    total = 1
    for x in t.vertices:
        if not t.is_boundary(x):
            total *= len(slot_candidates(t, x))
    return total


# -- oracle ---------------------------------------------------------------


@dataclass
class OracleReport:
    consistent: bool
    verdict: DiscretenessVerdict
    lines: list[str] = field(default_factory=list)

    def text(self) -> str:
        head = "Consistent" if self.consistent else "Inconsistent"
        return "\n".join([f"oracle={head} {self.verdict.record()}"] + self.lines)


def oracle_base(d: Diagram, verdict: ActionTypeVerdict) -> str:
    return witness_base(d, verdict)


def oracle_consistency(
    d: Diagram,
    verdict: DiscretenessVerdict | None = None,
    r: int = 2,
    R: int = 4,
    action_type: ActionTypeVerdict | None = None,
) -> OracleReport:
    """Check a discreteness verdict against the stabiliser search at radius R."""
    if R < r + 2:
        raise ValueError("ball radius must be at least fix radius + 2")
    for v in d.vertices:
        if d.has_infinite_colours(v):
            raise UnbuildableRadius(f"vertex {v} has an infinite colour set")
    action_type = action_type or classify(d)
    verdict = verdict or decide(d, action_type)
    base = oracle_base(d, action_type)
    t = build(d, base, R)
    report = OracleReport(True, verdict)
    inner = R - 1
    if verdict.discrete:
        w = discreteness_witness(d, verdict, action_type)
        paths = [p for p in w.paths]
        deepest = max(len(p) for p in paths)
        if deepest > R - 2:
            raise ValueError(f"witness reaches depth {deepest}; use a ball radius of at least {deepest + 2}")
        for label, F in (
            ("witness", paths),
            (f"witness+B{r}", list(dict.fromkeys(paths + t.ball(r)))),
        ):
            res = stabiliser_search(t, F, inner)
            report.lines.append(f"fix={label} inner={inner} result={res.describe()}")
            if res.found:
                report.consistent = False
    else:
        for rr in range(r + 1):
            res = stabiliser_search(t, t.ball(rr), inner)
            report.lines.append(f"fix=B{rr} inner={inner} result={res.describe()}")
            if not res.found:
                report.consistent = False
    return report
