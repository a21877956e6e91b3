"""Bounded-radius Δ-trees.

Vertices are coloured paths ``(c1, ..., cn)`` from a base vertex of the
diagram. Each vertex also carries a chosen reverse path ``(d1, ..., dn)``
where ``d_i`` is the first colour (in declaration order) of the colour set
of the reverse arc of ``p(c_i)``. The children of a vertex are obtained by
appending every colour of its projected vertex except the last reverse
colour, which instead labels the arc back to the parent.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .lad import Diagram, truncate_rays

Path = tuple[str, ...]

PALETTE = (
    "steelblue", "firebrick", "forestgreen", "darkorange", "purple",
    "goldenrod", "teal", "hotpink", "sienna", "slategray",
)


class UnknownVertex(KeyError):
    pass


class UnknownElement(KeyError):
    pass


class UnbuildableRadius(ValueError):
    pass


@dataclass
class DeltaTree:
    diagram: Diagram
    base: str
    radius: int
    reverse: dict[Path, Path] = field(default_factory=dict)
    # outgoing arcs per vertex as (L-label, neighbour), children in colour order
    out: dict[Path, list[tuple[str, Path]]] = field(default_factory=dict)
    arc_type: dict[str, str] = field(default_factory=dict)

    @property
    def vertices(self) -> list[Path]:
        return list(self.reverse)

    def __contains__(self, x) -> bool:
        return x in self.reverse

    def __len__(self) -> int:
        return len(self.reverse)

    def depth(self, x: Path) -> int:
        return len(x)

    def is_boundary(self, x: Path) -> bool:
        return len(x) >= self.radius

    def project(self, x: Path) -> str:
        if x not in self.reverse:
            raise UnknownElement(x)
        if not x:
            return self.base
        return self.diagram.graph.t(self.arc_type[x[-1]])

    def colours_at(self, x: Path) -> list[str]:
        """X_{π(x)} in declaration order."""
        return self.diagram.vertex_colours(self.project(x))

    def parent(self, x: Path) -> Path:
        return x[:-1]

    def back_colour(self, x: Path) -> str:
        """L(x, parent(x)): the last entry of the reverse of x."""
        return self.reverse[x][-1]

    def children(self, x: Path) -> list[Path]:
        return [y for _, y in self.out.get(x, []) if len(y) > len(x)]

    def neighbour(self, x: Path, c: str) -> Path:
        """The vertex reached from x along the arc coloured c."""
        if x and c == self.back_colour(x):
            return x[:-1]
        y = x + (c,)
        if y not in self.reverse:
            raise UnknownElement(y)
        return y

    def label(self, x: Path, y: Path) -> str:
        """L of the arc x -> y."""
        if x not in self.reverse or y not in self.reverse:
            raise UnknownElement((x, y))
        if len(y) == len(x) + 1 and y[:-1] == x:
            return y[-1]
        if len(x) == len(y) + 1 and x[:-1] == y:
            return self.back_colour(x)
        raise UnknownElement((x, y))

    def project_arc(self, x: Path, y: Path) -> str:
        return self.arc_type[self.label(x, y)]

    def arcs(self) -> list[tuple[Path, Path]]:
        return [(x, y) for x in self.reverse for _, y in self.out.get(x, [])]

    def ball(self, radius: int) -> list[Path]:
        return [x for x in self.reverse if len(x) <= radius]


def _colour_index(d: Diagram) -> dict[str, str]:
    index = {}
    for a in d.graph.arcs:
        for c in d.colours[a].names:
            index[c] = a
    return index


def build(
    d: Diagram,
    v0: str,
    radius: int,
    choose_reverse: Callable[[Sequence[str]], str] | None = None,
) -> DeltaTree:
    """All coloured paths of length at most ``radius`` starting at ``v0``.

    ``choose_reverse`` picks the reverse colour from the colour set of the
    reverse arc; the default takes the first one. Any policy gives an
    isomorphic tree.
    """
    pick = choose_reverse or (lambda colours: colours[0])
    if radius < 0:
        raise ValueError("radius must be non-negative")
    if not d.is_finite:
        extra = 0
        for ray in d.rays:
            prefix = ray.id + "."
            if v0.startswith(prefix) and v0[len(prefix):].isdigit():
                extra = max(extra, int(v0[len(prefix):]))
        d = truncate_rays(d, radius + extra)
    if v0 not in d.graph.vertices:
        raise UnknownVertex(v0)
    index = _colour_index(d)
    g = d.graph
    tree = DeltaTree(d, v0, radius, arc_type=index)
    tree.reverse[()] = ()
    queue = deque([()])
    while queue:
        x = queue.popleft()
        if len(x) >= radius:
            continue
        u = tree.project(x)
        if u in d.frontier:
            raise UnbuildableRadius(f"vertex {u} lies on the truncation frontier within radius {radius}")
        colours = d.vertex_colours(u)
        if colours is None:
            raise UnbuildableRadius(f"vertex {u} has an infinite colour set within radius {radius}")
        back = tree.back_colour(x) if x else None
        arcs = []
        for c in colours:
            if c == back:
                arcs.append((c, x[:-1]))
                continue
            rev = d.colours[g.r(index[c])]
            if rev.is_infinite:
                raise UnbuildableRadius(f"reverse of {index[c]} has an infinite colour set")
            y = x + (c,)
            tree.reverse[y] = tree.reverse[x] + (pick(rev.colours),)
            arcs.append((c, y))
            queue.append(y)
        tree.out[x] = arcs
    for x in tree.reverse:
        if len(x) >= radius and x:
            tree.out[x] = [(tree.back_colour(x), x[:-1])]
        elif len(x) >= radius:
            tree.out[x] = []
    return tree


def project(t: DeltaTree, x) -> str:
    """π of a vertex (a path) or of an arc (a pair of paths)."""
    if isinstance(x, tuple) and len(x) == 2 and all(isinstance(p, tuple) for p in x):
        if x[0] not in t or x[1] not in t:
            raise UnknownElement(x)
        return t.project_arc(*x)
    return t.project(x)


def check_colouring(t: DeltaTree) -> list[str]:
    """Bijectivity of L at internal vertices, fibres, and π as a homomorphism."""
    problems = []
    g = t.diagram.graph
    for x in t.vertices:
        if t.is_boundary(x):
            continue
        v = t.project(x)
        labels = [c for c, _ in t.out.get(x, [])]
        expected = t.diagram.vertex_colours(v)
        if sorted(labels) != sorted(expected) or len(set(labels)) != len(labels):
            problems.append(f"vertex {format_path(x)}: labels {labels} are not a bijection onto X_{v}")
            continue
        for c, y in t.out[x]:
            a = t.arc_type.get(c)
            if a is None or g.o(a) != v:
                problems.append(f"arc {format_path(x)}->{format_path(y)}: colour {c} does not start at {v}")
            elif g.t(a) != t.project(y):
                problems.append(f"arc {format_path(x)}->{format_path(y)}: π is not a homomorphism")
    for x in t.vertices:
        if x:
            a = t.arc_type[x[-1]]
            if t.arc_type.get(t.back_colour(x)) != g.r(a):
                problems.append(f"vertex {format_path(x)}: reverse colour has the wrong type")
    return problems


def format_path(x: Path) -> str:
    return "(" + ",".join(x) + ")"


def to_dot(t: DeltaTree, name: str = "delta_tree") -> str:
    order = {v: i for i, v in enumerate(t.diagram.graph.vertices)}
    lines = [f'digraph "{name}" {{']
    for x in t.vertices:
        colour = PALETTE[order[t.project(x)] % len(PALETTE)]
        lines.append(f'  "{format_path(x)}" [label="{format_path(x)}", color="{colour}"];')
    for x in t.vertices:
        for y in t.children(x):
            lines.append(
                f'  "{format_path(x)}" -> "{format_path(y)}" [label="{y[-1]}/{t.back_colour(y)}"];'
            )
    lines.append("}")
    return "\n".join(lines) + "\n"
