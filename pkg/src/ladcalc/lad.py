"""Local action diagrams: a finite Serre graph plus periodic ray gadgets.

A diagram assigns a colour set to every arc and a local action to every
vertex. Colour sets are explicit finite lists or an ``Infinite`` marker with
a symbolic name; local actions are explicit permutation groups (finite
colour sets only) or symbolic flag records (at vertices with an infinite
colour set).

Ray gadgets
-----------
A ray attached at core vertex ``v`` describes the one-sided infinite path
``v = r0 - r1 - r2 - ...``. Segment ``k`` of a period-``p`` pattern describes
every position ``i`` with ``(i - 1) % p == k``:

* ``out`` is the colour set of the arc ``r(i-1) -> r(i)`` (away from the core),
* ``inward`` is the colour set of the reverse arc ``r(i) -> r(i-1)``,
* the generators act on ``inward`` of segment ``k`` together with ``out`` of
  segment ``k + 1`` (the next arc away from the core).

Template colour names are instantiated per position: repetition 0 keeps the
bare name, repetition ``j`` appends ``.j``. ``attach`` optionally replaces
the outward colour set of the very first arc ``v -> r1``, which makes
eventually-periodic rays such as ``S3 - C2 - C2 - ...`` expressible.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from . import perm, sgraph
from .perm import PermGroup, Permutation
from .sgraph import SerreGraph


class UnknownColour(KeyError):
    pass


@dataclass(frozen=True)
class ColourSet:
    colours: tuple[str, ...] = ()
    infinite: str | None = None

    @property
    def is_infinite(self) -> bool:
        return self.infinite is not None

    @property
    def size(self) -> float:
        return math.inf if self.is_infinite else len(self.colours)

    @property
    def is_singleton(self) -> bool:
        return not self.is_infinite and len(self.colours) == 1

    @property
    def names(self) -> tuple[str, ...]:
        return (self.infinite,) if self.is_infinite else self.colours


@dataclass(frozen=True)
class SymbolicAction:
    """Flags for a local action on an infinite colour set.

    ``orbits`` lists the arcs whose colour sets are declared to be the orbits.
    """

    trivial: bool
    semiregular: bool
    finite_base: bool
    orbits: tuple[str, ...]


LocalAction = Union[PermGroup, SymbolicAction]


def action_is_trivial(action: LocalAction) -> bool:
    if isinstance(action, SymbolicAction):
        return action.trivial
    return perm.is_trivial(action)


def action_is_semiregular(action: LocalAction, cap: int = perm.DEFAULT_CAP) -> bool:
    if isinstance(action, SymbolicAction):
        return action.semiregular
    return perm.is_semiregular(action, cap)


@dataclass(frozen=True)
class Segment:
    generators: tuple[tuple[tuple[str, ...], ...], ...]
    out: tuple[str, ...]
    inward: tuple[str, ...]


@dataclass(frozen=True)
class RayGadget:
    id: str
    at: str
    segments: tuple[Segment, ...]
    attach: ColourSet | None = None

    @property
    def period(self) -> int:
        return len(self.segments)

    def vertex(self, i: int) -> str:
        return f"{self.id}.{i}"

    def out_arc(self, i: int) -> str:
        """Arc from position i-1 to position i."""
        return f"{self.id}.{i}+"

    def in_arc(self, i: int) -> str:
        return f"{self.id}.{i}-"

    def segment_index(self, i: int) -> int:
        return (i - 1) % self.period

    def colour_name(self, template: str, i: int) -> str:
        rep = (i - 1) // self.period
        return template if rep == 0 else f"{template}.{rep}"

    def out_colours(self, i: int) -> ColourSet:
        if i == 1 and self.attach is not None:
            return self.attach
        seg = self.segments[self.segment_index(i)]
        return ColourSet(tuple(self.colour_name(c, i) for c in seg.out))

    def in_colours(self, i: int) -> ColourSet:
        seg = self.segments[self.segment_index(i)]
        return ColourSet(tuple(self.colour_name(c, i) for c in seg.inward))

    def outward_sets(self) -> list[ColourSet]:
        """Every outward colour set that occurs along the ray (templates)."""
        sets = [ColourSet(s.out) for s in self.segments]
        if self.attach is not None:
            sets.append(self.attach)
        return sets

    def inward_sets(self) -> list[ColourSet]:
        return [ColourSet(s.inward) for s in self.segments]

    def segment_group(self, k: int) -> PermGroup:
        """The pattern action of segment k on template names."""
        seg = self.segments[k]
        nxt = self.segments[(k + 1) % self.period]
        universe = _dedupe(seg.inward + nxt.out + _mentioned(seg.generators))
        return PermGroup(universe, tuple(Permutation.from_cycles(universe, g) for g in seg.generators))

    def action_at(self, i: int) -> PermGroup:
        k = self.segment_index(i)
        seg = self.segments[k]
        nxt = self.segments[(k + 1) % self.period]
        rename = {c: self.colour_name(c, i) for c in seg.inward}
        rename.update({c: self.colour_name(c, i + 1) for c in nxt.out})
        universe = self.in_colours(i).colours + self.out_colours(i + 1).colours
        extra = tuple(rename.get(c, c) for c in _mentioned(seg.generators))
        universe = _dedupe(universe + extra)
        gens = tuple(
            Permutation.from_cycles(universe, [tuple(rename.get(c, c) for c in cyc) for cyc in gen])
            for gen in seg.generators
        )
        return PermGroup(universe, gens)


def _mentioned(generators) -> tuple[str, ...]:
    return tuple(c for gen in generators for cyc in gen for c in cyc)


def _dedupe(items: Iterable[str]) -> tuple[str, ...]:
    return tuple(dict.fromkeys(items))


@dataclass(frozen=True, eq=False)
class Diagram:
    graph: SerreGraph
    colours: Mapping[str, ColourSet]
    actions: Mapping[str, LocalAction]
    rays: tuple[RayGadget, ...] = ()
    frontier: frozenset[str] = frozenset()

    def __eq__(self, other):
        if not isinstance(other, Diagram):
            return NotImplemented
        return (
            self.graph == other.graph
            and dict(self.colours) == dict(other.colours)
            and dict(self.actions) == dict(other.actions)
            and self.rays == other.rays
            and self.frontier == other.frontier
        )

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.graph.vertices

    @property
    def is_finite(self) -> bool:
        return not self.rays

    def rays_at(self, v: str) -> list[RayGadget]:
        return [ray for ray in self.rays if ray.at == v]

    def ray(self, ray_id: str) -> RayGadget:
        for ray in self.rays:
            if ray.id == ray_id:
                return ray
        raise KeyError(ray_id)

    def out_arcs(self, v: str) -> tuple[str, ...]:
        """o^-1(v) including the first arc of every ray attached at v."""
        return self.graph.out_arcs(v) + tuple(ray.out_arc(1) for ray in self.rays_at(v))

    def colour_set(self, arc: str) -> ColourSet:
        if arc in self.colours:
            return self.colours[arc]
        for ray in self.rays:
            if arc == ray.out_arc(1):
                return ray.out_colours(1)
        raise KeyError(arc)

    def vertex_colours(self, v: str) -> list[str] | None:
        """X_v as an ordered list, or None if some colour set at v is infinite."""
        out: list[str] = []
        for a in self.out_arcs(v):
            cs = self.colour_set(a)
            if cs.is_infinite:
                return None
            out.extend(cs.colours)
        return out

    def has_infinite_colours(self, v: str) -> bool:
        return any(self.colour_set(a).is_infinite for a in self.out_arcs(v))

    def all_colour_sets(self) -> list[ColourSet]:
        sets = [self.colours[a] for a in self.graph.arcs]
        for ray in self.rays:
            sets.extend(ray.outward_sets())
            sets.extend(ray.inward_sets())
        return sets


def colour_index(d: Diagram) -> dict[str, str]:
    """Map every colour of a finite diagram (or the first period of each ray) to its arc."""
    view = d if d.is_finite else truncate_rays(d, max(r.period for r in d.rays) + 1)
    index = {}
    for a in view.graph.arcs:
        for c in view.colours[a].names:
            index.setdefault(c, a)
    return index


def colour_type(d: Diagram, c: str) -> str:
    """The unique arc whose colour set contains c."""
    try:
        return colour_index(d)[c]
    except KeyError:
        raise UnknownColour(c) from None


def truncate_rays(d: Diagram, depth: int) -> Diagram:
    """Unroll every ray gadget to ``depth`` explicit positions.

    The last position of each ray (the attachment vertex when depth is 0)
    is flagged ``frontier``: its action keeps colours whose arc was cut off.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if d.is_finite:
        return d
    g = d.graph
    vertices = list(g.vertices)
    arcs = list(g.arcs)
    origin, terminus, reverse = dict(g.origin), dict(g.terminus), dict(g.reverse)
    colours = dict(d.colours)
    actions = dict(d.actions)
    frontier = set(d.frontier)
    for ray in d.rays:
        if depth == 0:
            frontier.add(ray.at)
            continue
        prev = ray.at
        for i in range(1, depth + 1):
            v = ray.vertex(i)
            out_a, in_a = ray.out_arc(i), ray.in_arc(i)
            vertices.append(v)
            arcs.extend((out_a, in_a))
            origin[out_a], terminus[out_a], reverse[out_a] = prev, v, in_a
            origin[in_a], terminus[in_a], reverse[in_a] = v, prev, out_a
            colours[out_a] = ray.out_colours(i)
            colours[in_a] = ray.in_colours(i)
            actions[v] = ray.action_at(i)
            prev = v
        frontier.add(ray.vertex(depth))
    graph = SerreGraph(tuple(vertices), tuple(arcs), origin, terminus, reverse)
    return Diagram(graph, colours, actions, (), frozenset(frontier))


def validate(d: Diagram) -> list[str]:
    """All violations of the diagram axioms; an empty list means valid."""
    problems = list(sgraph.validate(d.graph))
    if problems:
        return problems
    problems.extend(_check_rays(d))
    if problems:
        return problems
    if not d.is_finite:
        depth = 2 * max(r.period for r in d.rays) + 1
        return validate(truncate_rays(d, depth))
    return _check_finite(d)


def _check_rays(d: Diagram) -> list[str]:
    problems = []
    seen = set()
    for ray in d.rays:
        if ray.id in seen:
            problems.append(f"ray {ray.id}: declared twice")
        seen.add(ray.id)
        if ray.at not in d.graph.vertices:
            problems.append(f"ray {ray.id}: attachment vertex {ray.at} is not a core vertex")
        if ray.period < 1:
            problems.append(f"ray {ray.id}: period must be at least 1")
            continue
        if ray.attach is not None and not ray.attach.names:
            problems.append(f"ray {ray.id}: empty attach colour set")
        for k, seg in enumerate(ray.segments):
            if not seg.out or not seg.inward:
                problems.append(f"ray {ray.id} segment {k}: empty colour set")
            nxt = ray.segments[(k + 1) % ray.period]
            allowed = set(seg.inward) | set(nxt.out)
            stray = [c for c in _mentioned(seg.generators) if c not in allowed]
            if stray:
                problems.append(
                    f"ray {ray.id} segment {k}: generator moves colours {stray} outside its universe"
                )
    return problems


def _check_finite(d: Diagram) -> list[str]:
    problems = []
    g = d.graph
    owner: dict[str, str] = {}
    for a in g.arcs:
        cs = d.colours.get(a)
        if cs is None:
            problems.append(f"arc {a}: no colour set")
            continue
        if not cs.names:
            problems.append(f"arc {a}: empty colour set")
        if len(set(cs.colours)) != len(cs.colours):
            problems.append(f"arc {a}: repeated colour")
        for c in cs.names:
            if c in owner and owner[c] != a:
                problems.append(f"colour {c}: used by arcs {owner[c]} and {a}")
            owner.setdefault(c, a)
    if problems:
        return problems
    for v in d.actions:
        if v not in g.vertices:
            problems.append(f"action declared for unknown vertex {v}")
    for v in g.vertices:
        action = d.actions.get(v)
        if action is None:
            problems.append(f"vertex {v}: no local action")
            continue
        problems.extend(_check_action(d, v, action))
    return problems


def _check_action(d: Diagram, v: str, action: LocalAction) -> list[str]:
    out = d.graph.out_arcs(v)
    infinite = [a for a in out if d.colours[a].is_infinite]
    if isinstance(action, SymbolicAction):
        problems = []
        if not infinite:
            problems.append(f"vertex {v}: symbolic action but every colour set at {v} is finite")
        if set(action.orbits) != set(out) or len(action.orbits) != len(out):
            problems.append(f"vertex {v}: declared orbits {list(action.orbits)} != arcs {list(out)}")
        if action.trivial and not (action.semiregular and action.finite_base):
            problems.append(f"vertex {v}: trivial=true requires semiregular=true and finite_base=true")
        if action.trivial and infinite:
            problems.append(f"vertex {v}: a trivial action cannot have the infinite orbit of {infinite[0]}")
        return problems
    if infinite:
        return [f"vertex {v}: explicit action but colour set of {infinite[0]} is infinite"]
    xv = [c for a in out for c in d.colours[a].colours]
    if set(action.universe) != set(xv) or len(action.universe) != len(xv):
        if v in d.frontier and set(xv) <= set(action.universe):
            return []
        return [f"vertex {v}: action permutes {list(action.universe)} but X_{v} = {xv}"]
    if v in d.frontier:
        return []
    blocks = {frozenset(b) for b in perm.orbits(action)}
    declared = {frozenset(d.colours[a].colours) for a in out}
    if blocks != declared:
        return [
            f"vertex {v}: orbits {sorted(sorted(b) for b in blocks)} differ from colour sets "
            f"{sorted(sorted(b) for b in declared)}"
        ]
    return []


# ---------------------------------------------------------------------------
# .lad text format


class LadParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno
        self.message = message


_BOOLS = {"true": True, "false": False, "yes": True, "no": False}
_SEGMENT_RE = re.compile(
    r"(?P<k>\d+)\s+action\s+(?P<gens>.*?)\s+out\s+(?P<out>.+?)\s+in\s+(?P<inward>.+)"
)


def _parse_colours(tokens: list[str], lineno: int) -> ColourSet:
    if tokens[:1] == ["infinite"]:
        if len(tokens) != 2:
            raise LadParseError(lineno, "expected 'infinite <name>'")
        return ColourSet((), tokens[1])
    return ColourSet(tuple(tokens))


def _parse_gens(text: str, lineno: int) -> list[list[tuple[str, ...]]]:
    text = text.strip()
    if text in ("", "trivial"):
        return []
    try:
        return [perm.parse_cycles(part) for part in text.split(";") if part.strip()]
    except perm.CycleSyntaxError as exc:
        raise LadParseError(lineno, str(exc)) from None


def load(text: str) -> Diagram:
    """Parse ``.lad`` text. Structural problems raise LadParseError; axiom
    violations are left for :func:`validate`."""
    vertices: list[str] = []
    arcs: list[str] = []
    origin: dict[str, str] = {}
    terminus: dict[str, str] = {}
    reverse: dict[str, str] = {}
    colours: dict[str, ColourSet] = {}
    raw_actions: dict[str, tuple[int, object]] = {}
    rays: list[tuple[int, str, str, int, ColourSet | None, list]] = []
    pending_segments = 0
    arc_line: dict[str, int] = {}

    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        kw = tokens[0]
        if pending_segments and kw != "segment":
            raise LadParseError(lineno, f"expected {pending_segments} more segment line(s)")
        if kw == "vertex":
            if len(tokens) != 2:
                raise LadParseError(lineno, "expected 'vertex <id>'")
            if tokens[1] in vertices:
                raise LadParseError(lineno, f"vertex {tokens[1]} declared twice")
            vertices.append(tokens[1])
        elif kw == "arc":
            if len(tokens) < 9 or tokens[2] != "from" or tokens[4] != "to" or tokens[6] != "reverse" or tokens[8] != "colours":
                raise LadParseError(lineno, "expected 'arc <id> from <v> to <w> reverse <id> colours ...'")
            a, v, w, b = tokens[1], tokens[3], tokens[5], tokens[7]
            for x in (v, w):
                if x not in vertices:
                    raise LadParseError(lineno, f"undeclared vertex {x}")
            if a in origin:
                raise LadParseError(lineno, f"arc {a} declared twice")
            if a == b:
                raise LadParseError(lineno, "use 'loop ... self-reverse' for a self-reverse arc")
            arcs.append(a)
            arc_line[a] = lineno
            origin[a], terminus[a], reverse[a] = v, w, b
            colours[a] = _parse_colours(tokens[9:], lineno)
        elif kw == "loop":
            if len(tokens) < 6 or tokens[2] != "at" or tokens[4] != "self-reverse" or tokens[5] != "colours":
                raise LadParseError(lineno, "expected 'loop <id> at <v> self-reverse colours ...'")
            a, v = tokens[1], tokens[3]
            if v not in vertices:
                raise LadParseError(lineno, f"undeclared vertex {v}")
            if a in origin:
                raise LadParseError(lineno, f"arc {a} declared twice")
            arcs.append(a)
            arc_line[a] = lineno
            origin[a] = terminus[a] = v
            reverse[a] = a
            colours[a] = _parse_colours(tokens[6:], lineno)
        elif kw == "action":
            if len(tokens) < 3:
                raise LadParseError(lineno, "expected 'action <v> gens|trivial|symbolic ...'")
            v = tokens[1]
            if v not in vertices:
                raise LadParseError(lineno, f"undeclared vertex {v}")
            if v in raw_actions:
                raise LadParseError(lineno, f"action for {v} declared twice")
            mode = tokens[2]
            if mode == "trivial" and len(tokens) == 3:
                raw_actions[v] = (lineno, [])
            elif mode == "gens":
                raw_actions[v] = (lineno, _parse_gens(line.split("gens", 1)[1], lineno))
            elif mode == "symbolic":
                raw_actions[v] = (lineno, _parse_symbolic(tokens[3:], lineno))
            else:
                raise LadParseError(lineno, f"unknown action form {mode!r}")
        elif kw == "ray":
            if len(tokens) < 6 or tokens[2] != "at" or tokens[4] != "period":
                raise LadParseError(lineno, "expected 'ray <id> at <v> period <p> [attach ...]'")
            if tokens[3] not in vertices:
                raise LadParseError(lineno, f"undeclared vertex {tokens[3]}")
            try:
                p = int(tokens[5])
            except ValueError:
                raise LadParseError(lineno, f"bad period {tokens[5]!r}") from None
            if p < 1:
                raise LadParseError(lineno, "period must be at least 1")
            attach = None
            if len(tokens) > 6:
                if tokens[6] != "attach" or len(tokens) == 7:
                    raise LadParseError(lineno, "expected 'attach <colours>' after the period")
                attach = _parse_colours(tokens[7:], lineno)
            rays.append((lineno, tokens[1], tokens[3], p, attach, []))
            pending_segments = p
        elif kw == "segment":
            if not pending_segments:
                raise LadParseError(lineno, "segment line outside a ray block")
            segs = rays[-1][5]
            rest = line.split(None, 1)[1]
            m = _SEGMENT_RE.fullmatch(rest)
            if m is None:
                raise LadParseError(lineno, "expected 'segment <k> action <gens|trivial> out <colours> in <colours>'")
            if int(m["k"]) != len(segs):
                raise LadParseError(lineno, f"expected segment {len(segs)}, got {m['k']}")
            gens = _parse_gens(m["gens"], lineno)
            segs.append(Segment(
                tuple(tuple(g) for g in gens), tuple(m["out"].split()), tuple(m["inward"].split())
            ))
            pending_segments -= 1
        else:
            raise LadParseError(lineno, f"unknown keyword {kw!r}")
    if pending_segments:
        raise LadParseError(len(text.splitlines()), f"ray block is missing {pending_segments} segment line(s)")

    for a in arcs:
        b = reverse[a]
        if b not in origin:
            raise LadParseError(arc_line[a], f"arc {a} names undeclared reverse {b}")
        if reverse[b] != a:
            raise LadParseError(arc_line[a], f"reverse of {a} is {b} but reverse of {b} is {reverse[b]}")

    graph = SerreGraph(tuple(vertices), tuple(arcs), origin, terminus, reverse)
    ray_objs = tuple(RayGadget(rid, at, tuple(segs), attach) for _, rid, at, _, attach, segs in rays)
    draft = Diagram(graph, colours, {}, ray_objs)
    actions: dict[str, LocalAction] = {}
    for v, (lineno, raw) in raw_actions.items():
        if isinstance(raw, SymbolicAction):
            actions[v] = raw
            continue
        xv = [c for a in draft.out_arcs(v) for c in draft.colour_set(a).names]
        universe = _dedupe(xv + list(_mentioned(raw)))
        try:
            gens = tuple(Permutation.from_cycles(universe, g) for g in raw)
        except perm.CycleSyntaxError as exc:
            raise LadParseError(lineno, str(exc)) from None
        actions[v] = PermGroup(universe, gens)
    return Diagram(graph, colours, actions, ray_objs)



def _parse_symbolic(tokens: list[str], lineno: int) -> SymbolicAction:
    flags = {}
    orbits = None
    it = iter(tokens)
    for tok in it:
        if tok == "orbits":
            try:
                orbits = tuple(next(it).split(":"))
            except StopIteration:
                raise LadParseError(lineno, "missing orbit list") from None
            continue
        key, sep, value = tok.partition("=")
        if not sep or key not in ("trivial", "semiregular", "finite_base") or value not in _BOOLS:
            raise LadParseError(lineno, f"bad symbolic flag {tok!r}")
        flags[key] = _BOOLS[value]
    missing = {"trivial", "semiregular", "finite_base"} - set(flags)
    if missing or orbits is None:
        raise LadParseError(lineno, f"symbolic action needs trivial, semiregular, finite_base and orbits")
    return SymbolicAction(flags["trivial"], flags["semiregular"], flags["finite_base"], orbits)


def _fmt_colours(cs: ColourSet) -> str:
    return f"infinite {cs.infinite}" if cs.is_infinite else " ".join(cs.colours)


def _fmt_gens(gens) -> str:
    parts = []
    for g in gens:
        s = "".join("(" + " ".join(c) + ")" for c in g) if not isinstance(g, Permutation) else str(g)
        parts.append(s or "()")
    return "; ".join(parts) or "trivial"


def save(d: Diagram) -> str:
    """Canonical ``.lad`` text for ``d``."""
    g = d.graph
    lines = [f"vertex {v}" for v in g.vertices]
    for a in g.arcs:
        cs = _fmt_colours(d.colours[a])
        if g.r(a) == a:
            lines.append(f"loop {a} at {g.o(a)} self-reverse colours {cs}")
        else:
            lines.append(f"arc {a} from {g.o(a)} to {g.t(a)} reverse {g.r(a)} colours {cs}")
    for v in g.vertices:
        action = d.actions.get(v)
        if action is None:
            continue
        if isinstance(action, SymbolicAction):
            flags = " ".join(
                f"{k}={'true' if getattr(action, k) else 'false'}"
                for k in ("trivial", "semiregular", "finite_base")
            )
            lines.append(f"action {v} symbolic {flags} orbits {':'.join(action.orbits)}")
        elif action.generators:
            lines.append(f"action {v} gens {_fmt_gens(action.generators)}")
        else:
            lines.append(f"action {v} trivial")
    for ray in d.rays:
        head = f"ray {ray.id} at {ray.at} period {ray.period}"
        if ray.attach is not None:
            head += f" attach {_fmt_colours(ray.attach)}"
        lines.append(head)
        for k, seg in enumerate(ray.segments):
            lines.append(
                f"segment {k} action {_fmt_gens(seg.generators)} "
                f"out {' '.join(seg.out)} in {' '.join(seg.inward)}"
            )
    return "\n".join(lines) + "\n"
