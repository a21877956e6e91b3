"""Finite permutation groups on explicit, ordered point sets.

Points are opaque strings (colour names). A group is given by generators;
everything else (orbits, elements, stabilisers, bases) is computed by plain
closure and bounded enumeration. There is deliberately no Schreier-Sims
machinery here: local actions at desk scale have a few hundred elements at
most, and the enumeration cap guards against runaway inputs.
"""

from __future__ import annotations

import functools
import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

DEFAULT_CAP = 10_000


class UnknownPoint(KeyError):
    pass


class CapExceeded(RuntimeError):
    """Raised when a group has more elements than the caller allows."""

    def __init__(self, cap: int, partial: int):
        super().__init__(f"group has more than {cap} elements (saw {partial})")
        self.cap = cap
        self.partial = partial


class CycleSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class Permutation:
    """A bijection of ``universe``; ``images[i]`` is the index of the image of ``universe[i]``."""

    universe: tuple[str, ...]
    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.universe))):
            raise ValueError("images do not describe a bijection of the universe")

    @classmethod
    def identity(cls, universe: Sequence[str]) -> Permutation:
        universe = tuple(universe)
        return cls(universe, tuple(range(len(universe))))

    @classmethod
    def from_mapping(cls, universe: Sequence[str], mapping: dict[str, str]) -> Permutation:
        universe = tuple(universe)
        index = _index(universe)
        try:
            images = tuple(index[mapping.get(p, p)] for p in universe)
        except KeyError as exc:
            raise UnknownPoint(exc.args[0]) from None
        return cls(universe, images)

    @classmethod
    def from_cycles(cls, universe: Sequence[str], cycles: Iterable[Sequence[str]]) -> Permutation:
        mapping: dict[str, str] = {}
        for cycle in cycles:
            for i, p in enumerate(cycle):
                if p in mapping:
                    raise CycleSyntaxError(f"point {p!r} appears in two cycles")
                mapping[p] = cycle[(i + 1) % len(cycle)]
        for p in mapping:
            if p not in universe:
                raise UnknownPoint(p)
        return cls.from_mapping(universe, mapping)

    @classmethod
    def parse(cls, universe: Sequence[str], text: str) -> Permutation:
        """Parse cycle notation such as ``(1 2 3)(4 5)``; empty text or ``()`` is the identity."""
        return cls.from_cycles(universe, parse_cycles(text))

    def __call__(self, point: str) -> str:
        try:
            return self.universe[self.images[_index(self.universe)[point]]]
        except KeyError:
            raise UnknownPoint(point) from None

    def __mul__(self, other: Permutation) -> Permutation:
        # (self * other)(p) == self(other(p))
        if self.universe != other.universe:
            raise ValueError("permutations act on different universes")
        return Permutation(self.universe, tuple(self.images[j] for j in other.images))

    def inverse(self) -> Permutation:
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(self.universe, tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def fixes(self, point: str) -> bool:
        return self(point) == point

    def fixed_points(self) -> list[str]:
        return [p for i, p in enumerate(self.universe) if self.images[i] == i]

    def as_dict(self) -> dict[str, str]:
        return {p: self.universe[j] for p, j in zip(self.universe, self.images)}

    def cycles(self) -> list[tuple[str, ...]]:
        seen: set[int] = set()
        out = []
        for i in range(len(self.universe)):
            if i in seen or self.images[i] == i:
                continue
            cycle = [i]
            seen.add(i)
            j = self.images[i]
            while j != i:
                cycle.append(j)
                seen.add(j)
                j = self.images[j]
            out.append(tuple(self.universe[k] for k in cycle))
        return out

    def __str__(self) -> str:
        if self.is_identity():
            return "()"
        return "".join("(" + " ".join(c) + ")" for c in self.cycles())


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str) -> list[tuple[str, ...]]:
    """Split cycle notation into cycles of point names (fixed points omitted)."""
    text = text.strip()
    cycles = []
    pos = 0
    for m in _CYCLE_RE.finditer(text):
        if text[pos:m.start()].strip():
            raise CycleSyntaxError(f"unexpected text {text[pos:m.start()]!r} in {text!r}")
        points = tuple(m.group(1).split())
        if len(set(points)) != len(points):
            raise CycleSyntaxError(f"repeated point in cycle ({m.group(1)})")
        if len(points) > 1:
            cycles.append(points)
        pos = m.end()
    if text[pos:].strip():
        raise CycleSyntaxError(f"unexpected text {text[pos:]!r} in {text!r}")
    return cycles


@functools.lru_cache(maxsize=4096)
def _index(universe: tuple[str, ...]) -> dict[str, int]:
    return {p: i for i, p in enumerate(universe)}


@dataclass(frozen=True)
class PermGroup:
    universe: tuple[str, ...]
    generators: tuple[Permutation, ...] = ()

    def __post_init__(self):
        for g in self.generators:
            if g.universe != self.universe:
                raise ValueError("generator does not permute the group's universe")

    @classmethod
    def from_strings(cls, universe: Sequence[str], gens: Iterable[str]) -> PermGroup:
        universe = tuple(universe)
        return cls(universe, tuple(Permutation.parse(universe, g) for g in gens))

    @classmethod
    def trivial(cls, universe: Sequence[str]) -> PermGroup:
        return cls(tuple(universe))

    def identity(self) -> Permutation:
        return Permutation.identity(self.universe)

    def restrict(self, points: Iterable[str]) -> PermGroup:
        """The action on a union of orbits, keeping the order of ``universe``."""
        keep = set(points)
        sub = tuple(p for p in self.universe if p in keep)
        gens = []
        for g in self.generators:
            mapping = {p: g(p) for p in sub}
            if set(mapping.values()) != keep:
                raise ValueError("restriction to a non-invariant set")
            gens.append(Permutation.from_mapping(sub, mapping))
        return PermGroup(sub, tuple(gens))

    def __str__(self) -> str:
        return "; ".join(str(g) for g in self.generators) or "trivial"


def orbit(group: PermGroup, p: str) -> list[str]:
    """The orbit of ``p`` in BFS order over the generator list."""
    if p not in _index(group.universe):
        raise UnknownPoint(p)
    seen = {p}
    out = [p]
    queue = deque([p])
    while queue:
        q = queue.popleft()
        for g in group.generators:
            r = g(q)
            if r not in seen:
                seen.add(r)
                out.append(r)
                queue.append(r)
    return out


def orbits(group: PermGroup) -> list[list[str]]:
    """The orbit partition, blocks ordered by their first point in the universe."""
    seen: set[str] = set()
    blocks = []
    for p in group.universe:
        if p in seen:
            continue
        block = orbit(group, p)
        seen.update(block)
        order = _index(group.universe)
        blocks.append(sorted(block, key=order.__getitem__))
    return blocks


def enumerate_elements(group: PermGroup, cap: int = DEFAULT_CAP) -> list[Permutation]:
    """All elements, identity first, in BFS order over generator words."""
    if cap < 1:
        raise ValueError("cap must be at least 1")
    return list(_elements(group, cap))


@functools.lru_cache(maxsize=1024)
def _elements(group: PermGroup, cap: int) -> tuple[Permutation, ...]:
    e = group.identity()
    seen = {e.images}
    out = [e]
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for g in group.generators:
            y = g * x
            if y.images in seen:
                continue
            if len(out) >= cap:
                raise CapExceeded(cap, len(out) + 1)
            seen.add(y.images)
            out.append(y)
            queue.append(y)
    return tuple(out)


def order(group: PermGroup, cap: int = DEFAULT_CAP) -> int:
    return len(_elements(group, cap))


def contains(group: PermGroup, perm: Permutation, cap: int = DEFAULT_CAP) -> bool:
    if perm.universe != group.universe:
        return False
    return any(x.images == perm.images for x in _elements(group, cap))


def is_trivial(group: PermGroup) -> bool:
    return all(g.is_identity() for g in group.generators)


def is_semiregular(group: PermGroup, cap: int = DEFAULT_CAP) -> bool:
    """True iff no non-identity element fixes a point.

    Uses Schreier generators of one point stabiliser per orbit, so no
    enumeration is needed and ``cap`` is never hit.
    """
    gens = [g for g in group.generators if not g.is_identity()]
    if not gens:
        return True
    identity = Permutation.identity(group.universe)
    for block in orbits(group):
        transversal = {block[0]: identity}
        queue = deque([block[0]])
        while queue:
            q = queue.popleft()
            for g in gens:
                r = g(q)
                if r not in transversal:
                    transversal[r] = g * transversal[q]
                    queue.append(r)
        for q, u in transversal.items():
            for g in gens:
                if not (transversal[g(q)].inverse() * g * u).is_identity():
                    return False
    return True


def pointwise_stabiliser(group: PermGroup, points: Iterable[str], cap: int = DEFAULT_CAP) -> PermGroup:
    pts = list(points)
    index = _index(group.universe)
    for p in pts:
        if p not in index:
            raise UnknownPoint(p)
    idx = [index[p] for p in pts]
    gens = tuple(
        x for x in _elements(group, cap)
        if not x.is_identity() and all(x.images[i] == i for i in idx)
    )
    return PermGroup(group.universe, gens)


def find_base(group: PermGroup, cap: int = DEFAULT_CAP) -> list[str]:
    """A greedy base: repeatedly stabilise the first point the current stabiliser moves."""
    base: list[str] = []
    current = [x for x in _elements(group, cap) if not x.is_identity()]
    while current:
        i = next(i for i in range(len(group.universe)) if any(x.images[i] != i for x in current))
        base.append(group.universe[i])
        current = [x for x in current if x.images[i] == i]
    return base
