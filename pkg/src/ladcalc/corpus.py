"""Builtin example diagrams with their expected verdicts."""

from __future__ import annotations

from dataclasses import dataclass

from . import lad


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    source: str
    expected_type: str
    expected_discrete: bool
    note: str = ""

    def load(self) -> lad.Diagram:
        return lad.load(self.source)


_FIXED_VERTEX = """\
# S3 at the fixed vertex, C2 at every vertex of the ray
vertex v0
action v0 gens (x1 x2 x3); (x1 x2)
ray r at v0 period 1 attach x1 x2 x3
segment 0 action (f2 f3) out f2 f3 in b1
"""

_INVERSION = """\
# the inverted edge is the self-reverse loop at v0
vertex v0
loop l at v0 self-reverse colours e1
action v0 gens (f2 f3)
ray r at v0 period 1
segment 0 action (f2 f3) out f2 f3 in b1
"""

_LINEAL = """\
# trivial action on the translation axis, C2 along the ray
vertex v0
arc a from v0 to v0 reverse ab colours l1
arc ab from v0 to v0 reverse a colours l2
action v0 trivial
ray r at v0 period 1 attach l3
segment 0 action (f2 f3) out f2 f3 in b1
"""

_HOROCYCLIC = """\
# a line of C2 vertices; every arc towards the left end has one colour
vertex v0
action v0 gens (f2 f3)
ray right at v0 period 1
segment 0 action (f2 f3) out f2 f3 in b1
ray left at v0 period 1
segment 0 action (c2 c3) out g1 in c2 c3
"""

_FOCAL = """\
vertex v0
arc a from v0 to v0 reverse ab colours 1
arc ab from v0 to v0 reverse a colours 2 3
action v0 gens (2 3)
"""

_GENERAL = """\
vertex v0
loop l at v0 self-reverse colours 1 2 3
action v0 gens (1 2 3); (1 2)
"""

_U_S2_A3 = """\
# the (2,3)-biregular tree with S2 and A3 local actions
vertex u
vertex w
arc a from u to w reverse ab colours 1 2
arc ab from w to u reverse a colours 1' 2' 3'
action u gens (1 2)
action w gens (1' 2' 3')
"""

_LINEAL_Z = """\
vertex v0
arc a from v0 to v0 reverse ab colours 1
arc ab from v0 to v0 reverse a colours 2
action v0 trivial
"""

_SINGLE_EDGE_INVERSION = """\
vertex v0
loop l at v0 self-reverse colours 1
action v0 trivial
"""

ENTRIES: tuple[CorpusEntry, ...] = (
    CorpusEntry("fixed-vertex-T3", _FIXED_VERTEX, "FixedVertex", False, "stabiliser of a vertex of T3"),
    CorpusEntry("inversion-T3", _INVERSION, "Inversion", False, "stabiliser of an edge of T3"),
    CorpusEntry("lineal-T3", _LINEAL, "Lineal", False, "stabiliser of two ends of T3"),
    CorpusEntry("horocyclic-T3", _HOROCYCLIC, "Horocyclic", False, "horocyclic subgroup of an end stabiliser"),
    CorpusEntry("focal-T3", _FOCAL, "Focal", False, "stabiliser of an end of T3"),
    CorpusEntry("general-autT3", _GENERAL, "General", False, "full automorphism group of T3"),
    CorpusEntry("u-s2-a3", _U_S2_A3, "General", True, "universal group with S2 and A3"),
    CorpusEntry("lineal-Z", _LINEAL_Z, "Lineal", True, "Z translating a line"),
    CorpusEntry("single-edge-inversion", _SINGLE_EDGE_INVERSION, "Inversion", True, "C2 flipping one edge"),
)

BY_NAME = {e.name: e for e in ENTRIES}


def get(name: str) -> CorpusEntry:
    key = name[:-4] if name.endswith(".lad") else name
    return BY_NAME[key]
