import random

import pytest
from hypothesis import assume, given, settings

from gen import random_diagram, seeds
from ladcalc import corpus, discrete, dtree, lad, perm, scopo, ugroup
from ladcalc.perm import PermGroup


def verdict(name):
    return discrete.decide(corpus.get(name).load())


@pytest.mark.parametrize("entry", corpus.ENTRIES, ids=lambda e: e.name)
def test_corpus_verdicts(entry):
    assert discrete.decide(entry.load()).discrete == entry.expected_discrete


def test_clause_records():
    assert verdict("fixed-vertex-T3").record() == "discrete=no clause=fixed-vertex witness=almost-trivial:ray:r"
    assert verdict("general-autT3").record() == "discrete=no clause=general-semiregular witness=not-semiregular:v0"
    assert verdict("focal-T3").record() == "discrete=no clause=focal witness=unconditional"
    assert verdict("horocyclic-T3").clause == "horocyclic"
    assert verdict("u-s2-a3").record() == "discrete=yes clause=general-semiregular witness=arc"
    assert verdict("lineal-Z").record() == "discrete=yes clause=lineal-trivial witness=vertex"
    assert verdict("single-edge-inversion").clause == "inversion"


def test_focal_ignores_actions():
    d = corpus.get("focal-T3").load()
    for v in d.vertices:
        universe = d.actions[v].universe
        blocks = [d.colour_set(a).colours for a in d.out_arcs(v)]
        full = []
        for b in blocks:
            if len(b) > 1:
                full.append(perm.Permutation.from_cycles(universe, [b]))
                full.append(perm.Permutation.from_cycles(universe, [b[:2]]))
        d.actions[v] = PermGroup(universe, tuple(full))
    assert lad.validate(d) == []
    assert scopo.classify(d).type == "Focal"
    assert not discrete.decide(d).discrete


def test_witness_examples():
    w = discrete.discreteness_witness(corpus.get("u-s2-a3").load())
    assert w.base == "u" and len(w.paths) == 2 and len(w.paths[1]) == 1
    assert discrete.discreteness_witness(corpus.get("lineal-Z").load()).paths == ((),)
    inv = discrete.discreteness_witness(corpus.get("single-edge-inversion").load())
    assert inv.paths == ((), ("1",)) and inv.colours == ("1",)
    with pytest.raises(discrete.NotDiscrete):
        discrete.discreteness_witness(corpus.get("general-autT3").load())


FIXED_S3 = (
    "vertex v0\nvertex u\n"
    "arc a from v0 to u reverse b colours 1 2 3\narc b from u to v0 reverse a colours x\n"
    "action v0 gens (1 2 3); (1 2)\naction u trivial\n"
)


def test_fixed_vertex_witness_is_a_base():
    d = lad.load(FIXED_S3)
    dv = discrete.decide(d)
    assert dv.discrete and dv.clause == "fixed-vertex"
    w = discrete.discreteness_witness(d)
    assert w.base == "v0" and w.paths == ((), ("1",), ("2",))
    t = dtree.build(d, "v0", 3)
    assert not ugroup.stabiliser_search(t, w.paths, 2).found
    assert ugroup.stabiliser_search(t, [(), ("1",)], 2).found


# -- symbolic clauses ----------------------------------------------------------

HUB = "vertex v\nvertex w\narc a from v to w reverse b colours infinite N\narc b from w to v reverse a colours 0\n"


def test_symbolic_finite_base_holds():
    d = lad.load(HUB + "action v symbolic trivial=false semiregular=false finite_base=true orbits a\naction w trivial\n")
    assert lad.validate(d) == []
    dv = discrete.decide(d)
    assert dv.discrete and dv.clause == "fixed-vertex"
    assert "v.finite_base" in dv.consumed and "w.trivial" not in dv.consumed
    assert dv.record().endswith("flags=v.finite_base")


def test_symbolic_finite_base_fails():
    d = lad.load(HUB + "action v symbolic trivial=false semiregular=false finite_base=false orbits a\naction w trivial\n")
    dv = discrete.decide(d)
    assert not dv.discrete and dv.witness == "finite-base:v"


def test_infinite_arc_into_nontrivial_vertex():
    d = lad.load(
        HUB + "vertex x\n"
        "arc c from w to x reverse e colours p q\narc e from x to w reverse c colours z\n"
        "action v symbolic trivial=false semiregular=false finite_base=true orbits a\n"
        "action w gens (p q)\naction x trivial\n"
    )
    assert lad.validate(d) == []
    assert scopo.classify(d).type == "FixedVertex"
    dv = discrete.decide(d)
    assert not dv.discrete and dv.witness == "infinite-arc:a"


def test_symbolic_witness_lists_symbolic_vertex():
    d = lad.load(HUB + "action v symbolic trivial=false semiregular=false finite_base=true orbits a\naction w trivial\n")
    w = discrete.discreteness_witness(d)
    assert w.symbolic == ("v",)


def test_symbolic_semiregular_flag_consumed():
    d = lad.load(
        "vertex v\nloop l at v self-reverse colours infinite N\n"
        "action v symbolic trivial=false semiregular=true finite_base=true orbits l\n"
    )
    dv = discrete.decide(d)
    assert scopo.classify(d).type == "General"
    assert dv.discrete and dv.consumed == ("v.semiregular",)


# -- properties ----------------------------------------------------------------


def semiregular_by_enumeration(group):
    try:
        elements = perm.enumerate_elements(group, 50_000)
    except perm.CapExceeded:
        assume(False)
    for g in elements:
        if not g.is_identity() and any(g(p) == p for p in group.universe):
            return False
    return True


def trivial_by_generators(group):
    return all(g.is_identity() for g in group.generators)


def expected_discrete(d, kind, cotree):
    if kind in ("Focal", "Horocyclic"):
        return False
    if kind == "Lineal":
        return all(trivial_by_generators(d.actions[v]) for v in d.vertices)
    if kind == "General":
        inside = set(cotree.vertices)
        for v in d.vertices:
            if v in inside and not semiregular_by_enumeration(d.actions[v]):
                return False
            if v not in inside and not trivial_by_generators(d.actions[v]):
                return False
        return True
    return True  # finite fixed-vertex and inversion diagrams are always discrete


@settings(max_examples=150, deadline=None)
@given(seeds())
def test_decide_matches_direct_check(seed):
    d = random_diagram(random.Random(seed))
    v = scopo.classify(d)
    assert discrete.decide(d, v).discrete == expected_discrete(d, v.type, v.cotree)


@settings(max_examples=100, deadline=None)
@given(seeds())
def test_trivial_actions_are_discrete(seed):
    d = random_diagram(random.Random(seed), trivial=True)
    assert discrete.decide(d).discrete


@settings(max_examples=100, deadline=None)
@given(seeds())
def test_unconditional_types_ignore_actions(seed):
    rng = random.Random(seed)
    d = random_diagram(rng)
    kind = scopo.classify(d).type
    if kind not in ("Focal", "Horocyclic"):
        return
    for v in d.vertices:
        universe = d.actions[v].universe
        gens = [
            perm.Permutation.from_cycles(universe, [d.colour_set(a).colours])
            for a in d.out_arcs(v)
            if d.colour_set(a).size > 1
        ]
        d.actions[v] = PermGroup(universe, tuple(gens))
    assert scopo.classify(d).type == kind
    assert not discrete.decide(d).discrete


@settings(max_examples=40, deadline=None)
@given(seeds())
def test_witness_has_trivial_stabiliser(seed):
    d = random_diagram(random.Random(seed), max_vertices=4, max_edges=4, sizes=(1, 1, 2))
    v = scopo.classify(d)
    dv = discrete.decide(d, v)
    if not dv.discrete:
        return
    w = discrete.discreteness_witness(d, dv, v)
    depth = max(len(p) for p in w.paths)
    if depth > 3:
        return
    t = dtree.build(d, w.base, depth + 2)
    if len(t) > 3000:
        return
    assert not ugroup.stabiliser_search(t, w.paths, depth + 1).found


def test_inversion_witness_crosses_the_loop():
    d = lad.load(
        "vertex v\nvertex u\nloop l at v self-reverse colours 1\n"
        "arc a from v to u reverse b colours 2 3\narc b from u to v reverse a colours x\n"
        "action v gens (2 3)\naction u trivial\n"
    )
    v = scopo.classify(d)
    assert v.type == "Inversion"
    w = discrete.discreteness_witness(d)
    assert set(w.paths) == {(), ("1",), ("2",), ("1", "2")}
    t = dtree.build(d, "v", 4)
    assert not ugroup.stabiliser_search(t, w.paths, 3).found
    assert ugroup.stabiliser_search(t, [(), ("1",), ("2",)], 3).found
