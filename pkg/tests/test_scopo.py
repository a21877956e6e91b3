import itertools
import random

import pytest
from hypothesis import given, settings

from gen import random_diagram, seeds
from ladcalc import corpus, lad, scopo, sgraph
from ladcalc.sgraph import NotATree

STAR = lad.load(
    "vertex c\nvertex s1\nvertex s2\nvertex s3\n"
    "arc i1 from s1 to c reverse o1 colours 1\narc o1 from c to s1 reverse i1 colours 4\n"
    "arc i2 from s2 to c reverse o2 colours 2\narc o2 from c to s2 reverse i2 colours 5\n"
    "arc i3 from s3 to c reverse o3 colours 3\narc o3 from c to s3 reverse i3 colours 6\n"
    "action c trivial\naction s1 trivial\naction s2 trivial\naction s3 trivial\n"
)


# -- independent oracles -----------------------------------------------------


def projecting_paths(d, K, v, limit):
    """Up to two arc-non-backtracking walks from v to K avoiding K until the end."""
    g = d.graph
    found = []
    stack = [(v, None, [])]
    while stack and len(found) < 2:
        x, last, arcs = stack.pop()
        if len(arcs) > limit:
            continue
        for a in g.out_arcs(x):
            if last is not None and a == g.r(last):
                continue
            y = g.t(a)
            if y in K:
                found.append(arcs + [a])
            else:
                stack.append((y, a, arcs + [a]))
    return found


def delta_cotree_arcs(d, K):
    """O_K if K is a Δ-cotree, else None (brute force from the definition)."""
    g = d.graph
    K = set(K)
    if not K or not sgraph.is_connected(g.induced(K)):
        return None
    limit = 2 * len(g.vertices) + 2
    O = set()
    for v in g.vertices:
        if v in K:
            continue
        paths = projecting_paths(d, K, v, limit)
        if len(paths) != 1:
            return None
        O.update(paths[0])
    if not all(d.colours[a].is_singleton for a in O):
        return None
    return O


def all_cotrees(d):
    vs = d.graph.vertices
    out = []
    for k in range(1, len(vs) + 1):
        for K in itertools.combinations(vs, k):
            O = delta_cotree_arcs(d, K)
            if O is not None:
                out.append((frozenset(K), O))
    return out


def scopo_by_definition(d, O):
    g = d.graph
    if any(g.r(a) in O for a in O):
        return False
    if not all(d.colours[a].is_singleton for a in O):
        return False
    for v in g.vertices:
        mine = [a for a in g.out_arcs(v) if a in O]
        if len(mine) > 1:
            return False
        if mine and not all(g.r(b) in O for b in g.out_arcs(v) if b != mine[0]):
            return False
    return True


def partial_orientations(d):
    g = d.graph
    choices = []
    for a, b in g.edges():
        choices.append([(), (a,), (b,)] if a != b else [(), (a,)])
    for combo in itertools.product(*choices):
        yield frozenset(x for part in combo for x in part)


def independent_attractor(d, O):
    g = d.graph
    f = {v: next((g.t(a) for a in g.out_arcs(v) if a in O), v) for v in g.vertices}
    K = set()
    for v in g.vertices:
        x = v
        for _ in range(len(g.vertices)):
            x = f[x]
        y = x
        while True:
            K.add(y)
            y = f[y]
            if y == x:
                break
    return K


# -- examples ------------------------------------------------------------------


def test_is_scopo_examples():
    assert scopo.is_scopo(STAR, [])
    assert scopo.is_scopo(STAR, ["i1", "i2", "i3"])
    assert not scopo.is_scopo(STAR, ["i1", "o2"])


def test_is_scopo_rejects_big_colour_sets():
    d = corpus.get("focal-T3").load()
    assert scopo.is_scopo(d, ["a"])
    assert not scopo.is_scopo(d, ["ab"])


def test_attractor_examples():
    d = corpus.get("u-s2-a3").load()
    res = scopo.attractor(d, [])
    assert res.kind == "periodic" and res.vertices == {"u", "w"} and res.scopo_type == "a"
    focal = corpus.get("focal-T3").load()
    res = scopo.attractor(focal, ["a"])
    assert res.vertices == {"v0"} and res.scopo_type == "b"


def test_horocyclic_end_attractor():
    d = corpus.get("horocyclic-T3").load()
    dirs = {"left": "out", "right": "in"}
    assert scopo.is_scopo(d, [], dirs)
    assert not scopo.is_scopo(d, [], {"left": "out"})
    assert not scopo.is_scopo(d, [], {"right": "out", "left": "in"})
    res = scopo.attractor(d, [], dirs)
    assert res.kind == "end" and res.end == "left" and res.scopo_type == "c"


def test_unoriented_ray_lies_in_attractor():
    d = corpus.get("fixed-vertex-T3").load()
    res = scopo.attractor(d, [])
    assert res.vertices == {"v0"} and res.rays == ("r",)


def test_minimal_cotree_examples():
    assert scopo.minimal_cotree(corpus.get("fixed-vertex-T3").load()) == scopo.Cotree(("v0",), (), "vertex")
    general = scopo.minimal_cotree(corpus.get("general-autT3").load())
    assert general.vertices == ("v0",) and general.shape is None
    assert scopo.minimal_cotree(corpus.get("u-s2-a3").load()).vertices == ("u", "w")
    horo = scopo.minimal_cotree(corpus.get("horocyclic-T3").load())
    assert horo.rays == ("left",)


def test_single_vertex_cotrees_examples():
    assert scopo.single_vertex_cotrees(corpus.get("fixed-vertex-T3").load()) == ["v0"]
    edge = lad.load(
        "vertex u\nvertex v\narc a from u to v reverse b colours 1\narc b from v to u reverse a colours 2\n"
        "action u trivial\naction v trivial\n"
    )
    assert scopo.single_vertex_cotrees(edge) == ["u", "v"]
    assert scopo.single_vertex_cotrees(corpus.get("u-s2-a3").load()) == []


def test_horocyclic_ends_examples():
    assert scopo.horocyclic_ends(corpus.get("horocyclic-T3").load()) == ["left"]
    assert scopo.horocyclic_ends(corpus.get("fixed-vertex-T3").load()) == []
    assert scopo.horocyclic_ends(corpus.get("u-s2-a3").load()) == []
    with pytest.raises(NotATree):
        scopo.horocyclic_ends(corpus.get("focal-T3").load())


@pytest.mark.parametrize("entry", corpus.ENTRIES, ids=lambda e: e.name)
def test_classify_corpus(entry):
    assert scopo.classify(entry.load()).type == entry.expected_type


def test_classify_small_cases():
    line = lad.load(
        "vertex v\narc a from v to v reverse b colours 1\narc b from v to v reverse a colours 2\naction v trivial\n"
    )
    assert scopo.classify(line).type == "Lineal"
    flip = lad.load("vertex v\nloop l at v self-reverse colours 1\naction v trivial\n")
    verdict = scopo.classify(flip)
    assert verdict.type == "Inversion" and verdict.record() == "type=Inversion witness=v loop=l"


def test_verdict_records():
    assert scopo.classify(corpus.get("fixed-vertex-T3").load()).record() == "type=FixedVertex witness=v0"
    assert scopo.classify(corpus.get("focal-T3").load()).record() == "type=Focal witness=v0 orientation=a"
    assert scopo.classify(corpus.get("horocyclic-T3").load()).record() == "type=Horocyclic witness=ray:left"


def test_scopo_enumeration_limit():
    d = random_diagram(random.Random(1), max_vertices=3, max_edges=8)
    with pytest.raises(scopo.TooManyEdges):
        list(scopo.scopos(d, max_edges=len(d.graph.edges()) - 1))
    with pytest.raises(scopo.TooManyEdges):
        list(scopo.scopos(corpus.get("fixed-vertex-T3").load()))


def test_empty_diagram_only_has_empty_scopo():
    d = lad.load("vertex v\naction v trivial\n")
    assert list(scopo.scopos(d)) == [frozenset()]
    assert scopo.attractor(d, []).scopo_type == "a"


# -- properties ----------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(seeds())
def test_scopo_enumeration_matches_exhaustive_filter(seed):
    d = random_diagram(random.Random(seed))
    filtered = set()
    for O in partial_orientations(d):
        verdict = scopo.is_scopo(d, O)
        assert verdict == scopo_by_definition(d, O)
        if verdict:
            filtered.add(O)
    listed = list(scopo.scopos(d))
    assert len(listed) == len(set(listed))
    assert set(listed) == filtered


@settings(max_examples=60, deadline=None)
@given(seeds())
def test_attractor_satisfies_exactly_one_clause(seed):
    d = random_diagram(random.Random(seed))
    g = d.graph
    for O in scopo.scopos(d):
        res = scopo.attractor(d, O)
        K = independent_attractor(d, O)
        assert res.kind == "periodic" and set(res.vertices) == K
        inside = {a for a in O if g.o(a) in K and g.t(a) in K}
        outside = set(O) - inside
        O_K = delta_cotree_arcs(d, K)
        clause_a = O_K is not None and not inside and set(O) == O_K
        clause_b = False
        sub = g.induced(K)
        if inside and sgraph.is_cycle_graph(sub) is not None:
            proj = delta_cotree_arcs(d, K)
            clause_b = inside in [set(o) for o in sgraph.cyclic_orientations(sub)] and proj == outside
        assert clause_a != clause_b
        assert res.scopo_type == ("a" if clause_a else "b")


@settings(max_examples=60, deadline=None)
@given(seeds())
def test_minimal_cotree_is_smallest_cotree(seed):
    d = random_diagram(random.Random(seed))
    cot = scopo.minimal_cotree(d)
    assert delta_cotree_arcs(d, cot.vertices) is not None
    sizes = [len(K) for K, _ in all_cotrees(d)]
    assert len(cot.vertices) == min(sizes)
    if scopo.classify(d).type != "FixedVertex":
        smallest = [K for K, _ in all_cotrees(d) if len(K) == len(cot.vertices)]
        assert smallest == [frozenset(cot.vertices)]


@settings(max_examples=60, deadline=None)
@given(seeds())
def test_pruning_order_does_not_matter(seed):
    d = random_diagram(random.Random(seed))
    reference = scopo.minimal_cotree(d)
    rng = random.Random(seed)
    for _ in range(10):
        assert scopo.minimal_cotree(d, rng=rng) == reference


@settings(max_examples=60, deadline=None)
@given(seeds())
def test_classification_matches_brute_force(seed):
    d = random_diagram(random.Random(seed))
    g = d.graph
    cotrees = all_cotrees(d)
    labels = []
    if sgraph.is_tree(g) and any(len(K) == 1 for K, _ in cotrees):
        labels.append("FixedVertex")
    for K, _ in cotrees:
        sub = g.induced(K)
        if len(K) == 1 and len(sub.arcs) == 1 and sub.r(sub.arcs[0]) == sub.arcs[0]:
            if d.colours[sub.arcs[0]].is_singleton:
                labels.append("Inversion")
        if sgraph.is_cycle_graph(sub) is not None:
            if all(d.colours[a].is_singleton for a in sub.arcs):
                labels.append("Lineal")
            for orient in sgraph.cyclic_orientations(sub):
                if all(d.colours[a].is_singleton for a in orient) and any(
                    d.colours[a].size >= 2 for a in sub.arcs if a not in orient
                ):
                    labels.append("Focal")
    labels = sorted(set(labels))
    assert len(labels) <= 1
    expected = labels[0] if labels else "General"
    verdict = scopo.classify(d)
    assert verdict.type == expected
    if verdict.type in ("Lineal", "Focal"):
        assert sgraph.is_cycle_graph(g.induced(verdict.cotree.vertices)) is not None
    if verdict.type == "FixedVertex":
        assert sgraph.is_tree(g)
        assert set(verdict.witness) == {next(iter(K)) for K, _ in cotrees if len(K) == 1}
