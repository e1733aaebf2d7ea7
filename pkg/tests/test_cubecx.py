from itertools import combinations

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from cosetgeom.cubecx import graphs as gr
from cosetgeom.cubecx import pocset as ps
from cosetgeom.cubecx import window as wd
from oracles import djokovic_classes, facing_triple_count, median_counts


def _labelled(g):
    return list(g.vertices), [(g.vertices[a], g.vertices[b]) for a, b in g.edges]


# --- intervals and the median test ------------------------------------------------

def test_intervals():
    p = gr.path_graph(3)
    assert gr.interval(p, 2, 2) == {2}
    assert gr.interval(p, 0, 3) == {0, 1, 2, 3}
    sq = gr.cube_graph(2)
    assert gr.interval(sq, (0, 0), (1, 1)) == set(sq.vertices)
    assert gr.interval(sq, (0, 0), (0, 1)) == {(0, 0), (0, 1)}


@pytest.mark.parametrize("g", [gr.path_graph(4), gr.tripod(), gr.spider(4, 2), gr.cube_graph(1),
                               gr.cube_graph(2), gr.cube_graph(3), gr.cube_graph(4),
                               gr.cycle_graph(4), gr.cycle_graph(5), gr.cycle_graph(6)])
def test_median_test_matches_oracle(g):
    counts = median_counts(*_labelled(g))
    res = gr.is_median(g)
    assert res.ok == all(c == 1 for c in counts.values())
    if not res.ok:
        assert counts[res.triple] == res.median_count != 1


def test_five_cycle_has_witness():
    res = gr.is_median(gr.cycle_graph(5))
    assert not res and res.triple is not None
    with pytest.raises(gr.NotMedianError):
        gr.hyperplanes(gr.cycle_graph(5))
    with pytest.raises(ValueError):
        gr.is_median(gr.MedianGraph((0, 1, 2), ((0, 1),)))


def test_k23_is_rejected():
    # K_{2,3}: every edge split is clean but triples of the degree-2 side have two medians
    g = gr.MedianGraph(tuple(range(5)), ((0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)))
    assert not gr.is_median(g)
    with pytest.raises(gr.NotMedianError):
        gr.hyperplanes(g)


# --- hyperplanes --------------------------------------------------------------------

@pytest.mark.parametrize("g,count", [(gr.path_graph(5), 5), (gr.cube_graph(3), 3), (gr.tripod(), 3),
                                     (gr.spider(4, 2), 8), (gr.cube_graph(4), 4)])
def test_hyperplanes_match_djokovic_oracle(g, count):
    hps = gr.hyperplanes(g)
    assert len(hps) == count
    ref = djokovic_classes(*_labelled(g))
    got = {frozenset(frozenset((g.vertices[a], g.vertices[b])) for a, b in h.edges) for h in hps}
    assert got == {c for _, _, c in ref}
    for h in hps:
        assert h.plus | h.minus == set(range(len(g))) and not h.plus & h.minus
        assert 0 in h.minus
        assert all(a in h.minus and b in h.plus for a, b in h.edges)


def test_relations():
    c = gr.hyperplanes(gr.cube_graph(2))
    assert gr.relation(c[0], c[1]) == gr.CROSS
    p = gr.hyperplanes(gr.path_graph(3))
    rels = {gr.relation(a, b) for a, b in combinations(p, 2)}
    assert gr.CROSS not in rels
    assert all(r.startswith("Nested") for r in rels)
    t = gr.hyperplanes(gr.tripod())
    assert not any(gr.crosses(a, b) for a, b in combinations(t, 2))
    with pytest.raises(ValueError):
        gr.relation(c[0], c[0])
    # the quarter that is empty decides the label
    h, k = p[0], p[1]  # h at edge 0-1, k at edge 1-2, so h+ = {1,2,3} contains k+ = {2,3}
    assert gr.relation(k, h) == "NestedPlusPlus"
    assert gr.relation(h, k) in {"NestedMinusMinus"}


def test_relation_labels_agree_with_containments():
    g = gr.spider(3, 2)
    hps = gr.hyperplanes(g)
    for h, k in combinations(hps, 2):
        r = gr.relation(h, k)
        if r == gr.CROSS:
            continue
        a, b = {"NestedPlusPlus": (1, 1), "NestedPlusMinus": (1, -1),
                "NestedMinusPlus": (-1, 1), "NestedMinusMinus": (-1, -1)}[r]
        assert h.side(a) <= k.side(b)


def test_separation_report():
    rep = gr.separation_report(gr.cube_graph(3))
    assert rep.counts() == {gr.CROSS: 3}
    assert rep.facing == []


@pytest.mark.parametrize("g,count", [(gr.tripod(), 1), (gr.path_graph(5), 0), (gr.cube_graph(3), 0),
                                     (gr.spider(4, 1), 4), (gr.spider(4, 2), 32), (gr.spider(3, 3), 27)])
def test_facing_triples_match_oracle(g, count):
    assert len(gr.facing_triples(g)) == facing_triple_count(*_labelled(g)) == count


def test_spider_inner_facing_triples():
    g = gr.spider(4, 2)
    hps = gr.hyperplanes(g)
    inner = [h.id for h in hps if g.vid((0, 0)) in h.support]
    assert len(inner) == 4
    assert len(gr.facing_triples(hps, among=inner)) == 4


def test_graph_json_round_trip():
    for g in (gr.cube_graph(3), gr.spider(3, 2), gr.path_graph(4)):
        assert gr.graph_from_json(gr.graph_to_json(g)) == g
    assert gr.builtin_graph("spider:4,2") == gr.spider(4, 2)
    with pytest.raises(ValueError):
        gr.builtin_graph("torus:3")


# --- poc-sets and duals -----------------------------------------------------------------

def test_dual_examples():
    d = ps.dual_cube_complex(ps.crossing_walls(3))
    assert (len(d), len(d.edges)) == (8, 12) and gr.is_median(d)
    chain = ps.dual_cube_complex(ps.chain_walls(3))
    assert len(chain) == 4 and len(chain.edges) == 3
    assert gr.is_median(chain) and max(len(a) for a in chain.adjacency) == 2
    one = ps.dual_cube_complex(ps.crossing_walls(1))
    assert (len(one), len(one.edges)) == (2, 1)


@pytest.mark.parametrize("k", range(1, 11))
def test_crossing_walls_give_cubes(k):
    d = ps.dual_cube_complex(ps.crossing_walls(k))
    assert len(d) == 2 ** k and len(d.edges) == k * 2 ** (k - 1) and d.connected


@pytest.mark.parametrize("k", range(1, 7))
def test_chain_duals_have_no_facing_triples(k):
    d = ps.dual_cube_complex(ps.chain_walls(k))
    assert len(d) == k + 1
    assert gr.facing_triples(d) == []


def test_pocset_axioms_enforced():
    with pytest.raises(ps.PocSetError):
        ps.PocSet.from_relations(1, [("A0", "A0*")])
    with pytest.raises(ps.PocSetError):
        ps.PocSet.from_relations(2, [("A0", "A1"), ("A1", "A0")])  # A0 = A1 breaks antisymmetry
    with pytest.raises(ps.PocSetError):
        ps.PocSet(1, np.array([[1, 1], [0, 1]], dtype=bool))  # not order reversing
    with pytest.raises(ps.PocSetError):
        ps.dual_cube_complex(ps.crossing_walls(25))


def test_pocset_json():
    p = ps.PocSet.from_relations(3, [("A0", "A1"), ("A2", "A1*")])
    assert ps.pocset_from_json(ps.pocset_to_json(p)) == p
    q = ps.pocset_from_json('{"walls": 3, "relations": [["A0", "A1"], ["A2", "A1*"]]}')
    assert q == p


relation_lists = st.lists(st.tuples(st.integers(0, 9), st.integers(0, 9)), max_size=6)


@settings(max_examples=60, deadline=None)
@given(relation_lists)
def test_dual_is_median_and_crossings_match(rels):
    walls = 5
    try:
        p = ps.PocSet.from_relations(walls, [(a, b) for a, b in rels if a // 2 != b // 2])
    except ps.PocSetError:
        assume(False)
    d = ps.dual_cube_complex(p)
    assert d.connected and gr.is_median(d)
    hps = gr.hyperplanes(d)
    assert len(hps) == walls
    # the hyperplane of wall w is the class of edges flipping coordinate w
    wall_of = {}
    for h in hps:
        a, b = h.edges[0]
        (w,) = [i for i in range(walls) if d.vertices[a][i] != d.vertices[b][i]]
        wall_of[w] = h
    for i, j in combinations(range(walls), 2):
        assert gr.crosses(wall_of[i], wall_of[j]) == p.transverse(i, j)


# --- windows ----------------------------------------------------------------------------

def test_window_validation():
    g = gr.path_graph(3)
    with pytest.raises(wd.WindowError):
        wd.WindowedShiftComplex(g, ((0, 1), (1, 1)))
    with pytest.raises(wd.WindowError):
        wd.WindowedShiftComplex(g, ((0, 0), (1, 3)))  # edge 0-1 goes to 0-3
    w = wd.line_window(3)
    assert {w.graph.vertices[i] for i in w.interior} == {-2, -1, 0, 1, 2}


def test_window_constructors_are_median():
    for w in (wd.line_window(6), wd.staircase_window(3), wd.ladder_window(4, 2)):
        assert gr.is_median(w.graph)


def test_line_skewer_and_transfer():
    w = wd.line_window(20)
    h = w.hyperplane_at(0, 1)
    res = wd.skewer_check(w, h, 3)
    assert (res.kind, res.power, res.direction) == (wd.SKEWERS, 1, "plus")
    t = wd.transfer(w, h, 1)
    assert t.verified and t.value == -1 and not t.lost
    assert [w.hyperplanes[i].edges for i in t.gained] == [h.edges]
    assert wd.transfer(w, h, 2).value == -2
    assert wd.transfer(w, h, 0).value == 0
    assert wd.transfer(w, h, -1).value == 1


def test_tiny_window_is_inconclusive():
    w = wd.line_window(2)
    assert wd.skewer_check(w, w.hyperplane_at(0, 1), 3).kind == wd.INCONCLUSIVE
    with pytest.raises(wd.WindowError):
        wd.skewer_check(w, w.hyperplane_at(-2, -1), 3)


def test_line_symdiff_empty():
    w = wd.line_window(20)
    for a in (-5, 0, 7):
        members, verified = wd.hyperplane_symdiff(w, w.hyperplane_at(a, a + 1), 1)
        assert members == set() and verified


def _brute_crossing_ids(w, h):
    # two classes cross iff some square carries an edge of each
    g = w.graph
    cls = {}
    for k in w.hyperplanes:
        for a, b in k.edges:
            cls[(min(a, b), max(a, b))] = k.id
    out = set()
    for a, b in g.edges:
        for c in g.adjacency[a]:
            for d in g.adjacency[b]:
                if c != b and d != a and g.has_edge(c, d) and c != d:
                    e1, e2 = cls[(a, b)], cls[(min(a, c), max(a, c))]
                    if e1 == h.id and e2 != h.id:
                        out.add(e2)
                    if e2 == h.id and e1 != h.id:
                        out.add(e1)
    return out


def test_staircase_symdiff_against_square_oracle():
    w = wd.staircase_window(8)
    g = w.graph
    for a in (-2, 0, 3):
        v = w.hyperplane_at((a, a), (a + 1, a))
        assert wd.crossing_set(w, v) == _brute_crossing_ids(w, v)
        members, verified = wd.hyperplane_symdiff(w, v, 1)
        assert verified
        rows = sorted({g.vertices[x][1] for i in members for e in w.hyperplanes[i].edges for x in e})
        # horizontal hyperplanes between rows a-1|a and a+1|a+2
        assert rows == [a - 1, a, a + 1, a + 2]
        for i in members:
            assert wd.skewer_check(w, w.hyperplanes[i], 3).kind == wd.SKEWERS


def test_staircase_transfer():
    w = wd.staircase_window(8)
    v = w.hyperplane_at((0, 0), (1, 0))
    assert wd.transfer(w, v, 1).value == -2
    assert wd.transfer(w, v, 2).value == -4


def test_ladder_rung_stabilises():
    w = wd.ladder_window(10, 2)
    rung = w.hyperplane_at((0, 0), (0, 1))
    res = wd.skewer_check(w, rung, 3)
    assert (res.kind, res.power) == (wd.STABILISES, 1)
    assert w.truncated(rung)
    _, verified = wd.hyperplane_symdiff(w, rung, 1)
    assert not verified
    # the shift preserves h+ outright, so nothing enters or leaves M+
    t = wd.transfer(w, rung, 1)
    assert t.verified and t.value == 0


def test_separation_index():
    w = wd.line_window(20)
    h, k = w.hyperplane_at(0, 1), w.hyperplane_at(5, 6)
    # k's own orbit point is not separated from anything; n1 <= 4 < 6 <= n2 is needed
    assert wd.separation_index(w, k, h, 8) == 2
    assert wd.separation_index(w, k, h, 0) == 0
    assert wd.separation_index(w, w.hyperplane_at(10, 11), h, 3) == 0
    lad = wd.ladder_window(10, 1)
    rung = lad.hyperplane_at((0, 0), (0, 1))
    assert wd.separation_index(lad, rung, lad.hyperplane_at((0, 0), (1, 0)), 4) == 0
    with pytest.raises(wd.WindowError):
        wd.separation_index(w, k, h, 25)


@settings(max_examples=40, deadline=None)
@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(-3, 3))
def test_transfer_additive(a, b, pos):
    line, stair = wd.line_window(20), wd.staircase_window(10)
    cases = [(line, line.hyperplane_at(pos, pos + 1)), (stair, stair.hyperplane_at((pos, pos), (pos + 1, pos)))]
    for w, h in cases:
        ta, tb, tab = (wd.transfer(w, h, p) for p in (a, b, a + b))
        if ta.verified and tb.verified and tab.verified:
            assert tab.value == ta.value + tb.value


@settings(max_examples=30, deadline=None)
@given(st.integers(-3, 3), st.integers(1, 3))
def test_sign_law(pos, p):
    w = wd.staircase_window(10)
    for h in (w.hyperplane_at((pos, pos), (pos + 1, pos)), w.hyperplane_at((pos, pos), (pos, pos + 1))):
        res = wd.skewer_check(w, h, p)
        t = wd.transfer(w, h, res.power or p)
        if res.kind == wd.SKEWERS and res.direction == "plus" and t.verified:
            assert t.value < 0
