from fractions import Fraction
from itertools import combinations

import pytest

from cosetgeom import coarse as co
from cosetgeom import group_actions as ga
from cosetgeom import schreier as sc
from oracles import apply_word_points, bfs, components, schreier_ball, separates_shells, simple_graph


def _oracle_ends(labels, n, r, R, sigma=None):
    dist = schreier_ball(labels, n, (1, 1), R, sigma)
    adj = simple_graph(labels, dist, sigma)
    annulus = [v for v, d in dist.items() if r < d <= R]
    return sum(1 for c in components(adj, annulus) if any(dist[v] == R for v in c))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_ends_match_oracle(n):
    act = ga.houghton_action(n)
    prof = co.ends_profile(sc.build_ball(act, (1, 1), 12), [0, 2, 5])
    for r in (0, 2, 5):
        assert prof.counts[r] == _oracle_ends(act.labels, n, r, 12) == n


def test_ends_extended_action():
    sigma = ga.parse_cycles("(2,3)", 3)
    act = ga.extended_action(3, sigma)
    prof = co.ends_profile(sc.build_ball(act, (1, 1), 12), [2])
    assert prof.counts[2] == _oracle_ends(act.labels, 3, 2, 12, sigma) == 2


def test_ends_scale_errors():
    ball = sc.build_ball(ga.houghton_action(2), (1, 1), 6)
    with pytest.raises(co.ScaleError):
        co.ends_profile(ball, [5])
    with pytest.raises(co.ScaleError):
        co.ends_profile(ball, [])


def _brute_min_separator(labels, n, mu, r, R, act=None):
    dist = schreier_ball(labels, n, (1, 1), R)
    adj = simple_graph(labels, dist)
    annulus = [v for v, d in dist.items() if r < d <= R]
    power = {}
    for v in annulus:
        near = bfs(adj, v)
        power[v] = {u for u in annulus if u != v and near.get(u, 99) <= mu}
    inner = {v for v in annulus if dist[v] <= r + mu}
    outer = {v for v in annulus if dist[v] > R - mu}
    for k in range(len(annulus) + 1):
        for cut in combinations(sorted(annulus), k):
            if separates_shells(power, annulus, inner, outer, cut):
                return k, power, inner, outer
    raise AssertionError("unreachable")


@pytest.mark.parametrize("kind,n,mu,R", [("houghton", 2, 1, 8), ("houghton", 3, 1, 8),
                                         ("line", 2, 1, 9), ("line", 2, 2, 9), ("houghton", 2, 2, 8)])
def test_narrowness_equals_brute_force_min_cut(kind, n, mu, R):
    act = ga.houghton_action(n) if kind == "houghton" else ga.line_action()
    rep = co.narrowness_profile(sc.build_ball(act, (1, 1), R), mu, 2)
    k, power, inner, outer = _brute_min_separator(act.labels, n, mu, 2, R)
    assert rep.witness_count == k
    assert rep.certificate_verified
    seen = set()
    for path in rep.witnesses:
        path = [tuple(p) for p in path]
        assert path[0] in inner and path[-1] in outer
        assert all(b in power[a] for a, b in zip(path, path[1:]))
        assert not seen & set(path)
        seen |= set(path)
    assert len(rep.cut) == k


def test_narrowness_line_scales_with_mu():
    ball = sc.build_ball(ga.line_action(), (1, 1), 12)
    assert [co.narrowness_profile(ball, mu, 2).witness_count for mu in (1, 2, 3)] == [2, 4, 6]
    with pytest.raises(co.ScaleError):
        co.narrowness_profile(ball, 10, 2)


def test_coarse_components():
    ball = sc.build_ball(ga.line_action(), (1, 1), 6)
    pts = [(1, 3), (1, 5), (2, 3)]
    assert len(co.coarse_components(ball, pts, 1)) == 3
    assert len(co.coarse_components(ball, pts, 2)) == 2
    assert len(co.coarse_components(ball, pts, 6)) == 1


@pytest.mark.parametrize("n", [2, 3, 4])
def test_linear_growth(n):
    table = sc.growth_table(sc.build_ball(ga.houghton_action(n), (1, 1), 64))
    # Y_n is n rays glued at the basepoint: |B(r)| = n r + 1
    assert table.sizes == tuple(n * r + 1 for r in range(65))
    v = co.linear_growth_check(table)
    assert v.holds and v.C_estimate == Fraction(n + 1)


def test_growth_check_flags_superlinear_tables():
    sq = sc.GrowthTable(tuple((r + 1) ** 2 for r in range(20)))
    assert not co.linear_growth_check(sq).holds
    with pytest.raises(co.ScaleError):
        co.linear_growth_check(sc.GrowthTable((1, 3, 5)))


@pytest.mark.parametrize("n", [2, 3])
def test_loop_words_fix_basepoint(n):
    act = ga.houghton_action(n)
    ball = sc.build_ball(act, (1, 1), 5)
    words = co.loop_words(ball, 6)
    assert words
    for lw in words:
        assert len(lw) <= 6
        assert apply_word_points(lw.word, (1, 1)) == (1, 1)
    with pytest.raises(co.ScaleError):
        co.loop_words(ball, 12)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_double_cosets(n):
    ball = sc.build_ball(ga.houghton_action(n), (1, 1), 12)
    part = co.double_coset_orbits(ball, 6)
    assert len(part) == 2 and part.stable
    assert part.classes[0] == ((1, 1),)
    assert len(part.classes[1]) == len(ball) - 1
    assert part.class_of((2, 5)) == 1
    with pytest.raises(co.ScaleError):
        co.double_coset_orbits(sc.build_ball(ga.houghton_action(n), (1, 1), 4), 6)


def test_double_cosets_small_budget_is_not_final():
    # with no loop words every coset is its own class
    part = co.double_coset_orbits(sc.build_ball(ga.houghton_action(2), (1, 1), 6), 0)
    assert len(part) == len(part.classes) == 13


def test_commensurator_probe():
    act = ga.houghton_action(2)
    g1 = co.commensurator_probe(act, ga.parse_word("g1"), 16)
    assert g1.verdict == "GrowingSoFar"
    assert g1.image_sizes == tuple(2 * r for r in range(1, 17))
    assert co.commensurator_probe(act, (), 16).verdict == "BoundedSoFar"
    assert co.commensurator_probe(act, (), 16).image_sizes == (1,) * 16


def test_coset_distance_probe():
    act = ga.houghton_action(2)
    ball = sc.build_ball(act, (1, 1), 10)
    assert co.coset_distance_probe(ball, ga.parse_word("g1 g1"), 5) == 1
    assert co.coset_distance_probe(ball, (), 5) == 0
    with pytest.raises(co.ScaleError):
        co.coset_distance_probe(ball, ga.parse_word("g1 g1"), 8)
