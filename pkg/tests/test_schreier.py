import json

import pytest

from cosetgeom import group_actions as ga
from cosetgeom import schreier as sc
from oracles import letter_map, schreier_ball


@pytest.mark.parametrize("n,R", [(2, 6), (3, 5), (4, 4)])
def test_ball_matches_bfs_oracle(n, R):
    act = ga.houghton_action(n)
    ball = sc.build_ball(act, (1, 1), R)
    ref = schreier_ball(act.labels, n, (1, 1), R)
    assert {tuple(v): d for v, d in zip(ball.vertices, ball.spheres)} == ref
    # every stored edge is a generator move, and all moves inside the ball are stored
    expected = {(u, lbl, letter_map(lbl, 1)(u)) for u in ref for lbl in act.labels
                if letter_map(lbl, 1)(u) in ref}
    got = {(tuple(ball.vertices[u]), lbl, tuple(ball.vertices[v])) for u, lbl, v in ball.edges}
    assert got == expected


def test_small_ball_and_growth():
    ball = sc.build_ball(ga.houghton_action(2), (1, 1), 2)
    assert len(ball) == 5
    assert sc.growth_table(ball).sizes == (1, 3, 5)
    assert len(sc.build_ball(ga.houghton_action(3), (1, 1), 1)) == 4
    assert sc.build_ball(ga.houghton_action(2), (1, 1), 0).vertices == ((1, 1),)


def test_growth_csv():
    text = sc.growth_csv(sc.growth_table(sc.build_ball(ga.houghton_action(2), (1, 1), 2)))
    assert text == "r,ball_size,ratio\n0,1,\n1,3,3\n2,5,5/2\n"


def test_bad_inputs():
    with pytest.raises(ValueError):
        sc.build_ball(ga.houghton_action(2), (3, 1), 2)
    with pytest.raises(ValueError):
        sc.build_ball(ga.houghton_action(2), (1, 1), -1)


def test_graph_distance_and_exactness():
    ball = sc.build_ball(ga.houghton_action(2), (1, 1), 6)
    assert sc.graph_distance(ball, (1, 1), (1, 4)) == 3
    d, exact = sc.graph_distance(ball, (1, 3), (2, 2), with_exactness=True)
    assert d == 4 and exact
    d, exact = sc.graph_distance(ball, (1, 7), (2, 6), with_exactness=True)
    assert d == 12 and not exact  # the in-ball path runs through the basepoint
    assert sc.graph_distance(ball, (1, 1), (1, 50)) is None


def test_json_round_trip_and_dot():
    ball = sc.build_ball(ga.houghton_action(3), (1, 1), 3)
    text = sc.to_json(ball)
    doc = json.loads(text)
    assert {"basepoint", "radius", "vertices", "edges", "spheres"} <= set(doc)
    back = sc.from_json(text)
    assert back == ball
    assert sc.to_json(back) == text
    dot = sc.to_dot(ball)
    assert dot.startswith("digraph schreier {")
    assert dot.count("->") == len(ball.edges)
    assert sc.export(ball, "dot") == dot.encode()
    with pytest.raises(ValueError):
        sc.export(ball, "png")


def test_walk_matches_action():
    act = ga.houghton_action(2)
    ball = sc.build_ball(act, (1, 1), 5)
    word = ga.parse_word("g1 g1 beta g1^-1")
    i = ball.walk(word, ball.root)
    assert ball.vertices[i] == act.apply_word(word, (1, 1))
    assert ball.walk(ga.parse_word("g1^-1") * 6, ball.root) is None
