import math

import pytest
from hypothesis import given, settings, strategies as st

from fencenav.bench import tree_mismatches
from fencenav.bounds import check_bounds
from fencenav.fences import Post
from fencenav.navigate import (PreconditionError, SearchState, _branch_point, envelope, find_fence_tree,
                               go_down, run_cumulative, run_incremental, search_trip, window_params)
from fencenav.oracle import fence_tree_oracle
from fencenav.robot import RobotState
from fencenav.scene import ExplicitScene, Obstacle, Point, empty_scene, gen_random, path_length


def tall_column():
    return ExplicitScene(200, [Obstacle(0, 50, -1000, 51, 1000)])


def staircase():
    """Two-fence scene where fence 1 gets two posts ahead of fence 2 and passes it in x."""
    return ExplicitScene(40, [Obstacle(0, 10, -11, 11, -8.5), Obstacle(1, 15, -10, 16, -8),
                              Obstacle(2, 20, -14, 21, -9.5), Obstacle(3, 25, -12, 26, -4)])


def start(scene, root, k, M, tau, L_guess):
    rs = RobotState(scene, position=root.center, debug=True)
    return rs, SearchState.start(root, k, M, tau, L_guess)


def test_window_params():
    assert window_params(100, 4, 100.0) == (44, 5.0)
    M, tau = window_params(1000, 3, 1000.0)
    assert M - 3 == math.ceil(2 * 1000 / (1000 / math.sqrt(3000)) - 1e-9)
    assert tau == pytest.approx(2000 / (M - 3))


def test_single_column_tree_ends_on_last_post():
    root = Post.at_level(50, -100, 0, 5.0, 0)
    rs, st_ = start(tall_column(), root, 4, 44, 5.0, 100.0)
    assert find_fence_tree(rs, st_)
    assert rs.position == Point(50, 100)
    assert {p.x for p in st_.tree.posts.values()} == {50}
    assert len(st_.tree.posts) == 4 * 44
    assert rs.tag_totals.get("gobackdown", 0.0) == 0.0
    assert check_bounds([_as_group(st_, rs)]).ok


def _as_group(st_, rs):
    from fencenav.navigate import GroupResult
    tree = st_.tree
    return GroupResult(tree, rs.odometer, tree.delta_x(), tree.path_from_root((st_.k, st_.M)), False,
                       dict(rs.tag_totals), [], 0.0, st_.tau, st_.L_guess, list(rs.tau_paths))


def test_empty_beyond_root_halts_on_first_up_edge():
    sc = ExplicitScene(100, [Obstacle(0, 10, -12, 11, -8)])
    root = Post.at_level(10, -10, 0, 2.0, 0)
    rs, st_ = start(sc, root, 1, 4, 2.0, 10.0)
    assert not find_fence_tree(rs, st_)
    assert rs.at_wall
    assert st_.wall_edge[0] == (1, 1)
    assert rs.tag_totals == {"edge-up": pytest.approx(2 + 90)}


def test_go_down_pure_vertical():
    sc = tall_column()
    ref = fence_tree_oracle(sc, Post.at_level(50, -100, 0, 5.0, 0), 2, 2, 5.0).tree
    st_ = SearchState(2, 2, 5.0, 100.0, ref, 1, [0, 2, 2, 0], [-math.inf, 50.0, 50.0, -math.inf])
    rs = RobotState(sc, position=Point(50, -95))
    go_down(rs, st_, 1, 2, 2)
    assert rs.position == Point(50, -100)
    assert rs.odometer == 5


def test_go_down_precondition():
    sc = tall_column()
    ref = fence_tree_oracle(sc, Post.at_level(50, -100, 0, 5.0, 0), 2, 2, 5.0).tree
    st_ = SearchState(2, 2, 5.0, 100.0, ref, 1, [0, 2, 2, 0], [-math.inf, 50.0, 50.0, -math.inf])
    rs = RobotState(sc, position=Point(50, -200))
    with pytest.raises(PreconditionError):
        go_down(rs, st_, 1, 2, 2)


def test_go_back_down_staircase():
    sc = staircase()
    root = Post.at_level(10, -10, 0, 1.0, 0)
    rs, st_ = start(sc, root, 2, 3, 1.0, 10.0)
    assert find_fence_tree(rs, st_)
    posts = {k: (p.x, p.y) for k, p in st_.tree.posts.items()}
    assert posts == {(1, 1): (10, -10), (1, 2): (15, -9), (1, 3): (25, -8),
                     (2, 1): (20, -11), (2, 2): (25, -10), (2, 3): (25, -9)}
    # back from x=25 to x=20 along y=-8, then three unit steps down to (20,-11)
    assert rs.tag_totals["gobackdown"] == pytest.approx(8)
    ref = fence_tree_oracle(sc, root, 2, 3, 1.0).tree
    assert {k: (p.x, p.y) for k, p in ref.posts.items()} == posts


def test_search_trip_empty():
    res = search_trip(empty_scene(100), 4)
    assert res.trip_length == 100 and res.groups == [] and res.fences == 0
    assert res.composed_path == [Point(0, 0), Point(100, 0)]


def test_search_trip_doubles_window():
    sc = gen_random(64, 0.3, seed=0, h_max=32 * 8)
    res = search_trip(sc, 1)
    assert res.restarts >= 1
    assert res.L_guess == 64 * 2 ** res.restarts
    assert res.robot.at_wall


def test_cumulative_empty():
    rep = run_cumulative(empty_scene(100), 5)
    assert rep.trip_lengths == [100.0] * 5
    assert rep.rho == pytest.approx(1, abs=1e-9)


def test_incremental_empty():
    rep = run_incremental(empty_scene(100), 8)
    assert rep.trip_lengths == [100.0] * 8


def test_cumulative_single_column_k1(column):
    rep = run_cumulative(column, 1)
    path = rep.extra["path"]
    assert path[0] == Point(0, 0) and path[-1].x == 100
    rs = RobotState(column)
    rs.follow_path(path)
    assert rs.odometer == pytest.approx(path_length(path))


def test_k_out_of_range():
    with pytest.raises(ValueError):
        run_cumulative(empty_scene(10), 11)
    with pytest.raises(ValueError):
        run_incremental(empty_scene(10), 0)


@given(st.integers(0, 10 ** 6), st.sampled_from([1, 2, 3, 5, 8]),
       st.sampled_from([None, 16.0]), st.sampled_from([0.1, 0.3]))
@settings(max_examples=25, deadline=None)
def test_search_matches_oracle_and_bounds(seed, k, tall, density):
    n = 64
    sc = gen_random(n, density, seed=seed, h_max=None if tall is None else tall * 8)
    rep = run_cumulative(sc, k, compute_L=False)
    res = rep.extra["search"]
    assert res.robot.at_wall
    bad, _ = tree_mismatches(sc, res.groups, partial=True)
    assert bad == 0
    assert check_bounds(res.groups, n=n).ok
    # trips 2..k replay the composed path exactly
    for length in rep.trip_lengths[1:]:
        assert length == pytest.approx(path_length(rep.extra["path"]), abs=1e-6)


def test_incremental_random_scene():
    sc = gen_random(64, 0.3, seed=4, h_max=16 * 8)
    rep = run_incremental(sc, 64)
    assert len(rep.trip_lengths) == 64
    assert rep.extra["path_length"] <= 10 * rep.L
    assert rep.extra["C_measured"] > 0
    ks = [e["k"] for e in rep.extra["epochs"]]
    assert ks[0] == 1 and len(ks) >= 3 and ks == sorted(ks)


def test_branch_point():
    walked = [Point(0, 0), Point(5, 0), Point(5, -3), Point(8, -3)]
    known = [Point(0, 0), Point(5, 0), Point(5, -1), Point(9, -1)]
    back, rest = _branch_point(walked, known)
    assert back == [Point(5, -1), Point(5, -3), Point(8, -3)]
    assert rest == [Point(5, -1), Point(9, -1)]


def test_envelope():
    assert envelope([5, 4, 3, 2, 1, 1, 1, 1]) == [5, 4, 2, 1]
    assert envelope([1]) == [1]


def test_incremental_skips_restart_retraces():
    sc = gen_random(64, 0.3, seed=13, h_max=16 * math.sqrt(64))
    rep = run_incremental(sc, 64, debug=False)
    searches = rep.extra["searches"]
    assert searches[2].restarts == 1
    res = searches[2]
    skipped = sum(seg.length for a, b in res.restart_spans for seg in res.robot.segments[a:b])
    assert skipped > 0
    epoch = [t for t in rep.extra["schedule"] if t["kind"] == "search" and t["k"] == rep.extra["epochs"][2]["k"]]
    walked = sum(t["chunk"] for t in epoch)
    assert walked == pytest.approx(res.trip_length - skipped, abs=1e-6)
