import copy
import math

from fencenav.bounds import BoundCheck, check_bounds, check_incremental, incremental_trip_bounds
from fencenav.navigate import run_cumulative, run_incremental, search_trip
from fencenav.scene import gen_random


def groups_of(seed=3, k=4):
    sc = gen_random(128, 0.3, seed=seed, h_max=16 * math.sqrt(128))
    return search_trip(sc, k).groups


def test_random_runs_pass():
    g = groups_of()
    rep = check_bounds(g, n=128)
    assert rep.ok and rep.checks
    names = {c.name for c in rep.checks}
    assert {"tree-path", "edges", "godown", "gobackdown", "backtrack", "group-total", "tau-path"} <= names


def test_single_column_has_zero_delta_x():
    from test_navigate import _as_group, start, tall_column
    from fencenav.fences import Post
    from fencenav.navigate import find_fence_tree
    rs, st_ = start(tall_column(), Post.at_level(50, -100, 0, 5.0, 0), 4, 44, 5.0, 100.0)
    find_fence_tree(rs, st_)
    g = _as_group(st_, rs)
    assert g.delta_x == 0
    assert check_bounds([g]).ok


def test_corrupted_ledger_is_flagged():
    g = groups_of()
    bad = copy.deepcopy(g)
    bad[0].costs["godown"] = 1e12
    rep = check_bounds(bad)
    assert not rep.ok
    assert {c.name for c in rep.violations} >= {"godown"}
    # the original is untouched
    assert check_bounds(g).ok


def test_fence_count_per_window():
    g = groups_of()
    rep = check_bounds(g, n=128)
    for c in rep.by_name("fences"):
        assert c.value <= c.bound


def test_bound_check_tolerance():
    assert BoundCheck("x", 1, 10.0 + 1e-9, 10.0).ok
    assert not BoundCheck("x", 1, 10.1, 10.0).ok
    assert BoundCheck("x", 1, 3.0, 10.0).slack == 7.0


def test_incremental_trip_bounds_hold():
    sc = gen_random(64, 0.3, seed=2)
    rep = run_incremental(sc, 64, debug=False)
    checks, folded = check_incremental(rep)
    assert checks.ok, checks.violations
    assert rep.extra["C_measured"] <= folded
    assert len(checks.by_name("trip")) == 64


def test_incremental_trip_bound_shapes():
    sched = [{"kind": "first", "k": 1},
             {"kind": "search", "epoch_start": 1, "overruns": 0, "k": 2, "known_k": 1},
             {"kind": "search", "epoch_start": 1, "overruns": 1, "k": 2, "known_k": 1},
             {"kind": "follow", "known_k": 4}]
    b = incremental_trip_bounds(sched, n=16, L=1.0, spread=4.0)
    assert b[0] == 126 * 4
    assert b[1] == 2 * (10 * math.sqrt(8) + 126 * 4 * 2 / 4) + 10 * 4
    assert b[2] - b[1] == 2 * 126 * 4 * 2 / 4
    assert b[3] == 10 * 2
