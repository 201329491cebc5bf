import math

import pytest
from hypothesis import given, settings, strategies as st

from fencenav.scene import (BrickScene, EmbeddedOrigin, ExplicitScene, Hit, Obstacle, Point, SceneError,
                            WallHit, emit_scene, empty_scene, gen_bricks, gen_random, parse_scene, validate)

GOLDEN = ["empty100.scene", "col.scene", "random64.scene", "bricks64.scene", "adversary64.scene"]


def test_validate_examples(column):
    assert validate(empty_scene(100)) == []
    assert validate(column) == []
    bad = ExplicitScene(100, [Obstacle(0, 5, 0, 7, 2), Obstacle(1, 6, 1, 8, 3)])
    assert any("overlap" in v for v in validate(bad))


def test_shared_boundary_is_not_overlap():
    sc = ExplicitScene(10, [Obstacle(0, 2, 0, 3, 2), Obstacle(1, 3, 1, 4, 3), Obstacle(2, 2, 2, 3, 4)])
    assert validate(sc) == []


def test_first_hit_empty_reaches_wall():
    res = empty_scene(100).first_hit(Point(0, 0), "+x")
    assert isinstance(res, WallHit) and res.point == Point(100, 0)


def test_first_hit_column_tie_breaks_down(column):
    res = column.first_hit(Point(0, 0), "+x")
    assert isinstance(res, Hit)
    assert res.point == Point(50, 0)
    assert res.nearest_corner == Point(50, -10)
    assert res.corner_distance == pytest.approx(10)


def test_first_hit_limit_and_embedded(column):
    assert column.first_hit(Point(0, 0), "+x", limit=40) is None
    with pytest.raises(EmbeddedOrigin):
        column.first_hit(Point(50.5, 0), "+y")


def test_brick_seam_ray_matches_column_scan():
    b = BrickScene(16, 4)
    res = b.first_hit(Point(0.5, 2), "+x")
    # first column whose seams miss y = 2
    c = 1
    while any(abs(o.y_min - 2) < 1e-12 or abs(o.y_max - 2) < 1e-12
              for o in b.obstacles_in(c + 0.5, c + 0.5, 2, 2)):
        c += 1
    assert isinstance(res, Hit) and res.point == Point(c, 2)
    o = b.obstacle(res.obstacle_id)
    assert o.x_min == c and o.y_min < 2 < o.y_max


def test_brick_layout():
    b = gen_bricks(16, 4)
    s_brick = b.brick(0, 0)
    assert (s_brick.x_min, s_brick.y_min, s_brick.x_max, s_brick.y_max) == (0, -2, 1, 2)
    for c in range(-3, 4):
        assert b.offset(c + 1) - b.offset(c) in (2.0, -2.0)
    with pytest.raises(SceneError):
        BrickScene(16, 3.9)


@given(st.floats(0, 40), st.floats(-40, 40), st.floats(1, 80), st.floats(1, 80))
@settings(max_examples=60, deadline=None)
def test_ray_limit_monotone(x, y, lim1, lim2):
    sc = gen_random(40, 0.2, seed=1)
    p = Point(x, y)
    if sc.obstacle_containing(p) is not None:
        return
    lo, hi = sorted((lim1, lim2))
    for d in ("+x", "-x", "+y", "-y"):
        a, b = sc.first_hit(p, d, lo), sc.first_hit(p, d, hi)
        if a is not None:
            assert b == a


def test_parse_example_and_errors():
    sc = parse_scene("n 100\nobstacle 50 -10 51 10\n")
    assert sc.n == 100 and len(sc.obstacles) == 1
    with pytest.raises(SceneError):
        parse_scene("n 100\nobstacle 50 -10 50.5 10")
    with pytest.raises(SceneError):
        parse_scene("obstacle 50 -10 51 10")
    with pytest.raises(SceneError):
        parse_scene("n 100\nwall 3")


@pytest.mark.parametrize("name", GOLDEN)
def test_golden_round_trip(data_dir, name):
    text = (data_dir / name).read_text()
    assert emit_scene(parse_scene(text)) == text
    assert validate(parse_scene(text)) == []


def test_gen_random_contract():
    a = gen_random(128, 0.2, seed=7)
    b = gen_random(128, 0.2, seed=7)
    assert validate(a) == []
    assert emit_scene(a) == emit_scene(b)
    assert emit_scene(a) != emit_scene(gen_random(128, 0.2, seed=8))
    assert len(gen_random(128, 0.0, seed=7).obstacles) == 0


@given(st.integers(4, 60), st.floats(0.0, 0.4), st.integers(0, 10 ** 6))
@settings(max_examples=30, deadline=None)
def test_gen_random_always_valid(n, density, seed):
    sc = gen_random(n, density, seed=seed)
    assert validate(sc) == []
    assert emit_scene(parse_scene(emit_scene(sc))) == emit_scene(sc)
