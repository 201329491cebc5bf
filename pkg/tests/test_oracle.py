import math

import pytest
from hypothesis import given, settings, strategies as st

from brute import brute_wall_distance, small_scene
from fencenav.fences import Post
from fencenav.oracle import OracleError, fence_tree_oracle, segment_clear, shortest_wall_path
from fencenav.scene import BrickScene, ExplicitScene, Obstacle, Point, empty_scene, gen_random, path_length


def assert_valid_path(scene, path):
    v = path.vertices
    assert v[0] == Point(0, 0)
    assert v[-1][0] == pytest.approx(scene.n)
    assert path_length(v) == pytest.approx(path.length, abs=1e-9)
    for a, b in zip(v, v[1:]):
        assert segment_clear(scene, Point(*a), Point(*b))


def test_empty_scene():
    p = shortest_wall_path(empty_scene(100))
    assert p.length == 100
    assert [tuple(v) for v in p.vertices] == [(0, 0), (100, 0)]


def test_single_column_exact(column):
    p = shortest_wall_path(column)
    assert p.length == pytest.approx(math.sqrt(2600) + 50, abs=1e-6)
    assert Point(50, -10) in [Point(*v) for v in p.vertices]
    assert_valid_path(column, p)


def test_touching_corners_can_be_squeezed():
    # two blocks meeting at a corner on y = 0 leave a zero-width gap at (5, 0)
    sc = ExplicitScene(10, [Obstacle(0, 4, -5, 5, 0), Obstacle(1, 5, 0, 6, 5)])
    assert shortest_wall_path(sc).length == pytest.approx(10)


def test_lazy_scene_needs_region():
    with pytest.raises((OracleError, ValueError, TypeError)):
        shortest_wall_path(BrickScene(16, 4))


@given(st.integers(0, 10 ** 6))
@settings(max_examples=40, deadline=None)
def test_matches_all_pairs_visibility(seed):
    sc = small_scene(seed)
    p = shortest_wall_path(sc)
    assert p.length == pytest.approx(brute_wall_distance(sc), abs=1e-9)
    assert p.length >= sc.n - 1e-12
    assert_valid_path(sc, p)


@pytest.mark.parametrize("seed", range(6))
def test_matches_all_pairs_on_random_scenes(seed):
    sc = gen_random(24, 0.25, y_extent=12, seed=seed)
    p = shortest_wall_path(sc)
    assert p.length == pytest.approx(brute_wall_distance(sc), abs=1e-9)
    assert_valid_path(sc, p)


def test_fence_tree_oracle_wall_on_first_up_child():
    # the root just fits; nothing lies to its right
    sc = ExplicitScene(100, [Obstacle(0, 10, -12, 11, -8)])
    root = Post.at_level(10, -10, 0, 2.0, 0)
    res = fence_tree_oracle(sc, root, 1, 4, 2.0)
    assert res.wall_reached and res.missing == (1, 2)
    assert set(res.tree.posts) == {(1, 1)}


def test_fence_tree_oracle_column():
    sc = ExplicitScene(200, [Obstacle(0, 50, -1000, 51, 1000)])
    tau = 5.0
    res = fence_tree_oracle(sc, Post.at_level(50, -100, 0, tau, 0), 4, 44, tau)
    assert not res.wall_reached and res.tree.complete()
    assert res.tree.post(4, 44).center == Point(50, 100)


def test_fence_tree_oracle_rejects_bad_tau():
    with pytest.raises(ValueError):
        fence_tree_oracle(empty_scene(10), Post(0, 0, 1.0), 1, 2, 0.0)
