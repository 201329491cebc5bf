import re

import pytest

from fencenav.fences import Fence, Post
from fencenav.scene import BrickScene, ExplicitScene, Obstacle, empty_scene, gen_random
from fencenav.svg import render_svg


def staircase_fence(x0, y0, tau=1.0, steps=(0, 2, 3, 5)):
    return Fence(tuple(Post(x0 + dx, y0 + m * tau, tau) for m, dx in enumerate(steps)), tau)


def test_empty_scene_single_line():
    svg = render_svg(empty_scene(100), [[(0, 0), (100, 0)]])
    assert svg.count("<line") == 1
    assert "<polyline" not in svg
    assert svg.startswith("<?xml")


def test_three_fences_three_shades():
    sc = ExplicitScene(40, [Obstacle(0, 30, -20, 31, 20)])
    fences = [staircase_fence(2, -8), staircase_fence(10, -2), staircase_fence(18, 4)]
    svg = render_svg(sc, [], fences)
    shades = re.findall(r'<g id="fence-\d+" fill="(#[0-9a-f]{6})"', svg)
    assert len(shades) == 3 and len(set(shades)) == 3
    assert svg.count("<rect") >= 1 + 3 * 3 + 1 + 1


def test_deterministic_and_dashed_oracle():
    sc = gen_random(32, 0.2, seed=1)
    traj = [[(0, 0), (5, 0), (5, -3), (32, -3)], [(32, -3), (5, -3), (5, 0), (0, 0)]]
    a = render_svg(sc, traj, [], [(0, 0), (32, 1)])
    b = render_svg(sc, traj, [], [(0, 0), (32, 1)])
    assert a == b
    assert "stroke-dasharray" in a
    assert a.count("<polyline") == 2


def test_lazy_scene_rejected():
    with pytest.raises(ValueError):
        render_svg(BrickScene(16, 4))
