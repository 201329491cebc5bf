import pytest

from fencenav.adversary import build_adversary, color_separation, row_path_bound, verify_lower_bound
from fencenav.scene import BrickScene, validate


@pytest.mark.parametrize("k", [1, 4])
def test_small_adversary(k):
    res = build_adversary(64, k, 8)
    assert res.replay_identical
    assert validate(res.reduced) == []
    assert res.m_touched == len(res.reduced.obstacles)
    b = BrickScene(64, 8)
    assert b.brick_id(0, 0) in res.touched
    checks = verify_lower_bound(res.reduced, res.report, 8)
    assert all(c.ok for c in checks), [c for c in checks if not c.ok]


def test_incremental_strategy_replays():
    res = build_adversary(64, 4, 8, strategy="incremental")
    assert res.replay_identical


def test_unknown_strategy():
    with pytest.raises(ValueError):
        build_adversary(16, 1, 4, strategy="bogus")


def test_row_path_bound_is_a_path_length():
    res = build_adversary(64, 2, 8)
    length, j, detours = row_path_bound(res.reduced, 8)
    assert length >= 64
    assert length == abs(j) * 8 + 64 + detours * 8


@pytest.mark.parametrize("h", [4, 8])
def test_same_color_bricks_are_far_apart(h):
    assert color_separation(h) >= h / 2
