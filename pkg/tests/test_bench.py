import math

import pytest

from fencenav.bench import CSV_HEADER, Grid, SceneKey, bench, fit_loglog, make_scene


@pytest.fixture(scope="module")
def small_result():
    g = Grid.from_dict({"n": [32, 64], "k": [1, 4], "seeds": [0, 1], "density": [0.2],
                        "kinds": ["empty", "random", "adversary"], "profiles": ["default", "tall"]})
    return g, bench(g)


def test_csv_header_and_rows(small_result):
    g, res = small_result
    lines = res.csv_text().splitlines()
    assert lines[0] == "scene_id,n,k,trip,length,L,ratio,cum_ratio,groups,fences"
    assert tuple(lines[0].split(",")) == CSV_HEADER
    n_rows = sum(len(c.report.trip_lengths) for c in res.cells)
    assert len(lines) == 1 + n_rows


def test_empty_rows_have_unit_ratio(small_result):
    _, res = small_result
    rows = [r for r in res.rows() if r[0].startswith("empty")]
    assert rows and all(float(r[6]) == 1.0 and float(r[7]) == 1.0 for r in rows)


def test_adversary_rows_meet_lower_bound(small_result):
    _, res = small_result
    adv = [c for c in res.cells if c.key.kind == "adversary"]
    assert adv
    for c in adv:
        assert c.report.rho >= math.sqrt(c.report.n / c.k) / 12


def test_checks_clean(small_result):
    _, res = small_result
    s = res.summary()
    assert s["bound_violations"] == 0 and s["tree_mismatches"] == 0
    assert s["constant_violations"] == 0


def test_worker_count_does_not_change_output(small_result):
    g, res = small_result
    assert bench(g, workers=2).csv_text() == res.csv_text()


def test_scene_keys_are_ordered():
    g = Grid.from_dict({"n": [64, 32], "k": [4, 1], "seeds": [1, 0], "kinds": ["random", "empty"]})
    keys = g.scene_keys()
    assert keys == sorted(keys, key=SceneKey.sort_key)
    assert keys[0].kind == "empty"


def test_fit_loglog_recovers_slope():
    class R:
        def __init__(self, n, k, rho):
            self.n, self.rho = n, rho

    class C:
        def __init__(self, n, k, rho):
            self.report, self.k = R(n, k, rho), k

    cells = [C(n, k, 3 * (n / k) ** 0.5) for n in (64, 256, 1024) for k in (1, 4, 16)]
    slope, intercept = fit_loglog(cells)
    assert slope == pytest.approx(0.5)
    assert intercept == pytest.approx(math.log(3))


def test_bad_grid():
    with pytest.raises(ValueError):
        Grid.from_dict({"n": [8], "k": [1], "kinds": ["nope"]})
    with pytest.raises(ValueError):
        Grid.from_dict({"n": [8], "k": [1], "mode": "fast"})


def test_make_scene_profiles():
    d = make_scene(SceneKey("random", 64, 0.2, 0))
    t = make_scene(SceneKey("random", 64, 0.2, 0, profile="tall"))
    assert max(o.height for o in t.obstacles) > max(o.height for o in d.obstacles)
