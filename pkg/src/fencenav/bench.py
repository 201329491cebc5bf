"""Benchmark sweeps: per-trip CSV rows, bound checks and a log-log fit of the ratio."""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .bounds import BoundReport, check_bounds
from .oracle import fence_tree_oracle, shortest_wall_path
from .report import RunReport
from .scene import EPS, Scene, empty_scene, gen_random

CSV_HEADER = ("scene_id", "n", "k", "trip", "length", "L", "ratio", "cum_ratio", "groups", "fences")
KINDS = ("empty", "random", "adversary")
# obstacle height caps for random scenes, in units of sqrt(n)
PROFILES = {"default": None, "tall": 16.0}
# folded constant for the cumulative ratio, in units of sqrt(n/k)
CUMULATIVE_CONSTANT = 140.0


@dataclass(frozen=True)
class SceneKey:
    kind: str
    n: int
    density: float = 0.0
    seed: int = 0
    k: int = 0  # adversary scenes depend on k
    profile: str = "default"

    @property
    def scene_id(self) -> str:
        if self.kind == "random":
            tag = "" if self.profile == "default" else f"-{self.profile}"
            return f"random-n{self.n}-d{self.density:g}-s{self.seed}{tag}"
        if self.kind == "adversary":
            return f"adversary-n{self.n}-k{self.k}"
        return f"empty-n{self.n}"

    def sort_key(self) -> tuple:
        return (KINDS.index(self.kind), self.n, list(PROFILES).index(self.profile),
                self.density, self.seed, self.k)


@dataclass
class Grid:
    n: list[int]
    k: list[int]
    seeds: list[int] = field(default_factory=lambda: [0])
    density: list[float] = field(default_factory=lambda: [0.2])
    kinds: list[str] = field(default_factory=lambda: ["random"])
    profiles: list[str] = field(default_factory=lambda: ["default"])
    mode: str = "cumulative"
    h: Optional[float] = None  # brick height for adversary cells (default sqrt(n))

    @classmethod
    def from_dict(cls, d: dict) -> "Grid":
        dens = d.get("density", [0.2])
        dens = [float(x) for x in (dens if isinstance(dens, list) else [dens])]
        g = cls(n=[int(x) for x in d["n"]], k=[int(x) for x in d["k"]],
                seeds=[int(x) for x in d.get("seeds", [0])], density=dens,
                kinds=list(d.get("kinds", ["random"])), profiles=list(d.get("profiles", ["default"])),
                mode=d.get("mode", "cumulative"), h=d.get("h"))
        for kind in g.kinds:
            if kind not in KINDS:
                raise ValueError(f"unknown scene kind {kind!r}")
        for prof in g.profiles:
            if prof not in PROFILES:
                raise ValueError(f"unknown profile {prof!r}")
        if g.mode not in ("cumulative", "incremental"):
            raise ValueError(f"unknown mode {g.mode!r}")
        return g

    @classmethod
    def load(cls, path: str) -> "Grid":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def scene_keys(self) -> list[SceneKey]:
        keys = set()
        for kind in self.kinds:
            for n in self.n:
                if kind == "empty":
                    keys.add(SceneKey("empty", n))
                elif kind == "random":
                    for prof in self.profiles:
                        for dens in self.density:
                            for seed in self.seeds:
                                keys.add(SceneKey("random", n, dens, seed, profile=prof))
                else:
                    for k in self.k:
                        if k <= n:
                            keys.add(SceneKey("adversary", n, k=k))
        return sorted(keys, key=SceneKey.sort_key)

    def ks_for(self, key: SceneKey) -> list[int]:
        if key.kind == "adversary":
            return [key.k]
        return [k for k in sorted(set(self.k)) if k <= key.n]


@dataclass
class CellResult:
    key: SceneKey
    k: int
    report: RunReport
    bounds: Optional[BoundReport] = None
    mismatches: int = 0
    posts_compared: int = 0
    complete_groups: int = 0

    @property
    def constant(self) -> float:
        """Measured ratio in units of sqrt(n/k)."""
        return self.report.rho / math.sqrt(self.report.n / self.k)


@dataclass
class BenchResult:
    cells: list[CellResult]
    slope: Optional[float]
    intercept: Optional[float]
    fit_cells: int

    def rows(self) -> list[tuple]:
        out = []
        for c in self.cells:
            r = c.report
            for t, length in enumerate(r.trip_lengths, 1):
                out.append((c.key.scene_id, r.n, c.k, t, _num(length), _num(r.L),
                            _num(length / r.L), _num(r.cum_ratio(t)), r.groups, r.fences))
        return out

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        w.writerows(self.rows())
        return buf.getvalue()

    def constant_violations(self, constant: float = CUMULATIVE_CONSTANT) -> list[CellResult]:
        return [c for c in self.cells if c.report.mode == "cumulative"
                and c.report.rho > constant * math.sqrt(c.report.n / c.k) * (1 + 1e-9)]

    def summary(self) -> dict:
        bound_viol = sum(len(c.bounds.violations) for c in self.cells if c.bounds is not None)
        return {
            "cells": len(self.cells),
            "fit_cells": self.fit_cells,
            "slope": self.slope,
            "intercept": self.intercept,
            "max_constant": max((c.constant for c in self.cells), default=None),
            "constant_violations": len(self.constant_violations()),
            "bound_violations": bound_viol,
            "tree_mismatches": sum(c.mismatches for c in self.cells),
            "posts_compared": sum(c.posts_compared for c in self.cells),
            "complete_groups": sum(c.complete_groups for c in self.cells),
        }


def _num(v: float) -> str:
    return repr(float(v))


def make_scene(key: SceneKey, h: Optional[float] = None) -> Scene:
    if key.kind == "empty":
        return empty_scene(key.n)
    if key.kind == "random":
        factor = PROFILES[key.profile]
        h_max = None if factor is None else factor * math.sqrt(key.n)
        return gen_random(key.n, key.density, seed=key.seed, h_max=h_max)
    from .adversary import build_adversary
    hh = math.sqrt(key.n) if h is None else h
    return build_adversary(key.n, key.k, hh).reduced


def tree_mismatches(scene: Scene, groups: Sequence, partial: bool = False) -> tuple[int, int]:
    """Posts that differ from the geometric fence tree with the same root.

    Completed groups must match post for post. With ``partial``, groups that
    reached the wall are compared too, on the posts the search found.
    Returns ``(mismatches, posts_compared)``; a missing or extra post counts once.
    """
    bad = compared = 0
    for g in groups:
        if g.halted_at_wall and not partial:
            continue
        t = g.tree
        ref = fence_tree_oracle(scene, t.root, t.k, t.M, t.tau, base=t.base, stop_at_wall=False)
        keys = set(t.posts) if g.halted_at_wall else set(t.posts) | set(ref.tree.posts)
        compared += len(keys)
        for key in keys:
            a, b = t.posts.get(key), ref.tree.posts.get(key)
            if a is None or b is None or abs(a.x - b.x) > EPS or abs(a.y - b.y) > EPS:
                bad += 1
    return bad, compared


def run_cell(key: SceneKey, ks: Sequence[int], mode: str = "cumulative", h: Optional[float] = None,
             check: bool = True, debug: bool = True) -> list[CellResult]:
    """Run every k on one scene; the oracle length is computed once for the scene."""
    from .navigate import run_cumulative, run_incremental
    scene = make_scene(key, h)
    L = shortest_wall_path(scene).length
    out = []
    for k in ks:
        if mode == "cumulative":
            rep = run_cumulative(scene, k, L, debug=debug, scene_id=key.scene_id)
        else:
            rep = run_incremental(scene, k, L, debug=debug, scene_id=key.scene_id)
        cell = CellResult(key, k, rep)
        if check and mode == "cumulative":
            groups = rep.extra["search"].groups
            cell.bounds = check_bounds(groups, n=scene.n)
            cell.mismatches, cell.posts_compared = tree_mismatches(scene, groups, partial=True)
            cell.complete_groups = sum(not g.halted_at_wall for g in groups)
        rep.extra.clear()  # keep results small and picklable
        out.append(cell)
    return out


def fit_loglog(cells: Sequence[CellResult]) -> tuple[Optional[float], Optional[float]]:
    """Least-squares slope and intercept of log(rho) against log(n/k)."""
    pts = [(math.log(c.report.n / c.k), math.log(c.report.rho)) for c in cells
           if c.report.rho and c.report.rho > 0]
    if len(pts) < 2:
        return None, None
    mx = sum(p[0] for p in pts) / len(pts)
    my = sum(p[1] for p in pts) / len(pts)
    sxx = sum((p[0] - mx) ** 2 for p in pts)
    if sxx == 0:
        return None, None
    slope = sum((p[0] - mx) * (p[1] - my) for p in pts) / sxx
    return slope, my - slope * mx


def _cell_job(args):
    return run_cell(*args)


def bench(grid: Grid, workers: int = 1, check: bool = True, debug: bool = True) -> BenchResult:
    """Run the grid; results are merged in scene-key order so output is worker-independent."""
    jobs = [(key, grid.ks_for(key), grid.mode, grid.h, check, debug) for key in grid.scene_keys()]
    jobs = [j for j in jobs if j[1]]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_cell_job, jobs))
    else:
        parts = [_cell_job(j) for j in jobs]
    cells = [c for part in parts for c in part]
    cells.sort(key=lambda c: (c.key.sort_key(), c.k))
    fit = [c for c in cells if c.key.kind == "random"]
    slope, intercept = fit_loglog(fit)
    return BenchResult(cells, slope, intercept, len(fit))
