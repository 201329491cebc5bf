"""Full-knowledge reference computations.

Nothing here touches robot state: the shortest s-to-wall path is found on the
visibility graph of obstacle corners, and fence-trees are rebuilt directly
from scene geometry.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ._sweep import build_and_solve

from .fences import Edge, Fence, FenceTree, Post, simplify
from .scene import (EPS, RIGHT, EmbeddedOrigin, ExplicitScene, Hit, Point,
                    Scene, WallHit, path_length)


@dataclass(frozen=True)
class OraclePath:
    vertices: tuple[Point, ...]
    length: float


class OracleError(RuntimeError):
    pass


# ---------------------------------------------------------------- shortest path

def _blocked(p: Point, qs: np.ndarray, rects: np.ndarray) -> np.ndarray:
    """For segments p->q (rows of ``qs``), whether any open rectangle is crossed."""
    if len(rects) == 0 or len(qs) == 0:
        return np.zeros(len(qs), dtype=bool)
    dx = (qs[:, 0] - p.x)[:, None]
    dy = (qs[:, 1] - p.y)[:, None]
    x0, y0, x1, y1 = (rects[:, c][None, :] for c in range(4))
    with np.errstate(divide="ignore", invalid="ignore"):
        tx0 = (x0 - p.x) / dx
        tx1 = (x1 - p.x) / dx
        ty0 = (y0 - p.y) / dy
        ty1 = (y1 - p.y) / dy
    zx = np.abs(dx) <= EPS
    zy = np.abs(dy) <= EPS
    inx = (p.x > x0 + EPS) & (p.x < x1 - EPS)
    iny = (p.y > y0 + EPS) & (p.y < y1 - EPS)
    lo_x = np.where(zx, np.where(inx, -np.inf, np.inf), np.minimum(tx0, tx1))
    hi_x = np.where(zx, np.where(inx, np.inf, -np.inf), np.maximum(tx0, tx1))
    lo_y = np.where(zy, np.where(iny, -np.inf, np.inf), np.minimum(ty0, ty1))
    hi_y = np.where(zy, np.where(iny, np.inf, -np.inf), np.maximum(ty0, ty1))
    lo = np.maximum(np.maximum(lo_x, lo_y), 0.0)
    hi = np.minimum(np.minimum(hi_x, hi_y), 1.0)
    seg_len = np.hypot(dx, dy)
    with np.errstate(invalid="ignore"):
        inside = (hi - lo) * seg_len > 1e-7
    return (inside & (seg_len > 0)).any(axis=1)


def _greedy_bound(scene: Scene, direction_y: int) -> float:
    """Length of a greedy right-then-vertical monotone path to the wall."""
    p = Point(0.0, 0.0)
    total = 0.0
    for _ in range(100000):
        res = scene.first_hit(p, RIGHT)
        if isinstance(res, WallHit):
            return total + res.point.x - p.x
        assert isinstance(res, Hit)
        o = scene.obstacle(res.obstacle_id)
        total += res.point.x - p.x
        y = o.y_max if direction_y > 0 else o.y_min
        total += abs(y - res.point.y)
        p = Point(res.point.x, y)
    return math.inf


def shortest_wall_path(scene: Scene, region: Optional[tuple[float, float, float, float]] = None,
                       upper_bound: Optional[float] = None) -> OraclePath:
    """Globally shortest Euclidean path from s = (0, 0) to the line ``x = n``.

    A* (heuristic ``n - x``) over the visibility graph of s and the obstacle
    corners, plus a horizontal final leg to the wall. Obstacles
    that cannot touch any path shorter than a known feasible length are
    pruned first, which leaves the optimum unchanged. Lazy scenes need a
    bounding ``region``.
    """
    s = Point(0.0, 0.0)
    if scene.obstacle_containing(s) is not None:
        raise EmbeddedOrigin("s lies inside an obstacle")
    n = scene.n
    ub = min(_greedy_bound(scene, -1), _greedy_bound(scene, +1))
    if upper_bound is not None:
        ub = min(ub, upper_bound)
    slack = max(ub - n, 0.0) + 1e-6
    ylim = math.sqrt(slack * slack + 2 * slack * n)
    box = (-slack / 2 - 1, n, -ylim - 1, ylim + 1)
    if region is not None:
        box = (max(box[0], region[0]), min(box[1], region[1]),
               max(box[2], region[2]), min(box[3], region[3]))
    elif scene.lazy:
        raise OracleError("lazy scenes need an explicit region")
    obs = []
    for o in scene.obstacles_in(*box):
        # a path of length <= ub satisfies y^2 <= slack^2 + 2*slack*x
        reach = math.sqrt(slack * slack + 2 * slack * max(o.x_max, 0.0)) + 1e-6
        if o.y_min <= reach and o.y_max >= -reach and o.x_min <= n:
            obs.append(o)
    rects = np.array([(o.x_min, o.y_min, o.x_max, o.y_max) for o in obs], dtype=float).reshape(-1, 4)
    length, verts = build_and_solve(n, rects, ub + 1e-6, int(math.floor(box[0])))
    if not math.isfinite(length):
        raise OracleError("no path to the wall found")
    return OraclePath(tuple(Point(x, y) for x, y in verts), length)


def _near_rects(p: Point, qs: np.ndarray, rects: np.ndarray) -> np.ndarray:
    if len(rects) == 0:
        return rects
    x0 = min(p.x, qs[:, 0].min())
    x1 = max(p.x, qs[:, 0].max())
    y0 = min(p.y, qs[:, 1].min())
    y1 = max(p.y, qs[:, 1].max())
    m = (rects[:, 2] > x0) & (rects[:, 0] < x1) & (rects[:, 3] > y0) & (rects[:, 1] < y1)
    return rects[m]


def segment_clear(scene: Scene, a: Point, b: Point) -> bool:
    """Whether the segment a-b avoids every obstacle interior."""
    box = (min(a.x, b.x), max(a.x, b.x), min(a.y, b.y), max(a.y, b.y))
    obs = list(scene.obstacles_in(*box))
    rects = np.array([(o.x_min, o.y_min, o.x_max, o.y_max) for o in obs], dtype=float).reshape(-1, 4)
    return not bool(_blocked(a, np.array([b], dtype=float), rects)[0])


# ---------------------------------------------------------------- fence-tree oracle

class PostDoesNotFit(OracleError):
    pass


def _trace_tau(scene: Scene, start: Point, tau: float) -> tuple[Optional[Hit], list[Point], float]:
    """Geometric tau-path from ``start``; returns the stopping contact (None at the wall)."""
    y0 = start.y
    p = start
    pts = [p]
    length = 0.0
    while True:
        res = scene.first_hit(p, RIGHT)
        if isinstance(res, WallHit):
            pts.append(res.point)
            return None, pts, length + res.point.x - p.x
        assert isinstance(res, Hit)
        length += res.point.x - p.x
        pts.append(res.point)
        if res.corner_distance >= tau - EPS:
            return res, pts, length
        o = scene.obstacle(res.obstacle_id)
        cy = res.nearest_corner.y
        length += 2 * abs(cy - y0) + (o.x_max - o.x_min)
        pts += [Point(o.x_min, cy), Point(o.x_max, cy), Point(o.x_max, y0)]
        p = Point(o.x_max, y0)


def _child(scene: Scene, tree: FenceTree, parent_idx, child_idx, kind: str) -> Optional[Post]:
    par = tree.posts[parent_idx]
    step = 1 if kind == "up" else -1
    level = par.level + step
    y = tree.base + level * tree.tau
    start = Point(par.x, y)
    hit, pts, tlen = _trace_tau(scene, start, tree.tau)
    if hit is None:
        return None
    post = Post.at_level(hit.point.x, tree.base, level, tree.tau, hit.obstacle_id)
    if not post.fits(scene):
        raise PostDoesNotFit(f"post at {post.center} does not fit obstacle {post.obstacle_id}")
    geometry = simplify([par.center] + pts)
    edge = Edge(child_idx, parent_idx, kind, tuple(geometry), tree.tau + tlen,
                hit.point.x - par.x, tlen)
    tree.add(child_idx, post, edge)
    return post


@dataclass
class OracleTree:
    tree: FenceTree
    wall_reached: bool
    missing: Optional[tuple[int, int]] = None


def fence_tree_oracle(scene: Scene, root: Post, k: int, M: int, tau: float,
                      base: Optional[float] = None, stop_at_wall: bool = True) -> OracleTree:
    """Build the k x M fence-tree rooted at ``root`` from geometry alone.

    Posts are produced row by row in ``m``. A tau-path that hits the wall
    leaves its post missing; with ``stop_at_wall`` construction ends there,
    otherwise it goes on and every descendant of a missing post is missing.
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    base = root.y if base is None else base
    level = 0 if root.level is None else root.level
    root = Post.at_level(root.x, base, level, tau, root.obstacle_id)
    tree = FenceTree(k, M, tau, base)
    tree.add((1, 1), root, None)
    missing: set = set()
    first_missing = None
    for m in range(1, M + 1):
        for i in range(1, k + 1):
            if (i, m) == (1, 1):
                continue
            if i == 1:
                want = ((1, m - 1), "up")
            elif m == 1:
                want = ((i - 1, 1), "down")
            elif (i - 1, m) in missing or (i, m - 1) in missing:
                missing.add((i, m))
                continue
            else:
                upper = tree.posts[(i - 1, m)]
                if upper.x > tree.posts[(i, m - 1)].x + EPS:
                    want = ((i - 1, m), "down")
                else:
                    want = ((i, m - 1), "up")
            if want[0] in missing or _child(scene, tree, want[0], (i, m), want[1]) is None:
                missing.add((i, m))
                if first_missing is None:
                    first_missing = (i, m)
                    if stop_at_wall:
                        return OracleTree(tree, True, first_missing)
    return OracleTree(tree, bool(missing), first_missing)


# ---------------------------------------------------------------- crossing cost

def _clip_vertical(a: Point, b: Point, x0: float, x1: float, y0: float, y1: float) -> float:
    """Vertical extent of segment a-b inside the closed box."""
    dx, dy = b.x - a.x, b.y - a.y
    tmin, tmax = 0.0, 1.0
    for p, d, lo, hi in ((a.x, dx, x0, x1), (a.y, dy, y0, y1)):
        if abs(d) <= EPS:
            if p < lo - EPS or p > hi + EPS:
                return 0.0
            continue
        t0, t1 = (lo - p) / d, (hi - p) / d
        if t0 > t1:
            t0, t1 = t1, t0
        tmin, tmax = max(tmin, t0), min(tmax, t1)
    if tmax <= tmin:
        return 0.0
    return abs(dy) * (tmax - tmin)


def _side(fence: Fence, p: Point) -> str:
    posts = fence.posts
    for m in range(1, len(posts)):
        a, b = posts[m - 1], posts[m]
        if a.y - EPS <= p.y <= b.y + EPS:
            if p.x <= a.x + EPS:
                return "left"
            if p.x >= b.x - EPS:
                return "right"
            return "band"
    return "left" if p.x <= posts[0].x else "right"


def _strip_runs(points: Sequence[Point], ylo: float, yhi: float) -> list[list[Point]]:
    """Maximal pieces of a polyline that stay within ``ylo <= y <= yhi``."""
    runs: list[list[Point]] = []
    cur: list[Point] = []
    for a, b in zip(points, points[1:]):
        dy = b.y - a.y
        if abs(dy) <= EPS:
            t0, t1 = (0.0, 1.0) if ylo - EPS <= a.y <= yhi + EPS else (1.0, 0.0)
        else:
            t0, t1 = sorted(((ylo - a.y) / dy, (yhi - a.y) / dy))
            t0, t1 = max(t0, 0.0), min(t1, 1.0)
        if t1 < t0:
            if cur:
                runs.append(cur)
                cur = []
            continue
        pa = Point(a.x + t0 * (b.x - a.x), a.y + t0 * dy)
        pb = Point(a.x + t1 * (b.x - a.x), a.y + t1 * dy)
        if cur and (t0 > EPS or math.hypot(cur[-1].x - pa.x, cur[-1].y - pa.y) > 1e-7):
            runs.append(cur)
            cur = []
        if not cur:
            cur = [pa]
        cur.append(pb)
        if t1 < 1 - EPS:
            runs.append(cur)
            cur = []
    if cur:
        runs.append(cur)
    return runs


def crossing_cost(path: Sequence[Point], fence: Fence) -> Optional[float]:
    """Least vertical travel inside the fence's non-empty bands over crossing sub-paths.

    A crossing sub-path stays between the lowest and highest post heights and
    joins the two sides of the fence. Returns None if the path never crosses.
    """
    pts = [Point(*p) for p in path]
    ylo, yhi = fence.posts[0].y, fence.posts[-1].y
    bands = fence.nonempty_bands()
    best: Optional[float] = None
    for run in _strip_runs(pts, ylo, yhi):
        sides = {_side(fence, run[0]), _side(fence, run[-1])}
        if sides != {"left", "right"}:
            continue
        cost = 0.0
        for a, b in zip(run, run[1:]):
            for band in bands:
                cost += _clip_vertical(a, b, band.x0, band.x1, band.y0, band.y1)
        best = cost if best is None else min(best, cost)
    return best


__all__ = ["OraclePath", "OracleError", "OracleTree", "PostDoesNotFit",
           "shortest_wall_path", "fence_tree_oracle", "crossing_cost", "segment_clear",
           "path_length"]
