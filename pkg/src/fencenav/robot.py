"""Tactile point-robot simulator and its motion primitives.

All motion is axis-parallel. The robot learns about an obstacle only when a
move is blocked by it (the :class:`~fencenav.scene.Hit` it receives names the
nearest corner and its distance).
"""
from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence, Union

from .fences import Post, simplify
from .scene import (DOWN, EPS, LEFT, RIGHT, UP, Direction, Hit, Point, Scene,
                    WallHit)

TAGS = ("edge-up", "edge-down", "transition", "godown", "gobackdown",
        "backtrack", "follow", "search")

StopFn = Callable[[Point, Point], Optional[Point]]


class RobotFault(RuntimeError):
    """Motion that cannot happen in a correct run (a bug signal)."""


class StepBudgetExceeded(RobotFault):
    pass


@dataclass(frozen=True)
class Segment:
    trip: int
    tag: str
    a: Point
    b: Point

    @property
    def length(self) -> float:
        return abs(self.b.x - self.a.x) + abs(self.b.y - self.a.y)


@dataclass(frozen=True)
class TauPathResult:
    post: Optional[Post]
    wall: bool
    points: tuple[Point, ...]
    dx: float
    length: float


# ---------------------------------------------------------------- stop predicates

def _first_in_box(a: Point, b: Point, x0: float, x1: float, y0: float, y1: float) -> Optional[float]:
    tmin, tmax = 0.0, 1.0
    for p, d, lo, hi in ((a.x, b.x - a.x, x0, x1), (a.y, b.y - a.y, y0, y1)):
        if abs(d) <= EPS:
            if p < lo - EPS or p > hi + EPS:
                return None
            continue
        t0 = (lo - EPS - p) / d
        t1 = (hi + EPS - p) / d
        if t0 > t1:
            t0, t1 = t1, t0
        tmin = max(tmin, t0)
        tmax = min(tmax, t1)
        if tmin > tmax:
            return None
    return tmin


def _point_at(a: Point, b: Point, t: float, box: tuple) -> Point:
    x = a.x + t * (b.x - a.x)
    y = a.y + t * (b.y - a.y)
    x0, x1, y0, y1 = box
    return Point(min(max(x, x0), x1), min(max(y, y0), y1))


def stop_at_y_below(y_target: float) -> StopFn:
    """Stops at the first point with ``y <= y_target``."""
    def fn(a: Point, b: Point) -> Optional[Point]:
        if a.y <= y_target + EPS:
            return a
        if b.y <= y_target + EPS:
            return Point(a.x, y_target)
        return None
    return fn


def stop_in_boxes(boxes: Sequence[tuple[float, float, float, float]]) -> StopFn:
    """Stops at the first point inside any closed box ``(x0, x1, y0, y1)``."""
    def fn(a: Point, b: Point) -> Optional[Point]:
        best_t, best_box = None, None
        for box in boxes:
            t = _first_in_box(a, b, *box)
            if t is not None and (best_t is None or t < best_t):
                best_t, best_box = t, box
        if best_t is None:
            return None
        return _point_at(a, b, best_t, best_box)
    return fn


def segment_boxes(points: Sequence[Point]) -> list[tuple[float, float, float, float]]:
    return [(min(p.x, q.x), max(p.x, q.x), min(p.y, q.y), max(p.y, q.y))
            for p, q in zip(points, points[1:])]


def stop_on_polyline(points: Sequence[Point]) -> StopFn:
    return stop_in_boxes(segment_boxes(points))


def stop_first(*stops: StopFn) -> StopFn:
    def fn(a: Point, b: Point) -> Optional[Point]:
        best, best_d = None, math.inf
        for s in stops:
            p = s(a, b)
            if p is not None:
                d = abs(p.x - a.x) + abs(p.y - a.y)
                if d < best_d:
                    best, best_d = p, d
        return best
    return fn


# ---------------------------------------------------------------- robot

class RobotState:
    """Position, odometer, tagged trajectory and tactile knowledge of one robot."""

    BIG = 1e9

    def __init__(self, scene: Scene, position: Point = Point(0.0, 0.0), trip: int = 1,
                 budget: int = 10 ** 8, debug: bool = False):
        self.scene = scene
        self.position = Point(float(position[0]), float(position[1]))
        self.trip = trip
        self.odometer = 0.0
        self.segments: list[Segment] = []
        self.knowledge: list[Hit] = []
        self.touched: set[int] = set()
        self.tag_totals: dict[str, float] = {}
        self.tau_paths: list[TauPathResult] = []
        self.at_wall = position[0] >= scene.n - EPS
        self.budget = budget
        self.moves = 0
        self.debug = debug
        self.tag = "search"

    @contextmanager
    def tagged(self, tag: str):
        old, self.tag = self.tag, tag
        try:
            yield self
        finally:
            self.tag = old

    def _advance(self, p: Point) -> None:
        self.moves += 1
        if self.moves > self.budget:
            raise StepBudgetExceeded(f"step budget {self.budget} exceeded")
        if p == self.position:
            return
        seg = Segment(self.trip, self.tag, self.position, p)
        self.segments.append(seg)
        self.odometer += seg.length
        self.tag_totals[self.tag] = self.tag_totals.get(self.tag, 0.0) + seg.length
        self.position = p
        if p.x >= self.scene.n - EPS:
            self.at_wall = True

    def _record(self, hit: Hit) -> None:
        self.knowledge.append(hit)
        self.touched.add(hit.obstacle_id)

    def trajectory(self) -> list[Point]:
        if not self.segments:
            return [self.position]
        return [self.segments[0].a] + [s.b for s in self.segments]

    def trajectory_since(self, start: int) -> list[Point]:
        """Polyline walked since ``len(segments)`` was ``start``."""
        if start >= len(self.segments):
            return [self.position]
        return [self.segments[start].a] + [s.b for s in self.segments[start:]]

    # -- primitives -------------------------------------------------------

    def straight_move(self, target: Point, stop: Optional[StopFn] = None) -> Union[Hit, WallHit, Point, None]:
        """Move toward ``target``; returns None on arrival, else what ended the move.

        A :class:`Hit` means an obstacle blocked the way, a :class:`WallHit`
        that the wall was reached, a bare :class:`Point` that ``stop`` fired.
        """
        target = Point(float(target[0]), float(target[1]))
        pos = self.position
        dx, dy = target.x - pos.x, target.y - pos.y
        if abs(dx) > EPS and abs(dy) > EPS:
            raise ValueError(f"diagonal move {pos} -> {target}")
        if abs(dx) <= EPS and abs(dy) <= EPS:
            if stop is not None and stop(pos, pos) is not None:
                return pos
            return None
        if abs(dx) > EPS:
            d: Direction = RIGHT if dx > 0 else LEFT
            dist = abs(dx)
            target = Point(target.x, pos.y)
        else:
            d = UP if dy > 0 else DOWN
            dist = abs(dy)
            target = Point(pos.x, target.y)
        res = self.scene.first_hit(pos, d, dist)
        end = target
        if isinstance(res, (Hit, WallHit)):
            end = res.point
        if stop is not None:
            sp = stop(pos, end)
            if sp is not None:
                self._advance(sp)
                return sp
        if res is None:
            self._advance(target)
            return None
        self._advance(end)
        if isinstance(res, Hit):
            self._record(res)
            if abs(end.x - target.x) <= EPS and abs(end.y - target.y) <= EPS:
                return None
            return res
        return res

    def greedy_path(self, primary: Direction, secondary: Direction,
                    stop: Optional[StopFn] = None, max_steps: int = 10 ** 7) -> str:
        """Greedy monotone path: primary until blocked, then secondary to the corner.

        Returns ``"stop"`` or ``"wall"``.
        """
        if primary.dx * secondary.dx + primary.dy * secondary.dy != 0:
            raise ValueError("primary and secondary directions must be orthogonal")
        for _ in range(max_steps):
            p = self.position
            far = Point(p.x + primary.dx * self.BIG, p.y + primary.dy * self.BIG)
            res = self.straight_move(far, stop)
            if isinstance(res, Point):
                return "stop"
            if isinstance(res, WallHit):
                return "wall"
            if res is None:
                raise RobotFault(f"greedy path ran off to infinity from {p}")
            o = self.scene.obstacle(res.obstacle_id)
            q = self.position
            if secondary.dy < 0:
                corner = Point(q.x, o.y_min)
            elif secondary.dy > 0:
                corner = Point(q.x, o.y_max)
            elif secondary.dx < 0:
                corner = Point(o.x_min, q.y)
            else:
                corner = Point(o.x_max, q.y)
            res = self.straight_move(corner, stop)
            if isinstance(res, Point):
                return "stop"
            if isinstance(res, WallHit):
                return "wall"
            if res is not None:
                raise RobotFault(f"greedy secondary move blocked at {self.position}")
        raise StepBudgetExceeded("greedy path step budget exceeded")

    def tau_path(self, tau: float, base: float, level: int) -> TauPathResult:
        """Move right along ``y = base + level*tau``, detouring corners nearer than tau.

        Stops at the first contact whose nearest corner is at least ``tau``
        away (a post centered there) or at the wall.
        """
        y0 = base + level * tau
        if abs(self.position.y - y0) > 1e-6:
            raise RobotFault(f"tau-path must start on y={y0}, robot at {self.position}")
        self.position = Point(self.position.x, y0)
        start = self.position
        start_odo = self.odometer
        pts = [start]
        while True:
            res = self.straight_move(Point(float(self.scene.n), y0))
            pts.append(self.position)
            if isinstance(res, WallHit) or (res is None and self.at_wall):
                return self._tau_done(None, True, pts, start, start_odo)
            if res is None:
                raise RobotFault("tau-path stopped without contact")
            if res.corner_distance >= tau - EPS:
                post = Post.at_level(res.point.x, base, level, tau, res.obstacle_id)
                return self._tau_done(post, False, pts, start, start_odo)
            o = self.scene.obstacle(res.obstacle_id)
            cy = res.nearest_corner.y
            for wp in (Point(o.x_min, cy), Point(o.x_max, cy), Point(o.x_max, y0)):
                r = self.straight_move(wp)
                if isinstance(r, WallHit):
                    pts.append(self.position)
                    return self._tau_done(None, True, pts, start, start_odo)
                if r is not None:
                    raise RobotFault(f"tau-path detour blocked at {self.position}")
                pts.append(self.position)

    def _tau_done(self, post, wall, pts, start, start_odo) -> TauPathResult:
        dx = self.position.x - start.x
        length = self.odometer - start_odo
        tp = TauPathResult(post, wall, tuple(simplify(pts)), dx, length)
        self.tau_paths.append(tp)
        if self.debug and post is not None:
            assert length <= dx + 2 * post.tau * dx + 1e-6, "tau-path longer than its length bound"
        return tp

    def follow_path(self, points: Sequence[Point], reverse: bool = False) -> None:
        """Walk a known collision-free polyline starting at the robot's position."""
        pts = list(reversed(points)) if reverse else list(points)
        if not pts:
            return
        first = pts[0]
        if abs(first[0] - self.position.x) > 1e-6 or abs(first[1] - self.position.y) > 1e-6:
            raise RobotFault(f"path starts at {first}, robot at {self.position}")
        for q in pts[1:]:
            res = self.straight_move(q)
            if isinstance(res, WallHit) and abs(q[0] - self.scene.n) <= EPS:
                continue
            if res is not None:
                raise RobotFault(f"followed path blocked at {self.position} toward {q}")


__all__ = [
    "RobotState", "Segment", "TauPathResult", "RobotFault", "StepBudgetExceeded", "TAGS",
    "stop_at_y_below", "stop_in_boxes", "stop_on_polyline", "stop_first", "segment_boxes",
]
