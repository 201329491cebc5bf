"""Posts, fences, bands and fence-trees.

Post heights within one tree are stored as an integer ``level`` above a
shared base, ``y = base + level * tau``, so consecutive fence posts differ by
exactly one rung regardless of floating point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .scene import EPS, Point, Scene, path_length


@dataclass(frozen=True)
class Post:
    x: float
    y: float
    tau: float
    obstacle_id: int = -1
    level: Optional[int] = None

    @classmethod
    def at_level(cls, x: float, base: float, level: int, tau: float, obstacle_id: int) -> "Post":
        return cls(x, base + level * tau, tau, obstacle_id, level)

    @property
    def center(self) -> Point:
        return Point(self.x, self.y)

    @property
    def top(self) -> Point:
        return Point(self.x, self.y + self.tau)

    @property
    def bottom(self) -> Point:
        return Point(self.x, self.y - self.tau)

    def key(self) -> tuple:
        return (self.x, self.level, self.obstacle_id)

    def fits(self, scene: Scene) -> bool:
        """True when the post lies on the left edge of its obstacle."""
        o = scene.obstacle(self.obstacle_id)
        return (abs(o.x_min - self.x) <= EPS
                and o.y_min <= self.y - self.tau + EPS
                and self.y + self.tau <= o.y_max + EPS)

    def contains(self, p: Point) -> bool:
        return abs(p.x - self.x) <= EPS and self.y - self.tau - EPS <= p.y <= self.y + self.tau + EPS


@dataclass(frozen=True)
class Band:
    x0: float
    y0: float
    x1: float
    y1: float

    @property
    def empty(self) -> bool:
        return self.x1 - self.x0 <= EPS

    def overlaps(self, other: "Band") -> bool:
        return (min(self.x1, other.x1) - max(self.x0, other.x0) > EPS
                and min(self.y1, other.y1) - max(self.y0, other.y0) > EPS)

    def contains(self, p: Point) -> bool:
        return (self.x0 - EPS <= p.x <= self.x1 + EPS
                and self.y0 - EPS <= p.y <= self.y1 + EPS)


@dataclass(frozen=True)
class Fence:
    posts: tuple[Post, ...]
    tau: float

    def bands(self) -> list[Band]:
        return [Band(a.x, a.y, b.x, b.y) for a, b in zip(self.posts, self.posts[1:])]

    def nonempty_bands(self) -> list[Band]:
        return [b for b in self.bands() if not b.empty]


def check_fence(f: Fence, scene: Optional[Scene] = None) -> list[str]:
    """Violations of nondecreasing x, one-rung y steps, and (given a scene) post fit."""
    out = []
    for m, (a, b) in enumerate(zip(f.posts, f.posts[1:]), 1):
        if b.x < a.x - EPS:
            out.append(f"x decreases between posts {m} and {m + 1}")
        if a.level is not None and b.level is not None:
            if b.level != a.level + 1:
                out.append(f"level step {b.level - a.level} between posts {m} and {m + 1}")
        elif abs((b.y - a.y) - f.tau) > EPS:
            out.append(f"y step {b.y - a.y} != tau between posts {m} and {m + 1}")
    if scene is not None:
        for m, p in enumerate(f.posts, 1):
            if not p.fits(scene):
                out.append(f"post {m} does not fit the left edge of obstacle {p.obstacle_id}")
    return out


def fences_disjoint(fences: Sequence[Fence]) -> bool:
    bands = [f.nonempty_bands() for f in fences]
    for a in range(len(bands)):
        for b in range(a + 1, len(bands)):
            for ba in bands[a]:
                for bb in bands[b]:
                    if ba.overlaps(bb):
                        return False
    return True


@dataclass(frozen=True)
class Edge:
    child: tuple[int, int]
    parent: tuple[int, int]
    kind: str  # "up" or "down"
    points: tuple[Point, ...]
    length: float
    tau_dx: float = 0.0
    tau_len: float = 0.0


class TreeError(ValueError):
    pass


@dataclass
class FenceTree:
    k: int
    M: int
    tau: float
    base: float
    posts: dict = field(default_factory=dict)
    edges: dict = field(default_factory=dict)

    @property
    def root(self) -> Post:
        return self.posts[(1, 1)]

    def complete(self) -> bool:
        return len(self.posts) == self.k * self.M

    def add(self, idx: tuple[int, int], post: Post, edge: Optional[Edge]) -> None:
        self.posts[idx] = post
        if edge is not None:
            self.edges[idx] = edge

    def post(self, i: int, m: int) -> Post:
        try:
            return self.posts[(i, m)]
        except KeyError:
            raise TreeError(f"no post P_{i}^{m}") from None

    def ancestry(self, idx: tuple[int, int]) -> list[Edge]:
        """Edges on the path from the root down to ``idx``, root side first."""
        if idx not in self.posts:
            raise TreeError(f"no post {idx}")
        out = []
        while idx != (1, 1):
            e = self.edges[idx]
            out.append(e)
            idx = e.parent
        out.reverse()
        return out

    def path_from_root(self, idx: tuple[int, int]) -> list[Point]:
        pts = [self.root.center]
        for e in self.ancestry(idx):
            pts.extend(e.points[1:])
        return pts

    def fences(self) -> list[Fence]:
        return fences_of(self)

    def total_edge_length(self) -> float:
        return sum(e.length for e in self.edges.values())

    def delta_x(self) -> float:
        return self.post(self.k, self.M).x - self.root.x


def fences_of(tree: FenceTree) -> list[Fence]:
    if not tree.complete():
        raise TreeError("fence-tree is incomplete")
    return [Fence(tuple(tree.posts[(i, m)] for m in range(1, tree.M + 1)), tree.tau)
            for i in range(1, tree.k + 1)]


def tree_path(tree: FenceTree, src: tuple[int, int], dst: tuple[int, int]) -> tuple[list[Point], float]:
    """Polyline and length of the unique tree path between two posts."""
    a = tree.ancestry(src)
    b = tree.ancestry(dst)
    common = 0
    while common < min(len(a), len(b)) and a[common] is b[common]:
        common += 1
    pts = [tree.posts[src].center]
    for e in reversed(a[common:]):
        pts.extend(reversed(e.points[:-1]))
    for e in b[common:]:
        pts.extend(e.points[1:])
    return pts, sum(e.length for e in a[common:]) + sum(e.length for e in b[common:])


def simplify(points: Iterable[Point]) -> list[Point]:
    """Drop repeated vertices and merge collinear axis-parallel runs."""
    out: list[Point] = []
    for p in points:
        p = Point(float(p[0]), float(p[1]))
        if out and abs(out[-1].x - p.x) <= EPS and abs(out[-1].y - p.y) <= EPS:
            continue
        if len(out) >= 2:
            a, b = out[-2], out[-1]
            same_x = abs(a.x - b.x) <= EPS and abs(b.x - p.x) <= EPS
            same_y = abs(a.y - b.y) <= EPS and abs(b.y - p.y) <= EPS
            if (same_x and (b.y - a.y) * (p.y - b.y) > 0) or (same_y and (b.x - a.x) * (p.x - b.x) > 0):
                out[-1] = p
                continue
        out.append(p)
    return out


__all__ = [
    "Post", "Band", "Fence", "Edge", "FenceTree", "TreeError",
    "check_fence", "fences_disjoint", "fences_of", "tree_path", "simplify", "path_length",
]
