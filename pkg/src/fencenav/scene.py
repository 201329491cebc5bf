"""Scene model: rectangular obstacles, ray queries, scene files and generators.

Obstacle interiors are open; boundaries are free to move along, so a point
robot can slide between touching rectangles. All coordinate comparisons use
the absolute tolerance ``EPS``.
"""
from __future__ import annotations

import bisect
import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence, Union

EPS = 1e-9


class Point(NamedTuple):
    x: float
    y: float


class Direction(NamedTuple):
    name: str
    dx: int
    dy: int


RIGHT = Direction("+x", 1, 0)
LEFT = Direction("-x", -1, 0)
UP = Direction("+y", 0, 1)
DOWN = Direction("-y", 0, -1)
DIRECTIONS = {d.name: d for d in (RIGHT, LEFT, UP, DOWN)}


class SceneError(ValueError):
    """Raised for malformed scene text or illegal generator parameters."""


class EmbeddedOrigin(ValueError):
    """A query started strictly inside an obstacle."""


@dataclass(frozen=True)
class Obstacle:
    id: int
    x_min: float
    y_min: float
    x_max: float
    y_max: float

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    def corners(self) -> tuple[Point, Point, Point, Point]:
        return (
            Point(self.x_min, self.y_min),
            Point(self.x_max, self.y_min),
            Point(self.x_min, self.y_max),
            Point(self.x_max, self.y_max),
        )

    def contains_interior(self, p: Point) -> bool:
        return (self.x_min + EPS < p.x < self.x_max - EPS
                and self.y_min + EPS < p.y < self.y_max - EPS)

    def on_boundary(self, p: Point) -> bool:
        inside_x = self.x_min - EPS <= p.x <= self.x_max + EPS
        inside_y = self.y_min - EPS <= p.y <= self.y_max + EPS
        if not (inside_x and inside_y):
            return False
        return (abs(p.x - self.x_min) <= EPS or abs(p.x - self.x_max) <= EPS
                or abs(p.y - self.y_min) <= EPS or abs(p.y - self.y_max) <= EPS)

    def nearest_corner(self, p: Point) -> tuple[Point, float]:
        """Nearest corner to ``p``; equidistant corners prefer lower y, then lower x."""
        best: Optional[Point] = None
        best_d = math.inf
        for c in self.corners():
            d = math.hypot(c.x - p.x, c.y - p.y)
            if best is None or d < best_d - EPS:
                best, best_d = c, d
            elif abs(d - best_d) <= EPS and (c.y, c.x) < (best.y, best.x):
                best, best_d = c, min(d, best_d)
        assert best is not None
        return best, best_d


@dataclass(frozen=True)
class Hit:
    obstacle_id: int
    point: Point
    nearest_corner: Point
    corner_distance: float


@dataclass(frozen=True)
class WallHit:
    point: Point


RayResult = Union[Hit, WallHit, None]


def _make_hit(ob: Obstacle, p: Point) -> Hit:
    corner, dist = ob.nearest_corner(p)
    return Hit(ob.id, p, corner, dist)


def _is_int(v: float) -> bool:
    return abs(v - round(v)) <= EPS


class Scene:
    """Base class: wall distance ``n`` plus obstacle queries."""

    n: int
    kind: str
    params: dict
    comments: list[str]

    lazy = False

    def obstacle(self, oid: int) -> Obstacle:
        raise NotImplementedError

    def obstacles_in(self, x_min: float, x_max: float,
                     y_min: float, y_max: float) -> Iterator[Obstacle]:
        """Obstacles whose closed rectangle meets the closed query box."""
        raise NotImplementedError

    def obstacle_containing(self, p: Point) -> Optional[Obstacle]:
        """Obstacle whose open interior contains ``p``, if any."""
        raise NotImplementedError

    def _ray(self, origin: Point, d: Direction, limit: float) -> RayResult:
        raise NotImplementedError

    def first_hit(self, origin: Point, direction: Union[Direction, str],
                  limit: float = math.inf) -> RayResult:
        """First obstacle strictly entered by an axis-parallel ray.

        Returns a :class:`Hit`, a :class:`WallHit` (``+x`` only, when the line
        ``x = n`` comes first) or ``None`` when nothing happens within ``limit``.
        """
        d = DIRECTIONS[direction] if isinstance(direction, str) else direction
        origin = Point(float(origin[0]), float(origin[1]))
        emb = self.obstacle_containing(origin)
        if emb is not None:
            raise EmbeddedOrigin(f"embedded origin {origin} in obstacle {emb.id}")
        if d is RIGHT and origin.x >= self.n - EPS:
            return WallHit(Point(float(self.n), origin.y))
        res = self._ray(origin, d, limit)
        if d is RIGHT and (res is None or res.point.x >= self.n - EPS):
            if self.n - origin.x <= limit + EPS:
                return WallHit(Point(float(self.n), origin.y))
            return None
        if res is not None:
            dist = abs(res.point.x - origin.x) + abs(res.point.y - origin.y)
            if dist > limit + EPS:
                return None
        return res


class ExplicitScene(Scene):
    """A finite set of obstacles with column and row-bucket indexes."""

    ROW_BUCKET = 4.0

    def __init__(self, n: int, obstacles: Iterable[Obstacle] = (),
                 kind: str = "explicit", params: Optional[dict] = None,
                 comments: Optional[list[str]] = None):
        self.n = int(n)
        self.obstacles: tuple[Obstacle, ...] = tuple(obstacles)
        self.kind = kind
        self.params = dict(params or {})
        self.comments = list(comments or [])
        self._by_id = {o.id: o for o in self.obstacles}
        self._build_index()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExplicitScene):
            return NotImplemented
        return self.n == other.n and self.obstacles == other.obstacles

    def __repr__(self) -> str:
        return f"ExplicitScene(n={self.n}, obstacles={len(self.obstacles)})"

    def _build_index(self) -> None:
        cols: dict[int, list[Obstacle]] = {}
        rows: dict[int, list[Obstacle]] = {}
        B = self.ROW_BUCKET
        for o in self.obstacles:
            for c in range(int(math.floor(o.x_min + EPS)), int(math.ceil(o.x_max - EPS))):
                cols.setdefault(c, []).append(o)
            for b in range(int(math.floor(o.y_min / B)), int(math.floor(o.y_max / B)) + 1):
                rows.setdefault(b, []).append(o)
        self._cols = {}
        for c, lst in cols.items():
            lst.sort(key=lambda o: (o.y_min, o.x_min))
            self._cols[c] = (lst, [o.y_min for o in lst], [o.y_max for o in lst])
        self._rows_r = {}
        self._rows_l = {}
        for b, lst in rows.items():
            r = sorted(lst, key=lambda o: o.x_min)
            self._rows_r[b] = (r, [o.x_min for o in r])
            lft = sorted(lst, key=lambda o: -o.x_max)
            self._rows_l[b] = (lft, [-o.x_max for o in lft])

    def obstacle(self, oid: int) -> Obstacle:
        return self._by_id[oid]

    def obstacles_in(self, x_min, x_max, y_min, y_max):
        for o in self.obstacles:
            if (o.x_max >= x_min - EPS and o.x_min <= x_max + EPS
                    and o.y_max >= y_min - EPS and o.y_min <= y_max + EPS):
                yield o

    def obstacle_containing(self, p: Point) -> Optional[Obstacle]:
        entry = self._cols.get(int(math.floor(p.x)))
        if entry is None:
            return None
        lst, ymins, _ = entry
        i = bisect.bisect_right(ymins, p.y) - 1
        while i >= 0:
            o = lst[i]
            if o.contains_interior(p):
                return o
            if o.y_max < p.y - EPS:
                break
            i -= 1
        return None

    def _column_candidates(self, x: float) -> tuple[int, bool]:
        if _is_int(x):
            return int(round(x)), True
        return int(math.floor(x)), False

    def _ray(self, origin, d, limit):
        x0, y0 = origin
        if d.dy != 0:
            c, on_line = self._column_candidates(x0)
            entry = self._cols.get(c)
            if entry is None:
                return None
            lst, ymins, ymaxs = entry
            if d.dy > 0:
                i = bisect.bisect_right(ymaxs, y0 + EPS)
                for o in lst[i:]:
                    if on_line and o.x_min >= x0 - EPS:
                        continue
                    if o.y_min - y0 > limit + EPS:
                        return None
                    return _make_hit(o, Point(x0, max(o.y_min, y0)))
                return None
            i = bisect.bisect_left(ymins, y0 - EPS) - 1
            while i >= 0:
                o = lst[i]
                i -= 1
                if on_line and o.x_min >= x0 - EPS:
                    continue
                if y0 - o.y_max > limit + EPS:
                    return None
                return _make_hit(o, Point(x0, min(o.y_max, y0)))
            return None
        b = int(math.floor(y0 / self.ROW_BUCKET))
        if d.dx > 0:
            entry = self._rows_r.get(b)
            if entry is None:
                return None
            lst, keys = entry
            for o in lst[bisect.bisect_left(keys, x0 - EPS):]:
                if o.x_min - x0 > limit + EPS or o.x_min >= self.n - EPS:
                    return None
                if o.y_min + EPS < y0 < o.y_max - EPS:
                    return _make_hit(o, Point(max(o.x_min, x0), y0))
            return None
        entry = self._rows_l.get(b)
        if entry is None:
            return None
        lst, keys = entry
        for o in lst[bisect.bisect_left(keys, -x0 - EPS):]:
            if x0 - o.x_max > limit + EPS:
                return None
            if o.y_min + EPS < y0 < o.y_max - EPS:
                return _make_hit(o, Point(min(o.x_max, x0), y0))
        return None


class BrickScene(Scene):
    """Lazily generated staggered brick tiling of the whole plane.

    Column ``c`` holds bricks ``[c, c+1] x [off(c) + j*h, off(c) + (j+1)*h]``
    with ``off(c) = -h/2`` for even ``c`` and ``0`` for odd ``c``, so that s
    sits at the middle of the left side of brick ``[0,1] x [-h/2, h/2]``.
    """

    lazy = True
    _JBIAS = 1 << 31
    _CBIAS = 1 << 30

    def __init__(self, n: int, h: float):
        if h < math.sqrt(n) - EPS:
            raise SceneError(f"brick height {h} below sqrt(n) = {math.sqrt(n):.4f}")
        self.n = int(n)
        self.h = float(h)
        self.kind = "bricks"
        self.params = {"n": self.n, "h": self.h}
        self.comments = []
        self.queried: set[int] = set()

    def __repr__(self) -> str:
        return f"BrickScene(n={self.n}, h={self.h})"

    def offset(self, c: int) -> float:
        return -self.h / 2 if c % 2 == 0 else 0.0

    def brick_id(self, c: int, j: int) -> int:
        return ((c + self._CBIAS) << 32) | (j + self._JBIAS)

    def brick_index(self, oid: int) -> tuple[int, int]:
        return (oid >> 32) - self._CBIAS, (oid & 0xFFFFFFFF) - self._JBIAS

    def brick(self, c: int, j: int) -> Obstacle:
        y0 = self.offset(c) + j * self.h
        return Obstacle(self.brick_id(c, j), float(c), y0, float(c + 1), y0 + self.h)

    def color(self, oid: int) -> int:
        """One of four colors; same-colored bricks are at least h/2 apart in free space."""
        c, j = self.brick_index(oid)
        return (c + 2 * j) % 4

    def obstacle(self, oid: int) -> Obstacle:
        return self.brick(*self.brick_index(oid))

    def _row(self, c: int, y: float) -> float:
        return (y - self.offset(c)) / self.h

    def _is_seam(self, c: int, y: float) -> bool:
        r = self._row(c, y)
        return abs(r - round(r)) * self.h <= EPS

    def _brick_at(self, c: int, y: float) -> Obstacle:
        return self.brick(c, int(math.floor(self._row(c, y))))

    def obstacles_in(self, x_min, x_max, y_min, y_max):
        for c in range(int(math.floor(x_min)) - 1, int(math.ceil(x_max)) + 1):
            j0 = int(math.floor(self._row(c, y_min))) - 1
            j1 = int(math.floor(self._row(c, y_max))) + 1
            for j in range(j0, j1 + 1):
                o = self.brick(c, j)
                if (o.x_max >= x_min - EPS and o.x_min <= x_max + EPS
                        and o.y_max >= y_min - EPS and o.y_min <= y_max + EPS):
                    yield o

    def obstacle_containing(self, p):
        if _is_int(p.x):
            return None
        c = int(math.floor(p.x))
        if self._is_seam(c, p.y):
            return None
        return self._brick_at(c, p.y)

    def _ray(self, origin, d, limit):
        x0, y0 = origin
        if d.dy != 0:
            if _is_int(x0):
                return None
            c = int(math.floor(x0))
            o = self._brick_at(c, y0 + d.dy * self.h / 4)
            self.queried.add(o.id)
            y = o.y_min if d.dy > 0 else o.y_max
            return _make_hit(o, Point(x0, y))
        if d.dx > 0:
            c = int(math.ceil(x0 - EPS))
            while self._is_seam(c, y0):
                c += 1
            o = self._brick_at(c, y0)
            if c >= self.n:
                return None
            self.queried.add(o.id)
            return _make_hit(o, Point(max(float(c), x0), y0))
        c = int(math.floor(x0 + EPS)) - 1
        while self._is_seam(c, y0):
            c -= 1
        o = self._brick_at(c, y0)
        self.queried.add(o.id)
        return _make_hit(o, Point(min(float(c + 1), x0), y0))

    def materialize(self, x_min, x_max, y_min, y_max) -> ExplicitScene:
        obs = sorted(self.obstacles_in(x_min, x_max, y_min, y_max), key=lambda o: o.id)
        return ExplicitScene(self.n, obs, kind="bricks-region",
                             params={"h": self.h, "region": (x_min, x_max, y_min, y_max)})


# ---------------------------------------------------------------- validation

def validate(scene: Scene) -> list[str]:
    """List invariant violations of an explicit scene; empty means valid."""
    out: list[str] = []
    if scene.lazy:
        return out
    assert isinstance(scene, ExplicitScene)
    seen_ids: set[int] = set()
    for o in scene.obstacles:
        if o.id in seen_ids:
            out.append(f"duplicate id {o.id}")
        seen_ids.add(o.id)
        if not all(math.isfinite(v) for v in (o.x_min, o.y_min, o.x_max, o.y_max)):
            out.append(f"obstacle {o.id}: non-finite coordinate")
            continue
        if o.width < 1 - EPS:
            out.append(f"obstacle {o.id}: width {o.width} < 1")
        if o.height < 1 - EPS:
            out.append(f"obstacle {o.id}: height {o.height} < 1")
        if not (_is_int(o.x_min) and _is_int(o.x_max)):
            out.append(f"obstacle {o.id}: non-integral x")
        if o.contains_interior(Point(0.0, 0.0)):
            out.append(f"obstacle {o.id}: contains s")
        if o.x_min + EPS < scene.n < o.x_max - EPS:
            out.append(f"obstacle {o.id}: crosses wall x={scene.n}")
    obs = sorted(scene.obstacles, key=lambda o: o.x_min)
    for a_idx, a in enumerate(obs):
        for b in obs[a_idx + 1:]:
            if b.x_min >= a.x_max - EPS:
                break
            if (min(a.y_max, b.y_max) - max(a.y_min, b.y_min) > EPS
                    and min(a.x_max, b.x_max) - max(a.x_min, b.x_min) > EPS):
                out.append(f"overlap: obstacles {a.id} and {b.id}")
    return out


# ---------------------------------------------------------------- file format

def _fmt(v: float) -> str:
    if float(v).is_integer():
        return str(int(v))
    return repr(float(v))


def parse_scene(text: str) -> Scene:
    n: Optional[int] = None
    obstacles: list[Obstacle] = []
    comments: list[str] = []
    bricks: Optional[tuple[int, float]] = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            comments.append(line)
            continue
        parts = line.split()
        try:
            if parts[0] == "n" and len(parts) == 2:
                n = int(parts[1])
            elif parts[0] == "obstacle" and len(parts) == 5:
                x0, y0, x1, y1 = (float(p) for p in parts[1:])
                o = Obstacle(len(obstacles), x0, y0, x1, y1)
                if o.width < 1 - EPS or o.height < 1 - EPS:
                    raise SceneError(f"line {lineno}: obstacle narrower than 1")
                if not (_is_int(x0) and _is_int(x1)):
                    raise SceneError(f"line {lineno}: obstacle x not integral")
                obstacles.append(o)
            elif parts[0] == "bricks" and len(parts) == 3:
                bricks = (int(parts[1]), float(parts[2]))
            else:
                raise SceneError(f"line {lineno}: cannot parse {raw!r}")
        except ValueError as exc:
            if isinstance(exc, SceneError):
                raise
            raise SceneError(f"line {lineno}: {exc}") from exc
    if bricks is not None:
        sc = BrickScene(*bricks)
        sc.comments = comments
        return sc
    if n is None:
        raise SceneError("missing 'n' line")
    return ExplicitScene(n, obstacles, comments=comments)


def emit_scene(scene: Scene) -> str:
    lines = list(scene.comments)
    if isinstance(scene, BrickScene):
        lines.append(f"bricks {scene.n} {_fmt(scene.h)}")
    else:
        assert isinstance(scene, ExplicitScene)
        lines.append(f"n {scene.n}")
        for o in scene.obstacles:
            lines.append("obstacle " + " ".join(_fmt(v) for v in (o.x_min, o.y_min, o.x_max, o.y_max)))
    return "\n".join(lines) + "\n"


def renumber(obstacles: Iterable[Obstacle]) -> list[Obstacle]:
    """Obstacles with ids 0..N-1 in the given order (file order after a round trip)."""
    return [Obstacle(i, o.x_min, o.y_min, o.x_max, o.y_max) for i, o in enumerate(obstacles)]


# ---------------------------------------------------------------- generators

@dataclass
class _ColumnOccupancy:
    cols: dict = field(default_factory=dict)

    def free(self, x0: int, x1: int, y0: float, y1: float) -> bool:
        for c in range(x0, x1):
            for a, b in self.cols.get(c, ()):
                if a < y1 - EPS and y0 < b - EPS:
                    return False
        return True

    def add(self, x0: int, x1: int, y0: float, y1: float) -> None:
        for c in range(x0, x1):
            self.cols.setdefault(c, []).append((y0, y1))


def gen_random(n: int, density: float, y_extent: Optional[float] = None, seed: int = 0,
               w_max: Optional[int] = None, h_max: Optional[float] = None,
               max_attempts: Optional[int] = None) -> ExplicitScene:
    """Disjoint random obstacles in ``[1, n-1] x [-y_extent, y_extent]``.

    Obstacles are placed by rejection sampling until their total area reaches
    ``density`` times the sampling box. Widths and heights are integers in
    ``[1, w_max]`` and ``[1, h_max]``, so every corner is an integer point. The
    defaults (narrow, up to 4*sqrt(n) tall) make greedy descent deep enough to
    exercise fence search.
    If the target is not reached within ``max_attempts`` the scene is
    returned with ``params["underfilled"] = True``.
    """
    if n < 1:
        raise SceneError("n must be >= 1")
    if not 0 <= density < 1:
        raise SceneError("density must lie in [0, 1)")
    y_extent = 2.0 * n if y_extent is None else float(y_extent)
    root = math.sqrt(n)
    w_max = 2 if w_max is None else int(w_max)
    h_max = max(1.0, 4.0 * root) if h_max is None else float(h_max)
    params = {"n": n, "density": density, "y_extent": y_extent, "seed": seed,
              "w_max": w_max, "h_max": h_max, "underfilled": False}
    box_w = n - 2
    if density == 0 or box_w < 1:
        return ExplicitScene(n, (), kind="random", params=params)
    rng = random.Random(seed)
    target = density * box_w * 2 * y_extent
    avg_area = (1 + min(w_max, box_w)) / 2 * (1 + h_max) / 2
    budget = max_attempts if max_attempts is not None else int(50 * target / avg_area) + 1000
    occ = _ColumnOccupancy()
    obstacles: list[Obstacle] = []
    area = 0.0
    attempts = 0
    while area < target and attempts < budget:
        attempts += 1
        w = rng.randint(1, min(w_max, box_w))
        h = rng.randint(1, max(1, math.floor(h_max)))
        x0 = rng.randint(1, n - 1 - w)
        lo, hi = math.ceil(-y_extent), math.floor(y_extent - h)
        if hi < lo:
            continue
        y0 = rng.randint(lo, hi)
        if not occ.free(x0, x0 + w, y0, y0 + h):
            continue
        occ.add(x0, x0 + w, y0, y0 + h)
        obstacles.append(Obstacle(len(obstacles), float(x0), float(y0), float(x0 + w), float(y0 + h)))
        area += w * h
    params["underfilled"] = area < target
    params["covered"] = area / (box_w * 2 * y_extent)
    obstacles.sort(key=lambda o: (o.x_min, o.y_min))
    return ExplicitScene(n, renumber(obstacles), kind="random", params=params,
                         comments=[f"# random n={n} density={density} seed={seed}"])


def gen_bricks(n: int, h: Optional[float] = None) -> BrickScene:
    return BrickScene(n, math.sqrt(n) if h is None else h)


def empty_scene(n: int) -> ExplicitScene:
    return ExplicitScene(n, ())


def path_length(points: Sequence[Point]) -> float:
    return sum(math.hypot(b[0] - a[0], b[1] - a[1]) for a, b in zip(points, points[1:]))
