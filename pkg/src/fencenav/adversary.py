"""Lower-bound construction on the staggered brick pattern.

A deterministic strategy is run on the infinite brick tiling; every brick it
never touched is then removed. Because the robot only learns obstacles by
touching them, replaying the strategy on the reduced scene must reproduce the
same trajectory, while the reduced scene usually admits a far shorter path.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from .oracle import OracleError, shortest_wall_path
from .report import RunReport
from .scene import BrickScene, ExplicitScene, Obstacle, Point, Scene, renumber


class AdversaryFault(RuntimeError):
    pass


Strategy = Callable[..., RunReport]


def _strategy(name: str) -> Strategy:
    from .navigate import run_cumulative, run_incremental
    table = {"cumulative": run_cumulative, "incremental": run_incremental}
    try:
        return table[name]
    except KeyError:
        raise ValueError(f"unknown strategy {name!r}") from None


def _run(strategy, scene: Scene, k: int) -> RunReport:
    fn = _strategy(strategy) if isinstance(strategy, str) else strategy
    return fn(scene, k, compute_L=False, keep_trajectories=True)


def _trajectories(rep: RunReport) -> list[list[tuple[float, float]]]:
    return [[(float(p[0]), float(p[1])) for p in t] for t in rep.extra["trajectories"]]


@dataclass
class AdversaryResult:
    reduced: ExplicitScene
    report: RunReport
    bricks: BrickScene
    touched: list[int]
    replay_identical: bool
    color_counts: dict[int, int] = field(default_factory=dict)

    @property
    def m_touched(self) -> int:
        return len(self.touched)


def build_adversary(n: int, k: int, h: float, strategy="cumulative") -> AdversaryResult:
    """Run ``strategy`` for k trips on the brick tiling and keep only touched bricks.

    The brick whose left side holds s counts as touched. The strategy is run
    twice on the full tiling to confirm it is deterministic, then once on the
    reduced scene to confirm the trajectory is unchanged.
    """
    bricks = BrickScene(n, h)
    rep = _run(strategy, bricks, k)
    again = _run(strategy, BrickScene(n, h), k)
    if _trajectories(rep) != _trajectories(again):
        raise AdversaryFault("strategy is not deterministic")
    touched = set(rep.extra["touched"])
    touched.add(bricks.brick_id(0, 0))
    ids = sorted(touched)
    obs = sorted((bricks.obstacle(i) for i in ids), key=lambda o: (o.x_min, o.y_min))
    reduced = ExplicitScene(n, renumber(obs), kind="adversary",
                            params={"n": n, "k": k, "h": h},
                            comments=[f"# adversary n={n} k={k} h={_num(h)}"])
    replay = _run(strategy, reduced, k)
    same = _trajectories(replay) == _trajectories(rep)
    colors: dict[int, int] = {}
    for i in ids:
        colors[bricks.color(i)] = colors.get(bricks.color(i), 0) + 1
    return AdversaryResult(reduced, rep, bricks, ids, same, dict(sorted(colors.items())))


def _num(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


# ---------------------------------------------------------------- verification

@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    value: float
    bound: float


def row_path_bound(reduced: ExplicitScene, h: float, rows: Optional[int] = None) -> tuple[float, int, int]:
    """Shortest of the row paths: straight up or down to ``y = j*h``, then along that row.

    Along the row only bricks centred on it block; each costs a detour of h.
    Returns ``(length, j, detours)`` for the best row with ``|j| <= rows``.
    """
    counts: dict[int, int] = {}
    n = reduced.n
    for o in reduced.obstacles:
        centre = (o.y_min + o.y_max) / 2
        j = round(centre / h)
        if abs(centre - j * h) <= 1e-9 and 0 <= o.x_min < n:
            counts[j] = counts.get(j, 0) + 1
    if rows is None:
        rows = math.isqrt(len(reduced.obstacles)) + 1
    best = (math.inf, 0, 0)
    for j in range(-rows, rows + 1):
        c = counts.get(j, 0)
        length = abs(j) * h + n + c * h
        if length < best[0]:
            best = (length, j, c)
    return best


def verify_lower_bound(reduced: ExplicitScene, report: RunReport, h: float,
                    exact: Optional[bool] = None) -> list[Check]:
    """Check the lower-bound chain for an adversary run.

    (a) total distance is at least n*k*h/2; (b) the reduced scene has a path
    of length at most 3*sqrt(8*h*R); (c) the resulting ratio is at least
    sqrt(n/k)/12. L is taken from the exact oracle when ``exact`` (default:
    scenes up to 20000 obstacles), and from the best row path otherwise; the
    row path is an upper bound on L, so (b) and (c) stay sound.
    """
    n, k = reduced.n, report.k
    R = report.total
    M = len(reduced.obstacles)
    row_len, row_j, row_detours = row_path_bound(reduced, h)
    if exact is None:
        exact = M <= 20000
    L = row_len
    if exact:
        try:
            L = min(L, shortest_wall_path(reduced).length)
        except OracleError:
            pass
    rho = R / (k * L)
    return [
        Check("M_touched>=n", M >= n, M, n),
        Check("R>=nkh/2", R >= n * k * h / 2, R, n * k * h / 2),
        Check("L<=3sqrt(8hR)", L <= 3 * math.sqrt(8 * h * R), L, 3 * math.sqrt(8 * h * R)),
        Check("rho>=sqrt(n/k)/12", rho >= math.sqrt(n / k) / 12, rho, math.sqrt(n / k) / 12),
        Check("row-detours<=sqrt(M)", row_detours <= math.sqrt(M), row_detours, math.sqrt(M)),
    ]


def color_separation(h: float, cols: int = 8, rows: int = 6) -> float:
    """Least free-space distance between two distinct same-colored bricks in a patch.

    Free space in the tiling is a network: the vertical grid lines plus the
    unit-length horizontal seams between vertically adjacent bricks. Distances
    are measured along it with Dijkstra from each brick's corners.
    """
    b = BrickScene(max(1, int(math.ceil(h * h))), h)
    bricks = [(c, j) for c in range(cols) for j in range(-rows, rows + 1)]
    # vertices: all brick corners; edges along grid lines and seams
    adj: dict[tuple, list[tuple[tuple, float]]] = {}

    def link(p, q):
        d = abs(p[0] - q[0]) + abs(p[1] - q[1])
        adj.setdefault(p, []).append((q, d))
        adj.setdefault(q, []).append((p, d))

    lines: dict[int, set[float]] = {}
    for c, j in bricks:
        o = b.brick(c, j)
        for x in (c, c + 1):
            lines.setdefault(x, set()).update((o.y_min, o.y_max))
        link((float(c), o.y_max), (float(c + 1), o.y_max))
    for x, ys in lines.items():
        ys = sorted(ys)
        for y0, y1 in zip(ys, ys[1:]):
            link((float(x), y0), (float(x), y1))

    def corners(c, j):
        o = b.brick(c, j)
        return [(float(c), o.y_min), (float(c), o.y_max), (float(c + 1), o.y_min), (float(c + 1), o.y_max)]

    def on_boundary(p, c, j):
        o = b.brick(c, j)
        x, y = p
        return ((x in (o.x_min, o.x_max) and o.y_min <= y <= o.y_max)
                or (y in (o.y_min, o.y_max) and o.x_min <= x <= o.x_max))

    best = math.inf
    inner = [(c, j) for c, j in bricks if 2 <= c < cols - 2 and abs(j) <= rows - 2]
    for c, j in inner:
        dist = {p: 0.0 for p in corners(c, j)}
        heap = [(0.0, p) for p in dist]
        while heap:
            d, p = heapq.heappop(heap)
            if d > dist.get(p, math.inf) or d >= best:
                continue
            for c2, j2 in bricks:
                if (c2, j2) != (c, j) and b.color(b.brick_id(c2, j2)) == b.color(b.brick_id(c, j)) \
                        and abs(c2 - c) <= 3 and abs(j2 - j) <= 3 and on_boundary(p, c2, j2):
                    best = min(best, d)
            for q, w in adj.get(p, ()):
                if on_boundary(q, c, j):
                    w = 0.0 if on_boundary(p, c, j) else w
                nd = d + w
                if nd < dist.get(q, math.inf):
                    dist[q] = nd
                    heapq.heappush(heap, (nd, q))
    return best
