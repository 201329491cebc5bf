"""Slow reference shortest paths used only by the tests."""
from __future__ import annotations

import heapq
import math

import numpy as np

from fencenav.oracle import _blocked
from fencenav.scene import Point, RIGHT, WallHit


def brute_wall_distance(scene) -> float:
    """Dijkstra over the full all-pairs visibility graph (no pruning)."""
    obs = list(scene.obstacles)
    rects = np.array([(o.x_min, o.y_min, o.x_max, o.y_max) for o in obs], dtype=float).reshape(-1, 4)
    nodes = [Point(0.0, 0.0)]
    for o in obs:
        for c in o.corners():
            if c.x < scene.n and c not in nodes:
                nodes.append(c)
    pts = np.array(nodes, dtype=float)
    N = len(nodes)
    dist = [math.inf] * N
    dist[0] = 0.0
    best = math.inf
    heap = [(0.0, 0)]
    done = [False] * N
    while heap:
        d, u = heapq.heappop(heap)
        if done[u] or d >= best:
            continue
        done[u] = True
        p = nodes[u]
        if isinstance(scene.first_hit(p, RIGHT), WallHit):
            best = min(best, d + scene.n - p.x)
        blocked = _blocked(p, pts, rects)
        for v in np.nonzero(~blocked)[0]:
            nd = d + math.hypot(pts[v, 0] - p.x, pts[v, 1] - p.y)
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, int(v)))
    return best


def _stencil(reach: int = 4) -> list[tuple[int, int]]:
    out = []
    for dx in range(0, reach + 1):
        for dy in range(-reach, reach + 1):
            if (dx, dy) == (0, 0) or math.gcd(dx, abs(dy)) != 1 or (dx == 0 and dy < 0):
                continue
            out.append((dx, dy))
    return out


def _cells_crossed(dx: int, dy: int) -> list[tuple[int, int]]:
    ts = {0.0, 1.0}
    ts |= {k / abs(dx) for k in range(1, abs(dx))} if dx else set()
    ts |= {k / abs(dy) for k in range(1, abs(dy))} if dy else set()
    ts = sorted(ts)
    return [(math.floor(dx * (a + b) / 2), math.floor(dy * (a + b) / 2)) for a, b in zip(ts, ts[1:])]


def grid_wall_distance(scene, cell: float = 0.05, margin: float = 2.0, reach: int = 4) -> float:
    """Dense-grid Dijkstra from s to the wall.

    Grid points are ``cell`` apart and obstacle sides must lie on grid lines.
    Moves are every primitive lattice step up to ``reach`` cells; a move is
    blocked when it passes through the inside of an obstacle cell, and a
    move along a grid line only when both neighbouring cells belong to the
    same obstacle.
    """
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import dijkstra

    obs = list(scene.obstacles)
    ys = [0.0] + [o.y_min for o in obs] + [o.y_max for o in obs]
    y0 = math.floor(min(ys) - margin)
    y1 = math.ceil(max(ys) + margin)
    x0, x1 = -margin, float(scene.n)
    nxp = int(round((x1 - x0) / cell)) + 1
    nyp = int(round((y1 - y0) / cell)) + 1
    occ = np.full((nxp + 1, nyp + 1), -1, dtype=np.int64)
    for o in obs:
        i0, i1 = int(round((o.x_min - x0) / cell)), int(round((o.x_max - x0) / cell))
        j0, j1 = int(round((o.y_min - y0) / cell)), int(round((o.y_max - y0) / cell))
        occ[max(i0, 0):max(i1, 0), max(j0, 0):max(j1, 0)] = o.id
    pad = np.full((nxp + 2, nyp + 2), -1, dtype=np.int64)
    pad[1:, 1:] = occ[:nxp + 1, :nyp + 1]  # pad[i+1, j+1] is cell (i, j)
    idx = np.arange(nxp * nyp).reshape(nxp, nyp)
    rows, cols, w = [], [], []
    for dx, dy in _stencil(reach):
        ia0, ia1 = 0, nxp - dx
        ja0, ja1 = max(0, -dy), nyp - max(0, dy)
        I, J = np.meshgrid(np.arange(ia0, ia1), np.arange(ja0, ja1), indexing="ij")
        if dy == 0:
            blocked = (pad[I + 1, J + 1] == pad[I + 1, J]) & (pad[I + 1, J + 1] >= 0)
        elif dx == 0:
            blocked = (pad[I + 1, J + 1] == pad[I, J + 1]) & (pad[I + 1, J + 1] >= 0)
        else:
            blocked = np.zeros(I.shape, dtype=bool)
            for ci, cj in _cells_crossed(dx, dy):
                blocked |= pad[I + ci + 1, J + cj + 1] >= 0
        ok = ~blocked
        ia = idx[I[ok], J[ok]]
        ib = idx[I[ok] + dx, J[ok] + dy]
        ln = cell * math.hypot(dx, dy)
        rows += [ia, ib]
        cols += [ib, ia]
        w += [np.full(len(ia), ln)] * 2
    G = coo_matrix((np.concatenate(w), (np.concatenate(rows), np.concatenate(cols))),
                   shape=(nxp * nyp, nxp * nyp)).tocsr()
    sx = int(round((0 - x0) / cell))
    sy = int(round((0 - y0) / cell))
    d = dijkstra(G, indices=int(idx[sx, sy]))
    return float(d[idx[-1, :]].min())


def small_scene(seed: int, max_obstacles: int = 6):
    """Small valid scene whose first obstacle blocks the straight line y = 0."""
    import random

    from fencenav.scene import ExplicitScene, Obstacle, validate
    rng = random.Random(seed)
    n = rng.randint(8, 20)
    x = rng.randint(2, n - 3)
    lo = -rng.choice([1, 1.5, 2, 3, 4])
    obs = [Obstacle(0, x, lo, x + 1, lo + rng.choice([2, 3, 4.5, 6]))]
    want = rng.randint(1, max_obstacles)
    tries = 0
    while len(obs) < want and tries < 200:
        tries += 1
        w = rng.randint(1, 3)
        x = rng.randint(1, n - w - 1)
        h = rng.choice([1, 1.5, 2, 3, 4, 6])
        y = round(rng.uniform(-6, 6 - h) * 4) / 4
        o = Obstacle(len(obs), x, y, x + w, y + h)
        if not validate(ExplicitScene(n, obs + [o])):
            obs.append(o)
    return ExplicitScene(n, obs)
