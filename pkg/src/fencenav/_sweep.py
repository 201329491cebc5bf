"""Compiled visibility sweep and A* search behind the shortest-path oracle.

Obstacle x-coordinates are integers, so visibility from a vertex can be
computed one unit column at a time: the set of free ray slopes starts as
the whole line and every obstacle met in the next column removes an open
slope interval. Corners on the next grid line are visible exactly when
their slope is still free. Endpoints of removed intervals stay free, which
lets rays squeeze between obstacles that touch at a corner.
"""
from __future__ import annotations

import heapq

import numpy as np
from numba import njit

INF = np.inf


@njit(cache=True)
def _slope(y, uy, d):
    if d == 0.0:
        if y < uy:
            return -INF
        if y > uy:
            return INF
        return 0.0
    return (y - uy) / d


@njit(cache=True)
def _is_free(fa, fb, F, s):
    lo, hi = 0, F - 1
    j = -1
    while lo <= hi:
        mid = (lo + hi) // 2
        if fa[mid] <= s:
            j = mid
            lo = mid + 1
        else:
            hi = mid - 1
    return j >= 0 and s <= fb[j]


@njit(cache=True)
def _block(fa, fb, F, ta, tb, p, q):
    if not np.isinf(p):
        p = p + 1e-12 * max(1.0, abs(p))
    if not np.isinf(q):
        q = q - 1e-12 * max(1.0, abs(q))
    if p >= q:
        return F
    G = 0
    for j in range(F):
        a, b = fa[j], fb[j]
        if b <= p or a >= q:
            ta[G] = a
            tb[G] = b
            G += 1
            continue
        if a <= p:
            ta[G] = a
            tb[G] = p
            G += 1
        if b >= q:
            ta[G] = q
            tb[G] = b
            G += 1
    for j in range(G):
        fa[j] = ta[j]
        fb[j] = tb[j]
    return G


@njit(cache=True)
def _first_ge(arr, lo, hi, v):
    while lo < hi:
        mid = (lo + hi) // 2
        if arr[mid] < v:
            lo = mid + 1
        else:
            hi = mid
    return lo


@njit(cache=True)
def _sweep(u, dirn, nx, ny, cmin, cmax, n, col_ptr, col_obs, col_y1, oy0, oy1,
           line_ptr, line_nodes, line_y, fa, fb, ta, tb, out_v, out_d):
    """Nodes visible from u on lines strictly to one side; returns (count, wall_dist)."""
    ux = int(nx[u])
    uy = ny[u]
    fa[0] = -INF
    fb[0] = INF
    F = 1
    cnt = 0
    wall = -1.0
    d = 0
    while F > 0:
        if dirn > 0:
            c = ux + d
            nxt = c + 1
            if c >= n or c >= cmax:
                break
        else:
            c = ux - d - 1
            nxt = c
            if c < cmin:
                break
        da = float(d)
        db = float(d + 1)
        smin = fa[0]
        smax = fb[F - 1]
        ylo = uy + min(smin * db, smin * da) if not np.isinf(smin) else -INF
        yhi = uy + max(smax * db, smax * da) if not np.isinf(smax) else INF
        ci = c - cmin
        s0 = col_ptr[ci]
        s1 = col_ptr[ci + 1]
        # obstacles in a column are disjoint, so y0 order is also y1 order
        j = _first_ge(col_y1, s0, s1, ylo)
        while j < s1 and F > 0:
            o = col_obs[j]
            if oy0[o] >= yhi:
                break
            if oy1[o] > ylo:
                p = min(_slope(oy0[o], uy, da), _slope(oy0[o], uy, db))
                q = max(_slope(oy1[o], uy, da), _slope(oy1[o], uy, db))
                F = _block(fa, fb, F, ta, tb, p, q)
            j += 1
        if F == 0:
            break
        if dirn > 0 and nxt >= n:
            if _is_free(fa, fb, F, 0.0):
                wall = float(n - ux)
            break
        li = nxt - cmin
        l0 = line_ptr[li]
        l1 = line_ptr[li + 1]
        ylo = uy + fa[0] * db if not np.isinf(fa[0]) else -INF
        yhi = uy + fb[F - 1] * db if not np.isinf(fb[F - 1]) else INF
        k = _first_ge(line_y, l0, l1, ylo)
        while k < l1 and line_y[k] <= yhi:
            v = line_nodes[k]
            s = (ny[v] - uy) / db
            if _is_free(fa, fb, F, s):
                out_v[cnt] = v
                out_d[cnt] = np.hypot(db, ny[v] - uy)
                cnt += 1
            k += 1
        d += 1
    return cnt, wall


@njit(cache=True)
def _vertical_clear(c, ya, yb, cmin, strad_ptr, strad_obs, oy0, oy1):
    li = c - cmin
    for j in range(strad_ptr[li], strad_ptr[li + 1]):
        o = strad_obs[j]
        if oy0[o] < yb and oy1[o] > ya:
            return False
    return True


@njit(cache=True)
def astar(nx, ny, n, ub, cmin, cmax, col_ptr, col_obs, col_y1, oy0, oy1,
          line_ptr, line_nodes, line_y, line_pos, strad_ptr, strad_obs):
    """Shortest distance from node 0 to the wall x = n; returns (dist, parent)."""
    N = nx.shape[0]
    W = N
    g = np.full(N + 1, INF)
    parent = np.full(N + 1, -1, dtype=np.int64)
    closed = np.zeros(N + 1, dtype=np.bool_)
    fa = np.empty(2 * oy0.shape[0] + 8)
    fb = np.empty_like(fa)
    ta = np.empty_like(fa)
    tb = np.empty_like(fa)
    out_v = np.empty(N + 1, dtype=np.int64)
    out_d = np.empty(N + 1)
    g[0] = 0.0
    heap = [(n - nx[0], 0.0, np.int64(0))]
    while len(heap) > 0:
        f, gu, u = heapq.heappop(heap)
        if closed[u] or gu > g[u]:
            continue
        if u == W:
            break
        closed[u] = True
        if f > ub + 1e-6:
            break
        for dirn in (1, -1):
            cnt, wall = _sweep(u, dirn, nx, ny, cmin, cmax, n, col_ptr, col_obs, col_y1, oy0, oy1,
                               line_ptr, line_nodes, line_y, fa, fb, ta, tb, out_v, out_d)
            if wall >= 0.0:
                cand = gu + wall
                if cand < g[W]:
                    g[W] = cand
                    parent[W] = u
                    heapq.heappush(heap, (cand, cand, np.int64(W)))
            for t in range(cnt):
                v = out_v[t]
                ng = gu + out_d[t]
                if closed[v] or ng >= g[v] or ng + (n - nx[v]) > ub + 1e-6:
                    continue
                g[v] = ng
                parent[v] = u
                heapq.heappush(heap, (ng + n - nx[v], ng, v))
        # neighbours straight above and below on the same grid line
        li = int(nx[u]) - cmin
        pos = line_pos[u]
        for step in (-1, 1):
            k = pos + step
            if k < line_ptr[li] or k >= line_ptr[li + 1]:
                continue
            v = line_nodes[k]
            ya = min(ny[u], ny[v])
            yb = max(ny[u], ny[v])
            if not _vertical_clear(int(nx[u]), ya, yb, cmin, strad_ptr, strad_obs, oy0, oy1):
                continue
            ng = gu + (yb - ya)
            if closed[v] or ng >= g[v] or ng + (n - nx[v]) > ub + 1e-6:
                continue
            g[v] = ng
            parent[v] = u
            heapq.heappush(heap, (ng + n - nx[v], ng, v))
    return g[W], parent


def build_and_solve(n: int, rects: np.ndarray, ub: float, xmin_limit: int):
    """Prepare grid-line indices for ``rects`` (x0, y0, x1, y1) and run the search.

    Returns ``(length, vertices)`` with vertices as (x, y) tuples ending on the wall,
    or ``(inf, [])`` when the wall is unreachable within ``ub``.
    """
    rects = np.asarray(rects, dtype=float).reshape(-1, 4)
    pts = {(0.0, 0.0)}
    for x0, y0, x1, y1 in rects:
        for p in ((x0, y0), (x0, y1), (x1, y0), (x1, y1)):
            if xmin_limit <= p[0] < n:
                pts.add((float(p[0]), float(p[1])))
    pts.discard((0.0, 0.0))
    nodes = [(0.0, 0.0)] + sorted(pts)
    nx = np.array([p[0] for p in nodes], dtype=float)
    ny = np.array([p[1] for p in nodes], dtype=float)
    cmin = int(min(xmin_limit, 0, np.floor(rects[:, 0].min()) if len(rects) else 0))
    cmax = int(max(n, np.ceil(rects[:, 2].max()) if len(rects) else n))
    ncols = cmax - cmin
    # column index: obstacles covering [c, c+1], sorted by y0
    cols: list[list[int]] = [[] for _ in range(ncols)]
    strad: list[list[int]] = [[] for _ in range(ncols + 1)]
    order = np.argsort(rects[:, 1], kind="stable") if len(rects) else np.array([], dtype=int)
    for o in order:
        x0, _, x1, _ = rects[o]
        for c in range(int(x0), int(x1)):
            if cmin <= c < cmax:
                cols[c - cmin].append(int(o))
        for c in range(int(x0) + 1, int(x1)):
            if cmin <= c <= cmax:
                strad[c - cmin].append(int(o))
    col_ptr = np.zeros(ncols + 1, dtype=np.int64)
    col_ptr[1:] = np.cumsum([len(c) for c in cols])
    col_obs = np.array([o for c in cols for o in c], dtype=np.int64)
    strad_ptr = np.zeros(ncols + 2, dtype=np.int64)
    strad_ptr[1:] = np.cumsum([len(c) for c in strad])
    strad_obs = np.array([o for c in strad for o in c], dtype=np.int64)
    lines: list[list[int]] = [[] for _ in range(ncols + 1)]
    for i, (x, y) in enumerate(nodes):
        lines[int(x) - cmin].append(i)
    line_ptr = np.zeros(ncols + 2, dtype=np.int64)
    line_ptr[1:] = np.cumsum([len(l) for l in lines])
    line_nodes = np.empty(int(line_ptr[-1]), dtype=np.int64)
    line_pos = np.empty(len(nodes), dtype=np.int64)
    k = 0
    for l in lines:
        l.sort(key=lambda i: nodes[i][1])
        for i in l:
            line_nodes[k] = i
            line_pos[i] = k
            k += 1
    line_y = ny[line_nodes] if len(line_nodes) else np.empty(0)
    col_y1 = rects[col_obs, 3].copy() if len(col_obs) else np.empty(0)
    oy0 = rects[:, 1].copy()
    oy1 = rects[:, 3].copy()
    dist, parent = astar(nx, ny, int(n), float(ub), cmin, cmax, col_ptr, col_obs, col_y1, oy0, oy1,
                         line_ptr, line_nodes, line_y, line_pos, strad_ptr, strad_obs)
    if not np.isfinite(dist):
        return np.inf, []
    verts = []
    u = parent[len(nodes)]
    while u != -1:
        verts.append(nodes[u])
        u = parent[u]
    verts.reverse()
    verts.append((float(n), verts[-1][1]))
    return float(dist), verts
