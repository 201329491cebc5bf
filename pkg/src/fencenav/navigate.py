"""Fence-tree search and the multi-trip navigation strategies built on it."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .fences import Edge, FenceTree, Post, simplify
from .robot import (RobotFault, RobotState, stop_at_y_below, stop_first,
                    stop_in_boxes, stop_on_polyline)
from .scene import DOWN, EPS, LEFT, RIGHT, Point, Scene, path_length


class InvariantViolation(RobotFault):
    """A search-state invariant failed; always a bug."""


class PreconditionError(RobotFault):
    pass


Index = tuple[int, int]


@dataclass
class SearchState:
    k: int
    M: int
    tau: float
    L_guess: float
    tree: FenceTree
    i: int = 1
    counts: list[int] = field(default_factory=list)
    xs: list[float] = field(default_factory=list)
    trails: dict[int, list[Point]] = field(default_factory=dict)
    wall_edge: Optional[tuple[Index, list[Point]]] = None
    debug: bool = True

    @classmethod
    def start(cls, root: Post, k: int, M: int, tau: float, L_guess: float, debug: bool = True) -> "SearchState":
        tree = FenceTree(k, M, tau, -L_guess)
        tree.add((1, 1), root, None)
        counts = [0] * (k + 2)
        counts[1] = 1
        # undiscovered fences sit at -inf so a root on x = 0 is still "ahead"
        xs = [-math.inf] * (k + 2)
        xs[1] = root.x
        return cls(k, M, tau, L_guess, tree, 1, counts, xs, {}, None, debug)

    @property
    def base(self) -> float:
        return self.tree.base

    def level(self, i: int, m: int) -> int:
        return m - i

    def y(self, i: int, m: int) -> float:
        return self.base + (m - i) * self.tau

    def last(self, i: int) -> Post:
        return self.tree.post(i, self.counts[i])

    def X(self, i: int, m: int) -> float:
        return self.tree.post(i, m).x


@dataclass
class GroupResult:
    tree: FenceTree
    walked: float
    delta_x: float
    crossing_path: list[Point]
    halted_at_wall: bool
    costs: dict[str, float]
    transition: list[Point]
    transition_length: float
    tau: float
    L_guess: float
    tau_paths: list = field(default_factory=list)

    @property
    def crossing_length(self) -> float:
        return path_length(self.crossing_path)

    @property
    def k(self) -> int:
        return self.tree.k


COST_TAGS = ("edge-up", "edge-down", "godown", "gobackdown", "backtrack")


# ---------------------------------------------------------------- invariants

def check_invariants(st: SearchState) -> None:
    k, c, xs = st.k, st.counts, st.xs
    for j in range(1, k):
        if c[j] < c[j + 1]:
            raise InvariantViolation(f"post counts increase between fences {j} and {j + 1}: {c[1:k + 1]}")
    for j in range(st.i + 1, k):
        if xs[j] > xs[j + 1] + EPS:
            raise InvariantViolation(f"fences below {st.i} are out of x-order at {j}")
    for j in range(1, k + 1):
        if c[j] < 2:
            continue
        prev = st.X(j, c[j] - 1)
        for l in range(j + 1, k + 1):
            if c[l] >= 1 and prev > xs[l] + EPS:
                raise InvariantViolation(f"fence {j} has two posts right of fence {l}'s last post")


def check_ascent(st: SearchState, i: int) -> None:
    c, xs = st.counts, st.xs
    if xs[i] >= xs[i - 1] - EPS and c[i] != c[i - 1]:
        raise InvariantViolation(f"ascent from {i}: fence is not behind but counts differ")
    for s in range(i, st.k + 1):
        if xs[s] < xs[i - 1] - EPS and c[s] != c[i - 1] - 1:
            raise InvariantViolation(f"ascent from {i}: fence {s} behind with count {c[s]}")


# ---------------------------------------------------------------- primitives

def _at(rs: RobotState, p: Point, what: str) -> None:
    if abs(rs.position.x - p.x) > 1e-6 or abs(rs.position.y - p.y) > 1e-6:
        raise RobotFault(f"{what}: expected robot at {p}, found {rs.position}")


def _traverse_edge(rs: RobotState, st: SearchState, parent: Index, child: Index, kind: str) -> bool:
    """Hop one rung from ``parent`` then run a tau-path; False if the wall was reached."""
    par = st.tree.post(*parent)
    _at(rs, par.center, "edge start")
    level = par.level + (1 if kind == "up" else -1)
    hop = Point(par.x, st.base + level * st.tau)
    with rs.tagged("edge-" + kind):
        if rs.straight_move(hop) is not None:
            raise RobotFault(f"vertical hop from {par.center} blocked")
        tp = rs.tau_path(st.tau, st.base, level)
    pts = simplify([par.center, hop, *tp.points])
    if tp.wall:
        st.wall_edge = (parent, pts)
        return False
    edge = Edge(child, parent, kind, tuple(pts), st.tau + tp.length, tp.dx, tp.length)
    st.tree.add(child, tp.post, edge)
    return True


def _walk_tail(rs: RobotState, path: Sequence[Point], b: Point) -> None:
    """Walk from ``b`` (on ``path``) to the path's end, entering at the last segment containing b."""
    for idx in range(len(path) - 2, -1, -1):
        p, q = path[idx], path[idx + 1]
        if (min(p.x, q.x) - EPS <= b.x <= max(p.x, q.x) + EPS
                and min(p.y, q.y) - EPS <= b.y <= max(p.y, q.y) + EPS):
            rs.follow_path([rs.position, *path[idx + 1:]])
            return
    raise RobotFault(f"point {b} is not on the tree path")


def go_down(rs: RobotState, st: SearchState, i: int, m: int, q: int, tag: str = "godown") -> None:
    """Move from between P_i^m and P_{i+1}^q down to the post P_{i+1}^q."""
    tgt = st.tree.post(i + 1, q)
    xi = st.X(i, m)
    p = rs.position
    if not (m >= q and xi <= tgt.x + EPS and xi - EPS <= p.x <= tgt.x + EPS
            and st.y(i, m) + EPS >= p.y >= tgt.y - EPS):
        raise PreconditionError(f"go_down({i},{m},{q}) from {p}")
    with rs.tagged(tag):
        rs.greedy_path(DOWN, LEFT, stop_at_y_below(tgt.y + st.tau))
        path = st.tree.path_from_root((i + 1, q))
        post_box = (tgt.x, tgt.x, tgt.y - st.tau, tgt.y + st.tau)
        on_post = stop_in_boxes([post_box])
        res = rs.greedy_path(RIGHT, DOWN, stop_first(on_post, stop_on_polyline(path)))
        if res != "stop":
            raise RobotFault(f"go_down({i},{m},{q}) reached the wall")
        b = rs.position
        if tgt.contains(b):
            rs.follow_path([b, tgt.center])
        else:
            _walk_tail(rs, path, b)
    _at(rs, tgt.center, f"go_down({i},{m},{q}) end")


def go_back_down(rs: RobotState, st: SearchState, i: int, m: int, q: int) -> None:
    """Back off along the tree path, then descend to P_{i+1}^q via lower bands."""
    tag = "gobackdown"
    xt = st.X(i + 1, q)
    if not (m >= q + 2 and st.X(i, m) > xt + EPS and xt >= st.X(i, m - 1) - EPS):
        raise PreconditionError(f"go_back_down({i},{m},{q})")
    _at(rs, st.tree.post(i, m).center, "go_back_down start")
    with rs.tagged(tag):
        rev = list(reversed(st.tree.path_from_root((i, m))))
        pts = [rev[0]]
        for a, b in zip(rev, rev[1:]):
            if a.x <= xt + EPS:
                break
            if b.x <= xt + EPS:
                pts.append(Point(xt, a.y))
                break
            pts.append(b)
        rs.follow_path(pts)
        boxes = {}
        for j in range(1, i):
            lo, hi = st.X(j, m - 1), st.X(j + 1, m - 1)
            if lo <= hi + EPS:
                boxes[j] = (lo, hi, st.y(j + 1, m - 1), st.y(j, m - 1))
        ybot = st.y(i, m - 1)
        rs.greedy_path(DOWN, LEFT, stop_first(stop_in_boxes(list(boxes.values())), stop_at_y_below(ybot)))
        pos = rs.position
        inside = [j for j, (x0, x1, y0, y1) in boxes.items()
                  if x0 - EPS <= pos.x <= x1 + EPS and y0 - EPS <= pos.y <= y1 + EPS]
        if inside:
            for j in range(max(inside), i):
                go_down(rs, st, j, m - 1, m - 1, tag)
        go_down(rs, st, i, m - 1, q, tag)


# ---------------------------------------------------------------- FindFenceTree

CheckpointFn = Callable[[RobotState, SearchState], None]


def find_fence_tree(rs: RobotState, st: SearchState, on_post: Optional[CheckpointFn] = None) -> bool:
    """Discover the k x M fence-tree rooted at the robot's post.

    Returns True when the tree is complete with the robot at P_k^M and False
    when some edge reached the wall.
    """
    k, M = st.k, st.M
    c, xs = st.counts, st.xs
    _at(rs, st.tree.root.center, "find_fence_tree start")
    while True:
        i = st.i
        Mi = c[i]
        below = i < k
        if below and xs[i] > xs[i + 1] + EPS and Mi > c[i + 1] + 1:
            start = len(rs.segments)
            go_back_down(rs, st, i, Mi, c[i + 1])
            st.trails[i + 1] = rs.trajectory_since(start)
            st.i = i + 1
        elif below and xs[i] > xs[i + 1] + EPS:
            if Mi != c[i + 1] + 1:
                raise InvariantViolation(f"down-edge from fence {i} with counts {c[i]}, {c[i + 1]}")
            child = (i + 1, c[i + 1] + 1)
            if not _traverse_edge(rs, st, (i, Mi), child, "down"):
                return False
            c[i + 1] += 1
            xs[i + 1] = st.tree.posts[child].x
            st.trails[i + 1] = list(st.tree.edges[child].points)
            st.i = i + 1
        elif (i == 1 and Mi < M) or (i > 1 and (c[i - 1] > Mi + 1 or (c[i - 1] == Mi + 1 and xs[i - 1] <= xs[i] + EPS))):
            child = (i, Mi + 1)
            if not _traverse_edge(rs, st, (i, Mi), child, "up"):
                return False
            c[i] += 1
            xs[i] = st.tree.posts[child].x
            if i > 1:
                st.trails[i].extend(st.tree.edges[child].points[1:])
        elif below and Mi > c[i + 1] and (
                Mi == M or any(c[u] == Mi + 1 and xs[u] > xs[i + 1] + EPS for u in range(1, i))):
            start = len(rs.segments)
            go_down(rs, st, i, Mi, c[i + 1])
            st.trails[i + 1] = rs.trajectory_since(start)
            st.i = i + 1
        elif i == k and Mi == M:
            _at(rs, st.tree.post(k, M).center, "halt")
            return True
        else:
            if i == 1:
                raise InvariantViolation("no case applies at the top fence")
            if st.debug:
                check_ascent(st, i)
            with rs.tagged("backtrack"):
                rs.follow_path(st.trails.pop(i), reverse=True)
            st.i = i - 1
            _at(rs, st.last(i - 1).center, "ascent end")
        if st.debug:
            check_invariants(st)
        if on_post is not None:
            on_post(rs, st)


# ---------------------------------------------------------------- one search trip

def window_params(n: int, k: int, L_guess: float) -> tuple[int, float]:
    """Fence count M and the rung height tau for a window of half-height L_guess."""
    tau_nominal = L_guess / math.sqrt(n * k)
    M = k + math.ceil(2 * L_guess / tau_nominal - 1e-9)
    return M, 2 * L_guess / (M - k)


@dataclass
class SearchResult:
    groups: list[GroupResult]
    trip_length: float
    composed_path: list[Point]
    L_guess: float
    tau: float
    M: int
    restarts: int
    final_transition: Optional[list[Point]]
    robot: RobotState
    # segment ranges of the retraces to s before each window doubling
    restart_spans: list[tuple[int, int]] = field(default_factory=list)

    @property
    def fences(self) -> int:
        return sum(g.k for g in self.groups if not g.halted_at_wall)


def compose_path(groups: Sequence[GroupResult], final_transition: Optional[Sequence[Point]] = None) -> list[Point]:
    """Concatenate each group's transition and tree crossing path into one s-to-wall polyline."""
    pts: list[Point] = []
    for g in groups:
        pts.extend(g.transition)
        pts.extend(g.crossing_path)
    if final_transition is not None:
        pts.extend(final_transition)
    return simplify(pts) if pts else [Point(0.0, 0.0)]


def _group_result(rs, st, transition, t_len, odo0, totals0, taus0, done) -> GroupResult:
    costs = {t: rs.tag_totals.get(t, 0.0) - totals0.get(t, 0.0) for t in COST_TAGS}
    tree = st.tree
    if done:
        crossing = tree.path_from_root((st.k, st.M))
        dx = tree.delta_x()
    else:
        parent, pts = st.wall_edge
        crossing = tree.path_from_root(parent) + list(pts[1:])
        dx = rs.position.x - tree.root.x
    return GroupResult(tree, rs.odometer - odo0, dx, simplify(crossing), not done, costs,
                       transition, t_len, st.tau, st.L_guess, rs.tau_paths[taus0:])


def search_trip(scene: Scene, k: int, L_known: Optional[float] = None, *, debug: bool = True,
                budget: int = 10 ** 8, on_checkpoint: Optional[Callable] = None) -> SearchResult:
    """One searching trip from s to the wall.

    The window starts at half-height ``L_known`` (default n) and doubles, with
    a retrace to s, whenever more than ceil(sqrt(n/k)) groups are needed.
    ``on_checkpoint(robot, short_path)`` is called whenever the robot stands
    on a post; ``short_path`` builds a known path from s to that post.
    """
    n = scene.n
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    rs = RobotState(scene, budget=budget, debug=debug)
    L_guess = float(L_known) if L_known is not None else float(n)
    max_groups = math.ceil(math.sqrt(n / k) - 1e-12)
    restarts = 0
    spans: list[tuple[int, int]] = []
    while True:
        M, tau = window_params(n, k, L_guess)
        attempt_start = len(rs.segments)
        groups: list[GroupResult] = []
        final_transition = None
        while True:
            if len(groups) >= max_groups:
                break
            t0 = len(rs.segments)
            odo_t = rs.odometer
            with rs.tagged("transition"):
                outcome = rs.greedy_path(RIGHT, DOWN, stop_at_y_below(-L_guess))
                if outcome != "wall":
                    tp = rs.tau_path(tau, -L_guess, 0)
            transition = simplify(rs.trajectory_since(t0))
            if outcome == "wall" or tp.wall:
                final_transition = transition
                break
            st = SearchState.start(tp.post, k, M, tau, L_guess, debug)
            prefix = compose_path(groups) + transition if groups else transition

            def checkpoint(r, s, prefix=prefix):
                if on_checkpoint is not None:
                    idx = (s.i, s.counts[s.i])
                    on_checkpoint(r, lambda: simplify(prefix + s.tree.path_from_root(idx)))

            checkpoint(rs, st)
            odo0, totals0, taus0 = rs.odometer, dict(rs.tag_totals), len(rs.tau_paths)
            done = find_fence_tree(rs, st, checkpoint)
            groups.append(_group_result(rs, st, transition, odo0 - odo_t, odo0, totals0, taus0, done))
            if not done:
                break
        if rs.at_wall:
            return SearchResult(groups, rs.odometer, compose_path(groups, final_transition), L_guess,
                                tau, M, restarts, final_transition, rs, spans)
        retrace_start = len(rs.segments)
        with rs.tagged("search"):
            rs.follow_path(rs.trajectory_since(attempt_start), reverse=True)
        spans.append((retrace_start, len(rs.segments)))
        if on_checkpoint is not None:
            on_checkpoint(rs, lambda: [Point(0.0, 0.0)])
        L_guess *= 2
        restarts += 1


# ---------------------------------------------------------------- strategies

def _replay(scene: Scene, path: Sequence[Point], trip: int) -> RobotState:
    rs = RobotState(scene, position=path[0], trip=trip)
    with rs.tagged("follow"):
        rs.follow_path(path)
    return rs


def run_cumulative(scene: Scene, k: int, L: Optional[float] = None, *, compute_L: bool = True,
                   L_known: Optional[float] = None, debug: bool = True, scene_id: str = "",
                   keep_trajectories: bool = False):
    """Search on trip 1, then walk the composed path on trips 2..k (even trips reversed)."""
    from .oracle import shortest_wall_path
    from .report import RunReport
    n = scene.n
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    res = search_trip(scene, k, L_known, debug=debug)
    path = res.composed_path
    lengths = [res.trip_length]
    trajectories = [res.robot.trajectory()] if keep_trajectories else []
    if k > 1:
        fwd = _replay(scene, path, 2)
        back = _replay(scene, list(reversed(path)), 2)
        for t in range(2, k + 1):
            walker = back if t % 2 == 0 else fwd
            lengths.append(walker.odometer)
            if keep_trajectories:
                trajectories.append(walker.trajectory())
    if L is None and compute_L:
        L = shortest_wall_path(scene).length
    rep = RunReport(scene_id, n, k, "cumulative", lengths, L,
                    groups=len(res.groups), fences=res.fences,
                    delta_x=[g.delta_x for g in res.groups])
    rep.extra.update(search=res, path=path, path_length=path_length(path),
                     trajectories=trajectories, touched=set(res.robot.touched),
                     L_guess=res.L_guess, tau=res.tau, M=res.M, restarts=res.restarts)
    return rep


@dataclass
class Checkpoint:
    odometer: float
    segment: int
    short_path: Callable[[], list[Point]]


@dataclass
class PlanState:
    """Progress of the incremental strategy between trips."""
    trips_done: int
    known_path: list[Point]
    known_length: float
    search_k: int = 1
    search: Optional[SearchResult] = None
    checkpoints: list[Checkpoint] = field(default_factory=list)
    frontier: int = 0
    quota: float = 0.0
    epoch_start: int = 1
    prev_search_length: float = 0.0
    prev_search_k: int = 1
    final: bool = False


def _shadow_search(scene: Scene, k: int, debug: bool) -> tuple[SearchResult, list[Checkpoint]]:
    cps = [Checkpoint(0.0, 0, lambda: [Point(0.0, 0.0)])]

    def record(r: RobotState, short):
        cps.append(Checkpoint(r.odometer, len(r.segments), short))

    res = search_trip(scene, k, debug=debug, on_checkpoint=record)
    return res, cps


def _branch_point(walked: Sequence[Point], known: Sequence[Point]) -> tuple[int, list[Point]]:
    """Split two paths from s where they stop sharing a common prefix.

    Returns the part of ``walked`` after the branch point (to be retraced)
    and the part of ``known`` from the branch point on.
    """
    j = 0
    while j + 1 < min(len(walked), len(known)) and walked[j + 1] == known[j + 1]:
        j += 1
    b = walked[j]
    if j + 1 < len(walked) and j + 1 < len(known):
        a, p, q = walked[j], walked[j + 1], known[j + 1]
        same_x = abs(p.x - a.x) <= EPS and abs(q.x - a.x) <= EPS and (p.y - a.y) * (q.y - a.y) > 0
        same_y = abs(p.y - a.y) <= EPS and abs(q.y - a.y) <= EPS and (p.x - a.x) * (q.x - a.x) > 0
        if same_x:
            b = Point(a.x, a.y + math.copysign(min(abs(p.y - a.y), abs(q.y - a.y)), p.y - a.y))
        elif same_y:
            b = Point(a.x + math.copysign(min(abs(p.x - a.x), abs(q.x - a.x)), p.x - a.x), a.y)
    back = simplify([b] + list(walked[j + 1:]))
    rest = simplify([b] + list(known[j + 1:]))
    return back, rest


def run_incremental(scene: Scene, T: int, L: Optional[float] = None, *, compute_L: bool = True,
                    debug: bool = True, scene_id: str = "", spread: float = 4.0,
                    keep_trajectories: bool = False):
    """Trip-by-trip strategy whose later trips improve on earlier ones.

    Trip 1 searches with one fence per group and its composed path becomes the
    known path. Each epoch then runs a virtual search with twice as many
    fences as trips done, advancing it by a quota per trip: the robot walks a
    known path to the search frontier, extends the search, retraces its own
    steps to where they branched off the known path and finishes along it. When the virtual search
    reaches the wall its composed path replaces the known path.

    The per-trip quota is the previous search's length scaled linearly to the
    new fence count, divided by ``spread`` times the trips done; it needs no
    knowledge of the optimal length. If the epoch is still running after that
    many trips the quota doubles, and again after each further such stretch.
    """
    from .oracle import shortest_wall_path
    from .report import RunReport
    n = scene.n
    if not 1 <= T <= n:
        raise ValueError(f"need 1 <= T <= n, got T={T}, n={n}")
    first = search_trip(scene, 1, debug=debug)
    lengths = [first.trip_length]
    trajectories = [first.robot.trajectory()] if keep_trajectories else []
    plan = PlanState(1, first.composed_path, path_length(first.composed_path),
                     prev_search_length=first.trip_length, prev_search_k=1)
    epochs = [{"start": 1, "k": 1, "path_length": plan.known_length}]
    searches = [first]
    phase_log = [("search", first.trip_length, 0.0)]
    schedule = [{"kind": "first", "k": 1}]
    follow_cache: dict[int, float] = {}
    while plan.trips_done < T:
        i = plan.trips_done
        if plan.search is None and not plan.final:
            plan.search_k = min(2 * i, n)
            plan.search, plan.checkpoints = _shadow_search(scene, plan.search_k, debug)
            plan.frontier = 0
            plan.quota = (plan.prev_search_length * plan.search_k / plan.prev_search_k
                          / (spread * i))
            plan.epoch_start = i
        rs = RobotState(scene, trip=i + 1)
        searched = 0.0
        if plan.final:
            key = id(plan.known_path)
            if key not in follow_cache:
                with rs.tagged("follow"):
                    rs.follow_path(plan.known_path)
                follow_cache[key] = rs.odometer
            lengths.append(follow_cache[key])
            phase_log.append(("follow", 0.0, follow_cache[key]))
            schedule.append({"kind": "follow", "known_k": plan.prev_search_k})
            plan.trips_done += 1
            continue
        for a, b in plan.search.restart_spans:
            if plan.checkpoints[plan.frontier].segment == a:
                plan.frontier = next(j for j in range(plan.frontier + 1, len(plan.checkpoints))
                                     if plan.checkpoints[j].segment >= b)
        cp = plan.checkpoints[plan.frontier]
        with rs.tagged("follow"):
            rs.follow_path(cp.short_path())
        # the estimate may be low; double the quota each time the epoch overruns its plan
        overruns = (i - plan.epoch_start) // max(1, math.ceil(spread * plan.epoch_start))
        target = cp.odometer + plan.quota * 2 ** overruns
        schedule.append({"kind": "search", "epoch_start": plan.epoch_start, "overruns": overruns,
                         "k": plan.search_k, "known_k": plan.prev_search_k})
        nxt = next((j for j in range(plan.frontier + 1, len(plan.checkpoints))
                    if plan.checkpoints[j].odometer >= target - EPS), None)
        segs = plan.search.robot.segments
        end_seg = plan.checkpoints[nxt].segment if nxt is not None else len(segs)
        # a window restart sends the search back to s, where the next trip starts anyway
        for a, b in plan.search.restart_spans:
            if cp.segment <= a < end_seg:
                end_seg = a
                nxt = next(j for j in range(plan.frontier + 1, len(plan.checkpoints))
                           if plan.checkpoints[j].segment >= b)
                break
        chunk = [segs[cp.segment].a] + [s.b for s in segs[cp.segment:end_seg]] if end_seg > cp.segment else []
        resumed = rs.odometer
        with rs.tagged("search"):
            rs.follow_path(chunk)
        searched = rs.odometer
        schedule[-1]["chunk"] = searched - resumed
        if nxt is None:
            res = plan.search
            searches.append(res)
            plan.known_path = res.composed_path
            plan.known_length = path_length(res.composed_path)
            plan.prev_search_length = res.trip_length
            plan.prev_search_k = plan.search_k
            epochs.append({"start": i + 1, "k": plan.search_k, "path_length": plan.known_length})
            plan.final = plan.search_k >= n
            plan.search = None
            plan.checkpoints = []
        else:
            plan.frontier = nxt
            walked = simplify(rs.trajectory())
            back, known_rest = _branch_point(walked, plan.known_path)
            with rs.tagged("follow"):
                rs.follow_path(back, reverse=True)
                rs.follow_path(known_rest)
        if not rs.at_wall:
            raise RobotFault(f"trip {i + 1} did not end at the wall")
        lengths.append(rs.odometer)
        phase_log.append(("search", searched, rs.odometer - searched))
        if keep_trajectories:
            trajectories.append(rs.trajectory())
        plan.trips_done += 1
    if L is None and compute_L:
        L = shortest_wall_path(scene).length
    rep = RunReport(scene_id, n, T, "incremental", lengths, L, groups=len(first.groups),
                    fences=first.fences, delta_x=[g.delta_x for g in first.groups])
    # every obstacle any search touched; a superset of what the walked chunks used
    touched = set()
    for res in searches + ([plan.search] if plan.search is not None else []):
        touched |= res.robot.touched
    rep.extra.update(search=first, searches=searches, path=plan.known_path,
                     path_length=plan.known_length, epochs=epochs,
                     phases=phase_log, schedule=schedule, spread=spread,
                     trajectories=trajectories, touched=touched)
    if L:
        rep.extra["C_measured"] = max(r / L / math.sqrt(n / (t + 1)) for t, r in enumerate(lengths))
    return rep


def envelope(values: Sequence[float]) -> list[float]:
    """Maximum of ``values[i-1]`` over each dyadic trip window [2^w, 2^(w+1))."""
    out = []
    w = 1
    while w <= len(values):
        out.append(max(values[w - 1:min(2 * w, len(values) + 1) - 1]))
        w *= 2
    return out
