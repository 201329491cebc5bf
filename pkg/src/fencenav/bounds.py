"""Per-group cost bounds checked against a run's ledgers."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .scene import path_length

TOL = 1e-6


@dataclass(frozen=True)
class BoundCheck:
    name: str
    group: int
    value: float
    bound: float

    @property
    def ok(self) -> bool:
        return self.value <= self.bound + TOL * max(1.0, self.bound)

    @property
    def slack(self) -> float:
        return self.bound - self.value


@dataclass
class BoundReport:
    checks: list[BoundCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def violations(self) -> list[BoundCheck]:
        return [c for c in self.checks if not c.ok]

    def by_name(self, name: str) -> list[BoundCheck]:
        return [c for c in self.checks if c.name == name]

    def min_slack(self) -> dict[str, float]:
        out: dict[str, float] = {}
        for c in self.checks:
            out[c.name] = min(out.get(c.name, math.inf), c.slack)
        return out


def check_bounds(groups: Sequence, L_guess: Optional[float] = None, n: Optional[int] = None) -> BoundReport:
    """Compare each group's ledgers with the per-procedure distance bounds.

    ``L_guess`` overrides the window half-height recorded on each group.
    With ``n`` given, the fence count of the window is checked as well.
    Nothing in ``groups`` is modified.
    """
    rep = BoundReport()
    add = rep.checks.append
    for gi, g in enumerate(groups, 1):
        L = g.L_guess if L_guess is None else L_guess
        k, tau, dx = g.k, g.tau, g.delta_x
        c = g.costs
        edges = c.get("edge-up", 0.0) + c.get("edge-down", 0.0)
        godown = c.get("godown", 0.0)
        gbd = c.get("gobackdown", 0.0)
        back = c.get("backtrack", 0.0)
        add(BoundCheck("tree-path", gi, g.crossing_length, 4 * L + 3 * tau * dx))
        add(BoundCheck("edges", gi, edges, k * (3 * L + 3 * tau * dx)))
        add(BoundCheck("godown", gi, godown, k * (9 * L + 9 * tau * dx)))
        add(BoundCheck("gobackdown", gi, gbd, k * (18 * L + 19 * tau * dx)))
        add(BoundCheck("backtrack", gi, back, edges + godown + gbd))
        add(BoundCheck("group-total", gi, g.walked, k * (60 * L + 62 * tau * dx)))
        for tp in g.tau_paths:
            add(BoundCheck("tau-path", gi, tp.length, tp.dx + 2 * tau * tp.dx))
    if n is not None and groups:
        by_window: dict[float, int] = {}
        for g in groups:
            if not g.halted_at_wall:
                by_window[g.L_guess] = by_window.get(g.L_guess, 0) + g.k
        k = groups[0].k
        for L, count in sorted(by_window.items()):
            add(BoundCheck("fences", 0, count, math.sqrt(n * k) + k))
    return rep


# folded totals: a k-fence search walks at most SEARCH_FOLD * L * sqrt(n*k) and
# its composed path is at most PATH_FOLD * L * sqrt(n/k) long
SEARCH_FOLD = 126.0
PATH_FOLD = 10.0


def incremental_trip_bounds(schedule: Sequence[dict], n: int, L: float, spread: float = 4.0) -> list[float]:
    """Per-trip length bounds of an incremental run, from the folded totals.

    A search trip walks to the frontier, extends the search by its quota,
    retraces both and follows the known path, so it is bounded by twice the
    partial path plus twice the quota plus the known path. The quota bound
    uses the folded total of the previous search in place of its length.
    """
    out = []
    for t in schedule:
        if t["kind"] == "first":
            out.append(SEARCH_FOLD * L * math.sqrt(n))
        elif t["kind"] == "follow":
            out.append(PATH_FOLD * L * math.sqrt(n / t["known_k"]))
        else:
            k, kp, i0 = t["k"], t["known_k"], t["epoch_start"]
            quota = SEARCH_FOLD * L * math.sqrt(n * kp) * (k / kp) / (spread * i0) * 2 ** t["overruns"]
            out.append(2 * (PATH_FOLD * L * math.sqrt(n / k) + quota) + PATH_FOLD * L * math.sqrt(n / kp))
    return out


def check_incremental(report) -> tuple[BoundReport, float]:
    """Check every trip and search of an incremental run; returns the folded constant too.

    The folded constant is the largest per-trip bound in units of ``L*sqrt(n/i)``,
    so a run with every trip inside its bound has measured constant at most this.
    """
    n, L = report.n, report.L
    ex = report.extra
    bounds = incremental_trip_bounds(ex["schedule"], n, L, ex.get("spread", 4.0))
    rep = BoundReport()
    for i, (r, b) in enumerate(zip(report.trip_lengths, bounds), 1):
        rep.checks.append(BoundCheck("trip", i, r, b))
    for j, (res, epoch) in enumerate(zip(ex["searches"], ex["epochs"])):
        k = epoch["k"]
        rep.checks.append(BoundCheck("search-fold", j, res.trip_length, SEARCH_FOLD * L * math.sqrt(n * k)))
        rep.checks.append(BoundCheck("path-fold", j, path_length(res.composed_path), PATH_FOLD * L * math.sqrt(n / k)))
    folded = max(b / (L * math.sqrt(n / i)) for i, b in enumerate(bounds, 1))
    return rep, folded
