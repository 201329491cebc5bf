"""Command line: scene generation, single runs, the oracle and benchmark sweeps."""
from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional, Sequence

from .scene import BrickScene, ExplicitScene, SceneError, emit_scene, gen_bricks, gen_random, parse_scene

OK, CHECK_FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _write(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)


def _load_scene(path: str):
    try:
        with open(path) as fh:
            return parse_scene(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read scene: {exc}") from exc
    except SceneError as exc:
        raise UsageError(f"bad scene file {path}: {exc}") from exc


def cmd_gen(a) -> int:
    if a.n is None or a.n < 1:
        raise UsageError("--n must be a positive integer")
    if a.kind == "random":
        sc = gen_random(a.n, a.density, seed=a.seed)
    elif a.kind == "bricks":
        sc = gen_bricks(a.n, a.h)
    else:
        from .adversary import build_adversary
        if a.k is None or not 1 <= a.k <= a.n:
            raise UsageError("adversary needs 1 <= --k <= --n")
        h = math.sqrt(a.n) if a.h is None else a.h
        sc = build_adversary(a.n, a.k, h).reduced
    _write(emit_scene(sc), a.out)
    return OK


def _bound_report(rep, n: int):
    from .bounds import BoundReport, check_bounds
    out = BoundReport()
    for res in rep.extra.get("searches", [rep.extra["search"]]):
        out.checks.extend(check_bounds(res.groups, n=n).checks)
    return out


def cmd_run(a) -> int:
    from .navigate import run_cumulative, run_incremental
    from .oracle import shortest_wall_path
    scene = _load_scene(a.scene)
    if not 1 <= a.k <= scene.n:
        raise UsageError(f"--k must satisfy 1 <= k <= n (k={a.k}, n={scene.n})")
    if a.svg and not isinstance(scene, ExplicitScene):
        raise UsageError("--svg needs an explicit scene")
    oracle = shortest_wall_path(scene) if isinstance(scene, ExplicitScene) else None
    L = oracle.length if oracle else None
    fn = run_cumulative if a.mode == "cumulative" else run_incremental
    rep = fn(scene, a.k, L, compute_L=False, scene_id=a.scene, keep_trajectories=bool(a.svg))
    code = OK
    bounds = None
    if a.check_bounds:
        bounds = _bound_report(rep, scene.n)
        for c in bounds.violations:
            print(f"bound violated: {c.name} group {c.group}: {c.value:.6g} > {c.bound:.6g}", file=sys.stderr)
        if not bounds.ok:
            code = CHECK_FAILED
    print(f"trips={len(rep.trip_lengths)} total={rep.total!r} L={L!r} rho={rep.rho!r} "
          f"groups={rep.groups} fences={rep.fences}")
    if a.report:
        doc = {
            "scene_id": rep.scene_id, "n": rep.n, "k": rep.k, "mode": rep.mode,
            "trip_lengths": rep.trip_lengths, "L": rep.L, "rho": rep.rho, "rho_i": rep.rho_i,
            "groups": rep.groups, "fences": rep.fences, "delta_x": rep.delta_x,
            "path_length": rep.extra.get("path_length"),
        }
        if bounds is not None:
            doc["bounds"] = {"ok": bounds.ok, "violations": len(bounds.violations),
                             "min_slack": bounds.min_slack()}
        _write(json.dumps(doc, indent=2, sort_keys=True) + "\n", a.report)
    if a.svg:
        from .fences import fences_of
        from .svg import render_svg
        fences = [f for g in rep.extra["search"].groups if not g.halted_at_wall for f in fences_of(g.tree)]
        _write(render_svg(scene, rep.extra["trajectories"], fences,
                          oracle.vertices if oracle else None), a.svg)
    return code


def cmd_oracle(a) -> int:
    from .oracle import shortest_wall_path
    scene = _load_scene(a.scene)
    if isinstance(scene, BrickScene):
        raise UsageError("the oracle needs an explicit scene")
    print(repr(shortest_wall_path(scene).length))
    return OK


def cmd_bench(a) -> int:
    from .bench import Grid, bench
    try:
        grid = Grid.load(a.grid_file)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"bad grid file: {exc}") from exc
    if max(grid.k) > min(grid.n):
        raise UsageError(f"every k must be <= every n (k={max(grid.k)}, n={min(grid.n)})")
    res = bench(grid, workers=a.workers, check=not a.no_check)
    _write(res.csv_text(), a.out)
    summ = res.summary()
    if a.summary:
        _write(json.dumps(summ, indent=2, sort_keys=True) + "\n", a.summary)
    print(json.dumps(summ, sort_keys=True), file=sys.stderr)
    failed = summ["constant_violations"] or summ["bound_violations"] or summ["tree_mismatches"]
    if grid.mode == "cumulative" and summ["slope"] is not None and summ["fit_cells"] >= 20:
        failed = failed or summ["slope"] > 0.6
    return CHECK_FAILED if failed else OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fencenav", description=__doc__)
    sub = p.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="write a scene file")
    g.add_argument("kind", nargs="?", choices=["random", "bricks", "adversary"])
    g.add_argument("--kind", dest="kind_opt", choices=["random", "bricks", "adversary"])
    g.add_argument("--n", type=int)
    g.add_argument("--k", type=int)
    g.add_argument("--h", type=float)
    g.add_argument("--density", type=float, default=0.2)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(fn=cmd_gen)

    r = sub.add_parser("run", help="run a strategy on a scene")
    r.add_argument("--scene", required=True)
    r.add_argument("--k", type=int, required=True, help="trips")
    r.add_argument("--mode", choices=["cumulative", "incremental"], default="cumulative")
    r.add_argument("--report", help="write a JSON report here")
    r.add_argument("--svg", help="write an SVG picture here")
    r.add_argument("--check-bounds", action="store_true")
    r.set_defaults(fn=cmd_run)

    o = sub.add_parser("oracle", help="print the shortest s-to-wall distance")
    o.add_argument("--scene", required=True)
    o.set_defaults(fn=cmd_oracle)

    b = sub.add_parser("bench", help="run a benchmark grid and write CSV")
    b.add_argument("--grid-file", required=True)
    b.add_argument("--out")
    b.add_argument("--summary", help="write the fit and check summary as JSON")
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--no-check", action="store_true", help="skip bound and tree checks")
    b.set_defaults(fn=cmd_bench)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if a.cmd == "gen":
        a.kind = a.kind or a.kind_opt
        if a.kind is None:
            print("fencenav gen: a scene kind is required", file=sys.stderr)
            return USAGE
    try:
        return a.fn(a)
    except UsageError as exc:
        print(f"fencenav {a.cmd}: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
