"""Command-line interface: ``polyrealize <command> ...``.

Exit codes: 0 success, 1 mathematical failure (not realized, not verified),
2 bad input or usage.
"""

from __future__ import annotations

import argparse
import math
import multiprocessing as mp
import os
import statistics
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from typing import Dict, List, Optional, Sequence

from . import __version__
from .functional import FunctionalMode, evaluate
from .geometry import GeometryError
from .io import dumps_report, format_coordinates, format_off, parse_coordinates
from .search import RunReport, SearchConfig, SearchError, run_convexify, run_realize
from .surface import (
    GENERATORS,
    SurfaceError,
    Triangulation,
    format_triangulation,
    generate,
    heawood_min_vertices,
    is_neighborly,
    parse_triangulation,
    validate_surface,
)
from .verify import convexity_certificate, verify_realization

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INPUT = 2

JOBS_ENV = "POLYREALIZE_JOBS"


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _load_surface(path: str) -> Triangulation:
    try:
        return parse_triangulation(_read(path))
    except SurfaceError as exc:
        raise InputError(f"{path}: {exc}") from None


def _load_coords(path: str, n: int):
    try:
        return parse_coordinates(_read(path), n)
    except SurfaceError as exc:
        raise InputError(f"{path}: {exc}") from None


# -- manifest --------------------------------------------------------------------------


def aggregate(reports: Sequence[Dict]) -> Dict:
    """Success count and mean/std of log(steps) over successful runs."""
    logs = [math.log(max(r["steps_total"], 1)) for r in reports if r["success"]]
    return {
        "runs": len(reports),
        "success_count": sum(1 for r in reports if r["success"]),
        "log_steps_mean": statistics.fmean(logs) if logs else None,
        "log_steps_std": statistics.pstdev(logs) if len(logs) > 1 else (0.0 if logs else None),
    }


def make_manifest(command: str, inputs: List[str], cfg: SearchConfig,
                  reports: Sequence[RunReport]) -> Dict:
    rows = [r.to_dict() for r in reports]
    echo = cfg.__dict__.copy()
    echo.pop("seed")
    return {
        "command": command,
        "inputs": inputs,
        "config": echo,
        "reports": rows,
        "aggregate": aggregate(rows),
        "version": __version__,
    }


# -- multi-seed driver ---------------------------------------------------------------

_best = None  # shared lowest successful seed, set in worker processes


def _init_worker(shared):
    global _best
    _best = shared


def _worker(args):
    t, cfg, instance, init_coords = args
    stop = (lambda: _best.value < cfg.seed) if _best is not None else None
    report = run_realize(t, cfg, instance, init_coords=init_coords, should_stop=stop)
    if report.success and _best is not None:
        with _best.get_lock():
            if cfg.seed < _best.value:
                _best.value = cfg.seed
    return report


def default_jobs() -> int:
    env = os.environ.get(JOBS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise InputError(f"{JOBS_ENV} must be an integer") from None
    return os.cpu_count() or 1


def run_seeds(t: Triangulation, cfg: SearchConfig, seeds: Sequence[int], instance: str,
              init_coords=None, jobs: int = 1) -> List[RunReport]:
    """Run one search per seed and keep reports up to the first success in
    seed order. Output is the same whatever the number of jobs."""
    tasks = [(t, replace(cfg, seed=s), instance, init_coords if i == 0 else None)
             for i, s in enumerate(seeds)]
    if jobs <= 1 or len(tasks) == 1:
        out = []
        for task in tasks:
            rep = run_realize(task[0], task[1], task[2], init_coords=task[3])
            out.append(rep)
            if rep.success:
                break
        return out

    ctx = mp.get_context("spawn")
    shared = ctx.Value("Q", 2 ** 64 - 1)
    with ProcessPoolExecutor(max_workers=jobs, mp_context=ctx,
                             initializer=_init_worker, initargs=(shared,)) as pool:
        futures = [pool.submit(_worker, task) for task in tasks]
        out = []
        for fut in futures:
            rep = fut.result()
            out.append(rep)
            if rep.success:
                for other in futures:
                    other.cancel()
                break
    return out


# -- commands ----------------------------------------------------------------------------


def cmd_info(args) -> int:
    t = _load_surface(args.input)
    info = validate_surface(t)
    genus = info.genus if info.genus is not None else "-"
    kind = "orientable" if info.orientable else "non-orientable"
    print(f"f={info.f_vector} chi={info.euler_characteristic} genus={genus} {kind} "
          f"neighborly={'yes' if is_neighborly(t) else 'no'} "
          f"heawood_min={heawood_min_vertices(info.euler_characteristic)}".replace(", ", ","))
    return EXIT_OK


def cmd_eval(args) -> int:
    t = _load_surface(args.input)
    validate_surface(t)
    coords = _load_coords(args.coords, t.n)
    mode = FunctionalMode(args.mode, args.extended, args.normalized)
    value, _ = evaluate(t, coords, mode)
    print(f"value={value.value:.6f} zero={'true' if value.exactly_zero else 'false'} "
          f"improper={value.improper_pair_count}")
    return EXIT_OK


def _search_config(args, **extra) -> SearchConfig:
    kw = dict(
        initial_cube=args.cube,
        bounding_box=args.box,
        step_budget_per_restart=args.steps,
        max_restarts=args.restarts,
        seed=args.seed,
        slide_to_limit=args.slide,
        swap_pairs_on_minimum=args.swap,
        normalized_objective=args.normalized,
        pool_init=args.pool_init,
    )
    kw.update(extra)
    try:
        return SearchConfig(**kw)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _write_outputs(args, t, coords, manifest) -> None:
    if coords is not None:
        if args.out:
            _write(args.out, format_coordinates(coords))
        if args.off:
            _write(args.off, format_off(t, coords))
    if args.report:
        _write(args.report, dumps_report(manifest))


def cmd_realize(args) -> int:
    t = _load_surface(args.input)
    info = validate_surface(t)
    if not info.orientable:
        raise InputError("non-orientable closed surfaces have no embedding in R^3, "
                         "so no polyhedral realization exists")
    cfg = _search_config(args, success_mode=args.success, objective_base=args.objective)
    init = _load_coords(args.init_coords, t.n) if args.init_coords else None
    if init is not None and any(not isinstance(x, int) for p in init for x in p):
        raise InputError("initial coordinates must be integers")
    seeds = [args.seed + k for k in range(args.seeds)]
    jobs = args.jobs if args.jobs is not None else default_jobs()
    try:
        reports = run_seeds(t, cfg, seeds, args.input, init, jobs)
    except SearchError as exc:
        raise InputError(str(exc)) from None
    manifest = make_manifest("realize", [args.input], cfg, reports)
    winner = reports[-1] if reports and reports[-1].success else None
    _write_outputs(args, t, winner.final_coordinates if winner else None, manifest)
    if winner:
        print(f"realized with seed {winner.config['seed']} after {winner.steps_total} steps")
        if not args.out:
            sys.stdout.write(format_coordinates(winner.final_coordinates))
        return EXIT_OK
    print("no realization found within the step budget")
    return EXIT_FAIL


def cmd_verify(args) -> int:
    t = _load_surface(args.input)
    validate_surface(t)
    coords = _load_coords(args.coords, t.n)
    cert = verify_realization(t, coords)
    ok = cert.verdict
    if not cert.general_position:
        print(f"not in general position: {cert.general_position.describe()}")
    for (f, g), seg in cert.improper_pairs:
        print(f"improper pair {f} {g}: {seg.kind}")
    print(f"REALIZATION: {'yes' if ok else 'no'}")
    if args.convex and ok:
        conv = convexity_certificate(t, coords)
        print(f"CONVEX: {'yes' if conv.verdict else 'no'}")
        ok = conv.verdict
    return EXIT_OK if ok else EXIT_FAIL


def cmd_convexify(args) -> int:
    t = _load_surface(args.input)
    info = validate_surface(t)
    if not info.orientable or info.genus != 0:
        raise InputError("convexify needs a triangulated 2-sphere")
    cfg = _search_config(args)
    try:
        report, coords = run_convexify(t, cfg, args.input)
    except SearchError as exc:
        print(f"convexification failed: {exc}")
        return EXIT_FAIL
    manifest = make_manifest("convexify", [args.input], cfg, [report])
    _write_outputs(args, t, coords, manifest)
    if coords is None:
        print("no convex realization found within the step budget")
        return EXIT_FAIL
    print(f"convex realization after {report.steps_total} steps")
    if not args.out:
        sys.stdout.write(format_coordinates(coords))
    return EXIT_OK


def cmd_gen(args) -> int:
    try:
        t = generate(args.kind, *args.params)
    except TypeError:
        raise InputError(f"wrong number of parameters for {args.kind}") from None
    text = format_triangulation(t)
    if args.output:
        _write(args.output, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- parser --------------------------------------------------------------------------------


def _search_flags(p: argparse.ArgumentParser, steps: int) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--steps", type=int, default=steps, help="step budget per restart")
    p.add_argument("--restarts", type=int, default=None, help="max restarts (default: unlimited)")
    p.add_argument("--box", type=int, default=250, help="bounding box side")
    p.add_argument("--cube", type=int, default=50, help="initial cube side")
    p.add_argument("--slide", action="store_true", help="slide accepted moves to the limit")
    p.add_argument("--swap", action="store_true", help="swap vertex pairs at local minima")
    p.add_argument("--normalized", action="store_true", help="divide by total edge length")
    p.add_argument("--pool-init", type=int, default=0, metavar="K",
                   help="start from the best of K random placements")
    p.add_argument("--out", help="coordinate file to write")
    p.add_argument("--off", help="OFF mesh to write")
    p.add_argument("--report", help="JSON report to write")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polyrealize",
                                     description="Realize triangulated surfaces with integer coordinates.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="f-vector, genus, orientability")
    p.add_argument("input")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("eval", help="evaluate the intersection segment functional")
    p.add_argument("input")
    p.add_argument("coords")
    p.add_argument("--mode", choices=["paper", "strict", "disjoint"], default="paper")
    p.add_argument("--extended", action="store_true")
    p.add_argument("--normalized", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("realize", help="search for a realization")
    p.add_argument("input")
    _search_flags(p, 5_400_000)
    p.add_argument("--seeds", type=int, default=1, help="number of consecutive seeds")
    p.add_argument("--jobs", type=int, default=None,
                   help=f"parallel searches (default: {JOBS_ENV} or CPU count)")
    p.add_argument("--init-coords", help="start the first search from these coordinates")
    p.add_argument("--success", choices=["strict", "paper"], default="strict")
    p.add_argument("--objective", choices=["paper", "disjoint"], default="paper")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("verify", help="exact realization check")
    p.add_argument("input")
    p.add_argument("coords")
    p.add_argument("--convex", action="store_true", help="also check convex position")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("convexify", help="convex realization of a 2-sphere")
    p.add_argument("input")
    _search_flags(p, 1_000_000)
    p.set_defaults(func=cmd_convexify)

    p = sub.add_parser("gen", help="write a generated triangulation")
    p.add_argument("kind", choices=sorted(GENERATORS))
    p.add_argument("params", type=int, nargs="*")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("seeds", "jobs"):
        if getattr(args, name, None) is not None and getattr(args, name) < 1:
            parser.error(f"--{name} must be at least 1")
    try:
        return args.func(args)
    except (InputError, SurfaceError, GeometryError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
