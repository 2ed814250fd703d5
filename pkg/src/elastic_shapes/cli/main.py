"""Command-line interface.

Verbs: ``lift``, ``dist``, ``geodesic``, ``baseline``, ``bench``, ``gen``.
Exit status is 0 on success, 1 on error and 2 when an optimization stopped
before meeting its tolerance (results are still written).
"""

import argparse
import json
import os
import sys

import numpy as np

from ..errors import ShapeError
from ..geo_path import geodesic_sweep
from ..homog import PDSM, DiscreteManifoldCurve, Sphere, lift
from ..register import QUOTIENTS, AlignOptions, align
from . import bench, generate, svg
from .euclidean import flat_align, flat_sweep
from .io import (
    ConstraintViolation,
    Euclidean,
    EuclideanCurve,
    ParseError,
    detect_format,
    emit,
    h2_to_pdsm,
    ingest,
    parse_space,
    pdsm_to_h2,
    space_name,
)

EXIT_OK, EXIT_ERROR, EXIT_NOT_CONVERGED = 0, 1, 2


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _dump(doc, out):
    text = json.dumps(doc, indent=2, sort_keys=True, default=_jsonable) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _options(args):
    return AlignOptions(dp_resolution=args.dp_res, kopt=args.kopt or "auto", symmetric=args.symmetric)


def _default_format(space):
    if isinstance(space, Sphere) and space.n == 2:
        return "csv_latlon"
    if isinstance(space, PDSM) and space.n > 2:
        return "json_spd"
    return "csv_xy"


def _extension(fmt):
    return ".json" if fmt == "json_spd" else ".csv"


# -- verbs


def cmd_lift(args):
    space = parse_space(args.space)
    if isinstance(space, Euclidean):
        raise ConstraintViolation("lifting needs a homogeneous space, not r:<n>")
    beta = ingest(args.file, space, args.format)
    alpha = lift(beta).curve
    pair = lift(beta).srv()
    _dump(
        {
            "space": space_name(space),
            "samples": len(beta.points),
            "lift": alpha.samples,
            "start": pair.start,
            "q_breaks": pair.q.breaks,
            "q_values": pair.q.values,
        },
        args.out,
    )
    return EXIT_OK


def _gamma_doc(gamma):
    return {"t": gamma.t, "s": gamma.s}


def cmd_dist(args):
    space = parse_space(args.space)
    b1 = ingest(args.file1, space, args.format)
    b2 = ingest(args.file2, space, args.format)
    if isinstance(space, Euclidean):
        res = flat_align(
            b1,
            b2,
            dp_resolution=args.dp_res,
            translation_invariant=args.quotient in ("mod-g", "shape-mod-g"),
            reparametrize=args.quotient in ("shape", "shape-mod-g"),
        )
        _dump(
            {
                "space": space_name(space),
                "quotient": args.quotient,
                "distance": res.distance,
                "gamma": _gamma_doc(res.gamma),
                "converged": True,
            },
            args.out,
        )
        return EXIT_OK
    res = align(b1, b2, args.quotient, _options(args))
    _dump(
        {
            "space": space_name(space),
            "quotient": args.quotient,
            "distance": res.distance,
            "y_opt": res.y_opt,
            "gamma": _gamma_doc(res.gamma_opt),
            "iterations": res.iterations,
            "converged": res.converged,
            "history": res.history,
            "asymmetry": res.asymmetry,
        },
        args.out,
    )
    return EXIT_OK if res.converged else EXIT_NOT_CONVERGED


def cmd_geodesic(args):
    space = parse_space(args.space)
    fmt = args.format or detect_format(args.file1)
    b1 = ingest(args.file1, space, fmt)
    b2 = ingest(args.file2, space, fmt)
    out = args.out or "."
    os.makedirs(out, exist_ok=True)
    if isinstance(space, Euclidean):
        frames, res = flat_sweep(
            b1, b2, args.frames, dp_resolution=args.dp_res, translation_invariant=args.quotient.endswith("mod-g")
        )
        frames = [EuclideanCurve(space, f) for f in frames]
        distance, converged = res.distance, True
    else:
        sweep = geodesic_sweep(b1, b2, args.frames, args.quotient, _options(args))
        frames = sweep.frames
        distance, converged = sweep.length, sweep.alignment.converged
    names = []
    for j, f in enumerate(frames):
        name = f"frame_{j:03d}{_extension(fmt)}"
        emit(f, os.path.join(out, name), fmt, name=f"frame_{j:03d}")
        names.append(name)
    doc = {
        "space": space_name(space),
        "quotient": args.quotient,
        "distance": distance,
        "converged": converged,
        "frames": names,
        "points": [np.asarray(f.points) for f in frames],
    }
    _dump(doc, os.path.join(out, "geodesic.json"))
    if args.svg:
        svg.write_svg(frames, space, os.path.join(out, "geodesic.svg"))
    return EXIT_OK if converged else EXIT_NOT_CONVERGED


def cmd_baseline(args):
    """Flat SRVF matching, contrasted with the hyperbolic one for planar data in y > 0."""
    b1 = ingest(args.file1, parse_space("r:2") if args.space is None else parse_space(args.space), "csv_xy")
    b2 = ingest(args.file2, b1.space, "csv_xy")
    translation = args.quotient.endswith("mod-g")
    frames, res = flat_sweep(b1, b2, 2, dp_resolution=args.dp_res, translation_invariant=translation)
    doc = {
        "space": space_name(b1.space),
        "quotient": args.quotient,
        "flat_distance": res.distance,
        "flat_midpoint": frames[1],
    }
    if b1.space.n == 2 and np.all(b1.points[:, 1] > 0) and np.all(b2.points[:, 1] > 0):
        h2 = PDSM(2)
        c1 = DiscreteManifoldCurve(h2, h2_to_pdsm(b1.points[:, 0], b1.points[:, 1]))
        c2 = DiscreteManifoldCurve(h2, h2_to_pdsm(b2.points[:, 0], b2.points[:, 1]))
        sweep = geodesic_sweep(c1, c2, 2, args.quotient, _options(args))
        mid = np.column_stack(pdsm_to_h2(sweep.frames[1].points))
        doc["hyperbolic_distance"] = sweep.length
        doc["hyperbolic_midpoint"] = mid
        doc["midpoint_max_difference"] = float(np.max(np.linalg.norm(mid - frames[1], axis=1)))
    _dump(doc, args.out)
    return EXIT_OK


def cmd_bench(args):
    configs = args.configs.split(",") if args.configs else None
    sizes = tuple(int(s) for s in args.sizes.split(","))

    def progress(cell):
        print(f"{cell.config} {cell.points} {cell.mean_seconds!r}", file=sys.stderr)

    cells = bench.run_bench(configs, sizes, args.problems, args.seed, args.jobs, progress)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            bench.write_csv(cells, fh)
    else:
        bench.write_csv(cells, sys.stdout)
    return EXIT_OK


def cmd_gen(args):
    space = parse_space(args.space)
    rng = np.random.default_rng(args.seed)
    fmt = args.format or _default_format(space)
    n = args.points - 1
    if args.kind == "track":
        if not (isinstance(space, Sphere) and space.n == 2):
            raise ConstraintViolation("tracks are generated on s2")
        curves = [generate.synthetic_track(rng, args.points)]
        if args.out2:
            curves.append(generate.synthetic_track(rng, args.points))
    elif args.kind == "plant":
        if not args.out2:
            raise ValueError("a planted pair needs --out2")
        b1, b2, _ = generate.plant_pair(space, n, rng)
        curves = [b1, b2]
    else:
        curves = [generate.random_curve(space, n, rng)]
        if args.out2:
            curves.append(generate.random_curve(space, n, rng))
    for curve, path in zip(curves, [args.out, args.out2]):
        if path is None:
            raise ValueError("--out is required")
        emit(curve, path, fmt)
    return EXIT_OK


# -- parser


def build_parser():
    p = argparse.ArgumentParser(prog="elastic-shapes", description="Elastic shape analysis of curves on S^n and SPD matrices.")
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp, space_default="s2"):
        sp.add_argument("--space", default=space_default, help="s2 | sn:<n> | h2 | pdsm:<n> | r:<n>")
        sp.add_argument("--format", choices=["csv_latlon", "csv_xy", "json_spd"], default=None)
        sp.add_argument("--out", default=None, help="output path (stdout if omitted)")

    def align_flags(sp):
        sp.add_argument("--quotient", choices=QUOTIENTS, default="shape")
        sp.add_argument("--kopt", choices=["grad", "eval"], default=None)
        sp.add_argument("--dp-res", type=int, default=None)
        sp.add_argument("--symmetric", action="store_true", help="optimize in both directions and keep the smaller")

    sp = sub.add_parser("lift", help="horizontal lift and transform of one curve")
    sp.add_argument("file")
    common(sp)
    sp.set_defaults(func=cmd_lift)

    sp = sub.add_parser("dist", help="distance between two curves")
    sp.add_argument("file1")
    sp.add_argument("file2")
    common(sp)
    align_flags(sp)
    sp.set_defaults(func=cmd_dist)

    sp = sub.add_parser("geodesic", help="frames of the geodesic between two curves")
    sp.add_argument("file1")
    sp.add_argument("file2")
    common(sp)
    align_flags(sp)
    sp.add_argument("--frames", type=int, default=10)
    sp.add_argument("--svg", action="store_true")
    sp.set_defaults(func=cmd_geodesic)

    sp = sub.add_parser("baseline", help="flat square-root velocity matching of planar curves")
    sp.add_argument("file1")
    sp.add_argument("file2")
    sp.add_argument("--space", default=None, help="r:<n> (default r:2)")
    sp.add_argument("--out", default=None)
    align_flags(sp)
    sp.set_defaults(func=cmd_baseline)

    sp = sub.add_parser("bench", help="timing table over random problems")
    sp.add_argument("--configs", default=None, help=f"comma list from {','.join(bench.CONFIGS)}")
    sp.add_argument("--sizes", default="100,300,500")
    sp.add_argument("--problems", type=int, default=bench.DEFAULT_PROBLEMS)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("gen", help="write synthetic curves")
    common(sp)
    sp.add_argument("--kind", choices=["random", "track", "plant"], default="random")
    sp.add_argument("--points", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out2", default=None, help="second curve (required for plant)")
    sp.set_defaults(func=cmd_gen)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "dp_res", None) is not None and args.dp_res < 2:
        parser.error("--dp-res must be >= 2")
    if getattr(args, "frames", 1) < 1:
        parser.error("--frames must be >= 1")
    try:
        return args.func(args)
    except (ParseError, ConstraintViolation, ShapeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
