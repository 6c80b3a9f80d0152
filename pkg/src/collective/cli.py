"""Command-line entry point: ``collective <command> ...``.

Exit codes: 0 success, 1 negative verdict or runtime failure, 2 invalid
input (schema, arguments, environment).
"""

import argparse
import json
import sys
from pathlib import Path

from . import frames, linalg
from .bodies import DEFAULT_PERIOD_HORIZON, detect_period, kinematics
from .environment import InvalidEnvironment, standard_direction_set
from .isomorphism import affine_isomorphic
from .scenario import ScenarioError, kinematics_csv, load_scenario, trace_csv, trace_jsonl, verify_trace_csv


class UsageError(Exception):
    pass


def _rationals(text):
    try:
        return linalg.vector(x.strip() for x in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise UsageError("not a rational or comma-separated rationals: %r" % text) from None


def _rational(text):
    vals = _rationals(text)
    if len(vals) != 1:
        raise UsageError("expected a single rational, got %r" % text)
    return vals[0]


def _write(path, text):
    Path(path).write_text(text)


def cmd_validate(args):
    sc = load_scenario(args.path)
    print("ok: %s (n=%d, %s, %d colours, %d elements, %d bodies, horizon %d)" % (
        sc.name or args.path, sc.env.n, type(sc.env.topology).__name__.lower(),
        len(sc.colours), len(sc.placements), len(sc.bodies), sc.horizon))
    return 0


def cmd_run(args):
    sc = load_scenario(args.path)
    trace = sc.run(args.horizon, cap=args.cap, parallel=args.parallel)
    text = trace_csv(trace, sc.colours)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    if args.events:
        _write(args.events, trace_jsonl(trace, sc.colours))
    return 0


def cmd_analyze(args):
    sc = load_scenario(args.path)
    body = sc.body(args.body)
    horizon = args.horizon or (max(sc.horizon, DEFAULT_PERIOD_HORIZON) if args.period else sc.horizon)
    trace = sc.run(horizon)
    rows = kinematics(trace, body)
    text = kinematics_csv(rows, body.name)
    if args.kinematics:
        _write(args.kinematics, text)
    elif not args.period:
        sys.stdout.write(text)
    if args.figure:
        from .plotting import kinematics_figure

        kinematics_figure(rows, body.name, args.figure, timestamp=not args.no_timestamp)
    if args.period:
        cert = detect_period(trace, body)
        if cert is None:
            print("period: none within horizon %d" % horizon)
            return 1
        print("period: %d" % cert.period)
        print("t0: %d" % cert.t0)
        print("displacement: (%s)" % linalg.fmt_vector(cert.displacement))
        print("velocity: (%s)" % linalg.fmt_vector(cert.velocity))
        print("turns_per_period: %d" % cert.turns)
    return 0


def _print_boost(basis, boost):
    fm = frames.frame_map(basis, boost)
    motion = frames.motion_from_lambda(basis, boost)
    print("lambda = (%s)" % linalg.fmt_vector(boost.lam))
    print("L =")
    for row in fm.L:
        print("  (%s)" % linalg.fmt_vector(row))
    print("v = %s" % linalg.fmt_vector(motion.v))
    print("w = %s" % linalg.fmt(motion.w))


def _boost(text, basis):
    lam = _rationals(text)
    if len(lam) != basis.n + 1:
        raise UsageError("boost %r needs %d entries in dimension %d" % (text, basis.n + 1, basis.n))
    return frames.DiagonalBoost(lam)


def cmd_frames(args):
    basis = frames.build_basis(standard_direction_set(args.dim), step_basis=getattr(args, "step_basis", False))
    op = args.op
    if op == "boost":
        boost = frames.lambda_from_motion(basis, _rationals(args.v), _rational(args.w))
        _print_boost(basis, boost)
    elif op == "compose":
        _print_boost(basis, frames.compose(_boost(args.lam1, basis), _boost(args.lam2, basis)))
    elif op == "invert":
        _print_boost(basis, frames.invert(_boost(args.lam, basis)))
    elif op == "addvel":
        m1 = frames.MotionParams.of(_rationals(args.v1), _rational(args.w1))
        m2 = frames.MotionParams.of(_rationals(args.v2), _rational(args.w2))
        out = frames.velocity_addition(basis, m1, m2)
        print("v = %s" % linalg.fmt_vector(out.v))
        print("w = %s" % linalg.fmt(out.w))
    elif op == "length":
        if args.dim != 1:
            raise UsageError("length is defined for --dim 1 only")
        fm = frames.frame_map(basis, frames.lambda_from_motion(basis, _rationals(args.v), _rational(args.w)))
        print("length = %s" % linalg.fmt(frames.measure_length(fm, 0, _rational(args.rod), _rational(args.slice))))
    return 0


def cmd_iso(args):
    sa, sb = load_scenario(args.path_a), load_scenario(args.path_b)
    ba, bb = sa.body(args.body_a), sb.body(args.body_b)
    ta, tb = sa.run(args.horizon), sb.run(args.horizon)
    wit = affine_isomorphic(ta, ba, tb, bb, _rational(args.tau_a), _rational(args.tau_b))
    if wit is None:
        out = {"isomorphic": False, "phi": [], "tauA": None, "tauB": None}
    else:
        out = {
            "isomorphic": True,
            "phi": [list(pair) for pair in wit.phi],
            "tauA": linalg.fmt(wit.tau_a),
            "tauB": linalg.fmt(wit.tau_b),
        }
    print(json.dumps(out))
    return 0 if wit is not None else 1


def cmd_diagram(args):
    from .plotting import spacetime_diagram

    sc = load_scenario(args.path)
    if sc.env.n != 1:
        raise UsageError("diagram needs a 1-D scenario (dimension is %d)" % sc.env.n)
    trace = sc.run(args.horizon)
    spacetime_diagram(trace, sc.colours, args.out, timestamp=not args.no_timestamp)
    return 0


def cmd_verify(args):
    sc = load_scenario(args.path)
    problems = verify_trace_csv(sc, Path(args.trace).read_text())
    for p in problems:
        print(p)
    if problems:
        return 1
    print("ok")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="collective", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a scenario file")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("run", help="simulate a scenario and export the trace")
    p.add_argument("path")
    p.add_argument("--horizon", type=int)
    p.add_argument("--out", help="trace CSV (default: stdout)")
    p.add_argument("--events", help="event log, one JSON object per line")
    p.add_argument("--cap", type=int, help="override the saturation cap")
    p.add_argument("--parallel", action="store_true", help="parallel neighbourhood evaluation")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("analyze", help="kinematics and periodicity of a named body")
    p.add_argument("path")
    p.add_argument("--body", required=True)
    p.add_argument("--horizon", type=int)
    p.add_argument("--kinematics", help="kinematics CSV (default: stdout)")
    p.add_argument("--period", action="store_true", help="search for a periodicity certificate")
    p.add_argument("--figure", help="plot of the average coordinate (png/svg/pdf)")
    p.add_argument("--no-timestamp", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("frames", help="exact frame algebra")
    fsub = p.add_subparsers(dest="op", required=True)
    q = fsub.add_parser("boost")
    q.add_argument("--v", required=True, help="velocity p/q[,p/q...]")
    q.add_argument("--w", required=True)
    q.add_argument("--step-basis", action="store_true", help="non-normative e_i = (i, 1) basis")
    q = fsub.add_parser("compose")
    q.add_argument("--lam1", required=True)
    q.add_argument("--lam2", required=True)
    q = fsub.add_parser("invert")
    q.add_argument("--lam", required=True)
    q = fsub.add_parser("addvel")
    q.add_argument("--v1", required=True)
    q.add_argument("--v2", required=True)
    q.add_argument("--w1", default="1")
    q.add_argument("--w2", default="1")
    q = fsub.add_parser("length")
    q.add_argument("--v", required=True)
    q.add_argument("--w", required=True)
    q.add_argument("--rod", required=True)
    q.add_argument("--slice", default="0")
    for q in fsub.choices.values():
        q.add_argument("--dim", type=int, default=1)
    p.set_defaults(func=cmd_frames)

    p = sub.add_parser("iso", help="affine isomorphism of two bodies")
    p.add_argument("path_a")
    p.add_argument("path_b")
    p.add_argument("--body-a", required=True)
    p.add_argument("--body-b", required=True)
    p.add_argument("--horizon", type=int, default=DEFAULT_PERIOD_HORIZON)
    p.add_argument("--tau-a", default="1", help="proper time per period of body A")
    p.add_argument("--tau-b", default="1")
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("diagram", help="1-D spacetime diagram (SVG)")
    p.add_argument("path")
    p.add_argument("--out", required=True)
    p.add_argument("--horizon", type=int)
    p.add_argument("--no-timestamp", action="store_true")
    p.set_defaults(func=cmd_diagram)

    p = sub.add_parser("verify", help="replay a trace CSV against its scenario")
    p.add_argument("path")
    p.add_argument("trace")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, InvalidEnvironment, UsageError, frames.FrameError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
