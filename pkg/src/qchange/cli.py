"""Command-line front end: ``qchange gen | transform | score | eval``.

Every option can also come from a flat ``key = value`` file given with
``--config``; keys are option names with dashes or underscores, and explicit
flags win over the file. Exit codes: 0 ok, 2 usage, 3 data, 4 numeric.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__
from .datagen import FailureSpec, SyntheticSpec, generate_failure_sequence, generate_synthetic
from .detection import (
    NormalPeriod,
    ScoreSeries,
    WindowSpec,
    anomaly_scores,
    change_scores,
    threshold_from_warmup,
)
from .evaluation import NOT_DETECTED, LabeledScores, evaluate_scores
from .features import EncodingConfig, FeatureBackend, transform_series
from .io import (
    DataError,
    format_timestamp,
    parse_timestamp,
    read_json,
    read_scores,
    read_series,
    sidecar_path,
    write_json,
    write_scores,
    write_series,
)
from .plot import score_svg
from .timeseries import TimeSeries
from .ulsif import UlsifConfig

EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 2, 3, 4


def _floats(text: str) -> list[float]:
    return [float(v) for v in str(text).split(",") if v.strip()]


def read_config(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DataError(f"{path}:{lineno}: expected key = value")
            key, value = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = value
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qchange", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("--config", help="flat key=value file with option defaults")
        return p

    gen = add("gen", "generate a synthetic dataset")
    gen.add_argument("kind", choices=["synthetic", "failure"])
    gen.add_argument("--out", help="output CSV; ground truth goes to the .json sidecar")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--segments", type=int, default=10)
    gen.add_argument("--segment-len", type=int, default=100)
    gen.add_argument("--dim", type=int, default=13)
    gen.add_argument("--normal-len", type=int, default=30)
    gen.add_argument("--pre-anomaly-len", type=int, default=60)
    gen.add_argument("--anomaly-len", type=int, default=60)
    gen.add_argument("--shift", default="2,2,2", help="comma list, zero-padded to --dim")
    gen.add_argument("--start-date", help="use daily ISO dates from this day instead of 0..T-1")

    tr = add("transform", "map a series to projected quantum features")
    tr.add_argument("--input")
    tr.add_argument("--out")
    tr.add_argument("--circuit", choices=["heisenberg", "two_local"], default="heisenberg")
    tr.add_argument("--t", type=float, default=0.5)
    tr.add_argument("--p", type=int, default=1)
    tr.add_argument("--init-seed", type=int, default=0)
    tr.add_argument("--backend", choices=["exact", "shots"], default="exact")
    tr.add_argument("--shots", type=int, default=8192)
    tr.add_argument("--seed", type=int, default=0, help="shot-sampling seed")

    sc = add("score", "anomaly or change scores with uLSIF")
    sc.add_argument("--input")
    sc.add_argument("--out")
    sc.add_argument("--mode", choices=["anomaly", "change"], default="anomaly")
    sc.add_argument("--normal-start")
    sc.add_argument("--normal-end")
    sc.add_argument("--window-length", type=int)
    sc.add_argument("--slide", type=int, default=1)
    sc.add_argument("--scale", type=float, default=1.0, help="RBF width l")
    sc.add_argument("--reg", type=float, default=0.1)
    sc.add_argument("--num-basis", type=int, help="default: all reference points")
    sc.add_argument("--sweep-l", help="comma list of widths; one score column each")
    sc.add_argument("--calm-start", help="start of the interval used to rank --sweep-l widths")
    sc.add_argument("--calm-end")
    sc.add_argument("--stamp", choices=["junction", "end"], default="junction",
                    help="change mode: label scores at the window junction or window end")
    sc.add_argument("--normalize", action="store_true")
    sc.add_argument("--svg", help="optional line chart of the (first) score column")

    ev = add("eval", "AUC, false alerts and detection time")
    ev.add_argument("--scores")
    ev.add_argument("--truth", help="sidecar JSON with an 'anomaly' interval")
    ev.add_argument("--column")
    ev.add_argument("--k", type=int, default=7)
    ev.add_argument("--multiplier", type=float, default=3.0)
    ev.add_argument("--threshold", type=float, help="fixed threshold instead of the warm-up rule")
    ev.add_argument("--out", help="report path (stdout if omitted)")
    return parser


def parse_args(argv=None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            cfg = read_config(args.config)
        except (OSError, DataError) as exc:
            parser.error(str(exc))
        subparser = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest for a in subparser._actions}
        unknown = sorted(set(cfg) - known)
        if unknown:
            parser.error(f"unknown config keys: {', '.join(unknown)}")
        subparser.set_defaults(**cfg)
        args = parser.parse_args(argv)
        # defaults from the file bypass argparse's type conversion
        for action in subparser._actions:
            v = getattr(args, action.dest, None)
            if action.dest in cfg and isinstance(v, str):
                if action.type is not None:
                    setattr(args, action.dest, action.type(v))
                elif action.const is True:
                    setattr(args, action.dest, v.lower() in ("1", "true", "yes", "on"))
    try:
        _validate(args)
    except ValueError as exc:
        parser.error(str(exc))
    return args


def _require(args, *names):
    for n in names:
        if getattr(args, n) in (None, ""):
            raise ValueError(f"{args.command}: --{n.replace('_', '-')} is required")


def _validate(args):
    if args.command == "gen":
        _require(args, "out")
        if args.kind == "synthetic":
            SyntheticSpec(args.segments, args.segment_len, args.seed)
        else:
            _failure_spec(args)
    elif args.command == "transform":
        _require(args, "input", "out")
        _encoding(args)
        _backend(args)
    elif args.command == "score":
        _require(args, "input", "out")
        for l in _widths(args):
            UlsifConfig(l, args.reg, args.num_basis)
        if args.mode == "anomaly":
            _require(args, "normal_start", "normal_end", "window_length")
            WindowSpec(args.window_length, args.slide)
        else:
            _require(args, "window_length")
            WindowSpec(args.window_length, 1)
        if (args.calm_start is None) != (args.calm_end is None):
            raise ValueError("--calm-start and --calm-end go together")
    elif args.command == "eval":
        _require(args, "scores", "truth")
        if args.k < 1 or not args.multiplier > 0:
            raise ValueError("--k and --multiplier must be positive")


def _failure_spec(args) -> FailureSpec:
    shift = _floats(args.shift)
    if len(shift) > args.dim:
        raise ValueError("--shift has more entries than --dim")
    shift += [0.0] * (args.dim - len(shift))
    return FailureSpec(
        args.dim, args.normal_len, args.pre_anomaly_len, args.anomaly_len, tuple(shift), args.seed
    )


def _encoding(args) -> EncodingConfig:
    return EncodingConfig(args.circuit, args.t, args.p, args.init_seed)


def _backend(args) -> FeatureBackend:
    if args.backend == "exact":
        return FeatureBackend()
    return FeatureBackend(args.shots, args.seed)


def _widths(args) -> list[float]:
    return _floats(args.sweep_l) if args.sweep_l else [args.scale]


def _with_dates(series: TimeSeries, start: str) -> TimeSeries:
    day0 = np.datetime64(start, "D")
    return TimeSeries(day0 + series.timestamps.astype("timedelta64[D]"), series.values)


def cmd_gen(args) -> None:
    if args.kind == "synthetic":
        spec = SyntheticSpec(args.segments, args.segment_len, args.seed)
        series, cps = generate_synthetic(spec)
        truth = {"change_points": cps}
    else:
        spec = _failure_spec(args)
        series, gt = generate_failure_sequence(spec)
        truth = {"normal": list(gt.normal), "anomaly": list(gt.anomaly)}
    if args.start_date:
        day0 = np.datetime64(args.start_date, "D")
        series = _with_dates(series, args.start_date)
        truth = {
            k: [format_timestamp(day0 + np.timedelta64(int(t), "D")) for t in v]
            for k, v in truth.items()
        }
    write_series(args.out, series)
    meta = {
        "kind": args.kind,
        "spec": asdict(spec),
        "rows": len(series),
        "dim": series.dim,
        "start_date": args.start_date,
        "generator": f"qchange {__version__}",
        **truth,
    }
    write_json(sidecar_path(args.out), meta)


def cmd_transform(args) -> None:
    series = read_series(args.input)
    cfg, backend = _encoding(args), _backend(args)
    out = transform_series(series, cfg, backend)
    write_series(args.out, out, prefix="q")
    write_json(
        sidecar_path(args.out),
        {
            "kind": "transform",
            "input": str(args.input),
            "input_dim": series.dim,
            "dim": out.dim,
            "encoding": asdict(cfg),
            "backend": {"mode": args.backend, "shots": backend.shots, "seed": backend.seed},
            "generator": f"qchange {__version__}",
        },
    )


def _score_one(series, args, l) -> ScoreSeries:
    cfg = UlsifConfig(l, args.reg, args.num_basis)
    if args.mode == "anomaly":
        normal = NormalPeriod(
            parse_timestamp(args.normal_start, series.timestamps),
            parse_timestamp(args.normal_end, series.timestamps),
        )
        return anomaly_scores(series, normal, WindowSpec(args.window_length, args.slide), cfg)
    return change_scores(series, args.window_length, cfg, stamp=args.stamp)


def cmd_score(args) -> None:
    series = read_series(args.input)
    widths = _widths(args)
    results = [_score_one(series, args, l) for l in widths]
    if args.normalize:
        results = [r.normalize() for r in results]
    names = ["score"] if not args.sweep_l else [f"l={l:g}" for l in widths]
    ts = results[0].timestamps
    write_scores(args.out, ts, {n: r.scores for n, r in zip(names, results)})

    meta = {
        "kind": "scores",
        "input": str(args.input),
        "mode": args.mode,
        "window_length": args.window_length,
        "slide": args.slide if args.mode == "anomaly" else 1,
        "reg": args.reg,
        "num_basis": args.num_basis,
        "widths": widths,
        "normalized": bool(args.normalize),
        "generator": f"qchange {__version__}",
    }
    if args.mode == "anomaly":
        meta["normal"] = [args.normal_start, args.normal_end]
    else:
        meta["stamp"] = args.stamp
    if args.calm_start is not None:
        a = parse_timestamp(args.calm_start, ts)
        b = parse_timestamp(args.calm_end, ts)
        calm = (ts >= a) & (ts <= b)
        if not calm.any():
            raise DataError("calm interval contains no scores")
        spread = {n: float(np.std(r.scores[calm])) for n, r in zip(names, results)}
        meta["calm"] = [args.calm_start, args.calm_end]
        meta["calm_std"] = spread
        meta["most_stable"] = min(spread, key=spread.get)
        for n in names:
            print(f"{n}\tcalm std {spread[n]:.6g}")
        print(f"most stable: {meta['most_stable']}")
    write_json(sidecar_path(args.out), meta)

    if args.svg:
        r = results[0]
        Path(args.svg).write_text(
            score_svg(r.timestamps, r.scores, title=f"{args.mode} scores ({names[0]})"),
            encoding="utf-8",
        )


def cmd_eval(args) -> None:
    scores = read_scores(args.scores, args.column)
    truth = read_json(args.truth)
    if "anomaly" not in truth:
        raise DataError(f"{args.truth}: no 'anomaly' interval in ground truth")
    ts = scores.timestamps
    start, end = (parse_timestamp(v, ts) for v in truth["anomaly"])
    labeled = LabeledScores(scores, start, end)
    if args.threshold is not None:
        thr = args.threshold
    else:
        warm = scores
        if "normal" in truth:
            warm = scores.after(parse_timestamp(truth["normal"][1], ts))
        thr = threshold_from_warmup(warm, args.k, args.multiplier)
    rep = evaluate_scores(labeled, thr)
    dt = rep.detection_time
    report = {
        "auc": rep.auc,
        "false_alerts": rep.false_alerts,
        "detection_time": dt if dt == NOT_DETECTED else format_timestamp(dt),
        "threshold": rep.threshold,
    }
    if args.threshold is None:
        report["threshold_rule"] = {"k": args.k, "multiplier": args.multiplier}
    if args.out:
        write_json(args.out, report)
    else:
        import json

        print(json.dumps(report, indent=2, sort_keys=True))


COMMANDS = {"gen": cmd_gen, "transform": cmd_transform, "score": cmd_score, "eval": cmd_eval}


def main(argv=None) -> int:
    args = parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except (FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"qchange: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        print(f"qchange: {exc}", file=sys.stderr)
        return EXIT_DATA
    return 0


if __name__ == "__main__":
    sys.exit(main())
