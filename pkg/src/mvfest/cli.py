"""Command line interface: synth, train, estimate, eval.

Exit codes: 0 success, 1 bad arguments or invalid data, 2 I/O failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .decision import FEATURE_NAMES
from .errors import MvfError, ValidationError
from .evaluation import DEFAULT_FEATURE_SETS, compare_methods, write_report
from .pipeline import PipelineConfig, analyze_file, contour_from_features, train_from_manifest
from .signal_io import read_f0_csv, read_model, read_wav, write_contour_csv, write_model
from .smoothing import SmootherConfig
from .synth import PRESETS, generate_corpus, load_manifest


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on usage errors; the contract wants 1."""

    def error(self, message: str) -> None:  # noqa: A003 - argparse API
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


def _parse_features(text: str) -> tuple[str, ...]:
    names = tuple(p.strip() for p in text.split(",") if p.strip())
    unknown = set(names) - set(FEATURE_NAMES)
    if not names or unknown:
        raise ValidationError(
            f"features must be a comma list from {','.join(FEATURE_NAMES)}; got {text!r}")
    return names


def _read_config_file(path: Path) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for ln, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValidationError(f"{path}:{ln}: expected 'key = value'")
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out


_CONFIG_KEYS = ("frame_shift", "window_periods", "features",
                "smooth", "median_order", "ma_halfwidth_ms")


def _build_config(args: argparse.Namespace) -> PipelineConfig:
    """Defaults, overridden by --config file entries, overridden by flags."""
    frame_shift = 0.010
    window_periods = 4
    features: tuple[str, ...] = ("as", "ihpc")
    smooth_mode = "median"
    median_order = 5
    ma_halfwidth_ms = 30.0
    if getattr(args, "config", None):
        entries = _read_config_file(Path(args.config))
        unknown = set(entries) - set(_CONFIG_KEYS)
        if unknown:
            raise ValidationError(f"unknown config keys {sorted(unknown)}")
        if "frame_shift" in entries:
            frame_shift = float(entries["frame_shift"])
        if "window_periods" in entries:
            window_periods = int(entries["window_periods"])
        if "features" in entries:
            features = _parse_features(entries["features"])
        if "smooth" in entries:
            smooth_mode = entries["smooth"]
        if "median_order" in entries:
            median_order = int(entries["median_order"])
        if "ma_halfwidth_ms" in entries:
            ma_halfwidth_ms = float(entries["ma_halfwidth_ms"])
    if getattr(args, "features", None):
        features = _parse_features(args.features)
    if getattr(args, "smooth", None):
        smooth_mode = args.smooth
    if getattr(args, "median_order", None) is not None:
        median_order = args.median_order
    if getattr(args, "ma_halfwidth_ms", None) is not None:
        ma_halfwidth_ms = args.ma_halfwidth_ms
    if smooth_mode == "ma":
        smoother = SmootherConfig(mode="moving_average",
                                  ma_halfwidth=ma_halfwidth_ms / 1000.0,
                                  frame_shift=frame_shift)
    elif smooth_mode in ("median", "none"):
        smoother = SmootherConfig(mode="median", median_order=median_order,
                                  frame_shift=frame_shift)
    else:
        raise ValidationError(f"unknown smoothing mode {smooth_mode!r}")
    return PipelineConfig(frame_shift=frame_shift, window_periods=window_periods,
                          enabled_features=features, smoother=smoother)


def _cmd_synth(args: argparse.Namespace) -> int:
    manifest = generate_corpus(args.out, preset=args.preset, n_files=args.n,
                               seed=args.seed, duration=args.duration,
                               sample_rate=args.sample_rate)
    print(f"wrote {len(manifest.entries)} files under {args.out}")
    return 0


def _cmd_train(args: argparse.Namespace) -> int:
    features = _parse_features(args.features)
    manifest = load_manifest(args.manifest)
    cfg = _build_config(args)
    cfg = PipelineConfig(frame_shift=cfg.frame_shift,
                         window_periods=cfg.window_periods,
                         enabled_features=features, smoother=cfg.smoother)
    model = train_from_manifest(manifest, enabled=features, cfg=cfg,
                                min_samples=args.min_samples)
    write_model(model, args.out, comments=[
        f"trained from {Path(args.manifest).name} (dev split)",
        f"features: {','.join(features)}",
    ])
    print(f"wrote model {args.out}")
    return 0


def _cmd_estimate(args: argparse.Namespace) -> int:
    cfg = _build_config(args)
    audio = read_wav(args.wav)
    track = read_f0_csv(args.f0)
    model = read_model(args.model)
    frames, diag = analyze_file(audio, track, cfg)
    raw, smoothed = contour_from_features(frames, track, model, cfg)
    out = smoothed if args.smooth != "none" else raw
    write_contour_csv(out, args.out)
    if args.dump_features:
        _dump_features(Path(args.dump_features), frames, track)
    if args.verbose:
        print(f"{args.wav}: {diag.frames_voiced}/{diag.frames_total} voiced frames, "
              f"{diag.frames_undecidable} undecidable, "
              f"{diag.frames_suspicious} suspicious, "
              f"{diag.frame_analyses} frame analyses")
    return 0


def _dump_features(path: Path, frames, track) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("time_s,p,omega_hz,as_db,ihpc_periods,icpc_rad\n")
        for i, ff in enumerate(frames):
            if ff is None:
                continue
            t = i * track.frame_shift
            for p, (omega, fv) in enumerate(zip(ff.omegas_hz, ff.features), start=1):
                cells = [f"{t:.6f}", str(p), f"{omega:.6f}"]
                for v in (fv.as_db, fv.ihpc, fv.icpc_rad):
                    cells.append("" if v is None else f"{v:.9g}")
                fh.write(",".join(cells) + "\n")


def _cmd_eval(args: argparse.Namespace) -> int:
    manifest = load_manifest(args.manifest)
    model = read_model(args.model)
    if args.features:
        feature_sets = tuple(_parse_features(f) for f in args.features)
    else:
        feature_sets = DEFAULT_FEATURE_SETS
    report = compare_methods(manifest, feature_sets=feature_sets, model=model)
    write_report(report, args.out_dir)
    for row in report.rows:
        print(f"{row.method:<14} {row.voice_class:<11} AUC={row.score.auc:.4f} "
              f"({row.score.n_frames} frames)")
    return 0


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value file overriding pipeline defaults")
    p.add_argument("--smooth", choices=["median", "ma", "none"],
                   help="contour post-processing (default median)")
    p.add_argument("--median-order", type=int, dest="median_order")
    p.add_argument("--ma-halfwidth-ms", type=float, dest="ma_halfwidth_ms")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mvfest",
                     description="Maximum voiced frequency estimation toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a semi-synthetic corpus")
    p.add_argument("--preset", choices=PRESETS, required=True)
    p.add_argument("--n", type=int, required=True, help="number of base files")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--duration", type=float, default=0.8)
    p.add_argument("--sample-rate", type=int, default=16000, dest="sample_rate")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("train", help="fit a Gaussian model on a dev split")
    p.add_argument("--manifest", required=True)
    p.add_argument("--features", required=True, help="comma list, e.g. as,ihpc")
    p.add_argument("--out", required=True, help="model file to write")
    p.add_argument("--min-samples", type=int, default=100, dest="min_samples")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("estimate", help="estimate an MVF contour for one file")
    p.add_argument("--wav", required=True)
    p.add_argument("--f0", required=True, help="time_s,f0_hz CSV (0 = unvoiced)")
    p.add_argument("--model", required=True)
    p.add_argument("--out", required=True, help="contour CSV to write")
    p.add_argument("--features", help="override the model's default feature use")
    p.add_argument("--dump-features", dest="dump_features",
                   help="write per-candidate feature CSV")
    p.add_argument("--verbose", action="store_true")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("eval", help="score feature subsets on a test split")
    p.add_argument("--manifest", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--features", action="append",
                   help="feature subset (repeatable); default: the five standard sets")
    p.add_argument("--out-dir", default="eval_out", dest="out_dir")
    p.set_defaults(func=_cmd_eval)
    return parser


def run_cli(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except MvfError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    raise SystemExit(run_cli())


if __name__ == "__main__":
    main()
