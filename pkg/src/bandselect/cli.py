"""Batch command-line front end for the full pipeline.

Subcommands: info, select, baseline, synth, sweep, classify.  Every run is
reproducible: identical flags and inputs give byte-identical outputs, and
all randomness flows from --seed.  Exit codes: 0 success, 2 usage or input
error, 1 internal error.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from bandselect import evaluation
from bandselect.data_model import (
    load_cube,
    load_ground_truth,
    save_cube,
    save_ground_truth,
    split_labeled_pixels,
)
from bandselect.evaluation import AccuracyReport, emit_report, evaluate_subset, sweep
from bandselect.info_theory import relevance_curve
from bandselect.selection import (
    Thresholds,
    algorithm2,
    estimate_ground_truth,
    guo_baseline,
)
from bandselect.synthetic import SyntheticSpec, default_spec, make_synthetic_gt, synthesize_bands


def _parse_axis(text: str) -> list:
    """Threshold axis: a comma list ("0,0.4") or a start:step:end range."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"bad axis range '{text}' (expected start:step:end)")
        start, step, end = (float(p) for p in parts)
        if step <= 0:
            raise ValueError("axis step must be positive")
        count = int(np.floor((end - start) / step + 1e-9)) + 1
        if count < 1:
            raise ValueError(f"axis range '{text}' is empty")
        return [round(start + i * step, 10) for i in range(count)]
    values = [float(p) for p in text.split(",") if p.strip()]
    if not values:
        raise ValueError(f"bad axis '{text}'")
    return values


def _parse_band_range(text: str) -> tuple:
    parts = text.split(":")
    if len(parts) != 2:
        raise ValueError(f"bad band range '{text}' (expected LO:HI)")
    return int(parts[0]), int(parts[1])


def _parse_band_list(text: str) -> list:
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise ValueError(f"bad band list '{text}'") from exc


def _write_text(path, text: str) -> None:
    with open(Path(path), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _mi_curve_csv(mi) -> str:
    lines = ["band,mi_bits"]
    for i, v in enumerate(mi):
        lines.append(f"{i},{float(v)!r}")
    return "\n".join(lines) + "\n"


def _read_mi_curve_csv(path) -> np.ndarray:
    values = {}
    with open(Path(path), encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "band,mi_bits":
            raise ValueError(f"{path}: expected header 'band,mi_bits'")
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            band_s, mi_s = line.split(",")
            values[int(band_s)] = float(mi_s)
    if sorted(values) != list(range(len(values))):
        raise ValueError(f"{path}: band indices must be 0..n-1 without gaps")
    return np.asarray([values[i] for i in range(len(values))], dtype=np.float64)


def _load_reference(args):
    """The label map MI is computed against: real or estimated."""
    cube = load_cube(args.cube)
    if getattr(args, "estimated_gt", None):
        lo, hi = _parse_band_range(args.estimated_gt)
        return cube, estimate_ground_truth(cube, (lo, hi), args.gt_levels)
    if not args.gt:
        raise ValueError("--gt is required unless --estimated-gt is given")
    return cube, load_ground_truth(args.gt)


def cmd_info(args) -> int:
    cube, gt = _load_reference(args)
    mi = relevance_curve(cube, gt, args.bins)
    text = _mi_curve_csv(mi)
    if args.out:
        _write_text(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_select(args) -> int:
    cube = load_cube(args.cube)
    gt = load_ground_truth(args.gt)
    th = Thresholds(args.th_relevance, args.th_redundancy)
    result = algorithm2(cube, gt, th, args.bins)
    doc = result.to_json_dict()
    doc["bins"] = args.bins
    _write_text(args.out, json.dumps(doc, sort_keys=True, indent=2) + "\n")
    print(" ".join(str(b) for b in result.selected))
    return 0


def cmd_baseline(args) -> int:
    if args.curve:
        mi = _read_mi_curve_csv(args.curve)
    else:
        if not args.cube or not args.gt:
            raise ValueError("--curve or both --cube and --gt are required")
        mi = relevance_curve(load_cube(args.cube), load_ground_truth(args.gt), args.bins)
    result = guo_baseline(mi, args.bandwidth, args.target, args.d_threshold)
    if result.exhausted_early:
        print(
            f"warning: ran out of bands after {len(result.selected)} of "
            f"{args.target} picks",
            file=sys.stderr,
        )
    if args.out:
        doc = {
            "schema": "bandselect.baseline/1",
            "selected": list(result.selected),
            "exhausted_early": result.exhausted_early,
            "bandwidth": args.bandwidth,
            "target": args.target,
            "d_threshold": args.d_threshold,
        }
        _write_text(args.out, json.dumps(doc, sort_keys=True, indent=2) + "\n")
    print(" ".join(str(b) for b in result.selected))
    return 0


def cmd_synth(args) -> int:
    if args.gt:
        gt = load_ground_truth(args.gt)
    elif args.gt_shape:
        lines, samples = (int(v) for v in args.gt_shape.split(","))
        gt = make_synthetic_gt(lines, samples, args.gt_classes,
                               args.gt_labeled_frac, args.seed)
    else:
        raise ValueError("--gt or --gt-shape is required")
    if args.gt_out:
        save_ground_truth(gt, args.gt_out)
    spec = SyntheticSpec.load(args.spec) if args.spec else default_spec(gt.n_classes)
    cube = synthesize_bands(gt, spec, args.seed)
    save_cube(cube, args.out, dtype="f32")
    print(f"wrote {cube.bands} bands of {cube.lines}x{cube.samples} to {args.out}")
    return 0


def cmd_sweep(args) -> int:
    cube = load_cube(args.cube)
    gt = load_ground_truth(args.gt)
    grid = sweep(cube, gt, _parse_axis(args.relevance_axis),
                 _parse_axis(args.redundancy_axis), args.bins, args.seed,
                 fraction=args.fraction)
    base = Path(args.out)
    _write_text(base.with_suffix(".csv"), emit_report(grid, "csv"))
    _write_text(base.with_suffix(".json"), emit_report(grid, "json"))
    print(f"wrote {len(grid.cells)} cells to {base.with_suffix('.csv')} "
          f"and {base.with_suffix('.json')}")
    return 0


def cmd_classify(args) -> int:
    cube = load_cube(args.cube)
    gt = load_ground_truth(args.gt)
    bands = _parse_band_list(args.bands)
    split = split_labeled_pixels(gt, args.fraction, args.seed)
    if args.export_train or args.export_test:
        train = evaluation.extract_features(cube, bands, split.train, gt)
        test = evaluation.extract_features(cube, bands, split.test, gt)
        if args.export_train:
            _write_text(args.export_train, evaluation.feature_matrix_to_csv(train))
        if args.export_test:
            _write_text(args.export_test, evaluation.feature_matrix_to_csv(test))
    acc = evaluate_subset(cube, gt, bands, split)
    report = AccuracyReport(n_bands=len(bands), accuracy=acc, thresholds=None,
                            seed=args.seed)
    if args.out:
        _write_text(args.out, emit_report(report, "json"))
    print(f"n_bands={report.n_bands} accuracy_pct={report.accuracy!r} seed={report.seed}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bandselect",
        description="Band selection for hyperspectral cubes via mutual information.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, gt_required=True):
        p.add_argument("--cube", required=True, help="raw cube file (JSON sidecar alongside)")
        p.add_argument("--gt", required=gt_required, help="ground-truth label map")
        p.add_argument("--bins", type=int, default=256, help="histogram bins (default 256)")

    p = sub.add_parser("info", help="per-band MI curve against a label map")
    add_common(p, gt_required=False)
    p.add_argument("--estimated-gt", metavar="LO:HI",
                   help="derive the reference map by averaging this band range")
    p.add_argument("--gt-levels", type=int, default=17,
                   help="labels in the estimated map (default 17)")
    p.add_argument("--out", help="output CSV (default: stdout)")

    p = sub.add_parser("select", help="two-threshold selection")
    add_common(p)
    p.add_argument("--th-relevance", type=float, required=True, help="MI cutoff in bits")
    p.add_argument("--th-redundancy", type=float, required=True,
                   help="normalized-MI cap in (0, 1]")
    p.add_argument("--out", required=True, help="output JSON with full provenance")

    p = sub.add_parser("baseline", help="top-MI picking with bandwidth rejection")
    p.add_argument("--curve", help="MI curve CSV (band,mi_bits)")
    p.add_argument("--cube", help="raw cube file (if no --curve)")
    p.add_argument("--gt", help="ground-truth label map (if no --curve)")
    p.add_argument("--bins", type=int, default=256)
    p.add_argument("--bandwidth", type=int, required=True, help="neighborhood half-width")
    p.add_argument("--target", type=int, required=True, help="bands to select")
    p.add_argument("--d-threshold", type=float, required=True,
                   help="first-difference rejection threshold")
    p.add_argument("--out", help="optional output JSON")

    p = sub.add_parser("synth", help="generate a synthetic cube")
    p.add_argument("--gt", help="ground-truth label map to synthesize from")
    p.add_argument("--gt-shape", metavar="LINES,SAMPLES",
                   help="generate a random label map instead of --gt")
    p.add_argument("--gt-classes", type=int, default=16)
    p.add_argument("--gt-labeled-frac", type=float, default=0.5)
    p.add_argument("--gt-out", help="save the label map used (text grid)")
    p.add_argument("--spec", help="synthetic spec JSON (default: built-in 19-band suite)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output raw cube path (sidecar alongside)")

    p = sub.add_parser("sweep", help="threshold-grid sweep with 1-NN accuracy")
    add_common(p)
    p.add_argument("--relevance-axis", required=True,
                   help="comma list or start:step:end of MI cutoffs")
    p.add_argument("--redundancy-axis", required=True,
                   help="comma list or start:step:end of redundancy caps")
    p.add_argument("--seed", type=int, default=0, help="train/test split seed")
    p.add_argument("--fraction", type=float, default=0.5, help="train fraction")
    p.add_argument("--out", required=True, help="output base path (.csv and .json)")

    p = sub.add_parser("classify", help="1-NN accuracy of an explicit band subset")
    p.add_argument("--cube", required=True)
    p.add_argument("--gt", required=True)
    p.add_argument("--bands", required=True, help="comma list of band indices")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fraction", type=float, default=0.5)
    p.add_argument("--out", help="optional output JSON")
    p.add_argument("--export-train", help="write the train feature matrix as CSV")
    p.add_argument("--export-test", help="write the test feature matrix as CSV")

    parser.set_defaults(func=None)
    for name, fn in (("info", cmd_info), ("select", cmd_select), ("baseline", cmd_baseline),
                     ("synth", cmd_synth), ("sweep", cmd_sweep), ("classify", cmd_classify)):
        sub.choices[name].set_defaults(func=fn)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - last-resort boundary
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
