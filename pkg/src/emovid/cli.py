"""Command-line entry point: synth, aggregate, cv, train, predict,
ensemble, weigh, evaluate.

Configs are JSON documents with every field defaulted; flags override
config values, and all randomness flows from one --seed flag mixed per
stage. Commands exit nonzero with a single-line diagnostic on stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .aggregate import AggregationConfig, build_video_descriptor
from .core import SPLITS, ClassWeights, EmotionLabel, label_from_name
from .ensemble import (
    EnsembleConfig,
    class_weights_from_counts,
    predict,
    read_predictions,
    read_scores,
    read_weight_row,
    run_ensemble,
    write_predictions,
    write_scores,
    write_weights,
)
from .evaluate import evaluate, render_report, report_to_dict
from .ingest import load_audio_features, load_frame_features, load_manifest, sniff_stream_kind
from .normalize import NormalizationConfig, apply_normalization, fit_normalization
from .svm import (
    SvmTrainConfig,
    cross_validate_c,
    decision_scores,
    load_model,
    save_model,
    train_ovr,
)
from .synth import SynthConfig, generate_dataset
from .util import derive_seed, dumps_17g, fmt17

DEFAULT_CV_GRID = tuple(2.0 ** k for k in (-8, -6, -4, -2, 0, 2, 4, 6))


@dataclass(frozen=True)
class PipelineConfig:
    streams: dict = field(default_factory=lambda: {"frames": AggregationConfig()})
    normalization: NormalizationConfig = NormalizationConfig()
    svm: SvmTrainConfig = SvmTrainConfig()
    score_mode: str = "softmax"
    cv_grid: tuple = DEFAULT_CV_GRID
    cv_folds: int = 5

    def __post_init__(self):
        if not self.streams:
            raise ValueError("config must declare at least one stream")
        if self.cv_folds < 2:
            raise ValueError(f"folds must be >= 2, got {self.cv_folds}")
        if not self.cv_grid:
            raise ValueError("cv grid must be non-empty")


def pipeline_config_from_dict(doc: dict) -> PipelineConfig:
    known = {"streams", "normalization", "svm", "ensemble", "cv"}
    unknown = set(doc) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    streams = {
        name: AggregationConfig(
            aggregators=tuple(stream.get("aggregators", AggregationConfig().aggregators)),
            average_variants=bool(stream.get("average_variants", True)),
        )
        for name, stream in doc.get("streams", {"frames": {}}).items()
    }
    norm_doc = doc.get("normalization", {})
    normalization = NormalizationConfig(
        range_scale=bool(norm_doc.get("range_scale", True)),
        rootsift=bool(norm_doc.get("rootsift", True)),
        standardize=bool(norm_doc.get("standardize", True)),
    )
    svm_doc = doc.get("svm", {})
    svm = SvmTrainConfig(
        C=float(svm_doc.get("C", 1.0)),
        tolerance=float(svm_doc.get("tolerance", 1e-4)),
        max_epochs=int(svm_doc.get("max_epochs", 1000)),
        seed=int(svm_doc.get("seed", 0)),
        bias=bool(svm_doc.get("bias", True)),
    )
    ens_doc = doc.get("ensemble", {})
    cv_doc = doc.get("cv", {})
    return PipelineConfig(
        streams=streams,
        normalization=normalization,
        svm=svm,
        score_mode=str(ens_doc.get("score_mode", "softmax")),
        cv_grid=tuple(float(c) for c in cv_doc.get("grid", DEFAULT_CV_GRID)),
        cv_folds=int(cv_doc.get("folds", 5)),
    )


def load_pipeline_config(path: str | None) -> PipelineConfig:
    if path is None:
        return PipelineConfig()
    with open(path, "r", encoding="utf-8") as fp:
        try:
            doc = json.load(fp)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not valid JSON: {exc}") from None
    return pipeline_config_from_dict(doc)


# --- descriptor files --------------------------------------------------------


def write_descriptors(video_ids, matrix: np.ndarray, path) -> None:
    """CSV: id,x0,...,x{D-1}, one row per video, floats at 17 digits."""
    matrix = np.asarray(matrix, dtype=np.float64)
    with open(path, "w", encoding="utf-8", newline="") as fp:
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(["id"] + [f"x{j}" for j in range(matrix.shape[1])])
        for vid, row in zip(video_ids, matrix):
            writer.writerow([vid] + [fmt17(v) for v in row])


def read_descriptors(path):
    """Returns (video_ids, matrix) from a descriptor CSV."""
    with open(path, "r", encoding="utf-8", newline="") as fp:
        reader = csv.reader(fp)
        header = next(reader, None)
        if header is None or header[0] != "id" or len(header) < 2:
            raise ValueError(f"{path}: expected header id,x0,...")
        ids = []
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise ValueError(f"{path}: line {lineno}: ragged row")
            ids.append(row[0])
            try:
                rows.append([float(v) for v in row[1:]])
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: non-numeric value") from None
    if not ids:
        raise ValueError(f"{path}: no descriptor rows")
    return tuple(ids), np.asarray(rows, dtype=np.float64)


def _parse_splits(value: str):
    splits = tuple(s.strip() for s in value.split(",") if s.strip())
    for s in splits:
        if s not in SPLITS:
            raise ValueError(f"unknown split {s!r}, expected one of {SPLITS}")
    if not splits:
        raise ValueError("empty --splits list")
    return splits


def _select_labeled_rows(manifest, desc_ids, matrix, splits, require_labels=True):
    """Rows of the descriptor file for manifest entries in the given
    splits, in manifest order. Returns (ids, X, labels)."""
    row_of = {vid: i for i, vid in enumerate(desc_ids)}
    ids, rows, labels = [], [], []
    for entry in manifest.entries:
        if entry.split not in splits:
            continue
        if entry.video_id not in row_of:
            raise ValueError(f"video {entry.video_id!r} has no descriptor row")
        if entry.label_name is None:
            if require_labels:
                raise ValueError(f"video {entry.video_id!r} has no label")
            labels.append(None)
        else:
            labels.append(label_from_name(entry.label_name))
        ids.append(entry.video_id)
        rows.append(matrix[row_of[entry.video_id]])
    if not ids:
        raise ValueError(f"no videos in splits {','.join(splits)}")
    return ids, np.asarray(rows, dtype=np.float64), labels


# --- commands ----------------------------------------------------------------


def cmd_synth(args) -> int:
    if args.config is not None:
        with open(args.config, "r", encoding="utf-8") as fp:
            try:
                doc = json.load(fp)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{args.config}: not valid JSON: {exc}") from None
        cfg = SynthConfig.from_dict(doc)
    else:
        cfg = SynthConfig()
    if args.seed is not None:
        cfg = replace(cfg, seed=derive_seed(args.seed, "synth"))
    dataset = generate_dataset(cfg, args.out)
    print(f"wrote {len(dataset.manifest)} videos under {args.out}")
    return 0


def cmd_aggregate(args) -> int:
    manifest = load_manifest(args.manifest)
    if not manifest.entries:
        raise ValueError(f"{args.manifest}: no videos")
    config = load_pipeline_config(args.config)
    features_root = Path(args.features_dir) if args.features_dir else manifest.root
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for stream_name, agg_cfg in config.streams.items():
        ids = []
        rows = []
        for entry in manifest.entries:
            if stream_name not in entry.streams:
                raise ValueError(f"video {entry.video_id!r}: no stream {stream_name!r}")
            path = features_root / entry.streams[stream_name]
            try:
                if sniff_stream_kind(path) == "frames":
                    seq = load_frame_features(path, video_id=entry.video_id)
                    descriptor = build_video_descriptor(seq, agg_cfg).features
                else:
                    descriptor = load_audio_features(path)
            except ValueError as exc:
                raise ValueError(f"video {entry.video_id!r}: {exc}") from None
            ids.append(entry.video_id)
            rows.append(descriptor)
        dims = {row.size for row in rows}
        if len(dims) != 1:
            raise ValueError(
                f"stream {stream_name!r}: inconsistent descriptor dimensions {sorted(dims)}"
            )
        out_path = out_dir / f"{stream_name}.csv"
        write_descriptors(ids, np.stack(rows), out_path)
        print(f"wrote {len(ids)} descriptors ({rows[0].size} dims) to {out_path}")
    return 0


def cmd_cv(args) -> int:
    config = load_pipeline_config(args.config)
    folds = args.folds if args.folds is not None else config.cv_folds
    if folds < 2:
        raise ValueError(f"folds must be >= 2, got {folds}")
    manifest = load_manifest(args.manifest)
    desc_ids, matrix = read_descriptors(args.descriptors)
    splits = _parse_splits(args.splits)
    ids, X, labels = _select_labeled_rows(manifest, desc_ids, matrix, splits)
    fold_seed = (
        derive_seed(args.seed, "cv") if args.seed is not None else config.svm.seed
    )
    best_c, accuracies = cross_validate_c(
        X,
        labels,
        config.cv_grid,
        cfg=config.svm,
        folds=folds,
        seed=fold_seed,
        norm_config=config.normalization,
        ids=ids,
    )
    for c_value, acc in zip(config.cv_grid, accuracies):
        print(f"C={c_value:g}  mean_accuracy={acc:.4f}")
    print(f"best C: {best_c:g}")
    if args.out:
        report = {
            "grid": [float(c) for c in config.cv_grid],
            "mean_accuracies": [float(a) for a in accuracies],
            "best_c": float(best_c),
            "folds": int(folds),
        }
        Path(args.out).write_text(dumps_17g(report), encoding="utf-8")
    return 0


def cmd_train(args) -> int:
    config = load_pipeline_config(args.config)
    manifest = load_manifest(args.manifest)
    desc_ids, matrix = read_descriptors(args.descriptors)
    splits = _parse_splits(args.splits)
    ids, X, labels = _select_labeled_rows(manifest, desc_ids, matrix, splits)
    svm_cfg = config.svm
    if args.c is not None:
        svm_cfg = replace(svm_cfg, C=args.c)
    if args.seed is not None:
        svm_cfg = replace(svm_cfg, seed=derive_seed(args.seed, "train"))
    params = fit_normalization(X, config.normalization)
    model = train_ovr(
        apply_normalization(X, params),
        labels,
        svm_cfg,
        norm_config=params.config,
        range_scaler=params.range_scaler,
        standardizer=params.standardizer,
    )
    save_model(model, args.out)
    print(f"trained on {len(ids)} videos ({','.join(splits)}); model -> {args.out}")
    return 0


def cmd_predict(args) -> int:
    model = load_model(args.model)
    desc_ids, matrix = read_descriptors(args.descriptors)
    if args.splits is not None:
        if args.manifest is None:
            raise ValueError("--splits requires --manifest")
        manifest = load_manifest(args.manifest)
        splits = _parse_splits(args.splits)
        desc_ids, matrix, _ = _select_labeled_rows(
            manifest, desc_ids, matrix, splits, require_labels=False
        )
    normalized = apply_normalization(matrix, model.normalization)
    scores = decision_scores(model, normalized, video_ids=desc_ids)
    write_scores(scores, args.out)
    print(f"wrote scores for {scores.num_videos} videos to {args.out}")
    return 0


def _class_weights_from_args(args) -> ClassWeights | None:
    chosen = [
        name
        for name, value in (
            ("--counts", args.counts),
            ("--counts-file", args.counts_file),
            ("--weights", args.weights),
            ("--weights-file", args.weights_file),
        )
        if value is not None
    ]
    if len(chosen) > 1:
        raise ValueError(f"use only one of {', '.join(chosen)}")
    if args.counts is not None:
        return class_weights_from_counts(_parse_seven(args.counts))
    if args.counts_file is not None:
        return class_weights_from_counts(read_weight_row(args.counts_file))
    if args.weights is not None:
        return ClassWeights(np.asarray(_parse_seven(args.weights)))
    if args.weights_file is not None:
        return ClassWeights(read_weight_row(args.weights_file))
    return None


def _parse_seven(text: str) -> list:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 7:
        raise ValueError(f"expected 7 comma-separated values, got {len(parts)}")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise ValueError(f"non-numeric value in {text!r}") from None


def cmd_ensemble(args) -> int:
    config = load_pipeline_config(args.config)
    mode = args.mode if args.mode is not None else config.score_mode
    weights = _class_weights_from_args(args)
    cfg = EnsembleConfig(score_mode=mode, class_weights=weights)
    streams = [read_scores(p) for p in args.scores]
    combined = run_ensemble(streams, cfg)
    write_scores(combined, args.out)
    print(f"combined {len(streams)} stream(s) in {mode} mode -> {args.out}")
    if args.predictions:
        labels = predict(combined)
        write_predictions(combined.video_ids, labels, args.predictions)
        print(f"wrote predictions to {args.predictions}")
    return 0


def cmd_weigh(args) -> int:
    weights = _class_weights_from_args(args)
    if weights is None:
        raise ValueError("provide --counts, --counts-file, --weights or --weights-file")
    write_weights(weights, args.out)
    for label, value in zip(EmotionLabel, weights.weights):
        print(f"{label.display_name:<9} {value:.2f}")
    print(f"wrote weights to {args.out}")
    return 0


def cmd_evaluate(args) -> int:
    ids, predicted = read_predictions(args.predictions)
    manifest = load_manifest(args.manifest)
    entry_of = {entry.video_id: entry for entry in manifest.entries}
    splits = _parse_splits(args.splits) if args.splits is not None else None
    truths = []
    kept = []
    for vid, label in zip(ids, predicted):
        if vid not in entry_of:
            raise ValueError(f"predicted video {vid!r} not in manifest")
        entry = entry_of[vid]
        if splits is not None and entry.split not in splits:
            continue
        if entry.label_name is None:
            raise ValueError(f"video {vid!r} has no ground-truth label")
        truths.append(label_from_name(entry.label_name))
        kept.append(label)
    report = evaluate(kept, truths)
    sys.stdout.write(render_report(report))
    if args.out:
        Path(args.out).write_text(dumps_17g(report_to_dict(report)), encoding="utf-8")
    return 0


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="emovid",
        description="Video-level emotion classification from per-frame features.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic dataset")
    p.add_argument("--config", help="SynthConfig JSON")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, help="top-level seed (mixed per stage)")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("aggregate", help="build per-video descriptors")
    p.add_argument("--manifest", required=True)
    p.add_argument("--config", help="pipeline config JSON")
    p.add_argument("--features-dir", help="root for stream paths (default: manifest dir)")
    p.add_argument("--out", required=True, help="output directory for descriptor CSVs")
    p.set_defaults(func=cmd_aggregate)

    p = sub.add_parser("cv", help="cross-validate the regularization constant")
    p.add_argument("--descriptors", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--config", help="pipeline config JSON")
    p.add_argument("--splits", default="train")
    p.add_argument("--folds", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="optional JSON report path")
    p.set_defaults(func=cmd_cv)

    p = sub.add_parser("train", help="fit normalization + one-vs-rest SVM")
    p.add_argument("--descriptors", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--config", help="pipeline config JSON")
    p.add_argument("--splits", default="train", help="fit splits, e.g. train or train,val")
    p.add_argument("--c", type=float, help="override the regularization constant")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True, help="model JSON path")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="decision scores for descriptors")
    p.add_argument("--model", required=True)
    p.add_argument("--descriptors", required=True)
    p.add_argument("--manifest")
    p.add_argument("--splits", help="restrict to manifest splits")
    p.add_argument("--out", required=True, help="score CSV path")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("ensemble", help="combine score streams")
    p.add_argument("--scores", nargs="+", required=True, help="score CSVs to combine")
    p.add_argument("--config", help="pipeline config JSON")
    p.add_argument("--mode", choices=("raw", "softmax"))
    p.add_argument("--counts", help="7 comma-separated class counts")
    p.add_argument("--counts-file", help="CSV row of 7 class counts")
    p.add_argument("--weights", help="7 comma-separated class weights")
    p.add_argument("--weights-file", help="CSV row of 7 class weights")
    p.add_argument("--out", required=True, help="combined score CSV path")
    p.add_argument("--predictions", help="optional predictions CSV path")
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("weigh", help="class weights from counts or passthrough")
    p.add_argument("--counts", help="7 comma-separated class counts")
    p.add_argument("--counts-file", help="CSV row of 7 class counts")
    p.add_argument("--weights", help="7 comma-separated class weights")
    p.add_argument("--weights-file", help="CSV row of 7 class weights")
    p.add_argument("--out", required=True, help="weights CSV path")
    p.set_defaults(func=cmd_weigh)

    p = sub.add_parser("evaluate", help="accuracy and confusion matrix")
    p.add_argument("--predictions", required=True, help="predictions CSV")
    p.add_argument("--manifest", required=True)
    p.add_argument("--splits", help="restrict to manifest splits")
    p.add_argument("--out", help="optional JSON report path")
    p.set_defaults(func=cmd_evaluate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        message = str(exc).replace("\n", "; ")
        print(f"error: {message}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
