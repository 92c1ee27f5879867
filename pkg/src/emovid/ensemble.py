"""Combine score streams, weight classes by prior, read out predictions.

Decision values from independently trained SVMs are not commensurable, so
the default combination first maps each stream's rows through a softmax;
raw averaging is kept as an alternative but refuses class weights (a
positive multiplier on a negative decision value would push the class
down, not up).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .core import EMOTION_NAMES, NUM_CLASSES, ClassWeights, EmotionLabel, ScoreMatrix
from .util import fmt17

SCORE_MODES = ("raw", "softmax")


@dataclass(frozen=True)
class EnsembleConfig:
    score_mode: str = "softmax"
    class_weights: ClassWeights | None = None

    def __post_init__(self):
        if self.score_mode not in SCORE_MODES:
            raise ValueError(
                f"unknown score_mode {self.score_mode!r}, expected one of {SCORE_MODES}"
            )


def class_weights_from_counts(counts) -> ClassWeights:
    """w_c = sqrt(n_c) / sum_c' sqrt(n_c') from per-class sample counts."""
    arr = np.asarray(counts, dtype=np.float64)
    if arr.shape != (NUM_CLASSES,):
        raise ValueError(f"expected {NUM_CLASSES} counts, got shape {arr.shape}")
    if (arr < 0).any():
        raise ValueError("counts must be nonnegative")
    if not (arr > 0).any():
        raise ValueError("at least one count must be positive")
    roots = np.sqrt(arr)
    return ClassWeights(roots / roots.sum())


def softmax_rows(scores: np.ndarray) -> np.ndarray:
    """Row-wise exponential normalization, max-subtracted for stability."""
    arr = np.asarray(scores, dtype=np.float64)
    shifted = arr - arr.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def combine_streams(streams, cfg: EnsembleConfig = EnsembleConfig()) -> ScoreMatrix:
    """Average score rows elementwise across streams.

    In softmax mode every stream's rows become probability vectors first.
    All streams must list the same video ids in the same order.
    """
    streams = list(streams)
    if not streams:
        raise ValueError("need at least one score stream")
    reference = streams[0].video_ids
    for k, stream in enumerate(streams[1:], start=1):
        if stream.video_ids != reference:
            offending = _first_id_mismatch(reference, stream.video_ids)
            raise ValueError(
                f"stream {k} video ids disagree with stream 0, first offender: {offending!r}"
            )
    stacked = np.stack([s.scores for s in streams])
    if cfg.score_mode == "softmax":
        stacked = np.stack([softmax_rows(layer) for layer in stacked])
    return ScoreMatrix(reference, stacked.mean(axis=0))


def _first_id_mismatch(a, b) -> str:
    for x, y in zip(a, b):
        if x != y:
            return y
    return b[len(a)] if len(b) > len(a) else f"<missing after {a[len(b) - 1]}>"


def apply_class_weights(scores: ScoreMatrix, weights: ClassWeights) -> ScoreMatrix:
    """Multiply column c by weight w_c; requires nonnegative scores."""
    if (scores.scores < 0).any():
        raise ValueError(
            "class weights require nonnegative scores (combine in softmax mode first)"
        )
    return ScoreMatrix(scores.video_ids, scores.scores * weights.weights)


def predict(scores: ScoreMatrix) -> list:
    """Per row, the smallest class index attaining the maximal score."""
    return [EmotionLabel(int(i)) for i in scores.scores.argmax(axis=1)]


def run_ensemble(streams, cfg: EnsembleConfig = EnsembleConfig()) -> ScoreMatrix:
    """combine_streams plus optional class weighting per the config."""
    combined = combine_streams(streams, cfg)
    if cfg.class_weights is not None:
        if cfg.score_mode != "softmax":
            raise ValueError("class weights require softmax score mode")
        combined = apply_class_weights(combined, cfg.class_weights)
    return combined


# --- file formats -----------------------------------------------------------

SCORE_HEADER = ("id",) + EMOTION_NAMES
PREDICTION_HEADER = ("id", "label")


def write_scores(scores: ScoreMatrix, path) -> None:
    """CSV: id,Angry,...,Surprise; one row per video, floats at 17 digits."""
    with open(path, "w", encoding="utf-8", newline="") as fp:
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(SCORE_HEADER)
        for vid, row in zip(scores.video_ids, scores.scores):
            writer.writerow([vid] + [fmt17(v) for v in row])


def read_scores(path) -> ScoreMatrix:
    with open(path, "r", encoding="utf-8", newline="") as fp:
        reader = csv.reader(fp)
        header = next(reader, None)
        if header is None or tuple(header) != SCORE_HEADER:
            raise ValueError(f"{path}: expected score header {','.join(SCORE_HEADER)}")
        ids = []
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 1 + NUM_CLASSES:
                raise ValueError(f"{path}: line {lineno}: expected {1 + NUM_CLASSES} fields")
            ids.append(row[0])
            try:
                rows.append([float(v) for v in row[1:]])
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: non-numeric score") from None
    if not ids:
        raise ValueError(f"{path}: no score rows")
    return ScoreMatrix(tuple(ids), np.asarray(rows, dtype=np.float64))


def write_weights(weights: ClassWeights, path) -> None:
    """CSV single row of the 7 weights."""
    with open(path, "w", encoding="utf-8", newline="") as fp:
        fp.write(",".join(fmt17(v) for v in weights.weights) + "\n")


def read_weight_row(path) -> np.ndarray:
    """Read one CSV row of 7 numbers (counts or weights; caller decides)."""
    with open(path, "r", encoding="utf-8", newline="") as fp:
        rows = [row for row in csv.reader(fp) if row]
    if len(rows) != 1:
        raise ValueError(f"{path}: expected exactly one row, got {len(rows)}")
    if len(rows[0]) != NUM_CLASSES:
        raise ValueError(f"{path}: expected {NUM_CLASSES} values, got {len(rows[0])}")
    try:
        return np.asarray([float(v) for v in rows[0]], dtype=np.float64)
    except ValueError:
        raise ValueError(f"{path}: non-numeric value in weights row") from None


def write_predictions(video_ids, labels, path) -> None:
    """CSV: id,label with canonical label names."""
    if len(video_ids) != len(labels):
        raise ValueError(f"{len(video_ids)} ids but {len(labels)} labels")
    with open(path, "w", encoding="utf-8", newline="") as fp:
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(PREDICTION_HEADER)
        for vid, label in zip(video_ids, labels):
            writer.writerow([vid, EmotionLabel(label).display_name])


def read_predictions(path):
    """Returns (video_ids, labels) from a predictions CSV."""
    from .core import label_from_name

    with open(path, "r", encoding="utf-8", newline="") as fp:
        reader = csv.reader(fp)
        header = next(reader, None)
        if header is None or tuple(header) != PREDICTION_HEADER:
            raise ValueError(f"{path}: expected header {','.join(PREDICTION_HEADER)}")
        ids = []
        labels = []
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 2:
                raise ValueError(f"{path}: line {lineno}: expected 2 fields")
            ids.append(row[0])
            try:
                labels.append(label_from_name(row[1]))
            except ValueError as exc:
                raise ValueError(f"{path}: line {lineno}: {exc}") from None
    return tuple(ids), labels
