"""L2-regularized hinge-loss linear SVM, trained in the dual.

train_binary minimizes

    P(w) = 1/2 ||w||^2 + C * sum_i max(0, 1 - y_i w.x_i)

by coordinate descent on the L1-hinge dual

    max_a  sum_i a_i - 1/2 ||sum_i a_i y_i x_i||^2,  0 <= a_i <= C,

cycling coordinates in a freshly shuffled order each epoch. Each update is
the exact single-variable minimizer clipped to the box, so the dual
objective never decreases. Multiclass is one-vs-rest; model selection is
stratified k-fold cross-validation over a grid of C values with the
normalization chain re-fit inside every fold.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .core import EMOTION_NAMES, NUM_CLASSES, EmotionLabel, ScoreMatrix
from .normalize import (
    NormalizationConfig,
    NormalizationParams,
    RangeScalerParams,
    StandardizerParams,
    apply_normalization,
    fit_normalization,
)
from .util import dumps_17g

MODEL_FORMAT_VERSION = 1

# coordinate updates below this projected-gradient magnitude are skipped
_UPDATE_EPS = 1e-12


@dataclass(frozen=True)
class SvmTrainConfig:
    C: float = 1.0
    tolerance: float = 1e-4
    max_epochs: int = 1000
    seed: int = 0
    bias: bool = True  # realized as an appended constant-1 feature

    def __post_init__(self):
        if not self.C > 0:
            raise ValueError(f"C must be positive, got {self.C}")
        if not self.tolerance > 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_epochs < 1:
            raise ValueError(f"max_epochs must be >= 1, got {self.max_epochs}")


@dataclass(frozen=True, eq=False)
class SolverInfo:
    """Diagnostics from one binary solve."""

    alpha: np.ndarray
    epochs: int
    converged: bool
    dual_objectives: tuple = ()


@dataclass(frozen=True, eq=False)
class LinearSvmModel:
    """One-vs-rest weight vectors plus the normalization that fed them."""

    weights: np.ndarray  # (7, D) or (7, D+1) with bias
    config: SvmTrainConfig
    norm_config: NormalizationConfig = NormalizationConfig()
    range_scaler: RangeScalerParams | None = None
    standardizer: StandardizerParams | None = None
    format_version: int = MODEL_FORMAT_VERSION

    def __post_init__(self):
        arr = np.array(self.weights, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != NUM_CLASSES:
            raise ValueError(f"weights must be ({NUM_CLASSES}, D), got {arr.shape}")
        if not np.isfinite(arr).all():
            raise ValueError("non-finite weight")
        arr.setflags(write=False)
        object.__setattr__(self, "weights", arr)

    @property
    def normalization(self) -> NormalizationParams:
        return NormalizationParams(self.norm_config, self.range_scaler, self.standardizer)


def add_bias_column(X: np.ndarray) -> np.ndarray:
    """Append a constant-1 feature column."""
    X = np.asarray(X, dtype=np.float64)
    return np.hstack([X, np.ones((X.shape[0], 1))])


def primal_objective(w: np.ndarray, X: np.ndarray, y: np.ndarray, C: float) -> float:
    """1/2 ||w||^2 + C * sum of hinge losses on (X, y) as given."""
    margins = y * (X @ w)
    hinge = np.maximum(0.0, 1.0 - margins).sum()
    return 0.5 * float(w @ w) + C * float(hinge)


def dual_objective(alpha: np.ndarray, X: np.ndarray, y: np.ndarray) -> float:
    """sum(alpha) - 1/2 ||sum_i alpha_i y_i x_i||^2 on (X, y) as given."""
    w = (alpha * y) @ X
    return float(alpha.sum()) - 0.5 * float(w @ w)


def _validate_binary_inputs(X, y):
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"X must be 2-D, got ndim={X.ndim}")
    if y.shape != (X.shape[0],):
        raise ValueError(f"y has shape {y.shape}, expected ({X.shape[0]},)")
    if X.shape[0] < 1:
        raise ValueError("need at least one training sample")
    if not np.isfinite(X).all():
        raise ValueError("non-finite value in X")
    if not np.isin(y, (-1.0, 1.0)).all():
        raise ValueError("labels must be +1 or -1")
    return X, y


def train_binary(
    X: np.ndarray,
    y: np.ndarray,
    cfg: SvmTrainConfig,
    debug: bool = False,
    full_output: bool = False,
):
    """Train one binary SVM; returns the weight vector.

    The coordinate order is reshuffled every epoch with a generator seeded
    from cfg.seed; training stops once the largest projected-gradient
    violation in an epoch drops below cfg.tolerance, or at max_epochs.
    With debug=True the dual objective is recomputed each epoch and checked
    to be non-decreasing with every alpha inside [0, C]. With
    full_output=True returns (w, SolverInfo).

    Both classes need not be present; an all-one-class problem is legal.
    """
    X, y = _validate_binary_inputs(X, y)
    if cfg.bias:
        X = add_bias_column(X)
    n = X.shape[0]
    C = float(cfg.C)

    sq_norms = np.einsum("ij,ij->i", X, X)
    alpha = np.zeros(n)
    w = np.zeros(X.shape[1])
    rng = np.random.default_rng(cfg.seed)

    dual_prev = 0.0  # dual value at alpha = 0
    dual_trace = []
    converged = False
    epochs = 0
    for _ in range(cfg.max_epochs):
        epochs += 1
        order = rng.permutation(n)
        max_violation = 0.0
        for i in order:
            xi = X[i]
            grad = y[i] * float(w @ xi) - 1.0
            a = alpha[i]
            if a <= 0.0:
                projected = min(grad, 0.0)
            elif a >= C:
                projected = max(grad, 0.0)
            else:
                projected = grad
            violation = abs(projected)
            if violation > max_violation:
                max_violation = violation
            if violation > _UPDATE_EPS and sq_norms[i] > 0.0:
                new_a = min(max(a - grad / sq_norms[i], 0.0), C)
                delta = new_a - a
                if delta != 0.0:
                    w += (delta * y[i]) * xi
                    alpha[i] = new_a
        if debug:
            assert (alpha >= 0.0).all() and (alpha <= C).all(), "alpha left [0, C]"
            dual = dual_objective(alpha, X, y)
            assert dual >= dual_prev - 1e-9 * (1.0 + abs(dual_prev)), (
                f"dual objective decreased: {dual_prev} -> {dual}"
            )
            dual_trace.append(dual)
            dual_prev = dual
        if max_violation < cfg.tolerance:
            converged = True
            break

    # recover w exactly from the duals, discarding incremental-update drift
    w = (alpha * y) @ X
    if full_output:
        return w, SolverInfo(alpha, epochs, converged, tuple(dual_trace))
    return w


def train_ovr(
    X: np.ndarray,
    labels,
    cfg: SvmTrainConfig,
    norm_config: NormalizationConfig = NormalizationConfig(),
    range_scaler: RangeScalerParams | None = None,
    standardizer: StandardizerParams | None = None,
    debug: bool = False,
) -> LinearSvmModel:
    """Train 7 independent class-vs-rest problems with identical config.

    Each class gets a fresh generator seeded with cfg.seed + class index.
    X is expected to be already normalized; the fitted normalization
    params are carried on the model for serialization.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    label_idx = np.asarray([int(EmotionLabel(l)) for l in labels])
    if X.shape[0] != label_idx.size:
        raise ValueError(f"{X.shape[0]} rows but {label_idx.size} labels")
    if X.shape[0] < 1:
        raise ValueError("need at least one training sample")
    weight_rows = []
    for c in range(NUM_CLASSES):
        y = np.where(label_idx == c, 1.0, -1.0)
        w = train_binary(X, y, replace(cfg, seed=cfg.seed + c), debug=debug)
        weight_rows.append(w)
    return LinearSvmModel(
        np.stack(weight_rows), cfg, norm_config, range_scaler, standardizer
    )


def decision_scores(model: LinearSvmModel, X: np.ndarray, video_ids=None) -> ScoreMatrix:
    """Raw decision values w_c . x_i for every (video, class) pair."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError(f"X must be 2-D, got ndim={X.ndim}")
    if model.config.bias:
        X = add_bias_column(X)
    if X.shape[1] != model.weights.shape[1]:
        raise ValueError(
            f"dimension mismatch: inputs have {X.shape[1]} features "
            f"(bias included), model expects {model.weights.shape[1]}"
        )
    if video_ids is None:
        video_ids = tuple(str(i) for i in range(X.shape[0]))
    return ScoreMatrix(tuple(video_ids), X @ model.weights.T)


def stratified_folds(labels, folds: int, seed: int, ids=None) -> np.ndarray:
    """Assign each sample to a fold, stratified by label.

    Within each class, samples are ordered by id when ids are given (data
    order otherwise), shuffled with the seeded generator, then dealt
    round-robin; a global deal counter keeps fold sizes balanced.
    """
    label_idx = np.asarray([int(EmotionLabel(l)) for l in labels])
    n = label_idx.size
    if folds < 2:
        raise ValueError(f"folds must be >= 2, got {folds}")
    if n < folds:
        raise ValueError(f"cannot build {folds} folds from {n} samples")
    rng = np.random.default_rng(seed)
    fold_of = np.empty(n, dtype=np.int64)
    counter = 0
    for c in range(NUM_CLASSES):
        members = np.flatnonzero(label_idx == c)
        if members.size == 0:
            continue
        if ids is not None:
            members = members[np.argsort([str(ids[i]) for i in members], kind="stable")]
        members = members[rng.permutation(members.size)]
        for i in members:
            fold_of[i] = counter % folds
            counter += 1
    return fold_of


def cross_validate_c(
    X: np.ndarray,
    labels,
    grid,
    cfg: SvmTrainConfig = SvmTrainConfig(),
    folds: int = 5,
    seed: int = 0,
    norm_config: NormalizationConfig = NormalizationConfig(),
    ids=None,
):
    """Pick the regularization constant by stratified k-fold CV.

    For each fold the normalization chain is re-fit on that fold's
    training portion only. Returns (best C, list of per-C mean accuracies
    aligned with the grid); ties go to the smallest C.
    """
    grid = [float(c) for c in grid]
    if not grid:
        raise ValueError("empty C grid")
    if any(c <= 0 for c in grid):
        raise ValueError("C values must be positive")
    X = np.asarray(X, dtype=np.float64)
    label_idx = np.asarray([int(EmotionLabel(l)) for l in labels])
    fold_of = stratified_folds(label_idx, folds, seed, ids=ids)

    # normalization depends only on the fold split, not on C
    prepared = []
    for k in range(folds):
        train_mask = fold_of != k
        params = fit_normalization(X[train_mask], norm_config)
        prepared.append(
            (
                apply_normalization(X[train_mask], params),
                label_idx[train_mask],
                apply_normalization(X[~train_mask], params),
                label_idx[~train_mask],
            )
        )

    mean_accuracies = []
    for c_value in grid:
        fold_accs = []
        for train_x, train_y, val_x, val_y in prepared:
            model = train_ovr(train_x, train_y, replace(cfg, C=c_value))
            scores = decision_scores(model, val_x).scores
            predicted = scores.argmax(axis=1)
            fold_accs.append(float((predicted == val_y).mean()))
        mean_accuracies.append(float(np.mean(fold_accs)))

    best = max(range(len(grid)), key=lambda i: (mean_accuracies[i], -grid[i]))
    return grid[best], mean_accuracies


def model_to_dict(model: LinearSvmModel) -> dict:
    cfg = model.config
    doc = {
        "format_version": model.format_version,
        "config": {
            "C": float(cfg.C),
            "tolerance": float(cfg.tolerance),
            "max_epochs": int(cfg.max_epochs),
            "seed": int(cfg.seed),
            "bias": bool(cfg.bias),
            "normalization": {
                "range_scale": model.norm_config.range_scale,
                "rootsift": model.norm_config.rootsift,
                "standardize": model.norm_config.standardize,
            },
        },
        "range_scaler": None,
        "standardizer": None,
        "weights": [list(map(float, row)) for row in model.weights],
        "label_order": list(EMOTION_NAMES),
    }
    if model.range_scaler is not None:
        doc["range_scaler"] = {
            "mins": list(map(float, model.range_scaler.mins)),
            "maxs": list(map(float, model.range_scaler.maxs)),
        }
    if model.standardizer is not None:
        doc["standardizer"] = {
            "means": list(map(float, model.standardizer.means)),
            "stds": list(map(float, model.standardizer.stds)),
        }
    return doc


def model_from_dict(doc: dict) -> LinearSvmModel:
    version = doc.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format_version: {version!r}")
    if tuple(doc.get("label_order", ())) != EMOTION_NAMES:
        raise ValueError(f"unexpected label order: {doc.get('label_order')!r}")
    cfg_doc = doc["config"]
    cfg = SvmTrainConfig(
        C=float(cfg_doc["C"]),
        tolerance=float(cfg_doc["tolerance"]),
        max_epochs=int(cfg_doc["max_epochs"]),
        seed=int(cfg_doc["seed"]),
        bias=bool(cfg_doc["bias"]),
    )
    norm_doc = cfg_doc.get("normalization", {})
    norm_config = NormalizationConfig(
        range_scale=bool(norm_doc.get("range_scale", True)),
        rootsift=bool(norm_doc.get("rootsift", True)),
        standardize=bool(norm_doc.get("standardize", True)),
    )
    range_scaler = None
    if doc.get("range_scaler") is not None:
        range_scaler = RangeScalerParams(
            np.asarray(doc["range_scaler"]["mins"], dtype=np.float64),
            np.asarray(doc["range_scaler"]["maxs"], dtype=np.float64),
        )
    standardizer = None
    if doc.get("standardizer") is not None:
        standardizer = StandardizerParams(
            np.asarray(doc["standardizer"]["means"], dtype=np.float64),
            np.asarray(doc["standardizer"]["stds"], dtype=np.float64),
        )
    weights = np.asarray(doc["weights"], dtype=np.float64)
    return LinearSvmModel(weights, cfg, norm_config, range_scaler, standardizer)


def save_model(model: LinearSvmModel, path) -> None:
    """Write the model as a single JSON document (floats at 17 digits)."""
    Path(path).write_text(dumps_17g(model_to_dict(model)), encoding="utf-8")


def load_model(path) -> LinearSvmModel:
    with open(path, "r", encoding="utf-8") as fp:
        try:
            doc = json.load(fp)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not valid JSON: {exc}") from None
    return model_from_dict(doc)
