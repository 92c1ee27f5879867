"""Load dataset manifests and per-video feature files; validate shapes.

Formats:
  manifest      line-delimited JSON objects with keys id, split, label
                (name or null) and streams (name -> relative path)
  frame file    CSV header frame,variant,f0,...,f{d-1}; one row per
                (frame, variant); the grid must be rectangular
  audio file    CSV header f0,...,f{d-1} and exactly one data row

Writers serialize floats with 17 significant digits, so write-then-read
reproduces every matrix bit-exactly.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import SPLITS, FrameFeatureSequence, label_from_name
from .util import fmt17


@dataclass(frozen=True)
class ManifestEntry:
    video_id: str
    split: str
    label_name: str | None
    streams: dict  # stream name -> path relative to the manifest


@dataclass(frozen=True)
class Manifest:
    """Entries in file order, plus the directory paths resolve against."""

    entries: tuple
    root: Path

    def resolve(self, entry: ManifestEntry, stream: str) -> Path:
        if stream not in entry.streams:
            raise ValueError(f"video {entry.video_id!r} has no stream {stream!r}")
        return self.root / entry.streams[stream]

    def __len__(self) -> int:
        return len(self.entries)


def load_manifest(path) -> Manifest:
    """Parse a manifest; duplicate ids, bad splits, unknown labels and
    unresolvable stream paths are rejected with the offending line."""
    path = Path(path)
    root = path.parent
    entries = []
    seen = set()
    with open(path, "r", encoding="utf-8") as fp:
        for lineno, line in enumerate(fp, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}: line {lineno}: invalid JSON ({exc.msg})") from None
            if not isinstance(record, dict):
                raise ValueError(f"{path}: line {lineno}: expected a JSON object")
            try:
                video_id = record["id"]
                split = record["split"]
                label = record["label"]
                streams = record["streams"]
            except KeyError as exc:
                raise ValueError(f"{path}: line {lineno}: missing key {exc}") from None
            if not isinstance(video_id, str) or not video_id:
                raise ValueError(f"{path}: line {lineno}: id must be a non-empty string")
            if split not in SPLITS:
                raise ValueError(
                    f"{path}: line {lineno}: bad split {split!r}, expected one of {SPLITS}"
                )
            if label is not None:
                if not isinstance(label, str):
                    raise ValueError(f"{path}: line {lineno}: label must be a string or null")
                label_from_name(label)  # raises on unknown names
            if not isinstance(streams, dict) or not all(
                isinstance(k, str) and isinstance(v, str) for k, v in streams.items()
            ):
                raise ValueError(
                    f"{path}: line {lineno}: streams must map names to relative paths"
                )
            if video_id in seen:
                raise ValueError(f"{path}: line {lineno}: duplicate video id {video_id!r}")
            seen.add(video_id)
            for stream_name, rel in streams.items():
                if not (root / rel).exists():
                    raise ValueError(
                        f"{path}: line {lineno}: stream {stream_name!r} path "
                        f"{rel!r} does not exist"
                    )
            entries.append(ManifestEntry(video_id, split, label, dict(streams)))
    return Manifest(tuple(entries), root)


def write_manifest(entries, path) -> None:
    """Write manifest entries as line-delimited JSON in the given order."""
    with open(path, "w", encoding="utf-8", newline="") as fp:
        for entry in entries:
            record = {
                "id": entry.video_id,
                "split": entry.split,
                "label": entry.label_name,
                "streams": dict(entry.streams),
            }
            fp.write(json.dumps(record) + "\n")


def _parse_float_row(values, path, lineno) -> np.ndarray:
    try:
        row = np.asarray([float(v) for v in values], dtype=np.float64)
    except ValueError:
        raise ValueError(f"{path}: line {lineno}: non-numeric feature value") from None
    if not np.isfinite(row).all():
        raise ValueError(f"{path}: line {lineno}: non-finite value")
    return row


_FRAME_HEADER_PREFIX = ("frame", "variant")


def _check_feature_names(names, path) -> None:
    expected = [f"f{j}" for j in range(len(names))]
    if list(names) != expected:
        raise ValueError(f"{path}: feature columns must be f0..f{len(names) - 1}")


def load_frame_features(path, expected_dim: int | None = None, video_id: str | None = None) -> FrameFeatureSequence:
    """Read a (frame, variant) feature grid into a (T, V, d) sequence.

    Rows may appear in any order; frames and variants are sorted by index.
    Ragged rows, non-finite values, duplicate and missing (frame, variant)
    combinations are rejected.
    """
    path = Path(path)
    with open(path, "r", encoding="utf-8", newline="") as fp:
        reader = csv.reader(fp)
        header = next(reader, None)
        if header is None or len(header) < 3 or tuple(header[:2]) != _FRAME_HEADER_PREFIX:
            raise ValueError(f"{path}: expected header frame,variant,f0,...")
        _check_feature_names(header[2:], path)
        dim = len(header) - 2
        if expected_dim is not None and dim != expected_dim:
            raise ValueError(f"{path}: dimension {dim}, expected {expected_dim}")
        cells = {}
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise ValueError(
                    f"{path}: line {lineno}: {len(row)} fields, expected {len(header)}"
                )
            try:
                frame = int(row[0])
                variant = int(row[1])
            except ValueError:
                raise ValueError(
                    f"{path}: line {lineno}: frame and variant must be integers"
                ) from None
            if (frame, variant) in cells:
                raise ValueError(
                    f"{path}: line {lineno}: duplicate (frame, variant) = ({frame}, {variant})"
                )
            cells[(frame, variant)] = _parse_float_row(row[2:], path, lineno)
    if not cells:
        raise ValueError(f"{path}: no feature rows")
    frame_ids = sorted({f for f, _ in cells})
    variant_ids = sorted({v for _, v in cells})
    if len(cells) != len(frame_ids) * len(variant_ids):
        raise ValueError(
            f"{path}: non-rectangular grid: {len(cells)} rows for "
            f"{len(frame_ids)} frames x {len(variant_ids)} variants"
        )
    arr = np.empty((len(frame_ids), len(variant_ids), dim), dtype=np.float64)
    for t, frame in enumerate(frame_ids):
        for v, variant in enumerate(variant_ids):
            if (frame, variant) not in cells:
                raise ValueError(
                    f"{path}: missing (frame, variant) = ({frame}, {variant})"
                )
            arr[t, v] = cells[(frame, variant)]
    return FrameFeatureSequence(video_id or path.stem, arr)


def write_frame_features(seq: FrameFeatureSequence, path) -> None:
    """Write a sequence in the frame-feature CSV format (canonical indices)."""
    with open(path, "w", encoding="utf-8", newline="") as fp:
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow(["frame", "variant"] + [f"f{j}" for j in range(seq.dim)])
        for t in range(seq.num_frames):
            for v in range(seq.num_variants):
                writer.writerow([t, v] + [fmt17(x) for x in seq.frames[t, v]])


def load_audio_features(path) -> np.ndarray:
    """Read a single-row audio feature vector; the dimension is whatever
    the file carries (1582 for the usual audio stream, but unconstrained)."""
    path = Path(path)
    with open(path, "r", encoding="utf-8", newline="") as fp:
        reader = csv.reader(fp)
        header = next(reader, None)
        if header is None or not header:
            raise ValueError(f"{path}: missing header f0,...")
        _check_feature_names(header, path)
        rows = [row for row in reader if row]
    if len(rows) != 1:
        raise ValueError(f"{path}: expected exactly one data row, got {len(rows)}")
    if len(rows[0]) != len(header):
        raise ValueError(f"{path}: line 2: {len(rows[0])} fields, expected {len(header)}")
    return _parse_float_row(rows[0], path, 2)


def write_audio_features(vector, path) -> None:
    """Write a 1-D audio feature vector in the audio CSV format."""
    arr = np.asarray(vector, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("audio features must be a non-empty 1-D vector")
    with open(path, "w", encoding="utf-8", newline="") as fp:
        writer = csv.writer(fp, lineterminator="\n")
        writer.writerow([f"f{j}" for j in range(arr.size)])
        writer.writerow([fmt17(x) for x in arr])


def sniff_stream_kind(path) -> str:
    """Peek at a feature file's header: 'frames' or 'audio'."""
    with open(path, "r", encoding="utf-8", newline="") as fp:
        header = fp.readline().strip()
    if header.startswith("frame,variant,"):
        return "frames"
    if header.startswith("f0"):
        return "audio"
    raise ValueError(f"{path}: unrecognized feature file header")
