"""Feature streams, segmentations, boundary sets, and their file formats.

Binary feature files ("OTFS"):
    magic    4 bytes  b"OTFS"
    version  u32 LE   currently 1
    dim      u32 LE   D
    frames   u64 LE   L
    fps_num  u32 LE   fps numerator
    fps_den  u32 LE   fps denominator
    data     L*D IEEE-754 f32 LE, frame-major

Text formats: label files carry one token per line (exactly L lines);
boundary files carry one decimal frame index per line, ascending.
CSV feature files carry one frame per row, D decimal floats, no header.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

MAGIC = b"OTFS"
FORMAT_VERSION = 1

_HEADER = struct.Struct("<4sIIQII")


class FormatError(ValueError):
    """Raised when a feature file is malformed or truncated."""


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class FeatureSequence:
    """L x D matrix of per-frame float32 feature vectors for one stream."""

    data: np.ndarray
    fps: Fraction = Fraction(5)

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float32)
        if data.ndim != 2:
            raise ValueError(f"expected a 2-D (L, D) array, got shape {data.shape}")
        if data.shape[0] < 1 or data.shape[1] < 1:
            raise ValueError(f"need L >= 1 and D >= 1, got shape {data.shape}")
        if not np.all(np.isfinite(data)):
            raise ValueError("feature values must be finite")
        fps = Fraction(self.fps)
        if fps <= 0:
            raise ValueError(f"fps must be positive, got {fps}")
        object.__setattr__(self, "data", _freeze(data))
        object.__setattr__(self, "fps", fps)

    @property
    def num_frames(self) -> int:
        return self.data.shape[0]

    @property
    def dim(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class Segmentation:
    """Per-frame label sequence; one non-empty token per frame."""

    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(self.labels)
        if len(labels) < 1:
            raise ValueError("segmentation must cover at least one frame")
        if any(not lab for lab in labels):
            raise ValueError("labels must be non-empty tokens")
        object.__setattr__(self, "labels", labels)

    @property
    def num_frames(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class BoundarySet:
    """Sorted boundary frame indices; index b starts a new segment.

    Indices are 0-based and lie in [1, L-1]; a video with M segments
    carries M-1 boundaries.
    """

    frames: tuple[int, ...]
    num_frames: int

    def __post_init__(self):
        frames = tuple(int(f) for f in self.frames)
        if self.num_frames < 1:
            raise ValueError("num_frames must be >= 1")
        if any(b <= a for a, b in zip(frames, frames[1:])):
            raise ValueError("boundary frames must be strictly increasing")
        if frames and (frames[0] < 1 or frames[-1] > self.num_frames - 1):
            raise ValueError(
                f"boundaries must lie in [1, {self.num_frames - 1}], got {frames}"
            )
        object.__setattr__(self, "frames", frames)

    @property
    def num_segments(self) -> int:
        return len(self.frames) + 1


def segmentation_to_boundaries(seg: Segmentation) -> BoundarySet:
    """Boundary at every frame whose label differs from its predecessor."""
    frames = [
        i
        for i in range(1, seg.num_frames)
        if seg.labels[i] != seg.labels[i - 1]
    ]
    return BoundarySet(frames=tuple(frames), num_frames=seg.num_frames)


def boundaries_to_segmentation(b: BoundarySet) -> Segmentation:
    """Assign synthetic segment ids "s0", "s1", ... between boundaries."""
    labels = []
    seg_idx = 0
    cuts = set(b.frames)
    for i in range(b.num_frames):
        if i in cuts:
            seg_idx += 1
        labels.append(f"s{seg_idx}")
    return Segmentation(labels=tuple(labels))


def save_features(seq: FeatureSequence, path: str | Path) -> None:
    path = Path(path)
    header = _HEADER.pack(
        MAGIC,
        FORMAT_VERSION,
        seq.dim,
        seq.num_frames,
        seq.fps.numerator,
        seq.fps.denominator,
    )
    payload = np.asarray(seq.data, dtype="<f4").tobytes(order="C")
    path.write_bytes(header + payload)


def load_features(path: str | Path) -> FeatureSequence:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise FormatError(f"{path}: file shorter than header")
    magic, version, dim, frames, fps_num, fps_den = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}")
    if version != FORMAT_VERSION:
        raise FormatError(f"{path}: unsupported version {version}")
    if dim < 1 or frames < 1:
        raise FormatError(f"{path}: invalid dimensions L={frames}, D={dim}")
    if fps_den == 0:
        raise FormatError(f"{path}: zero fps denominator")
    expected = frames * dim * 4
    payload = raw[_HEADER.size:]
    if len(payload) != expected:
        raise FormatError(
            f"{path}: payload holds {len(payload)} bytes, header declares {expected}"
        )
    data = np.frombuffer(payload, dtype="<f4").reshape(frames, dim)
    if not np.all(np.isfinite(data)):
        raise FormatError(f"{path}: non-finite feature values")
    return FeatureSequence(data=data, fps=Fraction(fps_num, fps_den))


def save_features_csv(seq: FeatureSequence, path: str | Path) -> None:
    np.savetxt(path, seq.data, delimiter=",", fmt="%.9g")


def load_features_csv(path: str | Path, fps: Fraction = Fraction(5)) -> FeatureSequence:
    data = np.loadtxt(path, delimiter=",", dtype=np.float64, ndmin=2)
    return FeatureSequence(data=data.astype(np.float32), fps=fps)


def save_labels(seg: Segmentation, path: str | Path) -> None:
    Path(path).write_text("".join(lab + "\n" for lab in seg.labels), encoding="utf-8")


def load_labels(path: str | Path) -> Segmentation:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return Segmentation(labels=tuple(line.strip() for line in lines if line.strip()))


def save_boundaries(b: BoundarySet, path: str | Path) -> None:
    Path(path).write_text("".join(f"{f}\n" for f in b.frames), encoding="utf-8")


def load_boundaries(path: str | Path, num_frames: int) -> BoundarySet:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    frames = tuple(int(line) for line in lines if line.strip())
    return BoundarySet(frames=frames, num_frames=num_frames)
