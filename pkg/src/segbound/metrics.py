"""Boundary-level F1 and Hungarian-matched frame accuracy (MoF)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .features import (
    BoundarySet,
    Segmentation,
    boundaries_to_segmentation,
)

SMALL_THRESHOLD_SECONDS = 2.0
LARGE_THRESHOLD_FRACTION = 0.05


@dataclass(frozen=True)
class F1Report:
    precision: float
    recall: float
    f1: float
    matched: int
    num_pred: int
    num_gt: int
    threshold_frames: int
    mode: str = "strict"


@dataclass(frozen=True)
class MofReport:
    mof: float
    correct_frames: int
    total_frames: int
    assignment: Mapping[str, str]


@dataclass(frozen=True)
class VideoReport:
    f1_small: F1Report
    f1_large: F1Report
    mof: MofReport


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def f1_threshold(num_frames: int, fps: float | Fraction, mode: str) -> int:
    """Acceptance distance in frames: fixed 2 seconds ("small") or 5% of
    the video duration ("large")."""
    if num_frames < 1:
        raise ValueError("num_frames must be >= 1")
    if fps <= 0:
        raise ValueError("fps must be positive")
    if mode == "small":
        return _round_half_up(SMALL_THRESHOLD_SECONDS * float(fps))
    if mode == "large":
        return _round_half_up(LARGE_THRESHOLD_FRACTION * num_frames)
    raise ValueError(f"unknown threshold mode {mode!r}")


def _max_matching(gt: Sequence[int], pred: Sequence[int], threshold: int) -> int:
    """Maximum one-to-one matching size over pairs within the threshold,
    via augmenting paths."""
    adj = [
        [j for j, p in enumerate(pred) if abs(p - g) <= threshold]
        for g in gt
    ]
    match_of_pred: dict[int, int] = {}

    def augment(u: int, seen: set[int]) -> bool:
        for v in adj[u]:
            if v in seen:
                continue
            seen.add(v)
            if v not in match_of_pred or augment(match_of_pred[v], seen):
                match_of_pred[v] = u
                return True
        return False

    return sum(augment(u, set()) for u in range(len(gt)))


def boundary_f1(
    pred: BoundarySet,
    gt: BoundarySet,
    threshold: int,
    mode: str = "strict",
) -> F1Report:
    """Boundary detection score.

    strict: P is the maximum one-to-one matching between GT and predicted
    boundaries over pairs within the threshold, used for both precision
    and recall. paper: every GT boundary independently takes its nearest
    prediction; recall counts GT hits, precision counts distinct
    predictions so used.
    """
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    gt_frames = list(gt.frames)
    pred_frames = list(pred.frames)
    n, m = len(pred_frames), len(gt_frames)

    if m == 0 and n == 0:
        return F1Report(1.0, 1.0, 1.0, 0, 0, 0, threshold, mode)

    if mode == "strict":
        matched = _max_matching(gt_frames, pred_frames, threshold)
        hits, used = matched, matched
    elif mode == "paper":
        used_preds = set()
        hits = 0
        for g in gt_frames:
            nearest = min(pred_frames, key=lambda p: (abs(p - g), p), default=None)
            if nearest is not None and abs(nearest - g) <= threshold:
                hits += 1
                used_preds.add(nearest)
        matched, used = hits, len(used_preds)
    else:
        raise ValueError(f"unknown matching mode {mode!r}")

    precision = used / n if n else 0.0
    recall = hits / m if m else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return F1Report(precision, recall, f1, matched, n, m, threshold, mode)


def hungarian(matrix: Sequence[Sequence[float]]) -> tuple[dict[int, int], float]:
    """Injective row-to-column assignment maximizing total value; rectangular
    inputs assign min(n, m) rows. Returns (assignment, total)."""
    values = np.asarray(matrix, dtype=np.float64)
    if values.ndim != 2 or values.size == 0:
        raise ValueError("need a non-empty 2-D matrix")
    if not np.all(np.isfinite(values)):
        raise ValueError("matrix entries must be finite")
    rows, cols = linear_sum_assignment(values, maximize=True)
    assignment = {int(r): int(c) for r, c in zip(rows, cols)}
    return assignment, float(values[rows, cols].sum())


def mof(pred: Segmentation, gt: Segmentation) -> MofReport:
    """Fraction of frames correct after the optimal injective mapping of
    predicted labels onto ground-truth labels."""
    if pred.num_frames != gt.num_frames:
        raise ValueError(
            f"length mismatch: pred {pred.num_frames} vs gt {gt.num_frames}"
        )
    length = gt.num_frames
    pred_labels = sorted(set(pred.labels))
    gt_labels = sorted(set(gt.labels))
    pred_idx = {lab: i for i, lab in enumerate(pred_labels)}
    gt_idx = {lab: i for i, lab in enumerate(gt_labels)}
    overlap = np.zeros((len(pred_labels), len(gt_labels)), dtype=np.int64)
    for p, g in zip(pred.labels, gt.labels):
        overlap[pred_idx[p], gt_idx[g]] += 1
    assignment, total = hungarian(overlap)
    mapping = {
        pred_labels[r]: gt_labels[c]
        for r, c in assignment.items()
        if overlap[r, c] > 0
    }
    correct = int(total)
    return MofReport(
        mof=correct / length,
        correct_frames=correct,
        total_frames=length,
        assignment=mapping,
    )


def evaluate_video(
    pred_boundaries: BoundarySet,
    gt: Segmentation,
    fps: float | Fraction,
) -> VideoReport:
    """Boundary F1 at both thresholds plus MoF with synthetic segment ids."""
    if pred_boundaries.num_frames != gt.num_frames:
        raise ValueError("prediction and ground truth cover different lengths")
    from .features import segmentation_to_boundaries

    gt_boundaries = segmentation_to_boundaries(gt)
    length = gt.num_frames
    small = boundary_f1(
        pred_boundaries, gt_boundaries, f1_threshold(length, fps, "small")
    )
    large = boundary_f1(
        pred_boundaries, gt_boundaries, f1_threshold(length, fps, "large")
    )
    mof_report = mof(boundaries_to_segmentation(pred_boundaries), gt)
    return VideoReport(f1_small=small, f1_large=large, mof=mof_report)


def dataset_mean(values: Sequence[float]) -> float:
    """Unweighted per-video mean."""
    if not values:
        raise ValueError("no videos to average")
    return float(np.mean(values))
