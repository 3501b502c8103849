"""Boundary candidates: local maxima of a difference series within a radius."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diff import DifferenceSeries


@dataclass(frozen=True)
class CandidateSet:
    """Candidate boundary frames with their difference values, per stream."""

    entries: tuple[tuple[int, float], ...]
    alpha: int
    stream_id: str = "default"

    @property
    def frames(self) -> tuple[int, ...]:
        return tuple(f for f, _ in self.entries)


def detect_candidates(
    series: DifferenceSeries,
    alpha: int,
    stream_id: str = "default",
    min_rel_height: float = 0.0,
) -> CandidateSet:
    """Frames whose value is maximal over [i-alpha, i+alpha] within the
    valid range; plateaus of equal maxima keep only their earliest frame,
    and zero values are never candidates.

    min_rel_height additionally drops candidates below that fraction of
    the series maximum (scale-invariant); 0 disables the filter.
    """
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    if not 0.0 <= min_rel_height < 1.0:
        raise ValueError(f"min_rel_height must be in [0, 1), got {min_rel_height}")
    lo, hi = series.valid_range
    values = series.values
    entries: list[tuple[int, float]] = []
    if lo <= hi:
        height_floor = min_rel_height * values[lo:hi + 1].max()
        for i in range(lo, hi + 1):
            v = values[i]
            if v <= 0.0 or v < height_floor:
                continue
            w0 = max(i - alpha, lo)
            w1 = min(i + alpha, hi)
            window = values[w0:w1 + 1]
            if v < window.max():
                continue
            if np.any(values[w0:i] == v):
                continue  # later frame of a tied plateau
            entries.append((i, float(v)))
    return CandidateSet(entries=tuple(entries), alpha=alpha, stream_id=stream_id)
