"""Temporal feature difference: change signal between adjacent frame windows."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .features import FeatureSequence


@dataclass(frozen=True)
class DifferenceSeries:
    """Per-frame window-difference values; zero and non-candidate outside
    the valid index range [k, L-k]."""

    values: np.ndarray
    k: int

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def num_frames(self) -> int:
        return len(self.values)

    @property
    def valid_range(self) -> tuple[int, int]:
        """Inclusive (lo, hi); empty (lo > hi) when L < 2k."""
        return self.k, self.num_frames - self.k


def compute_difference(seq: FeatureSequence, k: int) -> DifferenceSeries:
    """Accumulated squared L2 distance between the k frames before index i
    and the k frames starting at i, for i in [k, L-k]; zero elsewhere.

    Accumulates in float64 regardless of input dtype.
    """
    if k < 1:
        raise ValueError(f"window length must be >= 1, got {k}")
    x = np.asarray(seq.data, dtype=np.float64)
    length = seq.num_frames
    values = np.zeros(length, dtype=np.float64)
    if length >= 2 * k:
        # pairwise[t] = ||f[t] - f[t+k]||^2; values[i] sums pairwise[i-k : i]
        pairwise = ((x[k:] - x[:-k]) ** 2).sum(axis=1)
        csum = np.concatenate(([0.0], np.cumsum(pairwise)))
        values[k:length - k + 1] = csum[k:length - k + 1] - csum[:length - 2 * k + 1]
    return DifferenceSeries(values=values, k=k)
