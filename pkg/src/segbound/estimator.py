"""sklearn-style wrappers around the detection pipeline."""

from __future__ import annotations

from typing import Mapping

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array

from .features import FeatureSequence
from .fusion import FusionConfig, equal_split
from .pipeline import DEFAULT_MIN_REL_HEIGHT, detect_boundaries


def _as_streams(X) -> dict[str, FeatureSequence]:
    if isinstance(X, Mapping):
        return {
            sid: seq if isinstance(seq, FeatureSequence)
            else FeatureSequence(data=check_array(seq, dtype=np.float32))
            for sid, seq in X.items()
        }
    if isinstance(X, FeatureSequence):
        return {"global": X}
    arr = check_array(X, dtype=np.float32)
    return {"global": FeatureSequence(data=arr)}


class BoundaryDetector(BaseEstimator):
    """Detects temporal segment boundaries in per-frame feature streams.

    The detector is training-free: fit only validates the input shape.
    predict accepts an (L, D) array, a FeatureSequence, or a mapping of
    stream id ("global", "interact", "relation", or free tags) to either,
    and returns the sorted boundary frame indices.
    """

    def __init__(
        self,
        k: int = 5,
        alpha: int = 15,
        beta_global: float = 1.0,
        beta_interact: float = 1.0,
        beta_relation: float = 0.3,
        theta_n: int = 10,
        normalize: str = "max",
        salience_factor: float = 2.0,
        min_rel_height: float = DEFAULT_MIN_REL_HEIGHT,
    ):
        self.k = k
        self.alpha = alpha
        self.beta_global = beta_global
        self.beta_interact = beta_interact
        self.beta_relation = beta_relation
        self.theta_n = theta_n
        self.normalize = normalize
        self.salience_factor = salience_factor
        self.min_rel_height = min_rel_height

    def _config(self) -> FusionConfig:
        return FusionConfig(
            beta_global=self.beta_global,
            beta_interact=self.beta_interact,
            beta_relation=self.beta_relation,
            theta_n=self.theta_n,
            normalize=self.normalize,
            salience_factor=self.salience_factor,
        )

    def fit(self, X, y=None):
        streams = _as_streams(X)
        self._config()  # validate parameters early
        self.n_features_in_ = next(iter(streams.values())).dim
        return self

    def predict(self, X) -> np.ndarray:
        result = self.detect(X)
        return np.asarray(result.boundaries.frames, dtype=np.int64)

    def detect(self, X):
        """Like predict, but returns the full FusionResult with provenance."""
        return detect_boundaries(
            _as_streams(X),
            k=self.k,
            alpha=self.alpha,
            cfg=self._config(),
            min_rel_height=self.min_rel_height,
        )


class EqualSplitBaseline(BaseEstimator):
    """Places boundaries at equal intervals, ignoring the features."""

    def __init__(self, n_segments: int = 2):
        self.n_segments = n_segments

    def fit(self, X, y=None):
        return self

    def predict(self, X) -> np.ndarray:
        streams = _as_streams(X)
        length = next(iter(streams.values())).num_frames
        return np.asarray(
            equal_split(length, self.n_segments).frames, dtype=np.int64
        )
