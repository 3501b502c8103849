"""End-to-end boundary detection: difference -> candidates -> voting."""

from __future__ import annotations

from typing import Mapping

from .candidates import detect_candidates
from .diff import compute_difference
from .features import FeatureSequence
from .fusion import FusionConfig, FusionResult, confidence_scores, select_boundaries

DEFAULT_K = 5
DEFAULT_ALPHA = 15
# Candidates whose difference value falls below this fraction of the
# stream maximum carry no usable change evidence and are dropped before
# voting; scale-invariant.
DEFAULT_MIN_REL_HEIGHT = 0.3


def detect_boundaries(
    streams: Mapping[str, FeatureSequence],
    k: int = DEFAULT_K,
    alpha: int = DEFAULT_ALPHA,
    cfg: FusionConfig | None = None,
    min_rel_height: float = DEFAULT_MIN_REL_HEIGHT,
) -> FusionResult:
    """Run the full pipeline over one or more feature streams of equal
    length and return fused boundaries with provenance."""
    if not streams:
        raise ValueError("need at least one feature stream")
    lengths = {seq.num_frames for seq in streams.values()}
    if len(lengths) != 1:
        raise ValueError(f"streams disagree on length: {sorted(lengths)}")
    cfg = cfg or FusionConfig()
    series = {
        sid: compute_difference(seq, k) for sid, seq in streams.items()
    }
    cands = {
        sid: detect_candidates(s, alpha, stream_id=sid, min_rel_height=min_rel_height)
        for sid, s in series.items()
    }
    scores = confidence_scores(series, cfg)
    return select_boundaries(cands, scores, cfg)
