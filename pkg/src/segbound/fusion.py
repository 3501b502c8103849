"""Fuse per-stream boundary candidates into final boundaries by
confidence-weighted voting."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .candidates import CandidateSet
from .diff import DifferenceSeries
from .features import BoundarySet

STREAM_GLOBAL = "global"
STREAM_INTERACT = "interact"
STREAM_RELATION = "relation"


@dataclass(frozen=True)
class FusionConfig:
    """Voting parameters.

    theta_n is a neighborhood radius in frames. normalize="max" divides
    each stream's difference series by its maximum over the valid range
    before weighting; "none" uses raw values. Unknown stream tags weigh 1.
    """

    beta_global: float = 1.0
    beta_interact: float = 1.0
    beta_relation: float = 0.3
    theta_n: int = 10
    normalize: str = "max"
    salience_factor: float = 2.0

    def __post_init__(self):
        betas = (self.beta_global, self.beta_interact, self.beta_relation)
        if any(b < 0 for b in betas):
            raise ValueError("stream weights must be non-negative")
        if all(b == 0 for b in betas):
            raise ValueError("at least one stream weight must be positive")
        if self.theta_n < 0:
            raise ValueError("theta_n must be >= 0")
        if self.normalize not in ("none", "max"):
            raise ValueError(f"unknown normalization mode {self.normalize!r}")
        if self.salience_factor <= 1:
            raise ValueError("salience_factor must exceed 1")

    def beta(self, stream_id: str) -> float:
        return {
            STREAM_GLOBAL: self.beta_global,
            STREAM_INTERACT: self.beta_interact,
            STREAM_RELATION: self.beta_relation,
        }.get(stream_id, 1.0)


@dataclass(frozen=True)
class BoundaryProvenance:
    source_frame: int
    cluster_members: tuple[tuple[str, int, float], ...]
    accepted_by: str  # cluster | salience | single_stream
    confidence: float


@dataclass(frozen=True)
class FusionResult:
    boundaries: BoundarySet
    provenance: tuple[BoundaryProvenance, ...]


def confidence_scores(
    series_by_stream: Mapping[str, DifferenceSeries],
    cfg: FusionConfig,
) -> np.ndarray:
    """Weighted sum of (optionally max-normalized) difference series."""
    if not series_by_stream:
        raise ValueError("need at least one difference series")
    lengths = {s.num_frames for s in series_by_stream.values()}
    if len(lengths) != 1:
        raise ValueError(f"difference series lengths differ: {sorted(lengths)}")
    length = lengths.pop()
    scores = np.zeros(length, dtype=np.float64)
    for stream_id, series in series_by_stream.items():
        values = series.values
        if cfg.normalize == "max":
            lo, hi = series.valid_range
            peak = values[lo:hi + 1].max() if lo <= hi else 0.0
            values = values / peak if peak > 0 else values
        scores += cfg.beta(stream_id) * values
    return scores


def select_boundaries(
    candidates_by_stream: Mapping[str, CandidateSet],
    scores: Sequence[float],
    cfg: FusionConfig,
) -> FusionResult:
    """Three-stage vote over per-stream candidates.

    Stage 1 walks anchor-stream candidates in frame order and forms a
    cluster whenever every other stream has an unconsumed candidate
    within theta_n; the cluster's highest-confidence member is selected.
    Stage 2 accepts remaining candidates whose confidence exceeds
    salience_factor times the best Stage-1 confidence. Stage 3 merges
    and suppresses any boundary within theta_n of a higher-confidence one.

    With a single configured stream its candidates pass through directly.
    """
    if not candidates_by_stream:
        raise ValueError("empty stream map")
    scores = np.asarray(scores, dtype=np.float64)
    length = len(scores)
    streams = list(candidates_by_stream)
    for cs in candidates_by_stream.values():
        if cs.entries and cs.entries[-1][0] >= length:
            raise ValueError("candidate frame out of range for score vector")

    cand_score = {
        (sid, frame): score
        for sid, cs in candidates_by_stream.items()
        for frame, score in cs.entries
    }

    if len(streams) == 1:
        sid = streams[0]
        records = tuple(
            BoundaryProvenance(
                source_frame=frame,
                cluster_members=((sid, frame, cand_score[(sid, frame)]),),
                accepted_by="single_stream",
                confidence=float(scores[frame]),
            )
            for frame in candidates_by_stream[sid].frames
        )
        frames = tuple(r.source_frame for r in records)
        return FusionResult(
            boundaries=BoundarySet(frames=frames, num_frames=length),
            provenance=records,
        )

    anchor = STREAM_GLOBAL if STREAM_GLOBAL in streams else sorted(streams)[0]
    others = [s for s in streams if s != anchor]
    consumed: set[tuple[str, int]] = set()
    accepted: list[BoundaryProvenance] = []

    # Stage 1: clusters anchored on the global stream's candidates.
    for g in candidates_by_stream[anchor].frames:
        if (anchor, g) in consumed:
            continue
        members = [(anchor, g)]
        complete = True
        for sid in others:
            near = [
                f
                for f in candidates_by_stream[sid].frames
                if (sid, f) not in consumed and abs(f - g) <= cfg.theta_n
            ]
            if not near:
                complete = False
                break
            members.append((sid, min(near, key=lambda f: (abs(f - g), f))))
        if not complete:
            continue
        consumed.update(members)
        best = max(members, key=lambda m: (scores[m[1]], -m[1]))[1]
        accepted.append(BoundaryProvenance(
            source_frame=best,
            cluster_members=tuple(
                (sid, f, cand_score[(sid, f)]) for sid, f in members
            ),
            accepted_by="cluster",
            confidence=float(scores[best]),
        ))

    # No-cluster fallback: take the globally best candidate so the
    # salience reference is defined.
    if not accepted:
        everything = [
            (sid, f)
            for sid in sorted(streams)
            for f in candidates_by_stream[sid].frames
        ]
        sid, f = max(everything, key=lambda m: (scores[m[1]], -m[1], m[0]))
        consumed.add((sid, f))
        accepted.append(BoundaryProvenance(
            source_frame=f,
            cluster_members=((sid, f, cand_score[(sid, f)]),),
            accepted_by="cluster",
            confidence=float(scores[f]),
        ))

    # Stage 2: salient singletons anywhere above the bar.
    bar = cfg.salience_factor * max(r.confidence for r in accepted)
    taken = {r.source_frame for r in accepted}
    for sid in sorted(streams):
        for f in candidates_by_stream[sid].frames:
            if (sid, f) in consumed or f in taken:
                continue
            if scores[f] > bar:
                consumed.add((sid, f))
                taken.add(f)
                accepted.append(BoundaryProvenance(
                    source_frame=f,
                    cluster_members=((sid, f, cand_score[(sid, f)]),),
                    accepted_by="salience",
                    confidence=float(scores[f]),
                ))

    # Stage 3: suppress boundaries within theta_n of a stronger one.
    kept: list[BoundaryProvenance] = []
    for rec in sorted(accepted, key=lambda r: (-r.confidence, r.source_frame)):
        if all(abs(rec.source_frame - k.source_frame) > cfg.theta_n for k in kept):
            kept.append(rec)
    kept.sort(key=lambda r: r.source_frame)
    return FusionResult(
        boundaries=BoundarySet(
            frames=tuple(r.source_frame for r in kept), num_frames=length
        ),
        provenance=tuple(kept),
    )


def equal_split(num_frames: int, num_segments: int) -> BoundarySet:
    """Baseline: divide the video into num_segments equal parts."""
    if num_segments < 1:
        raise ValueError("need at least one segment")
    if num_segments > num_frames:
        raise ValueError(
            f"cannot split {num_frames} frames into {num_segments} segments"
        )
    frames = sorted({
        _round_half_up(m * num_frames / num_segments)
        for m in range(1, num_segments)
    })
    frames = [f for f in frames if 1 <= f <= num_frames - 1]
    return BoundarySet(frames=tuple(frames), num_frames=num_frames)


def _round_half_up(x: float) -> int:
    return int(np.floor(x + 0.5))
