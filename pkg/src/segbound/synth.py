"""Synthetic feature streams with planted boundaries (oracle harness).

Randomness comes from numpy's PCG64 generator seeded through a
SeedSequence, so outputs are bit-identical across runs and platforms
for a given spec.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .features import BoundarySet, FeatureSequence, Segmentation

RNG_NAME = "pcg64"


@dataclass(frozen=True)
class SynthSpec:
    num_frames: int
    dim: int
    num_segments: int
    min_segment_len: int
    noise_sigma: float
    mean_separation: float
    seed: int
    fps: Fraction = Fraction(5)

    def __post_init__(self):
        if self.num_segments < 1 or self.min_segment_len < 1:
            raise ValueError("need at least one segment of positive length")
        if self.num_segments * self.min_segment_len > self.num_frames:
            raise ValueError(
                f"{self.num_segments} segments of >= {self.min_segment_len} frames "
                f"do not fit in {self.num_frames} frames"
            )
        if self.mean_separation <= 0:
            raise ValueError("mean_separation must be positive")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")
        if self.dim < 1:
            raise ValueError("dim must be >= 1")


def _segment_lengths(spec: SynthSpec, rng: np.random.Generator) -> np.ndarray:
    extra = spec.num_frames - spec.num_segments * spec.min_segment_len
    counts = rng.multinomial(extra, np.full(spec.num_segments, 1.0 / spec.num_segments))
    return spec.min_segment_len + counts


def _segment_means(
    spec: SynthSpec, rng: np.random.Generator
) -> np.ndarray:
    means = [rng.normal(0.0, 1.0, spec.dim)]
    for _ in range(spec.num_segments - 1):
        step = rng.normal(size=spec.dim)
        step /= np.linalg.norm(step)
        scale = spec.mean_separation * rng.uniform(1.0, 1.5)
        means.append(means[-1] + step * scale)
    return np.stack(means)


def _assemble(
    spec: SynthSpec,
    lengths: np.ndarray,
    rng: np.random.Generator,
    spurious_frames: Sequence[int] = (),
    spurious_scale: float = 0.0,
    spurious_len: int = 10,
) -> FeatureSequence:
    means = _segment_means(spec, rng)
    data = np.repeat(means, lengths, axis=0)
    if spec.noise_sigma > 0:
        data = data + rng.normal(0.0, spec.noise_sigma, data.shape)
    for t in spurious_frames:
        bump = rng.normal(size=spec.dim)
        bump *= spurious_scale / np.linalg.norm(bump)
        data[t:t + spurious_len] += bump
    return FeatureSequence(data=data.astype(np.float32), fps=spec.fps)


def _ground_truth(lengths: np.ndarray, num_frames: int) -> tuple[Segmentation, BoundarySet]:
    labels = []
    for seg_idx, seg_len in enumerate(lengths):
        labels.extend([f"s{seg_idx}"] * int(seg_len))
    boundaries = tuple(int(b) for b in np.cumsum(lengths)[:-1])
    return (
        Segmentation(labels=tuple(labels)),
        BoundarySet(frames=boundaries, num_frames=num_frames),
    )


def generate(spec: SynthSpec) -> tuple[FeatureSequence, Segmentation, BoundarySet]:
    """One stream of piecewise-constant segment means plus isotropic noise;
    consecutive means are at least mean_separation apart."""
    root = np.random.SeedSequence(spec.seed)
    rng = np.random.Generator(np.random.PCG64(root))
    lengths = _segment_lengths(spec, rng)
    seq = _assemble(spec, lengths, rng)
    seg, bounds = _ground_truth(lengths, spec.num_frames)
    return seq, seg, bounds


def generate_streams(
    spec: SynthSpec,
    stream_ids: Sequence[str],
    spurious: Mapping[str, Sequence[int]] | None = None,
    spurious_scale: float = 0.9,
    spurious_len: int = 10,
) -> tuple[dict[str, FeatureSequence], Segmentation, BoundarySet]:
    """Correlated streams sharing planted boundaries with independent
    per-stream means and noise; optional spurious bumps create off-boundary
    difference peaks in individual streams."""
    spurious = spurious or {}
    root = np.random.SeedSequence(spec.seed)
    rng = np.random.Generator(np.random.PCG64(root))
    lengths = _segment_lengths(spec, rng)
    children = root.spawn(len(stream_ids))
    streams = {}
    for child, sid in zip(children, stream_ids):
        streams[sid] = _assemble(
            spec,
            lengths,
            np.random.Generator(np.random.PCG64(child)),
            spurious_frames=spurious.get(sid, ()),
            spurious_scale=spurious_scale,
            spurious_len=spurious_len,
        )
    seg, bounds = _ground_truth(lengths, spec.num_frames)
    return streams, seg, bounds
