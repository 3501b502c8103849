import numpy as np
import pytest

from segbound.candidates import CandidateSet, detect_candidates
from segbound.diff import DifferenceSeries
from segbound.fusion import (
    FusionConfig,
    confidence_scores,
    equal_split,
    select_boundaries,
)


def series_of(values, k=1):
    return DifferenceSeries(values=np.asarray(values, dtype=float), k=k)


def cands(frames, stream_id, scores=None):
    scores = scores or {}
    return CandidateSet(
        entries=tuple((f, scores.get(f, 1.0)) for f in frames),
        alpha=15,
        stream_id=stream_id,
    )


class TestConfidenceScores:
    def test_single_stream_identity(self):
        s = series_of([0, 2, 0])
        cfg = FusionConfig(beta_global=1.0, normalize="none")
        np.testing.assert_array_equal(
            confidence_scores({"global": s}, cfg), s.values
        )

    def test_weighted_sum_mode_none(self):
        cfg = FusionConfig(normalize="none")
        scores = confidence_scores(
            {
                "global": series_of([0, 2, 0]),
                "interact": series_of([0, 1, 0]),
                "relation": series_of([0, 0, 0]),
            },
            cfg,
        )
        np.testing.assert_allclose(scores, [0, 3, 0])

    def test_max_normalization(self):
        cfg = FusionConfig(normalize="max")
        g = series_of([0, 4, 2, 0, 0], k=1)
        i = series_of([0, 1, 2, 1, 0], k=1)
        scores = confidence_scores({"global": g, "interact": i}, cfg)
        expected = g.values / 4 + i.values / 2
        np.testing.assert_allclose(scores, expected)

    def test_all_zero_stream_stays_zero(self):
        cfg = FusionConfig(normalize="max")
        scores = confidence_scores(
            {"global": series_of([0, 1, 0]), "relation": series_of([0, 0, 0])},
            cfg,
        )
        np.testing.assert_allclose(scores, [0, 1, 0])

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="length"):
            confidence_scores(
                {"global": series_of([0, 1, 0]), "interact": series_of([0, 1])},
                FusionConfig(),
            )


class TestSelectBoundaries:
    def test_single_stream_passthrough(self):
        scores = np.zeros(200)
        scores[[50, 120]] = 1.0
        result = select_boundaries(
            {"global": cands([50, 120], "global")}, scores, FusionConfig()
        )
        assert result.boundaries.frames == (50, 120)
        assert all(r.accepted_by == "single_stream" for r in result.provenance)

    def test_unanimous_cluster(self):
        scores = np.zeros(100)
        scores[50] = 1.0
        result = select_boundaries(
            {
                "global": cands([50], "global"),
                "interact": cands([50], "interact"),
                "relation": cands([50], "relation"),
            },
            scores,
            FusionConfig(theta_n=10),
        )
        assert result.boundaries.frames == (50,)
        assert result.provenance[0].accepted_by == "cluster"

    def test_staged_example(self):
        # cluster {47, 50, 53} selects 50; isolated candidate at 200 is
        # salient (2.0 > 2 * 0.9) and also accepted
        scores = np.zeros(300)
        scores[47], scores[50], scores[53], scores[200] = 0.6, 0.9, 0.7, 2.0
        result = select_boundaries(
            {
                "global": cands([50], "global"),
                "interact": cands([53, 200], "interact"),
                "relation": cands([47], "relation"),
            },
            scores,
            FusionConfig(theta_n=10, salience_factor=2.0),
        )
        assert result.boundaries.frames == (50, 200)
        by_frame = {r.source_frame: r for r in result.provenance}
        assert by_frame[50].accepted_by == "cluster"
        assert by_frame[200].accepted_by == "salience"
        members = {(s, f) for s, f, _ in by_frame[50].cluster_members}
        assert members == {("global", 50), ("interact", 53), ("relation", 47)}

    def test_non_salient_singleton_rejected(self):
        scores = np.zeros(300)
        scores[50], scores[200] = 1.0, 1.5  # 1.5 < 2 * 1.0
        result = select_boundaries(
            {
                "global": cands([50], "global"),
                "interact": cands([50, 200], "interact"),
                "relation": cands([50], "relation"),
            },
            scores,
            FusionConfig(theta_n=10),
        )
        assert result.boundaries.frames == (50,)

    def test_incomplete_cluster_falls_back_to_max_score(self):
        # no frame has neighbors in every stream; the best-scored candidate
        # is still selected
        scores = np.zeros(300)
        scores[50], scores[200] = 0.5, 0.8
        result = select_boundaries(
            {
                "global": cands([50], "global"),
                "interact": cands([200], "interact"),
                "relation": cands([100], "relation"),
            },
            scores,
            FusionConfig(theta_n=10),
        )
        assert 200 in result.boundaries.frames

    def test_consumption_prevents_double_use(self):
        # two global anchors close together compete for a single interact
        # candidate; only one cluster can form
        scores = np.zeros(100)
        scores[48], scores[50], scores[52] = 0.5, 0.9, 0.6
        result = select_boundaries(
            {
                "global": cands([48, 52], "global"),
                "interact": cands([50], "interact"),
            },
            scores,
            FusionConfig(theta_n=10),
        )
        cluster_records = [
            r for r in result.provenance if r.accepted_by == "cluster"
        ]
        assert len(cluster_records) == 1

    def test_stage3_suppresses_near_duplicates(self):
        scores = np.zeros(100)
        scores[50], scores[55] = 1.0, 5.0
        result = select_boundaries(
            {
                "global": cands([50], "global"),
                "interact": cands([50, 55], "interact"),
                "relation": cands([50], "relation"),
            },
            scores,
            FusionConfig(theta_n=10, salience_factor=2.0),
        )
        # 55 is salient (5.0 > 2.0) and stronger, so it suppresses 50
        assert result.boundaries.frames == (55,)

    def test_min_separation_after_stage3(self, rng):
        cfg = FusionConfig(theta_n=7, normalize="none")
        for _ in range(30):
            frames = sorted(rng.choice(np.arange(5, 195), 12, replace=False))
            scores = np.zeros(200)
            streams = {}
            for sid in ("global", "interact", "relation"):
                chosen = sorted(rng.choice(frames, 6, replace=False))
                for f in chosen:
                    scores[f] = rng.random() + 0.1
                streams[sid] = cands(chosen, sid)
            result = select_boundaries(streams, scores, cfg)
            out = result.boundaries.frames
            assert all(b - a > 7 for a, b in zip(out, out[1:]))
            all_inputs = {f for cs in streams.values() for f in cs.frames}
            assert set(out) <= all_inputs

    def test_identical_streams_match_single_stream(self, rng):
        values = np.zeros(120)
        values[5:115] = rng.random(110)
        series = DifferenceSeries(values=values, k=5)
        cs = detect_candidates(series, 8)
        scores = values.copy()
        single = select_boundaries(
            {"global": cs}, scores, FusionConfig(normalize="none")
        )
        tripled = select_boundaries(
            {
                "global": cs,
                "interact": CandidateSet(cs.entries, cs.alpha, "interact"),
                "relation": CandidateSet(cs.entries, cs.alpha, "relation"),
            },
            scores * 2.3,
            FusionConfig(normalize="none", theta_n=0),
        )
        assert tripled.boundaries.frames == single.boundaries.frames

    def test_determinism(self):
        scores = np.zeros(300)
        scores[47], scores[50], scores[53], scores[200] = 0.6, 0.9, 0.7, 2.0
        streams = {
            "global": cands([50], "global"),
            "interact": cands([53, 200], "interact"),
            "relation": cands([47], "relation"),
        }
        a = select_boundaries(streams, scores, FusionConfig())
        b = select_boundaries(streams, scores, FusionConfig())
        assert a == b

    def test_empty_stream_map(self):
        with pytest.raises(ValueError):
            select_boundaries({}, np.zeros(10), FusionConfig())


class TestFusionConfig:
    def test_rejects_all_zero_weights(self):
        with pytest.raises(ValueError):
            FusionConfig(beta_global=0, beta_interact=0, beta_relation=0)

    def test_rejects_salience_at_most_one(self):
        with pytest.raises(ValueError):
            FusionConfig(salience_factor=1.0)


class TestEqualSplit:
    def test_exact_division(self):
        assert equal_split(100, 4).frames == (25, 50, 75)

    def test_single_segment(self):
        assert equal_split(10, 1).frames == ()

    def test_rounding(self):
        assert equal_split(10, 3).frames == (3, 7)

    def test_rejects_too_many_segments(self):
        with pytest.raises(ValueError):
            equal_split(10, 11)

    def test_segment_count(self, rng):
        for _ in range(50):
            length = int(rng.integers(1, 200))
            m = int(rng.integers(1, length + 1))
            b = equal_split(length, m)
            assert len(b.frames) <= m - 1
