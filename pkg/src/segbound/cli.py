"""Command-line front end."""

from __future__ import annotations

import csv
import json
import sys
from dataclasses import asdict
from fractions import Fraction
from pathlib import Path

import click

from . import graphs as graphs_mod
from .candidates import detect_candidates
from .diff import compute_difference
from .features import (
    BoundarySet,
    FormatError,
    load_boundaries,
    load_features,
    load_labels,
    save_boundaries,
    save_features,
    save_labels,
)
from .fusion import FusionConfig, equal_split
from .manifest import package_version, write_manifest
from .metrics import boundary_f1, dataset_mean, evaluate_video, f1_threshold, mof
from .pipeline import DEFAULT_MIN_REL_HEIGHT, detect_boundaries
from .synth import RNG_NAME, SynthSpec, generate, generate_streams

STREAMS = ("global", "interact", "relation")


def _fail(message: str) -> "click.exceptions.Exit":
    click.echo(f"error: {message}", err=True)
    return SystemExit(1)


def _write_text_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    tmp.replace(path)


@click.group()
@click.version_option(package_version(), prog_name="segbound")
def main():
    """Temporal action boundary detection and evaluation."""


@main.command()
@click.option("--frames", "num_frames", type=int, required=True)
@click.option("--dim", type=int, default=32, show_default=True)
@click.option("--segments", "num_segments", type=int, required=True)
@click.option("--min-seg-len", type=int, default=40, show_default=True)
@click.option("--noise-sigma", type=float, default=0.05, show_default=True)
@click.option("--mean-separation", type=float, default=1.0, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--fps", type=float, default=5.0, show_default=True)
@click.option("--streams", type=int, default=1, show_default=True,
              help="1 writes a single stream; 3 writes correlated "
                   "global/interact/relation streams.")
@click.option("--spurious", multiple=True, metavar="STREAM:FRAME",
              help="Inject an off-boundary bump into one stream, e.g. "
                   "interact:200. Repeatable.")
@click.option("--spurious-scale", type=float, default=0.9, show_default=True)
@click.option("--spurious-len", type=int, default=10, show_default=True)
@click.option("--out-dir", type=click.Path(path_type=Path), required=True)
def synth(num_frames, dim, num_segments, min_seg_len, noise_sigma,
          mean_separation, seed, fps, streams, spurious, spurious_scale,
          spurious_len, out_dir):
    """Generate synthetic feature streams with planted boundaries."""
    if streams not in (1, 3):
        raise _fail("--streams must be 1 or 3")
    spec = SynthSpec(
        num_frames=num_frames, dim=dim, num_segments=num_segments,
        min_segment_len=min_seg_len, noise_sigma=noise_sigma,
        mean_separation=mean_separation, seed=seed,
        fps=Fraction(fps).limit_denominator(10_000),
    )
    out_dir.mkdir(parents=True, exist_ok=True)
    if streams == 1:
        seq, seg, bounds = generate(spec)
        save_features(seq, out_dir / "features.otfs")
        written = ["features.otfs"]
    else:
        spurious_map: dict[str, list[int]] = {}
        for item in spurious:
            sid, _, frame = item.partition(":")
            if sid not in STREAMS or not frame.isdigit():
                raise _fail(f"bad --spurious value {item!r}")
            spurious_map.setdefault(sid, []).append(int(frame))
        stream_seqs, seg, bounds = generate_streams(
            spec, STREAMS, spurious=spurious_map,
            spurious_scale=spurious_scale, spurious_len=spurious_len,
        )
        written = []
        for sid, seq in stream_seqs.items():
            save_features(seq, out_dir / f"features_{sid}.otfs")
            written.append(f"features_{sid}.otfs")
    save_labels(seg, out_dir / "labels.txt")
    save_boundaries(bounds, out_dir / "boundaries.txt")
    write_manifest(
        out_dir / "synth",
        command="synth",
        config={**asdict(spec), "fps": str(spec.fps), "streams": streams,
                "spurious": list(spurious), "spurious_scale": spurious_scale,
                "spurious_len": spurious_len, "rng": RNG_NAME},
    )
    click.echo(f"wrote {', '.join(written)}, labels.txt, boundaries.txt to {out_dir}")


@main.command()
@click.argument("features", type=click.Path(exists=True, path_type=Path))
@click.option("--k", type=int, default=5, show_default=True)
@click.option("-o", "--output", type=click.Path(path_type=Path), required=True)
def diff(features, k, output):
    """Write the temporal difference series of one stream as index,value CSV."""
    seq = _load_features_checked(features)
    series = compute_difference(seq, k)
    lines = [f"{i},{v:.9g}" for i, v in enumerate(series.values)]
    _write_text_atomic(output, "\n".join(lines) + "\n")
    write_manifest(output, command="diff", config={"k": k}, inputs=[features])
    click.echo(f"wrote {output}")


def _load_features_checked(path: Path):
    try:
        return load_features(path)
    except (FormatError, OSError) as exc:
        raise _fail(str(exc))


@main.command()
@click.option("--global", "global_path", type=click.Path(exists=True, path_type=Path))
@click.option("--interact", "interact_path", type=click.Path(exists=True, path_type=Path))
@click.option("--relation", "relation_path", type=click.Path(exists=True, path_type=Path))
@click.option("--k", type=int, default=5, show_default=True)
@click.option("--alpha", type=int, default=15, show_default=True)
@click.option("--beta-global", type=float, default=1.0, show_default=True)
@click.option("--beta-interact", type=float, default=1.0, show_default=True)
@click.option("--beta-relation", type=float, default=0.3, show_default=True)
@click.option("--theta-n-frames", type=int, default=None,
              help="Neighborhood radius in frames; overrides --theta-n-seconds.")
@click.option("--theta-n-seconds", type=float, default=2.0, show_default=True)
@click.option("--fps", type=float, default=5.0, show_default=True)
@click.option("--normalize", type=click.Choice(["none", "max"]), default="max",
              show_default=True)
@click.option("--salience-factor", type=float, default=2.0, show_default=True)
@click.option("--min-rel-height", type=float, default=DEFAULT_MIN_REL_HEIGHT,
              show_default=True)
@click.option("-o", "--output", type=click.Path(path_type=Path), required=True)
@click.option("--provenance", type=click.Path(path_type=Path), default=None)
def detect(global_path, interact_path, relation_path, k, alpha, beta_global,
           beta_interact, beta_relation, theta_n_frames, theta_n_seconds, fps,
           normalize, salience_factor, min_rel_height, output, provenance):
    """Detect boundaries from up to three feature streams."""
    paths = {
        "global": global_path,
        "interact": interact_path,
        "relation": relation_path,
    }
    paths = {sid: p for sid, p in paths.items() if p is not None}
    if not paths:
        raise _fail("need at least one of --global/--interact/--relation")
    streams = {sid: _load_features_checked(p) for sid, p in paths.items()}
    theta_n = (
        theta_n_frames if theta_n_frames is not None
        else int(round(theta_n_seconds * fps))
    )
    cfg = FusionConfig(
        beta_global=beta_global, beta_interact=beta_interact,
        beta_relation=beta_relation, theta_n=theta_n,
        normalize=normalize, salience_factor=salience_factor,
    )
    try:
        result = detect_boundaries(
            streams, k=k, alpha=alpha, cfg=cfg, min_rel_height=min_rel_height
        )
    except ValueError as exc:
        raise _fail(str(exc))
    _write_text_atomic(output, "".join(f"{f}\n" for f in result.boundaries.frames))
    config = {
        "k": k, "alpha": alpha, "beta_global": beta_global,
        "beta_interact": beta_interact, "beta_relation": beta_relation,
        "theta_n": theta_n, "normalize": normalize,
        "salience_factor": salience_factor, "min_rel_height": min_rel_height,
        "fps": fps,
    }
    if provenance is not None:
        records = [
            {
                "source_frame": r.source_frame,
                "cluster_members": [
                    {"stream": sid, "frame": f, "score": s}
                    for sid, f, s in r.cluster_members
                ],
                "accepted_by": r.accepted_by,
                "confidence": r.confidence,
            }
            for r in result.provenance
        ]
        _write_text_atomic(Path(provenance), json.dumps(records, indent=2) + "\n")
    write_manifest(output, command="detect", config=config,
                   inputs=list(paths.values()))
    click.echo(f"wrote {len(result.boundaries.frames)} boundaries to {output}")


@main.group(name="eval")
def eval_group():
    """Score predictions against ground truth."""


def _pair_inputs(pred: Path, gt: Path) -> list[tuple[str, Path, Path]]:
    """Pair prediction and ground-truth files, by stem in directory mode."""
    if pred.is_dir() != gt.is_dir():
        raise _fail("--pred and --gt must both be files or both directories")
    if not pred.is_dir():
        return [(pred.stem, pred, gt)]
    gt_by_stem = {p.stem: p for p in sorted(gt.iterdir()) if p.is_file()}
    pairs = []
    for p in sorted(pred.iterdir()):
        if p.is_file() and p.stem in gt_by_stem:
            pairs.append((p.stem, p, gt_by_stem[p.stem]))
    if not pairs:
        raise _fail(f"no prediction/ground-truth pairs under {pred} and {gt}")
    return pairs


def _emit_reports(rows: list[dict], output: Path | None, csv_path: Path | None,
                  command: str, inputs: list[Path], config: dict) -> None:
    mean_row = {
        key: dataset_mean([row[key] for row in rows])
        for key in rows[0]
        if isinstance(rows[0][key], (int, float)) and key != "video"
    }
    report = {"videos": rows, "mean": mean_row}
    text = json.dumps(report, indent=2) + "\n"
    if output is not None:
        _write_text_atomic(output, text)
        write_manifest(output, command=command, config=config, inputs=inputs)
    else:
        click.echo(text, nl=False)
    if csv_path is not None:
        with open(csv_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
            writer.writeheader()
            writer.writerows(rows)


@eval_group.command(name="f1")
@click.option("--pred", type=click.Path(exists=True, path_type=Path), required=True,
              help="Boundary file, or directory of them.")
@click.option("--gt", type=click.Path(exists=True, path_type=Path), required=True,
              help="Ground-truth label file, or directory of them.")
@click.option("--mode", type=click.Choice(["small", "large"]), default="small",
              show_default=True)
@click.option("--threshold-frames", type=int, default=None,
              help="Explicit threshold; overrides --mode.")
@click.option("--match", type=click.Choice(["strict", "paper"]), default="strict",
              show_default=True)
@click.option("--fps", type=float, default=5.0, show_default=True)
@click.option("-o", "--output", type=click.Path(path_type=Path), default=None)
@click.option("--csv", "csv_path", type=click.Path(path_type=Path), default=None)
def eval_f1(pred, gt, mode, threshold_frames, match, fps, output, csv_path):
    """Boundary-level F1 against ground-truth labels."""
    from .features import segmentation_to_boundaries

    rows = []
    for stem, pred_path, gt_path in _pair_inputs(pred, gt):
        gt_seg = load_labels(gt_path)
        length = gt_seg.num_frames
        pred_bounds = load_boundaries(pred_path, num_frames=length)
        thr = (
            threshold_frames if threshold_frames is not None
            else f1_threshold(length, fps, mode)
        )
        report = boundary_f1(
            pred_bounds, segmentation_to_boundaries(gt_seg), thr, mode=match
        )
        rows.append({
            "video": stem, "precision": report.precision,
            "recall": report.recall, "f1": report.f1,
            "matched": report.matched, "num_pred": report.num_pred,
            "num_gt": report.num_gt, "threshold_frames": report.threshold_frames,
        })
    _emit_reports(rows, output, csv_path, "eval f1",
                  [pred, gt],
                  {"mode": mode, "threshold_frames": threshold_frames,
                   "match": match, "fps": fps})


@eval_group.command(name="mof")
@click.option("--pred", type=click.Path(exists=True, path_type=Path), required=True,
              help="Boundary file, or directory of them.")
@click.option("--gt", type=click.Path(exists=True, path_type=Path), required=True,
              help="Ground-truth label file, or directory of them.")
@click.option("-o", "--output", type=click.Path(path_type=Path), default=None)
@click.option("--csv", "csv_path", type=click.Path(path_type=Path), default=None)
def eval_mof(pred, gt, output, csv_path):
    """Hungarian-matched frame accuracy against ground-truth labels."""
    from .features import boundaries_to_segmentation

    rows = []
    for stem, pred_path, gt_path in _pair_inputs(pred, gt):
        gt_seg = load_labels(gt_path)
        pred_bounds = load_boundaries(pred_path, num_frames=gt_seg.num_frames)
        report = mof(boundaries_to_segmentation(pred_bounds), gt_seg)
        rows.append({
            "video": stem, "mof": report.mof,
            "correct_frames": report.correct_frames,
            "total_frames": report.total_frames,
        })
    _emit_reports(rows, output, csv_path, "eval mof", [pred, gt], {})


@main.command()
@click.option("--detections", type=click.Path(exists=True, path_type=Path),
              required=True)
@click.option("--table", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--theta-r", type=float, default=graphs_mod.DEFAULT_THETA_R,
              show_default=True)
@click.option("--min-score", type=float, default=graphs_mod.DEFAULT_MIN_SCORE,
              show_default=True)
@click.option("--metric", type=click.Choice(["gap", "center"]), default="gap",
              show_default=True)
@click.option("-o", "--output", type=click.Path(path_type=Path), required=True)
def graph(detections, table, theta_r, min_score, metric, output):
    """Build per-frame object-relation graphs from detection records."""
    frames = graphs_mod.load_detections(detections)
    rel_table = graphs_mod.load_table(table)
    out = [
        graphs_mod.graph_to_json(
            graphs_mod.build_graph(
                d, rel_table, theta_r=theta_r, min_score=min_score, metric=metric
            )
        )
        for d in frames
    ]
    _write_text_atomic(output, json.dumps(out, indent=2) + "\n")
    write_manifest(output, command="graph",
                   config={"theta_r": theta_r, "min_score": min_score,
                           "metric": metric},
                   inputs=[detections, table])
    click.echo(f"wrote {len(out)} frame graphs to {output}")


@main.command(name="build-table")
@click.option("--pair-counts", type=click.Path(exists=True, path_type=Path),
              required=True, help='CSV rows "classA,classB,count".')
@click.option("--min-count", type=int, default=graphs_mod.DEFAULT_MIN_PAIR_COUNT,
              show_default=True)
@click.option("-o", "--output", type=click.Path(path_type=Path), required=True)
def build_table_cmd(pair_counts, min_count, output):
    """Build a relation look-up table from co-occurrence counts."""
    with open(pair_counts, newline="", encoding="utf-8") as fh:
        triples = [(a, b, int(c)) for a, b, c in csv.reader(fh)]
    table = graphs_mod.build_table(triples, min_count=min_count)
    graphs_mod.save_table(table, output)
    write_manifest(output, command="build-table",
                   config={"min_count": min_count}, inputs=[pair_counts])
    click.echo(f"wrote {output}")


@main.group()
def baseline():
    """Reference baselines."""


@baseline.command(name="equal-split")
@click.option("--frames", "num_frames", type=int, required=True)
@click.option("--segments", "num_segments", type=int, required=True)
@click.option("-o", "--output", type=click.Path(path_type=Path), required=True)
def baseline_equal_split(num_frames, num_segments, output):
    """Divide the video into equal segments."""
    try:
        bounds = equal_split(num_frames, num_segments)
    except ValueError as exc:
        raise _fail(str(exc))
    _write_text_atomic(output, "".join(f"{f}\n" for f in bounds.frames))
    write_manifest(output, command="baseline equal-split",
                   config={"frames": num_frames, "segments": num_segments})
    click.echo(f"wrote {output}")


if __name__ == "__main__":
    main()
