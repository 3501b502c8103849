"""Per-frame object-relation graphs from detections and a relation table."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

DEFAULT_MIN_PAIR_COUNT = 30
DEFAULT_THETA_R = 80.0
DEFAULT_MIN_SCORE = 0.7


def _norm_class(token: str) -> str:
    return token.strip().lower()


@dataclass(frozen=True)
class Detection:
    cls: str
    score: float
    bbox: tuple[float, float, float, float]  # x1, y1, x2, y2

    def __post_init__(self):
        x1, y1, x2, y2 = self.bbox
        if not (x1 < x2 and y1 < y2):
            raise ValueError(f"malformed bbox {self.bbox}")
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"score must be in [0, 1], got {self.score}")
        object.__setattr__(self, "cls", _norm_class(self.cls))


@dataclass(frozen=True)
class DetectionFrame:
    frame: int
    objects: tuple[Detection, ...]


@dataclass(frozen=True)
class RelationTable:
    """Symmetric class-to-classes relation map."""

    relations: Mapping[str, frozenset[str]]

    def related(self, a: str, b: str) -> bool:
        return _norm_class(b) in self.relations.get(_norm_class(a), frozenset())


@dataclass(frozen=True)
class RelationGraph:
    frame: int
    nodes: tuple[int, ...]
    edges: frozenset[tuple[int, int]]


def build_table(
    pair_counts: Iterable[tuple[str, str, int]],
    min_count: int = DEFAULT_MIN_PAIR_COUNT,
) -> RelationTable:
    """Keep class pairs seen at least min_count times, counting both
    orders of an unordered pair together; symmetric closure applied."""
    totals: dict[frozenset[str], int] = {}
    for a, b, count in pair_counts:
        if count < 0:
            raise ValueError("pair counts must be >= 0")
        key = frozenset((_norm_class(a), _norm_class(b)))
        totals[key] = totals.get(key, 0) + count
    relations: dict[str, set[str]] = {}
    for key, total in totals.items():
        if total < min_count:
            continue
        members = sorted(key)
        a, b = (members[0], members[0]) if len(members) == 1 else members
        relations.setdefault(a, set()).add(b)
        relations.setdefault(b, set()).add(a)
    return RelationTable(
        relations={cls: frozenset(rel) for cls, rel in relations.items()}
    )


def box_gap(
    a: Sequence[float], b: Sequence[float]
) -> float:
    """Minimum Euclidean distance between two axis-aligned boxes;
    0 when they intersect or touch."""
    ax1, ay1, ax2, ay2 = a
    bx1, by1, bx2, by2 = b
    dx = max(ax1 - bx2, bx1 - ax2, 0.0)
    dy = max(ay1 - by2, by1 - ay2, 0.0)
    return math.hypot(dx, dy)


def center_distance(a: Sequence[float], b: Sequence[float]) -> float:
    ax1, ay1, ax2, ay2 = a
    bx1, by1, bx2, by2 = b
    return math.hypot(
        (ax1 + ax2) / 2 - (bx1 + bx2) / 2,
        (ay1 + ay2) / 2 - (by1 + by2) / 2,
    )


_METRICS = {"gap": box_gap, "center": center_distance}


def build_graph(
    dets: DetectionFrame,
    table: RelationTable,
    theta_r: float = DEFAULT_THETA_R,
    min_score: float = DEFAULT_MIN_SCORE,
    metric: str = "gap",
) -> RelationGraph:
    """Nodes are confident detections; an edge needs both a table relation
    and spatial distance within theta_r."""
    if theta_r < 0:
        raise ValueError("theta_r must be >= 0")
    distance = _METRICS[metric]
    nodes = tuple(
        i for i, obj in enumerate(dets.objects) if obj.score >= min_score
    )
    edges = set()
    for ii, p in enumerate(nodes):
        for q in nodes[ii + 1:]:
            op, oq = dets.objects[p], dets.objects[q]
            if not table.related(op.cls, oq.cls):
                continue
            if distance(op.bbox, oq.bbox) <= theta_r:
                edges.add((p, q))
    return RelationGraph(frame=dets.frame, nodes=nodes, edges=frozenset(edges))


# ---------------------------------------------------------------------------
# JSON interchange

def detections_from_json(obj: list) -> list[DetectionFrame]:
    frames = []
    for rec in obj:
        objects = tuple(
            Detection(
                cls=o["class"], score=float(o["score"]), bbox=tuple(o["bbox"])
            )
            for o in rec["objects"]
        )
        frames.append(DetectionFrame(frame=int(rec["frame"]), objects=objects))
    return frames


def load_detections(path: str | Path) -> list[DetectionFrame]:
    return detections_from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def table_from_json(obj: Mapping[str, list[str]]) -> RelationTable:
    relations: dict[str, set[str]] = {}
    for cls, related in obj.items():
        cls = _norm_class(cls)
        for other in related:
            other = _norm_class(other)
            relations.setdefault(cls, set()).add(other)
            relations.setdefault(other, set()).add(cls)
    return RelationTable(
        relations={cls: frozenset(rel) for cls, rel in relations.items()}
    )


def load_table(path: str | Path) -> RelationTable:
    return table_from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def save_table(table: RelationTable, path: str | Path) -> None:
    obj = {cls: sorted(rel) for cls, rel in sorted(table.relations.items())}
    Path(path).write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8")


def graph_to_json(graph: RelationGraph) -> dict:
    return {
        "frame": graph.frame,
        "nodes": list(graph.nodes),
        "edges": sorted([p, q] for p, q in graph.edges),
    }
