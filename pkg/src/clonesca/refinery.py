"""Reference-side feature refinement.

Raw class features from a corpus carry three kinds of noise: supporting
classes (interfaces, data holders, pattern scaffolding, tests),
low-centrality classes that no other class depends on, and duplicated
classes shared between libraries. Refinement removes them in a fixed
order: C1 interfaces/empty classes, C2 all-trivial classes, C3
design-pattern names, C4 test classes, then the PageRank percentile
cut within each library version, then cross-corpus deduplication where
the earliest release timestamp wins ownership of a feature.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Protocol, Sequence

from clonesca.config import ToolConfig
from clonesca.hashing import FeatureHash
from clonesca.metrics import function_score
from clonesca.sources import ClassUnit


class ClassLike(Protocol):
    """The slice of a class the graph and name filters care about."""

    qualified_name: str
    simple_name: str
    referenced_types: frozenset[str] | set[str]


@dataclass(frozen=True, order=True)
class LibraryCoordinate:
    group: str
    artifact: str
    version: str

    def __post_init__(self) -> None:
        if not (self.group and self.artifact and self.version):
            raise ValueError(f"coordinate components must be non-empty: {self}")

    @property
    def gav(self) -> str:
        return f"{self.group}:{self.artifact}:{self.version}"

    @classmethod
    def parse(cls, text: str) -> "LibraryCoordinate":
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"expected group:artifact:version, got {text!r}")
        return cls(*parts)


@dataclass(frozen=True)
class ReleaseMeta:
    coordinate: LibraryCoordinate
    timestamp: int  # milliseconds since epoch, UTC

    def __post_init__(self) -> None:
        if self.timestamp <= 0:
            raise ValueError(f"timestamp must be positive: {self.timestamp}")


@dataclass(frozen=True)
class RawFeature:
    """One class feature as extracted from one library version."""

    hash: FeatureHash
    meta: ReleaseMeta
    qualified_name: str
    source_path: str


@dataclass(frozen=True)
class FeatureRecord:
    """A refined, deduplicated reference feature."""

    hash: FeatureHash
    origin_group: str
    releases: tuple[tuple[str, str], ...]  # (artifact, version), sorted
    timestamp: int
    exemplar: tuple[str, str]  # (class qualified name, source path)

    def __post_init__(self) -> None:
        if not self.releases:
            raise ValueError("a feature record needs at least one release")


@dataclass(frozen=True)
class RemovalRecord:
    path: str
    qualified_name: str
    criterion: str  # C1 C2 C3 C4 centrality
    detail: str

    def to_dict(self) -> dict[str, str]:
        return {
            "path": self.path,
            "class": self.qualified_name,
            "criterion": self.criterion,
            "detail": self.detail,
        }


# ---- supporting-class filters ----


def name_is_testlike(simple_name: str) -> bool:
    low = simple_name.lower()
    return (
        low.startswith("test")
        or low.startswith("tests")
        or low.endswith("test")
        or low.endswith("tests")
    )


def filter_supporting(
    classes: Iterable[ClassUnit],
    config: Optional[ToolConfig] = None,
) -> tuple[list[ClassUnit], list[RemovalRecord]]:
    """Apply C1-C4 in order; returns survivors plus the removal log."""
    cfg = config or ToolConfig()
    retained: list[ClassUnit] = []
    removals: list[RemovalRecord] = []
    for cls in classes:
        concrete = [fn for fn in cls.functions if fn.has_body]
        if not concrete:
            removals.append(
                RemovalRecord(
                    cls.source_path, cls.qualified_name, "C1",
                    "no concrete function implementation",
                )
            )
            continue
        scores = [function_score(fn, cfg.mi_form).value for fn in concrete]
        if all(score < cfg.triviality_threshold for score in scores):
            removals.append(
                RemovalRecord(
                    cls.source_path, cls.qualified_name, "C2",
                    f"all {len(concrete)} functions trivial "
                    f"(max score {max(scores):.1f})",
                )
            )
            continue
        suffix = pattern_suffix(cls.simple_name, cfg.pattern_suffixes)
        if suffix is not None:
            removals.append(
                RemovalRecord(
                    cls.source_path, cls.qualified_name, "C3",
                    f"design-pattern name suffix {suffix!r}",
                )
            )
            continue
        if cls.is_test_path or name_is_testlike(cls.simple_name):
            removals.append(
                RemovalRecord(
                    cls.source_path, cls.qualified_name, "C4", "test name or path",
                )
            )
            continue
        retained.append(cls)
    return retained, removals


def pattern_suffix(name: str, suffixes: tuple[str, ...]) -> Optional[str]:
    for suffix in suffixes:
        if name.endswith(suffix):
            return suffix
    return None


# ---- class dependency graph and centrality ----


@dataclass
class ClassGraph:
    nodes: list[str]  # qualified names, sorted
    edges: set[tuple[str, str]]  # (from used class, to using class)


def build_class_graph(classes: Sequence[ClassLike]) -> ClassGraph:
    """Edges run from the used class to its user: A -> B when B's body
    mentions A's simple name. Same-named classes all receive edges."""
    by_simple: dict[str, list[str]] = {}
    for cls in classes:
        by_simple.setdefault(cls.simple_name, []).append(cls.qualified_name)
    edges: set[tuple[str, str]] = set()
    for user in classes:
        for ref in user.referenced_types:
            for provider in by_simple.get(ref, ()):
                if provider != user.qualified_name:
                    edges.add((provider, user.qualified_name))
    return ClassGraph(sorted(c.qualified_name for c in classes), edges)


def pagerank(
    graph: ClassGraph,
    damping: float = 0.85,
    tol: float = 1e-9,
    max_iter: int = 200,
) -> dict[str, float]:
    """Power iteration with uniform teleport and uniform dangling mass,
    run until the L1 step delta drops below `tol`."""
    nodes = graph.nodes
    n = len(nodes)
    if n == 0:
        return {}
    out_edges: dict[str, list[str]] = {node: [] for node in nodes}
    for src, dst in graph.edges:
        out_edges[src].append(dst)
    for src in out_edges:
        out_edges[src].sort()
    rank = {node: 1.0 / n for node in nodes}
    for _ in range(max_iter):
        dangling = sum(rank[node] for node in nodes if not out_edges[node])
        base = (1.0 - damping) / n + damping * dangling / n
        nxt = {node: base for node in nodes}
        for src in nodes:
            targets = out_edges[src]
            if targets:
                share = damping * rank[src] / len(targets)
                for dst in targets:
                    nxt[dst] += share
        delta = sum(abs(nxt[node] - rank[node]) for node in nodes)
        rank = nxt
        if delta < tol:
            break
    return rank


def centrality_percentiles(graph: ClassGraph) -> dict[str, float]:
    """Rank percentile per class: 0.0 for the top-scoring class, 100.0
    for the last; a single node gets 0.0."""
    scores = pagerank(graph)
    ordered = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    n = len(ordered)
    if n == 0:
        return {}
    if n == 1:
        return {ordered[0][0]: 0.0}
    return {
        name: 100.0 * rank / (n - 1) for rank, (name, _) in enumerate(ordered)
    }


def centrality_filter(
    graph: ClassGraph, cutoff: float = 50.0
) -> tuple[set[str], dict[str, float]]:
    """Drop classes whose percentile exceeds the cutoff (strictly)."""
    percentiles = centrality_percentiles(graph)
    retained = {name for name, pct in percentiles.items() if pct <= cutoff}
    return retained, percentiles


# ---- deduplication by earliest release ----


def dedup_features(features: Iterable[RawFeature]) -> list[FeatureRecord]:
    """Two-step dedup: merge within a group, then earliest group wins.

    Within one groupId, features with an equal hash merge into a single
    record holding the union of (artifact, version) pairs and the
    earliest timestamp. Across groups, only the earliest record per
    hash survives; later groups' release lists are discarded. Ties
    resolve to the lexicographically smaller groupId.
    """
    by_group_hash: dict[tuple[str, int], list[RawFeature]] = {}
    for feat in features:
        key = (feat.meta.coordinate.group, feat.hash.value)
        by_group_hash.setdefault(key, []).append(feat)

    merged: dict[int, list[FeatureRecord]] = {}
    for (group, _), feats in sorted(by_group_hash.items()):
        releases = sorted(
            {(f.meta.coordinate.artifact, f.meta.coordinate.version) for f in feats}
        )
        timestamp = min(f.meta.timestamp for f in feats)
        exemplar_feat = min(
            feats,
            key=lambda f: (
                f.meta.timestamp,
                f.meta.coordinate.artifact,
                f.meta.coordinate.version,
                f.qualified_name,
            ),
        )
        record = FeatureRecord(
            hash=feats[0].hash,
            origin_group=group,
            releases=tuple(releases),
            timestamp=timestamp,
            exemplar=(exemplar_feat.qualified_name, exemplar_feat.source_path),
        )
        merged.setdefault(feats[0].hash.value, []).append(record)

    result = []
    for value in sorted(merged):
        candidates = merged[value]
        winner = min(candidates, key=lambda r: (r.timestamp, r.origin_group))
        result.append(winner)
    return result
