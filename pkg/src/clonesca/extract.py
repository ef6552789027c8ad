"""Feature extraction shared by reference ingestion and project scans.

Both sides must canonicalize identically or hashes cannot match: a
class yields a feature only if it has at least one concrete function
(C1) and at least one non-trivial function (C2); trivial functions are
still inlined into callers before being dropped as class roots. The
reference-only filters (names, paths, centrality, dedup) happen later
in the refinery and never run against scan targets.
"""

from __future__ import annotations

import zipfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Optional

from clonesca.config import ToolConfig
from clonesca.errors import EncodingError, ParseError
from clonesca.fingerprint import (
    build_class_ast,
    hash_tree,
    link_internal_calls,
)
from clonesca.hashing import FeatureHash
from clonesca.metrics import function_score
from clonesca.refinery import RemovalRecord
from clonesca.sources import ClassUnit, SourceFile, parse_source


@dataclass(frozen=True)
class ClassFeature:
    """One extracted class fingerprint plus the metadata refinement needs."""

    hash: FeatureHash
    qualified_name: str
    simple_name: str
    source_path: str
    kind: str
    referenced_types: frozenset[str]
    is_test_path: bool


@dataclass
class ExtractStats:
    scanned_files: int = 0
    parsed_classes: int = 0
    parse_errors: int = 0
    encoding_errors: int = 0
    extracted_features: int = 0
    warnings: list[str] = field(default_factory=list)


def extract_class_feature(
    cls: ClassUnit,
    config: Optional[ToolConfig] = None,
    removals: Optional[list[RemovalRecord]] = None,
    warnings: Optional[list[str]] = None,
) -> Optional[ClassFeature]:
    """Fingerprint one class, or None when C1/C2 leave nothing to hash."""
    cfg = config or ToolConfig()
    linked = link_internal_calls(cls, cfg.inline_node_cap, warnings)
    if not linked:
        if removals is not None:
            removals.append(
                RemovalRecord(
                    cls.source_path, cls.qualified_name, "C1",
                    "no concrete function implementation",
                )
            )
        return None
    concrete = [fn for fn in cls.functions if fn.has_body]
    scored = [(fn, function_score(fn, cfg.mi_form).value) for fn in concrete]
    retained = [
        (fn.name, fn.arity)
        for fn, score in scored
        if score >= cfg.triviality_threshold
    ]
    if not retained:
        if removals is not None:
            top = max(score for _, score in scored)
            removals.append(
                RemovalRecord(
                    cls.source_path, cls.qualified_name, "C2",
                    f"all {len(concrete)} functions trivial (max score {top:.1f})",
                )
            )
        return None
    ast = build_class_ast(linked, retained)
    return ClassFeature(
        hash=hash_tree(ast.root),
        qualified_name=cls.qualified_name,
        simple_name=cls.simple_name,
        source_path=cls.source_path,
        kind=cls.kind,
        referenced_types=frozenset(cls.referenced_types),
        is_test_path=cls.is_test_path,
    )


def extract_from_source(
    path: str,
    data: bytes,
    config: ToolConfig,
    stats: ExtractStats,
    removals: Optional[list[RemovalRecord]] = None,
) -> list[ClassFeature]:
    """Parse one file's bytes and fingerprint its classes.

    Unparseable or undecodable files are counted and skipped; a single
    bad file never aborts a run.
    """
    stats.scanned_files += 1
    try:
        source = SourceFile.from_bytes(path, data)
    except EncodingError as exc:
        stats.encoding_errors += 1
        stats.warnings.append(f"encoding: {exc}")
        return []
    try:
        classes = parse_source(source)
    except ParseError as exc:
        stats.parse_errors += 1
        stats.warnings.append(f"parse: {exc}")
        return []
    stats.parsed_classes += len(classes)
    features = []
    for cls in classes:
        feature = extract_class_feature(cls, config, removals, stats.warnings)
        if feature is not None:
            features.append(feature)
    stats.extracted_features += len(features)
    return features


def iter_java_sources(root: Path) -> Iterator[tuple[str, bytes]]:
    """(relative path, bytes) for every .java file under `root`, sorted."""
    for path in sorted(root.rglob("*.java")):
        if path.is_file():
            yield str(path.relative_to(root)), path.read_bytes()


def iter_archive_sources(archive: Path) -> Iterator[tuple[str, bytes]]:
    """(entry path, bytes) for .java entries of a zip-format source jar."""
    with zipfile.ZipFile(archive) as zf:
        for name in sorted(zf.namelist()):
            if name.endswith(".java") and not name.endswith("/"):
                yield name, zf.read(name)


def extract_from_dir(
    root: Path,
    config: Optional[ToolConfig] = None,
    removals: Optional[list[RemovalRecord]] = None,
) -> tuple[list[ClassFeature], ExtractStats]:
    cfg = config or ToolConfig()
    stats = ExtractStats()
    features: list[ClassFeature] = []
    for rel_path, data in iter_java_sources(root):
        features.extend(extract_from_source(rel_path, data, cfg, stats, removals))
    return features, stats
