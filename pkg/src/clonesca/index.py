"""Reference index: ingest a corpus of library releases, refine, persist.

The corpus is declared by a JSON manifest listing group/artifact/version
triples with release timestamps (milliseconds since epoch) and, per
version, either an expanded source directory or a zip-format source
archive. Versions without sources are counted and skipped — exactly
the situation that produces the documented earliest-release
misattribution when the true origin never shipped sources.

Index file format (versioned, line-delimited, canonical key order):

    line 1: {"format": "clonesca-index/1", "manifest_digest": ...,
             "record_count": N, "stats": {...}}
    lines 2..N+1, sorted by hash: {"exemplar": [class, path],
             "group": ..., "hash": ..., "releases": [[artifact,
             version], ...], "timestamp": ...}

Loading verifies the format tag and the record count, so a truncated
file fails closed instead of producing a partial index.
"""

from __future__ import annotations

import concurrent.futures
import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from clonesca.config import ToolConfig
from clonesca.errors import (
    EmptyIndex,
    FormatVersionMismatch,
    IoError,
    ManifestError,
)
from clonesca.extract import (
    ClassFeature,
    ExtractStats,
    extract_from_source,
    iter_archive_sources,
    iter_java_sources,
)
from clonesca.hashing import FeatureHash
from clonesca.refinery import (
    FeatureRecord,
    LibraryCoordinate,
    RawFeature,
    ReleaseMeta,
    RemovalRecord,
    build_class_graph,
    centrality_filter,
    dedup_features,
    name_is_testlike,
    pattern_suffix,
)

FORMAT_TAG = "clonesca-index/1"

# reference-side name patterns that usually mean platform-variant artifacts
_PLATFORM_HINTS = ("arm64", "x86", "aarch64", "darwin", "win32", "linux")


@dataclass(frozen=True)
class VersionEntry:
    version: str
    timestamp: int
    source_path: Optional[str] = None
    archive_path: Optional[str] = None


@dataclass(frozen=True)
class LibraryEntry:
    group: str
    artifact: str
    versions: tuple[VersionEntry, ...]


@dataclass(frozen=True)
class CorpusManifest:
    libraries: tuple[LibraryEntry, ...]
    created_at: int
    tool_version: str

    def digest(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def to_dict(self) -> dict:
        return {
            "created_at": self.created_at,
            "tool_version": self.tool_version,
            "libraries": [
                {
                    "group": lib.group,
                    "artifact": lib.artifact,
                    "versions": [
                        {
                            "version": v.version,
                            "timestamp": v.timestamp,
                            "source_path": v.source_path,
                            "archive_path": v.archive_path,
                        }
                        for v in lib.versions
                    ],
                }
                for lib in self.libraries
            ],
        }


def load_manifest(path: Path) -> CorpusManifest:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ManifestError(
            f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return parse_manifest(raw, str(path))


def parse_manifest(raw: dict, origin: str = "<manifest>") -> CorpusManifest:
    if not isinstance(raw, dict) or "libraries" not in raw:
        raise ManifestError(f"{origin}: manifest must be an object with 'libraries'")
    libraries = []
    seen: set[tuple[str, str, str]] = set()
    for lib in raw["libraries"]:
        group = lib.get("group", "")
        artifact = lib.get("artifact", "")
        if not group or not artifact:
            raise ManifestError(f"{origin}: library entry missing group/artifact: {lib}")
        versions = []
        for v in lib.get("versions", []):
            version = v.get("version", "")
            timestamp = v.get("timestamp")
            if not version or not isinstance(timestamp, int) or timestamp <= 0:
                raise ManifestError(
                    f"{origin}: bad version entry for {group}:{artifact}: {v}"
                )
            triple = (group, artifact, version)
            if triple in seen:
                raise ManifestError(f"{origin}: duplicate coordinate {':'.join(triple)}")
            seen.add(triple)
            versions.append(
                VersionEntry(
                    version=version,
                    timestamp=timestamp,
                    source_path=v.get("source_path"),
                    archive_path=v.get("archive_path"),
                )
            )
        libraries.append(LibraryEntry(group, artifact, tuple(versions)))
    return CorpusManifest(
        libraries=tuple(libraries),
        created_at=raw.get("created_at", 0),
        tool_version=raw.get("tool_version", ""),
    )


@dataclass
class VersionFeatures:
    meta: ReleaseMeta
    features: list[ClassFeature]


@dataclass
class IngestResult:
    versions: list[VersionFeatures]
    stats: ExtractStats
    removals: list[RemovalRecord]
    missing_sources: int = 0
    library_count: int = 0
    version_count: int = 0


def _ingest_one_version(
    args: tuple[str, str, str, int, Optional[str], Optional[str], dict],
) -> tuple[Optional[VersionFeatures], ExtractStats, list[RemovalRecord], bool]:
    """Worker for one library version; must stay module-level picklable."""
    group, artifact, version, timestamp, source_path, archive_path, cfg_dict = args
    cfg_dict = dict(cfg_dict)
    cfg_dict["pattern_suffixes"] = tuple(cfg_dict["pattern_suffixes"])
    config = ToolConfig(**cfg_dict)
    meta = ReleaseMeta(LibraryCoordinate(group, artifact, version), timestamp)
    stats = ExtractStats()
    removals: list[RemovalRecord] = []
    sources = None
    if source_path and Path(source_path).is_dir():
        sources = iter_java_sources(Path(source_path))
    elif archive_path and Path(archive_path).is_file():
        sources = iter_archive_sources(Path(archive_path))
    if sources is None:
        return None, stats, removals, True
    features: list[ClassFeature] = []
    for rel_path, data in sources:
        features.extend(extract_from_source(rel_path, data, config, stats, removals))
    if not features and stats.scanned_files == 0:
        return None, stats, removals, True
    return VersionFeatures(meta, features), stats, removals, False


def ingest_corpus(
    manifest: CorpusManifest,
    base_dir: Path,
    config: Optional[ToolConfig] = None,
) -> IngestResult:
    """Extract raw class features from every version with sources."""
    cfg = config or ToolConfig()
    tasks = []
    for lib in manifest.libraries:
        for v in lib.versions:
            tasks.append(
                (
                    lib.group,
                    lib.artifact,
                    v.version,
                    v.timestamp,
                    str(base_dir / v.source_path) if v.source_path else None,
                    str(base_dir / v.archive_path) if v.archive_path else None,
                    cfg.to_dict(),
                )
            )

    result = IngestResult(
        versions=[],
        stats=ExtractStats(),
        removals=[],
        library_count=len(manifest.libraries),
        version_count=len(tasks),
    )
    for lib in manifest.libraries:
        if any(hint in lib.artifact for hint in _PLATFORM_HINTS):
            result.stats.warnings.append(
                f"artifact {lib.group}:{lib.artifact} looks platform-specific; "
                f"consider curating variants out of the corpus"
            )

    if cfg.worker_count > 1 and len(tasks) > 1:
        with concurrent.futures.ProcessPoolExecutor(cfg.worker_count) as pool:
            outputs = list(pool.map(_ingest_one_version, tasks))
    else:
        outputs = [_ingest_one_version(task) for task in tasks]

    for vf, stats, removals, missing in outputs:
        _merge_stats(result.stats, stats)
        result.removals.extend(removals)
        if missing:
            result.missing_sources += 1
        elif vf is not None:
            result.versions.append(vf)
    return result


def _merge_stats(into: ExtractStats, part: ExtractStats) -> None:
    into.scanned_files += part.scanned_files
    into.parsed_classes += part.parsed_classes
    into.parse_errors += part.parse_errors
    into.encoding_errors += part.encoding_errors
    into.extracted_features += part.extracted_features
    into.warnings.extend(part.warnings)


@dataclass
class IndexStats:
    library_count: int = 0
    version_count: int = 0
    raw_feature_count: int = 0
    refined_feature_count: int = 0
    missing_source_count: int = 0

    def to_dict(self) -> dict[str, int]:
        return {
            "library_count": self.library_count,
            "version_count": self.version_count,
            "raw_feature_count": self.raw_feature_count,
            "refined_feature_count": self.refined_feature_count,
            "missing_source_count": self.missing_source_count,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "IndexStats":
        return cls(**{k: int(raw.get(k, 0)) for k in cls().to_dict()})


@dataclass
class ReferenceIndex:
    records: dict[int, FeatureRecord]
    stats: IndexStats
    manifest_digest: str

    def lookup(self, hash_: FeatureHash) -> Optional[FeatureRecord]:
        return self.records.get(hash_.value)

    def __len__(self) -> int:
        return len(self.records)


def build_index(
    ingested: IngestResult,
    manifest: CorpusManifest,
    config: Optional[ToolConfig] = None,
    removals: Optional[list[RemovalRecord]] = None,
    warnings: Optional[list[str]] = None,
) -> ReferenceIndex:
    """Refine the raw feature stream into the queryable index.

    Per version: name/path filters (C3, C4), then the centrality cut;
    across the whole corpus: earliest-release dedup.
    """
    cfg = config or ToolConfig()
    raw_features: list[RawFeature] = []
    raw_count = 0
    for vf in ingested.versions:
        raw_count += len(vf.features)
        survivors = _reference_filters(vf.features, cfg, removals)
        if not survivors:
            continue
        graph = build_class_graph(survivors)
        kept_names, percentiles = centrality_filter(graph, cfg.percentile_cutoff)
        for feat in survivors:
            if feat.qualified_name in kept_names:
                raw_features.append(
                    RawFeature(
                        hash=feat.hash,
                        meta=vf.meta,
                        qualified_name=feat.qualified_name,
                        source_path=feat.source_path,
                    )
                )
            elif removals is not None:
                removals.append(
                    RemovalRecord(
                        feat.source_path,
                        feat.qualified_name,
                        "centrality",
                        f"percentile {percentiles[feat.qualified_name]:.1f} "
                        f"> {cfg.percentile_cutoff}",
                    )
                )

    records = dedup_features(raw_features)
    stats = IndexStats(
        library_count=ingested.library_count,
        version_count=ingested.version_count,
        raw_feature_count=raw_count,
        refined_feature_count=len(records),
        missing_source_count=ingested.missing_sources,
    )
    if not records and warnings is not None:
        warnings.append(str(EmptyIndex("no feature survived refinement")))
    return ReferenceIndex(
        records={r.hash.value: r for r in records},
        stats=stats,
        manifest_digest=manifest.digest(),
    )


def _reference_filters(
    features: list[ClassFeature],
    cfg: ToolConfig,
    removals: Optional[list[RemovalRecord]],
) -> list[ClassFeature]:
    survivors = []
    for feat in features:
        suffix = pattern_suffix(feat.simple_name, cfg.pattern_suffixes)
        if suffix is not None:
            if removals is not None:
                removals.append(
                    RemovalRecord(
                        feat.source_path, feat.qualified_name, "C3",
                        f"design-pattern name suffix {suffix!r}",
                    )
                )
            continue
        if feat.is_test_path or name_is_testlike(feat.simple_name):
            if removals is not None:
                removals.append(
                    RemovalRecord(
                        feat.source_path, feat.qualified_name, "C4",
                        "test name or path",
                    )
                )
            continue
        survivors.append(feat)
    return survivors


# ---- persistence ----


def save_index(index: ReferenceIndex, path: Path) -> None:
    lines = [
        json.dumps(
            {
                "format": FORMAT_TAG,
                "manifest_digest": index.manifest_digest,
                "record_count": len(index.records),
                "stats": index.stats.to_dict(),
            },
            sort_keys=True,
            separators=(",", ":"),
        )
    ]
    for value in sorted(index.records):
        record = index.records[value]
        lines.append(
            json.dumps(
                {
                    "exemplar": list(record.exemplar),
                    "group": record.origin_group,
                    "hash": record.hash.hex,
                    "releases": [list(r) for r in record.releases],
                    "timestamp": record.timestamp,
                },
                sort_keys=True,
                separators=(",", ":"),
            )
        )
    try:
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write index {path}: {exc}") from exc


def load_index(path: Path) -> ReferenceIndex:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read index {path}: {exc}") from exc
    lines = text.splitlines()
    if not lines:
        raise FormatVersionMismatch(f"{path}: empty index file")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise FormatVersionMismatch(f"{path}: unreadable header: {exc}") from exc
    if header.get("format") != FORMAT_TAG:
        raise FormatVersionMismatch(
            f"{path}: format {header.get('format')!r}, expected {FORMAT_TAG!r}"
        )
    expected = header.get("record_count", -1)
    body = lines[1:]
    if len(body) != expected:
        raise FormatVersionMismatch(
            f"{path}: truncated or padded: {len(body)} records, header says {expected}"
        )
    records: dict[int, FeatureRecord] = {}
    for line in body:
        try:
            raw = json.loads(line)
            record = FeatureRecord(
                hash=FeatureHash.from_hex(raw["hash"]),
                origin_group=raw["group"],
                releases=tuple((a, v) for a, v in raw["releases"]),
                timestamp=raw["timestamp"],
                exemplar=(raw["exemplar"][0], raw["exemplar"][1]),
            )
        except (json.JSONDecodeError, KeyError, ValueError, TypeError) as exc:
            raise FormatVersionMismatch(f"{path}: bad record line: {exc}") from exc
        records[record.hash.value] = record
    return ReferenceIndex(
        records=records,
        stats=IndexStats.from_dict(header.get("stats", {})),
        manifest_digest=header.get("manifest_digest", ""),
    )


def lookup(index: ReferenceIndex, hash_: FeatureHash) -> Optional[FeatureRecord]:
    return index.lookup(hash_)
