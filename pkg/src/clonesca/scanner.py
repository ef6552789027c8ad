"""Target-project scanning and declared-dependency comparison.

A scan extracts class features from a project with the same C1/C2
canonicalization the reference side used (mandatory: reference hashes
were computed after trivial-function removal), looks each hash up in
the index, and reports every match as evidence. One piece of evidence
suffices to report a library; no similarity threshold is involved.
Name/path filters and centrality are reference-side only: a copied
class renamed `XFactory` in the target must still match.

The comparison step parses declared dependencies out of pom.xml files
and scores the scan against them: the improvement rate IR counts
clone-detected libraries absent from the manifest, the duplication
rate DR counts those also declared.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from clonesca.config import ToolConfig
from clonesca.extract import ClassFeature, ExtractStats, extract_from_dir
from clonesca.hashing import FeatureHash
from clonesca.index import ReferenceIndex


@dataclass(frozen=True)
class Evidence:
    target_class: str
    target_path: str
    hash: FeatureHash
    origin_group: str
    artifacts: tuple[tuple[str, str], ...]  # (artifact, version) candidates
    origin_timestamp: int

    @property
    def co_released(self) -> bool:
        """The matched feature ships in several artifacts of one group."""
        return len({a for a, _ in self.artifacts}) > 1

    def to_dict(self) -> dict:
        return {
            "artifacts": [list(a) for a in self.artifacts],
            "co_released_within_group": self.co_released,
            "hash": self.hash.hex,
            "origin_group": self.origin_group,
            "origin_timestamp": self.origin_timestamp,
            "target_class": self.target_class,
            "target_path": self.target_path,
        }


@dataclass
class ScanReport:
    project: str
    scanned_files: int
    parsed_classes: int
    extracted_features: int
    evidences: list[Evidence]
    warnings: list[str] = field(default_factory=list)
    config: dict = field(default_factory=dict)

    @property
    def tpls(self) -> list[dict]:
        """Evidence grouped by origin, sorted for byte-stable reports."""
        grouped: dict[str, list[Evidence]] = {}
        for ev in self.evidences:
            grouped.setdefault(ev.origin_group, []).append(ev)
        result = []
        for group in sorted(grouped):
            evs = grouped[group]
            artifacts = sorted({a for ev in evs for a, _ in ev.artifacts})
            result.append(
                {
                    "group": group,
                    "artifacts": artifacts,
                    "evidence_count": len(evs),
                }
            )
        return result

    def tpl_pairs(self) -> set[str]:
        """group:artifact identities for IR/DR."""
        return {
            f"{ev.origin_group}:{artifact}"
            for ev in self.evidences
            for artifact, _ in ev.artifacts
        }

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "evidences": [ev.to_dict() for ev in self.evidences],
            "extracted_features": self.extracted_features,
            "parsed_classes": self.parsed_classes,
            "project": self.project,
            "scanned_files": self.scanned_files,
            "tpls": self.tpls,
            "warnings": list(self.warnings),
        }


def extract_project_features(
    project_dir: Path, config: Optional[ToolConfig] = None
) -> tuple[list[ClassFeature], ExtractStats]:
    features, stats = extract_from_dir(project_dir, config)
    if stats.scanned_files == 0:
        stats.warnings.append(f"no .java files under {project_dir}")
    return features, stats


def recognize(
    features: list[ClassFeature],
    index: ReferenceIndex,
    project: str,
    stats: Optional[ExtractStats] = None,
    config: Optional[ToolConfig] = None,
) -> ScanReport:
    """Match extracted features against the index; every hit is evidence."""
    evidences = []
    for feat in sorted(features, key=lambda f: (f.source_path, f.qualified_name)):
        record = index.lookup(feat.hash)
        if record is None:
            continue
        evidences.append(
            Evidence(
                target_class=feat.qualified_name,
                target_path=feat.source_path,
                hash=feat.hash,
                origin_group=record.origin_group,
                artifacts=record.releases,
                origin_timestamp=record.timestamp,
            )
        )
    stats = stats or ExtractStats()
    return ScanReport(
        project=project,
        scanned_files=stats.scanned_files,
        parsed_classes=stats.parsed_classes,
        extracted_features=stats.extracted_features,
        evidences=evidences,
        warnings=list(stats.warnings),
        config=(config or ToolConfig()).to_dict(),
    )


def scan_project(
    project_dir: Path,
    index: ReferenceIndex,
    config: Optional[ToolConfig] = None,
) -> ScanReport:
    features, stats = extract_project_features(project_dir, config)
    return recognize(features, index, str(project_dir), stats, config)


# ---- declared dependencies (pom.xml) ----


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _resolve_placeholders(value: str, properties: dict[str, str]) -> Optional[str]:
    """Substitute ${...} from the same file's <properties>; None if any
    placeholder stays unresolved."""
    out = value
    for _ in range(10):  # properties may reference properties
        if "${" not in out:
            return out
        start = out.index("${")
        end = out.find("}", start)
        if end == -1:
            return None
        key = out[start + 2 : end]
        if key not in properties:
            return None
        out = out[:start] + properties[key] + out[end + 1 :]
    return None


def parse_declared_dependencies(
    project_dir: Path,
) -> tuple[set[str], list[str]]:
    """groupId:artifactId pairs declared in any pom.xml of the project.

    Direct <dependencies> entries only (dependencyManagement is a
    version table, not a declaration); no transitive resolution.
    """
    declared: set[str] = set()
    warnings: list[str] = []
    for pom in sorted(project_dir.rglob("pom.xml")):
        try:
            tree = ET.parse(pom)
        except ET.ParseError as exc:
            warnings.append(f"{pom}: malformed XML skipped: {exc}")
            continue
        root = tree.getroot()
        properties: dict[str, str] = {}
        for props in root.iter():
            if _local(props.tag) == "properties":
                for child in props:
                    if child.text is not None:
                        properties[_local(child.tag)] = child.text.strip()
        for deps in root.iter():
            if _local(deps.tag) != "dependencies":
                continue
            if _in_dependency_management(root, deps):
                continue
            for dep in deps:
                if _local(dep.tag) != "dependency":
                    continue
                group = artifact = None
                for child in dep:
                    if _local(child.tag) == "groupId":
                        group = (child.text or "").strip()
                    elif _local(child.tag) == "artifactId":
                        artifact = (child.text or "").strip()
                if not group or not artifact:
                    warnings.append(f"{pom}: dependency without groupId/artifactId")
                    continue
                rgroup = _resolve_placeholders(group, properties)
                rartifact = _resolve_placeholders(artifact, properties)
                if rgroup is None or rartifact is None:
                    warnings.append(
                        f"{pom}: unresolved placeholder in {group}:{artifact}"
                    )
                    continue
                declared.add(f"{rgroup}:{rartifact}")
    return declared, warnings


def _in_dependency_management(root: ET.Element, target: ET.Element) -> bool:
    for dm in root.iter():
        if _local(dm.tag) == "dependencyManagement":
            for nested in dm.iter():
                if nested is target:
                    return True
    return False


# ---- IR / DR ----


def improvement_rate(tpl_cc: set[str], tpl_pm: set[str]) -> float:
    """Percentage of clone-detected libraries beyond the declared ones.

    With nothing declared but at least one clone-detected library the
    rate is pinned to 100%; with nothing on either side it is 0.
    """
    if not tpl_pm:
        return 100.0 if tpl_cc else 0.0
    return 100.0 * len(tpl_cc - tpl_pm) / len(tpl_pm)


def duplication_rate(tpl_cc: set[str], tpl_pm: set[str]) -> float:
    """Percentage of declared libraries also found by clone detection;
    0 when nothing is declared (the caller should warn)."""
    if not tpl_pm:
        return 0.0
    return 100.0 * len(tpl_cc & tpl_pm) / len(tpl_pm)


@dataclass
class ComparisonReport:
    tpl_cc: set[str]
    tpl_pm: set[str]
    ir: float
    dr: float
    warnings: list[str] = field(default_factory=list)
    config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "cc_only": sorted(self.tpl_cc - self.tpl_pm),
            "config": self.config,
            "dr": self.dr,
            "intersection": sorted(self.tpl_cc & self.tpl_pm),
            "ir": self.ir,
            "pm_only": sorted(self.tpl_pm - self.tpl_cc),
            "tpl_cc": sorted(self.tpl_cc),
            "tpl_pm": sorted(self.tpl_pm),
            "warnings": list(self.warnings),
        }


def compare_project(
    project_dir: Path,
    scan: ScanReport,
    config: Optional[ToolConfig] = None,
) -> ComparisonReport:
    tpl_pm, warnings = parse_declared_dependencies(project_dir)
    tpl_cc = scan.tpl_pairs()
    if not tpl_pm:
        warnings.append("no declared dependencies found; DR defined as 0")
    return ComparisonReport(
        tpl_cc=tpl_cc,
        tpl_pm=tpl_pm,
        ir=improvement_rate(tpl_cc, tpl_pm),
        dr=duplication_rate(tpl_cc, tpl_pm),
        warnings=warnings,
        config=(config or ToolConfig()).to_dict(),
    )
