"""Pydantic request/response models for the HTTP service.

Paths in requests are server-local: the service scans directories it
can reach, it does not accept uploaded archives.
"""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field


class ScanRequest(BaseModel):
    project_dir: str = Field(description="Server-local project directory")


class CompareRequest(BaseModel):
    project_dir: str


class MetricsRequest(BaseModel):
    dir_a: str
    dir_b: str
    exclude_same_project: bool = False


class IndexLoadRequest(BaseModel):
    path: str


class IndexBuildRequest(BaseModel):
    corpus_dir: str
    manifest_path: Optional[str] = None
    out_path: str
    load_after_build: bool = True


class EvidenceModel(BaseModel):
    target_class: str
    target_path: str
    hash: str
    origin_group: str
    artifacts: list[list[str]]
    origin_timestamp: int
    co_released_within_group: bool


class TplEntry(BaseModel):
    group: str
    artifacts: list[str]
    evidence_count: int


class ScanResponse(BaseModel):
    project: str
    scanned_files: int
    parsed_classes: int
    extracted_features: int
    evidences: list[EvidenceModel]
    tpls: list[TplEntry]
    warnings: list[str]
    config: dict


class CompareResponse(BaseModel):
    tpl_cc: list[str]
    tpl_pm: list[str]
    cc_only: list[str]
    pm_only: list[str]
    intersection: list[str]
    ir: float
    dr: float
    warnings: list[str]
    config: dict


class ConjugateEntry(BaseModel):
    class_a: str
    class_b: str
    n: int
    m: int
    matching_size: int
    percentage: float


class AssociatedEntry(BaseModel):
    project: str
    caller_class: str
    caller_name: str
    callee_total: int
    callee_cloned: int
    percentage: float


class MetricsResponse(BaseModel):
    conjugates: list[ConjugateEntry]
    associated: list[AssociatedEntry]
    histogram: dict[str, list[int]]
    warnings: list[str]


class IndexStatsModel(BaseModel):
    library_count: int
    version_count: int
    raw_feature_count: int
    refined_feature_count: int
    missing_source_count: int


class StatusResponse(BaseModel):
    index_loaded: bool
    record_count: int
    stats: Optional[IndexStatsModel] = None
    manifest_digest: Optional[str] = None
    config: dict


class BuildResponse(BaseModel):
    out_path: str
    stats: IndexStatsModel
    loaded: bool
    warnings: list[str]
