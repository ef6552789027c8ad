"""FastAPI application exposing scans over a resident reference index."""

from __future__ import annotations

from pathlib import Path
from typing import Optional

import click
from fastapi import FastAPI, HTTPException

from clonesca import __version__
from clonesca.config import ToolConfig
from clonesca.errors import FormatVersionMismatch, IoError, ManifestError
from clonesca.index import (
    ReferenceIndex,
    build_index,
    ingest_corpus,
    load_index,
    load_manifest,
    save_index,
)
from clonesca.scanner import compare_project, scan_project
from clonesca.clonestats import clone_metrics
from clonesca.service import schemas


def create_app(
    index_path: Optional[Path] = None,
    config: Optional[ToolConfig] = None,
) -> FastAPI:
    app = FastAPI(
        title="clonesca",
        version=__version__,
        description="Clone-based SCA for Java: scan projects against a "
        "resident reference index of class fingerprints.",
    )
    app.state.config = config or ToolConfig()
    app.state.index = None
    if index_path is not None:
        app.state.index = load_index(index_path)

    def _require_index() -> ReferenceIndex:
        if app.state.index is None:
            raise HTTPException(status_code=409, detail="no index loaded")
        return app.state.index

    def _require_dir(path: str) -> Path:
        directory = Path(path)
        if not directory.is_dir():
            raise HTTPException(status_code=404, detail=f"not a directory: {path}")
        return directory

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok", "version": __version__}

    @app.get("/status", response_model=schemas.StatusResponse)
    def status() -> schemas.StatusResponse:
        index: Optional[ReferenceIndex] = app.state.index
        return schemas.StatusResponse(
            index_loaded=index is not None,
            record_count=len(index) if index else 0,
            stats=(
                schemas.IndexStatsModel(**index.stats.to_dict()) if index else None
            ),
            manifest_digest=index.manifest_digest if index else None,
            config=app.state.config.to_dict(),
        )

    @app.post("/index/load", response_model=schemas.StatusResponse)
    def index_load(request: schemas.IndexLoadRequest) -> schemas.StatusResponse:
        try:
            app.state.index = load_index(Path(request.path))
        except (IoError, FormatVersionMismatch) as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return status()

    @app.post("/index/build", response_model=schemas.BuildResponse)
    def index_build(request: schemas.IndexBuildRequest) -> schemas.BuildResponse:
        corpus = _require_dir(request.corpus_dir)
        manifest_file = (
            Path(request.manifest_path)
            if request.manifest_path
            else corpus / "manifest.json"
        )
        try:
            manifest = load_manifest(manifest_file)
        except ManifestError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        warnings: list[str] = []
        ingested = ingest_corpus(manifest, corpus, app.state.config)
        index = build_index(ingested, manifest, app.state.config, warnings=warnings)
        try:
            save_index(index, Path(request.out_path))
        except IoError as exc:
            raise HTTPException(status_code=500, detail=str(exc)) from exc
        if request.load_after_build:
            app.state.index = index
        return schemas.BuildResponse(
            out_path=request.out_path,
            stats=schemas.IndexStatsModel(**index.stats.to_dict()),
            loaded=request.load_after_build,
            warnings=warnings + ingested.stats.warnings,
        )

    @app.post("/scan", response_model=schemas.ScanResponse)
    def scan(request: schemas.ScanRequest) -> schemas.ScanResponse:
        index = _require_index()
        project = _require_dir(request.project_dir)
        report = scan_project(project, index, app.state.config)
        return schemas.ScanResponse(**report.to_dict())

    @app.post("/compare", response_model=schemas.CompareResponse)
    def compare(request: schemas.CompareRequest) -> schemas.CompareResponse:
        index = _require_index()
        project = _require_dir(request.project_dir)
        report = scan_project(project, index, app.state.config)
        comparison = compare_project(project, report, app.state.config)
        return schemas.CompareResponse(**comparison.to_dict())

    @app.post("/clone-metrics", response_model=schemas.MetricsResponse)
    def metrics(request: schemas.MetricsRequest) -> schemas.MetricsResponse:
        dir_a = _require_dir(request.dir_a)
        dir_b = _require_dir(request.dir_b)
        cfg = app.state.config.with_overrides(
            exclude_same_project=request.exclude_same_project or None
        )
        report = clone_metrics(dir_a, dir_b, cfg)
        return schemas.MetricsResponse(**report.to_dict())

    return app


@click.command()
@click.option("--index", "index_path", type=click.Path(), default=None,
              help="Index file to load at startup.")
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8000, type=int)
def main(index_path: Optional[str], host: str, port: int) -> None:
    """Run the HTTP service with uvicorn."""
    import uvicorn

    app = create_app(Path(index_path) if index_path else None)
    uvicorn.run(app, host=host, port=port)
