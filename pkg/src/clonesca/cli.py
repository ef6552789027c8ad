"""Command-line entry point.

Thin by design: argument parsing, config layering, exit-code mapping.
All work happens in the core modules, which the HTTP service wraps the
same way. Machine-readable reports (canonical JSON, sorted keys) go to
stdout or --out; human summaries go to stderr.

Exit codes: 0 the command ran (findings or not), 2 unreadable project
input, 3 unreadable corpus/index/report input, 4 output failure.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Optional

import click

from clonesca import __version__
from clonesca.config import ToolConfig, load_config
from clonesca.errors import FormatVersionMismatch, IoError, ManifestError
from clonesca.index import (
    build_index,
    ingest_corpus,
    load_index,
    load_manifest,
    save_index,
)
from clonesca.scanner import (
    ComparisonReport,
    duplication_rate,
    improvement_rate,
    parse_declared_dependencies,
    scan_project,
)
from clonesca.clonestats import clone_metrics

EXIT_OK = 0
EXIT_BAD_PROJECT = 2
EXIT_BAD_CORPUS = 3
EXIT_BAD_OUTPUT = 4


def _echo_err(message: str) -> None:
    click.echo(message, err=True)


def _config_options(fn):
    fn = click.option("--config", "config_path", type=click.Path(), default=None,
                      help="JSON config file; flags override its values.")(fn)
    fn = click.option("--threshold", type=float, default=None,
                      help="Triviality threshold (default 60).")(fn)
    fn = click.option("--percentile-cutoff", type=float, default=None,
                      help="Centrality percentile cutoff (default 50).")(fn)
    fn = click.option("--mi-form", type=click.Choice(["log", "linear"]), default=None,
                      help="Complexity formula form (default log).")(fn)
    fn = click.option("--workers", type=int, default=None,
                      help="Worker processes for ingestion.")(fn)
    fn = click.option("--patterns-file", type=click.Path(), default=None,
                      help="File with one design-pattern name suffix per line.")(fn)
    return fn


def _build_config(
    config_path: Optional[str],
    threshold: Optional[float],
    percentile_cutoff: Optional[float],
    mi_form: Optional[str],
    workers: Optional[int],
    patterns_file: Optional[str],
) -> ToolConfig:
    base = load_config(config_path) if config_path else ToolConfig()
    suffixes = None
    if patterns_file:
        lines = Path(patterns_file).read_text(encoding="utf-8").splitlines()
        suffixes = tuple(line.strip() for line in lines if line.strip())
    return base.with_overrides(
        triviality_threshold=threshold,
        percentile_cutoff=percentile_cutoff,
        mi_form=mi_form,
        worker_count=workers,
        pattern_suffixes=suffixes,
    )


def _emit(payload: dict, out: Optional[str]) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out:
        try:
            Path(out).write_text(text, encoding="utf-8")
        except OSError as exc:
            _echo_err(f"error: cannot write {out}: {exc}")
            sys.exit(EXIT_BAD_OUTPUT)
    else:
        click.echo(text, nl=False)


@click.group()
@click.version_option(__version__, prog_name="clonesca")
def main() -> None:
    """Clone-based software composition analysis for Java source trees."""


@main.command("index-build")
@click.argument("corpus_dir", type=click.Path())
@click.option("--manifest", "manifest_path", type=click.Path(), default=None,
              help="Manifest JSON (default: CORPUS_DIR/manifest.json).")
@click.option("--out", "out_path", type=click.Path(), required=True,
              help="Where to write the index file.")
@click.option("--removal-log", type=click.Path(), default=None,
              help="Write the per-class removal log (JSONL) here.")
@_config_options
def cmd_index_build(
    corpus_dir: str,
    manifest_path: Optional[str],
    out_path: str,
    removal_log: Optional[str],
    **config_kwargs,
) -> None:
    """Ingest a reference corpus and write the refined feature index."""
    cfg = _build_config(**config_kwargs)
    corpus = Path(corpus_dir)
    if not corpus.is_dir():
        _echo_err(f"error: corpus directory not readable: {corpus}")
        sys.exit(EXIT_BAD_CORPUS)
    manifest_file = Path(manifest_path) if manifest_path else corpus / "manifest.json"
    try:
        manifest = load_manifest(manifest_file)
    except ManifestError as exc:
        _echo_err(f"error: {exc}")
        sys.exit(EXIT_BAD_CORPUS)

    warnings: list[str] = []
    ingested = ingest_corpus(manifest, corpus, cfg)
    removals = list(ingested.removals)  # C1/C2 first, then C3/C4/centrality
    index = build_index(ingested, manifest, cfg, removals=removals, warnings=warnings)
    try:
        save_index(index, Path(out_path))
    except IoError as exc:
        _echo_err(f"error: {exc}")
        sys.exit(EXIT_BAD_OUTPUT)
    if removal_log:
        try:
            lines = [json.dumps(r.to_dict(), sort_keys=True) for r in removals]
            Path(removal_log).write_text("\n".join(lines) + "\n", encoding="utf-8")
        except OSError as exc:
            _echo_err(f"error: cannot write removal log: {exc}")
            sys.exit(EXIT_BAD_OUTPUT)

    stats = index.stats
    if not manifest.libraries:
        warnings.append("manifest lists no libraries; index is empty")
    for warning in warnings + ingested.stats.warnings:
        _echo_err(f"warning: {warning}")
    _echo_err(f"config: {json.dumps(cfg.to_dict(), sort_keys=True)}")
    _echo_err(
        f"indexed {stats.library_count} libraries, {stats.version_count} versions: "
        f"{stats.raw_feature_count} raw features -> "
        f"{stats.refined_feature_count} refined "
        f"({stats.missing_source_count} versions without sources)"
    )
    sys.exit(EXIT_OK)


@main.command("scan")
@click.argument("project_dir", type=click.Path())
@click.option("--index", "index_path", type=click.Path(), required=True,
              help="Reference index file to match against.")
@click.option("--out", "out_path", type=click.Path(), default=None,
              help="Write the scan report here instead of stdout.")
@_config_options
def cmd_scan(
    project_dir: str,
    index_path: str,
    out_path: Optional[str],
    **config_kwargs,
) -> None:
    """Scan a project for copy-pasted library classes."""
    cfg = _build_config(**config_kwargs)
    project = Path(project_dir)
    if not project.is_dir():
        _echo_err(f"error: project directory not readable: {project}")
        sys.exit(EXIT_BAD_PROJECT)
    try:
        index = load_index(Path(index_path))
    except (IoError, FormatVersionMismatch) as exc:
        _echo_err(f"error: {exc}")
        sys.exit(EXIT_BAD_CORPUS)

    report = scan_project(project, index, cfg)
    _emit(report.to_dict(), out_path)
    _echo_err(
        f"scanned {report.scanned_files} files, {report.parsed_classes} classes, "
        f"{report.extracted_features} features; "
        f"{len(report.evidences)} evidence matches across {len(report.tpls)} groups"
    )
    sys.exit(EXIT_OK)


@main.command("compare")
@click.argument("project_dir", type=click.Path())
@click.option("--report", "report_path", type=click.Path(), required=True,
              help="Scan report (JSON) produced by `clonesca scan`.")
@click.option("--out", "out_path", type=click.Path(), default=None)
@_config_options
def cmd_compare(
    project_dir: str,
    report_path: str,
    out_path: Optional[str],
    **config_kwargs,
) -> None:
    """Compare a scan's findings against declared pom.xml dependencies."""
    cfg = _build_config(**config_kwargs)
    project = Path(project_dir)
    if not project.is_dir():
        _echo_err(f"error: project directory not readable: {project}")
        sys.exit(EXIT_BAD_PROJECT)
    try:
        raw = json.loads(Path(report_path).read_text(encoding="utf-8"))
        tpl_cc = {
            f"{ev['origin_group']}:{artifact}"
            for ev in raw.get("evidences", [])
            for artifact, _version in ev.get("artifacts", [])
        }
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        _echo_err(f"error: cannot read scan report {report_path}: {exc}")
        sys.exit(EXIT_BAD_CORPUS)

    tpl_pm, warnings = parse_declared_dependencies(project)
    if not tpl_pm:
        warnings.append("no declared dependencies found; DR defined as 0")
    comparison = ComparisonReport(
        tpl_cc=tpl_cc,
        tpl_pm=tpl_pm,
        ir=improvement_rate(tpl_cc, tpl_pm),
        dr=duplication_rate(tpl_cc, tpl_pm),
        warnings=warnings,
        config=cfg.to_dict(),
    )
    _emit(comparison.to_dict(), out_path)
    _echo_err(
        f"IR {comparison.ir:.2f}% DR {comparison.dr:.2f}% "
        f"(clone-detected {len(tpl_cc)}, declared {len(tpl_pm)}, "
        f"overlap {len(tpl_cc & tpl_pm)})"
    )
    sys.exit(EXIT_OK)


@main.command("metrics")
@click.argument("dir_a", type=click.Path())
@click.argument("dir_b", type=click.Path())
@click.option("--out", "out_path", type=click.Path(), default=None)
@click.option("--exclude-same-project", is_flag=True, default=False,
              help="Drop clone pairs whose sides share a project.")
@click.option("--associated-mode", type=click.Choice(["max", "any"]), default=None)
@_config_options
def cmd_metrics(
    dir_a: str,
    dir_b: str,
    out_path: Optional[str],
    exclude_same_project: bool,
    associated_mode: Optional[str],
    **config_kwargs,
) -> None:
    """Associated/conjugate clone percentages between two source trees."""
    cfg = _build_config(**config_kwargs).with_overrides(
        exclude_same_project=exclude_same_project or None,
        associated_mode=associated_mode,
    )
    for d in (dir_a, dir_b):
        if not Path(d).is_dir():
            _echo_err(f"error: directory not readable: {d}")
            sys.exit(EXIT_BAD_PROJECT)
    report = clone_metrics(Path(dir_a), Path(dir_b), cfg)
    payload = {"config": cfg.to_dict(), **report.to_dict()}
    _emit(payload, out_path)
    _echo_err(
        f"{len(report.conjugates)} class pairs, "
        f"{len(report.associated)} scored callers"
    )
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()
