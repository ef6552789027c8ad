"""CLI behavior: exit codes, determinism, config layering."""

import json

import pytest
from click.testing import CliRunner

from clonesca.cli import main

from conftest import library_class, write_manifest


@pytest.fixture
def runner():
    return CliRunner()


def make_corpus(tmp_path):
    corpus = tmp_path / "corpus"
    vdir = corpus / "g.vendor" / "lib" / "1.0"
    vdir.mkdir(parents=True)
    (vdir / "Engine.java").write_text(library_class("Engine", 8, package="vendor"))
    write_manifest(
        corpus,
        [{"group": "g.vendor", "artifact": "lib",
          "versions": [{"version": "1.0", "timestamp": 1000,
                        "source_path": "g.vendor/lib/1.0"}]}],
    )
    return corpus


def make_project(tmp_path, clone=True):
    project = tmp_path / "project"
    project.mkdir()
    if clone:
        src = library_class("Engine", 8, package="vendor").replace(
            "package vendor;", "package app;"
        )
        (project / "Engine.java").write_text(src)
    (project / "pom.xml").write_text(
        "<project><dependencies><dependency><groupId>org.declared</groupId>"
        "<artifactId>thing</artifactId></dependency></dependencies></project>"
    )
    return project


def test_index_build_and_scan_roundtrip(tmp_path, runner):
    corpus = make_corpus(tmp_path)
    project = make_project(tmp_path)
    index_path = tmp_path / "ref.idx"

    result = runner.invoke(
        main,
        ["index-build", str(corpus), "--out", str(index_path), "--workers", "1"],
    )
    assert result.exit_code == 0, result.output
    assert index_path.exists()

    scan_out = tmp_path / "scan.json"
    result = runner.invoke(
        main,
        ["scan", str(project), "--index", str(index_path),
         "--out", str(scan_out), "--workers", "1"],
    )
    assert result.exit_code == 0
    report = json.loads(scan_out.read_text())
    assert report["tpls"] == [
        {"artifacts": ["lib"], "evidence_count": 1, "group": "g.vendor"}
    ]
    assert report["config"]["triviality_threshold"] == 60.0


def test_scan_exit_codes(tmp_path, runner):
    corpus = make_corpus(tmp_path)
    index_path = tmp_path / "ref.idx"
    runner.invoke(main, ["index-build", str(corpus), "--out", str(index_path),
                         "--workers", "1"])

    result = runner.invoke(
        main, ["scan", str(tmp_path / "missing"), "--index", str(index_path)]
    )
    assert result.exit_code == 2

    result = runner.invoke(
        main, ["scan", str(tmp_path), "--index", str(tmp_path / "absent.idx")]
    )
    assert result.exit_code == 3

    empty = tmp_path / "empty_project"
    empty.mkdir()
    result = runner.invoke(
        main, ["scan", str(empty), "--index", str(index_path), "--workers", "1"]
    )
    assert result.exit_code == 0  # no findings is still a successful run


def test_index_build_exit_codes(tmp_path, runner):
    result = runner.invoke(
        main, ["index-build", str(tmp_path / "nope"), "--out", str(tmp_path / "x.idx")]
    )
    assert result.exit_code == 3

    corrupted = tmp_path / "corpus"
    corrupted.mkdir()
    (corrupted / "manifest.json").write_text('{\n "libraries": [ {"group": }\n ]}\n')
    result = runner.invoke(
        main, ["index-build", str(corrupted), "--out", str(tmp_path / "x.idx")]
    )
    assert result.exit_code == 3
    assert "line" in result.output


def test_empty_manifest_is_exit_zero_with_warning(tmp_path, runner):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    write_manifest(corpus, [])
    out = tmp_path / "empty.idx"
    result = runner.invoke(
        main, ["index-build", str(corpus), "--out", str(out), "--workers", "1"]
    )
    assert result.exit_code == 0
    assert "warning" in result.output
    assert out.exists()


def test_scan_is_deterministic(tmp_path, runner):
    corpus = make_corpus(tmp_path)
    project = make_project(tmp_path)
    index_path = tmp_path / "ref.idx"
    runner.invoke(main, ["index-build", str(corpus), "--out", str(index_path),
                         "--workers", "1"])
    outs = []
    for name in ("s1.json", "s2.json"):
        out = tmp_path / name
        runner.invoke(main, ["scan", str(project), "--index", str(index_path),
                             "--out", str(out), "--workers", "1"])
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_compare_command(tmp_path, runner):
    corpus = make_corpus(tmp_path)
    project = make_project(tmp_path)
    index_path = tmp_path / "ref.idx"
    scan_out = tmp_path / "scan.json"
    runner.invoke(main, ["index-build", str(corpus), "--out", str(index_path),
                         "--workers", "1"])
    runner.invoke(main, ["scan", str(project), "--index", str(index_path),
                         "--out", str(scan_out), "--workers", "1"])
    compare_out = tmp_path / "compare.json"
    result = runner.invoke(
        main, ["compare", str(project), "--report", str(scan_out),
               "--out", str(compare_out)]
    )
    assert result.exit_code == 0
    payload = json.loads(compare_out.read_text())
    assert payload["tpl_cc"] == ["g.vendor:lib"]
    assert payload["tpl_pm"] == ["org.declared:thing"]
    assert payload["ir"] == 100.0
    assert payload["dr"] == 0.0

    result = runner.invoke(
        main, ["compare", str(project), "--report", str(tmp_path / "absent.json")]
    )
    assert result.exit_code == 3


def test_metrics_command(tmp_path, runner):
    lib = tmp_path / "lib"
    lib.mkdir()
    (lib / "A.java").write_text(library_class("Alpha", 3, package="libx"))
    proj = tmp_path / "proj"
    proj.mkdir()
    (proj / "B.java").write_text(
        library_class("Alpha", 3, package="app").replace("Alpha", "Beta")
    )
    out = tmp_path / "metrics.json"
    result = runner.invoke(main, ["metrics", str(lib), str(proj), "--out", str(out)])
    assert result.exit_code == 0
    payload = json.loads(out.read_text())
    assert len(payload["conjugates"]) == 1
    assert payload["conjugates"][0]["percentage"] == 1.0
    assert "config" in payload

    result = runner.invoke(main, ["metrics", str(lib), str(tmp_path / "nope")])
    assert result.exit_code == 2


def test_config_file_and_flag_override(tmp_path, runner):
    corpus = make_corpus(tmp_path)
    project = make_project(tmp_path)
    index_path = tmp_path / "ref.idx"
    runner.invoke(main, ["index-build", str(corpus), "--out", str(index_path),
                         "--workers", "1"])
    cfg_file = tmp_path / "cfg.json"
    cfg_file.write_text(json.dumps({"triviality_threshold": 55.0, "worker_count": 1}))
    out = tmp_path / "scan.json"
    result = runner.invoke(
        main,
        ["scan", str(project), "--index", str(index_path), "--config", str(cfg_file),
         "--threshold", "58.5", "--out", str(out)],
    )
    assert result.exit_code == 0
    report = json.loads(out.read_text())
    assert report["config"]["triviality_threshold"] == 58.5  # flag wins


def test_removal_log_written(tmp_path, runner):
    corpus = make_corpus(tmp_path)
    # add a version with a helper class that centrality removes
    vdir = corpus / "g.vendor" / "lib" / "2.0"
    vdir.mkdir(parents=True)
    (vdir / "Engine.java").write_text(
        library_class("Engine", 8, package="vendor", uses=("Helper",))
        + "\n"
        + library_class("Helper", 9).replace("public class", "class")
    )
    manifest = json.loads((corpus / "manifest.json").read_text())
    manifest["libraries"][0]["versions"].append(
        {"version": "2.0", "timestamp": 2000, "source_path": "g.vendor/lib/2.0"}
    )
    (corpus / "manifest.json").write_text(json.dumps(manifest))

    log_path = tmp_path / "removals.jsonl"
    result = runner.invoke(
        main,
        ["index-build", str(corpus), "--out", str(tmp_path / "i.idx"),
         "--removal-log", str(log_path), "--workers", "1"],
    )
    assert result.exit_code == 0
    entries = [json.loads(line) for line in log_path.read_text().splitlines()]
    assert any(e["criterion"] == "centrality" for e in entries)


def test_version_flag(runner):
    result = runner.invoke(main, ["--version"])
    assert result.exit_code == 0
    assert "clonesca" in result.output
