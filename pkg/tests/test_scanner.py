"""Scanning, pom parsing, and the IR/DR formulas."""

import random

import pytest

from clonesca.config import ToolConfig
from clonesca.extract import extract_class_feature
from clonesca.hashing import FeatureHash
from clonesca.index import IndexStats, ReferenceIndex
from clonesca.refinery import FeatureRecord
from clonesca.scanner import (
    compare_project,
    duplication_rate,
    extract_project_features,
    improvement_rate,
    parse_declared_dependencies,
    recognize,
    scan_project,
)

from conftest import feature_of, library_class, one_class


def index_of(*records):
    return ReferenceIndex(
        {r.hash.value: r for r in records}, IndexStats(), "digest"
    )


def record_for(feature, group="g.vendor", artifact="lib", version="1.0", ts=100):
    return FeatureRecord(feature.hash, group, ((artifact, version),), ts, (feature.qualified_name, feature.source_path))


def test_extraction_symmetry_reference_vs_target():
    src = library_class("Engine", 4, package="vendor")
    as_reference = feature_of(src, "vendor/Engine.java")
    as_target = feature_of(src, "some/project/src/Engine.java")
    assert as_reference.hash == as_target.hash


def test_empty_project_warns(tmp_path, config):
    features, stats = extract_project_features(tmp_path, config)
    assert features == []
    assert any("no .java files" in w for w in stats.warnings)


def test_verbatim_copy_matches(tmp_path, config):
    src = library_class("Engine", 6, package="vendor")
    reference = feature_of(src, "ref/Engine.java")
    (tmp_path / "Engine.java").write_text(src)
    report = scan_project(tmp_path, index_of(record_for(reference)), config)
    assert len(report.evidences) == 1
    assert report.evidences[0].origin_group == "g.vendor"


def test_renamed_reordered_copy_matches(tmp_path, config):
    src = library_class("Engine", 7, package="vendor")
    reference = feature_of(src, "ref/Engine.java")
    mutated = (
        src.replace("package vendor;", "package app.thirdparty;")
        .replace("Engine", "TurboUnit")
        .replace("left", "lhs")
        .replace("right", "rhs")
        .replace("acc", "result")
    )
    # also swap the two methods
    lines = mutated.split("\n")
    churn_start = next(i for i, l in enumerate(lines) if "churn" in l)
    grind_start = next(i for i, l in enumerate(lines) if "grind" in l)
    churn, grind = lines[churn_start:grind_start], lines[grind_start:-2]
    mutated = "\n".join(lines[:churn_start] + grind + churn + lines[-2:])
    (tmp_path / "TurboUnit.java").write_text(mutated)
    report = scan_project(tmp_path, index_of(record_for(reference)), config)
    assert [ev.target_class for ev in report.evidences] == ["app.thirdparty.TurboUnit"]


def test_no_matches_empty_tpls(tmp_path, config):
    (tmp_path / "Own.java").write_text(library_class("Own", 9))
    report = scan_project(tmp_path, index_of(), config)
    assert report.evidences == [] and report.tpls == []


def test_two_matches_one_origin_group(config):
    f1 = feature_of(library_class("One", 11, package="p"), "p/One.java")
    f2 = feature_of(library_class("Two", 12, package="p"), "p/Two.java")
    index = index_of(record_for(f1), record_for(f2))
    report = recognize([f1, f2], index, "proj")
    assert len(report.tpls) == 1
    assert report.tpls[0]["evidence_count"] == 2
    assert report.tpls[0]["group"] == "g.vendor"


def test_target_side_pattern_names_still_match(tmp_path, config):
    # a copied class renamed XFactory must match: C3/C4 are reference-side only
    src = library_class("Engine", 13, package="vendor")
    reference = feature_of(src, "ref/Engine.java")
    renamed = src.replace("Engine", "EngineFactory")
    target_dir = tmp_path / "src" / "test" / "java"
    target_dir.mkdir(parents=True)
    (target_dir / "EngineFactory.java").write_text(renamed)
    report = scan_project(tmp_path, index_of(record_for(reference)), config)
    assert len(report.evidences) == 1


def test_co_released_flag():
    feature = feature_of(library_class("Multi", 14, package="p"), "p/Multi.java")
    record = FeatureRecord(
        feature.hash, "g", (("core", "1.0"), ("bundle", "1.0")), 5,
        (feature.qualified_name, feature.source_path),
    )
    report = recognize([feature], index_of(record), "proj")
    assert report.evidences[0].co_released
    assert report.tpls[0]["artifacts"] == ["bundle", "core"]


def test_evidence_soundness_replay(config):
    # every reported group must trace back to evidence whose hash the
    # index still resolves, and tpls must be exactly that grouping
    f1 = feature_of(library_class("One", 31, package="p"), "p/One.java")
    f2 = feature_of(library_class("Two", 32, package="q"), "q/Two.java")
    index = index_of(record_for(f1, group="g.a"), record_for(f2, group="g.b"))
    report = recognize([f1, f2], index, "proj")
    regrouped = {}
    for ev in report.evidences:
        assert index.lookup(ev.hash) is not None
        regrouped.setdefault(ev.origin_group, 0)
        regrouped[ev.origin_group] += 1
    assert {t["group"]: t["evidence_count"] for t in report.tpls} == regrouped
    assert all(t["evidence_count"] >= 1 for t in report.tpls)


def test_report_is_sorted_and_stable(config):
    f1 = feature_of(library_class("AAA", 21, package="p"), "p/AAA.java")
    f2 = feature_of(library_class("BBB", 22, package="q"), "q/BBB.java")
    index = index_of(record_for(f1, group="zeta"), record_for(f2, group="alpha"))
    r1 = recognize([f2, f1], index, "proj")
    r2 = recognize([f1, f2], index, "proj")
    assert r1.to_dict() == r2.to_dict()
    assert [t["group"] for t in r1.tpls] == ["alpha", "zeta"]


# ---- pom parsing ----

def test_pom_direct_dependency(tmp_path):
    (tmp_path / "pom.xml").write_text(
        """<?xml version="1.0"?>
        <project xmlns="http://maven.apache.org/POM/4.0.0">
          <dependencies>
            <dependency><groupId>com.lmax</groupId><artifactId>disruptor</artifactId></dependency>
          </dependencies>
        </project>"""
    )
    declared, warnings = parse_declared_dependencies(tmp_path)
    assert declared == {"com.lmax:disruptor"}


def test_no_pom_empty_set(tmp_path):
    declared, _ = parse_declared_dependencies(tmp_path)
    assert declared == set()


def test_pom_placeholder_resolution(tmp_path):
    (tmp_path / "pom.xml").write_text(
        """<project>
          <properties>
            <my.group>org.x</my.group>
            <indirect>${my.group}</indirect>
          </properties>
          <dependencies>
            <dependency><groupId>${indirect}</groupId><artifactId>thing</artifactId></dependency>
            <dependency><groupId>${missing}</groupId><artifactId>skipped</artifactId></dependency>
          </dependencies>
        </project>"""
    )
    declared, warnings = parse_declared_dependencies(tmp_path)
    assert declared == {"org.x:thing"}
    assert any("unresolved placeholder" in w for w in warnings)


def test_pom_dependency_management_excluded(tmp_path):
    (tmp_path / "pom.xml").write_text(
        """<project>
          <dependencyManagement>
            <dependencies>
              <dependency><groupId>g.managed</groupId><artifactId>only-version</artifactId></dependency>
            </dependencies>
          </dependencyManagement>
          <dependencies>
            <dependency><groupId>g.real</groupId><artifactId>used</artifactId></dependency>
          </dependencies>
        </project>"""
    )
    declared, _ = parse_declared_dependencies(tmp_path)
    assert declared == {"g.real:used"}


def test_malformed_pom_skipped_with_warning(tmp_path):
    (tmp_path / "pom.xml").write_text("<project><dependencies>")
    sub = tmp_path / "module"
    sub.mkdir()
    (sub / "pom.xml").write_text(
        "<project><dependencies><dependency><groupId>g</groupId>"
        "<artifactId>a</artifactId></dependency></dependencies></project>"
    )
    declared, warnings = parse_declared_dependencies(tmp_path)
    assert declared == {"g:a"}
    assert any("malformed" in w for w in warnings)


# ---- IR / DR ----

def test_ir_formula_examples():
    assert improvement_rate({"a", "b", "c"}, {"a"}) == pytest.approx(200.0)
    assert improvement_rate({"x"}, set()) == 100.0
    assert improvement_rate(set(), {"a", "b"}) == 0.0
    assert improvement_rate(set(), set()) == 0.0


def test_dr_formula_examples():
    assert duplication_rate({"a", "b"}, {"a", "c"}) == pytest.approx(50.0)
    assert duplication_rate({"x"}, {"y"}) == 0.0
    assert duplication_rate({"a", "b", "c", "d"}, {"a", "b", "c"}) == pytest.approx(100.0)
    assert duplication_rate({"a"}, set()) == 0.0


def test_ir_dr_against_set_oracle():
    rng = random.Random(99)
    universe = [f"g{i}:a{i}" for i in range(12)]
    for _ in range(300):
        cc = {x for x in universe if rng.random() < 0.4}
        pm = {x for x in universe if rng.random() < 0.4}
        only = sum(1 for x in cc if x not in pm)
        both = sum(1 for x in cc if x in pm)
        if pm:
            assert improvement_rate(cc, pm) == 100.0 * only / len(pm)
            assert duplication_rate(cc, pm) == 100.0 * both / len(pm)
        else:
            assert improvement_rate(cc, pm) == (100.0 if cc else 0.0)
            assert duplication_rate(cc, pm) == 0.0


def test_compare_project_bundles_everything(tmp_path, config):
    src = library_class("Engine", 17, package="vendor")
    reference = feature_of(src, "ref/Engine.java")
    (tmp_path / "Engine.java").write_text(src)
    (tmp_path / "pom.xml").write_text(
        "<project><dependencies><dependency><groupId>g.vendor</groupId>"
        "<artifactId>lib</artifactId></dependency>"
        "<dependency><groupId>other</groupId><artifactId>x</artifactId></dependency>"
        "</dependencies></project>"
    )
    report = scan_project(tmp_path, index_of(record_for(reference)), config)
    comparison = compare_project(tmp_path, report, config)
    assert comparison.tpl_cc == {"g.vendor:lib"}
    assert comparison.tpl_pm == {"g.vendor:lib", "other:x"}
    assert comparison.ir == 0.0
    assert comparison.dr == pytest.approx(50.0)
    d = comparison.to_dict()
    assert d["intersection"] == ["g.vendor:lib"]
    assert d["pm_only"] == ["other:x"]
