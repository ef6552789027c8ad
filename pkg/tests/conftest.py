"""Shared fixtures: deterministic Java source generators.

Fingerprints ignore identifiers and literal values, so generated
classes must differ *structurally* (operator choice, branch and loop
counts) or via referenced type names. `big_method` varies structure by
seed and plants a seed-specific `Tag<N>` type so every generated class
hashes differently; fixture builders assert that before relying on it.
"""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from clonesca.config import ToolConfig
from clonesca.extract import ClassFeature, extract_class_feature
from clonesca.sources import ClassUnit, SourceFile, parse_source


def make_units(src: str, path: str = "src/main/java/Fixture.java") -> list[ClassUnit]:
    return parse_source(SourceFile(path, src))


def one_class(src: str, path: str = "src/main/java/Fixture.java") -> ClassUnit:
    units = make_units(src, path)
    assert len(units) == 1, [u.qualified_name for u in units]
    return units[0]


def big_method(name: str, seed: int, use_type: str | None = None) -> str:
    """A structurally seed-dependent method that always scores non-trivial."""
    op_mix = ["+", "-", "^", "|", "&"][seed % 5]
    op_scale = ["*", "+", "-"][seed % 3]
    branches = 2 + (seed % 3)
    loops = 1 + (seed % 2)
    lines = [f"  public int {name}(int left, int right) {{", "    int acc = left;"]
    if use_type:
        lines.append(f"    {use_type} marker = new {use_type}();")
    for b in range(branches):
        head = "if" if b == 0 else "} else if"
        lines.append(f"    {head} (left % {b + 2} == {b}) {{")
        lines.append(f"      acc = acc {op_mix} (right {op_scale} {b + 3});")
    lines.append("    } else {")
    lines.append(f"      acc = acc {op_scale} 2;")
    lines.append("    }")
    for k in range(loops):
        lines.append(f"    for (int i{k} = 0; i{k} < right; i{k}++) {{")
        lines.append(f"      acc {op_mix}= i{k} {op_scale} {k + 2};")
        lines.append("      if (acc > 4096) {")
        lines.append("        acc = acc % 1999;")
        lines.append("      }")
        lines.append("    }")
    lines.append("    while (acc > 60) {")
    lines.append(f"      acc = acc / {2 + seed % 4} - 1;")
    lines.append("    }")
    lines.append("    return acc;")
    lines.append("  }")
    return "\n".join(lines)


def getter_setter(field_name: str, java_type: str = "int") -> str:
    cap = field_name[0].upper() + field_name[1:]
    return "\n".join(
        [
            f"  private {java_type} {field_name};",
            f"  public {java_type} get{cap}() {{",
            f"    return {field_name};",
            "  }",
            f"  public void set{cap}({java_type} value) {{",
            f"    this.{field_name} = value;",
            "  }",
        ]
    )


def library_class(
    name: str,
    seed: int,
    package: str = "",
    uses: tuple[str, ...] = (),
) -> str:
    """One public class with two non-trivial methods; `uses` adds fields
    of other classes to shape the dependency graph."""
    header = f"package {package};\n" if package else ""
    fields = "\n".join(f"  private {u} dep{i};" for i, u in enumerate(uses))
    body = "\n".join(
        [
            big_method("churn", seed, use_type=f"Tag{seed}"),
            big_method("grind", seed + 101),
        ]
    )
    return f"{header}public class {name} {{\n{fields}\n{body}\n}}\n"


def feature_of(src: str, path: str = "src/main/java/F.java") -> ClassFeature:
    feature = extract_class_feature(one_class(src, path), ToolConfig())
    assert feature is not None
    return feature


def write_manifest(corpus_dir: Path, libraries: list[dict]) -> Path:
    manifest = {"created_at": 1, "tool_version": "test", "libraries": libraries}
    path = corpus_dir / "manifest.json"
    path.write_text(json.dumps(manifest, indent=1), encoding="utf-8")
    return path


@pytest.fixture
def config() -> ToolConfig:
    return ToolConfig(worker_count=1)
