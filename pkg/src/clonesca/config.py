"""Tool configuration with the documented defaults.

Every knob that shapes a report is collected here so a run can be
reproduced from the config echo embedded in report headers.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from typing import Any

# Suffixes of structural design-pattern scaffolding classes removed by the
# supporting-class filter; overridable via config or --patterns-file.
DEFAULT_PATTERN_SUFFIXES = (
    "Factory",
    "AbstractFactory",
    "Builder",
    "Adapter",
    "Adaptor",
    "Converter",
    "Convertor",
    "Wrapper",
    "Proxy",
    "Facade",
    "Decorator",
    "Delegate",
    "Registry",
)


@dataclass(frozen=True)
class ToolConfig:
    """Immutable run configuration."""

    triviality_threshold: float = 60.0
    mi_form: str = "log"  # "log" or "linear"
    percentile_cutoff: float = 50.0
    pattern_suffixes: tuple[str, ...] = DEFAULT_PATTERN_SUFFIXES
    worker_count: int = field(default_factory=lambda: os.cpu_count() or 1)
    # Clone-metrics scope: drop clone pairs whose two sides share a project.
    exclude_same_project: bool = False
    # Associated-clone scoring: "max" scores each counterpart class
    # independently and reports the best; "any" pools all counterparts.
    associated_mode: str = "max"
    inline_node_cap: int = 100_000

    def __post_init__(self) -> None:
        if self.triviality_threshold <= 0:
            raise ValueError("triviality_threshold must be > 0")
        if not 0.0 <= self.percentile_cutoff <= 100.0:
            raise ValueError("percentile_cutoff must be in [0, 100]")
        if self.mi_form not in ("log", "linear"):
            raise ValueError("mi_form must be 'log' or 'linear'")
        if self.associated_mode not in ("max", "any"):
            raise ValueError("associated_mode must be 'max' or 'any'")
        if self.worker_count < 1:
            raise ValueError("worker_count must be >= 1")

    def to_dict(self) -> dict[str, Any]:
        return {
            "triviality_threshold": self.triviality_threshold,
            "mi_form": self.mi_form,
            "percentile_cutoff": self.percentile_cutoff,
            "pattern_suffixes": list(self.pattern_suffixes),
            "worker_count": self.worker_count,
            "exclude_same_project": self.exclude_same_project,
            "associated_mode": self.associated_mode,
            "inline_node_cap": self.inline_node_cap,
        }

    def with_overrides(self, **kwargs: Any) -> "ToolConfig":
        """Return a copy with non-None overrides applied."""
        updates = {k: v for k, v in kwargs.items() if v is not None}
        if "pattern_suffixes" in updates:
            updates["pattern_suffixes"] = tuple(updates["pattern_suffixes"])
        return replace(self, **updates)


def load_config(path: str) -> ToolConfig:
    """Read a JSON config file; unknown keys are rejected."""
    with open(path, "r", encoding="utf-8") as fp:
        raw = json.load(fp)
    if not isinstance(raw, dict):
        raise ValueError(f"config root must be an object, got {type(raw).__name__}")
    known = set(ToolConfig.__dataclass_fields__)
    unknown = set(raw) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    if "pattern_suffixes" in raw:
        raw["pattern_suffixes"] = tuple(raw["pattern_suffixes"])
    return ToolConfig(**raw)
