"""Function-level clone analytics: associated and conjugate percentages.

The clone oracle is exact fingerprint equality of linked function
trees (type-1/2 plus the reorder tolerance the hashing grants); any
similarity backend could replace `function_clone_pairs` without
touching the two percentage computations.

The conjugate clone percentage of two classes enforces one-to-one
pairing: with n and m non-trivial functions and a maximum matching of
size k in the clone relation between them, the percentage is
2k/(n+m). The associated clone percentage of a caller is the share of
its same-class callees cloned into the same counterpart class as the
caller itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from clonesca.config import ToolConfig
from clonesca.errors import DegenerateClassPair, NoCallees, ParseError, EncodingError
from clonesca.fingerprint import hash_tree, internal_call_graph, link_internal_calls
from clonesca.hashing import FeatureHash
from clonesca.metrics import function_is_trivial
from clonesca.sources import SourceFile, parse_source

# identity of one function: (project label, class qualified name, decl index)
FnId = tuple[str, str, int]


@dataclass(frozen=True)
class FunctionFingerprint:
    project: str
    class_name: str
    source_path: str
    index: int
    name: str
    arity: int
    hash: FeatureHash
    callees: tuple[int, ...]  # same-class callee decl indices (resolved)

    @property
    def fn_id(self) -> FnId:
        return (self.project, self.class_name, self.index)


@dataclass
class FunctionCloneRelation:
    pairs: set[tuple[FnId, FnId]]  # (a-side, b-side)

    def partners_of(self, fn_id: FnId) -> set[FnId]:
        out = {b for a, b in self.pairs if a == fn_id}
        out |= {a for a, b in self.pairs if b == fn_id}
        return out


@dataclass(frozen=True)
class ConjugateReport:
    class_a: str
    class_b: str
    n: int
    m: int
    matching_size: int
    percentage: float

    def to_dict(self) -> dict:
        return {
            "class_a": self.class_a,
            "class_b": self.class_b,
            "matching_size": self.matching_size,
            "n": self.n,
            "m": self.m,
            "percentage": self.percentage,
        }


@dataclass(frozen=True)
class AssociatedReport:
    caller: FnId
    caller_name: str
    callee_total: int
    callee_cloned: int
    percentage: float

    def to_dict(self) -> dict:
        return {
            "caller_class": self.caller[1],
            "caller_name": self.caller_name,
            "callee_cloned": self.callee_cloned,
            "callee_total": self.callee_total,
            "percentage": self.percentage,
            "project": self.caller[0],
        }


def collect_function_fingerprints(
    root: Path,
    project: str,
    config: Optional[ToolConfig] = None,
    warnings: Optional[list[str]] = None,
) -> list[FunctionFingerprint]:
    """Linked-tree hashes for every non-trivial function under `root`."""
    cfg = config or ToolConfig()
    out: list[FunctionFingerprint] = []
    for path in sorted(root.rglob("*.java")):
        if not path.is_file():
            continue
        try:
            source = SourceFile.from_bytes(str(path.relative_to(root)), path.read_bytes())
            classes = parse_source(source)
        except (ParseError, EncodingError) as exc:
            if warnings is not None:
                warnings.append(str(exc))
            continue
        for cls in classes:
            linked = {ast.index: ast for ast in link_internal_calls(cls, cfg.inline_node_cap)}
            callgraph = internal_call_graph(cls)
            for fn in cls.functions:
                if not fn.has_body:
                    continue
                if function_is_trivial(fn, cfg.triviality_threshold, cfg.mi_form):
                    continue
                ast = linked[fn.decl_index]
                out.append(
                    FunctionFingerprint(
                        project=project,
                        class_name=cls.qualified_name,
                        source_path=cls.source_path,
                        index=fn.decl_index,
                        name=fn.name,
                        arity=fn.arity,
                        hash=hash_tree(ast.root),
                        callees=callgraph.get(fn.decl_index, ()),
                    )
                )
    return out


def function_clone_pairs(
    side_a: Iterable[FunctionFingerprint],
    side_b: Iterable[FunctionFingerprint],
    exclude_same_project: bool = False,
) -> FunctionCloneRelation:
    """Pairs of equal-hash functions across the two sides.

    A function never pairs with itself; with `exclude_same_project`
    all pairs whose sides share a project label are dropped.
    """
    by_hash: dict[int, list[FunctionFingerprint]] = {}
    for fp in side_b:
        by_hash.setdefault(fp.hash.value, []).append(fp)
    pairs: set[tuple[FnId, FnId]] = set()
    for fa in side_a:
        for fb in by_hash.get(fa.hash.value, ()):
            if fa.fn_id == fb.fn_id:
                continue
            if exclude_same_project and fa.project == fb.project:
                continue
            pairs.add((fa.fn_id, fb.fn_id))
    return FunctionCloneRelation(pairs)


def max_bipartite_matching(
    left: int, adjacency: list[list[int]]
) -> int:
    """Maximum matching size by augmenting paths (Kuhn's algorithm)."""
    match_right: dict[int, int] = {}

    def augment(u: int, visited: set[int]) -> bool:
        for v in adjacency[u]:
            if v in visited:
                continue
            visited.add(v)
            if v not in match_right or augment(match_right[v], visited):
                match_right[v] = u
                return True
        return False

    size = 0
    for u in range(left):
        if augment(u, set()):
            size += 1
    return size


def conjugate_percentage(
    class_a_fns: list[FunctionFingerprint],
    class_b_fns: list[FunctionFingerprint],
    relation: FunctionCloneRelation,
) -> ConjugateReport:
    """One-to-one clone coverage of two classes' functions."""
    n, m = len(class_a_fns), len(class_b_fns)
    if n + m == 0:
        raise DegenerateClassPair("both classes have zero non-trivial functions")
    b_pos = {fp.fn_id: j for j, fp in enumerate(class_b_fns)}
    adjacency: list[list[int]] = []
    pair_lookup = relation.pairs | {(b, a) for a, b in relation.pairs}
    for fa in class_a_fns:
        adjacency.append(
            sorted(
                b_pos[fb.fn_id]
                for fb in class_b_fns
                if (fa.fn_id, fb.fn_id) in pair_lookup
            )
        )
    k = max_bipartite_matching(n, adjacency)
    class_a = class_a_fns[0].class_name if class_a_fns else "<empty>"
    class_b = class_b_fns[0].class_name if class_b_fns else "<empty>"
    return ConjugateReport(
        class_a=class_a,
        class_b=class_b,
        n=n,
        m=m,
        matching_size=k,
        percentage=2.0 * k / (n + m),
    )


def associated_percentage(
    caller: FunctionFingerprint,
    same_class_fns: list[FunctionFingerprint],
    relation: FunctionCloneRelation,
    mode: str = "max",
) -> AssociatedReport:
    """Share of the caller's callees cloned alongside it.

    `mode="max"` scores each counterpart class independently and keeps
    the best; `mode="any"` pools all counterparts. Callees are the
    caller's distinct non-trivial same-class callees.
    """
    partners = relation.partners_of(caller.fn_id)
    by_index = {fp.index: fp for fp in same_class_fns}
    callees = [
        by_index[i]
        for i in caller.callees
        if i in by_index and i != caller.index
    ]
    if not callees:
        raise NoCallees(f"{caller.class_name}.{caller.name} has no scored callees")
    counterparts = sorted({(p[0], p[1]) for p in partners})
    if not counterparts:
        return AssociatedReport(caller.fn_id, caller.name, len(callees), 0, 0.0)

    def cloned_into(fp: FunctionFingerprint, counterpart: tuple[str, str]) -> bool:
        return any(
            (p[0], p[1]) == counterpart for p in relation.partners_of(fp.fn_id)
        )

    if mode == "any":
        cloned = sum(
            1 for fp in callees if any(cloned_into(fp, c) for c in counterparts)
        )
    else:
        cloned = max(
            sum(1 for fp in callees if cloned_into(fp, c)) for c in counterparts
        )
    return AssociatedReport(
        caller=caller.fn_id,
        caller_name=caller.name,
        callee_total=len(callees),
        callee_cloned=cloned,
        percentage=cloned / len(callees),
    )


@dataclass
class CloneMetricsReport:
    conjugates: list[ConjugateReport]
    associated: list[AssociatedReport]
    warnings: list[str] = field(default_factory=list)

    def histogram(self) -> dict:
        """Bucketed percentage counts (10 buckets each), data only."""
        return {
            "conjugate": _bucket([c.percentage for c in self.conjugates]),
            "associated": _bucket([a.percentage for a in self.associated]),
        }

    def to_dict(self) -> dict:
        return {
            "associated": [a.to_dict() for a in self.associated],
            "conjugates": [c.to_dict() for c in self.conjugates],
            "histogram": self.histogram(),
            "warnings": list(self.warnings),
        }


def _bucket(values: list[float]) -> list[int]:
    counts = [0] * 10
    for v in values:
        slot = min(int(v * 10), 9)
        counts[slot] += 1
    return counts


def clone_metrics(
    dir_a: Path,
    dir_b: Path,
    config: Optional[ToolConfig] = None,
) -> CloneMetricsReport:
    """Full analytics between two source trees."""
    cfg = config or ToolConfig()
    warnings: list[str] = []
    side_a = collect_function_fingerprints(dir_a, str(dir_a), cfg, warnings)
    side_b = collect_function_fingerprints(dir_b, str(dir_b), cfg, warnings)
    relation = function_clone_pairs(side_a, side_b, cfg.exclude_same_project)

    by_class_a: dict[str, list[FunctionFingerprint]] = {}
    for fp in side_a:
        by_class_a.setdefault(fp.class_name, []).append(fp)
    by_class_b: dict[str, list[FunctionFingerprint]] = {}
    for fp in side_b:
        by_class_b.setdefault(fp.class_name, []).append(fp)

    class_pairs = sorted(
        {(a[1], b[1]) for a, b in relation.pairs}
    )
    conjugates = [
        conjugate_percentage(by_class_a[ca], by_class_b[cb], relation)
        for ca, cb in class_pairs
        if ca in by_class_a and cb in by_class_b
    ]

    associated: list[AssociatedReport] = []
    for side, by_class in ((side_a, by_class_a), (side_b, by_class_b)):
        for fp in side:
            if not relation.partners_of(fp.fn_id):
                continue
            try:
                associated.append(
                    associated_percentage(
                        fp, by_class[fp.class_name], relation, cfg.associated_mode
                    )
                )
            except NoCallees:
                continue
    return CloneMetricsReport(conjugates, associated, warnings)
