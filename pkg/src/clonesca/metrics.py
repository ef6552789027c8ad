"""Per-function complexity metrics and the triviality verdict.

Complexity is scored as 5.2*ln(HV) + 0.23*CC + 16.2*ln(LOC) — the
penalty terms of the classic Maintainability Index with its standard
logarithms. Functions scoring under the threshold (default 60) are
trivial: getters, setters, tiny initializers. A `linear` form without
the logarithms is available for experiments but misclassifies nearly
everything, which is exactly why the log form is the default.

Halstead counting convention (fixed so results are reproducible):

* Operands: identifiers, all literals, primitive type keywords plus
  ``void``, and the value keywords this/super/true/false/null.
* Operators: every other keyword and operator token, with bracket
  pairs ``()``, ``{}``, ``[]`` counted once per construct (the opening
  token counts, the closing token is skipped).
* The counted span is the function body including its braces; an
  empty body is the lone ``{}`` pair, giving N=1, eta=1, HV=0.

HV = N*log2(eta) over total occurrences N and distinct tokens eta.
Renaming identifiers bijectively changes no count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from clonesca.javasrc import nodes as N
from clonesca.javasrc.lexer import PRIMITIVE_TYPES
from clonesca.javasrc.walk import walk
from clonesca.sources import FunctionUnit

_OPERAND_KEYWORDS = PRIMITIVE_TYPES | {"void", "this", "super", "true", "false", "null"}
_LITERAL_KINDS = ("int", "float", "char", "str", "textblock")
_CLOSING = (")", "}", "]")


@dataclass(frozen=True)
class FunctionMetrics:
    loc: int
    cc: int
    hv: float

    def __post_init__(self) -> None:
        if self.loc < 1 or self.cc < 1 or self.hv < 0:
            raise ValueError(f"invalid metrics: {self}")


@dataclass(frozen=True)
class ComplexityScore:
    value: float


def compute_metrics(fn: FunctionUnit) -> FunctionMetrics:
    """LOC, cyclomatic complexity, and Halstead volume for one function."""
    if not fn.has_body:
        raise ValueError(f"{fn.name}: metrics need a body")
    return FunctionMetrics(
        loc=fn.loc,
        cc=_cyclomatic(fn.decl),
        hv=_halstead_volume(fn),
    )


def _cyclomatic(decl: N.FunctionDecl) -> int:
    decisions = 0
    for node in walk(decl.body):
        if isinstance(node, (N.If, N.While, N.DoWhile, N.ForBasic, N.ForEach,
                             N.Catch, N.Ternary)):
            decisions += 1
        elif isinstance(node, N.SwitchCase):
            decisions += len(node.labels)  # `default` has no labels
        elif isinstance(node, N.Binary) and node.op in ("&&", "||"):
            decisions += 1
    return 1 + decisions


def _halstead_volume(fn: FunctionUnit) -> float:
    operators: dict[str, int] = {}
    operands: dict[str, int] = {}
    for tok in fn.tokens[fn.decl.body_tok_start : fn.decl.body_tok_end]:
        if tok.kind in ("eof", "comment") or tok.text in _CLOSING:
            continue
        if tok.kind == "ident" or tok.kind in _LITERAL_KINDS:
            operands[tok.text] = operands.get(tok.text, 0) + 1
        elif tok.kind == "kw" and tok.text in _OPERAND_KEYWORDS:
            operands[tok.text] = operands.get(tok.text, 0) + 1
        else:
            operators[tok.text] = operators.get(tok.text, 0) + 1
    total = sum(operators.values()) + sum(operands.values())
    distinct = len(operators) + len(operands)
    if total == 0:
        return 0.0
    return total * math.log2(distinct)


def complexity(
    m: FunctionMetrics, mi_form: str = "log"
) -> ComplexityScore:
    """Combine the three metrics into a single complexity score."""
    if mi_form == "log":
        value = (
            5.2 * math.log(max(m.hv, 1.0))
            + 0.23 * m.cc
            + 16.2 * math.log(max(m.loc, 1))
        )
    elif mi_form == "linear":
        value = 5.2 * m.hv + 0.23 * m.cc + 16.2 * m.loc
    else:
        raise ValueError(f"unknown mi_form: {mi_form!r}")
    return ComplexityScore(value)


def is_trivial(score: ComplexityScore, threshold: float = 60.0) -> bool:
    """Strictly below the threshold means trivial."""
    return score.value < threshold


def function_score(
    fn: FunctionUnit, mi_form: str = "log"
) -> ComplexityScore:
    return complexity(compute_metrics(fn), mi_form)


def function_is_trivial(
    fn: FunctionUnit, threshold: float = 60.0, mi_form: str = "log"
) -> bool:
    """Body-less signatures are vacuously trivial."""
    if not fn.has_body:
        return True
    return is_trivial(function_score(fn, mi_form), threshold)
