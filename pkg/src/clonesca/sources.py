"""Source model: parse Java files into class and function units.

A file yields one ClassUnit per named type (top-level or nested, in
declaration order). Anonymous and local classes are not partitioned
out; their content stays inside the enclosing function's body. Text
normalization and the hash-clone baselines also live here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from clonesca.errors import EncodingError, ParseError
from clonesca.hashing import fnv1a64
from clonesca.javasrc import nodes as N
from clonesca.javasrc.lexer import Token, lex
from clonesca.javasrc.parser import parse_compilation_unit
from clonesca.javasrc.walk import walk

_TEST_SEGMENTS = ("test", "tests")


@dataclass(frozen=True)
class SourceFile:
    path: str
    content: str

    def __post_init__(self) -> None:
        if not self.path:
            raise ValueError("path must be non-empty")
        if not self.path.endswith(".java"):
            raise ValueError(f"not a .java path: {self.path}")

    @classmethod
    def from_bytes(cls, path: str, data: bytes) -> "SourceFile":
        try:
            text = data.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise EncodingError(f"{path}: {exc}") from exc
        return cls(path, text)


@dataclass
class FunctionUnit:
    """One method, constructor, or initializer block."""

    name: str
    arity: int
    param_type_names: list[str]
    loc: int
    decl: N.FunctionDecl
    decl_index: int
    tokens: list[Token] = field(default_factory=list, repr=False)

    @property
    def has_body(self) -> bool:
        return self.decl.body is not None

    @property
    def body(self) -> Optional[N.Block]:
        return self.decl.body


@dataclass
class ClassUnit:
    qualified_name: str
    simple_name: str
    kind: str  # class interface enum record annotation
    source_path: str
    functions: list[FunctionUnit]
    referenced_types: set[str]
    is_test_path: bool
    decl: N.TypeDecl = field(repr=False)
    tokens: list[Token] = field(repr=False)


def is_test_path(path: str) -> bool:
    """True when any path segment equals test/tests or starts with 'test'."""
    for segment in path.replace("\\", "/").split("/")[:-1]:
        low = segment.lower()
        if low in _TEST_SEGMENTS or low.startswith("test"):
            return True
    return False


def _function_units(decl: N.TypeDecl) -> list[FunctionUnit]:
    units: list[FunctionUnit] = []
    for idx, member in enumerate(decl.members):
        if not isinstance(member, N.FunctionDecl):
            continue
        if member.kind == "static_init":
            name = f"<static-init-{idx}>"
            params: list[N.Param] = []
        elif member.kind == "instance_init":
            name = f"<instance-init-{idx}>"
            params = []
        elif member.kind == "compact_ctor":
            name = member.name
            params = decl.record_components
        else:
            name = member.name
            params = member.params
        member.decl_index = idx
        units.append(
            FunctionUnit(
                name=name,
                arity=len(params),
                param_type_names=[p.type.display() for p in params],
                loc=0,  # filled in by parse_source, needs tokens
                decl=member,
                decl_index=idx,
            )
        )
    return units


def _count_loc(tokens: list[Token], tok_start: int, tok_end: int) -> int:
    lines = {tokens[i].line for i in range(tok_start, tok_end)}
    return max(len(lines), 1)


def _referenced_types(decl: N.TypeDecl) -> set[str]:
    """Simple names of reference types used directly by this declaration.

    Nested named types keep their own sets; type parameters are not
    type references and are excluded.
    """
    excluded = set(decl.type_params)
    names: set[str] = set(decl.annotation_names)
    for ref in decl.supertypes:
        _collect_type_ref(ref, names)
    for component in decl.record_components:
        _collect_type_ref(component.type, names)
    for member in decl.members:
        if isinstance(member, N.TypeDecl):
            continue
        if isinstance(member, N.FunctionDecl):
            fn_excluded = excluded | set(member.type_params)
            for node in walk(member):
                if isinstance(node, N.TypeDecl):
                    continue  # local/anon classes keep their refs; cheap over-approx is fine
                if isinstance(node, N.TypeRef):
                    _collect_type_ref(node, names, fn_excluded)
        else:
            for node in walk(member):
                if isinstance(node, N.TypeRef):
                    _collect_type_ref(node, names, excluded)
    return {n for n in names if n not in excluded}


def _collect_type_ref(
    ref: N.TypeRef, out: set[str], excluded: Optional[set[str]] = None
) -> None:
    for node in walk(ref):
        if isinstance(node, N.TypeRef):
            if node.primitive or node.name in ("var", "void", "?"):
                continue
            if excluded and node.name in excluded:
                continue
            out.add(node.name)


def parse_source(file: SourceFile) -> list[ClassUnit]:
    """Partition a file into its named type declarations."""
    try:
        unit, tokens = parse_compilation_unit(file.content)
    except ParseError as exc:
        raise ParseError(f"{file.path}: {exc}", exc.line, exc.col) from exc
    package = unit.package
    test_path = is_test_path(file.path)
    units: list[ClassUnit] = []

    def visit(decl: N.TypeDecl, enclosing: list[str]) -> None:
        qualifier = ".".join(enclosing + [decl.name])
        qualified = f"{package}.{qualifier}" if package else qualifier
        functions = _function_units(decl)
        for fn in functions:
            fn.loc = _count_loc(tokens, fn.decl.tok_start, fn.decl.tok_end)
            fn.tokens = tokens
        units.append(
            ClassUnit(
                qualified_name=qualified,
                simple_name=decl.name,
                kind=decl.kind,
                source_path=file.path,
                functions=functions,
                referenced_types=_referenced_types(decl),
                is_test_path=test_path,
                decl=decl,
                tokens=tokens,
            )
        )
        for member in decl.members:
            if isinstance(member, N.TypeDecl):
                visit(member, enclosing + [decl.name])

    for decl in unit.types:
        visit(decl, [])
    return units


def normalize_text(text: str) -> str:
    """Canonical text form: no comments, emptied literals, no package
    declaration, no whitespace.

    Concatenation can fuse tokens into new comment or literal starts
    (`a/ /b` becomes `a//b`), so the pass iterates to a fixed point;
    each pass strictly shrinks the text, guaranteeing termination.
    """
    current = text
    while True:
        result = _normalize_once(current)
        if result == current:
            return result
        current = result


def _normalize_once(text: str) -> str:
    tokens = lex(text)
    i = 0
    # drop a leading `package ... ;` declaration
    if tokens and tokens[0].kind == "kw" and tokens[0].text == "package":
        j = 0
        while tokens[j].kind != "eof" and tokens[j].text != ";":
            j += 1
        if tokens[j].text == ";":
            i = j + 1
    out: list[str] = []
    for tok in tokens[i:]:
        if tok.kind in ("eof", "comment"):
            continue
        if tok.kind in ("str", "textblock"):
            out.append('""')
        elif tok.kind == "char":
            out.append("''")
        else:
            out.append(tok.text)
    return "".join(out)


def file_hash(file: SourceFile) -> int:
    """64-bit digest of the file's normalized text."""
    return fnv1a64(normalize_text(file.content).encode("utf-8"))


def class_text_hash(cls: ClassUnit) -> int:
    """64-bit digest of the class declaration's normalized source span.

    The span is reconstructed from tokens (comments already gone,
    whitespace irrelevant after normalization), so two verbatim copies
    of one class hash equal regardless of the files around them.
    """
    decl = cls.decl
    toks = cls.tokens
    if decl.tok_end <= decl.tok_start:
        return fnv1a64(b"")
    text = " ".join(
        t.text for t in toks[decl.tok_start : decl.tok_end] if t.kind != "eof"
    )
    return fnv1a64(normalize_text(text).encode("utf-8"))
