"""Parse-tree node types produced by the Java parser.

These are deliberately loose: enough structure for fingerprinting,
metric counting, and call-site resolution, with no name binding. Token
span indices (`tok_start`, `tok_end`, inclusive start / exclusive end
into the parser's token list) anchor declarations back to source for
line counting and text hashing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union


@dataclass
class TypeRef:
    """A syntactic type usage: `List<String>[]`, `int`, `a.b.Outer.Inner`."""

    name: str  # rightmost simple name ("Inner", "int", "var")
    primitive: bool = False
    array_dims: int = 0
    type_args: list["TypeRef"] = field(default_factory=list)
    qualifiers: list[str] = field(default_factory=list)  # leading dotted names

    def display(self) -> str:
        return self.name + "[]" * self.array_dims


# ---- expressions ----


@dataclass
class Expr:
    pass


@dataclass
class Name(Expr):
    ident: str


@dataclass
class Literal(Expr):
    kind: str  # int float char str textblock bool null
    text: str


@dataclass
class This(Expr):
    qualifier: Optional[str] = None


@dataclass
class Super(Expr):
    pass


@dataclass
class FieldAccess(Expr):
    target: Expr
    name: str


@dataclass
class ArrayAccess(Expr):
    array: Expr
    index: Expr


@dataclass
class MethodCall(Expr):
    target: Optional[Expr]  # None for bare calls
    name: str
    args: list[Expr]


@dataclass
class CtorCall(Expr):
    """Explicit constructor invocation statement: this(...) or super(...)."""

    kind: str  # "this" | "super"
    args: list[Expr]


@dataclass
class Assign(Expr):
    op: str  # "=", "+=", ">>=", ...
    lhs: Expr
    rhs: Expr


@dataclass
class Binary(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass
class Unary(Expr):
    op: str
    operand: Expr
    postfix: bool = False


@dataclass
class Ternary(Expr):
    cond: Expr
    then: Expr
    other: Expr


@dataclass
class InstanceOf(Expr):
    operand: Expr
    type: TypeRef
    binding: Optional[str] = None  # pattern variable, if present


@dataclass
class Cast(Expr):
    types: list[TypeRef]  # >1 for intersection casts
    operand: Expr


@dataclass
class New(Expr):
    type: TypeRef
    args: list[Expr]
    anon_body: Optional[list["Member"]] = None


@dataclass
class NewArray(Expr):
    type: TypeRef
    dim_exprs: list[Expr]
    extra_dims: int
    initializer: Optional["ArrayInit"] = None


@dataclass
class ArrayInit(Expr):
    items: list[Expr]


@dataclass
class Lambda(Expr):
    params: list[tuple[Optional[TypeRef], str]]
    body: Union[Expr, "Block"]


@dataclass
class MethodRef(Expr):
    target: Union[Expr, TypeRef]
    name: str  # "new" for constructor references


@dataclass
class ClassLit(Expr):
    type: TypeRef


@dataclass
class SwitchExpr(Expr):
    selector: Expr
    cases: list["SwitchCase"]


# ---- statements ----


@dataclass
class Stmt:
    pass


@dataclass
class Block(Stmt):
    stmts: list[Stmt]


@dataclass
class LocalVarDecl(Stmt):
    type: TypeRef
    declarators: list[tuple[str, Optional[Expr]]]


@dataclass
class ExprStmt(Stmt):
    expr: Expr


@dataclass
class If(Stmt):
    cond: Expr
    then: Stmt
    other: Optional[Stmt] = None


@dataclass
class While(Stmt):
    cond: Expr
    body: Stmt


@dataclass
class DoWhile(Stmt):
    body: Stmt
    cond: Expr


@dataclass
class ForBasic(Stmt):
    init: list[Stmt]  # LocalVarDecl or ExprStmt entries
    cond: Optional[Expr]
    update: list[Expr]
    body: Stmt


@dataclass
class ForEach(Stmt):
    type: TypeRef
    var: str
    iterable: Expr
    body: Stmt


@dataclass
class SwitchCase:
    labels: list[Expr]  # empty for `default`
    stmts: list[Stmt]
    arrow: bool = False


@dataclass
class Switch(Stmt):
    selector: Expr
    cases: list[SwitchCase]


@dataclass
class Return(Stmt):
    value: Optional[Expr] = None


@dataclass
class Throw(Stmt):
    value: Expr


@dataclass
class Catch:
    types: list[TypeRef]
    name: str
    body: Block


@dataclass
class Try(Stmt):
    resources: list[Stmt]
    body: Block
    catches: list[Catch]
    finally_block: Optional[Block] = None


@dataclass
class Break(Stmt):
    label: Optional[str] = None


@dataclass
class Continue(Stmt):
    label: Optional[str] = None


@dataclass
class Sync(Stmt):
    lock: Expr
    body: Block


@dataclass
class Assert(Stmt):
    cond: Expr
    message: Optional[Expr] = None


@dataclass
class Yield(Stmt):
    value: Expr


@dataclass
class Labeled(Stmt):
    label: str
    stmt: Stmt


@dataclass
class Empty(Stmt):
    pass


@dataclass
class LocalTypeDecl(Stmt):
    decl: "TypeDecl"


# ---- declarations ----


@dataclass
class Param:
    type: TypeRef
    name: str
    varargs: bool = False


@dataclass
class Member:
    pass


@dataclass
class FieldDecl(Member):
    type: TypeRef
    declarators: list[tuple[str, Optional[Expr]]]
    modifiers: list[str] = field(default_factory=list)


@dataclass
class FunctionDecl(Member):
    kind: str  # method ctor compact_ctor static_init instance_init
    name: str
    params: list[Param]
    return_type: Optional[TypeRef]
    body: Optional[Block]
    modifiers: list[str] = field(default_factory=list)
    throws: list[TypeRef] = field(default_factory=list)
    type_params: list[str] = field(default_factory=list)
    tok_start: int = 0
    tok_end: int = 0
    body_tok_start: int = 0  # index of the body's '{'; 0 when body-less
    body_tok_end: int = 0
    decl_index: int = 0


@dataclass
class TypeDecl(Member):
    kind: str  # class interface enum record annotation
    name: str
    members: list[Member] = field(default_factory=list)
    modifiers: list[str] = field(default_factory=list)
    type_params: list[str] = field(default_factory=list)
    supertypes: list[TypeRef] = field(default_factory=list)  # extends+implements
    record_components: list[Param] = field(default_factory=list)
    annotation_names: list[str] = field(default_factory=list)
    tok_start: int = 0
    tok_end: int = 0


@dataclass
class EnumConstant(Member):
    name: str
    args: list[Expr] = field(default_factory=list)
    has_body: bool = False


@dataclass
class CompilationUnit:
    package: Optional[str]
    imports: list[str]
    types: list[TypeDecl]
