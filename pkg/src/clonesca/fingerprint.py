"""Class fingerprints: normalized ASTs, call inlining, order-free hashing.

A function body is reduced to a typed skeleton: identifiers become
``SimpleName``, literal values become ``Literal``, primitive types
``PrimitiveType``, and reference types ``TypeName:<simple name>``, so
renames and value edits do not move the fingerprint. Calls to other
functions of the same class are inlined recursively (the linked
function tree); calls that leave the class collapse to a
``DummyExternalNode`` leaf and suppressed recursive or cyclic calls to
a ``DummyRecursiveNode`` leaf. A class root over the retained
function trees is hashed bottom-up with FNV-1a over the label plus the
*sum* of child hashes, which makes every level order-insensitive:
reordering statements, methods, or root children cannot change the
digest, while adding a statement or changing an operator or type name
does (operators and type names are part of node labels).

Only syntactic type positions produce ``TypeName`` leaves; a type name
used as a call receiver (``Utils.copy(a, b)``) is indistinguishable
from a variable without resolution and disappears with the call site.
Call arguments vanish when a call site is inlined or collapsed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from clonesca.errors import EmptyClassAst
from clonesca.hashing import FeatureHash, fnv1a64
from clonesca.javasrc import nodes as N
from clonesca.javasrc.lexer import PRIMITIVE_TYPES
from clonesca.sources import ClassUnit, FunctionUnit

LABEL_CLASS_ROOT = "ClassRoot"
LABEL_FUNCTION_ROOT = "FunctionRoot"
LABEL_SIMPLE_NAME = "SimpleName"
LABEL_PRIMITIVE = "PrimitiveType"
LABEL_LITERAL = "Literal"
LABEL_DUMMY_EXTERNAL = "DummyExternalNode"
LABEL_DUMMY_RECURSIVE = "DummyRecursiveNode"
_TYPE_PREFIX = "TypeName:"
_MARKER_PREFIX = "\x00call:"  # internal-call placeholder, never hashed

DEFAULT_NODE_CAP = 100_000


@dataclass(frozen=True)
class NormalizedNode:
    label: str
    children: tuple["NormalizedNode", ...] = ()

    def size(self) -> int:
        """Logical node count (shared subtrees counted per occurrence)."""
        total = 0
        stack = [self]
        while stack:
            node = stack.pop()
            total += 1
            stack.extend(node.children)
        return total


@dataclass(frozen=True)
class LinkedFunctionAst:
    owner: tuple[str, str, int]  # class qualified name, function name, arity
    root: NormalizedNode
    node_count: int
    index: int = 0  # declaration index within the class


@dataclass(frozen=True)
class ClassAst:
    owner: str
    root: NormalizedNode


def _leaf(label: str) -> NormalizedNode:
    return NormalizedNode(label)


def _type_leaves(ref: N.TypeRef) -> list[NormalizedNode]:
    """Flatten a type usage into leaves: base name first, then type args."""
    if ref.primitive:
        return [_leaf(LABEL_PRIMITIVE)]
    leaves = []
    if ref.name not in ("var", "?"):
        leaves.append(_leaf(_TYPE_PREFIX + ref.name))
    for arg in ref.type_args:
        leaves.extend(_type_leaves(arg))
    return leaves


class _FunctionTable:
    """Call-resolution view of a class's declared functions."""

    def __init__(self, cls: ClassUnit):
        self.by_key: dict[tuple[str, int], list[FunctionUnit]] = {}
        for fn in cls.functions:
            if fn.has_body:
                self.by_key.setdefault((fn.name, fn.arity), []).append(fn)

    def resolve(self, name: str, args: Sequence[N.Expr]) -> Optional[int]:
        """Declaration index of the matching function, or None (external)."""
        candidates = self.by_key.get((name, len(args)), [])
        if not candidates:
            return None
        if len(candidates) == 1:
            return candidates[0].decl_index
        visible = [_visible_type(a) for a in args]
        matching = [
            fn
            for fn in candidates
            if all(
                v is None or v == p
                for v, p in zip(visible, fn.param_type_names)
            )
        ]
        if len(matching) == 1:
            return matching[0].decl_index
        return None


def _visible_type(arg: N.Expr) -> Optional[str]:
    """Statically visible simple type name of a call argument, if any."""
    if isinstance(arg, N.New) and arg.anon_body is None:
        return arg.type.display()
    if isinstance(arg, N.Cast) and len(arg.types) == 1:
        return arg.types[0].display()
    if isinstance(arg, N.Literal):
        return {
            "int": "int",
            "float": None,  # could be float or double; do not guess
            "char": "char",
            "str": "String",
            "textblock": "String",
            "bool": "boolean",
            "null": None,
        }.get(arg.kind)
    return None


class _Builder:
    """Maps parsed statements/expressions to normalized nodes.

    `self_index` is the declaration index of the function being built
    (self-calls become DummyRecursiveNode). Inside embedded type bodies
    (anonymous or local classes) call resolution is disabled: their
    methods shadow the enclosing class unpredictably.
    """

    def __init__(self, table: _FunctionTable, class_name: str, self_index: int):
        self.table = table
        self.class_name = class_name
        self.self_index = self_index
        self.embedded_depth = 0

    # ---- call sites ----

    def _call_site(self, name: str, args: list[N.Expr]) -> NormalizedNode:
        if self.embedded_depth:
            return _leaf(LABEL_DUMMY_EXTERNAL)
        target = self.table.resolve(name, args)
        if target is None:
            return _leaf(LABEL_DUMMY_EXTERNAL)
        if target == self.self_index:
            return _leaf(LABEL_DUMMY_RECURSIVE)
        return _leaf(f"{_MARKER_PREFIX}{target}")

    # ---- expressions ----

    def expr(self, e: N.Expr) -> NormalizedNode:
        if isinstance(e, N.Name):
            return _leaf(LABEL_SIMPLE_NAME)
        if isinstance(e, N.Literal):
            return _leaf(LABEL_LITERAL)
        if isinstance(e, (N.This, N.Super)):
            return _leaf(LABEL_SIMPLE_NAME)
        if isinstance(e, N.FieldAccess):
            return NormalizedNode(
                "FieldAccess", (self.expr(e.target), _leaf(LABEL_SIMPLE_NAME))
            )
        if isinstance(e, N.ArrayAccess):
            return NormalizedNode(
                "ArrayAccess", (self.expr(e.array), self.expr(e.index))
            )
        if isinstance(e, N.MethodCall):
            if e.target is None or isinstance(e.target, N.This):
                return self._call_site(e.name, e.args)
            return _leaf(LABEL_DUMMY_EXTERNAL)
        if isinstance(e, N.CtorCall):
            if e.kind == "this":
                return self._call_site(self.class_name, e.args)
            return _leaf(LABEL_DUMMY_EXTERNAL)
        if isinstance(e, N.Assign):
            return NormalizedNode(
                f"Assign:{e.op}", (self.expr(e.lhs), self.expr(e.rhs))
            )
        if isinstance(e, N.Binary):
            return NormalizedNode(
                f"BinaryOp:{e.op}", (self.expr(e.left), self.expr(e.right))
            )
        if isinstance(e, N.Unary):
            return NormalizedNode(f"UnaryOp:{e.op}", (self.expr(e.operand),))
        if isinstance(e, N.Ternary):
            return NormalizedNode(
                "Conditional",
                (self.expr(e.cond), self.expr(e.then), self.expr(e.other)),
            )
        if isinstance(e, N.InstanceOf):
            return NormalizedNode(
                "InstanceOf", (self.expr(e.operand), *_type_leaves(e.type))
            )
        if isinstance(e, N.Cast):
            leaves = [lf for t in e.types for lf in _type_leaves(t)]
            return NormalizedNode("Cast", (*leaves, self.expr(e.operand)))
        if isinstance(e, N.New):
            if (
                e.anon_body is None
                and not e.type.qualifiers
                and e.type.name == self.class_name
                and e.type.array_dims == 0
            ):
                return self._call_site(self.class_name, e.args)
            children = _type_leaves(e.type) + [self.expr(a) for a in e.args]
            if e.anon_body is not None:
                children.append(self._type_body(e.anon_body))
            return NormalizedNode("New", tuple(children))
        if isinstance(e, N.NewArray):
            children = _type_leaves(e.type) + [self.expr(d) for d in e.dim_exprs]
            if e.initializer is not None:
                children.append(self.expr(e.initializer))
            return NormalizedNode("NewArray", tuple(children))
        if isinstance(e, N.ArrayInit):
            return NormalizedNode(
                "ArrayInit", tuple(self.expr(item) for item in e.items)
            )
        if isinstance(e, N.Lambda):
            children: list[NormalizedNode] = []
            for ptype, _ in e.params:
                if ptype is not None:
                    children.extend(_type_leaves(ptype))
            children.append(
                self.block(e.body) if isinstance(e.body, N.Block) else self.expr(e.body)
            )
            return NormalizedNode("Lambda", tuple(children))
        if isinstance(e, N.MethodRef):
            target = (
                _type_leaves(e.target)[0]
                if isinstance(e.target, N.TypeRef)
                else self.expr(e.target)
            )
            return NormalizedNode("MethodRef", (target, _leaf(LABEL_SIMPLE_NAME)))
        if isinstance(e, N.ClassLit):
            return NormalizedNode("ClassLiteral", tuple(_type_leaves(e.type)))
        if isinstance(e, N.SwitchExpr):
            return self._switch(e.selector, e.cases)
        raise TypeError(f"unmapped expression node: {type(e).__name__}")

    # ---- statements ----

    def stmt(self, s: N.Stmt) -> Optional[NormalizedNode]:
        if isinstance(s, N.Block):
            return self.block(s)
        if isinstance(s, N.Empty):
            return None
        if isinstance(s, N.LocalVarDecl):
            return self._var_decl(s.type, s.declarators)
        if isinstance(s, N.ExprStmt):
            return self.expr(s.expr)
        if isinstance(s, N.If):
            children = [self.expr(s.cond), self._stmt_or_empty(s.then)]
            if s.other is not None:
                children.append(self._stmt_or_empty(s.other))
            return NormalizedNode("If", tuple(children))
        if isinstance(s, N.While):
            return NormalizedNode(
                "Loop", (self.expr(s.cond), self._stmt_or_empty(s.body))
            )
        if isinstance(s, N.DoWhile):
            return NormalizedNode(
                "Loop", (self._stmt_or_empty(s.body), self.expr(s.cond))
            )
        if isinstance(s, N.ForBasic):
            children = [n for st in s.init if (n := self.stmt(st)) is not None]
            if s.cond is not None:
                children.append(self.expr(s.cond))
            children.extend(self.expr(u) for u in s.update)
            children.append(self._stmt_or_empty(s.body))
            return NormalizedNode("Loop", tuple(children))
        if isinstance(s, N.ForEach):
            return NormalizedNode(
                "Loop",
                (
                    *_type_leaves(s.type),
                    _leaf(LABEL_SIMPLE_NAME),
                    self.expr(s.iterable),
                    self._stmt_or_empty(s.body),
                ),
            )
        if isinstance(s, N.Switch):
            return self._switch(s.selector, s.cases)
        if isinstance(s, N.Return):
            children = () if s.value is None else (self.expr(s.value),)
            return NormalizedNode("Return", children)
        if isinstance(s, N.Throw):
            return NormalizedNode("Throw", (self.expr(s.value),))
        if isinstance(s, N.Try):
            children = [n for r in s.resources if (n := self.stmt(r)) is not None]
            children.append(self.block(s.body))
            for catch in s.catches:
                leaves = [lf for t in catch.types for lf in _type_leaves(t)]
                children.append(
                    NormalizedNode("Catch", (*leaves, self.block(catch.body)))
                )
            if s.finally_block is not None:
                children.append(self.block(s.finally_block))
            return NormalizedNode("Try", tuple(children))
        if isinstance(s, N.Break):
            return _leaf("Break")
        if isinstance(s, N.Continue):
            return _leaf("Continue")
        if isinstance(s, N.Sync):
            return NormalizedNode("Sync", (self.expr(s.lock), self.block(s.body)))
        if isinstance(s, N.Assert):
            children = [self.expr(s.cond)]
            if s.message is not None:
                children.append(self.expr(s.message))
            return NormalizedNode("Assert", tuple(children))
        if isinstance(s, N.Yield):
            return NormalizedNode("Yield", (self.expr(s.value),))
        if isinstance(s, N.Labeled):
            return self.stmt(s.stmt)
        if isinstance(s, N.LocalTypeDecl):
            return self._type_body(s.decl.members)
        raise TypeError(f"unmapped statement node: {type(s).__name__}")

    def _stmt_or_empty(self, s: N.Stmt) -> NormalizedNode:
        node = self.stmt(s)
        return node if node is not None else NormalizedNode("Block")

    def block(self, b: N.Block) -> NormalizedNode:
        children = [n for st in b.stmts if (n := self.stmt(st)) is not None]
        return NormalizedNode("Block", tuple(children))

    def _var_decl(
        self, vtype: N.TypeRef, declarators: list[tuple[str, Optional[N.Expr]]]
    ) -> NormalizedNode:
        children = list(_type_leaves(vtype))
        for _, init in declarators:
            children.append(_leaf(LABEL_SIMPLE_NAME))
            if init is not None:
                children.append(self.expr(init))
        return NormalizedNode("VarDecl", tuple(children))

    def _switch(self, selector: N.Expr, cases: list[N.SwitchCase]) -> NormalizedNode:
        children = [self.expr(selector)]
        for case in cases:
            case_children = [self.expr(lbl) for lbl in case.labels]
            case_children.extend(
                n for st in case.stmts if (n := self.stmt(st)) is not None
            )
            children.append(NormalizedNode("Case", tuple(case_children)))
        return NormalizedNode("Switch", tuple(children))

    def _type_body(self, members: Iterable[N.Member]) -> NormalizedNode:
        """Anonymous or local class body embedded in a function."""
        self.embedded_depth += 1
        children: list[NormalizedNode] = []
        for member in members:
            if isinstance(member, N.FunctionDecl) and member.body is not None:
                sig = [lf for p in member.params for lf in _type_leaves(p.type)]
                children.append(
                    NormalizedNode("Member", (*sig, self.block(member.body)))
                )
            elif isinstance(member, N.FieldDecl):
                children.append(self._var_decl(member.type, member.declarators))
            elif isinstance(member, N.TypeDecl):
                children.append(self._type_body(member.members))
        self.embedded_depth -= 1
        return NormalizedNode("TypeBody", tuple(children))


def build_function_ast(fn: FunctionUnit, cls: ClassUnit) -> NormalizedNode:
    """Normalized skeleton of one function, before call linking.

    Same-class call sites carry internal placeholders that
    `link_internal_calls` later resolves; external calls are already
    DummyExternalNode leaves.
    """
    if fn.decl.body is None:
        raise ValueError(f"{fn.name}: cannot build an AST without a body")
    builder = _Builder(_FunctionTable(cls), cls.simple_name, fn.decl_index)
    children: list[NormalizedNode] = []
    for p_name in fn.param_type_names:
        children.extend(_type_leaves(_param_ref(p_name)))
    decl = fn.decl
    if decl.kind == "method" and decl.return_type is not None:
        children.extend(_type_leaves(decl.return_type))
    children.append(builder.block(decl.body))
    return NormalizedNode(LABEL_FUNCTION_ROOT, tuple(children))


def _param_ref(display_name: str) -> N.TypeRef:
    base = display_name.rstrip("[]")
    dims = (len(display_name) - len(base)) // 2
    return N.TypeRef(base, primitive=base in PRIMITIVE_TYPES, array_dims=dims)


# ---- linking ----


def _collect_markers(root: NormalizedNode) -> list[NormalizedNode]:
    """Marker leaves in left-to-right source order."""
    found = []
    stack = [root]
    while stack:
        node = stack.pop()
        if node.label.startswith(_MARKER_PREFIX):
            found.append(node)
        stack.extend(reversed(node.children))
    return found


def _marker_target(node: NormalizedNode) -> int:
    return int(node.label[len(_MARKER_PREFIX) :])


def _rebuild(root: NormalizedNode, decision: dict[int, NormalizedNode]) -> NormalizedNode:
    """Replace marker leaves per `decision` (keyed by marker object id)."""
    done: dict[int, NormalizedNode] = {}
    stack: list[tuple[NormalizedNode, bool]] = [(root, False)]
    while stack:
        node, processed = stack.pop()
        if id(node) in done:
            continue
        if node.label.startswith(_MARKER_PREFIX):
            done[id(node)] = decision[id(node)]
            continue
        if not node.children:
            done[id(node)] = node
            continue
        if processed:
            new_children = tuple(done[id(c)] for c in node.children)
            if all(a is b for a, b in zip(new_children, node.children)):
                done[id(node)] = node
            else:
                done[id(node)] = NormalizedNode(node.label, new_children)
        else:
            stack.append((node, True))
            stack.extend((c, False) for c in node.children)
    return done[id(root)]


def _strongly_connected(adj: dict[int, list[int]]) -> list[list[int]]:
    """Iterative Tarjan; components in discovery order."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    counter = 0
    components: list[list[int]] = []

    for start in adj:
        if start in index:
            continue
        work = [(start, iter(adj[start]))]
        index[start] = low[start] = counter
        counter += 1
        stack.append(start)
        on_stack.add(start)
        while work:
            node, it = work[-1]
            advanced = False
            for nxt in it:
                if nxt not in adj:
                    continue
                if nxt not in index:
                    index[nxt] = low[nxt] = counter
                    counter += 1
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, iter(adj[nxt])))
                    advanced = True
                    break
                if nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                component = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                components.append(component)
    return components


def link_internal_calls(
    cls: ClassUnit,
    node_cap: int = DEFAULT_NODE_CAP,
    warnings: Optional[list[str]] = None,
) -> list[LinkedFunctionAst]:
    """Inline same-class calls into every function, breaking cycles.

    Cycles are broken by keeping the outgoing edges of functions with
    (more distinct intra-class callees, then greater LOC, then smaller
    name+arity); edges back into an already-kept function become
    DummyRecursiveNode. When a tree would exceed `node_cap` logical
    nodes the remaining call sites degrade to DummyExternalNode and a
    warning is recorded. Inlining never pushes a tree further past the
    cap than its own un-inlined body already is.
    """
    functions = [fn for fn in cls.functions if fn.has_body]
    if not functions:
        return []
    by_index = {fn.decl_index: fn for fn in functions}

    roots: dict[int, NormalizedNode] = {}
    bodies: dict[int, NormalizedNode] = {}
    markers: dict[int, list[NormalizedNode]] = {}
    for fn in functions:
        root = build_function_ast(fn, cls)
        roots[fn.decl_index] = root
        bodies[fn.decl_index] = root.children[-1]
        markers[fn.decl_index] = _collect_markers(root)

    adj = {
        i: sorted({_marker_target(m) for m in marks})
        for i, marks in markers.items()
    }

    # cycle breaking: assign keeper positions within each non-trivial SCC
    cut: set[tuple[int, int]] = set()
    for component in _strongly_connected(adj):
        if len(component) < 2:
            continue
        ordered = sorted(
            component,
            key=lambda i: (
                -len(adj[i]),
                -by_index[i].loc,
                (by_index[i].name, by_index[i].arity),
            ),
        )
        position = {idx: pos for pos, idx in enumerate(ordered)}
        for u in component:
            for v in adj[u]:
                if v in position and position[v] < position[u]:
                    cut.add((u, v))

    # logical sizes of the fully expanded bodies (cut markers stay 1 node)
    surviving = {
        i: [v for v in adj[i] if (i, v) not in cut] for i in adj
    }
    topo: list[int] = []
    seen: set[int] = set()

    def _visit(i: int) -> None:
        stack = [(i, False)]
        while stack:
            node, processed = stack.pop()
            if processed:
                topo.append(node)
                continue
            if node in seen:
                continue
            seen.add(node)
            stack.append((node, True))
            stack.extend((v, False) for v in surviving[node])

    for i in sorted(adj):
        _visit(i)

    expanded_size: dict[int, int] = {}
    expanded_body: dict[int, NormalizedNode] = {}
    for i in topo:
        decision: dict[int, NormalizedNode] = {}
        size = bodies[i].size()
        for marker in markers[i]:
            target = _marker_target(marker)
            if (i, target) in cut:
                decision[id(marker)] = _leaf(LABEL_DUMMY_RECURSIVE)
            else:
                decision[id(marker)] = expanded_body[target]
                size += expanded_size[target] - 1
        expanded_body[i] = _rebuild(bodies[i], decision)
        expanded_size[i] = size

    linked: list[LinkedFunctionAst] = []
    for fn in functions:
        i = fn.decl_index
        root = roots[i]
        signature = root.children[:-1]
        overhead = 1 + sum(leaf.size() for leaf in signature)
        budget = node_cap - overhead - bodies[i].size()
        decision = {}
        count = overhead + bodies[i].size()
        degraded = False
        for marker in markers[i]:
            target = _marker_target(marker)
            if (i, target) in cut:
                decision[id(marker)] = _leaf(LABEL_DUMMY_RECURSIVE)
                continue
            cost = expanded_size[target] - 1
            if cost <= budget:
                decision[id(marker)] = expanded_body[target]
                budget -= cost
                count += cost
            else:
                decision[id(marker)] = _leaf(LABEL_DUMMY_EXTERNAL)
                degraded = True
        if degraded and warnings is not None:
            warnings.append(
                f"{cls.qualified_name}.{fn.name}/{fn.arity}: "
                f"inlining cap {node_cap} reached; remaining internal calls "
                f"kept as external placeholders"
            )
        final_root = NormalizedNode(
            LABEL_FUNCTION_ROOT,
            (*signature, _rebuild(bodies[i], decision)),
        )
        linked.append(
            LinkedFunctionAst(
                owner=(cls.qualified_name, fn.name, fn.arity),
                root=final_root,
                node_count=count,
                index=i,
            )
        )
    return linked


def internal_call_graph(cls: ClassUnit) -> dict[int, tuple[int, ...]]:
    """Resolved same-class call edges: declaration index of each caller
    mapped to the sorted distinct indices it invokes (self excluded)."""
    graph: dict[int, tuple[int, ...]] = {}
    for fn in cls.functions:
        if not fn.has_body:
            continue
        root = build_function_ast(fn, cls)
        targets = sorted({_marker_target(m) for m in _collect_markers(root)})
        graph[fn.decl_index] = tuple(targets)
    return graph


def build_class_ast(
    linked: Sequence[LinkedFunctionAst],
    retained: Iterable[tuple[str, int]],
) -> ClassAst:
    """Class root over the retained functions' linked trees.

    `retained` holds (function name, arity) keys; the metrics module
    decides retention. Trivial functions are absent as roots but were
    already inlined into their callers.
    """
    keys = set(retained)
    kept = [ast for ast in linked if (ast.owner[1], ast.owner[2]) in keys]
    if not kept:
        owner = linked[0].owner[0] if linked else "<unknown>"
        raise EmptyClassAst(f"{owner}: no non-trivial function to anchor a feature")
    owner = kept[0].owner[0]
    return ClassAst(
        owner=owner,
        root=NormalizedNode(LABEL_CLASS_ROOT, tuple(ast.root for ast in kept)),
    )


def hash_tree(node: NormalizedNode) -> FeatureHash:
    """Bottom-up, order-insensitive digest.

    leaf = fnv1a64(label); internal = fnv1a64(label bytes followed by the
    little-endian 8-byte sum of child hashes mod 2^64). Bit-exact by
    contract: index files produced elsewhere must match.
    """
    memo: dict[int, int] = {}
    stack: list[tuple[NormalizedNode, bool]] = [(node, False)]
    while stack:
        current, processed = stack.pop()
        if id(current) in memo:
            continue
        if not current.children:
            memo[id(current)] = fnv1a64(current.label.encode("utf-8"))
            continue
        if processed:
            total = sum(memo[id(c)] for c in current.children) & 0xFFFFFFFFFFFFFFFF
            memo[id(current)] = fnv1a64(
                current.label.encode("utf-8") + total.to_bytes(8, "little")
            )
        else:
            stack.append((current, True))
            stack.extend((c, False) for c in current.children)
    return FeatureHash(memo[id(node)])
