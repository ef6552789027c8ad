"""Generic traversal over the parse-tree dataclasses."""

from __future__ import annotations

import dataclasses
from typing import Any, Iterator

from clonesca.javasrc import nodes as N

_NODE_TYPES = (
    N.Expr,
    N.Stmt,
    N.TypeRef,
    N.Catch,
    N.SwitchCase,
    N.Param,
    N.Member,
)


def iter_children(node: Any) -> Iterator[Any]:
    """Yield direct child nodes of any parse-tree dataclass."""
    for f in dataclasses.fields(node):
        value = getattr(node, f.name)
        if isinstance(value, _NODE_TYPES):
            yield value
        elif isinstance(value, list):
            for item in value:
                if isinstance(item, _NODE_TYPES):
                    yield item
                elif isinstance(item, tuple):
                    for part in item:
                        if isinstance(part, _NODE_TYPES):
                            yield part


def walk(node: Any) -> Iterator[Any]:
    """Pre-order traversal including `node` itself."""
    stack = [node]
    while stack:
        current = stack.pop()
        yield current
        children = list(iter_children(current))
        stack.extend(reversed(children))
