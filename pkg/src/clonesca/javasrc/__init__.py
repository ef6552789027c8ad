"""Minimal Java source front end: tolerant lexer and recursive-descent parser.

Covers declarations, statements, and expressions through Java 17 well
enough for fingerprinting; it does not resolve types or build symbol
tables. No third-party grammar runtime is involved.
"""

from clonesca.javasrc.lexer import Token, lex
from clonesca.javasrc.parser import parse_compilation_unit

__all__ = ["Token", "lex", "parse_compilation_unit"]
