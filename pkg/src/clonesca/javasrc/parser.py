"""Recursive-descent Java parser.

Grammar coverage targets everyday library code through Java 17:
generics, lambdas, method references, try-with-resources, switch
arrows and expressions, records, enums with constant bodies, nested
and anonymous classes, instanceof patterns. It produces the loose
trees in `nodes`; no symbol resolution happens here.

Ambiguities are settled by bounded backtracking over the pre-lexed
token list: statement-level declaration vs expression, cast vs
parenthesized expression, lambda vs paren. The lexer never merges
``>`` runs, so generic closers work; expression levels re-join
adjacent ``>`` tokens into shift and compound-assignment operators.
"""

from __future__ import annotations

from typing import Callable, Optional, TypeVar

from clonesca.errors import ParseError
from clonesca.javasrc import nodes as N
from clonesca.javasrc.lexer import PRIMITIVE_TYPES, Token, lex

_T = TypeVar("_T")

_MODIFIER_KEYWORDS = frozenset(
    """public private protected static final abstract native synchronized
    transient volatile strictfp default""".split()
)

_ASSIGN_OPS = frozenset("= += -= *= /= %= &= |= ^= <<=".split())

_LAMBDA_FOLLOW = "->"


def parse_compilation_unit(text: str) -> tuple[N.CompilationUnit, list[Token]]:
    """Parse one .java file. Raises ParseError on malformed input."""
    tokens = lex(text)
    parser = _Parser(tokens)
    unit = parser.compilation_unit()
    return unit, tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.pos = 0

    # ---- token plumbing ----

    @property
    def cur(self) -> Token:
        return self.toks[self.pos]

    def peek(self, k: int = 1) -> Token:
        i = min(self.pos + k, len(self.toks) - 1)
        return self.toks[i]

    def at(self, text: str, kind: Optional[str] = None) -> bool:
        t = self.cur
        return t.text == text and (kind is None or t.kind == kind)

    def at_kw(self, word: str) -> bool:
        t = self.cur
        return t.kind == "kw" and t.text == word

    def at_ident(self, word: Optional[str] = None) -> bool:
        t = self.cur
        return t.kind == "ident" and (word is None or t.text == word)

    def advance(self) -> Token:
        t = self.cur
        if t.kind != "eof":
            self.pos += 1
        return t

    def accept(self, text: str) -> bool:
        if self.cur.text == text and self.cur.kind != "eof":
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if self.cur.text == text and self.cur.kind != "eof":
            return self.advance()
        raise self.fail(f"expected {text!r}, found {self.cur.text!r}")

    def expect_ident(self) -> str:
        if self.cur.kind == "ident":
            return self.advance().text
        raise self.fail(f"expected identifier, found {self.cur.text!r}")

    def fail(self, message: str) -> ParseError:
        return ParseError(message, self.cur.line, self.cur.col)

    def _try(self, fn: Callable[[], _T]) -> Optional[_T]:
        saved = self.pos
        try:
            return fn()
        except ParseError:
            self.pos = saved
            return None

    def _adjacent(self, i: int) -> bool:
        return self.toks[i].end == self.toks[i + 1].start

    def _gt_run(self) -> Optional[str]:
        """Merged operator spelled by the adjacent '>' run at cur, if any."""
        if not self.at(">"):
            return None
        i = self.pos
        run = ">"
        while (
            self.toks[i].text == ">"
            and self._adjacent(i)
            and self.toks[i + 1].text in (">", "=")
        ):
            run += self.toks[i + 1].text
            i += 1
            if run.endswith("="):
                break
            if len(run) == 3 and not run.endswith("="):
                # could still take '=' for >>>=
                if self._adjacent(i) and self.toks[i + 1].text == "=":
                    run += "="
                    i += 1
                break
        return run

    def _consume_run(self, run: str) -> None:
        for _ in run:
            self.advance()

    # ---- compilation unit ----

    def compilation_unit(self) -> N.CompilationUnit:
        package = None
        self._annotations()  # package-info style annotations
        if self.at_kw("package"):
            self.advance()
            package = self._qualified_name()
            self.expect(";")
        imports = []
        while self.at_kw("import"):
            self.advance()
            if self.at_kw("static"):
                self.advance()
            name = self._qualified_name()
            if self.accept("."):
                self.expect("*")
                name += ".*"
            self.expect(";")
            imports.append(name)
        types = []
        while self.cur.kind != "eof":
            if self.accept(";"):
                continue
            types.append(self._type_decl())
        return N.CompilationUnit(package, imports, types)

    def _qualified_name(self) -> str:
        parts = [self.expect_ident()]
        while self.at(".") and self.peek().kind == "ident":
            self.advance()
            parts.append(self.advance().text)
        return ".".join(parts)

    # ---- annotations and modifiers ----

    def _annotations(self) -> list[str]:
        names = []
        while self.at("@") and self.peek().kind == "ident":
            self.advance()
            name = self._qualified_name()
            names.append(name.rsplit(".", 1)[-1])
            if self.at("("):
                self._skip_balanced("(", ")")
        return names

    def _skip_balanced(self, open_text: str, close_text: str) -> None:
        depth = 0
        while self.cur.kind != "eof":
            if self.cur.text == open_text:
                depth += 1
            elif self.cur.text == close_text:
                depth -= 1
                if depth == 0:
                    self.advance()
                    return
            self.advance()
        raise self.fail(f"unbalanced {open_text!r}")

    def _modifiers(self) -> tuple[list[str], list[str]]:
        """Returns (modifiers, annotation simple names)."""
        mods: list[str] = []
        anns: list[str] = []
        while True:
            anns.extend(self._annotations())
            t = self.cur
            if t.kind == "kw" and t.text in _MODIFIER_KEYWORDS:
                # 'default' doubles as a switch label keyword
                if t.text == "default" and self.peek().text in (":", "->"):
                    break
                mods.append(self.advance().text)
            elif t.kind == "ident" and t.text == "sealed":
                mods.append(self.advance().text)
            elif (
                t.kind == "ident"
                and t.text == "non"
                and self.peek().text == "-"
                and self.peek(2).text == "sealed"
            ):
                self.advance(), self.advance(), self.advance()
                mods.append("non-sealed")
            elif self.at("@") and self.peek().kind == "ident":
                continue
            else:
                break
        return mods, anns

    # ---- types ----

    def _type_args(self) -> list[N.TypeRef]:
        self.expect("<")
        args: list[N.TypeRef] = []
        if self.accept(">"):
            return args  # diamond
        while True:
            self._annotations()
            if self.accept("?"):
                if self.at_kw("extends") or self.at_kw("super"):
                    self.advance()
                    args.append(self._type_ref())
            else:
                args.append(self._type_ref())
            if self.accept(","):
                continue
            self.expect(">")
            return args

    def _type_ref(self, allow_dims: bool = True) -> N.TypeRef:
        self._annotations()
        t = self.cur
        if t.kind == "kw" and t.text in PRIMITIVE_TYPES:
            self.advance()
            ref = N.TypeRef(t.text, primitive=True)
        elif t.kind == "kw" and t.text == "void":
            self.advance()
            ref = N.TypeRef("void", primitive=True)
        elif t.kind == "ident":
            qualifiers: list[str] = []
            name = self.advance().text
            args: list[N.TypeRef] = []
            if self.at("<"):
                got = self._try(self._type_args)
                if got is None:
                    raise self.fail("malformed type arguments")
                args = got
            while self.at(".") and self.peek().kind == "ident":
                self.advance()
                qualifiers.append(name)
                name = self.advance().text
                if self.at("<"):
                    got = self._try(self._type_args)
                    if got is None:
                        raise self.fail("malformed type arguments")
                    args = args + got
            ref = N.TypeRef(name, type_args=args, qualifiers=qualifiers)
        else:
            raise self.fail(f"expected a type, found {t.text!r}")
        if allow_dims:
            while self.at("[") and self.peek().text == "]":
                self.advance(), self.advance()
                self._annotations()
                ref.array_dims += 1
        return ref

    def _type_params(self) -> list[str]:
        self.expect("<")
        names = []
        while True:
            self._annotations()
            names.append(self.expect_ident())
            if self.at_kw("extends"):
                self.advance()
                self._type_ref()
                while self.accept("&"):
                    self._type_ref()
            if self.accept(","):
                continue
            self.expect(">")
            return names

    # ---- type declarations ----

    def _type_decl(self) -> N.TypeDecl:
        start = self.pos
        mods, anns = self._modifiers()
        decl = self._type_decl_after_mods(mods, anns, start)
        return decl

    def _type_decl_after_mods(
        self, mods: list[str], anns: list[str], start: int
    ) -> N.TypeDecl:
        if self.at_kw("class"):
            self.advance()
            return self._class_like("class", mods, anns, start)
        if self.at_kw("interface"):
            self.advance()
            return self._class_like("interface", mods, anns, start)
        if self.at_kw("enum"):
            self.advance()
            return self._enum_decl(mods, anns, start)
        if self.at("@") and self.peek().text == "interface":
            self.advance(), self.advance()
            return self._class_like("annotation", mods, anns, start)
        if self.at_ident("record") and self.peek().kind == "ident":
            self.advance()
            return self._record_decl(mods, anns, start)
        raise self.fail(f"expected a type declaration, found {self.cur.text!r}")

    def _class_like(
        self, kind: str, mods: list[str], anns: list[str], start: int
    ) -> N.TypeDecl:
        name = self.expect_ident()
        type_params: list[str] = []
        if self.at("<"):
            type_params = self._type_params()
        supertypes: list[N.TypeRef] = []
        if self.at_kw("extends"):
            self.advance()
            supertypes.append(self._type_ref())
            while self.accept(","):  # interfaces extend many
                supertypes.append(self._type_ref())
        if self.at_kw("implements"):
            self.advance()
            supertypes.append(self._type_ref())
            while self.accept(","):
                supertypes.append(self._type_ref())
        if self.at_ident("permits"):
            self.advance()
            self._type_ref()
            while self.accept(","):
                self._type_ref()
        members = self._class_body(name, kind)
        return N.TypeDecl(
            kind,
            name,
            members=members,
            modifiers=mods,
            type_params=type_params,
            supertypes=supertypes,
            annotation_names=anns,
            tok_start=start,
            tok_end=self.pos,
        )

    def _record_decl(
        self, mods: list[str], anns: list[str], start: int
    ) -> N.TypeDecl:
        name = self.expect_ident()
        type_params: list[str] = []
        if self.at("<"):
            type_params = self._type_params()
        self.expect("(")
        components: list[N.Param] = []
        if not self.at(")"):
            while True:
                self._annotations()
                ctype = self._type_ref()
                varargs = bool(self.accept("..."))
                cname = self.expect_ident()
                components.append(N.Param(ctype, cname, varargs))
                if not self.accept(","):
                    break
        self.expect(")")
        supertypes: list[N.TypeRef] = []
        if self.at_kw("implements"):
            self.advance()
            supertypes.append(self._type_ref())
            while self.accept(","):
                supertypes.append(self._type_ref())
        members = self._class_body(name, "record")
        return N.TypeDecl(
            "record",
            name,
            members=members,
            modifiers=mods,
            type_params=type_params,
            supertypes=supertypes,
            record_components=components,
            annotation_names=anns,
            tok_start=start,
            tok_end=self.pos,
        )

    def _enum_decl(self, mods: list[str], anns: list[str], start: int) -> N.TypeDecl:
        name = self.expect_ident()
        supertypes: list[N.TypeRef] = []
        if self.at_kw("implements"):
            self.advance()
            supertypes.append(self._type_ref())
            while self.accept(","):
                supertypes.append(self._type_ref())
        self.expect("{")
        members: list[N.Member] = []
        # constant list
        while True:
            if self.at("}") or self.at(";"):
                break
            self._annotations()
            cname = self.expect_ident()
            args: list[N.Expr] = []
            has_body = False
            if self.at("("):
                args = self._arguments()
            if self.at("{"):
                has_body = True
                self._class_body(name, "class")  # parsed, then discarded
            members.append(N.EnumConstant(cname, args, has_body))
            if not self.accept(","):
                break
        if self.accept(";"):
            while not self.at("}"):
                if self.accept(";"):
                    continue
                got = self._member(name, "enum")
                if got is not None:
                    members.append(got)
        self.expect("}")
        return N.TypeDecl(
            "enum",
            name,
            members=members,
            modifiers=mods,
            supertypes=supertypes,
            annotation_names=anns,
            tok_start=start,
            tok_end=self.pos,
        )

    def _class_body(self, class_name: str, kind: str) -> list[N.Member]:
        self.expect("{")
        members: list[N.Member] = []
        while not self.at("}"):
            if self.cur.kind == "eof":
                raise self.fail("unterminated class body")
            if self.accept(";"):
                continue
            got = self._member(class_name, kind)
            if got is not None:
                members.append(got)
        self.expect("}")
        return members

    def _member(self, class_name: str, kind: str) -> Optional[N.Member]:
        start = self.pos
        mods, anns = self._modifiers()

        # nested type declarations
        if (
            self.at_kw("class")
            or self.at_kw("interface")
            or self.at_kw("enum")
            or (self.at("@") and self.peek().text == "interface")
            or (
                self.at_ident("record")
                and self.peek().kind == "ident"
                and self.peek(2).text in ("(", "<")
            )
        ):
            return self._type_decl_after_mods(mods, anns, start)

        # initializer blocks
        if self.at("{"):
            body_start = self.pos
            body = self._block()
            fn_kind = "static_init" if "static" in mods else "instance_init"
            return N.FunctionDecl(
                fn_kind,
                "",
                [],
                None,
                body,
                mods,
                tok_start=start,
                tok_end=self.pos,
                body_tok_start=body_start,
                body_tok_end=self.pos,
            )

        type_params: list[str] = []
        if self.at("<"):
            type_params = self._type_params()

        # constructor (incl. record compact form)
        if self.at_ident(class_name):
            if self.peek().text == "(":
                self.advance()
                return self._function_rest(
                    "ctor", class_name, None, mods, type_params, start
                )
            if kind == "record" and self.peek().text == "{":
                self.advance()
                body_start = self.pos
                body = self._block()
                return N.FunctionDecl(
                    "compact_ctor",
                    class_name,
                    [],
                    None,
                    body,
                    mods,
                    type_params=type_params,
                    tok_start=start,
                    tok_end=self.pos,
                    body_tok_start=body_start,
                    body_tok_end=self.pos,
                )

        rtype = self._type_ref()
        name = self.expect_ident()
        if self.at("("):
            return self._function_rest("method", name, rtype, mods, type_params, start)
        # field declaration
        declarators = self._var_declarators(name)
        self.expect(";")
        return N.FieldDecl(rtype, declarators, mods)

    def _var_declarators(self, first_name: str) -> list[tuple[str, Optional[N.Expr]]]:
        declarators = []
        name = first_name
        while True:
            while self.at("[") and self.peek().text == "]":  # C-style dims
                self.advance(), self.advance()
            init = None
            if self.accept("="):
                init = self._var_initializer()
            declarators.append((name, init))
            if self.accept(","):
                name = self.expect_ident()
                continue
            return declarators

    def _var_initializer(self) -> N.Expr:
        if self.at("{"):
            return self._array_init()
        return self._expression()

    def _array_init(self) -> N.ArrayInit:
        self.expect("{")
        items: list[N.Expr] = []
        while not self.at("}"):
            if self.at("{"):
                items.append(self._array_init())
            else:
                items.append(self._expression())
            if not self.accept(","):
                break
        self.expect("}")
        return N.ArrayInit(items)

    def _function_rest(
        self,
        fn_kind: str,
        name: str,
        rtype: Optional[N.TypeRef],
        mods: list[str],
        type_params: list[str],
        start: int,
    ) -> N.FunctionDecl:
        self.expect("(")
        params: list[N.Param] = []
        if not self.at(")"):
            while True:
                self._modifiers()  # final, annotations
                ptype = self._type_ref()
                varargs = bool(self.accept("..."))
                if self.at_kw("this"):  # receiver parameter
                    self.advance()
                    pname = "this"
                else:
                    pname = self.expect_ident()
                    while self.at("[") and self.peek().text == "]":
                        self.advance(), self.advance()
                        ptype.array_dims += 1
                params.append(N.Param(ptype, pname, varargs))
                if not self.accept(","):
                    break
        self.expect(")")
        throws: list[N.TypeRef] = []
        if self.at_kw("throws"):
            self.advance()
            throws.append(self._type_ref())
            while self.accept(","):
                throws.append(self._type_ref())
        if self.at_kw("default"):  # annotation type member default
            self.advance()
            if self.at("{"):
                self._array_init()
            elif self.at("@"):
                self._annotations()
            else:
                self._ternary()
        body: Optional[N.Block] = None
        body_start = body_end = 0
        if self.at("{"):
            body_start = self.pos
            body = self._block()
            body_end = self.pos
        else:
            self.expect(";")
        return N.FunctionDecl(
            fn_kind,
            name,
            params,
            rtype,
            body,
            mods,
            throws=throws,
            type_params=type_params,
            tok_start=start,
            tok_end=self.pos,
            body_tok_start=body_start,
            body_tok_end=body_end,
        )

    # ---- statements ----

    def _block(self) -> N.Block:
        self.expect("{")
        stmts: list[N.Stmt] = []
        while not self.at("}"):
            if self.cur.kind == "eof":
                raise self.fail("unterminated block")
            stmts.append(self._statement())
        self.expect("}")
        return N.Block(stmts)

    def _statement(self) -> N.Stmt:
        t = self.cur
        if t.text == "{":
            return self._block()
        if t.text == ";":
            self.advance()
            return N.Empty()
        if t.kind == "kw":
            handler = getattr(self, f"_stmt_{t.text}", None)
            if handler is not None:
                return handler()
            if t.text in ("class", "interface", "enum"):
                return N.LocalTypeDecl(self._type_decl())
            if t.text in ("final", "abstract", "static", "strictfp"):
                return self._decl_statement()
        if t.text == "@" and self.peek().kind == "ident":
            return self._decl_statement()
        if t.kind == "ident":
            if self.peek().text == ":" and not self._is_double_colon(self.pos + 1):
                label = self.advance().text
                self.expect(":")
                return N.Labeled(label, self._statement())
            if t.text == "yield" and self._starts_yield_value():
                self.advance()
                value = self._expression()
                self.expect(";")
                return N.Yield(value)
            if t.text == "record" and self.peek().kind == "ident" and self.peek(2).text in ("(", "<"):
                return N.LocalTypeDecl(self._type_decl())
        decl = self._try(self._local_var_decl)
        if decl is not None:
            return decl
        expr = self._expression()
        self.expect(";")
        return N.ExprStmt(expr)

    def _is_double_colon(self, i: int) -> bool:
        return self.toks[i].text == ":" and self.toks[i + 1].text == ":"

    def _starts_yield_value(self) -> bool:
        nxt = self.peek()
        if nxt.kind in ("int", "float", "char", "str", "textblock", "ident"):
            return True
        if nxt.kind == "kw" and nxt.text in ("this", "new", "true", "false", "null", "switch"):
            return True
        return nxt.text in ("!", "~", "-", "+")

    def _decl_statement(self) -> N.Stmt:
        start = self.pos
        mods, anns = self._modifiers()
        if (
            self.at_kw("class")
            or self.at_kw("interface")
            or self.at_kw("enum")
            or (self.at_ident("record") and self.peek().kind == "ident")
        ):
            return N.LocalTypeDecl(self._type_decl_after_mods(mods, anns, start))
        decl = self._try(self._local_var_decl)
        if decl is not None:
            return decl
        raise self.fail("expected a declaration after modifiers")

    def _local_var_decl(self) -> N.LocalVarDecl:
        vtype = self._type_ref()
        if self.cur.kind != "ident":
            raise self.fail("not a variable declaration")
        name = self.advance().text
        if self.cur.text not in ("=", ",", ";", "["):
            raise self.fail("not a variable declaration")
        if self.at("[") and self.peek().text != "]":
            raise self.fail("not a variable declaration")
        declarators = self._var_declarators(name)
        self.expect(";")
        return N.LocalVarDecl(vtype, declarators)

    def _stmt_if(self) -> N.Stmt:
        self.advance()
        self.expect("(")
        cond = self._expression()
        self.expect(")")
        then = self._statement()
        other = None
        if self.at_kw("else"):
            self.advance()
            other = self._statement()
        return N.If(cond, then, other)

    def _stmt_while(self) -> N.Stmt:
        self.advance()
        self.expect("(")
        cond = self._expression()
        self.expect(")")
        return N.While(cond, self._statement())

    def _stmt_do(self) -> N.Stmt:
        self.advance()
        body = self._statement()
        if not self.at_kw("while"):
            raise self.fail("expected 'while' after do body")
        self.advance()
        self.expect("(")
        cond = self._expression()
        self.expect(")")
        self.expect(";")
        return N.DoWhile(body, cond)

    def _stmt_for(self) -> N.Stmt:
        self.advance()
        self.expect("(")
        foreach = self._try(self._foreach_header)
        if foreach is not None:
            vtype, name, iterable = foreach
            body = self._statement()
            return N.ForEach(vtype, name, iterable, body)
        init: list[N.Stmt] = []
        if not self.at(";"):
            decl = self._try(self._local_var_decl_no_semi)
            if decl is not None:
                init.append(decl)
            else:
                init.append(N.ExprStmt(self._expression()))
                while self.accept(","):
                    init.append(N.ExprStmt(self._expression()))
        self.expect(";")
        cond = None if self.at(";") else self._expression()
        self.expect(";")
        update: list[N.Expr] = []
        if not self.at(")"):
            update.append(self._expression())
            while self.accept(","):
                update.append(self._expression())
        self.expect(")")
        return N.ForBasic(init, cond, update, self._statement())

    def _local_var_decl_no_semi(self) -> N.LocalVarDecl:
        self._modifiers()
        vtype = self._type_ref()
        if self.cur.kind != "ident":
            raise self.fail("not a variable declaration")
        name = self.advance().text
        if self.cur.text not in ("=", ",", ";"):
            raise self.fail("not a variable declaration")
        declarators = []
        while True:
            init = None
            if self.accept("="):
                init = self._var_initializer()
            declarators.append((name, init))
            if self.accept(","):
                name = self.expect_ident()
                continue
            break
        return N.LocalVarDecl(vtype, declarators)

    def _foreach_header(self) -> tuple[N.TypeRef, str, N.Expr]:
        self._modifiers()
        vtype = self._type_ref()
        name = self.expect_ident()
        self.expect(":")
        iterable = self._expression()
        self.expect(")")
        return vtype, name, iterable

    def _stmt_switch(self) -> N.Stmt:
        selector, cases = self._switch_rest()
        return N.Switch(selector, cases)

    def _switch_rest(self) -> tuple[N.Expr, list[N.SwitchCase]]:
        self.advance()  # 'switch'
        self.expect("(")
        selector = self._expression()
        self.expect(")")
        self.expect("{")
        cases: list[N.SwitchCase] = []
        while not self.at("}"):
            if self.cur.kind == "eof":
                raise self.fail("unterminated switch")
            labels: list[N.Expr] = []
            if self.at_kw("case"):
                self.advance()
                labels.append(self._case_label())
                while self.accept(","):
                    labels.append(self._case_label())
            elif self.at_kw("default"):
                self.advance()
            else:
                raise self.fail("expected 'case' or 'default'")
            if self.accept("->"):
                stmts: list[N.Stmt] = []
                if self.at("{"):
                    stmts.append(self._block())
                elif self.at_kw("throw"):
                    stmts.append(self._stmt_throw())
                else:
                    stmts.append(N.ExprStmt(self._expression()))
                    self.expect(";")
                cases.append(N.SwitchCase(labels, stmts, arrow=True))
            else:
                self.expect(":")
                stmts = []
                while not (
                    self.at("}") or self.at_kw("case") or self.at_kw("default")
                ):
                    if self.cur.kind == "eof":
                        raise self.fail("unterminated switch")
                    stmts.append(self._statement())
                cases.append(N.SwitchCase(labels, stmts, arrow=False))
        self.expect("}")
        return selector, cases

    def _case_label(self) -> N.Expr:
        # Type patterns (`case Foo f`) fall back to a name + binding.
        pattern = self._try(self._case_type_pattern)
        if pattern is not None:
            return pattern
        return self._ternary()

    def _case_type_pattern(self) -> N.Expr:
        vtype = self._type_ref()
        name = self.expect_ident()
        if self.cur.text not in ("->", ":", ","):
            raise self.fail("not a type pattern")
        return N.InstanceOf(N.Name(name), vtype, binding=name)

    def _stmt_return(self) -> N.Stmt:
        self.advance()
        value = None
        if not self.at(";"):
            value = self._expression()
        self.expect(";")
        return N.Return(value)

    def _stmt_throw(self) -> N.Stmt:
        self.advance()
        value = self._expression()
        self.expect(";")
        return N.Throw(value)

    def _stmt_try(self) -> N.Stmt:
        self.advance()
        resources: list[N.Stmt] = []
        if self.at("("):
            self.advance()
            while not self.at(")"):
                decl = self._try(self._local_var_decl_no_semi)
                if decl is not None:
                    resources.append(decl)
                else:
                    resources.append(N.ExprStmt(self._expression()))
                if not self.accept(";"):
                    break
            self.expect(")")
        body = self._block()
        catches: list[N.Catch] = []
        while self.at_kw("catch"):
            self.advance()
            self.expect("(")
            self._modifiers()
            ctypes = [self._type_ref()]
            while self.accept("|"):
                ctypes.append(self._type_ref())
            cname = self.expect_ident()
            self.expect(")")
            catches.append(N.Catch(ctypes, cname, self._block()))
        finally_block = None
        if self.at_kw("finally"):
            self.advance()
            finally_block = self._block()
        if not catches and finally_block is None and not resources:
            raise self.fail("try without catch, finally, or resources")
        return N.Try(resources, body, catches, finally_block)

    def _stmt_break(self) -> N.Stmt:
        self.advance()
        label = None
        if self.cur.kind == "ident":
            label = self.advance().text
        self.expect(";")
        return N.Break(label)

    def _stmt_continue(self) -> N.Stmt:
        self.advance()
        label = None
        if self.cur.kind == "ident":
            label = self.advance().text
        self.expect(";")
        return N.Continue(label)

    def _stmt_synchronized(self) -> N.Stmt:
        self.advance()
        self.expect("(")
        lock = self._expression()
        self.expect(")")
        return N.Sync(lock, self._block())

    def _stmt_assert(self) -> N.Stmt:
        self.advance()
        cond = self._expression()
        message = None
        if self.accept(":"):
            message = self._expression()
        self.expect(";")
        return N.Assert(cond, message)

    # expression-statement keyword heads
    def _stmt_this(self) -> N.Stmt:
        expr = self._expression()
        self.expect(";")
        return N.ExprStmt(expr)

    _stmt_super = _stmt_this
    _stmt_new = _stmt_this

    # ---- expressions ----

    def _expression(self) -> N.Expr:
        return self._assignment()

    def _assignment(self) -> N.Expr:
        lhs = self._ternary()
        t = self.cur
        if t.text in _ASSIGN_OPS and t.kind == "op":
            op = self.advance().text
            return N.Assign(op, lhs, self._assignment())
        run = self._gt_run()
        if run in (">>=", ">>>="):
            self._consume_run(run)
            return N.Assign(run, lhs, self._assignment())
        return lhs

    def _ternary(self) -> N.Expr:
        cond = self._logical_or()
        if self.at("?"):
            self.advance()
            then = self._expression()
            self.expect(":")
            other = self._lambda_or_ternary()
            return N.Ternary(cond, then, other)
        return cond

    def _lambda_or_ternary(self) -> N.Expr:
        lam = self._try_lambda()
        if lam is not None:
            return lam
        return self._ternary()

    def _binary_level(
        self, ops: tuple[str, ...], next_level: Callable[[], N.Expr]
    ) -> N.Expr:
        left = next_level()
        while self.cur.kind == "op" and self.cur.text in ops:
            op = self.advance().text
            left = N.Binary(op, left, next_level())
        return left

    def _logical_or(self) -> N.Expr:
        return self._binary_level(("||",), self._logical_and)

    def _logical_and(self) -> N.Expr:
        return self._binary_level(("&&",), self._bit_or)

    def _bit_or(self) -> N.Expr:
        return self._binary_level(("|",), self._bit_xor)

    def _bit_xor(self) -> N.Expr:
        return self._binary_level(("^",), self._bit_and)

    def _bit_and(self) -> N.Expr:
        return self._binary_level(("&",), self._equality)

    def _equality(self) -> N.Expr:
        return self._binary_level(("==", "!="), self._relational)

    def _relational(self) -> N.Expr:
        left = self._shift()
        while True:
            if self.at_kw("instanceof"):
                self.advance()
                if self.at_kw("final"):
                    self.advance()
                rtype = self._type_ref()
                binding = None
                if self.cur.kind == "ident":
                    binding = self.advance().text
                left = N.InstanceOf(left, rtype, binding)
                continue
            if self.cur.kind == "op" and self.cur.text in ("<", "<="):
                op = self.advance().text
                left = N.Binary(op, left, self._shift())
                continue
            run = self._gt_run()
            if run == ">":
                self.advance()
                left = N.Binary(">", left, self._shift())
                continue
            if run == ">=":
                self._consume_run(run)
                left = N.Binary(">=", left, self._shift())
                continue
            return left

    def _shift(self) -> N.Expr:
        left = self._additive()
        while True:
            if self.at("<<"):
                self.advance()
                left = N.Binary("<<", left, self._additive())
                continue
            run = self._gt_run()
            if run in (">>", ">>>"):
                self._consume_run(run)
                left = N.Binary(run, left, self._additive())
                continue
            return left

    def _additive(self) -> N.Expr:
        return self._binary_level(("+", "-"), self._multiplicative)

    def _multiplicative(self) -> N.Expr:
        return self._binary_level(("*", "/", "%"), self._unary)

    def _unary(self) -> N.Expr:
        t = self.cur
        if t.kind == "op":
            if t.text in ("++", "--"):
                self.advance()
                return N.Unary(t.text, self._unary())
            if t.text in ("+", "-", "!", "~"):
                self.advance()
                return N.Unary(t.text, self._unary())
        lam = self._try_lambda()
        if lam is not None:
            return lam
        if self.at("("):
            cast = self._try(self._cast)
            if cast is not None:
                return cast
        return self._postfix()

    def _cast(self) -> N.Cast:
        self.expect("(")
        types = [self._type_ref()]
        while self.accept("&"):
            types.append(self._type_ref())
        self.expect(")")
        primitive = all(t.primitive and t.array_dims == 0 for t in types)
        t = self.cur
        ok = (
            t.kind in ("ident", "int", "float", "char", "str", "textblock")
            or (t.kind == "kw" and t.text in ("this", "super", "new", "true", "false", "null", "switch"))
            or (t.kind == "kw" and t.text in PRIMITIVE_TYPES)
            or t.text in ("(", "!", "~")
            or (primitive and t.text in ("+", "-", "++", "--"))
        )
        if not ok:
            raise self.fail("not a cast")
        return N.Cast(types, self._unary())

    def _try_lambda(self) -> Optional[N.Lambda]:
        if self.at_ident() and self.peek().text == _LAMBDA_FOLLOW:
            name = self.advance().text
            self.advance()
            return N.Lambda([(None, name)], self._lambda_body())
        if self.at("("):
            close = self._matching_paren(self.pos)
            if close is not None and self.toks[close + 1].text == _LAMBDA_FOLLOW:
                return self._lambda_with_paren_params()
        return None

    def _matching_paren(self, i: int) -> Optional[int]:
        depth = 0
        while i < len(self.toks):
            text = self.toks[i].text
            if text == "(":
                depth += 1
            elif text == ")":
                depth -= 1
                if depth == 0:
                    return i
            elif self.toks[i].kind == "eof":
                return None
            i += 1
        return None

    def _lambda_with_paren_params(self) -> N.Lambda:
        self.expect("(")
        params: list[tuple[Optional[N.TypeRef], str]] = []
        if not self.at(")"):
            typed = self._try(self._typed_lambda_params)
            if typed is not None:
                params = typed
            else:
                while True:
                    params.append((None, self.expect_ident()))
                    if not self.accept(","):
                        break
        self.expect(")")
        self.expect(_LAMBDA_FOLLOW)
        return N.Lambda(params, self._lambda_body())

    def _typed_lambda_params(self) -> list[tuple[Optional[N.TypeRef], str]]:
        params: list[tuple[Optional[N.TypeRef], str]] = []
        while True:
            self._modifiers()
            ptype = self._type_ref()
            if ptype.name == "var":
                ptype = None  # type: ignore[assignment]
            self.accept("...")
            name = self.expect_ident()
            params.append((ptype, name))
            if not self.accept(","):
                break
        if not self.at(")"):
            raise self.fail("not typed lambda params")
        return params

    def _lambda_body(self) -> N.Expr | N.Block:
        if self.at("{"):
            return self._block()
        return self._expression()

    def _arguments(self) -> list[N.Expr]:
        self.expect("(")
        args: list[N.Expr] = []
        if not self.at(")"):
            args.append(self._expression())
            while self.accept(","):
                args.append(self._expression())
        self.expect(")")
        return args

    def _postfix(self) -> N.Expr:
        expr = self._primary()
        while True:
            if self.at("."):
                nxt = self.peek()
                if nxt.kind == "ident":
                    self.advance()
                    name = self.advance().text
                    if self.at("("):
                        expr = N.MethodCall(expr, name, self._arguments())
                    else:
                        expr = N.FieldAccess(expr, name)
                    continue
                if nxt.kind == "kw" and nxt.text == "new":
                    self.advance(), self.advance()
                    ctype = self._type_ref(allow_dims=False)
                    args = self._arguments()
                    anon = None
                    if self.at("{"):
                        anon = self._class_body("", "class")
                    expr = N.New(ctype, args, anon)
                    continue
                if nxt.kind == "kw" and nxt.text in ("this", "super", "class"):
                    self.advance()
                    word = self.advance().text
                    if word == "class":
                        expr = N.ClassLit(self._expr_as_type(expr))
                    else:
                        expr = N.FieldAccess(expr, word)
                    continue
                if nxt.text == "<":
                    # explicit type args on a call: x.<T>foo()
                    self.advance()
                    self._type_args()
                    name = self.expect_ident()
                    expr = N.MethodCall(expr, name, self._arguments())
                    continue
                raise self.fail(f"unexpected token after '.': {nxt.text!r}")
            if self.at("[") :
                if self.peek().text == "]":
                    # array class literal: String[].class
                    dims = 0
                    while self.at("[") and self.peek().text == "]":
                        self.advance(), self.advance()
                        dims += 1
                    self.expect(".")
                    self.expect("class")
                    ref = self._expr_as_type(expr)
                    ref.array_dims += dims
                    expr = N.ClassLit(ref)
                    continue
                self.advance()
                index = self._expression()
                self.expect("]")
                expr = N.ArrayAccess(expr, index)
                continue
            if self.at("::"):
                self.advance()
                if self.at("<"):
                    self._type_args()
                if self.at_kw("new"):
                    self.advance()
                    expr = N.MethodRef(expr, "new")
                else:
                    expr = N.MethodRef(expr, self.expect_ident())
                continue
            if self.cur.kind == "op" and self.cur.text in ("++", "--"):
                op = self.advance().text
                expr = N.Unary(op, expr, postfix=True)
                continue
            return expr

    def _expr_as_type(self, expr: N.Expr) -> N.TypeRef:
        if isinstance(expr, N.Name):
            return N.TypeRef(expr.ident)
        if isinstance(expr, N.FieldAccess):
            return N.TypeRef(expr.name)
        if isinstance(expr, N.ClassLit):
            return expr.type
        raise self.fail("expected a type before '.class'")

    def _primary(self) -> N.Expr:
        t = self.cur
        if t.kind in ("int", "float", "char", "str", "textblock"):
            self.advance()
            return N.Literal(t.kind, t.text)
        if t.kind == "kw":
            if t.text in ("true", "false"):
                self.advance()
                return N.Literal("bool", t.text)
            if t.text == "null":
                self.advance()
                return N.Literal("null", t.text)
            if t.text == "this":
                self.advance()
                if self.at("("):
                    return N.CtorCall("this", self._arguments())
                return N.This()
            if t.text == "super":
                self.advance()
                if self.at("("):
                    return N.CtorCall("super", self._arguments())
                return N.Super()
            if t.text == "new":
                return self._creation()
            if t.text == "switch":
                selector, cases = self._switch_rest()
                return N.SwitchExpr(selector, cases)
            if t.text in PRIMITIVE_TYPES or t.text == "void":
                # primitive class literal: int.class, int[].class
                self.advance()
                dims = 0
                while self.at("[") and self.peek().text == "]":
                    self.advance(), self.advance()
                    dims += 1
                if self.at("::"):  # int[]::new
                    self.advance()
                    self.expect("new")
                    return N.MethodRef(N.TypeRef(t.text, primitive=True, array_dims=dims), "new")
                self.expect(".")
                self.expect("class")
                return N.ClassLit(N.TypeRef(t.text, primitive=True, array_dims=dims))
        if t.text == "(":
            self.advance()
            inner = self._expression()
            self.expect(")")
            return inner
        if t.kind == "ident":
            name = self.advance().text
            if self.at("("):
                return N.MethodCall(None, name, self._arguments())
            return N.Name(name)
        raise self.fail(f"unexpected token in expression: {t.text!r}")

    def _creation(self) -> N.Expr:
        self.expect("new")
        if self.at("<"):
            self._type_args()
        ctype = self._type_ref(allow_dims=False)
        if self.at("["):
            dim_exprs: list[N.Expr] = []
            extra = 0
            while self.at("["):
                self.advance()
                if self.at("]"):
                    self.advance()
                    extra += 1
                else:
                    dim_exprs.append(self._expression())
                    self.expect("]")
            init = None
            if self.at("{"):
                init = self._array_init()
            return N.NewArray(ctype, dim_exprs, extra, init)
        args = self._arguments() if self.at("(") else []
        anon = None
        if self.at("{"):
            anon = self._class_body("", "class")
        return N.New(ctype, args, anon)
