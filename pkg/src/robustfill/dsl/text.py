"""Round-trip text format for programs.

Expressions are joined with `` | `` (shorthand for top-level concatenation),
parameters are named constants or quoted single characters, and composition
is written as an extra trailing argument:

    GetToken(Word, -1) | ConstStr(',') | ConstStr(' ') | ToCase(Proper, GetToken(Word, 1))

``parse_program`` accepts this form plus the applied style
``ToCase(Proper)(GetToken(Word, 1))`` and the alias ``Alpha`` for ``Word``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ast import (
    Boundary,
    Case,
    Compose,
    ConstStr,
    Expression,
    GetAll,
    GetFirst,
    GetFrom,
    GetSpan,
    GetToken,
    GetUpto,
    Program,
    Regex,
    Replace,
    SubStr,
    ToCase,
    TokenType,
    Trim,
)

_TOKEN_TYPE_NAMES = {t.value: t for t in TokenType}
_TOKEN_TYPE_NAMES["Alpha"] = TokenType.WORD  # legacy alias seen in the wild
_CASE_NAMES = {c.value: c for c in Case}
_BOUNDARY_NAMES = {b.value: b for b in Boundary}


class ParseError(ValueError):
    """Program-text parse failure with 1-based line/column location."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


def _quote(ch: str) -> str:
    return f'"{ch}"' if ch == "'" else f"'{ch}'"


def _format_regex(r: Regex) -> str:
    return r.value if isinstance(r, TokenType) else _quote(r)


def format_expression(e: Expression) -> str:
    if isinstance(e, ConstStr):
        return f"ConstStr({_quote(e.char)})"
    if isinstance(e, SubStr):
        return f"SubStr({e.k1}, {e.k2})"
    if isinstance(e, GetSpan):
        return (
            f"GetSpan({_format_regex(e.r1)}, {e.i1}, {e.y1.value}, "
            f"{_format_regex(e.r2)}, {e.i2}, {e.y2.value})"
        )
    if isinstance(e, Compose):
        outer = format_expression(e.outer)
        inner = format_expression(e.inner)
        if outer.endswith("()"):  # Trim() composed: Trim(inner)
            return f"{outer[:-2]}({inner})"
        return f"{outer[:-1]}, {inner})"
    if isinstance(e, GetToken):
        return f"GetToken({e.ttype.value}, {e.index})"
    if isinstance(e, ToCase):
        return f"ToCase({e.case.value})"
    if isinstance(e, Replace):
        return f"Replace({_quote(e.old)}, {_quote(e.new)})"
    if isinstance(e, Trim):
        return "Trim()"
    if isinstance(e, GetUpto):
        return f"GetUpto({_format_regex(e.regex)})"
    if isinstance(e, GetFrom):
        return f"GetFrom({_format_regex(e.regex)})"
    if isinstance(e, GetFirst):
        return f"GetFirst({e.ttype.value}, {e.count})"
    if isinstance(e, GetAll):
        return f"GetAll({e.ttype.value})"
    raise ValueError(f"cannot format: {e!r}")


def format_program(p: Program) -> str:
    return " | ".join(format_expression(e) for e in p.expressions)


@dataclass(frozen=True)
class _Tok:
    kind: str  # name | int | char | punct | eof
    value: str
    line: int
    column: int


def _lex(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        start_col = col
        if ch.isalpha():
            j = i
            while j < n and text[j].isalnum():
                j += 1
            toks.append(_Tok("name", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch.isdigit() or (ch == "-" and i + 1 < n and text[i + 1].isdigit()):
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            toks.append(_Tok("int", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch in "'\"":
            if i + 2 < n and text[i + 2] == ch and text[i + 1] != "\n":
                toks.append(_Tok("char", text[i + 1], line, start_col))
                i += 3
                col += 3
                continue
            raise ParseError("unterminated character literal", line, start_col)
        if ch in "(),|":
            toks.append(_Tok("punct", ch, line, start_col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, start_col)
    toks.append(_Tok("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _lex(text)
        self.pos = 0

    def peek(self) -> _Tok:
        return self.toks[self.pos]

    def next(self) -> _Tok:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def fail(self, message: str, tok: _Tok | None = None) -> ParseError:
        tok = tok or self.peek()
        return ParseError(message, tok.line, tok.column)

    def expect_punct(self, value: str) -> _Tok:
        t = self.next()
        if t.kind != "punct" or t.value != value:
            raise self.fail(f"expected {value!r}, got {t.value!r}", t)
        return t

    def parse_program(self) -> Program:
        exprs = [self.parse_expression()]
        while self.peek().kind == "punct" and self.peek().value == "|":
            self.next()
            exprs.append(self.parse_expression())
        t = self.peek()
        if t.kind != "eof":
            raise self.fail(f"unexpected trailing input {t.value!r}", t)
        try:
            return Program(tuple(exprs))
        except ValueError as err:
            raise ParseError(str(err), 1, 1) from None

    def _int(self) -> tuple[int, _Tok]:
        t = self.next()
        if t.kind != "int":
            raise self.fail(f"expected an integer, got {t.value!r}", t)
        return int(t.value), t

    def _char(self) -> tuple[str, _Tok]:
        t = self.next()
        if t.kind != "char":
            raise self.fail(f"expected a quoted character, got {t.value!r}", t)
        return t.value, t

    def _token_type(self) -> TokenType:
        t = self.next()
        if t.kind != "name" or t.value not in _TOKEN_TYPE_NAMES:
            raise self.fail(f"expected a token type, got {t.value!r}", t)
        return _TOKEN_TYPE_NAMES[t.value]

    def _case(self) -> Case:
        t = self.next()
        if t.kind != "name" or t.value not in _CASE_NAMES:
            raise self.fail(f"expected a case (Proper/AllCaps/Lower), got {t.value!r}", t)
        return _CASE_NAMES[t.value]

    def _boundary(self) -> Boundary:
        t = self.next()
        if t.kind != "name" or t.value not in _BOUNDARY_NAMES:
            raise self.fail(f"expected Start or End, got {t.value!r}", t)
        return _BOUNDARY_NAMES[t.value]

    def _regex(self) -> Regex:
        t = self.peek()
        if t.kind == "char":
            return self._char()[0]
        if t.kind == "name" and t.value in _TOKEN_TYPE_NAMES:
            self.next()
            return _TOKEN_TYPE_NAMES[t.value]
        raise self.fail(f"expected a token type or quoted delimiter, got {t.value!r}", t)

    def _build(self, name_tok: _Tok) -> Expression:
        """Parse the parameter list of ``name`` (open paren already consumed)."""
        name = name_tok.value
        try:
            if name == "ConstStr":
                ch, _ = self._char()
                self.expect_punct(")")
                return ConstStr(ch)
            if name == "SubStr":
                k1, _ = self._int()
                self.expect_punct(",")
                k2, _ = self._int()
                self.expect_punct(")")
                return SubStr(k1, k2)
            if name == "GetSpan":
                r1 = self._regex()
                self.expect_punct(",")
                i1, _ = self._int()
                self.expect_punct(",")
                y1 = self._boundary()
                self.expect_punct(",")
                r2 = self._regex()
                self.expect_punct(",")
                i2, _ = self._int()
                self.expect_punct(",")
                y2 = self._boundary()
                self.expect_punct(")")
                return GetSpan(r1, i1, y1, r2, i2, y2)
            if name == "GetToken":
                tt = self._token_type()
                self.expect_punct(",")
                i, _ = self._int()
                return self._finish_nesting(GetToken(tt, i))
            if name == "ToCase":
                case = self._case()
                return self._finish_nesting(ToCase(case))
            if name == "Replace":
                d1, _ = self._char()
                self.expect_punct(",")
                d2, _ = self._char()
                return self._finish_nesting(Replace(d1, d2))
            if name == "Trim":
                t = self.peek()
                if t.kind == "punct" and t.value == ")":
                    self.next()
                    return self._maybe_applied(Trim())
                inner = self.parse_expression()
                self.expect_punct(")")
                return Compose(Trim(), inner)  # type: ignore[arg-type]
            if name == "GetUpto":
                r = self._regex()
                return self._finish_nesting(GetUpto(r))
            if name == "GetFrom":
                r = self._regex()
                return self._finish_nesting(GetFrom(r))
            if name == "GetFirst":
                tt = self._token_type()
                self.expect_punct(",")
                i, _ = self._int()
                return self._finish_nesting(GetFirst(tt, i))
            if name == "GetAll":
                tt = self._token_type()
                return self._finish_nesting(GetAll(tt))
        except ValueError as err:
            if isinstance(err, ParseError):
                raise
            raise ParseError(str(err), name_tok.line, name_tok.column) from None
        raise self.fail(f"unknown function {name!r}", name_tok)

    def _finish_nesting(self, node):
        """After a nesting function's own parameters: ``)`` or ``, <inner>)``."""
        t = self.next()
        if t.kind == "punct" and t.value == ")":
            return self._maybe_applied(node)
        if t.kind == "punct" and t.value == ",":
            inner = self.parse_expression()
            self.expect_punct(")")
            return Compose(node, inner)  # type: ignore[arg-type]
        raise self.fail(f"expected ')' or ', <inner>', got {t.value!r}", t)

    def _maybe_applied(self, node):
        # Applied style: ToCase(Lower)(SubStr(1, 3))
        t = self.peek()
        if t.kind == "punct" and t.value == "(":
            self.next()
            inner = self.parse_expression()
            self.expect_punct(")")
            return Compose(node, inner)  # type: ignore[arg-type]
        return node

    def parse_expression(self) -> Expression:
        t = self.next()
        if t.kind != "name":
            raise self.fail(f"expected a function name, got {t.value!r}", t)
        self.expect_punct("(")
        expr = self._build(t)
        if isinstance(expr, Compose) and isinstance(expr.inner, Compose):
            raise self.fail("nesting depth exceeds 2", t)
        return expr


def parse_program(text: str) -> Program:
    """Parse the `` | ``-joined text form back into a Program."""
    return _Parser(text).parse_program()
