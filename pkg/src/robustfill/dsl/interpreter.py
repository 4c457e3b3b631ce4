"""Interpreter for the string-transformation DSL.

Evaluation is pure: a (program, input) pair always yields the same output.
Any failure (a referenced match that does not exist, an inverted or
out-of-bounds range, an empty result) raises :class:`EvalError`; empty
strings are never produced as expression values.
"""

from __future__ import annotations

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
    Replace,
    SubStr,
    ToCase,
    Trim,
)
from .matchers import Match, match_token


class EvalError(Exception):
    """Raised when an expression cannot be evaluated on an input string.

    ``expression_index`` is set by :func:`eval_program` to the position of
    the failing expression.
    """

    def __init__(self, message: str, expression_index: int | None = None):
        super().__init__(message)
        self.message = message
        self.expression_index = expression_index


def _resolve_match(matches: list[Match], i: int, what: str) -> Match:
    # i > 0 counts from the beginning, i < 0 from the end.
    n = len(matches)
    pos = i - 1 if i > 0 else n + i
    if not 0 <= pos < n:
        raise EvalError(f"{what}: match {i} does not exist ({n} matches)")
    return matches[pos]


def _resolve_position(k: int, length: int) -> int:
    # 1-based inclusive position; -1 addresses the last character.
    return k if k > 0 else length + k + 1


def _non_empty(result: str, what: str) -> str:
    if result == "":
        raise EvalError(f"{what}: empty result")
    return result


def _to_proper(v: str) -> str:
    # Uppercase the first letter of every letter run, lowercase the rest.
    out = []
    prev_alpha = False
    for ch in v:
        if ch.isalpha():
            out.append(ch.lower() if prev_alpha else ch.upper())
            prev_alpha = True
        else:
            out.append(ch)
            prev_alpha = False
    return "".join(out)


def eval_expression(e: Expression, v: str) -> str:
    """Evaluate a single expression on input ``v``. Raises EvalError on failure."""
    if isinstance(e, ConstStr):
        return e.char

    if isinstance(e, Compose):
        inner = eval_expression(e.inner, v)
        return eval_expression(e.outer, inner)

    if isinstance(e, SubStr):
        n = len(v)
        p1 = _resolve_position(e.k1, n)
        p2 = _resolve_position(e.k2, n)
        if not (1 <= p1 <= p2 <= n):
            raise EvalError(f"SubStr({e.k1},{e.k2}): range [{p1},{p2}] invalid for length {n}")
        return v[p1 - 1 : p2]

    if isinstance(e, GetSpan):
        m1 = _resolve_match(match_token(e.r1, v), e.i1, "GetSpan")
        m2 = _resolve_match(match_token(e.r2, v), e.i2, "GetSpan")
        g1 = m1.start if e.y1 is Boundary.START else m1.end
        g2 = m2.start if e.y2 is Boundary.START else m2.end
        if g1 >= g2:
            raise EvalError(f"GetSpan: empty span (gaps {g1} >= {g2})")
        return v[g1:g2]

    if isinstance(e, GetToken):
        return _resolve_match(match_token(e.ttype, v), e.index, "GetToken").text

    if isinstance(e, GetUpto):
        matches = match_token(e.regex, v)
        if not matches:
            raise EvalError("GetUpto: no match")
        return v[: matches[0].end]

    if isinstance(e, GetFrom):
        matches = match_token(e.regex, v)
        if not matches:
            raise EvalError("GetFrom: no match")
        return _non_empty(v[matches[-1].end :], "GetFrom")

    if isinstance(e, GetFirst):
        matches = match_token(e.ttype, v)
        if len(matches) < e.count:
            raise EvalError(f"GetFirst: needs {e.count} matches, found {len(matches)}")
        return "".join(m.text for m in matches[: e.count])

    if isinstance(e, GetAll):
        matches = match_token(e.ttype, v)
        if not matches:
            raise EvalError("GetAll: no match")
        return "".join(m.text for m in matches)

    if isinstance(e, ToCase):
        if e.case is Case.PROPER:
            return _non_empty(_to_proper(v), "ToCase")
        if e.case is Case.ALL_CAPS:
            return _non_empty(v.upper(), "ToCase")
        return _non_empty(v.lower(), "ToCase")

    if isinstance(e, Trim):
        return _non_empty(v.strip(), "Trim")

    if isinstance(e, Replace):
        return _non_empty(v.replace(e.old, e.new), "Replace")

    raise EvalError(f"unknown expression: {e!r}")


def eval_program(p: Program, v: str) -> str:
    """Concatenation of the program's expressions evaluated on ``v``.

    Raises EvalError (with ``expression_index`` set) if any expression fails.
    """
    parts = []
    for idx, e in enumerate(p.expressions):
        try:
            parts.append(eval_expression(e, v))
        except EvalError as err:
            raise EvalError(f"expression {idx}: {err.message}", expression_index=idx) from None
    return "".join(parts)


def eval_prefix(p: Program, n_expressions: int, v: str) -> str:
    """Evaluate only the first ``n_expressions`` expressions (prefix-execution for pruned search)."""
    return eval_program(Program(p.expressions[:n_expressions]), v)
