"""AST for the string-transformation DSL.

A program is a concatenation of expressions. Each expression is one of:
a substring extraction (``SubStr``/``GetSpan``), a nesting function
(``GetToken``, ``ToCase``, ...), a composition of a nesting function with
another nesting function or a substring (``Compose``), or a one-character
constant (``ConstStr``).

All nodes are immutable and validate their parameters against the grammar
domains at construction time, so a ``Program`` that exists is well-formed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

# Grammar domains. Positions index characters 1-based from either end (0 is
# excluded); indexes select regex matches, again from either end.
POSITION_MIN, POSITION_MAX = -100, 100
INDEX_MIN, INDEX_MAX = -5, 5
MAX_EXPRESSIONS = 10

# The 20 delimiter characters plus space.
DELIMITERS = "&,.?!@()[]%{}/:;$#\"' "

# The 95 printable ASCII characters (0x20..0x7E); also the model's character
# alphabet and the ConstStr domain.
PRINTABLE = "".join(chr(c) for c in range(0x20, 0x7F))


class TokenType(enum.Enum):
    NUMBER = "Number"
    WORD = "Word"
    ALPHANUM = "Alphanum"
    ALL_CAPS = "AllCaps"
    PROP_CASE = "PropCase"
    LOWER = "Lower"
    DIGIT = "Digit"
    CHAR = "Char"


class Case(enum.Enum):
    PROPER = "Proper"
    ALL_CAPS = "AllCaps"
    LOWER = "Lower"


class Boundary(enum.Enum):
    START = "Start"
    END = "End"


# A regex operand is either a token class or a single delimiter character.
Regex = Union[TokenType, str]


def _check_regex(r: Regex, where: str) -> None:
    if isinstance(r, TokenType):
        return
    if isinstance(r, str) and len(r) == 1 and r in DELIMITERS:
        return
    raise ValueError(f"{where}: regex operand must be a TokenType or one of {DELIMITERS!r}, got {r!r}")


def _check_position(k: int, where: str) -> None:
    if not isinstance(k, int) or k == 0 or not POSITION_MIN <= k <= POSITION_MAX:
        raise ValueError(f"{where}: position must be in [{POSITION_MIN},-1] or [1,{POSITION_MAX}], got {k!r}")


def _check_index(i: int, where: str) -> None:
    if not isinstance(i, int) or i == 0 or not INDEX_MIN <= i <= INDEX_MAX:
        raise ValueError(f"{where}: index must be in [{INDEX_MIN},-1] or [1,{INDEX_MAX}], got {i!r}")


def _check_delimiter(d: str, where: str) -> None:
    if not (isinstance(d, str) and len(d) == 1 and d in DELIMITERS):
        raise ValueError(f"{where}: delimiter must be one of {DELIMITERS!r}, got {d!r}")


@dataclass(frozen=True)
class SubStr:
    """Characters between two 1-based positions, inclusive; negative counts from the end."""

    k1: int
    k2: int

    def __post_init__(self) -> None:
        _check_position(self.k1, "SubStr")
        _check_position(self.k2, "SubStr")


@dataclass(frozen=True)
class GetSpan:
    """Characters between two match boundaries: the ``y``-side gap of the |i|-th match of ``r``."""

    r1: Regex
    i1: int
    y1: Boundary
    r2: Regex
    i2: int
    y2: Boundary

    def __post_init__(self) -> None:
        _check_regex(self.r1, "GetSpan")
        _check_index(self.i1, "GetSpan")
        _check_regex(self.r2, "GetSpan")
        _check_index(self.i2, "GetSpan")
        if not isinstance(self.y1, Boundary) or not isinstance(self.y2, Boundary):
            raise ValueError("GetSpan: boundaries must be Boundary.START or Boundary.END")


@dataclass(frozen=True)
class GetToken:
    """Text of the |i|-th match of a token class, counted from the end when i < 0."""

    ttype: TokenType
    index: int

    def __post_init__(self) -> None:
        if not isinstance(self.ttype, TokenType):
            raise ValueError(f"GetToken: expected TokenType, got {self.ttype!r}")
        _check_index(self.index, "GetToken")


@dataclass(frozen=True)
class ToCase:
    case: Case

    def __post_init__(self) -> None:
        if not isinstance(self.case, Case):
            raise ValueError(f"ToCase: expected Case, got {self.case!r}")


@dataclass(frozen=True)
class Replace:
    """Replace every occurrence of one delimiter with another."""

    old: str
    new: str

    def __post_init__(self) -> None:
        _check_delimiter(self.old, "Replace")
        _check_delimiter(self.new, "Replace")


@dataclass(frozen=True)
class Trim:
    """Strip leading/trailing whitespace."""


@dataclass(frozen=True)
class GetUpto:
    """Prefix of the input up to (and including) the first match of a regex."""

    regex: Regex

    def __post_init__(self) -> None:
        _check_regex(self.regex, "GetUpto")


@dataclass(frozen=True)
class GetFrom:
    """Suffix of the input after the last match of a regex."""

    regex: Regex

    def __post_init__(self) -> None:
        _check_regex(self.regex, "GetFrom")


@dataclass(frozen=True)
class GetFirst:
    """Concatenation of the first ``count`` matches of a token class; count must be positive."""

    ttype: TokenType
    count: int

    def __post_init__(self) -> None:
        if not isinstance(self.ttype, TokenType):
            raise ValueError(f"GetFirst: expected TokenType, got {self.ttype!r}")
        if not isinstance(self.count, int) or not 1 <= self.count <= INDEX_MAX:
            raise ValueError(f"GetFirst: count must be in [1,{INDEX_MAX}], got {self.count!r}")


@dataclass(frozen=True)
class GetAll:
    """Concatenation of every match of a token class."""

    ttype: TokenType

    def __post_init__(self) -> None:
        if not isinstance(self.ttype, TokenType):
            raise ValueError(f"GetAll: expected TokenType, got {self.ttype!r}")


Nesting = Union[GetToken, ToCase, Replace, Trim, GetUpto, GetFrom, GetFirst, GetAll]
Substring = Union[SubStr, GetSpan]

NESTING_CLASSES = (GetToken, ToCase, Replace, Trim, GetUpto, GetFrom, GetFirst, GetAll)
SUBSTRING_CLASSES = (SubStr, GetSpan)


@dataclass(frozen=True)
class ConstStr:
    """A single printable character constant."""

    char: str

    def __post_init__(self) -> None:
        if not (isinstance(self.char, str) and len(self.char) == 1 and self.char in PRINTABLE):
            raise ValueError(f"ConstStr: expected one printable ASCII character, got {self.char!r}")


@dataclass(frozen=True)
class Compose:
    """Apply ``outer`` to the result of ``inner`` (grammar forms n1(n2) and n(f)).

    Nesting depth is capped at two, so ``inner`` is a plain nesting function
    or a substring extraction, never another composition.
    """

    outer: Nesting
    inner: Union[Nesting, Substring]

    def __post_init__(self) -> None:
        if not isinstance(self.outer, NESTING_CLASSES):
            raise ValueError(f"Compose: outer must be a nesting function, got {self.outer!r}")
        if not isinstance(self.inner, NESTING_CLASSES + SUBSTRING_CLASSES):
            raise ValueError(f"Compose: inner must be a nesting function or substring, got {self.inner!r}")


Expression = Union[Substring, Nesting, Compose, ConstStr]


@dataclass(frozen=True)
class Program:
    """A concatenation of 1..10 expressions, evaluated left to right."""

    expressions: tuple[Expression, ...]

    def __post_init__(self) -> None:
        exprs = tuple(self.expressions)
        object.__setattr__(self, "expressions", exprs)
        if not 1 <= len(exprs) <= MAX_EXPRESSIONS:
            raise ValueError(f"Program: expected 1..{MAX_EXPRESSIONS} expressions, got {len(exprs)}")
        allowed = NESTING_CLASSES + SUBSTRING_CLASSES + (Compose, ConstStr)
        for e in exprs:
            if not isinstance(e, allowed):
                raise ValueError(f"Program: not an expression: {e!r}")

    def __len__(self) -> int:
        return len(self.expressions)


def program(*expressions: Expression) -> Program:
    """Convenience constructor: ``program(e1, e2, ...)``."""
    return Program(tuple(expressions))
