"""Configurable DSL domains.

``DslConfig`` pins which constructors and parameter values are in play; the
vocabulary, program sampler, and search are all driven by one config so a
restricted build (small domains for fast training or exhaustive testing)
stays consistent end to end. ``full_config()`` is the complete grammar;
``toy_config()`` is a deliberately small fragment that a desk-scale model
can learn in minutes.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .ast import (
    DELIMITERS,
    INDEX_MAX,
    MAX_EXPRESSIONS,
    POSITION_MAX,
    PRINTABLE,
    Case,
    Compose,
    ConstStr,
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

ALL_NESTING_KINDS = (
    "GetToken",
    "ToCase",
    "Replace",
    "Trim",
    "GetUpto",
    "GetFrom",
    "GetFirst",
    "GetAll",
)
ALL_SUBSTRING_KINDS = ("SubStr", "GetSpan")


def _full_positions() -> tuple[int, ...]:
    return tuple(k for k in range(-POSITION_MAX, POSITION_MAX + 1) if k != 0)


def _full_indexes() -> tuple[int, ...]:
    return tuple(i for i in range(-INDEX_MAX, INDEX_MAX + 1) if i != 0)


@dataclass(frozen=True)
class DslConfig:
    """Active grammar fragment: constructors and parameter domains."""

    token_types: tuple[TokenType, ...] = tuple(TokenType)
    delimiters: str = DELIMITERS
    cases: tuple[Case, ...] = tuple(Case)
    positions: tuple[int, ...] = field(default_factory=_full_positions)
    indexes: tuple[int, ...] = field(default_factory=_full_indexes)
    getfirst_counts: tuple[int, ...] = tuple(range(1, INDEX_MAX + 1))
    const_chars: str = PRINTABLE
    max_expressions: int = MAX_EXPRESSIONS
    substring_kinds: tuple[str, ...] = ALL_SUBSTRING_KINDS
    nesting_kinds: tuple[str, ...] = ALL_NESTING_KINDS
    allow_const: bool = True
    allow_compose: bool = True

    def __post_init__(self) -> None:
        if not 1 <= self.max_expressions <= MAX_EXPRESSIONS:
            raise ValueError(f"max_expressions must be in [1,{MAX_EXPRESSIONS}]")
        for kind in self.substring_kinds:
            if kind not in ALL_SUBSTRING_KINDS:
                raise ValueError(f"unknown substring kind {kind!r}")
        for kind in self.nesting_kinds:
            if kind not in ALL_NESTING_KINDS:
                raise ValueError(f"unknown nesting kind {kind!r}")
        if not (self.substring_kinds or self.nesting_kinds or self.allow_const):
            raise ValueError("config admits no expressions at all")

    @property
    def regexes(self) -> tuple[Regex, ...]:
        return tuple(self.token_types) + tuple(self.delimiters)

    def allows_regex(self, r: Regex) -> bool:
        if isinstance(r, TokenType):
            return r in self.token_types
        return r in self.delimiters

    def allows_expression(self, e, top_level: bool = True) -> bool:
        """Whether the expression draws only on this config's constructors/domains."""
        if isinstance(e, ConstStr):
            return self.allow_const and e.char in self.const_chars
        if isinstance(e, Compose):
            return (
                self.allow_compose
                and top_level
                and self.allows_expression(e.outer, top_level=False)
                and self.allows_expression(e.inner, top_level=False)
            )
        if isinstance(e, SubStr):
            return "SubStr" in self.substring_kinds and e.k1 in self.positions and e.k2 in self.positions
        if isinstance(e, GetSpan):
            return (
                "GetSpan" in self.substring_kinds
                and self.allows_regex(e.r1)
                and self.allows_regex(e.r2)
                and e.i1 in self.indexes
                and e.i2 in self.indexes
            )
        if isinstance(e, GetToken):
            return "GetToken" in self.nesting_kinds and e.ttype in self.token_types and e.index in self.indexes
        if isinstance(e, ToCase):
            return "ToCase" in self.nesting_kinds and e.case in self.cases
        if isinstance(e, Replace):
            return "Replace" in self.nesting_kinds and e.old in self.delimiters and e.new in self.delimiters
        if isinstance(e, Trim):
            return "Trim" in self.nesting_kinds
        if isinstance(e, GetUpto):
            return "GetUpto" in self.nesting_kinds and self.allows_regex(e.regex)
        if isinstance(e, GetFrom):
            return "GetFrom" in self.nesting_kinds and self.allows_regex(e.regex)
        if isinstance(e, GetFirst):
            return (
                "GetFirst" in self.nesting_kinds
                and e.ttype in self.token_types
                and e.count in self.getfirst_counts
            )
        if isinstance(e, GetAll):
            return "GetAll" in self.nesting_kinds and e.ttype in self.token_types
        return False

    def allows_program(self, p: Program) -> bool:
        return len(p) <= self.max_expressions and all(self.allows_expression(e) for e in p.expressions)


def full_config() -> DslConfig:
    """The complete grammar with its published parameter domains."""
    return DslConfig()


def toy_config() -> DslConfig:
    """A small fragment (SubStr, ConstStr, GetToken over three token types,
    ToCase, and their compositions) sized so a desk-scale model can learn it
    in minutes and searches stay exhaustive."""
    return DslConfig(
        token_types=(TokenType.WORD, TokenType.NUMBER, TokenType.ALL_CAPS),
        delimiters="",
        cases=tuple(Case),
        positions=tuple(k for k in range(-3, 4) if k != 0),
        indexes=(-2, -1, 1, 2),
        getfirst_counts=(),
        const_chars=" ,.-:@01Ab",
        max_expressions=2,
        substring_kinds=("SubStr",),
        nesting_kinds=("GetToken", "ToCase"),
        allow_const=True,
        allow_compose=True,
    )


def restrict(config: DslConfig, **changes) -> DslConfig:
    """Functional update helper (thin wrapper over dataclasses.replace)."""
    return replace(config, **changes)
