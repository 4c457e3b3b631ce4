"""Regex-token matching: the fixed token classes and delimiter matching.

Only these fixed classes exist; there is no general regex engine. Matches
are the non-overlapping, left-to-right, maximal occurrences of a class.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

from .ast import DELIMITERS, Regex, TokenType

TOKEN_PATTERNS: dict[TokenType, str] = {
    TokenType.NUMBER: r"[0-9]+",
    TokenType.DIGIT: r"[0-9]",
    TokenType.WORD: r"[A-Za-z]+",
    TokenType.ALPHANUM: r"[A-Za-z0-9]+",
    TokenType.ALL_CAPS: r"[A-Z]+",
    TokenType.PROP_CASE: r"[A-Z][a-z]+",
    TokenType.LOWER: r"[a-z]+",
    TokenType.CHAR: r"[A-Za-z0-9]",
}

_COMPILED: dict[TokenType, re.Pattern[str]] = {t: re.compile(p) for t, p in TOKEN_PATTERNS.items()}


@dataclass(frozen=True)
class Match:
    """One occurrence of a regex token: gap positions and the matched text.

    ``start`` and ``end`` are 0-based gap indices (0 = before the first
    character), so ``text == v[start:end]`` and 0 <= start < end <= len(v).
    """

    start: int
    end: int
    text: str


@lru_cache(maxsize=None)
def _delimiter_pattern(d: str) -> re.Pattern[str]:
    return re.compile(re.escape(d))


def match_token(regex: Regex, v: str) -> list[Match]:
    """All non-overlapping maximal matches of a token class or delimiter in ``v``.

    Returns matches ordered by start position; an empty list when nothing
    matches (including on the empty string).
    """
    if isinstance(regex, TokenType):
        pattern = _COMPILED[regex]
    else:
        if not (isinstance(regex, str) and len(regex) == 1 and regex in DELIMITERS):
            raise ValueError(f"match_token: not a token class or delimiter: {regex!r}")
        pattern = _delimiter_pattern(regex)
    return [Match(m.start(), m.end(), m.group()) for m in pattern.finditer(v)]


def count_matches(regex: Regex, v: str) -> int:
    return len(match_token(regex, v))
