"""Input requirements derived from a program.

For each operand of a sampled program we compute requirements an input
string must meet so that evaluation cannot fail: minimum match counts,
a length window, tail/whitespace structure, and span-viability checks for
``GetSpan``. Requirements are declarative (checkable with ``match_token``
alone) except for composed expressions, which carry an evaluation probe —
outer-over-inner needs are not expressible on the raw input in general.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..dsl import (
    Boundary,
    Compose,
    ConstStr,
    EvalError,
    Expression,
    GetAll,
    GetFirst,
    GetFrom,
    GetSpan,
    GetToken,
    GetUpto,
    Program,
    Regex,
    SubStr,
    TokenType,
    Trim,
    eval_expression,
    match_token,
)

MAX_INPUT_LENGTH = 100  # hard cap; sampler configs usually use far less


class UnsatisfiableConstraints(ValueError):
    """The program requires contradictory input structure."""


@dataclass(frozen=True)
class SpanRequirement:
    """The resolved gap positions of a GetSpan must form a non-empty span."""

    r1: Regex
    i1: int
    y1: Boundary
    r2: Regex
    i2: int
    y2: Boundary

    def satisfied_by(self, s: str) -> bool:
        ms1 = match_token(self.r1, s)
        ms2 = match_token(self.r2, s)
        o1 = self.i1 - 1 if self.i1 > 0 else len(ms1) + self.i1
        o2 = self.i2 - 1 if self.i2 > 0 else len(ms2) + self.i2
        if not (0 <= o1 < len(ms1) and 0 <= o2 < len(ms2)):
            return False
        g1 = ms1[o1].start if self.y1 is Boundary.START else ms1[o1].end
        g2 = ms2[o2].start if self.y2 is Boundary.START else ms2[o2].end
        return g1 < g2


@dataclass
class InputConstraints:
    """Everything an input must satisfy for the source program to evaluate."""

    token_counts: dict[Regex, int] = field(default_factory=dict)
    min_length: int = 1
    max_length: int | None = None
    needs_nonspace: bool = False
    tails_after: frozenset = frozenset()  # regexes that need >=1 char after their last match
    spans: tuple[SpanRequirement, ...] = ()
    probes: tuple[Expression, ...] = ()  # composed expressions checked by evaluation
    # generation hints, not enforced by satisfied_by:
    exact_counts: dict[Regex, int] = field(default_factory=dict)

    @property
    def type_counts(self) -> dict[TokenType, int]:
        return {r: c for r, c in self.token_counts.items() if isinstance(r, TokenType)}

    @property
    def delimiter_counts(self) -> dict[str, int]:
        return {r: c for r, c in self.token_counts.items() if isinstance(r, str)}

    def require_count(self, regex: Regex, count: int) -> None:
        if count > self.token_counts.get(regex, 0):
            self.token_counts[regex] = count

    def require_min_length(self, n: int) -> None:
        if n > self.min_length:
            self.min_length = n

    def require_max_length(self, n: int) -> None:
        if self.max_length is None or n < self.max_length:
            self.max_length = n

    def satisfied_by(self, s: str) -> bool:
        if len(s) < self.min_length:
            return False
        if self.max_length is not None and len(s) > self.max_length:
            return False
        if self.needs_nonspace and not s.strip():
            return False
        for regex, count in self.token_counts.items():
            if len(match_token(regex, s)) < count:
                return False
        for regex in self.tails_after:
            ms = match_token(regex, s)
            if not ms or ms[-1].end >= len(s):
                return False
        for span in self.spans:
            if not span.satisfied_by(s):
                return False
        for expr in self.probes:
            try:
                eval_expression(expr, s)
            except EvalError:
                return False
        return True


def _span_static_order(i1: int, y1: Boundary, i2: int, y2: Boundary) -> bool:
    """For a same-regex GetSpan whose ordinals differ by a count-independent
    amount, whether a non-empty span is possible at all."""
    # relative ordinal difference (same sign indexes): o2 - o1 == i2 - i1
    d = i2 - i1
    if d > 0:
        return True
    if d == 0:
        return y1 is Boundary.START and y2 is Boundary.END
    return False


def _derive_getspan(c: InputConstraints, e: GetSpan) -> None:
    c.require_count(e.r1, abs(e.i1))
    c.require_count(e.r2, abs(e.i2))
    if e.r1 == e.r2:
        same_sign = (e.i1 > 0) == (e.i2 > 0)
        if same_sign:
            if not _span_static_order(e.i1, e.y1, e.i2, e.y2):
                raise UnsatisfiableConstraints(f"GetSpan always empty: {e}")
        else:
            # ordinal order depends on the total match count m; find the
            # smallest workable m and hint the generator to aim for it.
            base = max(abs(e.i1), abs(e.i2))
            for m in range(base, base + 12):
                o1 = e.i1 - 1 if e.i1 > 0 else m + e.i1
                o2 = e.i2 - 1 if e.i2 > 0 else m + e.i2
                if o1 < o2 or (o1 == o2 and e.y1 is Boundary.START and e.y2 is Boundary.END):
                    c.require_count(e.r1, m)
                    c.exact_counts[e.r1] = max(c.exact_counts.get(e.r1, 0), m)
                    break
            else:
                raise UnsatisfiableConstraints(f"GetSpan unsatisfiable for any match count: {e}")
    c.spans = c.spans + (SpanRequirement(e.r1, e.i1, e.y1, e.r2, e.i2, e.y2),)


def _derive_substr(c: InputConstraints, e: SubStr) -> None:
    k1, k2 = e.k1, e.k2
    if k1 > 0 and k2 > 0:
        if k1 > k2:
            raise UnsatisfiableConstraints(f"SubStr({k1},{k2}) always inverted")
        c.require_min_length(k2)
    elif k1 < 0 and k2 < 0:
        if k1 > k2:
            raise UnsatisfiableConstraints(f"SubStr({k1},{k2}) always inverted")
        c.require_min_length(-k1)
    elif k1 > 0 and k2 < 0:
        c.require_min_length(k1 - k2 - 1)
    else:  # k1 < 0 < k2: p1 = len+k1+1 <= p2 = k2 bounds the length above
        c.require_min_length(max(-k1, k2))
        c.require_max_length(k2 - k1 - 1)


def _derive_counts_only(c: InputConstraints, e: Expression) -> None:
    """Count-style requirements of a nesting function, applied to the raw input."""
    if isinstance(e, GetToken):
        c.require_count(e.ttype, abs(e.index))
    elif isinstance(e, GetFirst):
        c.require_count(e.ttype, e.count)
    elif isinstance(e, GetAll):
        c.require_count(e.ttype, 1)
    elif isinstance(e, GetUpto):
        c.require_count(e.regex, 1)
    elif isinstance(e, GetFrom):
        c.require_count(e.regex, 1)
    elif isinstance(e, Trim):
        c.needs_nonspace = True


def _derive_expression(c: InputConstraints, e: Expression) -> None:
    if isinstance(e, ConstStr):
        return
    if isinstance(e, SubStr):
        _derive_substr(c, e)
        return
    if isinstance(e, GetSpan):
        _derive_getspan(c, e)
        return
    if isinstance(e, GetFrom):
        c.require_count(e.regex, 1)
        c.tails_after = c.tails_after | {e.regex}
        return
    if isinstance(e, Compose):
        # the inner consumes the raw input: derive it fully. The outer runs on
        # the inner's output; declarative requirements cannot capture that, so
        # add its counts as a steering heuristic and probe the whole expression.
        _derive_expression(c, e.inner)
        _derive_counts_only(c, e.outer)
        c.probes = c.probes + (e,)
        return
    _derive_counts_only(c, e)


def derive_constraints(p: Program) -> InputConstraints:
    """Input requirements under which every expression of ``p`` evaluates.

    Raises UnsatisfiableConstraints for programs that demand contradictory
    structure (e.g. a statically inverted SubStr range).
    """
    c = InputConstraints()
    for e in p.expressions:
        _derive_expression(c, e)
    if c.max_length is not None and c.min_length > c.max_length:
        raise UnsatisfiableConstraints(
            f"length window empty: [{c.min_length}, {c.max_length}]"
        )
    if c.max_length is not None:
        for regex, count in c.token_counts.items():
            if count > c.max_length:  # cannot fit that many matches
                raise UnsatisfiableConstraints(f"{count} matches of {regex} cannot fit in {c.max_length} chars")
    if c.min_length > MAX_INPUT_LENGTH:
        raise UnsatisfiableConstraints(f"minimum length {c.min_length} exceeds cap {MAX_INPUT_LENGTH}")
    return c
