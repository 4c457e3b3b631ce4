"""Interpreter semantics: reference vectors, error cases, and core properties."""

import pytest

from robustfill.dsl import (
    Boundary,
    Case,
    Compose,
    ConstStr,
    EvalError,
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
    TokenType,
    Trim,
    eval_expression,
    eval_program,
    match_token,
    parse_program,
    program,
)

W, N, AN, AC, CH = (
    TokenType.WORD,
    TokenType.NUMBER,
    TokenType.ALPHANUM,
    TokenType.ALL_CAPS,
    TokenType.CHAR,
)


# --- reference vectors (hand-verified published sample rows) -----------------
SAMPLE1 = program(GetToken(AN, 3), GetFrom(":"), GetFirst(CH, 4))
SAMPLE1_ROWS = [
    ("Ud 9:25,JV3 Obb", "2525,JV3 ObbUd92"),
    ("zLny xmHg 8:43 A44q", "843 A44qzLny"),
    ("cuL.zF.dDX,12:31", "dDX31cuLz"),
    ("ZiG OE bj3u 7:11", "bj3u11ZiGO"),
]

SAMPLE3 = program(
    Compose(GetToken(AC, -2), GetSpan(AC, 1, Boundary.START, AC, 5, Boundary.START))
)
SAMPLE3_ROWS = [
    ("YDXJZ @ZYUD Wc-YKT GTIL BNX", "W"),
    ("JUGRB.MPKA.MTHV,tEczT-GZJ.MFT", "MTHV"),
]

NAME_FLIP = parse_program(
    "GetToken(Word, -1) | ConstStr(',') | ConstStr(' ') | ToCase(Proper, GetToken(Word, 1))"
)


@pytest.mark.parametrize("inp,want", SAMPLE1_ROWS)
def test_sample1_rows(inp, want):
    assert eval_program(SAMPLE1, inp) == want


@pytest.mark.parametrize("inp,want", SAMPLE3_ROWS)
def test_sample3_rows(inp, want):
    assert eval_program(SAMPLE3, inp) == want


def test_name_flip_clean_rows():
    assert eval_program(NAME_FLIP, "Laura Jane Jones") == "Jones, Laura"
    assert eval_program(NAME_FLIP, "Steve P. Green (9)") == "Green, Steve"
    assert eval_program(NAME_FLIP, "DOUG Q. Macklin") == "Macklin, Doug"


def test_lower_prefix_of_month():
    p = program(Compose(ToCase(Case.LOWER), SubStr(1, 3)))
    assert eval_program(p, "January") == "jan"
    assert eval_program(p, "February") == "feb"
    assert eval_program(p, "March") == "mar"
    assert eval_program(p, "April") == "apr"


# --- per-constructor behavior -------------------------------------------------
def test_substr_positive_inclusive():
    assert eval_expression(SubStr(1, 3), "January") == "Jan"
    assert eval_expression(SubStr(2, 2), "abc") == "b"


def test_substr_negative_counts_from_end():
    assert eval_expression(SubStr(-1, -1), "abc") == "c"
    assert eval_expression(SubStr(-3, -2), "abcd") == "bc"
    assert eval_expression(SubStr(2, -1), "abcd") == "bcd"


def test_substr_errors():
    with pytest.raises(EvalError):
        eval_expression(SubStr(3, 2), "abc")  # inverted
    with pytest.raises(EvalError):
        eval_expression(SubStr(1, 4), "abc")  # out of bounds
    with pytest.raises(EvalError):
        eval_expression(SubStr(-5, -1), "abc")  # resolves below 1


def test_getspan_gap_semantics():
    # span from the start of the 1st ':' to the start of the 2nd ':' keeps the middle text
    e = GetSpan(":", 1, Boundary.START, ":", 2, Boundary.START)
    assert eval_expression(e, "a:bb:c") == ":bb"
    e2 = GetSpan(":", 1, Boundary.END, ":", 2, Boundary.START)
    assert eval_expression(e2, "a:bb:c") == "bb"
    with pytest.raises(EvalError):
        eval_expression(GetSpan(":", 2, Boundary.START, ":", 1, Boundary.START), "a:bb:c")
    with pytest.raises(EvalError):
        eval_expression(e, "a:b")  # only one match


def test_getfrom_vector():
    assert eval_expression(GetFrom(":"), "zLny xmHg 8:43 A44q") == "43 A44q"
    with pytest.raises(EvalError):
        eval_expression(GetFrom(":"), "ab:")  # nothing after the last match
    with pytest.raises(EvalError):
        eval_expression(GetFrom(":"), "ab")


def test_getupto():
    assert eval_expression(GetUpto(":"), "ab:cd:e") == "ab:"
    assert eval_expression(GetUpto(N), "ab12cd34") == "ab12"
    with pytest.raises(EvalError):
        eval_expression(GetUpto(N), "abcd")


def test_getfirst_vector():
    assert eval_expression(GetFirst(CH, 4), "cuL.zF.dDX,12:31") == "cuLz"
    with pytest.raises(EvalError):
        eval_expression(GetFirst(CH, 4), "a.b")


def test_getall():
    assert eval_expression(GetAll(W), "ab 12 cd") == "abcd"
    with pytest.raises(EvalError):
        eval_expression(GetAll(N), "abcd")


def test_tocase():
    assert eval_expression(ToCase(Case.PROPER), "dOUG") == "Doug"
    assert eval_expression(ToCase(Case.PROPER), "laura jane jones") == "Laura Jane Jones"
    # spreadsheet-style proper case: any non-letter restarts a word
    assert eval_expression(ToCase(Case.PROPER), "don't stop") == "Don'T Stop"
    assert eval_expression(ToCase(Case.PROPER), "a1b") == "A1B"
    assert eval_expression(ToCase(Case.ALL_CAPS), "aB c") == "AB C"
    assert eval_expression(ToCase(Case.LOWER), "Ab C") == "ab c"


def test_trim_and_replace():
    assert eval_expression(Trim(), "  a b  ") == "a b"
    with pytest.raises(EvalError):
        eval_expression(Trim(), "   ")
    assert eval_expression(Replace(" ", "/"), "1 2nd Ave") == "1/2nd/Ave"
    assert eval_expression(Replace(",", " "), "abc") == "abc"
    with pytest.raises(ValueError):
        Replace(" ", "-")  # dash is not in the delimiter set


def test_const():
    assert eval_expression(ConstStr("x"), "whatever") == "x"


def test_composition_applies_inner_first():
    e = Compose(GetToken(W, 1), SubStr(4, 8))
    # inner yields "d ef " -> first word of that is "d"
    assert eval_expression(e, "abcd ef gh") == "d"


def test_getoken_missing_match_errors():
    with pytest.raises(EvalError):
        eval_expression(GetToken(N, 2), "a1b")
    with pytest.raises(EvalError):
        eval_expression(GetToken(N, -2), "a1b")


def test_eval_program_reports_failing_expression():
    p = program(ConstStr("x"), GetToken(N, 1))
    with pytest.raises(EvalError) as exc:
        eval_program(p, "abc")
    assert exc.value.expression_index == 1


# --- properties ---------------------------------------------------------------
def test_determinism():
    for inp, _ in SAMPLE1_ROWS:
        assert eval_program(SAMPLE1, inp) == eval_program(SAMPLE1, inp)


def test_prefix_concatenativity():
    for inp, _ in SAMPLE1_ROWS:
        full = eval_program(SAMPLE1, inp)
        for j in range(1, len(SAMPLE1.expressions) + 1):
            prefix = eval_program(Program(SAMPLE1.expressions[:j]), inp)
            assert full.startswith(prefix)


def test_negative_index_symmetry():
    v = "Ud 9:25,JV3 Obb"
    m = len(match_token(AN, v))
    for i in range(1, min(m, 5) + 1):
        neg = eval_expression(GetToken(AN, -i), v)
        pos = eval_expression(GetToken(AN, m - i + 1), v)
        assert neg == pos
