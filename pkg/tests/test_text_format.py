"""Program text format: canonical formatting, parsing, and round trips."""

import pytest

from robustfill.dsl import (
    Boundary,
    Case,
    Compose,
    ConstStr,
    GetSpan,
    GetToken,
    ParseError,
    Replace,
    SubStr,
    ToCase,
    TokenType,
    Trim,
    format_program,
    parse_program,
    program,
)


def test_name_flip_formats_canonically():
    p = program(
        GetToken(TokenType.WORD, -1),
        ConstStr(","),
        ConstStr(" "),
        Compose(ToCase(Case.PROPER), GetToken(TokenType.WORD, 1)),
    )
    assert format_program(p) == (
        "GetToken(Word, -1) | ConstStr(',') | ConstStr(' ') | ToCase(Proper, GetToken(Word, 1))"
    )
    assert parse_program(format_program(p)) == p


def test_alpha_alias_parses_as_word():
    p = parse_program("GetToken(Alpha, -1)")
    assert p.expressions[0] == GetToken(TokenType.WORD, -1)


def test_trim_parses_as_single_expression():
    p = parse_program("Trim()")
    assert p.expressions == (Trim(),)


def test_applied_composition_style():
    a = parse_program("ToCase(Lower)(SubStr(1, 3))")
    b = parse_program("ToCase(Lower, SubStr(1, 3))")
    assert a == b == program(Compose(ToCase(Case.LOWER), SubStr(1, 3)))


def test_quote_styles_and_space_delimiter():
    p = parse_program("Replace(' ', '/')")
    assert p.expressions[0] == Replace(" ", "/")
    q = parse_program("ConstStr(\"'\")")
    assert q.expressions[0] == ConstStr("'")
    assert parse_program(format_program(q)) == q


def test_getspan_round_trip():
    p = program(GetSpan(":", 2, Boundary.START, TokenType.NUMBER, -1, Boundary.END))
    text = format_program(p)
    assert text == "GetSpan(':', 2, Start, Number, -1, End)"
    assert parse_program(text) == p


def test_index_out_of_domain_is_a_parse_error():
    with pytest.raises(ParseError):
        parse_program("GetSpan(Number, 6, Start, Number, 1, End)")
    with pytest.raises(ParseError):
        parse_program("GetToken(Word, 0)")
    with pytest.raises(ParseError):
        parse_program("SubStr(0, 3)")


def test_parse_error_carries_location():
    with pytest.raises(ParseError) as exc:
        parse_program("GetToken(Word, -1) | Bogus(1)")
    assert exc.value.line == 1
    assert exc.value.column == 22


def test_depth_two_nesting_rejected():
    with pytest.raises(ParseError):
        parse_program("ToCase(Lower, ToCase(Proper, GetToken(Word, 1)))")


def test_trailing_garbage_rejected():
    with pytest.raises(ParseError):
        parse_program("Trim() extra")
    with pytest.raises(ParseError):
        parse_program("")
