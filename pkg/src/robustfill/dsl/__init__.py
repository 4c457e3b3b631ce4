"""The string-transformation DSL: AST, matchers, interpreter, text format, vocabulary."""

from .ast import (
    DELIMITERS,
    MAX_EXPRESSIONS,
    PRINTABLE,
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
    Nesting,
    Program,
    Regex,
    Replace,
    SubStr,
    Substring,
    ToCase,
    TokenType,
    Trim,
    program,
)
from .config import ALL_NESTING_KINDS, ALL_SUBSTRING_KINDS, DslConfig, full_config, restrict, toy_config
from .interpreter import EvalError, eval_expression, eval_prefix, eval_program
from .matchers import Match, count_matches, match_token
from .text import ParseError, format_expression, format_program, parse_program
from .vocab import (
    EOS,
    ProgramSyntaxError,
    Vocabulary,
    build_vocabulary,
    detokenize_program,
    tokenize_program,
)

__all__ = [
    "DELIMITERS",
    "MAX_EXPRESSIONS",
    "PRINTABLE",
    "Boundary",
    "Case",
    "Compose",
    "ConstStr",
    "Expression",
    "GetAll",
    "GetFirst",
    "GetFrom",
    "GetSpan",
    "GetToken",
    "GetUpto",
    "Nesting",
    "Program",
    "Regex",
    "Replace",
    "SubStr",
    "Substring",
    "ToCase",
    "TokenType",
    "Trim",
    "program",
    "ALL_NESTING_KINDS",
    "ALL_SUBSTRING_KINDS",
    "DslConfig",
    "full_config",
    "restrict",
    "toy_config",
    "EvalError",
    "eval_expression",
    "eval_prefix",
    "eval_program",
    "Match",
    "count_matches",
    "match_token",
    "ParseError",
    "format_expression",
    "format_program",
    "parse_program",
    "EOS",
    "ProgramSyntaxError",
    "Vocabulary",
    "build_vocabulary",
    "detokenize_program",
    "tokenize_program",
]
