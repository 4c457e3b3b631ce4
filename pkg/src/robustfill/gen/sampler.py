"""Random programs, constrained random inputs, and full training instances.

Sampling is a pure function of the seed (numpy PCG64 generators), so
corpora are reproducible bit-for-bit across platforms. Instances whose
program cannot be satisfied within the input-length budget, or whose
outputs are empty or overly long, are rejected and resampled — mirroring
how degenerate samples are normally filtered from synthetic corpora.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..dsl import (
    Boundary,
    Compose,
    ConstStr,
    DslConfig,
    EvalError,
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
    eval_program,
    full_config,
)
from .constraints import InputConstraints, UnsatisfiableConstraints, derive_constraints

LOWERS = "abcdefghijklmnopqrstuvwxyz"
UPPERS = LOWERS.upper()
DIGITS = "0123456789"
PUNCT = "&,.?!@()[]%{}/:;$#\"'"

# filler alphabet with elevated weight on letters, digits, and space
_FILLER_CHARS = LOWERS * 3 + UPPERS * 2 + DIGITS * 2 + " " * 8 + PUNCT
VARIANTS = ("substring", "nesting", "nesting_of_nesting", "nesting_of_substring", "const")


class GenerationFailure(RuntimeError):
    """Retry budget exhausted while generating a constrained input or instance."""


@dataclass(frozen=True)
class Instance:
    """One task: observed pairs shown to a solver, held-out assessment pairs,
    and (for synthetic data) the reference program that produced them."""

    observed: tuple[tuple[str, str], ...]
    assessment: tuple[tuple[str, str], ...]
    reference: Program | None = None
    noise: int = 0

    @property
    def pairs(self) -> tuple[tuple[str, str], ...]:
        return self.observed + self.assessment


@dataclass(frozen=True)
class SamplerConfig:
    dsl: DslConfig = field(default_factory=full_config)
    max_program_length: int | None = None  # defaults to dsl.max_expressions
    n_observed: int = 4
    n_assessment: int = 6
    min_input_length: int = 1
    max_input_length: int = 36
    max_output_length: int = 100
    input_retry_budget: int = 50
    program_retry_budget: int = 200
    variant_weights: tuple[float, float, float, float, float] | None = None  # over VARIANTS

    @property
    def program_length_cap(self) -> int:
        cap = self.max_program_length if self.max_program_length is not None else self.dsl.max_expressions
        return min(cap, self.dsl.max_expressions)


def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _choice(rng: np.random.Generator, seq):
    return seq[int(rng.integers(len(seq)))]


# ----------------------------------------------------------- program sampling
def _sample_substring(rng, dsl: DslConfig):
    kind = _choice(rng, dsl.substring_kinds)
    if kind == "SubStr":
        return SubStr(_choice(rng, dsl.positions), _choice(rng, dsl.positions))
    regexes = dsl.regexes
    return GetSpan(
        _choice(rng, regexes),
        _choice(rng, dsl.indexes),
        _choice(rng, (Boundary.START, Boundary.END)),
        _choice(rng, regexes),
        _choice(rng, dsl.indexes),
        _choice(rng, (Boundary.START, Boundary.END)),
    )


def _sample_nesting(rng, dsl: DslConfig):
    kind = _choice(rng, dsl.nesting_kinds)
    if kind == "GetToken":
        return GetToken(_choice(rng, dsl.token_types), _choice(rng, dsl.indexes))
    if kind == "ToCase":
        return ToCase(_choice(rng, dsl.cases))
    if kind == "Replace":
        old = _choice(rng, dsl.delimiters)
        others = [d for d in dsl.delimiters if d != old]
        return Replace(old, _choice(rng, others))
    if kind == "Trim":
        return Trim()
    if kind == "GetUpto":
        return GetUpto(_choice(rng, dsl.regexes))
    if kind == "GetFrom":
        return GetFrom(_choice(rng, dsl.regexes))
    if kind == "GetFirst":
        return GetFirst(_choice(rng, dsl.token_types), _choice(rng, dsl.getfirst_counts))
    return GetAll(_choice(rng, dsl.token_types))


def _available_variants(dsl: DslConfig) -> list[str]:
    variants = []
    if dsl.substring_kinds:
        variants.append("substring")
    if dsl.nesting_kinds:
        variants.append("nesting")
        if dsl.allow_compose:
            variants.append("nesting_of_nesting")
            if dsl.substring_kinds:
                variants.append("nesting_of_substring")
    if dsl.allow_const and dsl.const_chars:
        variants.append("const")
    return variants


def sample_expression(rng: np.random.Generator, cfg: SamplerConfig):
    dsl = cfg.dsl
    variants = _available_variants(dsl)
    if cfg.variant_weights is not None:
        weights = np.array([cfg.variant_weights[VARIANTS.index(v)] for v in variants], dtype=float)
        variant = variants[int(rng.choice(len(variants), p=weights / weights.sum()))]
    else:
        variant = _choice(rng, variants)
    if variant == "substring":
        return _sample_substring(rng, dsl)
    if variant == "nesting":
        return _sample_nesting(rng, dsl)
    if variant == "nesting_of_nesting":
        return Compose(_sample_nesting(rng, dsl), _sample_nesting(rng, dsl))
    if variant == "nesting_of_substring":
        return Compose(_sample_nesting(rng, dsl), _sample_substring(rng, dsl))
    return ConstStr(_choice(rng, dsl.const_chars))


def sample_program(rng: np.random.Generator, cfg: SamplerConfig | None = None) -> Program:
    """Expression count uniform in [1, cap]; expressions sampled independently."""
    cfg = cfg or SamplerConfig()
    n = int(rng.integers(1, cfg.program_length_cap + 1))
    return Program(tuple(sample_expression(rng, cfg) for _ in range(n)))


# -------------------------------------------------------------- input sampling
def _literal_for(rng, regex: Regex) -> str:
    """A short literal string that is exactly one match of ``regex``."""
    if isinstance(regex, str):
        return regex
    if regex is TokenType.NUMBER:
        return "".join(_choice(rng, DIGITS) for _ in range(int(rng.integers(1, 4))))
    if regex is TokenType.DIGIT:
        return _choice(rng, DIGITS)
    if regex is TokenType.WORD:
        return "".join(_choice(rng, LOWERS + UPPERS) for _ in range(int(rng.integers(2, 6))))
    if regex is TokenType.ALPHANUM:
        return "".join(_choice(rng, LOWERS + UPPERS + DIGITS) for _ in range(int(rng.integers(2, 6))))
    if regex is TokenType.ALL_CAPS:
        return "".join(_choice(rng, UPPERS) for _ in range(int(rng.integers(2, 5))))
    if regex is TokenType.PROP_CASE:
        return _choice(rng, UPPERS) + "".join(_choice(rng, LOWERS) for _ in range(int(rng.integers(1, 5))))
    if regex is TokenType.LOWER:
        return "".join(_choice(rng, LOWERS) for _ in range(int(rng.integers(2, 6))))
    if regex is TokenType.CHAR:
        return _choice(rng, LOWERS + UPPERS + DIGITS)
    raise ValueError(f"unknown regex operand {regex!r}")


def _filler(rng) -> str:
    n = int(rng.integers(1, 7))
    return "".join(_choice(rng, _FILLER_CHARS) for _ in range(n))


def _assemble(rng, segments: list[str], min_len: int, max_len: int) -> str:
    """Join segments in random order, separating junctions that would merge
    adjacent alphanumeric runs, then pad/trim toward the length window."""
    order = list(rng.permutation(len(segments))) if segments else []
    parts: list[str] = []
    for idx in order:
        seg = segments[idx]
        if parts and parts[-1][-1].isalnum() and seg[:1].isalnum():
            parts.append(_choice(rng, " .,;:"))
        parts.append(seg)
    s = "".join(parts)
    while len(s) < min_len:
        pad = _choice(rng, LOWERS + UPPERS)
        s = s + pad if rng.integers(2) else pad + s
    return s[:max_len] if len(s) > max_len else s


def sample_input(
    rng: np.random.Generator,
    constraints: InputConstraints,
    cfg: SamplerConfig | None = None,
) -> str:
    """A printable-ASCII string satisfying ``constraints``.

    Required token instances are interleaved with random filler and the
    segment order shuffled; candidates are verified against the constraints
    and regenerated up to the retry budget.
    """
    cfg = cfg or SamplerConfig()
    min_len = max(cfg.min_input_length, constraints.min_length)
    max_len = cfg.max_input_length
    if constraints.max_length is not None:
        max_len = min(max_len, constraints.max_length)
    if min_len > max_len:
        raise GenerationFailure(f"length window [{min_len},{max_len}] empty under this config")

    for _ in range(cfg.input_retry_budget):
        segments: list[str] = []
        for regex, count in constraints.token_counts.items():
            want = constraints.exact_counts.get(regex, count)
            segments.extend(_literal_for(rng, regex) for _ in range(want))
        n_filler = int(rng.integers(0, 4))
        segments.extend(_filler(rng) for _ in range(n_filler))
        if not segments:
            segments.append(_filler(rng))
        s = _assemble(rng, segments, min_len, max_len)
        if constraints.satisfied_by(s) and min_len <= len(s) <= max_len:
            return s
    raise GenerationFailure("could not satisfy input constraints within the retry budget")


# ------------------------------------------------------------------ instances
def generate_instance(rng: np.random.Generator, cfg: SamplerConfig | None = None) -> Instance:
    """Sample (program, inputs, outputs); reject degenerate draws and resample.

    Rejections: unsatisfiable constraints, inputs that cannot be generated,
    evaluation errors, empty outputs, outputs longer than the cap.
    """
    cfg = cfg or SamplerConfig()
    n_total = cfg.n_observed + cfg.n_assessment
    for _ in range(cfg.program_retry_budget):
        p = sample_program(rng, cfg)
        try:
            constraints = derive_constraints(p)
        except UnsatisfiableConstraints:
            continue
        pairs: list[tuple[str, str]] = []
        seen: set[str] = set()
        ok = True
        for _ in range(n_total):
            pair = None
            for _ in range(cfg.input_retry_budget):
                try:
                    s = sample_input(rng, constraints, cfg)
                except GenerationFailure:
                    break
                if s in seen:
                    continue
                try:
                    out = eval_program(p, s)
                except EvalError:
                    continue
                if 0 < len(out) <= cfg.max_output_length:
                    pair = (s, out)
                    break
            if pair is None:
                ok = False
                break
            seen.add(pair[0])
            pairs.append(pair)
        if not ok:
            continue
        return Instance(
            observed=tuple(pairs[: cfg.n_observed]),
            assessment=tuple(pairs[cfg.n_observed :]),
            reference=p,
        )
    raise GenerationFailure("no valid instance within the program retry budget")


def instance_stream(seed: int, cfg: SamplerConfig | None = None):
    """Infinite deterministic stream of clean instances."""
    rng = rng_for(seed)
    cfg = cfg or SamplerConfig()
    while True:
        yield generate_instance(rng, cfg)


def generate_corpus(seed: int, count: int, cfg: SamplerConfig | None = None) -> list[Instance]:
    stream = instance_stream(seed, cfg)
    return [next(stream) for _ in range(count)]
