"""Synthetic data generation: programs, constrained inputs, instances, noise."""

from .constraints import InputConstraints, SpanRequirement, UnsatisfiableConstraints, derive_constraints
from .dataset import (
    dumps_instance,
    instance_to_record,
    iter_dataset,
    read_dataset,
    record_to_instance,
    write_dataset,
)
from .noise import NoiseSpec, inject_noise
from .sampler import (
    GenerationFailure,
    Instance,
    SamplerConfig,
    generate_corpus,
    generate_instance,
    instance_stream,
    rng_for,
    sample_expression,
    sample_input,
    sample_program,
)

__all__ = [
    "InputConstraints",
    "SpanRequirement",
    "UnsatisfiableConstraints",
    "derive_constraints",
    "dumps_instance",
    "instance_to_record",
    "iter_dataset",
    "read_dataset",
    "record_to_instance",
    "write_dataset",
    "NoiseSpec",
    "inject_noise",
    "GenerationFailure",
    "Instance",
    "SamplerConfig",
    "generate_corpus",
    "generate_instance",
    "instance_stream",
    "rng_for",
    "sample_expression",
    "sample_input",
    "sample_program",
]
