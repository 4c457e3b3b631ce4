"""Corpus evaluation and experiment harnesses.

A "system" is any callable mapping an Instance to a Prediction (assessment
outputs plus, for synthesizers, a consistency flag). Reports carry both the
all-example metric (every assessment output exact) and the average-example
metric (fraction of individually correct outputs), a per-instance
breakdown, and an echo of the configuration that produced them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from ..gen import Instance, NoiseSpec, inject_noise, rng_for


@dataclass
class Prediction:
    outputs: list[str | None]  # aligned with instance.assessment
    consistent: bool | None = None  # None for systems with no consistency notion
    program_text: str | None = None


System = Callable[[Instance], Prediction]


@dataclass
class ReportRow:
    noise: int
    instances: int
    all_example: float
    average_example: float
    consistency: float | None
    per_instance: list[dict] = field(default_factory=list)

    def to_json(self, include_breakdown: bool = False) -> dict:
        row = {
            "noise": self.noise,
            "consistency": self.consistency,
            "all_example": self.all_example,
            "average_example": self.average_example,
            "instances": self.instances,
        }
        if include_breakdown:
            row["per_instance"] = self.per_instance
        return row


@dataclass
class MetricsReport:
    config: dict
    rows: list[ReportRow]

    def to_json(self, include_breakdown: bool = False) -> dict:
        return {
            "config": self.config,
            "rows": [r.to_json(include_breakdown) for r in self.rows],
        }

    def to_text(self) -> str:
        headers = ["noise", "instances", "consistency", "all_example", "average_example"]
        lines = ["  ".join(f"{h:>15}" for h in headers)]
        for r in self.rows:
            cons = "-" if r.consistency is None else f"{r.consistency:.3f}"
            lines.append(
                "  ".join(
                    f"{v:>15}"
                    for v in (r.noise, r.instances, cons, f"{r.all_example:.3f}", f"{r.average_example:.3f}")
                )
            )
        return "\n".join(lines)

    def dumps(self, include_breakdown: bool = False) -> str:
        return json.dumps(self.to_json(include_breakdown), indent=2, sort_keys=True)


def evaluate_corpus(system: System, instances: Sequence[Instance], noise: int = 0) -> ReportRow:
    """Run the system over every instance and aggregate the metrics."""
    if not instances:
        raise ValueError("need at least one instance")
    per_instance = []
    n_all = 0
    n_correct = 0
    n_outputs = 0
    n_consistent = 0
    has_consistency = False
    for inst in instances:
        pred = system(inst)
        refs = [o for _, o in inst.assessment]
        correct = sum(p == r for p, r in zip(pred.outputs, refs))
        all_ok = correct == len(refs) and len(pred.outputs) == len(refs)
        n_all += all_ok
        n_correct += correct
        n_outputs += len(refs)
        if pred.consistent is not None:
            has_consistency = True
            n_consistent += bool(pred.consistent)
        per_instance.append(
            {
                "correct": correct,
                "total": len(refs),
                "all": bool(all_ok),
                "consistent": pred.consistent,
                "program": pred.program_text,
            }
        )
    return ReportRow(
        noise=noise,
        instances=len(instances),
        all_example=n_all / len(instances),
        average_example=n_correct / max(n_outputs, 1),
        consistency=(n_consistent / len(instances)) if has_consistency else None,
        per_instance=per_instance,
    )


def noise_sweep(
    system: System,
    instances: Sequence[Instance],
    levels: Iterable[int],
    seed: int = 0,
    config: dict | None = None,
) -> MetricsReport:
    """One report row per noise level; noise touches observed examples only."""
    rows = []
    for level in levels:
        rng = rng_for(seed * 1000003 + level)
        noisy = [inject_noise(rng, inst, NoiseSpec(level)) for inst in instances]
        rows.append(evaluate_corpus(system, noisy, noise=level))
    return MetricsReport(config=config or {}, rows=rows)
