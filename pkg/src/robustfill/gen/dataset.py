"""Newline-delimited JSON dataset files.

One record per line: {"observed": [[in, out], ...], "assessment":
[[in, out], ...], "program": "<program text>" | null, "noise": n}.
Programs travel as canonical text, never as token ids, so files stay
readable and decoupled from vocabulary internals.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Iterator

from ..dsl import format_program, parse_program
from .sampler import Instance


def instance_to_record(inst: Instance) -> dict:
    return {
        "observed": [[i, o] for i, o in inst.observed],
        "assessment": [[i, o] for i, o in inst.assessment],
        "program": format_program(inst.reference) if inst.reference is not None else None,
        "noise": inst.noise,
    }


def record_to_instance(record: dict) -> Instance:
    return Instance(
        observed=tuple((i, o) for i, o in record["observed"]),
        assessment=tuple((i, o) for i, o in record.get("assessment", [])),
        reference=parse_program(record["program"]) if record.get("program") else None,
        noise=int(record.get("noise", 0)),
    )


def dumps_instance(inst: Instance) -> str:
    return json.dumps(instance_to_record(inst), ensure_ascii=True, separators=(",", ":"), sort_keys=True)


def write_dataset(instances: Iterable[Instance], path: str | Path) -> int:
    path = Path(path)
    count = 0
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for inst in instances:
            fh.write(dumps_instance(inst))
            fh.write("\n")
            count += 1
    return count


def iter_dataset(path: str | Path) -> Iterator[Instance]:
    with Path(path).open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield record_to_instance(json.loads(line))


def read_dataset(path: str | Path) -> list[Instance]:
    return list(iter_dataset(path))
