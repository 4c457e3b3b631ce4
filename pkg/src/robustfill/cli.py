"""Command-line interface.

Subcommands: sample | train | run | eval | serve | vocab-dump.
Exit codes: 0 success, 1 operational failure, 2 usage error.
Relative model paths fall back to $ROBUSTFILL_MODEL_DIR/<mode>.ckpt.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .dsl import DslConfig, build_vocabulary, full_config, parse_program, toy_config
from .evaluate import InductionSystem, SynthesisSystem, noise_sweep
from .gen import (
    Instance,
    SamplerConfig,
    read_dataset,
    rng_for,
    write_dataset,
)
from .nn import (
    TrainConfig,
    TrainingDiverged,
    build_model,
    induction_config,
    load_checkpoint,
    make_induction_batch,
    make_synthesis_batch,
    save_checkpoint,
    synthesis_config,
    train,
)
from .search import InductionOptions, SynthesisOptions, apply_program, induce, synthesize

MODEL_DIR_ENV = "ROBUSTFILL_MODEL_DIR"


class UsageError(ValueError):
    pass


def _dsl_config(name: str) -> DslConfig:
    if name == "full":
        return full_config()
    if name == "toy":
        return toy_config()
    raise UsageError(f"unknown DSL config {name!r} (expected full|toy)")


def _parse_levels(text: str) -> tuple[int, ...]:
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(x) for x in text.split(",") if x != "")


def _resolve_model_path(arg: str | None, mode: str) -> Path:
    if arg:
        return Path(arg)
    base = os.environ.get(MODEL_DIR_ENV)
    if base:
        return Path(base) / f"{mode}.ckpt"
    raise UsageError(f"no model path given and ${MODEL_DIR_ENV} is not set")


def _sampler(args) -> SamplerConfig:
    return SamplerConfig(
        dsl=_dsl_config(args.config),
        max_program_length=args.max_length,
        min_input_length=args.min_input_length,
        max_input_length=args.max_input_length,
    )


def _add_sampler_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", default="full", help="DSL fragment: full|toy")
    p.add_argument("--max-length", type=int, default=None, help="max program expressions")
    p.add_argument("--min-input-length", type=int, default=1)
    p.add_argument("--max-input-length", type=int, default=36)


# ------------------------------------------------------------------- commands
def cmd_sample(args) -> int:
    from .gen import NoiseSpec, generate_instance, inject_noise

    sampler = _sampler(args)
    levels = _parse_levels(args.noise)
    rng = rng_for(args.seed)
    instances = []
    for _ in range(args.count):
        inst = generate_instance(rng, sampler)
        n = int(levels[int(rng.integers(len(levels)))]) if levels else 0
        if n:
            inst = inject_noise(rng, inst, NoiseSpec(n))
        instances.append(inst)
    count = write_dataset(instances, args.out)
    print(f"wrote {count} instances to {args.out}")
    return 0


def cmd_vocab_dump(args) -> int:
    vocab = build_vocabulary(_dsl_config(args.config))
    print(f"config: {args.config}")
    print(f"tokens: {len(vocab)}")
    print(f"hash: {vocab.hash}")
    if args.list:
        for i, tok in enumerate(vocab.tokens):
            print(f"{i}\t{tok}")
    return 0


def _dataset_batches(instances, cfg: TrainConfig, mode: str, vocab, dtype):
    from .gen import NoiseSpec, inject_noise

    rng = rng_for(cfg.seed + 7919)
    while True:
        idx = rng.permutation(len(instances))
        for start in range(0, len(idx) - cfg.batch_size + 1, cfg.batch_size):
            batch_insts = [instances[i] for i in idx[start : start + cfg.batch_size]]
            batch_insts = [
                inject_noise(rng, inst, NoiseSpec(int(cfg.noise_levels[int(rng.integers(len(cfg.noise_levels)))])))
                for inst in batch_insts
            ]
            if mode == "synthesis":
                trimmed = [Instance(b.observed[: cfg.n_examples], b.assessment, b.reference, b.noise) for b in batch_insts]
                yield make_synthesis_batch(trimmed, vocab, dtype, cfg.n_examples)
            else:
                items = []
                for b in batch_insts:
                    iy, oy = b.assessment[int(rng.integers(len(b.assessment)))]
                    items.append((Instance(b.observed[: cfg.n_examples], (), None, b.noise), iy, oy))
                yield make_induction_batch(items, dtype, cfg.n_examples)


def cmd_train(args) -> int:
    vocab = build_vocabulary(_dsl_config(args.config))
    tc = TrainConfig(
        steps=args.steps,
        batch_size=args.batch_size,
        learning_rate=args.lr,
        lr_decay=args.lr_decay,
        lr_decay_every=args.lr_decay_every,
        clip_norm=args.clip,
        seed=args.seed,
        noise_levels=_parse_levels(args.noise),
        n_examples=args.n_examples,
    )
    if args.resume:
        model, meta = load_checkpoint(args.resume, expect_vocab_hash=vocab.hash if args.mode == "synthesis" else None)
        done = int(meta.get("steps_done", 0))
    else:
        if args.mode == "synthesis":
            net = synthesis_config(vocab, architecture=args.arch, hidden_size=args.d,
                                   embedding_size=args.emb, dtype=args.dtype)
        else:
            net = induction_config(architecture="attention-a", hidden_size=args.d,
                                   embedding_size=args.emb, dtype=args.dtype)
        model = build_model(net, seed=args.seed)
        done = 0

    if args.dataset:
        data = read_dataset(args.dataset)
        if args.mode == "synthesis":
            data = [d for d in data if d.reference is not None]
            if not data:
                raise UsageError("dataset has no instances with reference programs")
        batches = _dataset_batches(data, tc, args.mode, vocab, model.config.np_dtype)
    else:
        from .nn import minibatches

        batches = minibatches(tc, _sampler(args), args.mode, vocab, model.config.np_dtype)
    for _ in range(done):  # resume: fast-forward the deterministic stream
        next(batches)

    def on_step(step, loss, aux):
        if args.verbose and step % tc.log_every == 0:
            print(f"step {done + step}: loss={loss:.4f} token_acc={aux['token_accuracy']:.3f}", flush=True)

    remaining = max(args.steps - done, 0)
    state = train(model, batches, TrainConfig(**{**tc.__dict__, "steps": remaining}),
                  on_step=on_step, metrics_path=args.metrics)
    save_checkpoint(args.out, model, meta={"steps_done": done + state.step, "train_config": tc.__dict__})
    print(f"saved checkpoint to {args.out} after {done + state.step} steps")
    return 0


def _load_examples(args) -> list[tuple[str, str]]:
    if args.examples:
        try:
            pairs = json.loads(args.examples)
        except json.JSONDecodeError as err:
            raise UsageError(f"--examples is not valid JSON: {err}") from None
        if not isinstance(pairs, list) or not all(isinstance(p, list) and len(p) == 2 for p in pairs):
            raise UsageError("--examples must be a JSON list of [input, output] pairs")
        return [(str(i), str(o)) for i, o in pairs]
    if args.instances:
        data = read_dataset(args.instances)
        if not 0 <= args.index < len(data):
            raise UsageError(f"--index {args.index} out of range for {len(data)} instances")
        return list(data[args.index].observed)
    raise UsageError("provide --examples JSON or --instances FILE")


def cmd_run(args) -> int:
    observed = _load_examples(args)
    apply_inputs = args.apply or []
    if args.mode == "induction":
        model, _ = load_checkpoint(_resolve_model_path(args.model, "induction"))
        if model.config.mode != "induction":
            raise UsageError("checkpoint is not an induction model")
        outputs = induce(model, observed, apply_inputs, InductionOptions(beam=args.beam))
        for inp, out in zip(apply_inputs, outputs):
            print(f"{inp!r} -> {out!r}")
        return 0
    vocab = build_vocabulary(_dsl_config(args.config))
    model, _ = load_checkpoint(_resolve_model_path(args.model, "synthesis"), expect_vocab_hash=vocab.hash)
    opts = SynthesisOptions(beam=args.beam, dp=args.dp, metric=args.metric)
    result = synthesize(model, vocab, observed, apply_inputs, opts)
    if result.program is None:
        print("no consistent program found")
        return 1
    print(f"program: {result.program_text}")
    print(f"consistent: {result.consistent}  score: {result.score:.4f}  candidates: {result.candidates_tried}")
    for fill in result.fills:
        print(f"{fill['input']!r} -> {fill['output']!r}" if fill["error"] is None else f"{fill['input']!r} -> error: {fill['error']}")
    return 0


def cmd_eval(args) -> int:
    vocab = build_vocabulary(_dsl_config(args.config))
    data = read_dataset(args.dataset)
    if args.limit:
        data = data[: args.limit]
    beams = _parse_levels(args.beams)
    levels = _parse_levels(args.noise_levels)
    n_observed = _parse_levels(args.n_observed)
    reports = []
    if args.mode == "synthesis":
        model, _ = load_checkpoint(_resolve_model_path(args.model, "synthesis"), expect_vocab_hash=vocab.hash)
    else:
        model, _ = load_checkpoint(_resolve_model_path(args.model, "induction"))
    for beam in beams:
        for n_obs in n_observed:
            trimmed = [Instance(d.observed[:n_obs], d.assessment, d.reference, d.noise) for d in data]
            if args.mode == "synthesis":
                system = SynthesisSystem(model, vocab, SynthesisOptions(beam=beam, dp=args.dp, metric=args.metric))
            else:
                system = InductionSystem(model, InductionOptions(beam=beam))
            config = {
                "mode": args.mode,
                "beam": beam,
                "n_observed": n_obs,
                "metric": args.metric if args.mode == "synthesis" else None,
                "dataset": str(args.dataset),
                "instances": len(trimmed),
            }
            report = noise_sweep(system, trimmed, levels, seed=args.seed, config=config)
            reports.append(report)
            if args.text:
                print(f"# beam={beam} n_observed={n_obs}")
                print(report.to_text())
    payload = reports[0].to_json() if len(reports) == 1 else {"reports": [r.to_json() for r in reports]}
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        print(f"wrote report to {args.out}")
    else:
        print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def cmd_serve(args) -> int:
    from .service import serve

    serve(
        synthesis_path=args.synthesis_model,
        induction_path=args.induction_model,
        host=args.host,
        port=args.port,
        dsl=args.config,
    )
    return 0


def cmd_apply(args) -> int:
    try:
        program = parse_program(args.program)
    except ValueError as err:
        raise UsageError(f"bad program text: {err}") from None
    for fill in apply_program(program, args.inputs):
        print(f"{fill['input']!r} -> {fill['output']!r}" if fill["error"] is None else f"{fill['input']!r} -> error: {fill['error']}")
    return 0


# ---------------------------------------------------------------------- main
def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="robustfill", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("sample", help="generate a synthetic dataset file")
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--count", type=int, required=True)
    ps.add_argument("--out", required=True)
    ps.add_argument("--noise", default="0", help="per-instance edits, e.g. 0 or 0..3 or 0,2")
    _add_sampler_args(ps)
    ps.set_defaults(fn=cmd_sample)

    pt = sub.add_parser("train", help="train a synthesis or induction model")
    pt.add_argument("--mode", choices=["synthesis", "induction"], default="synthesis")
    pt.add_argument("--arch", default="attention-a",
                    choices=["basic", "attention-a", "attention-b", "attention-c"])
    pt.add_argument("--out", required=True)
    pt.add_argument("--dataset", help="train from a dataset file instead of the generator stream")
    pt.add_argument("--steps", type=int, default=2000)
    pt.add_argument("--batch-size", type=int, default=16)
    pt.add_argument("--lr", type=float, default=0.5)
    pt.add_argument("--lr-decay", type=float, default=0.5)
    pt.add_argument("--lr-decay-every", type=int, default=0)
    pt.add_argument("--clip", type=float, default=1.0)
    pt.add_argument("--seed", type=int, default=0)
    pt.add_argument("--noise", default="0..3", help="training noise levels, e.g. 0..3 or 0")
    pt.add_argument("--n-examples", type=int, default=4)
    pt.add_argument("--d", type=int, default=64, help="hidden size")
    pt.add_argument("--emb", type=int, default=32, help="embedding size")
    pt.add_argument("--dtype", default="float32", choices=["float32", "float64"])
    pt.add_argument("--resume", help="checkpoint to continue from")
    pt.add_argument("--metrics", help="append step metrics (JSONL) here")
    pt.add_argument("--verbose", action="store_true")
    _add_sampler_args(pt)
    pt.set_defaults(fn=cmd_train)

    pr = sub.add_parser("run", help="synthesize (or induce) from inline examples")
    pr.add_argument("--model", help=f"checkpoint path (default ${MODEL_DIR_ENV}/<mode>.ckpt)")
    pr.add_argument("--examples", help='JSON list of [input, output] pairs')
    pr.add_argument("--instances", help="dataset file to take observed examples from")
    pr.add_argument("--index", type=int, default=0)
    pr.add_argument("--apply", nargs="*", help="unpaired inputs to fill")
    pr.add_argument("--mode", choices=["synthesis", "induction"], default="synthesis")
    pr.add_argument("--beam", type=int, default=10)
    pr.add_argument("--dp", action=argparse.BooleanOptionalAction, default=None)
    pr.add_argument("--metric", choices=["exact", "cer"], default="exact")
    pr.add_argument("--config", default="full")
    pr.set_defaults(fn=cmd_run)

    pe = sub.add_parser("eval", help="evaluate a model over a dataset with sweeps")
    pe.add_argument("--model")
    pe.add_argument("--dataset", required=True)
    pe.add_argument("--mode", choices=["synthesis", "induction"], default="synthesis")
    pe.add_argument("--beams", default="10")
    pe.add_argument("--noise-levels", default="0")
    pe.add_argument("--n-observed", default="4")
    pe.add_argument("--metric", choices=["exact", "cer"], default="exact")
    pe.add_argument("--dp", action=argparse.BooleanOptionalAction, default=None)
    pe.add_argument("--seed", type=int, default=0)
    pe.add_argument("--limit", type=int, default=0)
    pe.add_argument("--out")
    pe.add_argument("--text", action="store_true", help="also print aligned tables")
    pe.add_argument("--config", default="full")
    pe.set_defaults(fn=cmd_eval)

    pv = sub.add_parser("serve", help="HTTP service for synthesis/induction")
    pv.add_argument("--synthesis-model")
    pv.add_argument("--induction-model")
    pv.add_argument("--host", default="127.0.0.1")
    pv.add_argument("--port", type=int, default=8642)
    pv.add_argument("--config", default="full")
    pv.set_defaults(fn=cmd_serve)

    pd = sub.add_parser("vocab-dump", help="print the program-token vocabulary")
    pd.add_argument("--config", default="full")
    pd.add_argument("--list", action="store_true", help="print every token")
    pd.set_defaults(fn=cmd_vocab_dump)

    pa = sub.add_parser("apply", help="apply a program text to inputs (no model)")
    pa.add_argument("--program", required=True)
    pa.add_argument("inputs", nargs="*")
    pa.set_defaults(fn=cmd_apply)

    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except TrainingDiverged as err:
        print(f"training aborted: {err}", file=sys.stderr)
        return 1
    except FileNotFoundError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        return 1


if __name__ == "__main__":
    sys.exit(main())
