"""CLI contract: subcommands, exit codes, deterministic files."""

import json
import subprocess
import sys

import pytest

from robustfill.cli import main
from robustfill.dsl import build_vocabulary, eval_program, toy_config
from robustfill.gen import read_dataset

TOY_VOCAB = build_vocabulary(toy_config())


def run_cli(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


def test_sample_deterministic_and_sound(tmp_path, capsys):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    for path in (a, b):
        code, out, _ = run_cli(
            ["sample", "--seed", "7", "--count", "20", "--out", str(path), "--config", "toy",
             "--min-input-length", "4", "--max-input-length", "12"],
            capsys,
        )
        assert code == 0 and "wrote 20 instances" in out
    assert a.read_bytes() == b.read_bytes()
    for inst in read_dataset(a):
        for s, o in inst.pairs:
            assert eval_program(inst.reference, s) == o
            assert 0 < len(o) <= 100


def test_sample_count_zero_gives_empty_file(tmp_path, capsys):
    path = tmp_path / "0.jsonl"
    code, _, _ = run_cli(["sample", "--seed", "1", "--count", "0", "--out", str(path)], capsys)
    assert code == 0
    assert path.read_bytes() == b""


def test_vocab_dump(capsys):
    code, out, _ = run_cli(["vocab-dump", "--config", "toy"], capsys)
    assert code == 0
    assert f"tokens: {len(TOY_VOCAB)}" in out
    assert TOY_VOCAB.hash in out
    code, out, _ = run_cli(["vocab-dump", "--config", "toy", "--list"], capsys)
    assert out.count("\n") > len(TOY_VOCAB)


def test_usage_error_exit_2(capsys):
    code, _, err = run_cli(["run", "--examples", "{not json", "--model", "nope.ckpt"], capsys)
    assert code == 2
    assert "JSON" in err


def test_unknown_subcommand_exits_2():
    proc = subprocess.run(
        [sys.executable, "-m", "robustfill.cli", "bogus"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 2


def test_apply_command_needs_no_model(capsys):
    code, out, _ = run_cli(
        ["apply", "--program", "GetToken(Word, -1) | ConstStr(',') | ConstStr(' ') | ToCase(Proper, GetToken(Word, 1))",
         "Steve P. Green (9)"],
        capsys,
    )
    assert code == 0
    assert "'Green, Steve'" in out


def test_apply_bad_program_exit_2(capsys):
    code, _, err = run_cli(["apply", "--program", "Nonsense(", "x"], capsys)
    assert code == 2 and "bad program" in err


@pytest.mark.slow
def test_train_run_eval_round_trip(tmp_path, capsys):
    # tiny end-to-end pass through the CLI surface (quality not asserted)
    data = tmp_path / "data.jsonl"
    model = tmp_path / "model.ckpt"
    report = tmp_path / "report.json"
    metrics = tmp_path / "metrics.jsonl"
    assert run_cli(["sample", "--seed", "3", "--count", "24", "--out", str(data), "--config", "toy",
                    "--min-input-length", "4", "--max-input-length", "12"], capsys)[0] == 0
    code, out, err = run_cli(
        ["train", "--mode", "synthesis", "--arch", "attention-a", "--out", str(model),
         "--dataset", str(data), "--steps", "8", "--batch-size", "4", "--d", "16", "--emb", "8",
         "--config", "toy", "--metrics", str(metrics), "--seed", "5"],
        capsys,
    )
    assert code == 0, err
    assert model.exists() and metrics.exists()

    code, out, err = run_cli(
        ["eval", "--model", str(model), "--dataset", str(data), "--config", "toy",
         "--beams", "1", "--noise-levels", "0", "--limit", "4", "--out", str(report), "--metric", "cer"],
        capsys,
    )
    assert code == 0, err
    payload = json.loads(report.read_text())
    assert payload["rows"][0]["instances"] == 4
    assert set(payload["rows"][0]) == {"noise", "consistency", "all_example", "average_example", "instances"}

    # sweeping beams x observed-counts x noise levels emits one report each
    code, out, err = run_cli(
        ["eval", "--model", str(model), "--dataset", str(data), "--config", "toy",
         "--beams", "1,2", "--n-observed", "1,4", "--noise-levels", "0,1", "--limit", "3",
         "--out", str(report), "--metric", "cer", "--text"],
        capsys,
    )
    assert code == 0, err
    payload = json.loads(report.read_text())
    assert len(payload["reports"]) == 4  # 2 beams x 2 observed counts
    for rep in payload["reports"]:
        assert [row["noise"] for row in rep["rows"]] == [0, 1]

    # resume training continues from the checkpoint
    code, out, err = run_cli(
        ["train", "--mode", "synthesis", "--out", str(model), "--dataset", str(data),
         "--steps", "12", "--batch-size", "4", "--d", "16", "--emb", "8",
         "--config", "toy", "--resume", str(model), "--seed", "5"],
        capsys,
    )
    assert code == 0, err
    assert "after 12 steps" in out

    # induction mode trains and emits per-input strings with no program line
    ind_model = tmp_path / "ind.ckpt"
    code, out, err = run_cli(
        ["train", "--mode", "induction", "--out", str(ind_model), "--dataset", str(data),
         "--steps", "6", "--batch-size", "4", "--d", "16", "--emb", "8",
         "--config", "toy", "--seed", "5"],
        capsys,
    )
    assert code == 0, err
    code, out, err = run_cli(
        ["run", "--mode", "induction", "--model", str(ind_model),
         "--examples", '[["abcd 1","ab"],["wxyz 2","wx"]]', "--apply", "qrst 3"],
        capsys,
    )
    assert code == 0, err
    assert "program:" not in out
    assert "'qrst 3' ->" in out


def test_run_requires_model_path_or_env(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("ROBUSTFILL_MODEL_DIR", raising=False)
    code, _, err = run_cli(["run", "--examples", "[[\"a\", \"b\"]]"], capsys)
    assert code == 2
    assert "ROBUSTFILL_MODEL_DIR" in err
