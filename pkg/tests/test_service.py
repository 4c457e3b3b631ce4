"""HTTP service contract, exercised over a real socket."""

import itertools
import json
import urllib.error
import urllib.request

import numpy as np
import pytest

from robustfill.dsl import build_vocabulary, toy_config
from robustfill.gen import SamplerConfig, generate_corpus
from robustfill.nn import TrainConfig, build_model, make_synthesis_batch, save_checkpoint, synthesis_config, train
from robustfill.service import create_server, run_in_thread

VOCAB = build_vocabulary(toy_config())
SAMPLER = SamplerConfig(dsl=toy_config(), min_input_length=4, max_input_length=12)


@pytest.fixture(scope="module")
def server_url(tmp_path_factory):
    # a synthesis model memorized on a few instances plus an untrained
    # induction model: enough for contract tests
    pool = generate_corpus(seed=5, count=5, cfg=SAMPLER)
    cfg = synthesis_config(VOCAB, architecture="attention-a", hidden_size=32, embedding_size=16, dtype="float64")
    model = build_model(cfg, seed=0)
    batch = make_synthesis_batch(pool, VOCAB, np.float64)
    train(model, itertools.repeat(batch), TrainConfig(steps=400, batch_size=5, learning_rate=0.5, clip_norm=1.0, seed=0))
    root = tmp_path_factory.mktemp("svc")
    path = root / "synth.ckpt"
    save_checkpoint(path, model)
    from robustfill.nn import induction_config

    ind = build_model(induction_config(vocab_hash=VOCAB.hash, hidden_size=16, embedding_size=8, dtype="float64"), seed=0)
    ind_path = root / "ind.ckpt"
    save_checkpoint(ind_path, ind)

    server = create_server(synthesis_path=str(path), induction_path=str(ind_path),
                           host="127.0.0.1", port=0, dsl="toy")
    run_in_thread(server)
    host, port = server.server_address
    yield f"http://{host}:{port}", pool, str(path)
    server.shutdown()
    server.server_close()


def call(url, path, payload=None, method=None):
    if payload is None:
        req = urllib.request.Request(url + path, method=method or "GET")
    else:
        req = urllib.request.Request(
            url + path,
            data=json.dumps(payload).encode(),
            headers={"Content-Type": "application/json"},
            method=method or "POST",
        )
    try:
        with urllib.request.urlopen(req, timeout=30) as resp:
            return resp.status, json.loads(resp.read().decode()), dict(resp.headers)
    except urllib.error.HTTPError as err:
        return err.code, json.loads(err.read().decode()), dict(err.headers)


def test_health(server_url):
    url, _, _ = server_url
    status, body, headers = call(url, "/api/health")
    assert status == 200
    assert body["status"] == "ok"
    assert body["model"] == VOCAB.hash
    assert headers.get("Access-Control-Allow-Origin") == "*"


def test_vocab_endpoint(server_url):
    url, _, _ = server_url
    status, body, _ = call(url, "/api/vocab")
    assert status == 200
    assert body["size"] == len(VOCAB.tokens)
    assert body["hash"] == VOCAB.hash
    assert body["tokens"][0] == "<eos>"


def test_apply_name_flip(server_url):
    url, _, _ = server_url
    status, body, _ = call(
        url,
        "/api/apply",
        {
            "program_text": "GetToken(Word, -1) | ConstStr(',') | ConstStr(' ') | ToCase(Proper, GetToken(Word, 1))",
            "inputs": ["Steve P. Green (9)", "Laura Jane Jones"],
        },
    )
    assert status == 200
    assert body["fills"][0]["output"] == "Green, Steve"
    assert body["fills"][1]["output"] == "Jones, Laura"


def test_apply_parse_error_400(server_url):
    url, _, _ = server_url
    status, body, _ = call(url, "/api/apply", {"program_text": "Huh(", "inputs": ["x"]})
    assert status == 400
    assert body["error"]["field"] == "program_text"


def test_synthesize_contract(server_url):
    url, pool, _ = server_url
    inst = pool[0]
    payload = {
        "observed": [[i, o] for i, o in inst.observed],
        "unpaired_inputs": [inst.assessment[0][0]],
        "options": {"beam": 10, "metric": "exact"},
    }
    status, body, _ = call(url, "/api/synthesize", payload)
    assert status in (200, 422)
    assert set(body) >= {"program_text", "consistent", "fills", "candidates_considered", "latency_ms"}
    assert len(body["fills"]) == 1
    assert body["fills"][0]["input"] == inst.assessment[0][0]
    if status == 200:
        assert body["consistent"] is True
        assert body["program_text"]


def test_synthesize_validation_400(server_url):
    url, _, _ = server_url
    cases = [
        ({}, "observed"),
        ({"observed": []}, "observed"),
        ({"observed": [["a"]]}, "observed[0]"),
        ({"observed": [["a", "b" * 300]]}, "observed[0][1]"),
        ({"observed": [["a", "b"]], "options": {"beam": 0}}, "options.beam"),
        ({"observed": [["a", "b"]], "options": {"metric": "fuzzy"}}, "options.metric"),
        ({"observed": [["a", "\x07"]]}, "observed[0][1]"),
        ({"observed": [["a", "b"]], "unpaired_inputs": ["x"] * 51}, "unpaired_inputs"),
    ]
    for payload, field in cases:
        status, body, _ = call(url, "/api/synthesize", payload)
        assert status == 400, payload
        assert body["error"]["field"] == field


def test_induce_contract(server_url):
    url, pool, _ = server_url
    inst = pool[0]
    payload = {
        "observed": [[i, o] for i, o in inst.observed],
        "unpaired_inputs": [inst.assessment[0][0], inst.assessment[1][0]],
        "options": {"beam": 3},
    }
    status, body, _ = call(url, "/api/induce", payload)
    assert status == 200
    assert body["program_text"] is None  # induction has no program
    assert [f["input"] for f in body["fills"]] == payload["unpaired_inputs"]
    assert all(isinstance(f["output"], str) for f in body["fills"])


def test_induce_without_model_400(server_url):
    # a server loaded with only a synthesis model refuses induction calls
    _, _, synth_path = server_url
    from robustfill.service import create_server, run_in_thread

    solo = create_server(synthesis_path=synth_path, host="127.0.0.1", port=0, dsl="toy")
    run_in_thread(solo)
    host, port = solo.server_address
    try:
        status, body, _ = call(f"http://{host}:{port}", "/api/induce",
                               {"observed": [["a", "b"]], "unpaired_inputs": ["c"]})
        assert status == 400
        assert body["error"]["field"] == "mode"
    finally:
        solo.shutdown()
        solo.server_close()


def test_malformed_json_400(server_url):
    url, _, _ = server_url
    req = urllib.request.Request(
        url + "/api/synthesize", data=b"{oops", headers={"Content-Type": "application/json"}
    )
    try:
        with urllib.request.urlopen(req, timeout=30) as resp:
            status, body = resp.status, json.loads(resp.read().decode())
    except urllib.error.HTTPError as err:
        status, body = err.code, json.loads(err.read().decode())
    assert status == 400
    assert body["error"]["field"] == "body"


def test_options_preflight(server_url):
    url, _, _ = server_url
    req = urllib.request.Request(url + "/api/synthesize", method="OPTIONS")
    with urllib.request.urlopen(req, timeout=30) as resp:
        assert resp.status == 204
        assert resp.headers.get("Access-Control-Allow-Methods")


def test_identical_requests_identical_responses(server_url):
    url, pool, _ = server_url
    inst = pool[1]
    payload = {
        "observed": [[i, o] for i, o in inst.observed],
        "unpaired_inputs": [inst.assessment[0][0]],
        "options": {"beam": 5},
    }
    s1, b1, _ = call(url, "/api/synthesize", payload)
    s2, b2, _ = call(url, "/api/synthesize", payload)
    b1.pop("latency_ms")
    b2.pop("latency_ms")
    assert s1 == s2 and b1 == b2


def test_unknown_route_404(server_url):
    url, _, _ = server_url
    status, _, _ = call(url, "/api/nothing")
    assert status == 404
