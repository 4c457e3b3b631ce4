"""HTTP service exposing synthesis, induction, and program application.

Endpoints (JSON bodies, UTF-8, CORS enabled):

    POST /api/synthesize  {observed, unpaired_inputs?, options?} -> result
    POST /api/induce      {observed, unpaired_inputs, options?}  -> fills
    POST /api/apply       {program_text, inputs}                 -> fills
    GET  /api/health      -> {"status": "ok", "model": "<hash>"}
    GET  /api/vocab       -> {"size", "hash", "tokens"}

Requests are validated up front (400 with a field-level message); a
synthesis call that finds no consistent program answers 422 (the body still
carries the best-effort candidate under the cer metric). Loaded parameters
are immutable and shared across requests; per-request decode state is
private, so concurrent requests are safe.
"""

from __future__ import annotations

import json
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .dsl import PRINTABLE, build_vocabulary, full_config, parse_program, toy_config
from .nn import load_checkpoint
from .search import InductionOptions, SynthesisOptions, apply_program, induce, synthesize

MAX_STRING = 256
MAX_OBSERVED = 10
MAX_UNPAIRED = 50


class RequestError(ValueError):
    def __init__(self, field: str, message: str):
        super().__init__(message)
        self.field = field
        self.message = message


def _check_string(value, field: str) -> str:
    if not isinstance(value, str):
        raise RequestError(field, "must be a string")
    if len(value) > MAX_STRING:
        raise RequestError(field, f"longer than {MAX_STRING} characters")
    if any(ch not in PRINTABLE for ch in value):
        raise RequestError(field, "must be printable ASCII")
    return value


def _check_pairs(value, field: str) -> list[tuple[str, str]]:
    if not isinstance(value, list) or not value:
        raise RequestError(field, "must be a non-empty list of [input, output] pairs")
    if len(value) > MAX_OBSERVED:
        raise RequestError(field, f"at most {MAX_OBSERVED} pairs")
    pairs = []
    for i, item in enumerate(value):
        if not isinstance(item, (list, tuple)) or len(item) != 2:
            raise RequestError(f"{field}[{i}]", "must be an [input, output] pair")
        pairs.append((_check_string(item[0], f"{field}[{i}][0]"), _check_string(item[1], f"{field}[{i}][1]")))
        if not pairs[-1][0] or not pairs[-1][1]:
            raise RequestError(f"{field}[{i}]", "strings must be non-empty")
    return pairs


def _check_inputs(value, field: str, allow_empty: bool = True) -> list[str]:
    if value is None:
        value = []
    if not isinstance(value, list):
        raise RequestError(field, "must be a list of strings")
    if len(value) > MAX_UNPAIRED:
        raise RequestError(field, f"at most {MAX_UNPAIRED} inputs")
    if not allow_empty and not value:
        raise RequestError(field, "must be non-empty")
    out = []
    for i, item in enumerate(value):
        s = _check_string(item, f"{field}[{i}]")
        if not s:
            raise RequestError(f"{field}[{i}]", "must be non-empty")
        out.append(s)
    return out


def _synthesis_options(raw) -> SynthesisOptions:
    raw = raw or {}
    if not isinstance(raw, dict):
        raise RequestError("options", "must be an object")
    beam = raw.get("beam", 10)
    if not isinstance(beam, int) or not 1 <= beam <= 1000:
        raise RequestError("options.beam", "must be an integer in [1, 1000]")
    metric = raw.get("metric", "exact")
    if metric not in ("exact", "cer"):
        raise RequestError("options.metric", "must be 'exact' or 'cer'")
    dp = raw.get("dp")
    if dp is not None and not isinstance(dp, bool):
        raise RequestError("options.dp", "must be a boolean")
    return SynthesisOptions(beam=beam, dp=dp, metric=metric)


class ModelHolder:
    """Shared immutable models; swap is atomic (attribute assignment)."""

    def __init__(self, synthesis=None, induction=None, vocab=None):
        self.synthesis = synthesis
        self.induction = induction
        self.vocab = vocab

    @property
    def health_hash(self) -> str:
        if self.synthesis is not None:
            return self.synthesis.config.vocab_hash
        if self.induction is not None:
            return self.induction.config.vocab_hash
        return "none"


def make_handler(holder: ModelHolder):
    class Handler(BaseHTTPRequestHandler):
        server_version = "robustfill/0.1"
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):  # quiet by default
            pass

        # ------------------------------------------------------------ plumbing
        def _send(self, code: int, payload: dict) -> None:
            body = json.dumps(payload).encode("utf-8")
            self.send_response(code)
            self.send_header("Content-Type", "application/json; charset=utf-8")
            self.send_header("Content-Length", str(len(body)))
            self._cors()
            self.end_headers()
            self.wfile.write(body)

        def _cors(self) -> None:
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")

        def _body(self) -> dict:
            length = int(self.headers.get("Content-Length") or 0)
            raw = self.rfile.read(length) if length else b""
            if not raw:
                raise RequestError("body", "missing JSON body")
            try:
                data = json.loads(raw.decode("utf-8"))
            except (UnicodeDecodeError, json.JSONDecodeError) as err:
                raise RequestError("body", f"invalid JSON: {err}") from None
            if not isinstance(data, dict):
                raise RequestError("body", "must be a JSON object")
            return data

        def do_OPTIONS(self):  # CORS preflight
            self.send_response(204)
            self._cors()
            self.send_header("Content-Length", "0")
            self.end_headers()

        # ------------------------------------------------------------- routes
        def do_GET(self):
            try:
                if self.path == "/api/health":
                    self._send(200, {"status": "ok", "model": holder.health_hash})
                elif self.path == "/api/vocab":
                    v = holder.vocab
                    self._send(200, {"size": len(v), "hash": v.hash, "tokens": v.tokens})
                else:
                    self._send(404, {"error": "not found"})
            except Exception:
                self._send(500, {"error": "internal error"})

        def do_POST(self):
            try:
                data = self._body()
                if self.path == "/api/synthesize":
                    self._synthesize(data)
                elif self.path == "/api/induce":
                    self._induce(data)
                elif self.path == "/api/apply":
                    self._apply(data)
                else:
                    self._send(404, {"error": "not found"})
            except RequestError as err:
                self._send(400, {"error": {"field": err.field, "message": err.message}})
            except Exception:
                self._send(500, {"error": "internal error"})

        def _synthesize(self, data: dict) -> None:
            if holder.synthesis is None:
                self._send(400, {"error": {"field": "mode", "message": "no synthesis model loaded"}})
                return
            observed = _check_pairs(data.get("observed"), "observed")
            unpaired = _check_inputs(data.get("unpaired_inputs"), "unpaired_inputs")
            opts = _synthesis_options(data.get("options"))
            result = synthesize(holder.synthesis, holder.vocab, observed, unpaired, opts)
            payload = {
                "program_text": result.program_text,
                "consistent": result.consistent,
                "fills": result.fills,
                "candidates_considered": result.candidates_tried,
                "latency_ms": round(result.latency_ms, 3),
                "score": result.score,
                "cer": result.cer,
                "metric": result.selection_metric,
            }
            self._send(200 if result.consistent else 422, payload)

        def _induce(self, data: dict) -> None:
            if holder.induction is None:
                self._send(400, {"error": {"field": "mode", "message": "no induction model loaded"}})
                return
            observed = _check_pairs(data.get("observed"), "observed")
            unpaired = _check_inputs(data.get("unpaired_inputs"), "unpaired_inputs", allow_empty=False)
            raw = data.get("options") or {}
            beam = raw.get("beam", 3) if isinstance(raw, dict) else 3
            if not isinstance(beam, int) or not 1 <= beam <= 100:
                raise RequestError("options.beam", "must be an integer in [1, 100]")
            t0 = time.perf_counter()
            outputs = induce(holder.induction, observed, unpaired, InductionOptions(beam=beam))
            fills = [{"input": i, "output": o, "error": None} for i, o in zip(unpaired, outputs)]
            self._send(200, {"program_text": None, "consistent": None, "fills": fills,
                             "latency_ms": round((time.perf_counter() - t0) * 1000.0, 3)})

        def _apply(self, data: dict) -> None:
            text = data.get("program_text")
            if not isinstance(text, str) or not text:
                raise RequestError("program_text", "must be a non-empty string")
            inputs = _check_inputs(data.get("inputs"), "inputs", allow_empty=False)
            try:
                program = parse_program(text)
            except ValueError as err:
                raise RequestError("program_text", f"parse error: {err}") from None
            self._send(200, {"fills": apply_program(program, inputs)})

    return Handler


def create_server(
    synthesis_path: str | None = None,
    induction_path: str | None = None,
    host: str = "127.0.0.1",
    port: int = 0,
    dsl: str = "full",
) -> ThreadingHTTPServer:
    vocab = build_vocabulary(full_config() if dsl == "full" else toy_config())
    synthesis_model = None
    induction_model = None
    if synthesis_path:
        synthesis_model, _ = load_checkpoint(synthesis_path, expect_vocab_hash=vocab.hash)
    if induction_path:
        induction_model, _ = load_checkpoint(induction_path)
        if induction_model.config.mode != "induction":
            raise ValueError(f"{induction_path} is not an induction checkpoint")
    if synthesis_model is None and induction_model is None:
        raise ValueError("need at least one model to serve")
    holder = ModelHolder(synthesis_model, induction_model, vocab)
    return ThreadingHTTPServer((host, port), make_handler(holder))


def serve(synthesis_path=None, induction_path=None, host="127.0.0.1", port=8642, dsl="full") -> None:
    server = create_server(synthesis_path, induction_path, host, port, dsl)
    addr = server.server_address
    print(f"serving on http://{addr[0]}:{addr[1]} (Ctrl-C to stop)")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()


def run_in_thread(server: ThreadingHTTPServer) -> threading.Thread:
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return thread
