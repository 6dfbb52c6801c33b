"""Prompt templates, generation backends (http, replay, synthetic) and retrievers."""

from __future__ import annotations

import hashlib
import json
import os
import random
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, Protocol

import httpx

from .exceptions import (
    BackendError,
    BackendTimeout,
    MissingFixtureError,
    RetrievalFixtureError,
    SchemaError,
    TemplateError,
)

SSC_TEMPERATURE = 0.85
DEFAULT_TOP_K = 5
API_KEY_ENV = "PHCROUTE_API_KEY"

VANILLA_HEAD = "Answer the question based on the provided passages.\nBe specific and concise. Question: {question}"
RATING_SYSTEM = (
    "You are an honest epistemic evaluator. Rate whether the provided passages "
    "sufficiently support answering the question. Return ONLY a number 0.0--1.0."
)
M1_NOTICE = (
    "CALIBRATION NOTICE: You have been given {k} of approximately {n} intermediate facts. "
    "You are MISSING {missing} intermediate reasoning steps. "
    "Express genuine uncertainty about the parts you cannot verify from the provided facts."
)
M2_INSTRUCTION = "Rate your confidence [CONFIDENCE: X/5]."
SUBQ_INSTRUCTION = (
    "Identify the single missing fact needed to answer the question, given this "
    "uncertain draft answer. Return ONLY the sub-question."
)

TEMPLATE_IDS = (
    "vanilla_qa",
    "regeneration",
    "grounded_rating",
    "subq_extraction",
    "intervention",
    "m1",
    "m2",
    "graph_qa",
)
_SLOTS = {
    "vanilla_qa": ("question", "passages"),
    "regeneration": ("question", "initial_answer", "graph_passages"),
    "grounded_rating": ("question", "passages"),
    "subq_extraction": ("question", "initial_answer"),
    "intervention": ("question", "passages", "facts"),
    "m1": ("question", "passages", "facts", "k", "n"),
    "m2": ("question", "passages", "facts"),
    "graph_qa": ("question", "graph_passages"),
}


def format_passages(passages) -> str:
    return "\n\n".join(f"Passage {i}: {p}" for i, p in enumerate(passages, start=1))


def format_facts(steps) -> str:
    lines = ["Confirmed facts:"]
    for i, step in enumerate(steps, start=1):
        q, a = (step.sub_question, step.sub_answer) if hasattr(step, "sub_question") else step
        lines.append(f"Fact {i}: {q} — {a}")
    return "\n".join(lines)


def _qa_body(question, passages, facts) -> str:
    """Question, optional passage block, optional facts block, then ``Answer:``.

    ``passages=None`` drops the passage block entirely (zero-retrieval);
    an empty list keeps the header with nothing under it.
    """
    parts = [VANILLA_HEAD.format(question=question)]
    if passages is not None:
        parts.append("Passages:\n" + format_passages(passages))
    if facts:
        parts.append(format_facts(facts))
    parts.append("Answer:")
    return "\n".join(parts)


def render_prompt(template_id: str, slots: dict) -> str:
    """Render a template byte-exactly. Every slot listed for the template is required."""
    if template_id not in _SLOTS:
        raise TemplateError(template_id, "<template>")
    for slot in _SLOTS[template_id]:
        if slot not in slots:
            raise TemplateError(template_id, slot)
    s = slots
    if template_id == "vanilla_qa":
        return _qa_body(s["question"], s["passages"], None)
    if template_id == "intervention":
        return _qa_body(s["question"], s["passages"], s["facts"])
    if template_id == "m1":
        k, n = int(s["k"]), int(s["n"])
        notice = M1_NOTICE.format(k=k, n=n, missing=n - k)
        return notice + "\n" + _qa_body(s["question"], s["passages"], s["facts"])
    if template_id == "m2":
        return _qa_body(s["question"], s["passages"], s["facts"]) + "\n" + M2_INSTRUCTION
    if template_id == "grounded_rating":
        return (
            f"Question: {s['question']}\n"
            f"Retrieved passages: {format_passages(s['passages'])}\n"
            "On a scale of 0.0--1.0, how well do these passages support answering?"
        )
    if template_id == "regeneration":
        return (
            "The initial answer to the question was uncertain.\n"
            "Additional evidence has been retrieved from a knowledge graph.\n"
            "Please provide a more specific and accurate answer.\n"
            f"Question: {s['question']}\n"
            f"Initial answer: {s['initial_answer']}\n"
            f"Additional KG context: {format_passages(s['graph_passages'])}\n"
            "Answer:"
        )
    if template_id == "subq_extraction":
        return f"{SUBQ_INSTRUCTION}\nQuestion: {s['question']}\nDraft answer: {s['initial_answer']}\nSub-question:"
    # graph_qa
    return (
        "Answer the question using the knowledge-graph context.\n"
        f"Question: {s['question']}\n"
        f"KG context: {format_passages(s['graph_passages'])}\n"
        "Answer:"
    )


def system_message(template_id: str) -> Optional[str]:
    return RATING_SYSTEM if template_id == "grounded_rating" else None


@dataclass(frozen=True)
class GenerationRequest:
    template_id: str
    rendered_prompt: str
    temperature: float = 0.0
    sample_index: int = 0
    max_tokens: int = 256
    query_id: Optional[str] = None

    def __post_init__(self):
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.sample_index < 0:
            raise ValueError("sample_index must be >= 0")


@dataclass(frozen=True)
class GenerationResult:
    text: str
    latency_ms: float
    backend: str


def replay_key(request: GenerationRequest) -> str:
    payload = "\x1f".join(
        [
            request.template_id,
            request.rendered_prompt,
            f"{request.temperature:.2f}",
            str(int(request.sample_index)),
        ]
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class Generator(Protocol):
    name: str

    def generate(self, request: GenerationRequest) -> GenerationResult: ...


class CallLog:
    """Thread-safe count of generate() calls per template, for cost audits."""

    def __init__(self):
        self._lock = threading.Lock()
        self.counts: dict[str, int] = {}

    def add(self, template_id: str) -> None:
        with self._lock:
            self.counts[template_id] = self.counts.get(template_id, 0) + 1

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def _read_jsonl(path):
    with open(path, encoding="utf-8") as fh:
        for index, line in enumerate(fh):
            if line.strip():
                try:
                    yield index, json.loads(line)
                except json.JSONDecodeError as exc:
                    raise SchemaError(f"{path}: invalid JSON ({exc.msg})", index=index) from exc


class ReplayBackend:
    """Serves generations from fixture JSONL records ``{"key", "text", "latency_ms"}``."""

    name = "replay"

    def __init__(self, paths=(), records: Optional[dict] = None):
        self.table: dict[str, tuple[str, float]] = dict(records or {})
        if isinstance(paths, (str, Path)):
            paths = [paths]
        for path in paths:
            for index, obj in _read_jsonl(path):
                try:
                    key, text = obj["key"], obj["text"]
                    latency = float(obj.get("latency_ms", 0.0))
                except (KeyError, TypeError, ValueError) as exc:
                    raise SchemaError(f"{path}: malformed replay record", index=index) from exc
                self.table[key] = (text, latency)
        self.log = CallLog()

    def generate(self, request: GenerationRequest) -> GenerationResult:
        key = replay_key(request)
        self.log.add(request.template_id)
        try:
            text, latency = self.table[key]
        except KeyError:
            raise MissingFixtureError(key, query_id=request.query_id) from None
        return GenerationResult(text, latency, "replay")


class RecordingBackend:
    """Wraps another generator and remembers every result under its replay key."""

    def __init__(self, inner):
        self.inner = inner
        self.name = inner.name
        self._lock = threading.Lock()
        self.records: dict[str, dict] = {}
        self.log = CallLog()

    def generate(self, request: GenerationRequest) -> GenerationResult:
        res = self.inner.generate(request)
        self.log.add(request.template_id)
        key = replay_key(request)
        with self._lock:
            self.records[key] = {"key": key, "text": res.text, "latency_ms": res.latency_ms}
        return GenerationResult(res.text, res.latency_ms, res.backend)

    def dump(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for key in sorted(self.records):
                fh.write(json.dumps(self.records[key], ensure_ascii=False, sort_keys=True) + "\n")


RETRYABLE_STATUS = frozenset({408, 409, 425, 429, 500, 502, 503, 504})


class HttpBackend:
    """OpenAI-compatible chat-completions client.

    The credential is read from the environment variable named by
    ``api_key_env``. Transient failures are retried ``max_retries`` times with
    exponential backoff ``backoff * 2**attempt``.
    """

    name = "http"

    def __init__(
        self,
        endpoint: str,
        model: str,
        api_key_env: str = API_KEY_ENV,
        max_retries: int = 3,
        backoff: float = 0.5,
        timeout: float = 60.0,
        headers: Optional[dict] = None,
        transport: Optional[httpx.BaseTransport] = None,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self.url = endpoint.rstrip("/")
        if not self.url.endswith("/chat/completions"):
            self.url += "/chat/completions"
        self.model = model
        self.max_retries = max_retries
        self.backoff = backoff
        self.sleep = sleep
        hdrs = {"Content-Type": "application/json", **(headers or {})}
        key = os.environ.get(api_key_env)
        if key:
            hdrs["Authorization"] = f"Bearer {key}"
        self.client = httpx.Client(timeout=timeout, headers=hdrs, transport=transport)
        self.log = CallLog()

    def payload(self, request: GenerationRequest) -> dict:
        messages = []
        system = system_message(request.template_id)
        if system:
            messages.append({"role": "system", "content": system})
        messages.append({"role": "user", "content": request.rendered_prompt})
        return {
            "model": self.model,
            "messages": messages,
            "temperature": request.temperature,
            "max_tokens": request.max_tokens,
        }

    def generate(self, request: GenerationRequest) -> GenerationResult:
        body = self.payload(request)
        self.log.add(request.template_id)
        last_exc: Optional[Exception] = None
        for attempt in range(self.max_retries + 1):
            if attempt:
                self.sleep(self.backoff * 2 ** (attempt - 1))
            start = time.perf_counter()
            try:
                resp = self.client.post(self.url, json=body)
            except httpx.TimeoutException as exc:
                last_exc = BackendTimeout(f"request timed out: {exc}", query_id=request.query_id)
                continue
            except httpx.TransportError as exc:
                last_exc = BackendError(f"transport error: {exc}", query_id=request.query_id)
                continue
            latency = (time.perf_counter() - start) * 1000.0
            if resp.status_code in RETRYABLE_STATUS:
                last_exc = BackendError(
                    f"HTTP {resp.status_code}", status=resp.status_code, query_id=request.query_id
                )
                continue
            if resp.status_code >= 400:
                raise BackendError(
                    f"HTTP {resp.status_code}: {resp.text[:200]}",
                    status=resp.status_code,
                    query_id=request.query_id,
                )
            try:
                text = resp.json()["choices"][0]["message"]["content"]
            except (ValueError, KeyError, IndexError, TypeError) as exc:
                raise BackendError(
                    f"malformed completion payload: {exc}", status=resp.status_code, query_id=request.query_id
                ) from exc
            return GenerationResult(text or "", latency, "http")
        assert last_exc is not None
        raise last_exc

    def close(self) -> None:
        self.client.close()


class SyntheticBackend:
    """Deterministic text generator for offline runs.

    Each reply is a pure function of the request and ``seed``. Answers are the
    gold answer or a distractor, optionally wrapped in a hedge, with
    probabilities set per template. ``lookup`` maps a query id to its record.
    """

    name = "synthetic"

    def __init__(self, lookup: dict, seed: int = 0, p_correct: float = 0.4, p_correct_graph: float = 0.65,
                 p_hedge: float = 0.35, latency_ms: float = 23.0, graph_latency_ms: float = 114.0):
        self.lookup = lookup
        self.seed = seed
        self.p_correct = p_correct
        self.p_correct_graph = p_correct_graph
        self.p_hedge = p_hedge
        self.latency_ms = latency_ms
        self.graph_latency_ms = graph_latency_ms
        self.log = CallLog()

    def _rng(self, request):
        digest = hashlib.sha256(f"{self.seed}\x1f{replay_key(request)}".encode()).digest()
        return random.Random(int.from_bytes(digest[:8], "big"))

    def generate(self, request: GenerationRequest) -> GenerationResult:
        self.log.add(request.template_id)
        rng = self._rng(request)
        rec = self.lookup.get(request.query_id)
        if rec is None:
            raise BackendError("synthetic backend has no record for this query", query_id=request.query_id)
        tid = request.template_id
        if tid == "grounded_rating":
            return GenerationResult(f"{rng.randint(0, 10) / 10:.1f}", self.latency_ms, "synthetic")
        if tid == "subq_extraction":
            step = rec.decomposition[0].sub_question if rec.decomposition else f"What is asked in: {rec.question}"
            return GenerationResult(step, self.latency_ms, "synthetic")
        graphish = tid in ("graph_qa", "regeneration")
        p = self.p_correct_graph if graphish else self.p_correct
        gold = rec.gold_answers[0]
        if rng.random() < p:
            text = gold
        else:
            text = rng.choice(["Unknown", "Springfield", "1901", "the committee", "John Smith"])
        if rng.random() < self.p_hedge:
            text = f"{rng.choice(['I believe', 'Possibly', 'Perhaps'])} {text}"
        latency = self.graph_latency_ms if graphish else self.latency_ms
        return GenerationResult(text, latency, "synthetic")


class FixtureRetriever:
    """Per-query passages from JSONL records ``{"query_id", "passages"}``."""

    def __init__(self, path=None, table: Optional[dict] = None):
        self.table: dict[str, list[str]] = {k: list(v) for k, v in (table or {}).items()}
        if path is not None:
            for index, obj in _read_jsonl(path):
                if not isinstance(obj, dict) or "query_id" not in obj or not isinstance(obj.get("passages"), list):
                    raise SchemaError(f"{path}: malformed retrieval record", index=index)
                self.table[str(obj["query_id"])] = list(obj["passages"])

    def retrieve(self, query_id: str, question: str = "", k: int = DEFAULT_TOP_K) -> list[str]:
        try:
            return self.table[query_id][:k]
        except KeyError:
            raise RetrievalFixtureError(query_id) from None


class InlineRetriever:
    """Uses passages stored on the query records themselves."""

    def __init__(self, records):
        self.table = {r.id: list(r.passages or []) for r in records}

    def retrieve(self, query_id: str, question: str = "", k: int = DEFAULT_TOP_K) -> list[str]:
        if query_id not in self.table:
            raise RetrievalFixtureError(query_id)
        return self.table[query_id][:k]


class CallableRetriever:
    """External retriever hook: ``fn(query_id, question, k) -> list[str]``."""

    def __init__(self, fn):
        self.fn = fn

    def retrieve(self, query_id: str, question: str = "", k: int = DEFAULT_TOP_K) -> list[str]:
        return list(self.fn(query_id, question, k))[:k]


def retrieve(question: str, k: int = DEFAULT_TOP_K, store=None, query_id: Optional[str] = None) -> list[str]:
    if store is None:
        raise ValueError("retrieve needs a store")
    return store.retrieve(query_id if query_id is not None else question, question, k)


@dataclass
class Backends:
    """Everything the pipeline needs to answer and escalate queries."""

    generator: object
    retriever: object
    graph_generator: object = None
    graph_retriever: object = None
    top_k: int = DEFAULT_TOP_K
    ssc_temperature: float = SSC_TEMPERATURE
    max_inflight: int = 4
    max_tokens: int = 256

    def __post_init__(self):
        if self.graph_generator is None:
            self.graph_generator = self.generator
        if self.max_inflight < 1:
            raise ValueError("max_inflight must be >= 1")


def load_backend_config(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise SchemaError("backend config must be a JSON object")
    return cfg


def build_generator(kind: str, config: Optional[dict] = None, replay_paths=(), lookup=None):
    cfg = dict(config or {})
    if kind == "replay":
        return ReplayBackend(list(replay_paths) or cfg.get("replay", []))
    if kind == "http":
        if "endpoint" not in cfg or "model" not in cfg:
            raise BackendError("http backend needs 'endpoint' and 'model' in the config file")
        retry = cfg.get("retry", {})
        return HttpBackend(
            cfg["endpoint"],
            cfg["model"],
            api_key_env=cfg.get("api_key_env", API_KEY_ENV),
            max_retries=retry.get("max_retries", 3),
            backoff=retry.get("backoff", 0.5),
            timeout=cfg.get("timeout", 60.0),
            headers=cfg.get("headers"),
        )
    if kind == "synthetic":
        return SyntheticBackend(lookup or {}, **cfg.get("synthetic", {}))
    raise ValueError(f"unknown backend {kind!r}")
