"""Dataset ingestion, stratification and the append-only run cache."""

from __future__ import annotations

import json
import os
from collections import OrderedDict
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable

from .exceptions import ParseError, SchemaError

DATASETS = ("hotpotqa", "musique", "nq", "2wiki", "custom")
QUERY_TYPES = ("factoid", "bridge", "comparison", "inference", "unknown")
SYSTEMS = ("vanilla", "graph", "cascaded", "direct", "intervention")
STRATIFY_KEYS = ("hop", "type", "dataset", "hop_and_type")


@dataclass(frozen=True)
class SubStep:
    sub_question: str
    sub_answer: str

    def __post_init__(self):
        if not self.sub_question or not self.sub_answer:
            raise SchemaError("decomposition steps need a sub_question and a sub_answer")


@dataclass(frozen=True)
class QueryRecord:
    id: str
    dataset: str
    question: str
    gold_answers: tuple[str, ...]
    hop_count: int
    query_type: str = "unknown"
    decomposition: tuple[SubStep, ...] = ()
    passages: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.dataset not in DATASETS:
            raise SchemaError(f"unknown dataset {self.dataset!r}")
        if self.query_type not in QUERY_TYPES:
            raise SchemaError(f"unknown query_type {self.query_type!r}")
        if not self.gold_answers:
            raise SchemaError(f"query {self.id}: at least one gold answer is required")
        if isinstance(self.hop_count, bool) or not isinstance(self.hop_count, int) or self.hop_count < 1:
            raise SchemaError(f"query {self.id}: hop_count must be an integer >= 1")
        if len(self.decomposition) > self.hop_count:
            raise SchemaError(f"query {self.id}: decomposition longer than hop_count")

    def to_json(self) -> dict:
        out = {
            "id": self.id,
            "dataset": self.dataset,
            "question": self.question,
            "answers": list(self.gold_answers),
            "hop_count": self.hop_count,
            "query_type": self.query_type,
            "decomposition": [asdict(s) for s in self.decomposition],
        }
        if self.passages is not None:
            out["passages"] = list(self.passages)
        return out


@dataclass
class RunRecord:
    """One system's answer to one query.

    ``aux_calls`` counts rating/SSC/sub-question calls, which are kept apart
    from the VR/GR counters.
    """

    query_id: str
    system: str
    condition_tag: str
    answer: str
    f1: float
    em: int
    rouge_l: float
    latency_ms: float
    vr_calls: int = 0
    gr_calls: int = 0
    signals: dict | None = None
    aux_calls: int = 0

    def __post_init__(self):
        if self.system not in SYSTEMS:
            raise SchemaError(f"unknown system {self.system!r}")
        if not 0.0 <= self.f1 <= 1.0 or not 0.0 <= self.rouge_l <= 1.0:
            raise SchemaError("f1 and rouge_l must lie in [0, 1]")
        if self.em not in (0, 1):
            raise SchemaError("em must be 0 or 1")
        if self.latency_ms < 0:
            raise SchemaError("latency_ms must be non-negative")
        if min(self.vr_calls, self.gr_calls, self.aux_calls) < 0:
            raise SchemaError("call counters must be non-negative")

    def to_json(self) -> dict:
        return asdict(self)


def _query_from_obj(obj: dict, line: int) -> QueryRecord:
    if not isinstance(obj, dict):
        raise ParseError("expected a JSON object", line=line)
    for key in ("id", "question", "answers", "hop_count"):
        if key not in obj:
            raise ParseError(f"missing required field {key!r}", line=line)
    answers = obj["answers"]
    if isinstance(answers, str):
        answers = [answers]
    try:
        steps = tuple(
            SubStep(s["sub_question"], s["sub_answer"]) for s in obj.get("decomposition") or []
        )
        passages = obj.get("passages")
        return QueryRecord(
            id=str(obj["id"]),
            dataset=obj.get("dataset", "custom"),
            question=obj["question"],
            gold_answers=tuple(answers),
            hop_count=obj["hop_count"],
            query_type=obj.get("query_type") or "unknown",
            decomposition=steps,
            passages=tuple(passages) if passages is not None else None,
        )
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed field: {exc}", line=line) from exc
    except SchemaError as exc:
        raise SchemaError(f"line {line}: {exc}") from exc


def load_dataset(path, format: str = "jsonl") -> list[QueryRecord]:
    """Read a JSONL dataset file, preserving file order."""
    if format != "jsonl":
        raise ValueError(f"unsupported dataset format {format!r}")
    records = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            if not raw.strip():
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON ({exc.msg})", line=lineno) from exc
            rec = _query_from_obj(obj, lineno)
            if rec.id in seen:
                raise SchemaError(f"line {lineno}: duplicate id {rec.id!r}")
            seen.add(rec.id)
            records.append(rec)
    return records


def write_dataset(path, records: Iterable[QueryRecord]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec.to_json(), ensure_ascii=False) + "\n")


def stratum_label(record: QueryRecord, key: str) -> str:
    if key == "hop":
        return f"hop={record.hop_count}"
    if key == "type":
        return f"type={record.query_type}"
    if key == "dataset":
        return record.dataset
    if key == "hop_and_type":
        return f"{record.dataset}/hop={record.hop_count}/{record.query_type}"
    raise ValueError(f"unknown stratification key {key!r}; expected one of {STRATIFY_KEYS}")


def stratify(records: list[QueryRecord], key: str) -> dict[str, list[QueryRecord]]:
    """Partition records by ``key``. Labels are sorted for deterministic output."""
    groups: dict[str, list[QueryRecord]] = {}
    for rec in records:
        groups.setdefault(stratum_label(rec, key), []).append(rec)
    return OrderedDict(sorted(groups.items()))


_RUN_FIELDS = {
    "query_id": str,
    "system": str,
    "condition_tag": str,
    "answer": str,
    "f1": (int, float),
    "em": int,
    "rouge_l": (int, float),
    "latency_ms": (int, float),
    "vr_calls": int,
    "gr_calls": int,
}


def _run_from_obj(obj, index: int) -> RunRecord:
    if not isinstance(obj, dict):
        raise SchemaError("expected a JSON object", index=index)
    for name, typ in _RUN_FIELDS.items():
        if name not in obj:
            raise SchemaError(f"missing field {name!r}", index=index)
        if isinstance(obj[name], bool) or not isinstance(obj[name], typ):
            raise SchemaError(f"field {name!r} has wrong type", index=index)
    signals = obj.get("signals")
    if signals is not None and not isinstance(signals, dict):
        raise SchemaError("signals must be an object or null", index=index)
    try:
        return RunRecord(
            query_id=obj["query_id"],
            system=obj["system"],
            condition_tag=obj["condition_tag"],
            answer=obj["answer"],
            f1=float(obj["f1"]),
            em=obj["em"],
            rouge_l=float(obj["rouge_l"]),
            latency_ms=float(obj["latency_ms"]),
            vr_calls=obj["vr_calls"],
            gr_calls=obj["gr_calls"],
            signals=signals,
            aux_calls=int(obj.get("aux_calls", 0)),
        )
    except SchemaError as exc:
        raise SchemaError(str(exc), index=index) from exc


class RunCache:
    """Append-only JSONL store of :class:`RunRecord`.

    Each append is a single ``write`` of one newline-terminated line followed by
    fsync. A reader ignores a trailing fragment without a newline, so a crash
    mid-write never surfaces half a record. One writer per file.
    """

    def __init__(self, path):
        self.path = Path(path)

    def append(self, record: RunRecord) -> None:
        self.extend([record])

    def extend(self, records: Iterable[RunRecord]) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as fh:
            for rec in records:
                fh.write(json.dumps(rec.to_json(), ensure_ascii=False, sort_keys=True) + "\n")
                fh.flush()
                os.fsync(fh.fileno())

    def read(self) -> list[RunRecord]:
        with open(self.path, encoding="utf-8") as fh:
            text = fh.read()
        lines = text.split("\n")
        # The last element is "" for a clean file, or a torn partial write.
        complete = lines[:-1]
        out = []
        for index, line in enumerate(complete):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"invalid JSON ({exc.msg})", index=index) from exc
            out.append(_run_from_obj(obj, index))
        return out

    def __iter__(self):
        return iter(self.read())


def cache_io(path, mode: str):
    """Read a run cache (``mode="read"``) or get an appender (``mode="append"``)."""
    cache = RunCache(path)
    if mode == "read":
        return cache.read()
    if mode == "append":
        return cache
    raise ValueError(f"mode must be 'read' or 'append', got {mode!r}")
