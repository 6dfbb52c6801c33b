"""Shipped fixtures. ``fixture(name)`` returns the on-disk path of one file."""

from __future__ import annotations

from pathlib import Path

_HERE = Path(__file__).resolve().parent

FIXTURES = (
    "routing_table.jsonl",
    "cascade_capture.jsonl",
    "elo_phc.json",
    "sweep_queries.jsonl",
    "sweep_retrieval.jsonl",
    "sweep_replay.jsonl",
    "sweep_oracle.json",
    "e2e_queries.jsonl",
    "e2e_retrieval.jsonl",
    "e2e_graph_retrieval.jsonl",
    "e2e_replay.jsonl",
)


def fixture(name: str) -> Path:
    path = _HERE / name
    if not path.is_file():
        raise FileNotFoundError(f"no shipped fixture named {name!r}")
    return path
