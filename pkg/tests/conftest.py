import numpy as np
import pytest
from hypothesis import settings

from phcroute.data import fixture

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def e2e_paths():
    return {
        "dataset": fixture("e2e_queries.jsonl"),
        "retrieval": fixture("e2e_retrieval.jsonl"),
        "graph": fixture("e2e_graph_retrieval.jsonl"),
        "replay": fixture("e2e_replay.jsonl"),
    }


@pytest.fixture(scope="session")
def sweep():
    import json

    from phcroute.backends import Backends, FixtureRetriever, ReplayBackend
    from phcroute.corpus import load_dataset

    queries = load_dataset(fixture("sweep_queries.jsonl"))
    oracle = {k: int(v) for k, v in json.loads(fixture("sweep_oracle.json").read_text()).items()}
    backends = Backends(
        ReplayBackend([fixture("sweep_replay.jsonl")]),
        FixtureRetriever(fixture("sweep_retrieval.jsonl")),
        max_inflight=1,
    )
    return queries, oracle, backends
