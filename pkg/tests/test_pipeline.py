import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from phcroute.backends import Backends, CallLog, GenerationResult, InlineRetriever
from phcroute.corpus import QueryRecord, RunCache, SubStep
from phcroute.exceptions import BackendError
from phcroute.pipeline import (
    SignalConfig,
    cost_account,
    evaluate_routing_cached,
    map_ordered,
    projected_cost,
    run_escalation,
    run_system,
    run_vanilla,
    weighted_latency,
)
from phcroute.router.policies import RoutingDecision


class Scripted:
    """Generator that answers by template id and counts calls."""

    name = "synthetic"

    def __init__(self, replies):
        self.replies = replies
        self.log = CallLog()

    def generate(self, request):
        self.log.add(request.template_id)
        return GenerationResult(self.replies.get(request.template_id, "x"), 10.0, "synthetic")


Q = QueryRecord("q1", "hotpotqa", "Who founded the company of the town?", ("Ann Lee",), 2, "bridge",
                (SubStep("Which town?", "Oslo"), SubStep("Who founded it?", "Ann Lee")), passages=("Ann Lee founded it.",))


def backends(replies, graph=None):
    gen = Scripted(replies)
    ret = InlineRetriever([Q])
    return Backends(gen, ret, graph_generator=graph, graph_retriever=ret, max_inflight=1), gen


def test_confident_answer_skips_ssc_and_rating():
    # Specific, unhedged answer: extractor preset puts it on the fast path.
    b, gen = backends({"vanilla_qa": "Ann Lee"})
    r = run_vanilla(Q, b, SignalConfig(preset="extractor"))
    assert r.signals["lexical"] > 0.85
    assert r.aux_calls == 0 and gen.log.counts == {"vanilla_qa": 1}
    assert (r.f1, r.em, r.vr_calls) == (1.0, 1, 1)


def test_hedged_answer_triggers_ssc_and_rating():
    b, gen = backends({"vanilla_qa": "I am not sure, perhaps it was someone", "grounded_rating": "0.4"})
    r = run_vanilla(Q, b)
    assert r.signals["lexical"] < 0.85
    assert r.aux_calls == 4
    assert gen.log.counts == {"vanilla_qa": 4, "grounded_rating": 1}
    assert r.signals["rating"] == pytest.approx(0.4)


def test_unparseable_rating_is_dropped():
    b, _ = backends({"vanilla_qa": "perhaps someone", "grounded_rating": "no idea"})
    assert run_vanilla(Q, b).signals["rating"] is None


def test_direct_escalation_is_one_graph_call():
    graph = Scripted({"graph_qa": "Ann Lee"})
    b, gen = backends({"vanilla_qa": "perhaps Bob"}, graph)
    init = run_vanilla(Q, b, SignalConfig(use_ssc=False, use_rating=False))
    e = run_escalation(Q, init, "direct", b, RoutingDecision(True, 0.3, "threshold", 0.65))
    assert graph.log.counts == {"graph_qa": 1}
    assert (e.gr_calls, e.aux_calls, e.f1) == (1, 0, 1.0)
    assert e.signals["routing"]["policy"] == "threshold"


def test_cascaded_escalation_is_three_calls():
    b, gen = backends({"vanilla_qa": "perhaps Bob", "subq_extraction": "Who founded it?", "regeneration": "Ann Lee"})
    init = run_vanilla(Q, b, SignalConfig(use_ssc=False, use_rating=False))
    e = run_escalation(Q, init, "cascaded", b)
    # Vanilla answer + sub-question + regeneration; graph retrieval is the third step.
    assert gen.log.counts == {"vanilla_qa": 1, "subq_extraction": 1, "regeneration": 1}
    assert (e.gr_calls, e.aux_calls, e.f1) == (1, 2, 1.0)


def test_cascade_empty_subquestion_falls_back():
    b, _ = backends({"vanilla_qa": "Bob", "subq_extraction": "   "})
    init = run_vanilla(Q, b, SignalConfig(use_ssc=False, use_rating=False))
    e = run_escalation(Q, init, "cascaded", b)
    assert e.answer == "Bob" and "cascade_error" in e.signals and e.gr_calls == 0


def test_escalation_rejects_non_escalated_decision():
    b, _ = backends({})
    init = run_vanilla(Q, b, SignalConfig(use_ssc=False, use_rating=False))
    with pytest.raises(ValueError):
        run_escalation(Q, init, "direct", b, RoutingDecision(False, 0.9, "threshold", 0.65))
    with pytest.raises(ValueError):
        run_escalation(Q, init, "sideways", b)


def test_backend_error_carries_query_id():
    class Broken:
        name = "http"

        def generate(self, request):
            raise BackendError("boom")

    b = Backends(Broken(), InlineRetriever([Q]))
    with pytest.raises(BackendError) as exc:
        run_vanilla(Q, b)
    assert exc.value.query_id == "q1" and "q1" in str(exc.value)


def test_zero_passages_still_answers():
    q = QueryRecord("q2", "nq", "Q?", ("x",), 1, passages=())
    b = Backends(Scripted({"vanilla_qa": "x"}), InlineRetriever([q]))
    assert run_vanilla(q, b, SignalConfig(use_ssc=False, use_rating=False)).f1 == 1.0


def test_run_system_graph_and_cache(tmp_path):
    graph = Scripted({"graph_qa": "Ann Lee"})
    b, _ = backends({"vanilla_qa": "Bob"}, graph)
    cache = RunCache(tmp_path / "c.jsonl")
    out = run_system([Q], b, "graph", signal_config=SignalConfig(use_ssc=False, use_rating=False), cache=cache)
    assert [r.system for r in out] == ["vanilla", "graph"]
    assert cache.read() == out
    with pytest.raises(ValueError):
        run_system([Q], b, "quantum")


def test_oracle_routing_dominates(rng):
    pairs = rng.random((200, 2))
    groups = rng.choice(["a", "b"], 200)
    oracle = pairs[:, 1] > pairs[:, 0]
    best, _ = evaluate_routing_cached(pairs, oracle, groups)
    for d in (np.zeros(200, bool), np.ones(200, bool), rng.random(200) < 0.5):
        assert evaluate_routing_cached(pairs, d, groups)[0] <= best + 1e-12


def test_evaluate_routing_cached_example():
    macro, per = evaluate_routing_cached([(0.2, 0.8), (0.6, 0.1)], [True, False])
    assert per.tolist() == [0.8, 0.6] and macro == pytest.approx(0.7)
    macro, _ = evaluate_routing_cached([(0.2, 0.8), (0.6, 0.1), (0.0, 0.0)], [True, False, False], ["a", "a", "b"])
    assert macro == pytest.approx(0.35)


def test_cost_projections():
    assert projected_cost(1800, 0.32) == (1800, 576)
    assert projected_cost(1800, 0.72) == (1800, 1296)
    assert round(weighted_latency(0.722), 1) == 88.7


def test_cost_account_counts():
    graph = Scripted({"graph_qa": "Ann Lee"})
    b, _ = backends({"vanilla_qa": "Bob"}, graph)
    runs = run_system([Q], b, "graph", signal_config=SignalConfig(use_ssc=False, use_rating=False))
    c = cost_account(runs, datasets={"q1": "hotpotqa"})
    assert (c.vr_calls, c.gr_calls, c.total_calls, c.escalation_rate) == (1, 1, 2, 1.0)
    assert c.macro_latency_ms == pytest.approx(114.0)
    assert c.per_dataset["hotpotqa"]["gr_calls"] == 1


@given(st.lists(st.integers(), max_size=30), st.integers(1, 6))
def test_map_ordered_preserves_order(items, k):
    assert map_ordered(lambda x: x * 2, items, k) == [x * 2 for x in items]


def test_run_is_deterministic(e2e_paths):
    from phcroute.backends import FixtureRetriever, ReplayBackend
    from phcroute.corpus import load_dataset

    queries = load_dataset(e2e_paths["dataset"])

    def once(inflight):
        b = Backends(ReplayBackend([e2e_paths["replay"]]), FixtureRetriever(e2e_paths["retrieval"]),
                     graph_retriever=FixtureRetriever(e2e_paths["graph"]), max_inflight=inflight)
        return [r.to_json() for r in run_system(queries, b, "cascaded")]

    assert once(1) == once(4)
