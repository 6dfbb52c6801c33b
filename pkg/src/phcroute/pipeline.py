"""VanillaRAG answering, escalation, cached routing evaluation and cost accounting."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .backends import Backends, GenerationRequest, render_prompt
from .corpus import QueryRecord, RunRecord
from .exceptions import BackendError, CascadeError, RatingParseError
from .signals import LexicalScorer, SignalVector, blend, lexical_confidence, parse_rating, ssc_agreement
from .router.policies import RoutingDecision
from .textmetrics import answer_scores

SSC_K = 3
RATING_CUTOFF = 0.85
DEFAULT_LATENCY_MS = {"vanilla": 23.0, "graph": 114.0}


@dataclass
class SignalConfig:
    preset: str = "detector"
    ssc_k: int = SSC_K
    use_ssc: bool = True
    use_rating: bool = True
    scorer: LexicalScorer = field(default_factory=LexicalScorer)
    # dataset -> (mean, std) of answer length in tokens; absent disables length scoring
    length_stats: dict = field(default_factory=dict)


def _request(backends, template_id, prompt, query_id, temperature=0.0, sample_index=0):
    return GenerationRequest(
        template_id=template_id,
        rendered_prompt=prompt,
        temperature=temperature,
        sample_index=sample_index,
        max_tokens=backends.max_tokens,
        query_id=query_id,
    )


def _generate(generator, request):
    try:
        return generator.generate(request)
    except BackendError as exc:
        if exc.query_id is None and request.query_id is not None:
            exc.query_id = request.query_id
            exc.args = (f"query {request.query_id}: {exc.args[0]}",)
        raise


def compute_signals(query, answer, passages, prompt, backends, cfg: SignalConfig):
    """Signal stack for one answer. Returns ``(SignalVector, aux_calls)``."""
    mean_std = cfg.length_stats.get(query.dataset)
    b = cfg.scorer.breakdown(answer, query.question, *(mean_std or (None, None)))
    lex = lexical_confidence(b, cfg.preset)
    aux = 0
    ssc = None
    if cfg.use_ssc and lex <= RATING_CUTOFF:
        samples = []
        for i in range(cfg.ssc_k):
            req = _request(backends, "vanilla_qa", prompt, query.id, backends.ssc_temperature, i)
            samples.append(_generate(backends.generator, req).text)
            aux += 1
        ssc = ssc_agreement(samples)
    rating = None
    if cfg.use_rating and lex < RATING_CUTOFF:
        req = _request(
            backends, "grounded_rating", render_prompt("grounded_rating", {"question": query.question, "passages": passages}), query.id
        )
        reply = _generate(backends.generator, req).text
        aux += 1
        try:
            rating = parse_rating(reply)
        except RatingParseError:
            rating = None
    blended, fast = blend(lex, ssc, rating)
    return SignalVector(lex, ssc, rating, blended, fast, b), aux


def run_vanilla(query: QueryRecord, backends: Backends, signal_config: Optional[SignalConfig] = None) -> RunRecord:
    cfg = signal_config or SignalConfig()
    passages = backends.retriever.retrieve(query.id, query.question, backends.top_k)
    prompt = render_prompt("vanilla_qa", {"question": query.question, "passages": passages})
    res = _generate(backends.generator, _request(backends, "vanilla_qa", prompt, query.id))
    scores = answer_scores(res.text, query.gold_answers)
    sig, aux = compute_signals(query, res.text, passages, prompt, backends, cfg)
    return RunRecord(
        query_id=query.id,
        system="vanilla",
        condition_tag="base",
        answer=res.text,
        f1=scores.f1,
        em=scores.em,
        rouge_l=scores.rouge_l,
        latency_ms=res.latency_ms,
        vr_calls=1,
        gr_calls=0,
        signals=sig.to_json(),
        aux_calls=aux,
    )


def run_escalation(query: QueryRecord, initial: RunRecord, mode: str, backends: Backends, decision=None) -> RunRecord:
    """Re-answer an escalated query.

    direct: one graph-backend generation on the original question.
    cascaded: sub-question extraction, graph retrieval on the sub-question, and
    regeneration (three calls: one graph call and two auxiliary LLM calls).
    """
    if decision is not None and not decision.escalate:
        raise ValueError("run_escalation called for a query the router did not escalate")
    if backends.graph_retriever is None:
        raise BackendError("no graph retriever configured", query_id=query.id)
    signals = dict(initial.signals or {})
    if mode == "direct":
        graph_passages = backends.graph_retriever.retrieve(query.id, query.question, backends.top_k)
        prompt = render_prompt("graph_qa", {"question": query.question, "graph_passages": graph_passages})
        res = _generate(backends.graph_generator, _request(backends, "graph_qa", prompt, query.id))
        answer, latency, gr, aux = res.text, res.latency_ms, 1, 0
    elif mode == "cascaded":
        subq_prompt = render_prompt("subq_extraction", {"question": query.question, "initial_answer": initial.answer})
        subq = _generate(backends.generator, _request(backends, "subq_extraction", subq_prompt, query.id))
        sub_question = subq.text.strip().splitlines()[0].strip() if subq.text.strip() else ""
        if not sub_question:
            # Fall back to the initial answer and flag the failure.
            signals["cascade_error"] = str(CascadeError("empty sub-question reply", query_id=query.id))
            answer, latency, gr, aux = initial.answer, subq.latency_ms, 0, 1
        else:
            graph_passages = backends.graph_retriever.retrieve(query.id, sub_question, backends.top_k)
            regen_prompt = render_prompt(
                "regeneration",
                {"question": query.question, "initial_answer": initial.answer, "graph_passages": graph_passages},
            )
            regen = _generate(backends.generator, _request(backends, "regeneration", regen_prompt, query.id))
            answer, latency, gr, aux = regen.text, subq.latency_ms + regen.latency_ms, 1, 2
    else:
        raise ValueError("mode must be 'direct' or 'cascaded'")
    scores = answer_scores(answer, query.gold_answers)
    if decision is not None:
        signals["routing"] = {"policy": decision.policy, "score": decision.score, "tau": decision.tau}
    return RunRecord(
        query_id=query.id,
        system=mode,
        condition_tag="escalated",
        answer=answer,
        f1=scores.f1,
        em=scores.em,
        rouge_l=scores.rouge_l,
        latency_ms=latency,
        vr_calls=0,
        gr_calls=gr,
        signals=signals or None,
        aux_calls=aux,
    )


def map_ordered(fn, items, max_inflight: int = 4):
    """Apply ``fn`` with bounded concurrency; results come back in input order."""
    items = list(items)
    if max_inflight <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=max_inflight) as pool:
        return list(pool.map(fn, items))


def evaluate_routing_cached(pairs, decisions, groups=None):
    """Per-query F1 = gr if escalated else vr.

    Returns ``(macro_f1, per_query_f1)``. With ``groups`` the macro is the mean
    of per-group means, otherwise the plain mean.
    """
    arr = np.asarray(list(pairs), dtype=float)
    d = np.asarray(list(decisions)).astype(bool)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] != len(d):
        raise ValueError("pairs and decisions must have equal length")
    per_query = np.where(d, arr[:, 1], arr[:, 0])
    if groups is None:
        return float(per_query.mean()), per_query
    g = np.asarray(list(groups))
    if len(g) != len(d):
        raise ValueError("groups must match pairs in length")
    means = [per_query[g == k].mean() for k in sorted(set(g.tolist()))]
    return math.fsum(means) / len(means), per_query


def weighted_latency(rate: float, t_vr: float = DEFAULT_LATENCY_MS["vanilla"], t_gr: float = DEFAULT_LATENCY_MS["graph"]) -> float:
    return (1.0 - rate) * t_vr + rate * t_gr


@dataclass
class CostReport:
    vr_calls: int
    gr_calls: int
    total_calls: int
    aux_calls: int
    escalation_rate: float
    macro_latency_ms: float
    per_dataset: dict = field(default_factory=dict)


def _tally(runs):
    vr = sum(r.vr_calls for r in runs)
    gr = sum(r.gr_calls for r in runs)
    aux = sum(r.aux_calls for r in runs)
    n = len({r.query_id for r in runs})
    escalated = len({r.query_id for r in runs if r.gr_calls > 0})
    return vr, gr, aux, n, escalated


def cost_account(runs, latencies: Optional[dict] = None, datasets: Optional[dict] = None) -> CostReport:
    """Sum call counters; latency is (1 - r) t_VR + r t_GR with r the escalated share.

    ``latencies`` maps "vanilla"/"graph" to ms; missing entries use the defaults.
    ``datasets`` maps query id to dataset for the per-dataset breakdown.
    """
    lat = {**DEFAULT_LATENCY_MS, **(latencies or {})}
    runs = list(runs)

    def report(rs):
        vr, gr, aux, n, escalated = _tally(rs)
        rate = escalated / n if n else 0.0
        return vr, gr, aux, rate, weighted_latency(rate, lat["vanilla"], lat["graph"])

    vr, gr, aux, rate, latency = report(runs)
    per = {}
    if datasets:
        by: dict[str, list] = {}
        for r in runs:
            by.setdefault(datasets.get(r.query_id, "unknown"), []).append(r)
        for name in sorted(by):
            dvr, dgr, daux, drate, dlat = report(by[name])
            per[name] = {"vr_calls": dvr, "gr_calls": dgr, "aux_calls": daux, "escalation_rate": drate, "latency_ms": dlat}
    return CostReport(vr, gr, vr + gr, aux, rate, latency, per)


def projected_cost(n_queries: int, rate: float) -> tuple[int, int]:
    """(VR calls, GR calls) for a router that answers everything with VR first
    and escalates ``floor(rate * N)`` queries."""
    return n_queries, math.floor(rate * n_queries + 1e-9)


def route_queries(queries, vanilla_runs, backends, policy="threshold", model=None, escalation_rate=None, tau=None):
    """Routing decisions for already-answered queries, in query order."""
    from .router.features import build_features, passages_meta
    from .router.policies import decide, decide_learned
    from .router.selection import threshold_for_rate

    if policy in ("threshold", "type_aware"):
        out = []
        for q, r in zip(queries, vanilla_runs):
            conf = (r.signals or {}).get("lexical")
            if conf is None:
                raise ValueError(f"query {q.id}: run record has no lexical confidence")
            out.append(decide(policy, conf=conf, query_type=q.query_type, tau=tau if policy == "threshold" else None))
        return out
    if policy != "learned":
        raise ValueError(f"unknown policy {policy!r}")
    if model is None:
        raise ValueError("learned policy needs a trained model")
    vectors = []
    for q, r in zip(queries, vanilla_runs):
        passages = backends.retriever.retrieve(q.id, q.question, backends.top_k)
        vectors.append(build_features(q, passages_meta(q.question, passages), SignalVector.from_json(r.signals)))
    X = np.vstack([v.to_array(model.feature_names_) for v in vectors])
    scores = model.predict_proba(X)[:, 1]
    if tau is None:
        tau = threshold_for_rate(scores, escalation_rate) if escalation_rate is not None else 0.5
    return [decide_learned(x, model, tau) for x in X]


def run_system(queries, backends, system="vanilla", policy="threshold", signal_config=None, model=None,
               escalation_rate=None, tau=None, cache=None):
    """Answer every query with VR, route, and escalate per ``system``.

    Records come back (and are appended to ``cache``) in query order: each
    query's vanilla record, then its escalated record if any.
    """
    queries = list(queries)
    base = map_ordered(lambda q: run_vanilla(q, backends, signal_config), queries, backends.max_inflight)
    out = []
    if system == "vanilla":
        out = base
    elif system == "graph":
        # Graph-only baseline: every query goes straight to the graph backend.
        always = [RoutingDecision(True, 1.0, "threshold", math.inf) for _ in queries]
        esc = map_ordered(lambda t: run_escalation(t[0], t[1], "direct", backends, t[2]),
                          list(zip(queries, base, always)), backends.max_inflight)
        for r, e in zip(base, esc):
            e.system = "graph"
            out.extend([r, e])
    elif system in ("direct", "cascaded"):
        decisions = route_queries(queries, base, backends, policy, model, escalation_rate, tau)
        todo = [(q, r, d) for q, r, d in zip(queries, base, decisions) if d.escalate]
        esc = map_ordered(lambda t: run_escalation(t[0], t[1], system, backends, t[2]), todo, backends.max_inflight)
        by_id = {r.query_id: r for r in esc}
        for r in base:
            out.append(r)
            if r.query_id in by_id:
                out.append(by_id[r.query_id])
    else:
        raise ValueError(f"unknown system {system!r}")
    if cache is not None:
        cache.extend(out)
    return out
