"""Regenerate the shipped fixtures under src/phcroute/data.

Deterministic: running it twice produces identical bytes. Every aggregate the
fixtures are meant to reproduce is asserted before anything is written.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import numpy as np

from phcroute.backends import (
    Backends,
    FixtureRetriever,
    GenerationRequest,
    RecordingBackend,
    SyntheticBackend,
    replay_key,
)
from phcroute.corpus import QueryRecord, SubStep, write_dataset
from phcroute.interventions import InterventionCondition, build_condition_prompt
from phcroute.oracle import capture_rate, gap_closed, phc
from phcroute.pipeline import evaluate_routing_cached, run_system
from phcroute.router.selection import threshold_for_rate
from phcroute.signals import LexicalScorer, lexical_confidence
from phcroute.stats import auc, paired_bootstrap, rank_correlations
from phcroute.textmetrics import answer_scores

DATA = Path(__file__).resolve().parents[1] / "src" / "phcroute" / "data"


def _write_jsonl(path: Path, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in rows:
            fh.write(json.dumps(row, sort_keys=True, ensure_ascii=False) + "\n")


# ---------------------------------------------------------------------------
# Routing table: per-query VR/GR F1 and learned-router scores, 1,800 queries.

ROUTING = {
    # dataset: (N, VR, GR, Oracle, LR@32%, Hybrid, hybrid escalations)
    "hotpotqa": (500, 0.392, 0.679, 0.692, 0.553, 0.524, 190),
    "musique": (500, 0.083, 0.408, 0.415, 0.272, 0.182, 160),
    "nq": (500, 0.070, 0.242, 0.250, 0.112, 0.074, 60),
    "2wiki": (300, 0.233, 0.559, 0.564, 0.358, 0.399, 159),
}
# The published per-dataset values are rounded. Nudging VR up and Oracle down
# by 0.0004 keeps every per-dataset value on its rounded figure while the
# macros also land on theirs (VR 0.195, Oracle 0.480, gap closed 0.811).
ROUND_NUDGE = 0.0004
ROUTING = {ds: (N, vr + ROUND_NUDGE, gr, orc - ROUND_NUDGE, lr, hyb, n)
           for ds, (N, vr, gr, orc, lr, hyb, n) in ROUTING.items()}
# Score tiers, highest first. Tier A alone is the top 32%, A+B the top 60%,
# A+B+C the top 72%.
TIERS = {
    "hotpotqa": (180, 130, 60, 130),
    "musique": (200, 140, 50, 110),
    "nq": (80, 150, 70, 200),
    "2wiki": (116, 84, 36, 64),
}
BANDS = ((0.75, 1.0), (0.5, 0.75), (0.4, 0.5), (0.0, 0.4))
POS_FRAC = (0.85, 0.60, 0.45, 0.29)
MACRO_STEPS = (0.08125, 0.021, 0.046)  # macro gain added by tiers B, C, D
N_POSITIVE = 1036
MAX_GAIN = 0.6


def _spread(total, n, rng, cap):
    """n positive values summing to ``total``, none above ``cap``."""
    if n == 0:
        assert abs(total) < 1e-12
        return np.zeros(0)
    if total > cap * n:
        raise ValueError("infeasible spread")
    w = rng.uniform(0.3, 1.0, n)
    v = total * w / w.sum()
    for _ in range(100):
        over = v > cap
        if not over.any():
            break
        excess = (v[over] - cap).sum()
        v[over] = cap
        free = ~over & (v < cap)
        v[free] += excess * v[free] / v[free].sum()
    return v


def _fit_vr(lo, hi, target):
    """vr_i = lo + (hi - lo) u_i^gamma with gamma chosen so sum(vr) = target."""
    rng = np.random.default_rng(7)
    u = rng.uniform(0.0, 1.0, len(lo))
    a, b = -6.0, 6.0
    for _ in range(200):
        m = 0.5 * (a + b)
        s = (lo + (hi - lo) * u ** math.exp(m)).sum()
        a, b = (m, b) if s > target else (a, m)
    return lo + (hi - lo) * u ** math.exp(0.5 * (a + b))


def _positive_counts():
    counts = {}
    for ds, sizes in TIERS.items():
        N, vr, gr, orc, lr, *_ = ROUTING[ds]
        R = N * (gr - lr)
        loss = N * (orc - gr)
        gains = [N * (lr - vr)] + [R * s / sum(MACRO_STEPS) for s in MACRO_STEPS]
        row = []
        for t, size in enumerate(sizes):
            need = math.ceil((gains[t] + loss * size / N) / MAX_GAIN) + 1
            row.append(max(round(POS_FRAC[t] * size), need, 1))
        counts[ds] = (row, gains)
    # Trim the surplus from tier A rows, which have the most slack.
    surplus = sum(sum(r) for r, _ in counts.values()) - N_POSITIVE
    for ds in sorted(counts, key=lambda d: -TIERS[d][0]):
        if surplus <= 0:
            break
        row, gains = counts[ds]
        N = ROUTING[ds][0]
        floor_a = math.ceil((gains[0] + (N * (ROUTING[ds][3] - ROUTING[ds][2])) * TIERS[ds][0] / N) / MAX_GAIN) + 1
        take = min(surplus, row[0] - floor_a)
        row[0] -= take
        surplus -= take
    assert surplus == 0, surplus
    return counts


def build_routing_table(rng):
    counts = _positive_counts()
    rows = []
    for ds, (N, vr_t, gr_t, orc_t, lr_t, hyb_t, hyb_n) in ROUTING.items():
        pos_counts, gains = counts[ds]
        loss_total = N * (orc_t - gr_t)
        tier_of, gain_of = [], []
        for t, size in enumerate(TIERS[ds]):
            L = loss_total * size / N
            P = pos_counts[t]
            neg = size - P
            n_loss = max(1, round(0.3 * neg))
            g = _spread(gains[t] + L, P, rng, MAX_GAIN)
            losses = _spread(L, n_loss, rng, 0.5)
            tier_of += [t] * size
            gain_of += list(g) + list(-losses) + [0.0] * (neg - n_loss)
        gain_of = np.array(gain_of)
        lo = np.where(gain_of < 0, -gain_of, 0.0)
        hi = np.where(gain_of > 0, 1.0 - gain_of, 1.0)
        vr = _fit_vr(lo, hi, N * vr_t)
        vr = np.round(vr, 6)
        gr = np.round(vr + gain_of, 6)
        gr = np.clip(gr, 0.0, 1.0)
        order = rng.permutation(N)
        for j, i in enumerate(order):
            t = tier_of[i]
            lo_b, hi_b = BANDS[t]
            rows.append(
                {
                    "query_id": f"{ds}-{j:04d}",
                    "dataset": ds,
                    "vr_f1": float(vr[i]),
                    "gr_f1": float(gr[i]),
                    "score": round(float(rng.uniform(lo_b + 1e-4, hi_b - 1e-4)), 6),
                    "hybrid": 0,
                }
            )
    # Scores must be distinct so matched-rate thresholds are exact.
    seen = set()
    for r in rows:
        while r["score"] in seen:
            lo_b, hi_b = next(b for b in BANDS if b[0] < r["score"] < b[1])
            r["score"] = round(float(rng.uniform(lo_b + 1e-4, hi_b - 1e-4)), 6)
        seen.add(r["score"])
    _pick_hybrid(rows, rng)
    return rows


def _pick_hybrid(rows, rng):
    for ds, (N, vr_t, _, _, _, hyb_t, hyb_n) in ROUTING.items():
        idx = [i for i, r in enumerate(rows) if r["dataset"] == ds]
        gain = np.array([rows[i]["gr_f1"] - rows[i]["vr_f1"] for i in idx])
        target = N * (hyb_t - vr_t)
        chosen = np.zeros(len(idx), dtype=bool)
        chosen[rng.choice(len(idx), hyb_n, replace=False)] = True
        cur = gain[chosen].sum()
        for _ in range(200000):
            if abs(cur - target) < 2e-4:
                break
            i = rng.choice(np.flatnonzero(chosen))
            j = rng.choice(np.flatnonzero(~chosen))
            new = cur - gain[i] + gain[j]
            if abs(new - target) < abs(cur - target):
                chosen[i], chosen[j] = False, True
                cur = new
        assert abs(cur - target) < 2e-4, (ds, cur, target)
        for k, i in enumerate(idx):
            rows[i]["hybrid"] = int(chosen[k])


def check_routing_table(rows):
    ds = [r["dataset"] for r in rows]
    pairs = [(r["vr_f1"], r["gr_f1"]) for r in rows]
    scores = np.array([r["score"] for r in rows])
    assert len(set(scores.tolist())) == len(rows)
    out = {}
    for rate, want in ((0.32, 0.324), (0.60, 0.405), (0.72, 0.426)):
        tau = threshold_for_rate(scores, rate)
        macro, _ = evaluate_routing_cached(pairs, scores >= tau, ds)
        assert abs(macro - want) <= 0.001, (rate, macro)
        out[rate] = macro
    assert int((scores >= threshold_for_rate(scores, 0.72)).sum()) == 1296
    oracle = np.array([g > v for v, g in pairs])
    assert int(oracle.sum()) == N_POSITIVE
    vr_macro, _ = evaluate_routing_cached(pairs, np.zeros(len(rows), bool), ds)
    gr_macro, _ = evaluate_routing_cached(pairs, np.ones(len(rows), bool), ds)
    or_macro, _ = evaluate_routing_cached(pairs, oracle, ds)
    assert (round(vr_macro, 3), round(gr_macro, 3), round(or_macro, 3)) == (0.195, 0.472, 0.480)
    assert round(gap_closed(out[0.72], vr_macro, or_macro), 3) == 0.811
    hyb = np.array([r["hybrid"] for r in rows], bool)
    hyb_macro, f1_h = evaluate_routing_cached(pairs, hyb, ds)
    assert int(hyb.sum()) == 569 and round(hyb_macro, 3) == 0.295
    _, f1_lr = evaluate_routing_cached(pairs, scores >= threshold_for_rate(scores, 0.32), ds)
    boot = paired_bootstrap(f1_lr, f1_h, groups=ds)
    assert abs(boot.delta - 0.029) <= 0.001 and boot.p_value <= 0.0002, boot
    print(f"routing table: {out}, VR {vr_macro:.4f}, GR {gr_macro:.4f}, oracle {or_macro:.4f}, "
          f"hybrid {hyb_macro:.4f}, bootstrap {boot}")


# ---------------------------------------------------------------------------
# Cascaded-regeneration capture: per-query VR/GR/regenerated F1.

CAPTURE = {"hotpotqa": (0.170, 310), "musique": (0.130, 340), "nq": (0.240, 170), "2wiki": (0.088, 200)}
CAPTURE_TIES = 10


def build_capture(rng):
    rows = []
    for ds, (c, n) in CAPTURE.items():
        e = rng.uniform(-0.08, 0.08, n)
        ratio = c + e - e.mean()
        vr = np.round(rng.uniform(0.0, 0.5, n), 6)
        gap = np.round(rng.uniform(0.1, 0.5, n), 6)
        gr = vr + gap
        rr = vr + ratio * gap
        for i in range(n):
            rows.append({"query_id": f"{ds}-c{i:04d}", "dataset": ds, "vr_f1": float(vr[i]),
                         "gr_f1": round(float(gr[i]), 6), "rr_f1": float(rr[i])})
        for i in range(CAPTURE_TIES):
            v = round(float(rng.uniform(0.0, 1.0)), 6)
            rows.append({"query_id": f"{ds}-t{i:04d}", "dataset": ds, "vr_f1": v, "gr_f1": v, "rr_f1": v})
    return rows


def check_capture(rows):
    col = lambda k, rs: [r[k] for r in rs]  # noqa: E731
    total = capture_rate(col("rr_f1", rows), col("vr_f1", rows), col("gr_f1", rows))
    assert round(total, 3) == 0.152, total
    for ds, (c, _) in CAPTURE.items():
        rs = [r for r in rows if r["dataset"] == ds]
        got = capture_rate(col("rr_f1", rs), col("vr_f1", rs), col("gr_f1", rs))
        assert abs(got - c) < 1e-4, (ds, got)
    print(f"capture: pooled {total:.4f}")


# ---------------------------------------------------------------------------
# Capability proxy vs 3-hop PHC, five models.

ELO_PHC = [
    {"model": "model_a", "elo": 1042, "n": 32, "phc": 0.438},
    {"model": "model_b", "elo": 1179, "n": 160, "phc": 0.582},
    {"model": "model_c", "elo": 1285, "n": 77, "phc": 0.527},
    {"model": "model_d", "elo": 1294, "n": 160, "phc": 0.702},
    {"model": "model_e", "elo": 1350, "n": 160, "phc": 0.731},
]


# ---------------------------------------------------------------------------
# Causal sweep: 160 three-hop queries, fixed oracle labels, k = 0..3.

SWEEP_N = 160
SWEEP_POS = 99
SWEEP_CORRECT = 36
SWEEP_TARGETS = {0: (0.613, "**"), 1: (0.656, "***"), 2: (0.595, "*"), 3: (0.536, "ns")}
CHR_WRONG_CONFIDENT = 60
HEDGES = ("perhaps", "possibly", "likely")
FILLER = ("the", "old", "estate", "near", "river", "town", "north", "of", "hall", "bridge")
SYLL_A = ("Har", "Mar", "Bex", "Cor", "Dun", "Els", "Fair", "Gar", "Hol", "Ket", "Lan", "Mor", "Pen", "Ros", "Tal", "Wyn")
SYLL_B = ("low", "ston", "ley", "ran", "more", "wick", "holt", "row", "by", "ford", "mere", "dale", "ton", "field")
SCORER = LexicalScorer()


def _names(rng, n):
    return [rng.choice(SYLL_A) + rng.choice(SYLL_B) for _ in range(n)]


def _ladder():
    """(h, e, f) shapes with their extractor confidence."""
    shapes = {}
    for h in range(4):
        for e in range(4):
            for f in range(7):
                if h + e + f == 0 or e + f == 0:
                    continue
                conf = 0.5 * (1 - h / 3) + 0.5 * e / (h + e + f)
                shapes.setdefault(round(conf, 9), (h, e, f))
    return sorted(shapes.items())


def _render(shape, rng):
    h, e, f = shape
    hedges = list(rng.choice(HEDGES, h, replace=False)) if h else []
    filler = [FILLER[(i + int(rng.integers(0, len(FILLER)))) % len(FILLER)] for i in range(f)]
    ents = _names(rng, e)
    return " ".join(hedges + filler + ents)


def _conf(text):
    return lexical_confidence(SCORER.breakdown(text, ""), "extractor")


def _assign_levels(labels, target, rng, levels, allowed, chr_spec=None):
    """Pick a ladder level per query so AUC(conf, labels) rounds to ``target``."""
    from phcroute.simworld import auc_to_shift

    confs = np.array([c for c, _ in levels])
    delta = auc_to_shift(target, 1.0)
    z = rng.normal(0.0, 1.0, len(labels)) + delta * labels
    q = (np.argsort(np.argsort(z)) + 0.5) / len(z)
    idx = np.array([min(allowed[i], key=lambda j: abs(j / (len(confs) - 1) - q[i])) for i in range(len(z))])

    def objective(ix):
        c = confs[ix]
        obj = abs(auc(c, labels) - target)
        if chr_spec is not None:
            wrong, want = chr_spec
            obj += 0.01 * abs(int(((c > 0.6) & wrong).sum()) - want)
        return obj

    cur = objective(idx)
    for _ in range(200000):
        if cur < 1.5e-4:
            break
        i = int(rng.integers(0, len(z)))
        j = int(rng.choice(allowed[i]))
        old = idx[i]
        idx[i] = j
        new = objective(idx)
        if new <= cur:
            cur = new
        else:
            idx[i] = old
    assert cur < 1.5e-4, (target, cur)
    return idx


def build_sweep(rng):
    labels = np.zeros(SWEEP_N, dtype=int)
    labels[rng.choice(SWEEP_N, SWEEP_POS, replace=False)] = 1
    negatives = np.flatnonzero(labels == 0)
    correct = np.zeros(SWEEP_N, dtype=bool)
    correct[rng.choice(negatives, SWEEP_CORRECT, replace=False)] = True

    levels = _ladder()
    no_hedge = [j for j, (_, s) in enumerate(levels) if s[0] == 0]
    everything = list(range(len(levels)))

    queries, retrieval = [], []
    answers = {k: {} for k in SWEEP_TARGETS}
    chosen = {}
    for k, (target, _) in SWEEP_TARGETS.items():
        allowed = [no_hedge if (k == 0 and correct[i]) else everything for i in range(SWEEP_N)]
        spec = (~correct, CHR_WRONG_CONFIDENT) if k == 0 else None
        chosen[k] = _assign_levels(labels, target, rng, levels, allowed, spec)

    for i in range(SWEEP_N):
        qid = f"mq3-{i:03d}"
        founder, town = _names(rng, 1)[0], _names(rng, 1)[0]
        org = _names(rng, 1)[0]
        k0_text = _render(levels[chosen[0][i]][1], rng)
        gold = k0_text if correct[i] else f"{_names(rng, 1)[0]} Water"
        steps = (
            SubStep(f"Who founded the {org} Company?", founder),
            SubStep(f"Where was {founder} born?", town),
            SubStep(f"Which river flows through {town}?", gold),
        )
        q = QueryRecord(
            id=qid,
            dataset="musique",
            question=f"Which river flows through the birthplace of the founder of the {org} Company?",
            gold_answers=(gold,),
            hop_count=3,
            query_type="bridge",
            decomposition=steps,
        )
        queries.append(q)
        retrieval.append(
            {
                "query_id": qid,
                "passages": [
                    f"The {org} Company was established in the nineteenth century.",
                    f"{founder} was a merchant known for trade along the coast.",
                    f"{town} is a market town with a long history of milling.",
                    f"Several rivers cross the region around {town}.",
                    f"The {org} Company later merged with a rival firm.",
                ],
            }
        )
        answers[0][qid] = k0_text
        for k in (1, 2, 3):
            answers[k][qid] = _render(levels[chosen[k][i]][1], rng)

    for k in SWEEP_TARGETS:
        for i, q in enumerate(queries):
            got = _conf(answers[k][q.id])
            assert abs(got - levels[chosen[k][i]][0]) < 1e-9, (k, q.id, answers[k][q.id])
    oracle = {q.id: int(labels[i]) for i, q in enumerate(queries)}
    return queries, retrieval, answers, oracle


def sweep_replay(queries, retrieval, answers):
    """Replay records for plain, zero-retrieval, M1 and M2 conditions."""
    store = FixtureRetriever(table={r["query_id"]: r["passages"] for r in retrieval})
    records = {}

    def put(cond, q, text):
        prompt = build_condition_prompt(q, cond, store.retrieve(q.id, q.question, 5) if cond.retrieval_present else None)
        key = replay_key(GenerationRequest(cond.template_id, prompt, 0.0, 0))
        records[key] = {"key": key, "latency_ms": 23.0, "text": text}

    for k in SWEEP_TARGETS:
        for q in queries:
            base = answers[k][q.id]
            put(InterventionCondition(k), q, base)
            put(InterventionCondition(k, retrieval_present=False), q, base)
            # The humility notice makes the model hedge once more.
            put(InterventionCondition(k, variant="m1_humility"), q, f"possibly {base}" if "possibly" not in base else base)
            level = max(1, min(5, int(round(_conf(base) * 5))))
            put(InterventionCondition(k, variant="m2_elicitation"), q, f"{base} [CONFIDENCE: {level}/5]")
    return [records[k] for k in sorted(records)]


def check_sweep(queries, answers, oracle):
    labels = np.array([oracle[q.id] for q in queries])
    assert int(labels.sum()) == SWEEP_POS
    for k, (target, want_stars) in SWEEP_TARGETS.items():
        conf = [_conf(answers[k][q.id]) for q in queries]
        res = phc(conf, labels, B=5000, seed=0, stratum=f"k={k}")
        assert round(res.auc, 3) == target and res.stars == want_stars, (k, res)
        print(f"sweep k={k}: PHC {res.auc:.4f} p={res.p_value:.4f} {res.stars}")
    conf0 = np.array([_conf(answers[0][q.id]) for q in queries])
    wrong = np.array([answer_scores(answers[0][q.id], q.gold_answers).em == 0 for q in queries])
    assert int(wrong.sum()) == SWEEP_N - SWEEP_CORRECT
    chr3 = ((conf0 > 0.6) & wrong).sum() / wrong.sum()
    assert round(chr3, 3) == 0.484, chr3
    print(f"sweep CHR_3 = {chr3:.4f}")


# ---------------------------------------------------------------------------
# 20-query end-to-end fixture with synthetic-backed replay records.

E2E_SPECS = [
    ("hotpotqa", 2, "bridge"), ("hotpotqa", 2, "comparison"), ("hotpotqa", 3, "bridge"), ("hotpotqa", 1, "factoid"),
    ("hotpotqa", 2, "bridge"), ("musique", 3, "bridge"), ("musique", 4, "bridge"), ("musique", 2, "bridge"),
    ("musique", 3, "comparison"), ("musique", 4, "bridge"), ("nq", 1, "factoid"), ("nq", 1, "factoid"),
    ("nq", 1, "factoid"), ("nq", 2, "bridge"), ("nq", 1, "factoid"), ("2wiki", 2, "comparison"),
    ("2wiki", 2, "bridge"), ("2wiki", 3, "bridge"), ("2wiki", 2, "comparison"), ("2wiki", 4, "bridge"),
]


def build_e2e(rng):
    queries, vec, graph = [], [], []
    for i, (ds, hops, qtype) in enumerate(E2E_SPECS):
        names = _names(rng, hops + 2)
        gold = f"{names[-1]} {names[-2]}"
        steps = tuple(SubStep(f"What is linked to {names[j]}?", names[j + 1]) for j in range(hops - 1))
        steps += (SubStep(f"Who is associated with {names[hops - 1]}?", gold),)
        if qtype == "comparison":
            question = f"Which is older, {names[0]} or {names[1]}?"
        elif qtype == "factoid":
            question = f"Who wrote the book {names[0]}?"
        else:
            question = f"Who is associated with the place where {names[0]} was founded?"
        q = QueryRecord(f"e2e-{i:02d}", ds, question, (gold,), hops, qtype, steps)
        queries.append(q)
        vec.append({"query_id": q.id, "passages": [f"{n} appears in regional records." for n in names[:4]]})
        graph.append({"query_id": q.id, "passages": [f"({s.sub_question[:-1]}) -> {s.sub_answer}" for s in steps]})
    return queries, vec, graph


E2E_RUNS = [("vanilla", "threshold"), ("graph", "threshold"), ("direct", "threshold"),
            ("cascaded", "threshold"), ("direct", "type_aware"), ("cascaded", "type_aware")]


def e2e_replay(queries, vec, graph):
    lookup = {q.id: q for q in queries}
    rec = RecordingBackend(SyntheticBackend(lookup, seed=11))
    backends = Backends(
        generator=rec,
        retriever=FixtureRetriever(table={r["query_id"]: r["passages"] for r in vec}),
        graph_retriever=FixtureRetriever(table={r["query_id"]: r["passages"] for r in graph}),
        max_inflight=1,
    )
    for system, policy in E2E_RUNS:
        run_system(queries, backends, system=system, policy=policy)
    return [rec.records[k] for k in sorted(rec.records)]


def main() -> int:
    DATA.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(20260101)

    routing = build_routing_table(rng)
    check_routing_table(routing)
    assert round(gap_closed(0.426, 0.195, 0.480), 3) == 0.811

    capture = build_capture(rng)
    check_capture(capture)

    rho = rank_correlations([r["elo"] for r in ELO_PHC], [r["phc"] for r in ELO_PHC]).spearman_rho
    assert abs(rho - 0.9) < 1e-12

    queries, retrieval, answers, oracle = build_sweep(rng)
    check_sweep(queries, answers, oracle)
    replay = sweep_replay(queries, retrieval, answers)

    e2e_q, e2e_vec, e2e_graph = build_e2e(rng)
    e2e_rep = e2e_replay(e2e_q, e2e_vec, e2e_graph)

    _write_jsonl(DATA / "routing_table.jsonl", routing)
    _write_jsonl(DATA / "cascade_capture.jsonl", capture)
    (DATA / "elo_phc.json").write_text(json.dumps(ELO_PHC, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    write_dataset(DATA / "sweep_queries.jsonl", queries)
    _write_jsonl(DATA / "sweep_retrieval.jsonl", retrieval)
    _write_jsonl(DATA / "sweep_replay.jsonl", replay)
    (DATA / "sweep_oracle.json").write_text(json.dumps(oracle, indent=0, sort_keys=True) + "\n", encoding="utf-8")
    write_dataset(DATA / "e2e_queries.jsonl", e2e_q)
    _write_jsonl(DATA / "e2e_retrieval.jsonl", e2e_vec)
    _write_jsonl(DATA / "e2e_graph_retrieval.jsonl", e2e_graph)
    _write_jsonl(DATA / "e2e_replay.jsonl", e2e_rep)
    print(f"wrote fixtures to {DATA}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
