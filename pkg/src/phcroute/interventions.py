"""Causal interventions: gold-fact injection, zero retrieval, M1/M2 prompts, PHC sweeps.

Oracle labels are supplied by the caller and never recomputed, so every
condition is scored against the same fixed G*.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .backends import GenerationRequest, render_prompt
from .corpus import QueryRecord
from .exceptions import ConditionError, ElicitationParseError
from .oracle import PHCResult, phc
from .pipeline import _generate, map_ordered
from .signals import LexicalScorer, lexical_confidence

VARIANTS = ("plain", "m1_humility", "m2_elicitation")
SIGNALS = ("lexical", "uncdet_preset", "elicited")
# Causal sweeps use the reduced hedge + entity-density measure; the sensitivity
# re-scoring uses the full five-component detector.
SIGNAL_PRESETS = {"lexical": "extractor", "uncdet_preset": "detector"}
_CONF_RE = re.compile(r"\[\s*confidence\s*:\s*(\d+)\s*/\s*5\s*\]", re.IGNORECASE)


@dataclass(frozen=True)
class InterventionCondition:
    k: int
    n: Optional[int] = None  # None: use each query's hop count
    retrieval_present: bool = True
    variant: str = "plain"

    def __post_init__(self):
        if self.k < 0 or (self.n is not None and (self.n < 1 or self.k > self.n)):
            raise ConditionError(f"invalid condition k={self.k}, n={self.n}")
        if self.variant not in VARIANTS:
            raise ConditionError(f"unknown variant {self.variant!r}")

    @property
    def tag(self) -> str:
        parts = [f"k={self.k}"]
        if not self.retrieval_present:
            parts.append("zero_retrieval")
        if self.variant == "m1_humility":
            parts.append("m1")
        elif self.variant == "m2_elicitation":
            parts.append("m2")
        return "/".join(parts)

    @property
    def template_id(self) -> str:
        if self.variant == "m1_humility":
            return "m1"
        if self.variant == "m2_elicitation":
            return "m2"
        if self.k == 0 and self.retrieval_present:
            return "vanilla_qa"
        return "intervention"


def parse_conditions(spec: str, n: Optional[int] = None, retrieval_present: bool = True, variant: str = "plain"):
    """``"k=0..3"`` or ``"k=0,1,3"`` -> list of conditions."""
    body = spec.strip()
    if body.startswith("k="):
        body = body[2:]
    if ".." in body:
        lo, hi = body.split("..", 1)
        ks = range(int(lo), int(hi) + 1)
    else:
        ks = [int(x) for x in body.split(",") if x.strip()]
    return [InterventionCondition(k, n, retrieval_present, variant) for k in ks]


def build_condition_prompt(query: QueryRecord, condition: InterventionCondition, passages=None) -> str:
    if condition.k > len(query.decomposition):
        raise ConditionError(
            f"query {query.id}: k={condition.k} exceeds its {len(query.decomposition)} decomposition steps"
        )
    if condition.n is None:
        condition = InterventionCondition(condition.k, query.hop_count, condition.retrieval_present, condition.variant)
    facts = list(query.decomposition[: condition.k])
    psg = list(passages or []) if condition.retrieval_present else None
    tid = condition.template_id
    if tid == "vanilla_qa":
        return render_prompt("vanilla_qa", {"question": query.question, "passages": psg})
    slots = {"question": query.question, "passages": psg, "facts": facts}
    if tid == "m1":
        slots.update(k=condition.k, n=condition.n)
    return render_prompt(tid, slots)


def parse_confidence_rating(reply: str) -> int:
    m = _CONF_RE.search(reply or "")
    if not m:
        raise ElicitationParseError("no [CONFIDENCE: X/5] tag in reply")
    x = int(m.group(1))
    if not 1 <= x <= 5:
        raise ElicitationParseError(f"confidence {x} outside 1..5")
    return x


def score_answer(answer: str, question: str, signal: str, scorer: Optional[LexicalScorer] = None) -> float:
    if signal == "elicited":
        return parse_confidence_rating(answer) / 5.0
    if signal not in SIGNAL_PRESETS:
        raise ValueError(f"unknown signal {signal!r}; expected one of {SIGNALS}")
    b = (scorer or LexicalScorer()).breakdown(answer, question)
    return lexical_confidence(b, SIGNAL_PRESETS[signal])


@dataclass
class SweepResult:
    rows: list = field(default_factory=list)  # (condition_tag, signal, PHCResult)
    answers: dict = field(default_factory=dict)  # condition_tag -> {query_id: answer}
    labels: dict = field(default_factory=dict)  # query_id -> fixed oracle label
    generate_calls: int = 0

    def table(self) -> list[tuple[str, str, PHCResult]]:
        return list(self.rows)


def _check_oracle(queries, fixed_oracle):
    missing = [q.id for q in queries if q.id not in fixed_oracle]
    if missing:
        raise ConditionError(f"fixed_oracle is missing query ids: {missing[:5]}")


def rescore_sweep(queries, answers: dict, fixed_oracle: dict, signal: str = "lexical", B: int = 5000,
                  seed: int = 0, scorer: Optional[LexicalScorer] = None) -> list:
    """PHC per condition from saved answer text. Never calls a generator."""
    _check_oracle(queries, fixed_oracle)
    labels = np.array([fixed_oracle[q.id] for q in queries], dtype=int)
    rows = []
    for tag, by_id in answers.items():
        conf = [score_answer(by_id[q.id], q.question, signal, scorer) for q in queries]
        rows.append((tag, signal, phc(conf, labels, B=B, seed=seed, stratum=tag)))
    return rows


def run_sweep(queries, conditions, fixed_oracle: dict, backends, signal: str = "lexical", B: int = 5000,
              seed: int = 0, scorer: Optional[LexicalScorer] = None) -> SweepResult:
    """Generate (or replay) each condition's answers and compute PHC against fixed labels."""
    queries = list(queries)
    _check_oracle(queries, fixed_oracle)
    result = SweepResult(labels={q.id: int(fixed_oracle[q.id]) for q in queries})
    for cond in conditions:

        def answer(q, cond=cond):
            passages = backends.retriever.retrieve(q.id, q.question, backends.top_k) if cond.retrieval_present else None
            prompt = build_condition_prompt(q, cond, passages)
            req = GenerationRequest(cond.template_id, prompt, 0.0, 0, backends.max_tokens, q.id)
            return _generate(backends.generator, req).text

        texts = map_ordered(answer, queries, backends.max_inflight)
        result.generate_calls += len(texts)
        result.answers[cond.tag] = {q.id: t for q, t in zip(queries, texts)}
    result.rows = rescore_sweep(queries, result.answers, fixed_oracle, signal, B, seed, scorer)
    return result


def chr_by_condition(queries, answers: dict, signal: str = "lexical", threshold: float = 0.6,
                     scorer: Optional[LexicalScorer] = None) -> dict:
    """CHR per condition, with wrong = exact match 0 against the gold answers."""
    from .oracle import chr_rate
    from .textmetrics import answer_scores

    out = {}
    for tag, by_id in answers.items():
        conf, wrong = [], []
        for q in queries:
            text = by_id[q.id]
            conf.append(score_answer(text, q.question, signal, scorer))
            wrong.append(answer_scores(text, q.gold_answers).em == 0)
        out[tag] = chr_rate(conf, wrong, threshold, stratum=tag)
    return out
