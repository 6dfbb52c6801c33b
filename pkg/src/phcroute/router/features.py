"""Router feature construction from a query, its passages and answer signals."""

from __future__ import annotations

import math
import re
from dataclasses import astuple, dataclass, fields

import numpy as np

from ..corpus import QueryRecord
from ..signals import SignalVector, heuristic_entities
from ..textmetrics import normalize

CONNECTIVES = ("of the", "whose", "that is", "'s", "by the", "where", "which")
HOP_CAP = 4
SUPERLATIVES = frozenset(
    """
    oldest youngest largest smallest biggest longest shortest tallest highest lowest
    earliest latest first last most least best worst greatest fastest slowest
    richest poorest deepest farthest furthest nearest closest newest heaviest
    """.split()
)
TEMPORAL = frozenset(
    """
    when year years date dates century decade born died founded established during
    until since ago month day era age january february march april may june july
    august september october november december
    """.split()
)
_YEAR_RE = re.compile(r"\b(1[0-9]{3}|20[0-9]{2})\b")
_CONNECTIVE_RE = re.compile(
    r"(?<!\w)(?:of the|whose|that is|by the|where|which)(?!\w)|(?<=\w)['’]s(?!\w)"
)
_COMPARATIVE_RE = re.compile(r"\b\w+er\b|\bmore\b|\bless\b|\bfewer\b")
_COMPARISON_CUES = re.compile(
    r"\b(both|same|compare|compared|comparison|versus|vs|difference between|are .+ and .+ (the same|both))\b"
)


@dataclass(frozen=True)
class FeatureVector:
    lexical_conf: float
    ssc_conf: float
    conf_x_hop: float
    hop_pred: float
    hop_count: float
    entity_count: float
    entity_overlap_ratio: float
    relational_density: float
    avg_doc_length: float
    question_length: float
    doc_count: float
    has_superlative: float
    has_temporal: float
    qt_bridge: float
    qt_comparison: float
    qt_factoid: float
    qt_inference: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in astuple(self)):
            raise ValueError("feature values must be finite")
        if self.qt_bridge + self.qt_comparison + self.qt_factoid + self.qt_inference > 1:
            raise ValueError("query-type one-hots must sum to at most 1")

    def to_array(self, names=None) -> np.ndarray:
        names = names or FEATURE_NAMES
        return np.array([getattr(self, n) for n in names], dtype=float)

    def as_dict(self) -> dict:
        return {n: getattr(self, n) for n in FEATURE_NAMES}


FEATURE_NAMES = tuple(f.name for f in fields(FeatureVector))
POST_GEN_FEATURES = ("lexical_conf", "ssc_conf", "conf_x_hop")
PRE_GEN_FEATURES = tuple(n for n in FEATURE_NAMES if n not in POST_GEN_FEATURES)


def connective_count(question: str) -> int:
    return len(_CONNECTIVE_RE.findall((question or "").lower()))


def hop_pred(question: str) -> int:
    return min(HOP_CAP, 1 + connective_count(question))


def infer_query_type(question: str) -> str:
    """Pattern-based query type, used only when the record says ``unknown``."""
    q = (question or "").lower()
    if " or " in q and (_COMPARATIVE_RE.search(q) or q.startswith(("which", "who", "what"))):
        return "comparison"
    if _COMPARISON_CUES.search(q):
        return "comparison"
    if connective_count(q) >= 1:
        return "bridge"
    return "factoid"


def passages_meta(question: str, passages) -> tuple[int, float, float]:
    """(doc_count, avg_doc_length, entity_overlap_ratio) for a retrieved passage list."""
    passages = list(passages or [])
    doc_count = len(passages)
    avg_len = float(np.mean([len(normalize(p)) for p in passages])) if passages else 0.0
    q_ents = {tuple(normalize(e)) for e in heuristic_entities(question)} - {()}
    if not q_ents or not passages:
        return doc_count, avg_len, 0.0
    p_ents = set()
    for p in passages:
        p_ents.update(tuple(normalize(e)) for e in heuristic_entities(p))
    return doc_count, avg_len, len(q_ents & p_ents) / len(q_ents)


def post_gen_confidences(signals: SignalVector) -> tuple[float, float, float]:
    """(lexical_conf, ssc_conf, blended) with ssc_conf falling back to lexical."""
    parts = [(w, v) for w, v in ((0.25, signals.ssc), (0.40, signals.rating)) if v is not None]
    if parts:
        ssc_conf = sum(w * v for w, v in parts) / sum(w for w, _ in parts)
    else:
        ssc_conf = signals.lexical
    return signals.lexical, ssc_conf, signals.blended


def build_features(query: QueryRecord, meta, signals: SignalVector) -> FeatureVector:
    if signals is None or signals.blended is None:
        raise ValueError("build_features needs a blended confidence")
    doc_count, avg_doc_length, overlap = meta
    question = query.question
    q_tokens = normalize(question)
    words = set(q_tokens)
    n_conn = connective_count(question)
    hp = min(HOP_CAP, 1 + n_conn)
    qtype = query.query_type if query.query_type != "unknown" else infer_query_type(question)
    lex, ssc_conf, blended = post_gen_confidences(signals)
    return FeatureVector(
        lexical_conf=float(lex),
        ssc_conf=float(ssc_conf),
        conf_x_hop=float(blended) * hp,
        hop_pred=float(hp),
        hop_count=float(query.hop_count),
        entity_count=float(len(heuristic_entities(question))),
        entity_overlap_ratio=float(overlap),
        relational_density=n_conn / len(q_tokens) if q_tokens else 0.0,
        avg_doc_length=float(avg_doc_length),
        question_length=float(len(q_tokens)),
        doc_count=float(doc_count),
        has_superlative=float(bool(words & SUPERLATIVES)),
        has_temporal=float(bool(words & TEMPORAL) or bool(_YEAR_RE.search(question))),
        qt_bridge=float(qtype == "bridge"),
        qt_comparison=float(qtype == "comparison"),
        qt_factoid=float(qtype == "factoid"),
        qt_inference=float(qtype == "inference"),
    )


def feature_matrix(vectors, names=None) -> np.ndarray:
    names = tuple(names or FEATURE_NAMES)
    unknown = set(names) - set(FEATURE_NAMES)
    if unknown:
        raise ValueError(f"unknown feature names: {sorted(unknown)}")
    return np.vstack([v.to_array(names) for v in vectors]) if vectors else np.empty((0, len(names)))
