"""SQuAD-style answer normalization, token F1, exact match and ROUGE-L."""

from __future__ import annotations

import unicodedata
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

ARTICLES = frozenset({"a", "an", "the"})


@dataclass(frozen=True)
class ScoreTriple:
    f1: float
    em: int
    rouge_l: float


@lru_cache(maxsize=4096)
def _normalize_cached(text: str) -> tuple[str, ...]:
    chars = [" " if unicodedata.category(ch).startswith("P") else ch for ch in text.lower()]
    return tuple(tok for tok in "".join(chars).split() if tok not in ARTICLES)


def normalize(text: str) -> list[str]:
    """Lowercase, blank out punctuation, drop articles, split on whitespace."""
    return list(_normalize_cached(text or ""))


def _f1_tokens(pred: tuple[str, ...], gold: tuple[str, ...]) -> float:
    if not pred and not gold:
        return 1.0
    if not pred or not gold:
        return 0.0
    overlap = sum((Counter(pred) & Counter(gold)).values())
    if overlap == 0:
        return 0.0
    precision = overlap / len(pred)
    recall = overlap / len(gold)
    return 2 * precision * recall / (precision + recall)


def token_f1(pred: str, gold: str) -> float:
    return _f1_tokens(_normalize_cached(pred or ""), _normalize_cached(gold or ""))


def lcs_length(a, b) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, start=1):
            cur.append(prev[j - 1] + 1 if x == y else max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def _rouge_tokens(pred: tuple[str, ...], gold: tuple[str, ...]) -> float:
    if not pred and not gold:
        return 1.0
    if not pred or not gold:
        return 0.0
    lcs = lcs_length(pred, gold)
    if lcs == 0:
        return 0.0
    precision = lcs / len(pred)
    recall = lcs / len(gold)
    return 2 * precision * recall / (precision + recall)


def rouge_l(pred: str, gold: str) -> float:
    return _rouge_tokens(_normalize_cached(pred or ""), _normalize_cached(gold or ""))


def exact_match(pred: str, gold: str) -> int:
    return int(_normalize_cached(pred or "") == _normalize_cached(gold or ""))


def answer_scores(pred: str, golds) -> ScoreTriple:
    """Score ``pred`` against every gold alias and keep the best of each metric."""
    if isinstance(golds, str):
        golds = [golds]
    golds = list(golds)
    if not golds:
        raise ValueError("answer_scores needs at least one gold answer")
    p = _normalize_cached(pred or "")
    gtoks = [_normalize_cached(g or "") for g in golds]
    return ScoreTriple(
        f1=max(_f1_tokens(p, g) for g in gtoks),
        em=max(int(p == g) for g in gtoks),
        rouge_l=max(_rouge_tokens(p, g) for g in gtoks),
    )
