"""Post-generation uncertainty signals.

Everything here is a pure function of text. The K stochastic samples for SSC
and the rating call are produced by the pipeline, not this module.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable, Iterable, Optional

from .exceptions import RatingParseError
from .textmetrics import normalize, token_f1

DEFAULT_HEDGES = (
    "i believe",
    "approximately",
    "it is possible",
    "might be",
    "i'm not certain",
    "possibly",
    "perhaps",
    "likely",
)
DEFAULT_STRUGGLE = (
    "i cannot determine",
    "cannot determine",
    "it's unclear",
    "based on the context",
    "insufficient information",
)
H_CAP = 3
FAST_PATH_THRESHOLD = 0.85
COMPONENTS = ("hedging", "specificity", "struggle", "length_anomaly", "entity_coverage")

# "detector" is the five-component composite used for routing. "extractor" is
# the reduced hedge + entity-density measure.
WEIGHT_PRESETS = {
    "detector": (0.30, 0.25, 0.20, 0.10, 0.15),
    "extractor": (0.50, 0.50, 0.0, 0.0, 0.0),
}
BLEND_WEIGHTS = {"lexical": 0.35, "ssc": 0.25, "rating": 0.40}

# Capitalized words that never start an entity run.
STOPWORDS = frozenset(
    """
    a an the i i'm i've i'd it it's its this that these those there their they he she
    his her we our you your my me what which who whom whose when where why how
    is are was were be been being am do does did has have had in on at of for to
    from by with as and or but if then so not no yes also however although though
    while after before because based according answer question passage passages
    context unknown none perhaps possibly probably likely maybe approximately
    given therefore thus
    """.split()
)


@dataclass(frozen=True)
class LexicalBreakdown:
    hedging: float
    specificity: float
    struggle: float
    length_anomaly: float
    entity_coverage: float

    def as_tuple(self) -> tuple[float, ...]:
        return tuple(getattr(self, c) for c in COMPONENTS)


@dataclass
class SignalVector:
    lexical: float
    ssc: Optional[float] = None
    rating: Optional[float] = None
    blended: float = 0.0
    fast_path_taken: bool = False
    breakdown: Optional[LexicalBreakdown] = None

    def to_json(self) -> dict:
        out = asdict(self)
        out["breakdown"] = asdict(self.breakdown) if self.breakdown is not None else None
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "SignalVector":
        b = obj.get("breakdown")
        return cls(
            lexical=obj["lexical"],
            ssc=obj.get("ssc"),
            rating=obj.get("rating"),
            blended=obj.get("blended", obj["lexical"]),
            fast_path_taken=bool(obj.get("fast_path_taken", False)),
            breakdown=LexicalBreakdown(**b) if b else None,
        )


def _phrase_pattern(phrases: Iterable[str]) -> re.Pattern:
    # Longest first so "i cannot determine" wins over "cannot determine".
    ordered = sorted({p.strip().lower() for p in phrases if p.strip()}, key=len, reverse=True)
    alt = "|".join(re.escape(p) for p in ordered)
    return re.compile(rf"(?<!\w)(?:{alt})(?!\w)")


def load_phrase_list(path) -> tuple[str, ...]:
    """One lowercase phrase per line; blank lines and ``#`` comments are skipped."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return tuple(ln.strip().lower() for ln in lines if ln.strip() and not ln.lstrip().startswith("#"))


_WORD_RE = re.compile(r"[^\W_]+(?:['’][^\W_]+)*", re.UNICODE)
_NUM_RE = re.compile(r"\d")


def _words(text: str) -> list[str]:
    return _WORD_RE.findall(text or "")


def _is_numeral(tok: str) -> bool:
    return bool(_NUM_RE.search(tok))


def _is_entity_word(tok: str) -> bool:
    return tok[:1].isupper() and tok.lower().replace("’", "'") not in STOPWORDS


def heuristic_entities(text: str) -> list[str]:
    """Maximal runs of capitalized non-stopword tokens, plus numerals."""
    out, run = [], []
    for tok in _words(text):
        if _is_numeral(tok):
            if run:
                out.append(" ".join(run))
                run = []
            out.append(tok)
        elif _is_entity_word(tok):
            run.append(tok)
        elif run:
            out.append(" ".join(run))
            run = []
    if run:
        out.append(" ".join(run))
    return out


def _contains(haystack: list[str], needle: list[str]) -> bool:
    if not needle:
        return False
    n = len(needle)
    return any(haystack[i : i + n] == needle for i in range(len(haystack) - n + 1))


class LexicalScorer:
    """Configurable lexical breakdown extractor.

    ``entity_fn`` replaces the capitalization heuristic with an external NER
    callable returning entity strings.
    """

    def __init__(
        self,
        hedges: Iterable[str] = DEFAULT_HEDGES,
        struggle: Iterable[str] = DEFAULT_STRUGGLE,
        h_cap: int = H_CAP,
        entity_fn: Optional[Callable[[str], list[str]]] = None,
    ):
        if h_cap < 1:
            raise ValueError("h_cap must be >= 1")
        self.hedges = tuple(hedges)
        self.struggle = tuple(struggle)
        self.h_cap = h_cap
        self.entity_fn = entity_fn
        self._hedge_re = _phrase_pattern(self.hedges)
        self._struggle_re = _phrase_pattern(self.struggle)

    def hits(self, text: str, kind: str) -> int:
        pat = self._hedge_re if kind == "hedge" else self._struggle_re
        return len(pat.findall((text or "").lower().replace("’", "'")))

    def _entity_tokens(self, tokens: list[str]) -> int:
        return sum(1 for t in tokens if _is_numeral(t) or _is_entity_word(t))

    def breakdown(
        self,
        answer: str,
        question: str = "",
        dataset_len_mean: Optional[float] = None,
        dataset_len_std: Optional[float] = None,
    ) -> LexicalBreakdown:
        hedging = 1.0 - min(1.0, self.hits(answer, "hedge") / self.h_cap)
        struggle = 1.0 - min(1.0, self.hits(answer, "struggle") / self.h_cap)

        tokens = _words(answer)
        if self.entity_fn is None:
            specificity = self._entity_tokens(tokens) / len(tokens) if tokens else 0.0
        else:
            ent_toks = sum(len(_words(e)) for e in self.entity_fn(answer))
            specificity = min(1.0, ent_toks / len(tokens)) if tokens else 0.0

        if dataset_len_mean is None or dataset_len_std is None:
            length_anomaly = 1.0
        else:
            if not dataset_len_std > 0:
                raise ValueError("dataset_len_std must be > 0 when length scoring is enabled")
            z = (len(tokens) - dataset_len_mean) / dataset_len_std
            length_anomaly = 1.0 if abs(z) <= 2 else max(0.0, 1.0 - (abs(z) - 2) / 2)

        extract = self.entity_fn or heuristic_entities
        q_ents = {tuple(normalize(e)) for e in extract(question or "")}
        q_ents.discard(())
        if not q_ents:
            coverage = 1.0
        else:
            a_norm = normalize(answer)
            coverage = sum(_contains(a_norm, list(e)) for e in q_ents) / len(q_ents)

        return LexicalBreakdown(hedging, specificity, struggle, length_anomaly, coverage)


_DEFAULT_SCORER = LexicalScorer()


def lexical_breakdown(answer, question="", dataset_len_mean=None, dataset_len_std=None):
    return _DEFAULT_SCORER.breakdown(answer, question, dataset_len_mean, dataset_len_std)


def lexical_confidence(b: LexicalBreakdown, weights="detector") -> float:
    w = WEIGHT_PRESETS[weights] if isinstance(weights, str) else tuple(weights)
    if len(w) != len(COMPONENTS):
        raise ValueError(f"expected {len(COMPONENTS)} weights")
    val = sum(wi * si for wi, si in zip(w, b.as_tuple()))
    return min(1.0, max(0.0, val))


def ssc_agreement(answers) -> float:
    answers = list(answers)
    if len(answers) < 2:
        raise ValueError("SSC needs K >= 2 answers")
    pairs = list(itertools.combinations(answers, 2))
    return math.fsum(token_f1(a, b) for a, b in pairs) / len(pairs)


_NUMBER_RE = re.compile(r"(?<![\d.])(\d+(?:\.\d+)?|\.\d+)(\s*/\s*5(?![\d.]))?")


def parse_rating(reply: str) -> float:
    """First number in [0, 1] in the reply; ``N/5`` with N in (1, 5] is rescaled."""
    for m in _NUMBER_RE.finditer(reply or ""):
        val = float(m.group(1))
        if m.group(2) and 1.0 < val <= 5.0:
            return val / 5.0
        if 0.0 <= val <= 1.0:
            return val
    raise RatingParseError(f"no rating in [0,1] found in reply {reply!r:.80}")


def blend(lexical: float, ssc: Optional[float] = None, rating: Optional[float] = None):
    """Weighted mean of present signals. Returns ``(blended, fast_path_taken)``."""
    if not 0.0 <= lexical <= 1.0:
        raise ValueError("lexical confidence must lie in [0, 1]")
    fast = lexical > FAST_PATH_THRESHOLD
    parts = [(BLEND_WEIGHTS["lexical"], lexical)]
    if ssc is not None and not fast:
        parts.append((BLEND_WEIGHTS["ssc"], ssc))
    if rating is not None:
        parts.append((BLEND_WEIGHTS["rating"], rating))
    total = sum(w for w, _ in parts)
    val = sum(w * v for w, v in parts) / total
    lo = min(v for _, v in parts)
    hi = max(v for _, v in parts)
    return min(hi, max(lo, val)), fast
