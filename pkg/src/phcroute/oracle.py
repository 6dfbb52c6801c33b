"""Oracle labels and ceilings, gap/capture/CHR metrics, and the PHC statistic."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .exceptions import UndefinedMetricError
from .stats import permutation_test, stars

CAPTURE_EPS = 1e-9
CHR_THRESHOLD = 0.6


@dataclass(frozen=True)
class PHCResult:
    stratum: str
    N: int
    auc: float
    p_value: float
    stars: str

    def csv_row(self) -> list:
        return [self.stratum, self.N, f"{self.auc:.3f}", f"{self.p_value:.4f}", self.stars]


@dataclass(frozen=True)
class OracleSummary:
    oracle_f1: float
    vr_f1: float
    gr_f1: float
    oracle_escalation_rate: float


def oracle_label(vr_f1: float, gr_f1: float) -> int:
    """1 iff the graph answer strictly beats the vector answer."""
    return int(gr_f1 > vr_f1)


def oracle_labels(vr_f1, gr_f1) -> np.ndarray:
    return (np.asarray(gr_f1, dtype=float) > np.asarray(vr_f1, dtype=float)).astype(int)


def oracle_ceiling(pairs) -> OracleSummary:
    arr = np.asarray(list(pairs), dtype=float)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] != 2:
        raise ValueError("oracle_ceiling needs a non-empty list of (vr_f1, gr_f1) pairs")
    vr, gr = arr[:, 0], arr[:, 1]
    return OracleSummary(
        oracle_f1=float(np.maximum(vr, gr).mean()),
        vr_f1=float(vr.mean()),
        gr_f1=float(gr.mean()),
        oracle_escalation_rate=float(oracle_labels(vr, gr).mean()),
    )


def gap_closed(sys_f1: float, vr_f1: float, oracle_f1: float) -> float:
    if not oracle_f1 > vr_f1:
        raise UndefinedMetricError("gap_closed needs oracle_f1 > vr_f1")
    return (sys_f1 - vr_f1) / (oracle_f1 - vr_f1)


def capture_rate(rr_f1, vr_f1, gr_f1, eps: float = CAPTURE_EPS) -> float:
    """Per-query (rr - vr)/(gr - vr), macro-averaged over queries with |gr - vr| > eps.

    Scalars give the single-query ratio.
    """
    rr = np.atleast_1d(np.asarray(rr_f1, dtype=float))
    vr = np.atleast_1d(np.asarray(vr_f1, dtype=float))
    gr = np.atleast_1d(np.asarray(gr_f1, dtype=float))
    if not (rr.shape == vr.shape == gr.shape):
        raise ValueError("rr, vr and gr must have equal length")
    gap = gr - vr
    keep = np.abs(gap) > eps
    if not keep.any():
        raise UndefinedMetricError("capture rate undefined: no query has gr_f1 != vr_f1")
    return float(np.mean((rr[keep] - vr[keep]) / gap[keep]))


def phc(conf, labels, B: int = 5000, seed: int = 0, stratum: str = "all") -> PHCResult:
    """AUC of confidence predicting the oracle label, with a one-sided permutation p."""
    conf = np.asarray(conf, dtype=float)
    labels = np.asarray(labels)
    if len(conf) < 2:
        raise UndefinedMetricError("PHC needs at least 2 queries", stratum=stratum)
    if len(conf) < 10:
        warnings.warn(f"PHC stratum {stratum!r} has only {len(conf)} queries", stacklevel=2)
    res = permutation_test(conf, labels, B=B, seed=seed, stratum=stratum)
    return PHCResult(stratum, len(conf), res.observed_auc, res.p_value, stars(res.p_value))


def is_wrong(em=None, f1=None, rule: str = "em") -> np.ndarray:
    if rule == "em":
        return np.asarray(em) == 0
    if rule == "f1":
        return np.asarray(f1, dtype=float) < 0.5
    raise ValueError("rule must be 'em' or 'f1'")


def chr_rate(conf, wrong, threshold: float = CHR_THRESHOLD, stratum: str | None = None) -> float:
    """Confident hallucination rate: share of wrong answers with conf > threshold."""
    conf = np.asarray(conf, dtype=float)
    wrong = np.asarray(wrong).astype(bool)
    if conf.shape != wrong.shape:
        raise ValueError("conf and wrong must have equal length")
    if not wrong.any():
        raise UndefinedMetricError("CHR undefined: stratum has no wrong answers", stratum=stratum)
    return float(np.mean(conf[wrong] > threshold))


def chr(records, threshold: float = CHR_THRESHOLD, rule: str = "em", stratum: str | None = None) -> float:
    """CHR over records exposing ``em``/``f1`` and a confidence.

    Records may be ``RunRecord`` objects with ``signals`` or ``(conf, em)`` pairs.
    """
    conf, em, f1 = [], [], []
    for r in records:
        if isinstance(r, tuple):
            conf.append(r[0])
            em.append(r[1])
            f1.append(float(r[1]))
        else:
            sig = r.signals or {}
            conf.append(sig.get("blended", sig.get("lexical")))
            em.append(r.em)
            f1.append(r.f1)
    return chr_rate(conf, is_wrong(em, f1, rule), threshold, stratum)


def macro_mean(values_by_group: dict) -> float:
    return math.fsum(values_by_group.values()) / len(values_by_group)
