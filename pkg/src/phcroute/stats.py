"""Selective-prediction statistics.

AUC and the permutation test work on integer Mann-Whitney counts (twice the
U statistic), so equality comparisons are exact and ties never depend on float
rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import stats as _sps
from scipy.stats import rankdata

from .exceptions import UndefinedMetricError

_PERM_CHUNK = 1024
_BOOT_CHUNK = 512


@dataclass(frozen=True)
class PermutationResult:
    observed_auc: float
    p_value: float
    B: int
    seed: int


@dataclass(frozen=True)
class BootstrapResult:
    delta: float
    ci_low: float
    ci_high: float
    p_value: float
    n_resamples: int
    seed: int


class RankCorrelation(NamedTuple):
    spearman_rho: float
    pearson_r: float


@dataclass(frozen=True)
class DetectorMetrics:
    precision: float
    recall: float
    f1: float
    escalation_rate: float
    precision_defined: bool = True

    def __iter__(self):
        return iter((self.precision, self.recall, self.f1, self.escalation_rate))


def stars(p: float) -> str:
    if p < 0.001:
        return "***"
    if p < 0.01:
        return "**"
    if p < 0.05:
        return "*"
    return "ns"


def _check_binary(scores, labels, stratum=None):
    s = np.asarray(scores, dtype=float)
    y = np.asarray(labels)
    if s.ndim != 1 or s.shape != y.shape:
        raise ValueError("scores and labels must be 1-D arrays of equal length")
    if not np.all(np.isfinite(s)):
        raise ValueError("scores must be finite")
    if not np.all((y == 0) | (y == 1)):
        raise ValueError("labels must be 0/1")
    y = y.astype(bool)
    n_pos = int(y.sum())
    if n_pos == 0 or n_pos == len(y):
        raise UndefinedMetricError("AUC is undefined with a single label class", stratum=stratum)
    return s, y


def _u2(ranks2: np.ndarray, y: np.ndarray, n_pos: int) -> int:
    # ranks2 holds doubled midranks (integers); returns 2*U for the positive class.
    return int(ranks2[y].sum()) - n_pos * (n_pos + 1)


def auc(scores, labels, stratum=None) -> float:
    """Mann-Whitney AUC: P(score+ > score-) + 0.5 P(tie)."""
    s, y = _check_binary(scores, labels, stratum)
    n_pos = int(y.sum())
    n_neg = len(y) - n_pos
    ranks2 = np.rint(2 * rankdata(s)).astype(np.int64)
    return _u2(ranks2, y, n_pos) / (2 * n_pos * n_neg)


def permutation_test(scores, labels, B: int = 5000, seed: int = 0, alternative="greater_than_half", stratum=None):
    """One-sided label-permutation test for AUC > 0.5.

    p = (1 + #{b : AUC_b >= AUC_obs}) / (B + 1). Permutations come from
    ``numpy.random.default_rng(seed)`` in fixed-size chunks, so the result is
    a pure function of the inputs and seed.
    """
    if alternative != "greater_than_half":
        raise ValueError("only alternative='greater_than_half' is supported")
    if B < 1:
        raise ValueError("B must be >= 1")
    s, y = _check_binary(scores, labels, stratum)
    n = len(y)
    n_pos = int(y.sum())
    n_neg = n - n_pos
    ranks2 = np.rint(2 * rankdata(s)).astype(np.int64)
    obs = _u2(ranks2, y, n_pos)
    rng = np.random.default_rng(seed)
    base = np.broadcast_to(y.astype(np.int8), (_PERM_CHUNK, n))
    exceed = 0
    done = 0
    while done < B:
        m = min(_PERM_CHUNK, B - done)
        perm = rng.permuted(base[:m], axis=1)
        u2 = perm.astype(np.int64) @ ranks2 - n_pos * (n_pos + 1)
        exceed += int(np.count_nonzero(u2 >= obs))
        done += m
    p = (1 + exceed) / (B + 1)
    return PermutationResult(obs / (2 * n_pos * n_neg), p, B, seed)


def paired_bootstrap(f1_a, f1_b, n: int = 10000, seed: int = 42, groups=None) -> BootstrapResult:
    """Paired bootstrap over queries for mean(a) - mean(b).

    With ``groups`` the statistic is the macro mean of per-group deltas and
    queries are resampled within their group.

    The CI is the 2.5/97.5 percentile interval, widened if needed so that it
    contains the point estimate. Two-sided p = 2 min(P(d* <= 0), P(d* >= 0)),
    clipped to [1/n, 1].
    """
    a = np.asarray(f1_a, dtype=float)
    b = np.asarray(f1_b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("paired_bootstrap needs two 1-D vectors of equal length")
    if len(a) < 2:
        raise ValueError("paired_bootstrap needs at least 2 paired observations")
    if n < 1:
        raise ValueError("n must be >= 1")
    d = a - b
    if groups is None:
        strata = [d]
    else:
        g = np.asarray(list(groups))
        if len(g) != len(d):
            raise ValueError("groups must match the score vectors in length")
        strata = [d[g == k] for k in sorted(set(g.tolist()))]
    delta = float(np.mean([s.mean() for s in strata]))
    rng = np.random.default_rng(seed)
    boots = np.zeros(n)
    done = 0
    while done < n:
        m = min(_BOOT_CHUNK, n - done)
        for s in strata:
            idx = rng.integers(0, len(s), size=(m, len(s)))
            boots[done : done + m] += s[idx].mean(axis=1)
        done += m
    boots /= len(strata)
    lo, hi = np.percentile(boots, [2.5, 97.5])
    lo, hi = min(float(lo), delta), max(float(hi), delta)
    p = 2 * min(np.mean(boots <= 0), np.mean(boots >= 0))
    p = float(min(1.0, max(1.0 / n, p)))
    return BootstrapResult(delta, lo, hi, p, n, seed)


def _pearson(x: np.ndarray, y: np.ndarray) -> float:
    xc = x - x.mean()
    yc = y - y.mean()
    sx = math.sqrt(float(xc @ xc))
    sy = math.sqrt(float(yc @ yc))
    if sx == 0 or sy == 0:
        raise UndefinedMetricError("correlation is undefined for a constant vector")
    r = float(xc @ yc) / (sx * sy)
    return max(-1.0, min(1.0, r))


def rank_correlations(x, y) -> RankCorrelation:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-D vectors of equal length")
    if len(x) < 3:
        raise ValueError("rank_correlations needs at least 3 points")
    return RankCorrelation(_pearson(rankdata(x), rankdata(y)), _pearson(x, y))


def correlation_pvalue(r: float, n: int) -> float:
    """Two-sided p for H0: no correlation, t-test with n-2 degrees of freedom."""
    if n < 3:
        raise ValueError("need n >= 3")
    if abs(r) >= 1.0:
        return 0.0
    t = r * math.sqrt((n - 2) / (1 - r * r))
    return float(2 * _sps.t.sf(abs(t), n - 2))


def _bin_index(conf: np.ndarray, bins: int) -> np.ndarray:
    if np.any((conf < 0) | (conf > 1)):
        raise ValueError("confidences must lie in [0, 1]")
    return np.minimum((conf * bins).astype(int), bins - 1)


def plugin_mi(conf, labels, bins: int = 10) -> float:
    """Plug-in mutual information in bits between binned confidence and labels."""
    c = np.asarray(conf, dtype=float)
    g = np.asarray(labels)
    if c.shape != g.shape or c.size == 0:
        raise ValueError("conf and labels must be non-empty and equal length")
    cb = _bin_index(c, bins)
    _, gi = np.unique(g, return_inverse=True)
    joint = np.zeros((bins, gi.max() + 1))
    np.add.at(joint, (cb, gi), 1.0)
    joint /= joint.sum()
    pc = joint.sum(axis=1, keepdims=True)
    pg = joint.sum(axis=0, keepdims=True)
    nz = joint > 0
    mi = float(np.sum(joint[nz] * np.log2(joint[nz] / (pc @ pg)[nz])))
    return max(0.0, mi)


def ece(conf, correct, bins: int = 10) -> float:
    c = np.asarray(conf, dtype=float)
    k = np.asarray(correct, dtype=float)
    if c.shape != k.shape or c.size == 0:
        raise ValueError("conf and correct must be non-empty and equal length")
    cb = _bin_index(c, bins)
    total = 0.0
    for b in range(bins):
        m = cb == b
        nb = int(m.sum())
        if nb:
            total += nb * abs(float(c[m].mean()) - float(k[m].mean()))
    return total / len(c)


def detector_metrics(decisions, labels) -> DetectorMetrics:
    d = np.asarray(decisions).astype(bool)
    y = np.asarray(labels).astype(bool)
    if d.shape != y.shape or d.size == 0:
        raise ValueError("decisions and labels must be non-empty and equal length")
    tp = int(np.sum(d & y))
    pred_pos = int(d.sum())
    pos = int(y.sum())
    precision = tp / pred_pos if pred_pos else 0.0
    recall = tp / pos if pos else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return DetectorMetrics(precision, recall, f1, float(d.mean()), precision_defined=pred_pos > 0)
