"""Stratified out-of-fold scoring, matched-rate thresholds and sample efficiency."""

from __future__ import annotations

import math

import numpy as np
from sklearn.base import clone

from ..exceptions import StratificationError
from ..stats import auc
from .estimators import make_estimator


def stratified_folds(labels, k: int = 5, seed: int = 0) -> np.ndarray:
    """Fold id per row. Each class is shuffled with ``default_rng(seed)`` and
    dealt round-robin, so every fold gets floor or ceil of its class share."""
    y = np.asarray(labels).astype(int)
    if k < 2:
        raise ValueError("k must be >= 2")
    rng = np.random.default_rng(seed)
    folds = np.empty(len(y), dtype=int)
    for cls in (0, 1):
        idx = np.flatnonzero(y == cls)
        if len(idx) < k:
            raise StratificationError(f"class {cls} has {len(idx)} rows, fewer than k={k} folds")
        idx = rng.permutation(idx)
        folds[idx] = np.arange(len(idx)) % k
    return folds


def cv_oof(features, labels, k: int = 5, seed: int = 0, estimator="gb_stumps", hyper=None, feature_names=None):
    """Out-of-fold P(escalate) for every row.

    ``estimator`` is a model kind string or an unfitted estimator; each fold
    fits a fresh clone, so per-fold standardization never sees held-out rows.
    """
    X = np.asarray(features, dtype=float)
    y = np.asarray(labels).astype(int)
    if X.ndim != 2 or X.shape[0] != len(y):
        raise ValueError("features must be an (N, d) matrix matching labels")
    if not set(np.unique(y).tolist()) <= {0, 1}:
        raise ValueError("labels must be 0/1")
    base = make_estimator(estimator, hyper, seed) if isinstance(estimator, str) else estimator
    folds = stratified_folds(y, k, seed)
    oof = np.empty(len(y))
    for f in range(k):
        test = folds == f
        model = clone(base).fit(X[~test], y[~test], feature_names=feature_names)
        oof[test] = model.predict_proba(X[test])[:, 1]
    return oof


def threshold_for_rate(scores, target_rate: float) -> float:
    """Smallest observed score tau with #{score >= tau} <= floor(alpha * N).

    Escalating ``score >= tau`` never exceeds the budget. Tied scores that would
    overshoot are all left unescalated. Returns ``inf`` when nothing fits.
    """
    if not 0.0 < target_rate < 1.0:
        raise ValueError("target_rate must lie in (0, 1)")
    s = np.sort(np.asarray(scores, dtype=float))[::-1]
    n = len(s)
    if n == 0:
        return math.inf
    budget = math.floor(target_rate * n + 1e-9)
    if budget == 0:
        return math.inf
    # Candidate: the budget-th largest score, stepped up past any tie overflow.
    uniq = np.unique(s)[::-1]
    counts = np.searchsorted(-s, -uniq, side="right")  # #{s >= u} for each unique u
    ok = uniq[counts <= budget]
    return float(ok.min()) if len(ok) else math.inf


def escalation_count(scores, tau: float) -> int:
    return int(np.sum(np.asarray(scores, dtype=float) >= tau))


def sample_efficiency(
    features,
    labels,
    sizes=(100, 200, 400, 800, 1200, 1800),
    k: int = 3,
    seed: int = 0,
    estimator="gb_stumps",
    hyper=None,
):
    """OOF AUC on nested subsets drawn from one seeded shuffle of the rows.

    Returns a list of ``(n, auc)``; sizes larger than the data are skipped.
    """
    X = np.asarray(features, dtype=float)
    y = np.asarray(labels).astype(int)
    order = np.random.default_rng(seed).permutation(len(y))
    out = []
    for n in sizes:
        if n > len(y):
            continue
        idx = order[:n]
        oof = cv_oof(X[idx], y[idx], k=k, seed=seed, estimator=estimator, hyper=hyper)
        out.append((n, auc(oof, y[idx])))
    return out
