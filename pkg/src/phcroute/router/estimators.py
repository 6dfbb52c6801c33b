"""Escalation classifiers: L2 logistic regression and depth-2 gradient boosting.

Both follow the scikit-learn estimator protocol so they work with ``clone``
and ``get_params``. Scores are ``predict_proba(X)[:, 1]``, the estimated
probability that the graph backend beats the vector backend.
"""

from __future__ import annotations

import numpy as np
from scipy.special import expit
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from ..exceptions import FitError

MIN_ROWS = 20


def _validate_fit(X, y, min_rows):
    X, y = check_X_y(X, y, dtype=float, ensure_all_finite=True)
    labels = np.unique(y)
    if not set(labels.tolist()) <= {0, 1}:
        raise ValueError("labels must be 0/1")
    if len(labels) < 2:
        raise FitError("training labels contain a single class")
    if X.shape[0] < min_rows:
        raise FitError(f"need at least {min_rows} rows to fit, got {X.shape[0]}")
    return X, y.astype(float)


def _standardization(X):
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    std[std == 0] = 1.0
    return mean, std


class _RouterBase(ClassifierMixin, BaseEstimator):
    kind = ""

    def _set_names(self, X, feature_names):
        if feature_names is not None:
            if len(feature_names) != X.shape[1]:
                raise ValueError("feature_names length does not match X")
            self.feature_names_ = tuple(feature_names)
        else:
            self.feature_names_ = tuple(f"x{i}" for i in range(X.shape[1]))
        self.classes_ = np.array([0, 1])
        self.n_features_in_ = X.shape[1]

    def _check_predict(self, X):
        check_is_fitted(self)
        X = check_array(X, dtype=float, ensure_all_finite=True)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} features, got {X.shape[1]}")
        return X

    def predict_proba(self, X):
        p = expit(self.decision_function(X))
        return np.column_stack([1.0 - p, p])

    def predict(self, X):
        return (self.decision_function(X) >= 0).astype(int)

    def feature_importance(self) -> dict:
        check_is_fitted(self)
        return dict(zip(self.feature_names_, self.feature_importances_.tolist()))


class LogisticRouter(_RouterBase):
    """L2-penalized logistic regression on standardized features.

    Minimizes ``0.5 * ||w||^2 + C * sum(logloss)`` by damped Newton steps until
    the max-abs gradient falls below ``tol``. The intercept is not penalized.
    """

    kind = "logistic"

    def __init__(self, C=1.0, tol=1e-6, max_iter=1000, random_state=0):
        self.C = C
        self.tol = tol
        self.max_iter = max_iter
        self.random_state = random_state

    def _objective(self, Z, y, theta):
        f = Z @ theta
        loss = np.sum(np.logaddexp(0.0, f) - y * f)
        return self.C * loss + 0.5 * float(theta[1:] @ theta[1:])

    def fit(self, X, y, feature_names=None):
        X, y = _validate_fit(X, y, MIN_ROWS)
        self._set_names(X, feature_names)
        self.mean_, self.std_ = _standardization(X)
        Z = np.column_stack([np.ones(len(X)), (X - self.mean_) / self.std_])
        d = Z.shape[1]
        penalty = np.eye(d)
        penalty[0, 0] = 0.0
        theta = np.zeros(d)
        obj = self._objective(Z, y, theta)
        self.converged_ = False
        for it in range(1, self.max_iter + 1):
            p = expit(Z @ theta)
            grad = self.C * Z.T @ (p - y) + penalty @ theta
            if np.max(np.abs(grad)) < self.tol:
                self.converged_ = True
                break
            w = np.maximum(p * (1 - p), 1e-12)
            H = self.C * (Z.T * w) @ Z + penalty + 1e-10 * np.eye(d)
            step = np.linalg.solve(H, grad)
            t = 1.0
            while True:
                cand = theta - t * step
                new = self._objective(Z, y, cand)
                if new <= obj - 1e-4 * t * float(grad @ step) or t < 1e-10:
                    break
                t *= 0.5
            theta, obj = cand, new
        self.n_iter_ = it
        self.intercept_ = float(theta[0])
        self.coef_ = theta[1:].copy()
        total = np.abs(self.coef_).sum()
        self.feature_importances_ = (
            np.abs(self.coef_) / total if total > 0 else np.full(d - 1, 1.0 / (d - 1))
        )
        return self

    def decision_function(self, X):
        X = self._check_predict(X)
        return ((X - self.mean_) / self.std_) @ self.coef_ + self.intercept_


class GBStumpsRouter(_RouterBase):
    """Gradient boosting of depth-limited regression trees on logistic loss.

    Trees use second-order (Newton) leaf values with an L2 term ``reg_lambda``.
    The split search is exhaustive and deterministic: highest gain wins, ties
    go to the lowest feature index and then the lowest threshold. When several
    features tie for a node's best gain, the importance credit is shared
    between them, so duplicated columns receive equal importance.
    """

    kind = "gb_stumps"

    def __init__(
        self,
        n_estimators=200,
        learning_rate=0.1,
        max_depth=2,
        reg_lambda=1.0,
        min_child_weight=1e-3,
        random_state=0,
    ):
        self.n_estimators = n_estimators
        self.learning_rate = learning_rate
        self.max_depth = max_depth
        self.reg_lambda = reg_lambda
        self.min_child_weight = min_child_weight
        self.random_state = random_state

    def _best_split(self, X, order, sorted_vals, block_end, mask, g, h):
        """Best split of the rows in ``mask``.

        Returns (gain, feature, threshold, tied_features) or None.
        """
        lam = self.reg_lambda
        gm = np.where(mask, g, 0.0)
        hm = np.where(mask, h, 0.0)
        G, H = gm.sum(), hm.sum()
        mo = mask[order]  # (F, N) membership in sorted order
        GL = np.cumsum(gm[order], axis=1)[:, :-1]
        HL = np.cumsum(hm[order], axis=1)[:, :-1]
        # A split after position i is usable when no later in-node row shares
        # its value, i.e. no in-node rows remain in the rest of its tie block.
        cnt = np.cumsum(mo, axis=1)
        n_node = cnt[:, -1:]
        left_n = cnt[:, :-1]
        last_in_block = np.take_along_axis(cnt, block_end, axis=1) == left_n
        ok = last_in_block & mo[:, :-1] & (left_n > 0) & (left_n < n_node)
        HR = H - HL
        ok &= (HL >= self.min_child_weight) & (HR >= self.min_child_weight)
        if not ok.any():
            return None
        gain = GL**2 / (HL + lam) + (G - GL) ** 2 / (HR + lam) - G**2 / (H + lam)
        gain = np.where(ok, gain, -np.inf)
        best_per_feat = gain.max(axis=1)
        best = best_per_feat.max()
        if not best > 1e-12:
            return None
        f = int(np.argmax(best_per_feat))
        pos = int(np.argmax(gain[f]))
        # Threshold is the midpoint to the next larger in-node value.
        row_vals = sorted_vals[f]
        nxt = row_vals[pos + 1 :][mo[f, pos + 1 :]]
        thr = 0.5 * (row_vals[pos] + nxt[0])
        tied = np.flatnonzero(np.isclose(best_per_feat, best, rtol=1e-12, atol=0.0))
        return best, f, thr, tied

    def _grow(self, X, order, sorted_vals, block_end, mask, g, h, depth, gains):
        lam = self.reg_lambda
        value = -g[mask].sum() / (h[mask].sum() + lam)
        if depth < self.max_depth and mask.sum() >= 2:
            split = self._best_split(X, order, sorted_vals, block_end, mask, g, h)
            if split is not None:
                gain, f, thr, tied = split
                gains[tied] += gain / len(tied)
                go_left = X[:, f] <= thr
                left = self._grow(X, order, sorted_vals, block_end, mask & go_left, g, h, depth + 1, gains)
                right = self._grow(X, order, sorted_vals, block_end, mask & ~go_left, g, h, depth + 1, gains)
                return (f, thr, left, right)
        return float(value)

    def fit(self, X, y, feature_names=None):
        X, y = _validate_fit(X, y, MIN_ROWS)
        self._set_names(X, feature_names)
        self.mean_, self.std_ = _standardization(X)
        n, d = X.shape
        order = np.argsort(X, axis=0, kind="stable").T  # (F, N)
        sorted_vals = np.take_along_axis(X.T, order, axis=1)
        block_end = np.vstack(
            [np.searchsorted(row, row[:-1], side="right") - 1 for row in sorted_vals]
        )
        prior = np.clip(y.mean(), 1e-6, 1 - 1e-6)
        self.init_ = float(np.log(prior / (1 - prior)))
        F = np.full(n, self.init_)
        gains = np.zeros(d)
        trees = []
        full = np.ones(n, dtype=bool)
        for _ in range(self.n_estimators):
            p = expit(F)
            g = p - y
            h = np.maximum(p * (1 - p), 1e-12)
            tree = self._grow(X, order, sorted_vals, block_end, full, g, h, 0, gains)
            trees.append(tree)
            F += self.learning_rate * self._apply(tree, X)
        self.trees_ = trees
        total = gains.sum()
        self.feature_importances_ = gains / total if total > 0 else np.full(d, 1.0 / d)
        return self

    @staticmethod
    def _apply(tree, X):
        if not isinstance(tree, tuple):
            return np.full(X.shape[0], tree)
        f, thr, left, right = tree
        go_left = X[:, f] <= thr
        out = np.empty(X.shape[0])
        out[go_left] = GBStumpsRouter._apply(left, X[go_left])
        out[~go_left] = GBStumpsRouter._apply(right, X[~go_left])
        return out

    def decision_function(self, X):
        X = self._check_predict(X)
        F = np.full(X.shape[0], self.init_)
        for tree in self.trees_:
            F += self.learning_rate * self._apply(tree, X)
        return F


ESTIMATORS = {"logistic": LogisticRouter, "gb_stumps": GBStumpsRouter}


def make_estimator(kind: str, hyper: dict | None = None, seed: int = 0):
    try:
        cls = ESTIMATORS[kind]
    except KeyError:
        raise ValueError(f"unknown model kind {kind!r}; expected one of {sorted(ESTIMATORS)}") from None
    return cls(random_state=seed, **(hyper or {}))


def fit(features, labels, kind="gb_stumps", hyper=None, seed=0, feature_names=None):
    """Fit a router of the given kind and return the fitted estimator."""
    return make_estimator(kind, hyper, seed).fit(features, labels, feature_names=feature_names)


def feature_importance(model) -> dict:
    return model.feature_importance()
