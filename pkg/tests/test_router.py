import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from sklearn.base import clone

from phcroute.corpus import QueryRecord
from phcroute.exceptions import FitError, StratificationError
from phcroute.router.estimators import GBStumpsRouter, LogisticRouter, feature_importance, fit, make_estimator
from phcroute.router.features import (
    FEATURE_NAMES,
    build_features,
    feature_matrix,
    hop_pred,
    infer_query_type,
    passages_meta,
)
from phcroute.router.persistence import load_model, save_model
from phcroute.router.policies import decide, decide_threshold, decide_type_aware
from phcroute.router.selection import cv_oof, escalation_count, stratified_folds, threshold_for_rate
from phcroute.signals import SignalVector
from phcroute.stats import auc


def query(question, qtype="unknown", hop=2):
    return QueryRecord("q", "hotpotqa", question, ("x",), hop, qtype)


def test_conf_x_hop_is_blended_times_hop_pred():
    q = query("What is the capital of the country whose president wrote it?", "bridge")
    assert hop_pred(q.question) == 3
    fv = build_features(q, (5, 100.0, 0.5), SignalVector(lexical=0.7, blended=0.8))
    assert fv.conf_x_hop == pytest.approx(2.4)
    assert fv.hop_pred == 3.0 and fv.qt_bridge == 1.0


def test_comparison_question_features():
    q = query("Which is older, X or Y?")
    assert infer_query_type(q.question) == "comparison"
    fv = build_features(q, (0, 0.0, 0.0), SignalVector(lexical=0.5, blended=0.5))
    assert fv.qt_comparison == 1.0
    assert fv.has_superlative == 0.0  # "older" is comparative, not in the superlative list
    fv = build_features(query("Which is the oldest, X or Y?"), (0, 0.0, 0.0), SignalVector(lexical=0.5, blended=0.5))
    assert fv.has_superlative == 1.0


def test_hop_pred_is_capped():
    assert hop_pred("the son of the wife of the king of the land of the sea") == 4
    assert hop_pred("Who won?") == 1


def test_temporal_flag_and_meta():
    q = query("When was Paris founded?")
    fv = build_features(q, passages_meta(q.question, ["Paris was founded long ago."]), SignalVector(0.5, blended=0.5))
    assert fv.has_temporal == 1.0
    assert fv.entity_overlap_ratio == 1.0
    assert fv.doc_count == 1.0


def test_build_features_needs_blended():
    with pytest.raises(ValueError):
        build_features(query("Q?"), (0, 0.0, 0.0), None)


def test_feature_matrix_subset_and_unknown():
    fv = build_features(query("Q?"), (0, 0.0, 0.0), SignalVector(0.4, blended=0.4))
    assert feature_matrix([fv], ["lexical_conf"]).tolist() == [[0.4]]
    assert feature_matrix([fv]).shape == (1, len(FEATURE_NAMES))
    with pytest.raises(ValueError):
        feature_matrix([fv], ["nope"])


def test_logistic_separable():
    x = np.r_[np.linspace(-3, -0.5, 20), np.linspace(0.5, 3, 20)].reshape(-1, 1)
    y = np.r_[np.zeros(20), np.ones(20)].astype(int)
    m = LogisticRouter().fit(x, y)
    assert m.converged_
    assert (m.predict(x) == y).mean() == 1.0


def test_gb_threshold_rule_oof(rng):
    X = rng.standard_normal((500, 3))
    y = (X[:, 0] > 0).astype(int)
    oof = cv_oof(X, y, k=5, seed=0, estimator="gb_stumps")
    assert auc(oof, y) > 0.95


def test_gb_beats_logistic_on_product_interaction(rng):
    X = rng.uniform(-1, 1, (600, 2))
    y = (X[:, 0] * X[:, 1] > 0).astype(int)
    gb = auc(cv_oof(X, y, estimator="gb_stumps"), y)
    lr = auc(cv_oof(X, y, estimator="logistic"), y)
    assert gb - lr >= 0.05


def test_fit_errors(rng):
    with pytest.raises(FitError):
        fit(rng.random((30, 2)), np.ones(30, int))
    with pytest.raises(FitError):
        fit(rng.random((5, 2)), [0, 1, 0, 1, 0])
    X = rng.random((30, 2))
    X[0, 0] = np.nan
    with pytest.raises(ValueError):
        fit(X, np.r_[np.zeros(15), np.ones(15)].astype(int))
    with pytest.raises(ValueError):
        make_estimator("forest")


def test_single_feature_importance(rng):
    x = rng.standard_normal((100, 1))
    y = (x[:, 0] > 0).astype(int)
    for kind in ("logistic", "gb_stumps"):
        imp = feature_importance(fit(x, y, kind=kind, feature_names=["lexical_conf"]))
        assert imp == {"lexical_conf": pytest.approx(1.0)}


def test_duplicate_columns_get_equal_importance(rng):
    x = rng.standard_normal((300, 1))
    X = np.hstack([x, x])
    y = (x[:, 0] + 0.3 * rng.standard_normal(300) > 0).astype(int)
    imp = fit(X, y, kind="gb_stumps").feature_importances_
    assert abs(imp[0] - imp[1]) <= 0.02
    assert imp.sum() == pytest.approx(1.0)


def test_sklearn_protocol():
    m = make_estimator("gb_stumps", {"n_estimators": 10}, seed=3)
    c = clone(m)
    assert c.get_params() == m.get_params()
    assert isinstance(m, GBStumpsRouter) and m.n_estimators == 10 and m.random_state == 3


def test_cv_oof_contract_and_determinism(rng):
    X = rng.standard_normal((120, 4))
    y = (X[:, 1] + rng.standard_normal(120) > 0).astype(int)
    a = cv_oof(X, y, k=5, seed=7)
    assert a.shape == (120,) and np.all((a >= 0) & (a <= 1))
    assert np.array_equal(a, cv_oof(X, y, k=5, seed=7))


def test_cv_oof_null_labels(rng):
    X = rng.standard_normal((400, 3))
    y = rng.permutation(np.r_[np.zeros(200), np.ones(200)]).astype(int)
    assert abs(auc(cv_oof(X, y, estimator="logistic"), y) - 0.5) <= 0.08


@given(st.integers(10, 60), st.integers(10, 60), st.integers(2, 5), st.integers(0, 1000))
def test_stratified_folds_partition(n0, n1, k, seed):
    y = np.r_[np.zeros(n0), np.ones(n1)].astype(int)
    folds = stratified_folds(y, k, seed)
    assert set(folds.tolist()) == set(range(k))
    for cls, n in ((0, n0), (1, n1)):
        counts = np.bincount(folds[y == cls], minlength=k)
        assert counts.max() - counts.min() <= 1 and counts.sum() == n


def test_stratification_error():
    with pytest.raises(StratificationError):
        stratified_folds([0] * 10 + [1] * 3, k=5)


def test_threshold_for_rate_examples():
    s = np.arange(1, 101)
    assert escalation_count(s, threshold_for_rate(s, 0.32)) == 32
    assert threshold_for_rate(np.full(10, 0.5), 0.5) == math.inf
    s = np.random.default_rng(0).random(1800)
    assert escalation_count(s, threshold_for_rate(s, 0.72)) == 1296
    with pytest.raises(ValueError):
        threshold_for_rate(s, 1.0)


@given(st.lists(st.integers(0, 20), min_size=1, max_size=80), st.floats(0.01, 0.99))
def test_threshold_never_exceeds_budget(scores, rate):
    tau = threshold_for_rate(scores, rate)
    assert escalation_count(scores, tau) <= math.floor(rate * len(scores) + 1e-9)


def test_policy_examples():
    assert decide("threshold", conf=0.52).escalate
    assert not decide("threshold", conf=0.65).escalate
    assert not decide_type_aware(0.01, "comparison").escalate
    assert not decide_type_aware(0.99, "comparison").escalate
    assert decide_type_aware(0.60, "bridge").escalate
    assert not decide_type_aware(0.50, "bridge").escalate
    assert decide_type_aware(0.50, "factoid").escalate
    with pytest.raises(ValueError):
        decide("threshold")
    with pytest.raises(ValueError):
        decide("random", conf=0.1)


def test_policy_polarity_by_enumeration(rng):
    confs = np.round(rng.random(200), 2)
    got = {c for c in confs if decide_threshold(c, 0.5).escalate}
    assert got == {c for c in confs if c < 0.5}
    X = rng.standard_normal((60, 2))
    y = (X[:, 0] > 0).astype(int)
    m = fit(X, y, kind="logistic")
    scores = m.predict_proba(X)[:, 1]
    tau = float(np.median(scores))
    got = [decide("learned", features=x, model=m, tau=tau).escalate for x in X]
    assert got == [bool(s >= tau) for s in scores]


def test_monotone_rule_cannot_match_type_conditional(rng):
    # Positive class is confident in stratum A and unconfident in stratum B.
    n = 200
    stratum = rng.integers(0, 2, n)
    y = rng.integers(0, 2, n)
    sign = np.where(stratum == 0, 1, -1)
    conf = np.clip(0.5 + sign * (y - 0.5) * 0.5 + rng.normal(0, 0.1, n), 0, 1)
    monotone = max(auc(conf, y), auc(-conf, y))
    conditional = auc(np.where(stratum == 0, conf, 1 - conf), y)
    assert monotone < conditional


@pytest.mark.parametrize("kind", ["logistic", "gb_stumps"])
def test_persistence_roundtrip(tmp_path, rng, kind):
    X = rng.standard_normal((80, 3))
    y = (X[:, 0] - X[:, 2] > 0).astype(int)
    m = fit(X, y, kind=kind, feature_names=["a", "b", "c"])
    save_model(m, tmp_path / "m.json")
    back = load_model(tmp_path / "m.json")
    assert back.feature_names_ == ("a", "b", "c")
    assert np.array_equal(back.predict_proba(X), m.predict_proba(X))
    assert back.feature_importance() == m.feature_importance()
