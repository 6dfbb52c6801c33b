import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from phcroute.data import fixture
from phcroute.exceptions import UndefinedMetricError
from phcroute.router.selection import threshold_for_rate
from phcroute.stats import (
    auc,
    correlation_pvalue,
    detector_metrics,
    ece,
    paired_bootstrap,
    permutation_test,
    plugin_mi,
    rank_correlations,
    stars,
)


def pairs_auc(scores, labels):
    pos = [s for s, y in zip(scores, labels) if y == 1]
    neg = [s for s, y in zip(scores, labels) if y == 0]
    wins = sum(1.0 if p > n else 0.5 if p == n else 0.0 for p in pos for n in neg)
    return wins / (len(pos) * len(neg))


@st.composite
def scored_labels(draw, max_n=40):
    n = draw(st.integers(2, max_n))
    labels = draw(st.lists(st.integers(0, 1), min_size=n, max_size=n).filter(lambda y: 0 < sum(y) < len(y)))
    # Coarse grid so ties are common.
    scores = draw(st.lists(st.integers(0, 6).map(lambda v: v / 6), min_size=n, max_size=n))
    return scores, labels


def test_auc_example():
    assert auc([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1]) == 0.75


def test_auc_single_class_raises():
    with pytest.raises(UndefinedMetricError):
        auc([0.1, 0.2], [1, 1])


def test_auc_rejects_non_binary():
    with pytest.raises(ValueError):
        auc([0.1, 0.2], [0, 2])


@given(scored_labels())
def test_auc_matches_pair_counting(data):
    s, y = data
    assert auc(s, y) == pytest.approx(pairs_auc(s, y), abs=1e-12)


@given(scored_labels())
def test_auc_complement(data):
    s, y = data
    assert auc(s, y) + auc(s, [1 - v for v in y]) == pytest.approx(1.0, abs=1e-12)


@given(scored_labels())
def test_auc_invariant_under_monotone_transform(data):
    s, y = data
    t = [math.exp(3 * v) - 7 for v in s]
    assert auc(t, y) == auc(s, y)


def test_permutation_perfect_separation():
    s = list(range(20))
    y = [0] * 10 + [1] * 10
    res = permutation_test(s, y, B=5000, seed=0)
    assert res.observed_auc == 1.0
    assert res.p_value == pytest.approx(1 / 5001)


def test_permutation_is_deterministic():
    rng = np.random.default_rng(3)
    s = rng.random(60)
    y = rng.integers(0, 2, 60)
    a = permutation_test(s, y, B=1500, seed=9)
    b = permutation_test(s, y, B=1500, seed=9)
    assert a == b


def test_permutation_p_bounds():
    rng = np.random.default_rng(4)
    s = rng.random(30)
    y = np.r_[np.zeros(15), np.ones(15)].astype(int)
    res = permutation_test(s, y, B=200, seed=1)
    assert 1 / 201 <= res.p_value <= 1.0


def test_permutation_rejects_bad_args():
    with pytest.raises(ValueError):
        permutation_test([0.1, 0.2], [0, 1], B=0)
    with pytest.raises(ValueError):
        permutation_test([0.1, 0.2], [0, 1], alternative="two_sided")


@pytest.mark.parametrize("p,expected", [(0.0009, "***"), (0.001, "**"), (0.0099, "**"), (0.01, "*"), (0.049, "*"), (0.05, "ns")])
def test_stars_boundaries(p, expected):
    assert stars(p) == expected


def test_bootstrap_constant_shift():
    a = np.linspace(0, 1, 50)
    res = paired_bootstrap(a + 0.1, a, n=2000)
    assert res.delta == pytest.approx(0.1)
    assert res.ci_low == pytest.approx(0.1) and res.ci_high == pytest.approx(0.1)
    assert res.p_value == pytest.approx(1 / 2000)


def test_bootstrap_ci_contains_delta_and_is_seeded():
    rng = np.random.default_rng(0)
    a, b = rng.random(80), rng.random(80)
    r1 = paired_bootstrap(a, b, n=3000, seed=5)
    r2 = paired_bootstrap(a, b, n=3000, seed=5)
    assert r1 == r2
    assert r1.ci_low <= r1.delta <= r1.ci_high
    assert 0 < r1.p_value <= 1


def test_bootstrap_grouped_is_macro_of_group_deltas():
    a = np.array([1.0, 1.0, 0.0, 0.0, 0.0, 0.0])
    b = np.zeros(6)
    g = ["x", "x", "y", "y", "y", "y"]
    assert paired_bootstrap(a, b, n=100, groups=g).delta == pytest.approx(0.5)
    assert paired_bootstrap(a, b, n=100).delta == pytest.approx(1 / 3)


def test_bootstrap_validation():
    with pytest.raises(ValueError):
        paired_bootstrap([0.1], [0.2])
    with pytest.raises(ValueError):
        paired_bootstrap([0.1, 0.2], [0.2])
    with pytest.raises(ValueError):
        paired_bootstrap([0.1, 0.2], [0.2, 0.1], groups=["a"])


def test_bootstrap_on_routing_fixture():
    rows = [json.loads(line) for line in fixture("routing_table.jsonl").read_text().splitlines()]
    scores = np.array([r["score"] for r in rows])
    top = scores >= threshold_for_rate(scores, 0.32)
    learned = [r["gr_f1"] if t else r["vr_f1"] for r, t in zip(rows, top)]
    hybrid = [r["gr_f1"] if r["hybrid"] else r["vr_f1"] for r in rows]
    res = paired_bootstrap(learned, hybrid, n=10000, seed=42, groups=[r["dataset"] for r in rows])
    assert round(res.delta, 3) == 0.029
    assert res.p_value <= 0.0002


def test_rank_correlations_examples():
    rc = rank_correlations([1, 2, 3, 4], [10, 20, 30, 40])
    assert rc.spearman_rho == pytest.approx(1.0) and rc.pearson_r == pytest.approx(1.0)
    rc = rank_correlations([1, 2, 3], [3, 2, 1])
    assert rc.spearman_rho == pytest.approx(-1.0)


def test_rank_correlations_constant_raises():
    with pytest.raises(UndefinedMetricError):
        rank_correlations([1, 1, 1], [1, 2, 3])


def test_elo_fixture_spearman():
    rows = json.loads(fixture("elo_phc.json").read_text())
    rc = rank_correlations([r["elo"] for r in rows], [r["phc"] for r in rows])
    assert rc.spearman_rho == pytest.approx(0.9)
    assert correlation_pvalue(rc.spearman_rho, len(rows)) == pytest.approx(0.037, abs=0.001)


def test_correlation_pvalue_edges():
    assert correlation_pvalue(1.0, 5) == 0.0
    assert correlation_pvalue(0.0, 10) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        correlation_pvalue(0.5, 2)


def test_plugin_mi_examples():
    rng = np.random.default_rng(1)
    # Independent by construction: every bin holds both labels equally.
    conf = np.repeat(np.linspace(0.05, 0.95, 10), 2)
    labels = np.tile([0, 1], 10)
    assert plugin_mi(conf, labels) == pytest.approx(0.0, abs=1e-12)
    labels = rng.permutation(np.r_[np.zeros(50), np.ones(50)]).astype(int)
    assert plugin_mi(labels.astype(float), labels) == pytest.approx(1.0)


def test_plugin_mi_two_by_two():
    conf = np.r_[np.full(40, 0.1), np.full(10, 0.1), np.full(10, 0.9), np.full(40, 0.9)]
    labels = np.r_[np.zeros(40), np.ones(10), np.zeros(10), np.ones(40)].astype(int)
    # 1 - H(0.2)
    h = -(0.2 * math.log2(0.2) + 0.8 * math.log2(0.8))
    assert plugin_mi(conf, labels) == pytest.approx(1 - h)


def test_ece_examples():
    assert ece([1.0, 1.0], [1, 1]) == 0.0
    assert ece([0.9] * 10, [1] * 8 + [0] * 2) == pytest.approx(0.1)
    assert ece([1.0, 0.0], [0, 1]) == pytest.approx(1.0)


@given(st.lists(st.tuples(st.floats(0, 1), st.integers(0, 1)), min_size=1, max_size=30), st.randoms())
def test_ece_order_invariant(rows, rnd):
    shuffled = rows[:]
    rnd.shuffle(shuffled)
    a = ece([r[0] for r in rows], [r[1] for r in rows])
    b = ece([r[0] for r in shuffled], [r[1] for r in shuffled])
    assert a == pytest.approx(b, abs=1e-12)
    assert 0.0 <= a <= 1.0


def test_ece_rejects_out_of_range():
    with pytest.raises(ValueError):
        ece([1.2], [1])


def test_detector_metrics_examples():
    m = detector_metrics([1, 1, 0, 0], [1, 0, 1, 0])
    assert tuple(m) == (0.5, 0.5, 0.5, 0.5)
    m = detector_metrics([0, 0], [1, 0])
    assert m.precision == 0.0 and not m.precision_defined and m.f1 == 0.0


def test_detector_f1_from_reported_precision_recall():
    p, r = 0.560, 0.701
    assert 2 * p * r / (p + r) == pytest.approx(0.622, abs=1e-3)
