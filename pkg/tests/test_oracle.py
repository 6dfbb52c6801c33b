import json
from collections import defaultdict

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from phcroute.data import fixture
from phcroute.exceptions import UndefinedMetricError
from phcroute.oracle import (
    capture_rate,
    chr,
    chr_rate,
    gap_closed,
    is_wrong,
    macro_mean,
    oracle_ceiling,
    oracle_label,
    oracle_labels,
    phc,
)
from phcroute.stats import auc

F1 = st.floats(0, 1, allow_nan=False)


def test_oracle_label_ties_go_to_vector():
    assert oracle_label(0.5, 0.5) == 0
    assert oracle_label(0.4, 0.5) == 1
    assert oracle_label(0.6, 0.5) == 0
    assert oracle_labels([0.1, 0.3], [0.2, 0.3]).tolist() == [1, 0]


def test_oracle_ceiling_example():
    s = oracle_ceiling([(0.2, 0.7), (0.8, 0.1)])
    assert s.oracle_f1 == pytest.approx(0.75)
    assert s.oracle_escalation_rate == 0.5
    assert (s.vr_f1, s.gr_f1) == (pytest.approx(0.5), pytest.approx(0.4))


@given(st.lists(st.tuples(F1, F1), min_size=1, max_size=30))
def test_oracle_dominates_both_systems(pairs):
    s = oracle_ceiling(pairs)
    assert s.oracle_f1 >= max(s.vr_f1, s.gr_f1) - 1e-12


def test_oracle_ceiling_rejects_empty():
    with pytest.raises(ValueError):
        oracle_ceiling([])


def test_gap_closed():
    assert round(gap_closed(0.426, 0.195, 0.480), 3) == 0.811
    assert gap_closed(0.195, 0.195, 0.480) == 0.0
    with pytest.raises(UndefinedMetricError):
        gap_closed(0.3, 0.4, 0.4)


def test_capture_rate_examples():
    assert capture_rate(0.3, 0.2, 0.6) == pytest.approx(0.25)
    # Queries where both systems tie are skipped.
    assert capture_rate([0.3, 0.9], [0.2, 0.5], [0.6, 0.5]) == pytest.approx(0.25)
    with pytest.raises(UndefinedMetricError):
        capture_rate([0.1], [0.5], [0.5])


def test_capture_fixture():
    rows = [json.loads(line) for line in fixture("cascade_capture.jsonl").read_text().splitlines()]
    by = defaultdict(list)
    for r in rows:
        by[r["dataset"]].append(r)
    per = {}
    for ds, rs in by.items():
        per[ds] = capture_rate(*[[r[c] for r in rs] for c in ("rr_f1", "vr_f1", "gr_f1")])
    assert {k: round(v, 3) for k, v in per.items()} == {
        "hotpotqa": 0.170, "musique": 0.130, "nq": 0.240, "2wiki": 0.088,
    }
    assert round(macro_mean(per), 3) == 0.157
    pooled = capture_rate(*[[r[c] for r in rows] for c in ("rr_f1", "vr_f1", "gr_f1")])
    assert round(pooled, 3) == 0.152


def test_phc_delegates_to_auc(rng):
    conf = rng.random(50)
    labels = (rng.random(50) < 0.5).astype(int)
    res = phc(conf, labels, B=500, seed=1, stratum="hop=2")
    assert res.auc == auc(conf, labels)
    assert res.N == 50 and res.stratum == "hop=2"
    assert res.csv_row()[0] == "hop=2"


@pytest.mark.filterwarnings("ignore::UserWarning")
def test_phc_single_class_raises():
    with pytest.raises(UndefinedMetricError) as exc:
        phc([0.1, 0.2, 0.3], [1, 1, 1], stratum="type=comparison")
    assert "type=comparison" in str(exc.value)


def test_phc_warns_on_small_stratum():
    with pytest.warns(UserWarning):
        phc([0.1, 0.2, 0.3, 0.4], [0, 1, 0, 1], B=50)


def test_chr_examples():
    assert chr_rate([0.9, 0.2, 0.7, 0.95], [1, 1, 0, 1]) == pytest.approx(2 / 3)
    assert chr_rate([0.6, 0.61], [1, 1]) == 0.5  # strict threshold
    assert chr([(0.9, 0), (0.1, 0), (0.99, 1)]) == 0.5
    with pytest.raises(UndefinedMetricError):
        chr_rate([0.9], [0])


def test_is_wrong_rules():
    assert is_wrong(em=[1, 0]).tolist() == [False, True]
    assert is_wrong(f1=[0.49, 0.5], rule="f1").tolist() == [True, False]
    with pytest.raises(ValueError):
        is_wrong(em=[1], rule="x")


def test_chr_on_sweep_fixture(sweep):
    from phcroute.interventions import chr_by_condition, parse_conditions, run_sweep

    queries, oracle, backends = sweep
    res = run_sweep(queries, parse_conditions("k=0"), oracle, backends, B=100)
    assert round(chr_by_condition(queries, res.answers)["k=0"], 3) == 0.484


def test_macro_mean():
    assert macro_mean({"a": 0.1, "b": 0.3}) == pytest.approx(0.2)
    assert np.isclose(macro_mean({"a": 1.0}), 1.0)
