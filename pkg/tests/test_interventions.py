import numpy as np
import pytest

from phcroute.backends import render_prompt
from phcroute.corpus import QueryRecord, SubStep
from phcroute.exceptions import ConditionError, ElicitationParseError, UndefinedMetricError
from phcroute.interventions import (
    InterventionCondition,
    build_condition_prompt,
    parse_conditions,
    parse_confidence_rating,
    rescore_sweep,
    run_sweep,
    score_answer,
)
from phcroute.oracle import phc
from phcroute.simworld import gen_sweep

Q = QueryRecord(
    "q1", "musique", "Which river flows through the birthplace of the founder?", ("Tay",), 3, "bridge",
    (SubStep("Who founded it?", "Ann"), SubStep("Where was Ann born?", "Perth"), SubStep("Which river?", "Tay")),
)
PASSAGES = ["Ann founded it.", "Perth is a city."]


def test_k0_with_retrieval_equals_vanilla_prompt():
    vanilla = render_prompt("vanilla_qa", {"question": Q.question, "passages": PASSAGES})
    assert build_condition_prompt(Q, InterventionCondition(0), PASSAGES) == vanilla


def test_k2_lists_two_facts_in_order():
    text = build_condition_prompt(Q, InterventionCondition(2), PASSAGES)
    facts = [line for line in text.splitlines() if line.startswith("Fact ")]
    assert facts == ["Fact 1: Who founded it? — Ann", "Fact 2: Where was Ann born? — Perth"]
    # Facts follow the passages and precede the answer cue.
    assert text.index("Passage 2:") < text.index("Confirmed facts:") < text.index("Answer:")


def test_zero_retrieval_drops_passages():
    text = build_condition_prompt(Q, InterventionCondition(1, retrieval_present=False), PASSAGES)
    assert "Passage" not in text and "Fact 1:" in text


def test_m1_uses_hop_count_and_m2_appends_instruction():
    m1 = build_condition_prompt(Q, InterventionCondition(1, variant="m1_humility"), PASSAGES)
    assert "You have been given 1 of approximately 3" in m1
    m2 = build_condition_prompt(Q, InterventionCondition(1, variant="m2_elicitation"), PASSAGES)
    assert m2.rstrip().endswith("[CONFIDENCE: X/5].")


def test_condition_validation():
    with pytest.raises(ConditionError):
        build_condition_prompt(Q, InterventionCondition(4), PASSAGES)
    with pytest.raises(ConditionError):
        InterventionCondition(3, n=2)
    with pytest.raises(ConditionError):
        InterventionCondition(0, variant="m3")


def test_parse_conditions():
    assert [c.k for c in parse_conditions("k=0..3")] == [0, 1, 2, 3]
    assert [c.k for c in parse_conditions("0,2")] == [0, 2]
    tags = [c.tag for c in parse_conditions("k=1", retrieval_present=False, variant="m1_humility")]
    assert tags == ["k=1/zero_retrieval/m1"]


@pytest.mark.parametrize("reply,x", [("...[CONFIDENCE: 4/5]", 4), ("[confidence: 5 / 5]", 5), ("a [CONFIDENCE:1/5] b", 1)])
def test_parse_confidence_rating(reply, x):
    assert parse_confidence_rating(reply) == x


@pytest.mark.parametrize("reply", ["confidence high", "[CONFIDENCE: 7/5]", "[CONFIDENCE: 0/5]", ""])
def test_parse_confidence_rating_errors(reply):
    with pytest.raises(ElicitationParseError):
        parse_confidence_rating(reply)


def test_elicited_signal_maps_to_fifths():
    assert score_answer("Tay [CONFIDENCE: 3/5]", Q.question, "elicited") == pytest.approx(0.6)
    with pytest.raises(ValueError):
        score_answer("Tay", Q.question, "vibes")


def test_sweep_fixture_reproduces_table(sweep):
    queries, oracle, backends = sweep
    res = run_sweep(queries, parse_conditions("k=0..3"), oracle, backends, B=5000, seed=0)
    got = {tag: (round(r.auc, 3), r.stars) for tag, _, r in res.table()}
    assert got == {"k=0": (0.613, "**"), "k=1": (0.656, "***"), "k=2": (0.595, "*"), "k=3": (0.536, "ns")}
    assert res.labels == oracle
    assert res.generate_calls == 4 * len(queries)


def test_rescoring_makes_no_generation_calls(sweep):
    queries, oracle, backends = sweep
    res = run_sweep(queries, parse_conditions("k=0,1"), oracle, backends, B=200)
    before = backends.generator.log.total
    rows = rescore_sweep(queries, res.answers, oracle, signal="uncdet_preset", B=200)
    assert backends.generator.log.total == before
    assert [tag for tag, _, _ in rows] == ["k=0", "k=1"]


def test_sweep_needs_full_oracle(sweep):
    queries, oracle, backends = sweep
    partial = dict(list(oracle.items())[:-1])
    with pytest.raises(ConditionError):
        run_sweep(queries, parse_conditions("k=0"), partial, backends)


def test_single_class_oracle_is_undefined(sweep):
    queries, _, backends = sweep
    with pytest.raises(UndefinedMetricError):
        run_sweep(queries, parse_conditions("k=0"), {q.id: 1 for q in queries}, backends, B=50)


def test_four_hop_simworld_three_facts_not_significant():
    sw = gen_sweep([0.672, 0.649, 0.60, 0.486], N=76, seed=0)
    res = phc(sw.conf[3], sw.labels, B=2000, seed=0)
    assert res.stars == "ns"
    assert np.all(sw.labels == gen_sweep([0.672, 0.649, 0.60, 0.486], N=76, seed=0).labels)
