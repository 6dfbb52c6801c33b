"""Escalation policies.

Polarity differs by policy: the confidence threshold escalates *low*
confidence (``conf < tau``), while the learned policy escalates a *high*
predicted probability of graph benefit (``score >= tau``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

THRESHOLD_TAU = 0.65
BRIDGE_TAU = 0.55
POLICIES = ("threshold", "type_aware", "learned")


@dataclass(frozen=True)
class RoutingDecision:
    escalate: bool
    score: float
    policy: str
    tau: float


def decide_threshold(conf: float, tau: float = THRESHOLD_TAU) -> RoutingDecision:
    return RoutingDecision(bool(conf < tau), float(conf), "threshold", tau)


def decide_type_aware(
    conf: float, query_type: str, tau: float = THRESHOLD_TAU, bridge_tau: float = BRIDGE_TAU
) -> RoutingDecision:
    """Comparison queries never escalate; bridge queries escalate on *high*
    confidence; everything else uses the plain low-confidence threshold."""
    if query_type == "comparison":
        return RoutingDecision(False, float(conf), "type_aware", math.inf)
    if query_type == "bridge":
        return RoutingDecision(bool(conf >= bridge_tau), float(conf), "type_aware", bridge_tau)
    return RoutingDecision(bool(conf < tau), float(conf), "type_aware", tau)


def decide_learned(features, model, tau: float) -> RoutingDecision:
    x = np.asarray(features.to_array(model.feature_names_) if hasattr(features, "to_array") else features, dtype=float)
    score = float(model.predict_proba(x.reshape(1, -1))[0, 1])
    return RoutingDecision(bool(score >= tau), score, "learned", float(tau))


def decide(policy: str, *, conf=None, query_type=None, features=None, model=None, tau=None) -> RoutingDecision:
    if policy == "threshold":
        if conf is None:
            raise ValueError("threshold policy needs conf")
        return decide_threshold(conf, THRESHOLD_TAU if tau is None else tau)
    if policy == "type_aware":
        if conf is None or query_type is None:
            raise ValueError("type_aware policy needs conf and query_type")
        return decide_type_aware(conf, query_type)
    if policy == "learned":
        if features is None or model is None or tau is None:
            raise ValueError("learned policy needs features, model and tau")
        return decide_learned(features, model, tau)
    raise ValueError(f"unknown policy {policy!r}; expected one of {POLICIES}")
