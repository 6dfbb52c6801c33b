"""Synthetic worlds with known ground truth.

Confidence strata follow an equal-variance binormal model, so a target AUC maps
to a class shift in closed form. Routing worlds produce cached VR/GR/regenerated
F1 together with router features, which makes the learned-routing claims
checkable without any model calls.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .corpus import RunRecord
from .router.features import FEATURE_NAMES

# Acklam's rational approximation to the standard normal quantile.
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def norm_ppf(p: float) -> float:
    """Standard normal quantile: rational approximation plus one Halley step."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    if p < _P_LOW:
        q = math.sqrt(-2 * math.log(p))
        x = (((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / (
            (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1
        )
    elif p <= 1 - _P_LOW:
        q = p - 0.5
        r = q * q
        x = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q / (
            ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1
        )
    else:
        q = math.sqrt(-2 * math.log1p(-p))
        x = -(((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / (
            (((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1
        )
    e = 0.5 * math.erfc(-x / math.sqrt(2)) - p
    u = e * math.sqrt(2 * math.pi) * math.exp(x * x / 2)
    return x - u / (1 + x * u / 2)


def auc_to_shift(target_auc: float, sigma: float = 1.0) -> float:
    """Class shift giving the target AUC for two N(., sigma^2) score distributions."""
    if not 0.0 < target_auc < 1.0:
        raise ValueError("target_auc must lie in (0, 1)")
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    return math.sqrt(2) * sigma * norm_ppf(target_auc)


@dataclass(frozen=True)
class StratumSpec:
    N: int = 160
    hop: int = 3
    k: int = 0
    target_phc: float = 0.702
    escalation_base_rate: float = 0.44
    noise_sigma: float = 0.12
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.target_phc < 1.0:
            raise ValueError("target_phc must lie in (0, 1)")
        if not 0.0 < self.escalation_base_rate < 1.0:
            raise ValueError("escalation_base_rate must lie in (0, 1)")
        if not self.noise_sigma > 0 or self.N < 2:
            raise ValueError("need noise_sigma > 0 and N >= 2")


def _binormal(labels, target, sigma, noise):
    delta = auc_to_shift(target, sigma)
    # Centre the two class means on 0.5 so clamping to [0, 1] is rare.
    return np.clip(0.5 + delta * (labels - 0.5) + sigma * noise, 0.0, 1.0)


def gen_stratum_arrays(spec: StratumSpec):
    """(conf, labels) arrays for one stratum."""
    rng = np.random.default_rng(spec.seed)
    labels = (rng.random(spec.N) < spec.escalation_base_rate).astype(int)
    conf = _binormal(labels, spec.target_phc, spec.noise_sigma, rng.standard_normal(spec.N))
    return conf, labels


def gen_stratum(spec: StratumSpec) -> list[tuple[float, int, int, int]]:
    conf, labels = gen_stratum_arrays(spec)
    return [(float(c), int(y), spec.hop, spec.k) for c, y in zip(conf, labels)]


@dataclass
class Sweep:
    labels: np.ndarray  # fixed across conditions
    conf: np.ndarray  # (len(targets), N)
    targets: tuple


def gen_sweep(targets, N: int = 160, base_rate: float = 0.62, sigma: float = 0.12, seed: int = 0, rho: float = 0.95):
    """Confidence for one query set under several conditions with fixed labels.

    Noise is shared across conditions with correlation ``rho``, as repeated
    prompts on the same queries would be. Each condition's marginal is still
    the binormal model for its own target.
    """
    if not 0.0 <= rho < 1.0:
        raise ValueError("rho must lie in [0, 1)")
    rng = np.random.default_rng(seed)
    labels = (rng.random(N) < base_rate).astype(int)
    shared = rng.standard_normal(N)
    rows = []
    for t in targets:
        noise = rho * shared + math.sqrt(1 - rho * rho) * rng.standard_normal(N)
        rows.append(_binormal(labels, t, sigma, noise))
    return Sweep(labels, np.vstack(rows), tuple(targets))


@dataclass
class RoutingWorld:
    vr_f1: np.ndarray
    gr_f1: np.ndarray
    rr_f1: np.ndarray
    features: np.ndarray
    labels: np.ndarray
    hop: np.ndarray
    query_type: np.ndarray
    feature_names: tuple = FEATURE_NAMES

    def columns(self, names) -> np.ndarray:
        idx = [self.feature_names.index(n) for n in names]
        return self.features[:, idx]


def _assemble_features(rng, conf, hop, qtype, labels, pre_signal):
    N = len(conf)
    hop_pred = np.where(rng.random(N) < 0.75, hop, np.clip(hop + rng.choice([-1, 1], N), 1, 4))
    qlen = np.round(6 + 3 * hop + rng.normal(0, 2, N)).clip(3, None)
    ssc = np.clip(conf + rng.normal(0, 0.08, N), 0, 1)
    cols = {
        "lexical_conf": conf,
        "ssc_conf": ssc,
        "conf_x_hop": conf * hop_pred,
        "hop_pred": hop_pred.astype(float),
        "hop_count": hop.astype(float),
        "entity_count": rng.poisson(1 + hop).astype(float),
        "entity_overlap_ratio": np.clip(0.5 + 0.08 * pre_signal + rng.normal(0, 0.2, N), 0, 1),
        "relational_density": (hop_pred - 1) / qlen,
        "avg_doc_length": 110 + 6 * pre_signal + rng.normal(0, 20, N),
        "question_length": qlen,
        "doc_count": np.full(N, 5.0),
        "has_superlative": (rng.random(N) < 0.1).astype(float),
        "has_temporal": (rng.random(N) < 0.2).astype(float),
        "qt_bridge": (qtype == "bridge").astype(float),
        "qt_comparison": (qtype == "comparison").astype(float),
        "qt_factoid": (qtype == "factoid").astype(float),
        "qt_inference": np.zeros(N),
    }
    return np.column_stack([cols[n] for n in FEATURE_NAMES])


def gen_routing_world(
    N: int = 1800,
    q_g: float = 0.5,
    f1_gap: float = 0.3,
    seed: int = 0,
    informed: bool = True,
    base_rate: float = 0.44,
    regen_noise: float = 0.5,
    conf_shift: float = 0.16,
) -> RoutingWorld:
    """Cached routing world.

    Oracle-positive queries gain about ``f1_gap`` from the graph backend, and
    regeneration after escalation recovers ``q_g`` of that gain (times a
    mean-one multiplicative noise). Oracle-negative queries never gain.
    With ``informed=True`` the post-generation confidence is inverted (higher
    when escalation helps) on hop >= 3 and conventional on hop <= 2, while
    pre-generation features carry only a weak signal.
    """
    if q_g < 0 or f1_gap < 0:
        raise ValueError("q_g and f1_gap must be non-negative")
    rng = np.random.default_rng(seed)
    hop = rng.choice([1, 2, 3, 4], size=N, p=[0.25, 0.3, 0.3, 0.15])
    qtype = np.where(hop == 1, "factoid", np.where(rng.random(N) < 0.7, "bridge", "comparison"))
    pre_signal = rng.standard_normal(N)
    logit = 0.35 * (hop - 2.35) + 0.35 * pre_signal
    p = 1 / (1 + np.exp(-(logit + math.log(base_rate / (1 - base_rate)))))
    labels = (rng.random(N) < p).astype(int)

    polarity = np.where(hop >= 3, 1.0, -1.0)
    if informed:
        mean = 0.55 + conf_shift * polarity * (labels - 0.5) * 2
    else:
        mean = np.full(N, 0.55)
    conf = np.clip(mean + rng.normal(0, 0.13, N), 0, 1)
    features = _assemble_features(rng, conf, hop, qtype, labels, pre_signal)

    gain = f1_gap * rng.uniform(0.5, 1.5, N)
    eta = rng.uniform(-regen_noise, regen_noise, N)
    headroom = np.clip(1 - gain * (1 + regen_noise) * max(q_g, 1.0), 0, 1)
    vr = rng.uniform(0, 1, N) * headroom
    loss = np.abs(rng.normal(0, 0.08, N))
    gr = np.where(labels == 1, vr + gain, np.clip(vr - loss, 0, 1))
    rr = np.where(labels == 1, vr + q_g * gain * (1 + eta), vr)
    return RoutingWorld(vr, gr, rr, features, labels, hop, qtype)


def gen_interaction_world(N: int = 1800, seed: int = 0, band=(1.2, 2.6), flip: float = 0.08) -> RoutingWorld:
    """World whose label is a band on confidence x hop depth (non-monotone)."""
    rng = np.random.default_rng(seed)
    hop = rng.choice([1, 2, 3, 4], size=N)
    qtype = np.where(hop == 1, "factoid", "bridge")
    conf = rng.uniform(0.15, 1.0, N)
    hop_pred = hop
    cxh = conf * hop_pred
    labels = ((cxh > band[0]) & (cxh < band[1])).astype(int)
    flips = rng.random(N) < flip
    labels = np.where(flips, 1 - labels, labels)
    features = _assemble_features(rng, conf, hop, qtype, labels, rng.standard_normal(N))
    # Use the exact hop depth in the interaction column for this world.
    features[:, FEATURE_NAMES.index("hop_pred")] = hop
    features[:, FEATURE_NAMES.index("conf_x_hop")] = cxh
    zeros = np.zeros(N)
    return RoutingWorld(zeros, zeros.copy(), zeros.copy(), features, labels, hop, qtype)


def routing_gain(world: RoutingWorld, decisions) -> float:
    """Mean F1 change vs VR-only when escalated queries take the regenerated answer."""
    d = np.asarray(decisions).astype(bool)
    return float(np.mean(np.where(d, world.rr_f1, world.vr_f1)) - np.mean(world.vr_f1))


def predicted_gain(world: RoutingWorld, decisions, q_g: float) -> float:
    """First-order prediction r * Q_G * gap, with gap the mean positive GR-VR
    improvement over the escalated queries."""
    d = np.asarray(decisions).astype(bool)
    if not d.any():
        return 0.0
    r = d.mean()
    gap = np.mean(np.clip(world.gr_f1[d] - world.vr_f1[d], 0, None))
    return float(r * q_g * gap)


def world_to_runs(world: RoutingWorld, prefix: str = "sim") -> list[RunRecord]:
    """Vanilla and graph run records in the standard run-cache schema."""
    out = []
    for i in range(len(world.labels)):
        qid = f"{prefix}-{i:05d}"
        conf = float(world.features[i, FEATURE_NAMES.index("lexical_conf")])
        sig = {"lexical": conf, "ssc": None, "rating": None, "blended": conf, "fast_path_taken": conf > 0.85, "breakdown": None}
        for system, f1 in (("vanilla", world.vr_f1[i]), ("direct", world.gr_f1[i])):
            f1 = float(min(1.0, max(0.0, f1)))
            out.append(
                RunRecord(qid, system, "sim", "", f1, int(f1 == 1.0), f1, 0.0,
                          vr_calls=int(system == "vanilla"), gr_calls=int(system == "direct"),
                          signals=sig if system == "vanilla" else None)
            )
    return out
