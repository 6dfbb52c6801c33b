"""Anchoring threshold law k*(n) = floor(n/3) and the amplitude model r^a (1-r)^b."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class AmplitudeParams:
    alpha: float = 1.0
    beta: float = 2.0

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError("alpha and beta must be positive")

    @property
    def r_star(self) -> float:
        return self.alpha / (self.alpha + self.beta)


@dataclass(frozen=True)
class Profile:
    n: int
    k_star: int
    r: Optional[float]
    relative_amplitude: float
    no_interior_amplification: bool


def k_star(n: int) -> int:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValueError("n must be an integer >= 1")
    return int(n) // 3


def amplitude(r: float, params: AmplitudeParams = AmplitudeParams()) -> float:
    if not 0.0 <= r <= 1.0:
        raise ValueError("r must lie in [0, 1]")
    if r in (0.0, 1.0):
        return 0.0
    return r**params.alpha * (1.0 - r) ** params.beta


def predict_profile(n: int, params: AmplitudeParams = AmplitudeParams()) -> Profile:
    """Where the confident-confabulation spike should sit for an n-hop chain.

    The amplitude is reported relative to the model's peak f(r*), so 1.0 means
    the chain length puts k*/n exactly at the sweet spot.
    """
    ks = k_star(n)
    if ks == 0:
        return Profile(n, 0, None, 0.0, True)
    r = ks / n
    return Profile(n, ks, r, amplitude(r, params) / amplitude(params.r_star, params), False)


def prediction_table(ns=(2, 3, 4, 5, 6), params: AmplitudeParams = AmplitudeParams()) -> list[Profile]:
    return [predict_profile(n, params) for n in ns]
