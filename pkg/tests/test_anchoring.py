import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from phcroute.anchoring import AmplitudeParams, amplitude, k_star, predict_profile, prediction_table


@pytest.mark.parametrize("n,k", [(1, 0), (2, 0), (3, 1), (4, 1), (5, 1), (6, 2)])
def test_k_star(n, k):
    assert k_star(n) == k


def test_k_star_rejects_bad_n():
    for n in (0, -1, 2.5, True):
        with pytest.raises(ValueError):
            k_star(n)


@given(st.integers(1, 500))
def test_k_star_monotone_and_bounded(n):
    assert k_star(n) <= k_star(n + 1)
    assert 0 <= k_star(n) <= n


def grid_argmax(params, step=1e-3):
    grid = np.arange(0, 1 + step / 2, step)
    return float(grid[np.argmax([amplitude(min(r, 1.0), params) for r in grid])])


def test_amplitude_argmax_default():
    assert grid_argmax(AmplitudeParams()) == pytest.approx(1 / 3, abs=1e-3)


def test_amplitude_symmetric_case():
    p = AmplitudeParams(1, 1)
    assert grid_argmax(p) == pytest.approx(0.5, abs=1e-3)
    assert amplitude(0.5, p) == pytest.approx(0.25)


@given(st.floats(0.2, 5), st.floats(0.2, 5))
def test_amplitude_argmax_matches_closed_form(a, b):
    p = AmplitudeParams(a, b)
    assert grid_argmax(p) == pytest.approx(p.r_star, abs=1e-3)


def test_amplitude_boundaries_and_domain():
    assert amplitude(0.0) == 0.0 and amplitude(1.0) == 0.0
    with pytest.raises(ValueError):
        amplitude(1.1)
    with pytest.raises(ValueError):
        AmplitudeParams(0, 1)


def test_profiles():
    p2, p3, p4 = (predict_profile(n) for n in (2, 3, 4))
    assert p2.no_interior_amplification and p2.r is None
    assert p3.r == pytest.approx(1 / 3) and p3.relative_amplitude == pytest.approx(1.0)
    assert p4.r == 0.25 and p4.relative_amplitude < p3.relative_amplitude
    table = prediction_table((2, 3, 4, 6))
    assert [p.k_star for p in table] == [0, 1, 1, 2]
    assert max(table, key=lambda p: p.relative_amplitude).n in (3, 6)
