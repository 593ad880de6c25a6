import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import brentq, minimize_scalar

from entclone import cloner, measures
from entclone.linalg import ket, kron, partial_trace, projector
from entclone.measures import (closed_form_curves, concurrence, entropy, find_threshold,
                               index_of_correlation, measure_report, negativity)
from conftest import ALPHA_MIN_F, INV_SQRT2, random_density, random_unitary

GRID = np.linspace(0, INV_SQRT2, 60)
BELL = (ket(0, 0) + ket(1, 1)) / np.sqrt(2)


def test_concurrence_examples(rng):
    assert concurrence(projector(BELL)) == pytest.approx(1.0, abs=1e-12)
    a, b = random_density(rng, 2), random_density(rng, 2)
    assert concurrence(kron(a, b)) == pytest.approx(0.0, abs=1e-12)
    for alpha in (0.1, 0.4, INV_SQRT2):
        rho = projector(cloner.schmidt_state(alpha))
        assert concurrence(rho) == pytest.approx(2 * alpha * np.sqrt(1 - alpha ** 2), abs=1e-12)
    with pytest.raises(ValueError):
        concurrence(np.eye(4))


def test_concurrence_werner_family():
    # p|Bell><Bell| + (1-p) 1/4 has C = max(0, (3p - 1)/2)
    for p in (0.2, 1 / 3, 0.5, 0.9):
        rho = p * projector(BELL) + (1 - p) * np.eye(4) / 4
        assert concurrence(rho) == pytest.approx(max(0.0, (3 * p - 1) / 2), abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_concurrence_local_unitary_invariance(seed):
    rng = np.random.default_rng(seed)
    rho = random_density(rng, 4, rank=2)
    u = kron(random_unitary(rng, 2), random_unitary(rng, 2))
    assert concurrence(u @ rho @ u.conj().T) == pytest.approx(concurrence(rho), abs=1e-10)


def test_entropy_examples():
    assert entropy(projector(BELL)) == pytest.approx(0.0, abs=1e-12)
    assert entropy(np.eye(4) / 4) == pytest.approx(np.log(4))
    alpha = 0.3
    marg = partial_trace(projector(cloner.schmidt_state(alpha)), (0,))
    a2, b2 = alpha ** 2, 1 - alpha ** 2
    assert entropy(marg) == pytest.approx(-a2 * np.log(a2) - b2 * np.log(b2), abs=1e-12)


def test_index_of_correlation_examples(rng):
    assert index_of_correlation(kron(random_density(rng, 2), random_density(rng, 2)), (0,)) == \
        pytest.approx(0.0, abs=1e-12)
    assert index_of_correlation(projector(BELL), (0,)) == pytest.approx(2 * np.log(2))
    rho_in = projector(cloner.schmidt_state(0.5))
    expected = -2 * (0.25 * np.log(0.25) + 0.75 * np.log(0.75))
    assert index_of_correlation(rho_in, (0,)) == pytest.approx(expected, abs=1e-12)
    assert closed_form_curves(0.5).i_in == pytest.approx(expected, abs=1e-15)
    with pytest.raises(ValueError):
        index_of_correlation(rho_in, (0, 1))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([((0,), None), ((0, 1), None), ((0,), (2,)), ((1, 3), (0,))]))
def test_index_of_correlation_is_subadditive(seed, parts):
    rho = random_density(np.random.default_rng(seed), 16)
    assert index_of_correlation(rho, *parts) >= -1e-10


def test_negativity_examples(rng):
    assert negativity(kron(random_density(rng, 4), random_density(rng, 4))) == pytest.approx(0.0, abs=1e-12)
    assert negativity(projector(BELL), (1,)) == pytest.approx(0.5, abs=1e-14)


def test_optimal_output_negativity_is_positive():
    assert min(measures.negativity_curve(a) for a in GRID) > 0


@pytest.mark.parametrize("alpha", GRID)
def test_closed_forms_match_numeric(alpha):
    rho = cloner.optimal_state(alpha).rho
    cf = closed_form_curves(alpha)
    assert cf.c12 == pytest.approx(concurrence(partial_trace(rho, (0, 1))), abs=1e-10)
    assert cf.c13 == pytest.approx(concurrence(partial_trace(rho, (0, 2))), abs=1e-10)
    assert cf.c12 <= cf.c_in + 1e-12


def test_closed_form_values():
    assert closed_form_curves(INV_SQRT2).c12 == pytest.approx(1 / 3, abs=1e-14)
    assert closed_form_curves(0.0).c12 == 0.0
    assert closed_form_curves(0.0).c13 == pytest.approx(1 / 3, abs=1e-14)


def _c12_closed(a):
    b = np.sqrt(1 - a * a)
    p = cloner.optimal_params(a)
    return (4 * a * b + 1) * (2 * p[6] + p[11].real) - 8


def _c13_closed(a):
    b = np.sqrt(1 - a * a)
    a6 = cloner.optimal_params(a)[6]
    return abs(-4 + 3 * a6) - 3 * a6 * a * b


def test_thresholds_against_independent_root_finding():
    onset = find_threshold(measures.c12_curve, "zero-crossing", (0.2, 0.3))
    assert onset == pytest.approx(brentq(_c12_closed, 0.2, 0.3, xtol=1e-14), abs=2e-6)
    vanish = find_threshold(measures.c13_curve, "zero-crossing", (0.2, 0.3))
    assert vanish == pytest.approx(brentq(_c13_closed, 0.2, 0.3, xtol=1e-14), abs=2e-6)
    i13_min = find_threshold(measures.i13_curve, "minimum", (0.3, 0.55))
    ref = minimize_scalar(measures.i13_curve, bounds=(0.3, 0.55), method="bounded",
                          options={"xatol": 1e-8}).x
    assert i13_min == pytest.approx(ref, abs=1e-4)


def test_threshold_values():
    # frozen from the root finding above
    assert find_threshold(measures.c12_curve, "zero-crossing", (0.2, 0.3)) == pytest.approx(0.2306072, abs=2e-6)
    assert find_threshold(measures.c13_curve, "zero-crossing", (0.2, 0.3)) == pytest.approx(0.2396768, abs=2e-6)


def test_c12_onset_matches_stated_location():
    assert find_threshold(measures.c12_curve, "zero-crossing", (0.2, 0.3)) == pytest.approx(0.231, abs=1e-3)


def test_i13_minimum_location():
    assert find_threshold(measures.i13_curve, "minimum", (0.3, 0.55)) == pytest.approx(0.421, abs=5e-3)


def test_find_threshold_errors_and_generic_use():
    assert find_threshold(lambda x: x - 0.3, "zero-crossing", (0, 1)) == pytest.approx(0.3, abs=1e-6)
    assert find_threshold(lambda x: (x - 0.4) ** 2, "minimum", (0, 1)) == pytest.approx(0.4, abs=1e-5)
    assert find_threshold(lambda x: -(x - 0.6) ** 2, "maximum", (0, 1)) == pytest.approx(0.6, abs=1e-5)
    with pytest.raises(ValueError):
        find_threshold(lambda x: x + 1, "zero-crossing", (0, 1))
    with pytest.raises(ValueError):
        find_threshold(lambda x: x, "minimum", (0, 1))
    with pytest.raises(ValueError):
        find_threshold(lambda x: x, "inflection", (0, 1))


def test_negativity_extrema():
    vals = [measures.negativity_curve(a) for a in GRID]
    assert int(np.argmax(vals)) == len(GRID) - 1
    fine = np.linspace(0.2, 0.5, 301)
    loc = fine[int(np.argmin([measures.negativity_curve(a) for a in fine]))]
    assert loc == pytest.approx(ALPHA_MIN_F, abs=0.01)


def test_pair_correlation_peaks_at_maximal_entanglement():
    vals = [index_of_correlation(cloner.optimal_state(a).rho, (0, 1)) for a in GRID]
    assert int(np.argmax(vals)) == len(GRID) - 1


@pytest.mark.parametrize("alpha", GRID[::6])
def test_report_fields_and_marginal_equality(alpha):
    r = measure_report(alpha)
    for name in ("c_in", "c12", "c13"):
        assert 0.0 <= getattr(r, name) <= 1.0
    for name in ("i_in", "i12", "i13", "i_pair", "negativity"):
        assert getattr(r, name) >= -1e-12
    rho = cloner.optimal_state(alpha).rho
    assert concurrence(partial_trace(rho, (2, 3))) == pytest.approx(r.c12, abs=1e-10)
    assert concurrence(partial_trace(rho, (1, 3))) == pytest.approx(r.c13, abs=1e-10)
    assert index_of_correlation(rho, (2,), (3,)) == pytest.approx(r.i12, abs=1e-10)
    assert index_of_correlation(rho, (1,), (3,)) == pytest.approx(r.i13, abs=1e-10)
    assert 0.4 - 1e-12 <= r.f_max <= 0.5 + 1e-12
    assert list(r.as_dict()) == list(r.FIELDS)
