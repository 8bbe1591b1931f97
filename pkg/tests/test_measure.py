import math

import numpy as np
import pytest

from conftest import random_disjoint_ifs
from selfsim import (
    InputError,
    compose_word,
    ResourceCapError,
    Similitude,
    WeightedIFS,
    cylinder_mass,
    diagonal_mass,
    interval_mass_bounds,
    regularity_scan,
)
from selfsim.luroth import luroth_natural_ifs


@pytest.fixture(scope="module")
def luroth23():
    ifs, _ = luroth_natural_ifs((2, 3))
    return ifs


@pytest.fixture(scope="module")
def lebesgue():
    # Two half-scale maps tile [0,1]; the invariant measure is Lebesgue.
    return WeightedIFS(
        (0, 1), (Similitude(0.5, 0.0), Similitude(0.5, 0.5)), (0.5, 0.5))


def test_cylinder_mass_golden(luroth23):
    word = compose_word(luroth23, (2, 3))
    assert cylinder_mass(luroth23, word) == pytest.approx(
        0.22461970070983261, abs=1e-16)
    w2 = luroth23.weight_for(2)
    w3 = luroth23.weight_for(3)
    assert cylinder_mass(luroth23, word) == pytest.approx(w2 * w3, rel=1e-15)
    with pytest.raises(InputError):
        compose_word(luroth23, (2, 7))


def test_interval_mass_lebesgue_exact(lebesgue):
    assert interval_mass_bounds(lebesgue, (0.0, 0.25), 2) == (0.25, 0.25)
    assert interval_mass_bounds(lebesgue, (0.0, 1.0), 3) == (1.0, 1.0)
    lo, hi = interval_mass_bounds(lebesgue, (0.1, 0.35), 8)
    assert lo <= 0.25 <= hi
    assert hi - lo <= 2 * 2.0 ** -8 + 1e-12


def test_interval_mass_bounds_sandwich(luroth23):
    rng = np.random.default_rng(5)
    for _ in range(25):
        a = float(rng.uniform(0.0, 0.9))
        b = float(rng.uniform(a, 1.0))
        lo4, hi4 = interval_mass_bounds(luroth23, (a, b), 4)
        lo7, hi7 = interval_mass_bounds(luroth23, (a, b), 7)
        assert lo4 <= lo7 <= hi7 <= hi4 + 1e-15


def test_interval_mass_validation(luroth23):
    with pytest.raises(InputError):
        interval_mass_bounds(luroth23, (0.5, 0.2), 3)
    with pytest.raises(InputError):
        interval_mass_bounds(luroth23, (-0.5, 0.2), 3)
    with pytest.raises(ResourceCapError):
        # Boundary-chasing keeps the walk tiny, so only a minuscule cap trips.
        interval_mass_bounds(luroth23, (0.3, 0.7), 40, cap=5)


def test_regularity_scan_golden(luroth23):
    report = regularity_scan(luroth23, 6)
    assert report.alpha_hat == pytest.approx(0.6009668516136755, abs=1e-13)
    assert report.prefactor == pytest.approx(1.0, abs=1e-12)
    assert report.interval_constant == pytest.approx(5.87047310461706, rel=1e-12)
    assert report.min_scale == pytest.approx(2.1433470507544566e-05, rel=1e-12)
    assert len(report.rows) == 6
    # Natural weights equalize the mass exponent across every cylinder, so
    # the per-level exponent spread collapses.
    for _, lo_e, hi_e in report.rows:
        assert hi_e - lo_e <= 1e-12


def test_regularity_scan_bounds_masses(luroth23):
    # The fitted constants must dominate the defining inequality on
    # cylinders: mass <= prefactor * width^alpha.
    report = regularity_scan(luroth23, 5)
    for syms in [(2,), (3,), (2, 3), (3, 3), (2, 2, 3)]:
        word = compose_word(luroth23, syms)
        mass = word.weight_product
        width = word.ratio_product
        assert mass <= report.prefactor * width ** report.alpha_hat * (1 + 1e-12)


def test_regularity_alpha_clamped():
    rng = np.random.default_rng(17)
    for _ in range(10):
        ifs = random_disjoint_ifs(rng)
        report = regularity_scan(ifs, 4)
        assert 0.0 <= report.alpha_hat <= 1.0


def test_diagonal_mass_golden(lebesgue):
    lo, hi = diagonal_mass(lebesgue, 0.1, 6)
    assert lo == pytest.approx(0.16455078125, abs=1e-15)
    assert hi == pytest.approx(0.220703125, abs=1e-15)
    # Product Lebesgue mass of {|x-y| <= 0.1} is 2*0.1 - 0.1^2 = 0.19.
    assert lo <= 0.19 <= hi


def test_diagonal_mass_monotone(luroth23):
    pairs = [diagonal_mass(luroth23, d, 6) for d in (0.05, 0.1, 0.2)]
    for (lo1, hi1), (lo2, hi2) in zip(pairs, pairs[1:]):
        assert lo1 <= lo2 + 1e-15 and hi1 <= hi2 + 1e-15
    for lo, hi in pairs:
        assert 0.0 <= lo <= hi <= 1.0


def test_diagonal_mass_validation(luroth23):
    with pytest.raises(InputError):
        diagonal_mass(luroth23, -0.1, 4)
    with pytest.raises(ResourceCapError):
        diagonal_mass(luroth23, 0.1, 30, cap=1000)
