import math
from fractions import Fraction

import numpy as np
import pytest

from selfsim import (
    InputError,
    Similitude,
    WeightedIFS,
    auxiliary_measure,
    classify_lattice,
    classify_ratio,
    continued_fraction_expansion,
    laplace_transform,
    lattice_test,
    matveev_degree,
    matveev_log_constant,
    perfect_power_free,
    weakly_diophantine_scan,
)
from selfsim.luroth import luroth_natural_ifs


@pytest.fixture(scope="module")
def luroth_lambda():
    ifs, _ = luroth_natural_ifs((2, 3))
    return auxiliary_measure(ifs)


@pytest.fixture(scope="module")
def lattice_lambda():
    # Step sizes log 2 and log 4 share the lattice span log 2.
    ifs = WeightedIFS(
        (0, 1), (Similitude(0.5, 0.0), Similitude(0.25, 0.75)), (0.7, 0.3))
    return auxiliary_measure(ifs)


def test_auxiliary_measure_atoms(luroth_lambda):
    locs = luroth_lambda.locations
    masses = luroth_lambda.masses
    assert locs == pytest.approx((math.log(2), math.log(6)), abs=1e-15)
    assert masses == pytest.approx((0.659311955892103, 0.340688044107897),
                                   abs=1e-14)
    assert math.fsum(masses) == pytest.approx(1.0, abs=1e-12)
    assert luroth_lambda.sigma == pytest.approx(
        masses[0] * math.log(2) + masses[1] * math.log(6), rel=1e-14)


def test_auxiliary_measure_merges_equal_steps():
    # Two maps with the same ratio collapse onto one atom.
    ifs = WeightedIFS(
        (0, 1), (Similitude(0.25, 0.0), Similitude(0.25, 0.5)), (0.6, 0.4))
    lam = auxiliary_measure(ifs)
    assert len(lam.atoms) == 1
    assert lam.locations[0] == pytest.approx(math.log(4))
    assert lam.masses[0] == pytest.approx(1.0)


def test_laplace_transform_normalization(luroth_lambda):
    assert laplace_transform(luroth_lambda, 0.0) == pytest.approx(1.0 + 0.0j)
    # Derivative at 0 along the real axis is -sigma.
    h = 1e-7
    numeric = (laplace_transform(luroth_lambda, h).real - 1.0) / h
    assert numeric == pytest.approx(-luroth_lambda.sigma, abs=1e-6)


def test_scan_flags_lattice_resonance(lattice_lambda):
    report = weakly_diophantine_scan(lattice_lambda, 2.0, 200.0, 512)
    assert report.lattice is True
    assert report.scan_min < 1e-9
    # The minimizer sits at a predicted frequency 2*pi*k / log 2.
    b = report.scan_argmin
    k = round(b * math.log(2) / (2.0 * math.pi))
    assert k >= 1
    assert abs(b - 2.0 * math.pi * k / math.log(2)) < 1e-9 * max(1.0, b)


def test_scan_stays_positive_off_lattice(luroth_lambda):
    report = weakly_diophantine_scan(luroth_lambda, 2.0, 2000.0, 1024)
    assert report.lattice is False
    assert report.scan_min > 0.0
    bs = [r[0] for r in report.rows]
    assert bs == sorted(bs)
    assert all(1.0 <= b <= 2000.0 for b in bs)
    # Scaled column is b^l * gap, assembled in log space.
    b, gap, scaled = report.rows[len(report.rows) // 2]
    if gap > 0.0:
        assert scaled == pytest.approx(b ** 2.0 * gap, rel=1e-12)


def test_scan_validation(luroth_lambda):
    with pytest.raises(InputError):
        weakly_diophantine_scan(luroth_lambda, 0.0, 100.0, 64)
    with pytest.raises(InputError):
        weakly_diophantine_scan(luroth_lambda, 2.0, 0.5, 64)
    with pytest.raises(InputError):
        weakly_diophantine_scan(luroth_lambda, 2.0, 100.0, 1)


def test_continued_fraction_golden():
    theta = math.log(2) / math.log(6)
    cf = continued_fraction_expansion(theta, 17)
    assert cf.quotients[:17] == (2, 1, 1, 2, 2, 3, 1, 5, 2, 23, 2, 2, 1, 1,
                                 55, 1, 4)
    assert not cf.terminating
    # Convergents satisfy the determinant identity p*q' - p'*q = +-1.
    for (p1, q1), (p2, q2) in zip(cf.convergents, cf.convergents[1:]):
        assert abs(p1 * q2 - p2 * q1) == 1
    # Convergent denominators grow strictly.
    qs = [q for _, q in cf.convergents]
    assert all(q1 < q2 for q1, q2 in zip(qs, qs[1:]))


def test_continued_fraction_exact_rational():
    cf = continued_fraction_expansion(0.25, 10)
    assert cf.terminating
    assert cf.convergents[-1] == (1, 4)
    cf38 = continued_fraction_expansion(0.375, 10)
    assert cf38.terminating
    assert Fraction(*cf38.convergents[-1]) == Fraction(3, 8)


def test_continued_fraction_validation():
    with pytest.raises(InputError):
        continued_fraction_expansion(0.0, 5)
    with pytest.raises(InputError):
        continued_fraction_expansion(1.0, 5)
    with pytest.raises(InputError):
        continued_fraction_expansion(0.5, 0)


def test_classify_ratio_three_ways():
    assert classify_ratio(0.25) == "rational"
    assert classify_ratio(3.0 / 7.0) == "rational"
    # log2/log6 admits a denominator-190537 convergent with error ~5e-13,
    # and log2/log3 one at denominator 301994 with error ~2e-13: both sit
    # under the rational tolerance, so double precision cannot rule either
    # way and the honest answer is "indeterminate".
    assert classify_ratio(math.log(2) / math.log(6)) == "indeterminate"
    assert classify_ratio(math.log(2) / math.log(3)) == "indeterminate"
    # A number whose convergent denominators jump straight past the cap
    # leaves only poor approximations behind: decidably irrational-looking.
    assert classify_ratio(0.5 + 1e-9 * math.sqrt(2)) == "irrational"


def test_classify_lattice(luroth_lambda, lattice_lambda):
    assert classify_lattice(lattice_lambda) == "lattice"
    assert classify_lattice(luroth_lambda) == "indeterminate"
    assert lattice_test(lattice_lambda) is True
    assert lattice_test(luroth_lambda) is False
    single = auxiliary_measure(WeightedIFS(
        (0,), (Similitude(0.5, 0.0),), (1.0,)))
    assert classify_lattice(single) == "lattice"


def test_matveev_degree_golden():
    assert matveev_degree(2, 3) == pytest.approx(189369098.5872438, rel=1e-13)
    assert matveev_degree(2, 3) > 189369098
    assert matveev_degree(2, 3) < 1.9e8
    assert matveev_log_constant(2, 3) == pytest.approx(-86305744.49895959,
                                                       rel=1e-13)


def test_matveev_degree_monotone():
    rng = np.random.default_rng(43)
    for _ in range(50):
        a1 = int(rng.integers(2, 1000))
        a2 = int(rng.integers(a1 + 1, a1 + 1000))
        base = matveev_degree(a1, a2)
        assert matveev_degree(a1, a2 + 1) > base
        assert matveev_degree(a1 + 1, a2) > base or a1 + 1 == a2


def test_matveev_validation():
    with pytest.raises(InputError):
        matveev_degree(2, 2)
    with pytest.raises(InputError):
        matveev_degree(1, 3)
    with pytest.raises(InputError):
        matveev_degree(True, 3)


def test_perfect_power_free():
    # The check concerns a*(a-1); products of consecutive integers are
    # never perfect powers, so every valid argument passes.
    for a in (2, 3, 4, 9, 10, 100, 12345):
        assert perfect_power_free(a)
    with pytest.raises(InputError):
        perfect_power_free(1)
    with pytest.raises(InputError):
        perfect_power_free(True)
    # The underlying power detector is what does the work.
    from selfsim.diophantine import _is_perfect_power
    assert _is_perfect_power(4) and _is_perfect_power(8) and _is_perfect_power(27)
    assert _is_perfect_power(6 ** 5) and _is_perfect_power(1024)
    assert not _is_perfect_power(12) and not _is_perfect_power(2)
