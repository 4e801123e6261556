import math
from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest
from scipy import integrate, stats

from lateralbump.core import Partition, partitions
from lateralbump.errors import DomainError, VerificationFailure
from lateralbump.insertion import has_lateral_bump, shape_of
from lateralbump.plancherel import (
    Boundary,
    first_row_stat,
    gamma_point,
    gamma_x,
    gamma_y,
    lateral_fraction,
    limit_shape_curve,
    plancherel_probability,
    same_height_check,
    sample_shape,
    shape_frequencies,
    shape_within,
    stirling_exact,
    stirling_log_gamma,
    stirling_sequence,
    syt_count,
    trial_rng,
)


def hook_length_count(parts):
    conj = [sum(1 for p in parts if p > j) for j in range(parts[0])] if parts else []
    n = sum(parts)
    prod = 1
    for i, p in enumerate(parts):
        for j in range(p):
            prod *= (p - j - 1) + (conj[j] - i - 1) + 1
    return math.factorial(n) // prod


def brute_syt(parts):
    n = sum(parts)
    cells = [(i, j) for i, p in enumerate(parts) for j in range(p)]
    count = 0
    for perm in permutations(range(1, n + 1)):
        fill = dict(zip(cells, perm))
        if all(
            (j == 0 or fill[(i, j - 1)] < fill[(i, j)]) and (i == 0 or fill[(i - 1, j)] < fill[(i, j)])
            for i, j in cells
        ):
            count += 1
    return count


@pytest.mark.parametrize("n", range(1, 7))
def test_syt_count_against_brute_force(n):
    for lam in partitions(n):
        assert syt_count(lam) == brute_syt(lam.parts)


@pytest.mark.parametrize("n", range(1, 13))
def test_syt_count_against_hook_lengths(n):
    for lam in partitions(n):
        assert syt_count(lam) == hook_length_count(lam.parts)


@pytest.mark.parametrize("n", range(1, 9))
def test_sum_of_squares(n):
    assert sum(syt_count(lam) ** 2 for lam in partitions(n)) == math.factorial(n)


@pytest.mark.parametrize("n", range(1, 7))
def test_shape_fibres_have_size_f_squared(n):
    counts = {}
    for w in permutations(range(1, n + 1)):
        lam = shape_of(w)
        counts[lam] = counts.get(lam, 0) + 1
    assert counts == {lam: syt_count(lam) ** 2 for lam in partitions(n)}


def test_sample_shape_n1():
    for t in range(20):
        assert sample_shape(1, trial_rng(3, t)) == Partition((1,))


def chi_square_pvalue(freq, n, trials):
    lams = list(partitions(n))
    observed = [freq.get(lam, 0) for lam in lams]
    expected = [float(plancherel_probability(lam)) * trials for lam in lams]
    assert sum(observed) == trials
    return stats.chisquare(observed, expected).pvalue


def test_plancherel_n2():
    freq = shape_frequencies(2, 10**4, seed=11)
    assert chi_square_pvalue(freq, 2, 10**4) > 1e-3


def test_plancherel_n4():
    assert plancherel_probability(Partition((2, 1))) == Fraction(4, 6)
    freq = shape_frequencies(4, 10**5, seed=12)
    assert chi_square_pvalue(freq, 4, 10**5) > 1e-3


def test_same_height_examples():
    assert same_height_check(Partition((2, 2, 1))) is False
    assert same_height_check(Partition((3, 1))) is True
    # the implication holds on every partition up to 20
    for n in range(1, 21):
        for lam in partitions(n):
            same_height_check(lam)


@pytest.mark.parametrize("n", [50, 100])
def test_same_height_on_samples(n):
    hits = 0
    for t in range(10**4):
        lam = sample_shape(n, trial_rng(99, t))
        if lam.first_row**2 >= 2 * n:
            hits += 1
            assert same_height_check(lam)
    assert hits > 0


def test_same_height_rejects_forged_counterexample(monkeypatch):
    import lateralbump.plancherel as pl

    monkeypatch.setattr(pl, "column_heights", lambda lam: (4, 3, 2, 1))
    with pytest.raises(VerificationFailure):
        pl.same_height_check(Partition((4, 1)))


def test_first_row_n1_is_zero():
    batch = first_row_stat(1, 10, seed=1)
    assert batch.successes == 0
    assert batch.extra["implication_failures"] == 0


def test_first_row_midsize_is_recorded():
    batch = first_row_stat(100, 300, seed=2)
    assert 0 < batch.estimate <= 1
    assert batch.extra["implication_failures"] == 0


def test_gamma_examples():
    assert gamma_point(0) == pytest.approx((2 / math.pi, 2 / math.pi))
    assert gamma_point(math.pi / 2) == pytest.approx((2, 0), abs=1e-15)
    assert gamma_point(-math.pi / 2) == pytest.approx((0, 2), abs=1e-15)
    with pytest.raises(DomainError):
        gamma_point(2.0)


def test_gamma_symmetry_and_monotonicity():
    theta = np.linspace(-math.pi / 2, math.pi / 2, 2001)
    assert np.allclose(gamma_x(-theta), gamma_y(theta), atol=1e-14)
    assert np.all(np.diff(gamma_x(theta)) > 0)
    curve = limit_shape_curve(101)
    assert curve.points.shape == (101, 2)


def test_limit_shape_has_unit_area():
    # area under the curve: integral of y dx along theta
    def integrand(t):
        dx = (2 * t / math.pi + 1) * math.cos(t)
        return float(gamma_y(t)) * dx

    area, _ = integrate.quad(integrand, -math.pi / 2, math.pi / 2)
    assert area == pytest.approx(1.0, abs=1e-10)


def test_boundary_tracks_parametric_curve():
    B = Boundary()
    theta = np.linspace(-1.4, 1.4, 301)
    assert np.allclose(B(gamma_x(theta)), gamma_y(theta), atol=2e-4)
    assert B(0.0) == pytest.approx(2.0)
    assert B(2.5) == 0.0
    assert B(1.0, scale=1.9) == pytest.approx(1.9 * B(1 / 1.9))


def test_shape_within_examples():
    inner, outer = shape_within(Partition((1,)), 1, 0.9)
    assert outer
    # corner (1,1) against the parametric boundary of 1.9 Gamma
    B = Boundary()
    assert 1.0 < B(1.0, scale=1.9)
    assert shape_within(Partition((1,)), 1, 0.999)[0]
    assert shape_within(Partition((5, 3, 1)), 9, 0.9999)[0]


def test_shape_within_obvious_failures():
    # a single row of length n pokes far outside the limit shape
    assert shape_within(Partition((400,)), 400, 0.3) == (False, False)


def test_containment_monotone_in_eps():
    eps_grid = [0.1, 0.15, 0.2, 0.3]
    for t in range(30):
        lam = sample_shape(900, trial_rng(5, t))
        flags = [all(shape_within(lam, 900, e)) for e in eps_grid]
        for a, b in zip(flags, flags[1:]):
            assert not a or b


def test_lateral_fraction_small_n():
    exact = Fraction(sum(has_lateral_bump(w) for w in permutations(range(1, 4))), 6)
    assert exact == Fraction(1, 6)
    batch = lateral_fraction(3, 10**4, seed=4)
    lo, hi = batch.interval(3)
    assert lo <= 1 / 6 <= hi


def test_reproducible_batches():
    a = lateral_fraction(12, 500, seed=8)
    b = lateral_fraction(12, 500, seed=8)
    c = lateral_fraction(12, 500, seed=8, workers=3)
    assert a == b == c
    assert first_row_stat(60, 200, seed=1, workers=1) == first_row_stat(60, 200, seed=1, workers=4)


def test_stirling_small_values():
    a = stirling_exact(5)
    assert a[0] == Fraction(1, 2)
    assert a[1] == Fraction(3, 8)
    for n in range(1, 6):
        assert a[n - 1] == Fraction(math.factorial(2 * n), 4**n * math.factorial(n) ** 2)


def test_stirling_log_mode_matches_exact():
    exact = stirling_exact(1000)
    table = stirling_sequence(1000)
    for n in (1, 2, 10, 100, 1000):
        assert table.a[n - 1] == pytest.approx(float(exact[n - 1]), rel=1e-12)
        assert table.log_a[n - 1] == pytest.approx(stirling_log_gamma(n), abs=1e-12)
        assert table.scaled[n - 1] == pytest.approx(float(exact[n - 1]) * math.sqrt(math.pi * n), rel=1e-12)


def test_stirling_envelope_small():
    table = stirling_sequence(10**4)
    s = table.scaled
    assert np.all(np.diff(s) > 0)
    assert np.all(np.abs(s - 1) <= 1 / (7 * table.n))
