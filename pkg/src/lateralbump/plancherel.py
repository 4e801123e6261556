"""Plancherel sampling, limit-shape geometry and the ``a_n`` sequence.

Every trial draws its own generator from ``(seed, trial index)``, so a batch
gives the same answer whether it runs serially or across worker processes.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .core import Partition, column_heights, format_partition
from .errors import DomainError, VerificationFailure
from .insertion import _insert_lateral, shape_of

RNG_ID = "numpy.PCG64/SeedSequence(entropy=seed, spawn_key=(trial,))"
BOUNDARY_POINTS = 4096
INNER_GRID = 512
BISECTION_TOL = 1e-12
EXACT_STIRLING_LIMIT = 1000


# -- randomness -------------------------------------------------------------


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(trial,))))


def uniform_permutation(n: int, rng: np.random.Generator) -> list[int]:
    return (rng.permutation(n) + 1).tolist()


def _run_range(fn: Callable, n: int, seed: int, start: int, stop: int) -> list:
    return [fn(n, trial_rng(seed, t)) for t in range(start, stop)]


def run_trials(fn: Callable, n: int, trials: int, seed: int, workers: int = 1) -> list:
    """Apply ``fn(n, rng)`` to each trial in index order.

    ``fn`` must be a module-level function when ``workers > 1``.
    """
    if workers <= 1 or trials < 2:
        return _run_range(fn, n, seed, 0, trials)
    from concurrent.futures import ProcessPoolExecutor

    bounds = np.linspace(0, trials, workers + 1).astype(int).tolist()
    with ProcessPoolExecutor(workers) as ex:
        futures = [
            ex.submit(_run_range, fn, n, seed, a, b) for a, b in zip(bounds, bounds[1:]) if b > a
        ]
        out = []
        for f in futures:
            out.extend(f.result())
    return out


@dataclass(frozen=True)
class TrialBatch:
    n: int
    trials: int
    seed: int
    statistic: str
    successes: int
    extra: dict = field(default_factory=dict)

    @property
    def estimate(self) -> Fraction:
        return Fraction(self.successes, self.trials) if self.trials else Fraction(0)

    @property
    def stderr(self) -> float:
        if not self.trials:
            return float("nan")
        p = self.successes / self.trials
        return math.sqrt(p * (1 - p) / self.trials)

    def interval(self, k: float = 3.0) -> tuple[float, float]:
        p = float(self.estimate)
        return p - k * self.stderr, p + k * self.stderr

    def as_dict(self) -> dict:
        e = self.estimate
        return {
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "statistic": self.statistic,
            "successes": self.successes,
            "estimate_num": e.numerator,
            "estimate_den": e.denominator,
            "estimate": f"{float(e):.12f}",
            "stderr": f"{self.stderr:.12f}",
            **self.extra,
        }


# -- shapes and their statistics ----------------------------------------------


def sample_shape(n: int, rng: np.random.Generator) -> Partition:
    """Shape of the insertion tableau of a uniform permutation: a Plancherel draw."""
    if n < 1:
        raise ValueError("n must be positive")
    return shape_of(uniform_permutation(n, rng))


def first_row_long(lam: Partition, n: int | None = None) -> bool:
    """``L(lambda) >= sqrt(2n)``, decided exactly as ``L^2 >= 2n``."""
    n = lam.n if n is None else n
    return lam.first_row**2 >= 2 * n


def same_height_check(lam: Partition) -> bool:
    """True iff two columns of ``lam`` share a height.

    Raises if the first row is at least ``sqrt(2|lam|)`` long but all column
    heights differ, which the triangular-number bound rules out.
    """
    h = column_heights(lam)
    repeated = len(set(h)) != len(h)
    if first_row_long(lam) and not repeated:
        raise VerificationFailure("L^2 >= 2n => repeated column height", format_partition(lam))
    return repeated


@lru_cache(maxsize=None)
def _syt(parts: tuple[int, ...]) -> int:
    if not parts:
        return 1
    total = 0
    for i, p in enumerate(parts):
        # removable corner: end of row i when the next row is shorter
        if i + 1 == len(parts) or parts[i + 1] < p:
            smaller = parts[:i] + (p - 1,) + parts[i + 1:]
            total += _syt(tuple(x for x in smaller if x))
    return total


def syt_count(lam: Partition | Sequence[int]) -> int:
    """``f_lambda`` by removing one corner at a time."""
    return _syt(tuple(Partition(tuple(lam)).parts))


def plancherel_probability(lam: Partition) -> Fraction:
    return Fraction(syt_count(lam) ** 2, math.factorial(lam.n))


def _shape_trial(n, rng):
    return sample_shape(n, rng).parts


def _first_row_trial(n, rng):
    lam = sample_shape(n, rng)
    long_row = first_row_long(lam, n)
    h = column_heights(lam)
    repeated = len(set(h)) != len(h)
    return long_row, repeated


def _lateral_trial(n, rng):
    rows: list[list[int]] = []
    for x in uniform_permutation(n, rng):
        if _insert_lateral(rows, x):
            return True
    return False


def shape_frequencies(n: int, trials: int, seed: int, workers: int = 1) -> Counter:
    return Counter(Partition(p) for p in run_trials(_shape_trial, n, trials, seed, workers))


def first_row_stat(n: int, trials: int, seed: int, workers: int = 1) -> TrialBatch:
    """Frequency of ``L(lambda)^2 >= 2n`` under Plancherel.

    ``extra["implication_failures"]`` counts samples with a long first row and
    no repeated column height.
    """
    results = run_trials(_first_row_trial, n, trials, seed, workers)
    hits = sum(1 for long_row, _ in results if long_row)
    bad = sum(1 for long_row, rep in results if long_row and not rep)
    return TrialBatch(n, trials, seed, "firstrow", hits, {"implication_failures": bad})


def lateral_fraction(n: int, trials: int, seed: int, workers: int = 1) -> TrialBatch:
    """Fraction of uniform permutations whose insertion has a lateral bump."""
    results = run_trials(_lateral_trial, n, trials, seed, workers)
    return TrialBatch(n, trials, seed, "lateral", sum(results))


# -- limit shape ---------------------------------------------------------------


def gamma_x(theta):
    return (2 * theta / math.pi + 1) * np.sin(theta) + (2 / math.pi) * np.cos(theta)


def gamma_y(theta):
    return (2 * theta / math.pi - 1) * np.sin(theta) + (2 / math.pi) * np.cos(theta)


def gamma_point(theta: float) -> tuple[float, float]:
    if not -math.pi / 2 <= theta <= math.pi / 2:
        raise DomainError(f"theta={theta} outside [-pi/2, pi/2]")
    return float(gamma_x(theta)), float(gamma_y(theta))


@dataclass(frozen=True)
class LimitShapeCurve:
    theta_samples: np.ndarray
    points: np.ndarray

    def rows(self) -> list[tuple[float, float, float]]:
        return [(float(t), float(x), float(y)) for t, (x, y) in zip(self.theta_samples, self.points)]


def limit_shape_curve(points: int = 201) -> LimitShapeCurve:
    theta = np.linspace(-math.pi / 2, math.pi / 2, points)
    return LimitShapeCurve(theta, np.column_stack([gamma_x(theta), gamma_y(theta)]))


def theta_of_x(x, tol: float = BISECTION_TOL):
    """Invert the increasing map ``theta -> gamma_x(theta)`` on ``[0, 2]`` by bisection."""
    x = np.asarray(x, dtype=float)
    lo = np.full(x.shape, -math.pi / 2)
    hi = np.full(x.shape, math.pi / 2)
    while np.max(hi - lo) > tol:
        mid = 0.5 * (lo + hi)
        below = gamma_x(mid) < x
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


class Boundary:
    """Upper boundary ``y = B(x)`` of the limit shape, zero for ``x >= 2``."""

    def __init__(self, points: int = BOUNDARY_POINTS):
        self.xs = np.linspace(0.0, 2.0, points)
        ys = gamma_y(theta_of_x(self.xs))
        ys[0], ys[-1] = 2.0, 0.0
        self.ys = np.maximum(ys, 0.0)

    def __call__(self, x, scale: float = 1.0):
        """Boundary of ``scale * Gamma`` at ``x``."""
        x = np.asarray(x, dtype=float) / scale
        return scale * np.interp(x, self.xs, self.ys, left=2.0, right=0.0)


@lru_cache(maxsize=1)
def default_boundary() -> Boundary:
    return Boundary()


def shape_within(
    lam: Partition, n: int | None = None, eps: float = 0.15, grid: int = INNER_GRID
) -> tuple[bool, bool]:
    """Containment ``(1-eps)Gamma <= S_lambda/sqrt(n) <= (1+eps)Gamma``.

    Row ``i`` of ``lam`` occupies ``[i-1, i]`` on the x-axis with height
    ``lam_i``. Returns ``(inner_ok, outer_ok)``.
    """
    n = lam.n if n is None else n
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    B = default_boundary()
    s = 1 / math.sqrt(n)
    parts = np.asarray(lam.parts, dtype=float)
    k = len(parts)
    idx = np.arange(1, k + 1, dtype=float)

    # outer corners (i, lam_i) must sit under the enlarged boundary
    outer_ok = bool(np.all(parts * s <= B(idx * s, 1 + eps)))

    # inner corners (i-1, lam_i) must sit on or above the shrunken boundary,
    # including the empty row k+1
    heights = np.append(parts, 0.0) * s
    left = np.arange(0, k + 1, dtype=float) * s
    inner_ok = bool(np.all(B(left, 1 - eps) <= heights))
    if inner_ok:
        theta = np.linspace(-math.pi / 2, math.pi / 2, grid)
        px = (1 - eps) * gamma_x(theta)
        py = np.maximum((1 - eps) * gamma_y(theta), 0.0)
        row = np.maximum(np.ceil(px / s - 1e-9), 1).astype(int)
        inside = row <= k
        lam_at = np.where(inside, parts[np.minimum(row, k) - 1], 0.0) * s
        inner_ok = bool(np.all(inside & (py <= lam_at + 1e-12)))
    return inner_ok, outer_ok


def _containment_trial(n, rng, eps):
    return shape_within(sample_shape(n, rng), n, eps)


class _Containment:
    # picklable stand-in for a closure over eps
    def __init__(self, eps):
        self.eps = eps

    def __call__(self, n, rng):
        return _containment_trial(n, rng, self.eps)


def containment_stat(n: int, trials: int, seed: int, eps: float, workers: int = 1) -> TrialBatch:
    """Fraction of Plancherel samples passing both containment checks."""
    results = run_trials(_Containment(eps), n, trials, seed, workers)
    both = sum(1 for i, o in results if i and o)
    return TrialBatch(
        n,
        trials,
        seed,
        "shape",
        both,
        {
            "epsilon": eps,
            "inner_ok": sum(1 for i, _ in results if i),
            "outer_ok": sum(1 for _, o in results if o),
        },
    )


# -- a_n = (1/2)(3/4)...((2n-1)/(2n)) ------------------------------------------


def stirling_exact(n_max: int) -> list[Fraction]:
    """``[a_1, ..., a_{n_max}]`` as exact rationals."""
    out = []
    a = Fraction(1)
    for n in range(1, n_max + 1):
        a *= Fraction(2 * n - 1, 2 * n)
        out.append(a)
    return out


@dataclass(frozen=True)
class StirlingTable:
    n: np.ndarray
    log_a: np.ndarray
    log_scaled: np.ndarray

    @property
    def a(self) -> np.ndarray:
        return np.exp(self.log_a)

    @property
    def scaled(self) -> np.ndarray:
        """``a_n * sqrt(pi n)``."""
        return np.exp(self.log_scaled)

    def rows(self):
        for n, a, s in zip(self.n.tolist(), self.a.tolist(), self.scaled.tolist()):
            yield n, a, s


def stirling_sequence(n_max: int) -> StirlingTable:
    """``a_n`` and ``a_n sqrt(pi n)`` for ``n = 1..n_max`` in log space.

    ``log a_n`` accumulates ``log((2i-1)/(2i))``. The scaled value accumulates
    its own per-step ratio ``(2i-1)/(2i) * sqrt(i/(i-1))`` so that its tiny
    increments are not lost to cancellation.
    """
    if n_max < 1:
        raise ValueError("n_max must be positive")
    i = np.arange(1, n_max + 1, dtype=float)
    log_a = np.cumsum(np.log1p(-1 / (2 * i)))
    steps = np.empty(n_max)
    steps[0] = 0.5 * math.log(math.pi) - math.log(2)
    j = i[1:]
    steps[1:] = np.log1p(-1 / (2 * j)) - 0.5 * np.log1p(-1 / j)
    return StirlingTable(i.astype(np.int64), log_a, np.cumsum(steps))


def stirling_log_gamma(n: int) -> float:
    """``log a_n`` through ``lgamma``; an independent check on the accumulation."""
    return math.lgamma(2 * n + 1) - 2 * n * math.log(2) - 2 * math.lgamma(n + 1)
