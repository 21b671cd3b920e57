"""Topological entropy along two independent routes.

The Perron route encloses the spectral radius of the adjacency matrix with
exact rational Collatz-Wielandt bounds. The counting route fits the growth
rate of the localized shell counts. The two must agree, and the certified
enclosure from the first route is also what the trace layer uses to bound
series tails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (
    InsufficientWindow,
    ReducibleMatrix,
    UncertifiedCounts,
    ValidationError,
    ZeroMatrix,
)

Matrix = tuple[tuple[int, ...], ...]

_MAX_POWER_ITERATIONS = 10_000
# additive float headroom on error bounds; the underlying arithmetic is
# rational, floats only enter at the final log
_FLOAT_SLOP = 1e-12


def _validated_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    mat = tuple(tuple(r) for r in rows)
    if not mat:
        raise ValidationError("matrix must have at least one row")
    n = len(mat)
    for row in mat:
        if len(row) != n:
            raise ValidationError("matrix must be square")
        for e in row:
            if not isinstance(e, int) or isinstance(e, bool) or e < 0:
                raise ValidationError(
                    "matrix entries must be nonnegative integers")
    return mat


def _is_irreducible(mat: Matrix) -> bool:
    n = len(mat)
    for start in range(n):
        reached = set()
        frontier = [j for j in range(n) if mat[start][j] > 0]
        while frontier:
            v = frontier.pop()
            if v in reached:
                continue
            reached.add(v)
            frontier.extend(j for j in range(n) if mat[v][j] > 0)
        if len(reached) != n:
            return False
    return True


@dataclass(frozen=True)
class PerronEnclosure:
    """Rational two-sided bounds low <= rho(A) <= high together with the
    positive witness vector: A v <= high * v and A v >= low * v entrywise."""

    low: Fraction
    high: Fraction
    vector: tuple[Fraction, ...]
    iterations: int

    @property
    def width(self) -> Fraction:
        return self.high - self.low


def perron_enclosure(matrix: Sequence[Sequence[int]],
                     tol: Fraction = Fraction(1, 10 ** 9),
                     ) -> PerronEnclosure:
    """Enclose the Perron root of a nonnegative irreducible integer matrix.

    Power iteration runs on A + I, which is primitive whenever A is
    irreducible, so the min/max ratios of consecutive iterates converge to
    rho(A) + 1 from both sides. Everything is exact rational arithmetic.
    """
    mat = _validated_matrix(matrix)
    if all(e == 0 for row in mat for e in row):
        raise ZeroMatrix("adjacency matrix is identically zero")
    if not _is_irreducible(mat):
        raise ReducibleMatrix("adjacency matrix is not irreducible")
    tol = Fraction(tol)
    if tol <= 0:
        raise ValidationError("tolerance must be positive")
    n = len(mat)
    v = [Fraction(1)] * n
    for iteration in range(1, _MAX_POWER_ITERATIONS + 1):
        image = [sum(mat[i][j] * v[j] for j in range(n)) + v[i]
                 for i in range(n)]
        ratios = [image[i] / v[i] for i in range(n)]
        lo, hi = min(ratios), max(ratios)
        if hi - lo <= tol:
            return PerronEnclosure(lo - 1, hi - 1, tuple(v), iteration)
        top = max(image)
        v = [x / top for x in image]
    raise AssertionError(
        "Collatz-Wielandt iteration failed to reach the tolerance")


@dataclass(frozen=True)
class EntropyResult:
    """An entropy value in nats with a certified or estimated error bound."""

    value: float
    method: str
    error_bound: float
    iterations: int


def entropy_perron(matrix: Sequence[Sequence[int]],
                   tol: float = 1e-9) -> EntropyResult:
    """ln of the adjacency Perron root, from the rational enclosure."""
    enc = perron_enclosure(matrix, Fraction(tol))
    if enc.low <= 0:
        # an irreducible integer matrix always carries a cycle
        raise AssertionError("Perron lower bound must be positive")
    lo, hi = math.log(enc.low), math.log(enc.high)
    return EntropyResult(
        value=(lo + hi) / 2,
        method="perron",
        error_bound=(hi - lo) / 2 + _FLOAT_SLOP,
        iterations=enc.iterations,
    )


def least_squares_line(points: Sequence[tuple[float, float]],
                       ) -> tuple[float, float, float]:
    """Ordinary least squares fit y = slope*x + intercept.

    Returns (slope, intercept, stderr of the slope). Needs >= 3 points for a
    residual estimate; with exactly determined data stderr is 0.
    """
    m = len(points)
    if m < 3:
        raise InsufficientWindow("need at least three points to fit")
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    xbar = sum(xs) / m
    ybar = sum(ys) / m
    sxx = sum((x - xbar) ** 2 for x in xs)
    if sxx == 0:
        raise InsufficientWindow("window has no spread")
    sxy = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = ybar - slope * xbar
    residual = sum((y - slope * x - intercept) ** 2 for x, y in zip(xs, ys))
    variance = residual / (m - 2)
    stderr = math.sqrt(max(variance, 0.0) / sxx)
    return slope, intercept, stderr


def entropy_counting(weights, localization, n_max: int,
                     window_length: int = 15) -> EntropyResult:
    """Growth rate of the localized shell counts over the tail window.

    The counts come from the same exact series that feeds the spectral
    dimension, so this is the counting theorem tested against the Perron
    value rather than a second enumeration.
    """
    from .spectral_traces import count_series

    if n_max < 10:
        raise ValidationError("counting entropy needs n_max >= 10")
    series = count_series(weights, localization, n_max)
    lo = max(series.min_shell, n_max - window_length + 1)
    window = [(float(n), math.log(series.count(n)))
              for n in range(lo, n_max + 1) if series.count(n) > 0]
    if len(window) < 5 or not series.certified:
        raise UncertifiedCounts(
            "tail window has too few certified positive counts")
    slope, _, stderr = least_squares_line(window)
    half = window[len(window) // 2:]
    sensitivity = 0.0
    if len(half) >= 3:
        slope_half, _, _ = least_squares_line(half)
        sensitivity = abs(slope - slope_half)
    return EntropyResult(
        value=slope,
        method="counting",
        error_bound=2 * stderr + sensitivity + _FLOAT_SLOP,
        iterations=len(window),
    )
