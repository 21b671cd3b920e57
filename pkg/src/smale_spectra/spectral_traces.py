"""Dirac operators, shell counting, and localized trace estimates.

Two diagonal operators act on the span of the heteroclinic basis: a linear
one with eigenvalue omega_s(x) and an exponential one with eigenvalue
base**omega_s(x). Localizing by a diagonal basic function and grading the
basis by entry shells turns both trace families into series over shells,

    theta(t) = sum_n sum_{x in shell n} a(x,x) exp(-t (1 + omega_s(x)^2)),
    zeta(s)  = sum_n sum_{x in shell n} a(x,x) (1 + base^(2 omega_s(x)))^(-s/2),

whose shell counts c(n) this module computes exactly by path counting.
Every reported trace value carries either a certified tail bound, derived
from an exact eigenvector witness for the adjacency growth, or an explicit
divergence certificate. The regression of ln c(n) against n estimates the
summability threshold of the zeta family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Optional

from .entropy import PerronEnclosure, least_squares_line, perron_enclosure
from .errors import (
    InsufficientWindow,
    MismatchedShift,
    NonDiagonalLocalization,
    NonPositiveS,
    NonPositiveT,
    NotInStableClass,
    PeriodicPointExcluded,
    TruncationInsufficient,
    UncertifiedCounts,
    ValidationError,
)
from .groupoid_rep import BasicFunction, StateVector, unitary_shift
from .sft_core import (
    Cylinder,
    HeteroclinicPoint,
    enumerate_heteroclinic,
    shift,
)
from .weights import (
    WeightSystem,
    entry_index,
    entry_ramp_value,
    hop_bound,
    omega_s,
    stable_lipschitz_constant,
    transport_jump_candidates,
)

DIRAC_KINDS = ("linear", "exponential")

# multiplicative safety margin absorbing float rounding in certified bounds
_SLOP = 1.0 + 1e-9

# largest exponent handed to math.exp without overflow
_EXP_CAP = 700.0


@dataclass(frozen=True)
class DiracKind:
    """Choice of diagonal operator: "linear" acts by the stable weight
    itself, "exponential" by base**weight with base > 1."""

    kind: str = "linear"
    base: Fraction = Fraction(2)

    def __post_init__(self) -> None:
        if self.kind not in DIRAC_KINDS:
            raise ValidationError(f"unknown operator kind {self.kind!r}")
        base = Fraction(self.base)
        if base <= 1:
            raise ValidationError("exponential base must exceed 1")
        object.__setattr__(self, "base", base)

    @classmethod
    def linear(cls) -> "DiracKind":
        return cls("linear")

    @classmethod
    def exponential(cls, base: object = Fraction(2)) -> "DiracKind":
        return cls("exponential", Fraction(base))  # type: ignore[arg-type]


def dirac_eigenvalue(kind: DiracKind, weights: WeightSystem,
                     x: HeteroclinicPoint) -> Fraction:
    """Eigenvalue of the chosen operator on the basis vector at x.

    Integer weights give an exact power of the base; the ramp flavour's
    fractional weights fall back to a float power, recorded exactly as the
    dyadic rational the platform produced so repeated calls agree.
    """
    w = omega_s(weights, x)
    if kind.kind == "linear":
        return w
    if w.denominator == 1:
        return Fraction(kind.base ** w.numerator)
    return Fraction(float(kind.base) ** float(w))


def dirac_apply(kind: DiracKind, weights: WeightSystem,
                xi: StateVector) -> StateVector:
    """Diagonal action on a finitely supported vector."""
    out = {}
    for x, amp in xi.items():
        out[x] = amp * dirac_eigenvalue(kind, weights, x)
    return StateVector(out)


def commutator_apply(kind: DiracKind, weights: WeightSystem,
                     func: BasicFunction, xi: StateVector) -> StateVector:
    """(D pi(a) - pi(a) D) applied to xi, for D of the chosen kind."""
    left = dirac_apply(kind, weights, func.apply(xi))
    right = func.apply(dirac_apply(kind, weights, xi))
    return left - right


def ruelle_unitary(xi: StateVector) -> StateVector:
    """The covariance unitary: sends the basis vector at x to the one at
    its shift preimage, raising every stable weight by one. Conjugation by
    it implements the inverse shift automorphism on basic functions, and
    [D, u] = u holds exactly on basis vectors."""
    return unitary_shift(xi, -1)


def unitary_commutator_norm(kind: DiracKind, weights: WeightSystem,
                            x: HeteroclinicPoint) -> Fraction:
    """Exact norm of [D, u] applied to the basis vector at x, where u is
    the covariance unitary; the result lives on the single basis vector at
    the shift preimage."""
    before = dirac_eigenvalue(kind, weights, x)
    after = dirac_eigenvalue(kind, weights, shift(x, -1))
    return abs(after - before)


# --------------------------------------------------------------------------
# shell counting


@dataclass(frozen=True)
class ShellClass:
    """Points of one shell sharing a localization value and an exact
    weight: every member has omega_s = shell - 1 + offset."""

    amplitude: Fraction
    offset: Fraction
    count: int

    def __post_init__(self) -> None:
        if not 0 < self.offset <= 1:
            raise ValidationError("weight offset must lie in (0, 1]")
        if self.count < 0:
            raise ValidationError("class count must be nonnegative")


@dataclass(frozen=True)
class Shell:
    """One occupied entry shell of the localized counting series."""

    index: int
    classes: tuple[ShellClass, ...]

    @property
    def count(self) -> int:
        return sum(c.count for c in self.classes)


@dataclass(frozen=True)
class CountSeries:
    """Exact localized shell counts c(n) for n <= n_max.

    Only occupied shells are stored; counts are zero below min_shell and
    at gaps. certified_to marks how far the counts are independent of any
    enumeration window; the fast path certifies everything it reports.
    """

    localization: BasicFunction
    n_max: int
    truncation: int
    shells: tuple[Shell, ...]
    certified_to: int

    def __post_init__(self) -> None:
        lookup = {s.index: s for s in self.shells}
        object.__setattr__(self, "_by_index", lookup)

    def count(self, n: int) -> int:
        s = self._by_index.get(n)  # type: ignore[attr-defined]
        return 0 if s is None else s.count

    def shell_at(self, n: int) -> Optional[Shell]:
        return self._by_index.get(n)  # type: ignore[attr-defined]

    def certified_at(self, n: int) -> bool:
        return n <= self.certified_to

    @property
    def certified(self) -> bool:
        return self.certified_to >= self.n_max

    @property
    def min_shell(self) -> int:
        """Smallest occupied shell; n_max + 1 when nothing is occupied."""
        if not self.shells:
            return self.n_max + 1
        return self.shells[0].index

    @property
    def vanishing_threshold(self) -> int:
        """Largest M with c(n) = 0 for every n <= M."""
        return self.min_shell - 1

    def total(self) -> int:
        return sum(s.count for s in self.shells)


def _require_diagonal(weights: WeightSystem, func: BasicFunction) -> None:
    if func.system != weights.system:
        raise MismatchedShift("localization acts on a different shift")
    bs = func.basic_set
    if bs.image_center != bs.domain_center:
        raise NonDiagonalLocalization(
            "trace localization must be a diagonal basic function")
    for _piece, value in func.pieces:
        if value.im != 0 or value.re < 0:
            raise ValidationError("localization values must be nonnegative")


@lru_cache(maxsize=None)
def _ramp_offset(weights: WeightSystem, edge: int, orbit, phase: int,
                 ) -> Fraction:
    if weights.kind == "indicator":
        return Fraction(1)
    return entry_ramp_value(weights, edge, orbit, phase)


def _graft_break(piece: Cylinder, orbit, phase: int) -> Optional[tuple]:
    """Canonical entry data of the point made of piece's pattern with the
    orbit tail attached right above the pinned window.

    Returns (shell, last_edge, phase_at_shell) or None when the pattern
    continues the tail forever, which makes the graft periodic.
    """
    hi = piece.hi
    p = orbit.period
    floor = min(piece.word_start, hi + 1) - lcm(piece.base.period, p) - 1
    j = hi
    while j >= floor:
        back = orbit.word[(phase - (hi + 1 - j)) % p]
        if piece.pattern(j) != back:
            n = j + 1
            return n, piece.pattern(j), (phase - (hi + 1 - n)) % p
        j -= 1
    return None


def _piece_shell_classes(weights: WeightSystem, piece: Cylinder,
                         amplitude: Fraction, n_max: int,
                         shells: dict) -> None:
    """Accumulate exact shell classes of one support piece into shells.

    Points of the piece lying in the heteroclinic space split by where
    their future locks onto an attracting tail: at most one point per
    attracting phase locks inside the pinned window (a backward scan finds
    its canonical shell), and beyond the window the points of shell n are
    free paths through the graph, counted by iterating the out-edge
    recursion on exact integers.
    """
    sysm = weights.system
    if piece.base not in weights.repelling:
        return
    hi = piece.hi

    def add(n: int, edge: int, orbit, phase: int, count: int) -> None:
        if n > n_max or count == 0:
            return
        offset = _ramp_offset(weights, edge, orbit, phase)
        key = (amplitude, offset)
        bucket = shells.setdefault(n, {})
        bucket[key] = bucket.get(key, 0) + count

    junctions = []
    for orbit in weights.attracting:
        for phase in range(orbit.period):
            if sysm.edge_source[orbit.word[phase]] != piece.end_vertex:
                continue
            hit = _graft_break(piece, orbit, phase)
            if hit is not None:
                add(hit[0], hit[1], orbit, hit[2], 1)
        for phase in range(orbit.period):
            finals = tuple(
                e for e in range(sysm.n_edges)
                if sysm.edge_target[e] == sysm.edge_source[orbit.word[phase]]
                and e != orbit.word[(phase - 1) % orbit.period])
            if finals:
                junctions.append((orbit, phase, finals))

    # paths[v] = number of length-k paths from the window's end vertex to v
    paths = [0] * sysm.n_vertices
    paths[piece.end_vertex] = 1
    for length in range(0, n_max - hi - 1):
        n = hi + 2 + length
        for orbit, phase, finals in junctions:
            for e in finals:
                add(n, e, orbit, phase, paths[sysm.edge_source[e]])
        nxt = [0] * sysm.n_vertices
        for e in range(sysm.n_edges):
            src = paths[sysm.edge_source[e]]
            if src:
                nxt[sysm.edge_target[e]] += src
        paths = nxt


def count_series(weights: WeightSystem, localization: BasicFunction,
                 n_max: int) -> CountSeries:
    """Exact shell counts of the localized heteroclinic space, refined by
    localization value and weight offset, for every shell up to n_max.

    The fast path never enumerates points: for each support piece it
    scans the finitely many in-window tail locks and then counts free
    paths through the adjacency structure, so every count is certified.
    """
    if not isinstance(n_max, int):
        raise ValidationError("n_max must be an integer")
    _require_diagonal(weights, localization)
    shells: dict[int, dict[tuple[Fraction, Fraction], int]] = {}
    for piece, value in localization.pieces:
        _piece_shell_classes(weights, piece, value.re, n_max, shells)
    packed = tuple(
        Shell(n, tuple(ShellClass(amp, off, cnt)
                       for (amp, off), cnt in sorted(shells[n].items())))
        for n in sorted(shells))
    return CountSeries(localization, n_max, n_max, packed, n_max)


def _support_points(weights: WeightSystem, piece: Cylinder,
                    horizon: int):
    """Every heteroclinic point of the piece that is tail-periodic past
    the horizon: the pinned pattern, one free path over (hi, horizon],
    and one attracting tail. Distinct choices give distinct points, and
    any point of the piece entering by shell horizon + 1 arises from
    exactly one choice."""
    sysm = weights.system
    if piece.base not in weights.repelling:
        return
    hi = piece.hi
    span = max(horizon, hi) - hi
    core0 = tuple(piece.word)
    stack = [(piece.end_vertex, ())]
    while stack:
        vertex, word = stack.pop()
        if len(word) < span:
            for e in sysm.out_edges(vertex):
                stack.append((sysm.edge_target[e], word + (e,)))
            continue
        for orbit in weights.attracting:
            for phase in range(orbit.period):
                if sysm.edge_source[orbit.word[phase]] != vertex:
                    continue
                yield HeteroclinicPoint(
                    sysm, piece.base, piece.base_phase, core0 + word,
                    piece.word_start, orbit, phase)


def count_series_enumerated(weights: WeightSystem,
                            localization: BasicFunction, n_max: int,
                            max_core: Optional[int] = None) -> CountSeries:
    """Shell counts by direct point enumeration; the independent slow
    route used to certify the fast path.

    Builds every support point that is tail-periodic past position
    max_core, computes each one's shell and weight through the point
    machinery rather than any counting recursion, and bins the results.
    A window that cannot see shell n_max raises TruncationInsufficient
    instead of returning silently short counts.
    """
    if not isinstance(n_max, int):
        raise ValidationError("n_max must be an integer")
    _require_diagonal(weights, localization)
    required = max(n_max - 1, 1)
    if max_core is None:
        max_core = required
    elif max_core < required:
        raise TruncationInsufficient(
            f"window {max_core} cannot certify counts up to shell {n_max};"
            f" need {required}")
    shells: dict[int, dict[tuple[Fraction, Fraction], int]] = {}
    seen: set[HeteroclinicPoint] = set()
    for piece, _value in localization.pieces:
        for x in _support_points(weights, piece, max_core):
            if x in seen:
                raise AssertionError("enumeration produced a duplicate")
            seen.add(x)
            value = localization.value_on(x)
            if value.is_zero:
                continue
            n = entry_index(weights, x) + 1
            if n > n_max:
                continue
            offset = omega_s(weights, x) - (n - 1)
            key = (value.re, offset)
            bucket = shells.setdefault(n, {})
            bucket[key] = bucket.get(key, 0) + 1
    packed = tuple(
        Shell(n, tuple(ShellClass(amp, off, cnt)
                       for (amp, off), cnt in sorted(shells[n].items())))
        for n in sorted(shells))
    return CountSeries(localization, n_max, max_core, packed, n_max)


# --------------------------------------------------------------------------
# certified tails


@dataclass(frozen=True)
class TraceResult:
    """Partial trace sum with a certified error statement.

    converged means the omitted tail is provably at most tail_bound and
    that bound met the requested tolerance; diverged means the series was
    certified to grow without bound, with the evidence in certificate.
    terms_used counts shell partial sums, not individual points.
    """

    value: float
    tail_bound: float
    converged: bool
    terms_used: int
    diverged: bool = False
    certificate: Optional[str] = None


_ZERO_TRACE = TraceResult(0.0, 0.0, True, 0)


@lru_cache(maxsize=None)
def _adjacency_enclosure(matrix: tuple) -> PerronEnclosure:
    return perron_enclosure(matrix, Fraction(1, 10 ** 9))


def _growth_constant(weights: WeightSystem, func: BasicFunction,
                     enclosure: PerronEnclosure) -> Fraction:
    """Exact B with c(n) <= B * high**n for every n past the pinned
    windows, from the eigenvector witness A v <= high v.

    Each shell point beyond a piece's window is a free path from the
    window's end vertex tagged by one attracting phase, and the witness
    bounds the number of length-k paths by high**k * max(v)/min(v).
    """
    rho = enclosure.high
    v = enclosure.vector
    spread = Fraction(max(v), min(v))
    tails = sum(orb.period for orb in weights.attracting)
    total = Fraction(0)
    for piece, _value in func.pieces:
        total += tails * spread * rho ** (-1 - piece.hi)
    return total


def _series_term(amplitude: Fraction, count: int, log_weight: float) -> float:
    """amplitude * count * exp(log_weight) without large-int overflow."""
    lw = log_weight + math.log(count) + math.log(amplitude)
    if lw > _EXP_CAP:
        return math.inf
    return math.exp(lw) if lw > -745.0 else 0.0


def _zeta_log_weight(omega: float, s: float, log_lam: float) -> float:
    """ln of (1 + lam**(2 omega))**(-s/2), stable for any sign and size
    of omega."""
    e2 = 2.0 * omega * log_lam
    return -0.5 * s * (max(e2, 0.0) + math.log1p(math.exp(-abs(e2))))


def _shell_floor(func: BasicFunction) -> int:
    return max(max(piece.hi for piece, _ in func.pieces) + 2, 1)


def theta_trace(weights: WeightSystem, localization: Optional[BasicFunction],
                t: float, tol: float) -> TraceResult:
    """Heat-kernel trace of the linear operator against a diagonal
    localization, summed shell by shell with a certified tail.

    None stands for the zero localization, whose trace is exactly zero.
    The tail over shells n > N is bounded by the certified growth
    c(n) <= B rho**n against exp(-t (1 + (n-1)^2)), a geometric series
    once rho exp(-t(2N+1)) < 1.
    """
    t = float(t)
    if t <= 0:
        raise NonPositiveT("theta trace needs t > 0")
    tol = float(tol)
    if tol <= 0:
        raise ValidationError("tolerance must be positive")
    if localization is None:
        return _ZERO_TRACE
    _require_diagonal(weights, localization)
    enclosure = _adjacency_enclosure(weights.system.adjacency())
    rho = float(enclosure.high)
    log_c = math.log(localization.max_abs()
                     * float(_growth_constant(weights, localization,
                                              enclosure)))
    n = _shell_floor(localization)
    bound = math.inf
    while n <= 100_000:
        ratio = rho * math.exp(-t * (2 * n + 1))
        if ratio < 1.0:
            log_head = log_c + (n + 1) * math.log(rho) - t * (1.0 + n * n)
            if log_head <= _EXP_CAP:
                bound = math.exp(log_head) / (1.0 - ratio) * _SLOP
                if bound <= tol:
                    break
        n += 1
    else:
        return TraceResult(math.nan, math.inf, False, 0,
                           certificate="tail bound never met the tolerance")
    series = count_series(weights, localization, n)
    value = 0.0
    for sh in series.shells:
        for cls in sh.classes:
            omega = float(sh.index - 1 + cls.offset)
            value += _series_term(cls.amplitude, cls.count,
                                  -t * (1.0 + omega * omega))
    return TraceResult(value, bound, True, n)


def zeta_trace(weights: WeightSystem, localization: Optional[BasicFunction],
               s: float, tol: float, ceiling: float = 1e6) -> TraceResult:
    """Power trace of the exponential operator against a diagonal
    localization: certified geometric tail when the exponent wins over
    the shell growth, certified divergence evidence otherwise.

    Divergence is declared only when the partial sums exceed ceiling and
    the per-shell terms grow geometrically over a sustained window; when
    neither certificate is reached the result is honest about knowing
    nothing (converged False, infinite tail bound, no certificate).
    """
    s = float(s)
    if s <= 0:
        raise NonPositiveS("zeta trace needs s > 0")
    tol = float(tol)
    if tol <= 0:
        raise ValidationError("tolerance must be positive")
    if localization is None:
        return _ZERO_TRACE
    _require_diagonal(weights, localization)
    lam = float(weights.system.expansion)
    log_lam = math.log(lam)
    enclosure = _adjacency_enclosure(weights.system.adjacency())
    rho = float(enclosure.high)
    ratio = rho * math.exp(-s * log_lam) * _SLOP
    floor = _shell_floor(localization)

    if ratio < 1.0 - 1e-12:
        # tail(N) = max|a| B lam^s ratio^(N+1) / (1 - ratio)
        log_c = (math.log(localization.max_abs()
                          * float(_growth_constant(weights, localization,
                                                   enclosure)))
                 + s * log_lam - math.log(1.0 - ratio))
        n = max(floor,
                math.ceil((math.log(tol) - log_c) / math.log(ratio)) - 1)
        bound = math.inf
        while n <= 20_000:
            log_tail = log_c + (n + 1) * math.log(ratio)
            if log_tail <= _EXP_CAP:
                bound = math.exp(log_tail) * _SLOP
                if bound <= tol:
                    break
            n += 1
        else:
            return TraceResult(math.nan, math.inf, False, 0,
                               certificate="tail bound never met the "
                                           "tolerance")
        series = count_series(weights, localization, n)
        value = 0.0
        for sh in series.shells:
            for cls in sh.classes:
                omega = float(sh.index - 1 + cls.offset)
                value += _series_term(cls.amplitude, cls.count,
                                      _zeta_log_weight(omega, s, log_lam))
        return TraceResult(value, bound, True, n)

    value = 0.0
    terms: dict[int, float] = {}
    n_used = 0
    for n_stop in (64, 128, 256, 512, 1024):
        n_used = max(n_stop, floor + 16)
        series = count_series(weights, localization, n_used)
        value = 0.0
        terms = {}
        for sh in series.shells:
            term = 0.0
            for cls in sh.classes:
                omega = float(sh.index - 1 + cls.offset)
                term += _series_term(cls.amplitude, cls.count,
                                     _zeta_log_weight(omega, s, log_lam))
            terms[sh.index] = term
            value += term
        if value > ceiling:
            break
    occupied = [n for n in sorted(terms) if terms[n] > 0.0 and n >= 1]
    window = occupied[-10:]
    growth = min((math.log(terms[n]) / n for n in window), default=-1.0)
    if value > ceiling and len(window) >= 5 and growth > 1e-9:
        cert = (f"diverges: partial sum {value:.6g} exceeds ceiling "
                f"{ceiling:.6g} and shell terms grow like "
                f"{math.exp(growth):.6g}**n over the last {len(window)} "
                f"occupied shells")
        return TraceResult(value, math.inf, False, n_used, True, cert)
    return TraceResult(value, math.inf, False, n_used,
                       certificate="neither convergence nor divergence "
                                   "was certified")


def spectral_dimension(weights: WeightSystem, localization: BasicFunction,
                       window: tuple[int, int]) -> tuple[float, float]:
    """Summability threshold estimate: the least-squares slope of
    ln c(n) over the shell window, divided by ln of the expansion rate.

    Returns (estimate, standard error). Every shell in the window must
    carry a certified positive count, otherwise the regression would be
    fit through holes.
    """
    n_min, n_max = int(window[0]), int(window[1])
    if n_max - n_min < 8:
        raise InsufficientWindow("shell window must span at least 8")
    series = count_series(weights, localization, n_max)
    points = []
    for n in range(n_min, n_max + 1):
        c = series.count(n)
        if c <= 0 or not series.certified_at(n):
            raise UncertifiedCounts(
                f"shell {n} has no certified positive count")
        points.append((float(n), math.log(c)))
    slope, _intercept, stderr = least_squares_line(points)
    log_lam = math.log(float(weights.system.expansion))
    return slope / log_lam, stderr / log_lam


def restricted_norm(weights: WeightSystem, localization: BasicFunction,
                    n: int) -> float:
    """Exact operator norm of a (1 + D^2)^(-1) restricted to shell n: the
    operator is diagonal there, so the norm is the largest value of
    |a(x,x)| / (1 + omega_s(x)^2) over the shell, zero when the shell is
    empty."""
    series = count_series(weights, localization, n)
    sh = series.shell_at(n)
    if sh is None:
        return 0.0
    best = 0.0
    for cls in sh.classes:
        omega = float(n - 1 + cls.offset)
        best = max(best, float(cls.amplitude) / (1.0 + omega * omega))
    return best


def standard_localization(weights: WeightSystem, depth: int = 0,
                          value: object = 1) -> BasicFunction:
    """The canonical diagonal localization: the indicator of the unstable
    ball whose coordinates n <= depth follow the first repelling orbit,
    entering on the earliest phase whose next vertex launches an
    attracting tail (so the localized space is nonempty whenever the
    graph allows it)."""
    if depth < 0:
        raise ValidationError("ball depth must be nonnegative")
    sysm = weights.system
    q = weights.repelling[0]
    chosen = 0
    for cand in range(q.period):
        u = sysm.edge_target[q.word[cand]]
        if any(sysm.edge_source[orb.word[i]] == u
               for orb in weights.attracting for i in range(orb.period)):
            chosen = cand
            break
    ball = Cylinder(sysm, q, (chosen + 1) % q.period, (), 0)
    if depth > 0:
        ball = Cylinder.unstable_ball(ball.completion(), depth)
    return BasicFunction.diagonal(ball, value)


def commutator_norm_bound(kind: DiracKind, weights: WeightSystem,
                          func: BasicFunction, sample_depth: int,
                          ) -> tuple[float, float]:
    """Observed and certified bounds for the commutator [D, pi(a)].

    The empirical half sweeps every heteroclinic basis vector within the
    enumeration window; the analytic half is (K+1) max|a| for the linear
    kind, with K the transport hop bound, and for the exponential kind
    the larger of the Lipschitz-transport estimate
    C_s * base^(K+1) * eps/2 * max|a| and the exact maximum over the
    finitely many tail-lock classes where the commutator can act.
    """
    if sample_depth < 1:
        raise ValidationError("sample depth must be at least 1")
    if func.system != weights.system:
        raise MismatchedShift("function acts on a different shift")
    sysm = weights.system

    def jump(x: HeteroclinicPoint) -> float:
        value = func.value_on(x)
        if value.is_zero:
            return 0.0
        y = func.basic_set.transport(x)
        if y.is_periodic or y.right not in weights.attracting:
            return 0.0
        try:
            delta = (dirac_eigenvalue(kind, weights, y)
                     - dirac_eigenvalue(kind, weights, x))
        except (NotInStableClass, PeriodicPointExcluded):
            return 0.0
        return abs(float(delta)) * math.sqrt(float(value.abs2()))

    empirical = 0.0
    for x in enumerate_heteroclinic(sysm, weights.attracting,
                                    weights.repelling, sample_depth):
        try:
            empirical = max(empirical, jump(x))
        except NotInStableClass:
            continue
    k_hop = hop_bound(weights, func)
    if kind.kind == "linear":
        analytic = (k_hop + 1) * func.max_abs()
    else:
        lipschitz = float(stable_lipschitz_constant(weights, func))
        transported = (lipschitz * float(kind.base) ** (k_hop + 1)
                       * float(weights.epsilon) / 2.0 * func.max_abs())
        exact = 0.0
        for x, _y in transport_jump_candidates(weights, func):
            exact = max(exact, jump(x))
        analytic = max(transported, exact)
    return empirical, analytic
