"""Stable weight cocycle for heteroclinic path spaces.

A weight system fixes an attracting and a repelling family of periodic
orbits and grades each heteroclinic point by how long its future takes to
lock onto an attracting tail. The grading comes in two flavours: a pure
shell indicator, integer valued, and a Lipschitz ramp that interpolates the
last unit through the distance to the stable set. Both satisfy the exact
shift relation

    omega_s(shift(x, 1)) == omega_s(x) - 1

which is what the Dirac layer needs from this module.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Callable, Iterator, Optional

from .errors import (
    MismatchedShift,
    NotInStableClass,
    OverlappingOrbitSets,
    PeriodicPointExcluded,
    ValidationError,
)
from .groupoid_rep import BasicFunction
from .sft_core import EdgeShift, HeteroclinicPoint, PeriodicOrbit, shift

WEIGHT_KINDS = ("indicator", "lipschitz-ramp")


@dataclass(frozen=True)
class WeightSystem:
    """Attracting and repelling orbit data plus the choice of bump profile.

    kind "indicator" grades by the bare entry shell; "lipschitz-ramp"
    replaces the unit jump at shell zero with min(1, slope * d(x, S)) where
    S is the stable set of the attracting family.
    """

    system: EdgeShift
    attracting: tuple[PeriodicOrbit, ...]
    repelling: tuple[PeriodicOrbit, ...]
    kind: str = "indicator"
    ramp_slope: Fraction = field(default=Fraction(1))

    def __post_init__(self) -> None:
        object.__setattr__(self, "attracting", tuple(self.attracting))
        object.__setattr__(self, "repelling", tuple(self.repelling))
        object.__setattr__(self, "ramp_slope", Fraction(self.ramp_slope))
        if not self.attracting or not self.repelling:
            raise ValidationError("both orbit families must be non-empty")
        for orb in self.attracting + self.repelling:
            if orb.system != self.system:
                raise ValidationError(
                    "orbit belongs to a different shift")
        if len(set(self.attracting)) != len(self.attracting):
            raise ValidationError("attracting orbits repeat")
        if len(set(self.repelling)) != len(self.repelling):
            raise ValidationError("repelling orbits repeat")
        if set(self.attracting) & set(self.repelling):
            raise OverlappingOrbitSets(
                "attracting and repelling families share an orbit")
        if self.kind not in WEIGHT_KINDS:
            raise ValidationError(
                f"unknown weight kind {self.kind!r}; "
                f"expected one of {WEIGHT_KINDS}")
        if self.ramp_slope <= 0:
            raise ValidationError("ramp slope must be positive")

    @property
    def epsilon(self) -> Fraction:
        """Bracket radius the bump profile is calibrated to."""
        return self.system.bracket_radius


def _check_point(weights: WeightSystem, x: HeteroclinicPoint) -> None:
    if x.system != weights.system:
        raise MismatchedShift("point belongs to a different shift")


def stable_set_contains(weights: WeightSystem, x: HeteroclinicPoint) -> bool:
    """Membership in the stable set: the future from time zero onward is
    already a tail of an attracting orbit."""
    _check_point(weights, x)
    return x.right in weights.attracting and x.core_end <= 0


def entry_index(weights: WeightSystem, x: HeteroclinicPoint) -> int:
    """The unique n with shift(x, n) outside the stable set but
    shift(x, n + 1) inside it."""
    _check_point(weights, x)
    if x.right not in weights.attracting:
        raise NotInStableClass(
            "future tail is not an attracting orbit")
    if x.is_periodic:
        raise PeriodicPointExcluded(
            "periodic points carry no entry index")
    return x.core_end - 1


def _best_shadow_agreement(weights: WeightSystem, first_edge: int,
                           coord_at: Callable[[int], int],
                           span_for: Callable[[PeriodicOrbit], int],
                           ) -> Optional[int]:
    """Longest run of agreement, from position one onward, between the
    given future and any attracting phase whose edge at position zero is
    first_edge. None when no phase aligns at zero.

    span_for must return a window length past which continued agreement
    would force agreement on the whole ray; hitting it is a logic error.
    """
    best = None
    for orb in weights.attracting:
        p = orb.period
        for ph in range(p):
            if orb.word[ph] != first_edge:
                continue
            span = span_for(orb)
            run = 0
            broke = False
            for i in range(1, span + 1):
                if coord_at(i) == orb.word[(ph + i) % p]:
                    run += 1
                else:
                    broke = True
                    break
            if not broke:
                raise AssertionError(
                    "agreement ran past the periodicity window")
            best = run if best is None else max(best, run)
    return best


def stable_distance(weights: WeightSystem,
                    x: HeteroclinicPoint) -> Fraction:
    """Distance from x to the stable set of the attracting family.

    Every stable point sharing x's past realises its distance through the
    first future disagreement, so the infimum is a maximum of agreement
    runs over aligned attracting phases; it is attained and rational.
    """
    _check_point(weights, x)
    if stable_set_contains(weights, x):
        return Fraction(0)
    tail_period = x.right.period
    horizon = max(x.core_end, 1)
    best = _best_shadow_agreement(
        weights, x.coord(0), x.coord,
        lambda orb: horizon + lcm(orb.period, tail_period) + 1)
    if best is None:
        return Fraction(1)
    return Fraction(1, 2 ** (1 + best))


def omega0(weights: WeightSystem, x: HeteroclinicPoint) -> Fraction:
    """Bump profile: zero on the stable set, one outside its unit shift
    preimage, graded on shell zero by the chosen kind."""
    _check_point(weights, x)
    if stable_set_contains(weights, x):
        return Fraction(0)
    if x.right in weights.attracting and x.core_end == 1:
        if weights.kind == "indicator":
            return Fraction(1)
        d = stable_distance(weights, x)
        return min(Fraction(1), weights.ramp_slope * d)
    return Fraction(1)


def omega_s(weights: WeightSystem, x: HeteroclinicPoint) -> Fraction:
    """Stable weight: the two-sided sum of bump values along the orbit.

    Closed form: shifting x onto shell zero leaves exactly the shell-zero
    bump value plus the number of shifts applied, so the sum collapses to
    entry + omega0 at the synchronised point. Exact over the rationals.
    """
    n = entry_index(weights, x)
    if weights.kind == "indicator":
        return Fraction(n + 1)
    return n + omega0(weights, shift(x, n))


def entry_ramp_value(weights: WeightSystem, last_edge: int,
                     orbit: PeriodicOrbit, phase: int) -> Fraction:
    """Shell-zero bump value of any point whose coordinate at zero is
    last_edge and whose future from one onward is the given attracting
    tail. The value depends only on this data, which is what lets the
    counting layer tabulate ramp weights instead of enumerating points."""
    if orbit.system != weights.system:
        raise ValidationError("orbit belongs to a different shift")
    if orbit not in weights.attracting:
        raise ValidationError("tail orbit is not attracting")
    sysm = weights.system
    if not 0 <= last_edge < sysm.n_edges:
        raise ValidationError(f"edge index {last_edge} out of range")
    p = orbit.period
    ph = phase % p
    if sysm.edge_target[last_edge] != sysm.edge_source[orbit.word[ph]]:
        raise ValidationError("entry edge does not compose with the tail")
    if last_edge == orbit.word[(ph - 1) % p]:
        raise ValidationError(
            "edge continues the tail backwards; the configuration lies "
            "in the stable set and has no entry")
    if weights.kind == "indicator":
        return Fraction(1)
    best = _best_shadow_agreement(
        weights, last_edge,
        lambda i: orbit.word[(ph + i - 1) % p],
        lambda orb: lcm(orb.period, p) + 1)
    d = Fraction(1) if best is None else Fraction(1, 2 ** (1 + best))
    return min(Fraction(1), weights.ramp_slope * d)


def transport_jump_candidates(weights: WeightSystem, func: BasicFunction,
                              ) -> Iterator[tuple[HeteroclinicPoint,
                                                  HeteroclinicPoint]]:
    """All points of func's support whose entry shell can move under the
    transport, paired with their images.

    Points entering at or after the splice keep their entry index, because
    the transport only rewrites coordinates below it and the shell-zero bump
    reads coordinates from the entry onward. Any exceptional point locks
    onto an attracting tail inside the pinned window of its support piece,
    so it is one of the finitely many grafts of an attracting phase just
    past that window. Yields every graft, exceptional or not.
    """
    bset = func.basic_set
    if bset.system != weights.system:
        raise MismatchedShift("function acts on a different shift")
    sysm = weights.system
    for piece, _value in func.pieces:
        for orb in weights.attracting:
            for ph in range(orb.period):
                if sysm.edge_source[orb.word[ph]] != piece.end_vertex:
                    continue
                try:
                    x = HeteroclinicPoint(
                        sysm, piece.base, piece.base_phase,
                        tuple(piece.word), piece.word_start, orb, ph)
                except ValidationError:
                    continue
                if x.is_periodic:
                    continue
                y = bset.transport(x)
                if y.is_periodic or y.right not in weights.attracting:
                    continue
                yield x, y


def hop_bound(weights: WeightSystem, func: BasicFunction) -> int:
    """Largest entry-shell jump the transport of func can produce, floored
    at one; each graft class jumps by one fixed amount and every other
    support point keeps its shell."""
    bound = 1
    for x, y in transport_jump_candidates(weights, func):
        bound = max(bound, abs(y.core_end - x.core_end))
    return bound


def stable_lipschitz_constant(weights: WeightSystem,
                              func: BasicFunction) -> Fraction:
    """Constant governing how the stable weight varies over the arrows of
    func: twice the hop bound, scaled by the ramp slope."""
    return Fraction(2) * hop_bound(weights, func) * weights.ramp_slope
