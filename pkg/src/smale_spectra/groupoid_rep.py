"""Stable groupoid of a shift of finite type and its regular representation.

Arrows of the stable groupoid connect paths that eventually agree in forward
time. A BasicSet is a compactly supported bisection: it grafts the past of
one center onto every path near the other center, keeping futures intact. A
BasicFunction is a locally constant function supported on one bisection,
stored as finitely many disjoint cylinder pieces with exact complex values.

The representation acts on finitely supported vectors over heteroclinic
points. Everything here is exact: values are Gaussian rationals, supports
are cylinders, and products of basic functions decompose into finitely many
basic functions again.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Optional, Union

from .errors import (
    EmptySupport,
    MismatchedShift,
    OutsideSupport,
    ValidationError,
)
from .sft_core import (
    Cylinder,
    EdgeShift,
    HeteroclinicPoint,
    bracket,
    forward_agreement_start,
    shift,
    stably_equivalent,
)


# --------------------------------------------------------------------------
# exact scalars


ScalarLike = Union["ExactComplex", int, float, complex, Fraction, tuple]


@dataclass(frozen=True)
class ExactComplex:
    """Complex number with rational real and imaginary parts."""

    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def of(cls, value: ScalarLike) -> "ExactComplex":
        if isinstance(value, ExactComplex):
            return value
        if isinstance(value, tuple):
            return cls(Fraction(value[0]), Fraction(value[1]))
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        return cls(Fraction(value))

    @classmethod
    def zero(cls) -> "ExactComplex":
        return cls(Fraction(0))

    @classmethod
    def one(cls) -> "ExactComplex":
        return cls(Fraction(1))

    @property
    def is_zero(self) -> bool:
        return not self.re and not self.im

    def conjugate(self) -> "ExactComplex":
        return ExactComplex(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __add__(self, other: ScalarLike) -> "ExactComplex":
        o = ExactComplex.of(other)
        return ExactComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self) -> "ExactComplex":
        return ExactComplex(-self.re, -self.im)

    def __sub__(self, other: ScalarLike) -> "ExactComplex":
        return self + (-ExactComplex.of(other))

    def __rsub__(self, other: ScalarLike) -> "ExactComplex":
        return ExactComplex.of(other) + (-self)

    def __mul__(self, other: ScalarLike) -> "ExactComplex":
        o = ExactComplex.of(other)
        return ExactComplex(self.re * o.re - self.im * o.im,
                            self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        if not self.im:
            return f"ExactComplex({self.re})"
        return f"ExactComplex({self.re}, {self.im})"


# --------------------------------------------------------------------------
# finitely supported vectors


class StateVector:
    """Finitely supported vector over heteroclinic points, with exact
    amplitudes. Treat instances as immutable."""

    __slots__ = ("_amp",)

    def __init__(self, amplitudes: Optional[
            Mapping[HeteroclinicPoint, ScalarLike]] = None) -> None:
        amp: dict[HeteroclinicPoint, ExactComplex] = {}
        if amplitudes:
            for point, value in amplitudes.items():
                v = ExactComplex.of(value)
                if not v.is_zero:
                    amp[point] = v
        self._amp = amp

    @classmethod
    def basis(cls, point: HeteroclinicPoint,
              value: ScalarLike = 1) -> "StateVector":
        return cls({point: value})

    def items(self) -> Iterable[tuple[HeteroclinicPoint, ExactComplex]]:
        return self._amp.items()

    @property
    def support(self) -> tuple[HeteroclinicPoint, ...]:
        return tuple(self._amp)

    @property
    def n_terms(self) -> int:
        return len(self._amp)

    def get(self, point: HeteroclinicPoint) -> ExactComplex:
        return self._amp.get(point, ExactComplex.zero())

    def __add__(self, other: "StateVector") -> "StateVector":
        out = dict(self._amp)
        for point, value in other._amp.items():
            out[point] = out.get(point, ExactComplex.zero()) + value
        return StateVector(out)

    def __sub__(self, other: "StateVector") -> "StateVector":
        return self + other.scale(-1)

    def scale(self, value: ScalarLike) -> "StateVector":
        c = ExactComplex.of(value)
        return StateVector({p: c * v for p, v in self._amp.items()})

    def inner(self, other: "StateVector") -> ExactComplex:
        """Hermitian pairing, conjugate-linear in the first slot."""
        total = ExactComplex.zero()
        for point, value in self._amp.items():
            o = other._amp.get(point)
            if o is not None:
                total = total + value.conjugate() * o
        return total

    def norm2(self) -> Fraction:
        return sum((v.abs2() for v in self._amp.values()), Fraction(0))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StateVector):
            return NotImplemented
        return self._amp == other._amp

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"StateVector({self.n_terms} terms)"


# --------------------------------------------------------------------------
# bisections


@dataclass(frozen=True)
class BasicSet:
    """Compactly supported bisection of the stable groupoid.

    The arrow set is {(transport(x), x) : x in the domain cylinder}, where
    transport grafts the image center's past onto x below the splice index
    and keeps x's future. Centers must be stably equivalent; the domain
    cylinder pins coordinates n <= depth around the domain center.
    """

    system: EdgeShift
    image_center: HeteroclinicPoint
    domain_center: HeteroclinicPoint
    depth: Optional[int] = None

    def __post_init__(self) -> None:
        v, w = self.image_center, self.domain_center
        if v.system != self.system or w.system != self.system:
            raise MismatchedShift("centers belong to a different shift")
        if not stably_equivalent(v, w):
            raise ValidationError("centers are not stably equivalent")
        j0 = forward_agreement_start(v, w)
        sync = 0 if j0 is None else max(j0 + 1, 0)
        object.__setattr__(self, "_sync", sync)
        if self.depth is None:
            object.__setattr__(self, "depth", max(sync, 1))
        # the splice must land where the centers agree, or the transport
        # would be undefined on part of the domain ball
        s = min(sync, self.depth)
        if v.coord(s) != w.coord(s):
            raise ValidationError(
                "pinned depth ends before the centers can be spliced")

    @property
    def sync_time(self) -> int:
        """Least n >= 0 from which the centers' pasts may be exchanged."""
        return self._sync  # type: ignore[attr-defined]

    @property
    def splice_index(self) -> int:
        # any splice between the agreement start and the pinned depth gives
        # the same transport; images under the shift force the lower choice
        return min(self.sync_time, self.depth)

    @property
    def domain_cylinder(self) -> Cylinder:
        return Cylinder.unstable_ball(self.domain_center, self.depth)

    @property
    def image_cylinder(self) -> Cylinder:
        return Cylinder.unstable_ball(self.image_center, self.depth)

    def inverse(self) -> "BasicSet":
        return BasicSet(self.system, self.domain_center,
                        self.image_center, self.depth)

    def transport(self, x: HeteroclinicPoint) -> HeteroclinicPoint:
        """The unique arrow target over x: image past below the splice,
        x's future above it."""
        if not self.domain_cylinder.contains(x):
            raise OutsideSupport("point is outside the domain cylinder")
        s = self.splice_index
        return shift(bracket(shift(x, s), shift(self.image_center, s)), -s)

    def transport_cylinder(self, piece: Cylinder) -> Cylinder:
        """Image of a sub-cylinder of the domain under the transport."""
        s = self.splice_index
        if piece.hi < s:
            raise ValidationError("piece is too shallow for this bisection")
        ball = Cylinder.unstable_ball(self.image_center, s - 1)
        word = ball.word + tuple(piece.pattern(n)
                                 for n in range(s, piece.hi + 1))
        return Cylinder(self.system, ball.base, ball.base_phase,
                        word, piece.hi)


# --------------------------------------------------------------------------
# basic functions and the representation


@dataclass(frozen=True)
class BasicFunction:
    """Locally constant function on one bisection: finitely many disjoint
    cylinder pieces inside the domain, each carrying one exact value. The
    function's value on the arrow over x is the value of the piece holding x,
    and zero elsewhere."""

    basic_set: BasicSet
    pieces: tuple[tuple[Cylinder, ExactComplex], ...]

    def __post_init__(self) -> None:
        dom = self.basic_set.domain_cylinder
        cleaned = []
        for piece, value in self.pieces:
            v = ExactComplex.of(value)
            if v.is_zero:
                continue
            if piece.system != self.basic_set.system:
                raise MismatchedShift("piece belongs to a different shift")
            if piece.intersect(dom) != piece:
                raise ValidationError("piece is not inside the domain cylinder")
            cleaned.append((piece, v))
        if not cleaned:
            raise EmptySupport("basic function has no nonzero piece")
        for i in range(len(cleaned)):
            for j in range(i + 1, len(cleaned)):
                if cleaned[i][0].intersect(cleaned[j][0]) is not None:
                    raise ValidationError("pieces overlap")
        cleaned.sort(key=lambda pv: pv[0].sort_key)
        object.__setattr__(self, "pieces", tuple(cleaned))

    @property
    def system(self) -> EdgeShift:
        return self.basic_set.system

    @classmethod
    def diagonal(cls, support: Cylinder,
                 value: ScalarLike = 1) -> "BasicFunction":
        """Multiplication operator: indicator of a cylinder on the unit
        space, scaled by value."""
        center = support.completion()
        bs = BasicSet(support.system, center, center, support.hi)
        return cls(bs, ((support, ExactComplex.of(value)),))

    @classmethod
    def splice(cls, image_center: HeteroclinicPoint,
               domain_center: HeteroclinicPoint,
               depth: Optional[int] = None,
               value: ScalarLike = 1) -> "BasicFunction":
        """The full indicator of one bisection."""
        bs = BasicSet(image_center.system, image_center, domain_center, depth)
        return cls(bs, ((bs.domain_cylinder, ExactComplex.of(value)),))

    def value_on(self, x: HeteroclinicPoint) -> ExactComplex:
        """Value on the arrow over domain point x (zero off the pieces)."""
        for piece, value in self.pieces:
            if piece.contains(x):
                return value
        return ExactComplex.zero()

    def max_abs2(self) -> Fraction:
        return max(v.abs2() for _, v in self.pieces)

    def max_abs(self) -> float:
        return float(self.max_abs2()) ** 0.5

    def apply(self, xi: StateVector) -> StateVector:
        """The regular representation: sends the basis vector at x to the
        piece value times the basis vector at transport(x)."""
        out: dict[HeteroclinicPoint, ExactComplex] = {}
        for x, amp in xi.items():
            value = self.value_on(x)
            if value.is_zero:
                continue
            y = self.basic_set.transport(x)
            prev = out.get(y)
            out[y] = value * amp if prev is None else prev + value * amp
        return StateVector(out)


def adjoint(f: BasicFunction) -> BasicFunction:
    """The involution: reverse every arrow and conjugate the values."""
    bs = f.basic_set
    pieces = tuple((bs.transport_cylinder(piece), value.conjugate())
                   for piece, value in f.pieces)
    return BasicFunction(bs.inverse(), pieces)


def alpha(f: BasicFunction, k: int = 1) -> BasicFunction:
    """The shift automorphism: conjugates the bisection by the k-fold shift."""
    bs = f.basic_set
    moved = BasicSet(bs.system, shift(bs.image_center, k),
                     shift(bs.domain_center, k), bs.depth - k)
    pieces = tuple((piece.shifted(k), value) for piece, value in f.pieces)
    return BasicFunction(moved, pieces)


def unitary_shift(xi: StateVector, k: int = 1) -> StateVector:
    """The shift unitary on vectors: basis point x goes to its k-fold shift."""
    return StateVector({shift(x, k): v for x, v in xi.items()})


def convolve(f: BasicFunction, g: BasicFunction) -> tuple[BasicFunction, ...]:
    """Groupoid convolution f * g, decomposed into basic functions.

    Each compatible pair of pieces contributes one single-piece factor: the
    domain-side pullback of f's piece through g's transport, carrying the
    product value. Incompatible pairs contribute nothing; the algebraic
    product is the sum of the returned functions.
    """
    if f.system != g.system:
        raise MismatchedShift("functions belong to different shifts")
    system = f.system
    gset = g.basic_set
    s = gset.splice_index
    vg = gset.image_center
    out = []
    for cf, a in f.pieces:
        for cg, b in g.pieces:
            # below g's splice the composite constraint reads on vg alone
            top = min(cf.hi, s - 1)
            span = lcm(vg.left.period, cf.base.period)
            lo = min(vg.core_start, cf.word_start, top) - span
            if not all(vg.coord(n) == cf.pattern(n)
                       for n in range(lo, top + 1)):
                continue
            merged = cg
            if cf.hi >= s:
                # overlap region pins x through both pieces
                if not all(cg.pattern(n) == cf.pattern(n)
                           for n in range(s, min(cg.hi, cf.hi) + 1)):
                    continue
                if cf.hi > cg.hi:
                    seam_ok = (system.edge_target[cg.pattern(cg.hi)]
                               == system.edge_source[cf.pattern(cg.hi + 1)])
                    if not seam_ok:
                        continue
                    word = cg.word + tuple(cf.pattern(n)
                                           for n in range(cg.hi + 1, cf.hi + 1))
                    merged = Cylinder(system, cg.base, cg.base_phase,
                                      word, cf.hi)
            w2 = merged.completion()
            v2 = f.basic_set.transport(gset.transport(w2))
            composite = BasicSet(system, v2, w2, merged.hi)
            out.append(BasicFunction(composite, ((merged, a * b),)))
    return tuple(out)


def apply_all(fs: Iterable[BasicFunction], xi: StateVector) -> StateVector:
    """Apply the sum of basic functions to a vector."""
    total = StateVector()
    for f in fs:
        total = total + f.apply(xi)
    return total
