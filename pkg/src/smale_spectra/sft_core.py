"""Shifts of finite type and their heteroclinic structure.

An EdgeShift is the space of bi-infinite edge paths through a finite directed
graph, acted on by the left shift. The metric is dyadic: two paths at
distance 2^-r first disagree at absolute position r, so the shift expands
unstable (past) directions by 2 and contracts stable (future) directions
by 2, and the splice bracket exists whenever two paths share the edge at
position zero.

Points that are forward asymptotic to one periodic orbit and backward
asymptotic to another admit a finite description: a periodic left tail, an
explicit core word, and a periodic right tail. HeteroclinicPoint stores that
description in a unique normal form (tails pushed maximally inward, fully
periodic sequences recognised), which makes equality, hashing, the metric
and the bracket all exactly decidable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterator, Optional, Sequence, Union

from .errors import BracketUndefined, MismatchedShift, OutsideSupport, ValidationError


# --------------------------------------------------------------------------
# the ambient shift


@dataclass(frozen=True, repr=False)
class EdgeShift:
    """Bi-infinite edge paths in a finite directed graph, under the left
    shift. Vertices and edges carry names for rendering; all arithmetic uses
    integer indices."""

    vertex_names: tuple[str, ...]
    edge_names: tuple[str, ...]
    edge_source: tuple[int, ...]
    edge_target: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertex_names", tuple(self.vertex_names))
        object.__setattr__(self, "edge_names", tuple(self.edge_names))
        object.__setattr__(self, "edge_source", tuple(self.edge_source))
        object.__setattr__(self, "edge_target", tuple(self.edge_target))
        nv, ne = len(self.vertex_names), len(self.edge_names)
        if ne == 0:
            raise ValidationError("shift needs at least one edge")
        if len(set(self.vertex_names)) != nv or not all(self.vertex_names):
            raise ValidationError("vertex names must be unique and non-empty")
        if len(set(self.edge_names)) != ne or not all(self.edge_names):
            raise ValidationError("edge names must be unique and non-empty")
        if len(self.edge_source) != ne or len(self.edge_target) != ne:
            raise ValidationError("edge endpoint arrays must match edge count")
        for v in self.edge_source + self.edge_target:
            if not 0 <= v < nv:
                raise ValidationError(f"vertex index {v} out of range")
        outs: list[list[int]] = [[] for _ in range(nv)]
        ins: list[list[int]] = [[] for _ in range(nv)]
        for e in range(ne):
            outs[self.edge_source[e]].append(e)
            ins[self.edge_target[e]].append(e)
        for v in range(nv):
            if not outs[v]:
                raise ValidationError(
                    f"vertex {self.vertex_names[v]!r} has no outgoing edge")
            if not ins[v]:
                raise ValidationError(
                    f"vertex {self.vertex_names[v]!r} has no incoming edge")
        object.__setattr__(self, "_outs", tuple(tuple(o) for o in outs))
        object.__setattr__(self, "_ins", tuple(tuple(i) for i in ins))

    # -- structure ---------------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_names)

    @property
    def n_edges(self) -> int:
        return len(self.edge_names)

    @property
    def expansion(self) -> Fraction:
        """Hyperbolicity constant of the dyadic metric."""
        return Fraction(2)

    @property
    def bracket_radius(self) -> Fraction:
        """Largest distance at which the splice bracket is defined."""
        return Fraction(1)

    def out_edges(self, vertex: int) -> tuple[int, ...]:
        return self._outs[vertex]  # type: ignore[attr-defined]

    def in_edges(self, vertex: int) -> tuple[int, ...]:
        return self._ins[vertex]  # type: ignore[attr-defined]

    def edge_index(self, name: str) -> int:
        try:
            return self.edge_names.index(name)
        except ValueError:
            raise ValidationError(f"unknown edge name {name!r}") from None

    def vertex_index(self, name: str) -> int:
        try:
            return self.vertex_names.index(name)
        except ValueError:
            raise ValidationError(f"unknown vertex name {name!r}") from None

    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Vertex adjacency counts: entry (u, v) is the number of edges
        from u to v."""
        rows = [[0] * self.n_vertices for _ in range(self.n_vertices)]
        for e in range(self.n_edges):
            rows[self.edge_source[e]][self.edge_target[e]] += 1
        return tuple(tuple(r) for r in rows)

    def is_irreducible(self) -> bool:
        """True when every vertex reaches every vertex along edges."""
        for start in range(self.n_vertices):
            reached = set()
            frontier = [self.edge_target[e] for e in self.out_edges(start)]
            while frontier:
                v = frontier.pop()
                if v in reached:
                    continue
                reached.add(v)
                frontier.extend(self.edge_target[e] for e in self.out_edges(v))
            if len(reached) != self.n_vertices:
                return False
        return True

    # -- construction ------------------------------------------------------

    @classmethod
    def from_edges(cls, vertices: Sequence[str],
                   edges: Sequence[tuple[str, str, str]]) -> "EdgeShift":
        """Build from explicit (edge name, source name, target name) rows."""
        vnames = tuple(vertices)
        index = {v: i for i, v in enumerate(vnames)}
        if len(index) != len(vnames):
            raise ValidationError("vertex names must be unique and non-empty")
        names, srcs, tgts = [], [], []
        for name, s, t in edges:
            if s not in index or t not in index:
                raise ValidationError(f"edge {name!r} references unknown vertex")
            names.append(name)
            srcs.append(index[s])
            tgts.append(index[t])
        return cls(vnames, tuple(names), tuple(srcs), tuple(tgts))

    @classmethod
    def from_adjacency(cls, matrix: Sequence[Sequence[int]],
                       vertex_names: Optional[Sequence[str]] = None) -> "EdgeShift":
        n = len(matrix)
        if any(len(row) != n for row in matrix):
            raise ValidationError("adjacency matrix must be square")
        vnames = tuple(vertex_names) if vertex_names else tuple(
            f"v{i}" for i in range(n))
        if len(vnames) != n:
            raise ValidationError("vertex name count must match matrix size")
        names, srcs, tgts = [], [], []
        for u in range(n):
            for v in range(n):
                m = matrix[u][v]
                if m < 0:
                    raise ValidationError("adjacency entries must be >= 0")
                for j in range(m):
                    label = f"{vnames[u]}{vnames[v]}"
                    names.append(label if m == 1 else f"{label}.{j}")
                    srcs.append(u)
                    tgts.append(v)
        return cls(vnames, tuple(names), tuple(srcs), tuple(tgts))

    def __repr__(self) -> str:
        return (f"EdgeShift({self.n_vertices} vertices, "
                f"{self.n_edges} edges)")


def full_shift(n: int) -> EdgeShift:
    """Full shift on n symbols: one vertex, n loops named by digits."""
    if n < 1:
        raise ValidationError("full shift needs at least one symbol")
    return EdgeShift(("v",), tuple(str(i) for i in range(n)),
                     (0,) * n, (0,) * n)


def golden_mean_shift() -> EdgeShift:
    """The golden mean shift: loops at vertex 0 plus the 2-cycle 0 -> 1 -> 0."""
    return EdgeShift.from_edges(
        ("0", "1"), (("a", "0", "0"), ("b", "0", "1"), ("c", "1", "0")))


# --------------------------------------------------------------------------
# periodic orbits


def _rotation_index(word: tuple[int, ...], raw: tuple[int, ...]) -> int:
    """Offset r with word[(r + i) % p] == raw[i] for all i."""
    p = len(word)
    for r in range(p):
        if all(word[(r + i) % p] == raw[i] for i in range(p)):
            return r
    raise AssertionError("raw word is not a rotation of the canonical word")


@dataclass(frozen=True, repr=False)
class PeriodicOrbit:
    """A primitive cycle of edges, stored in its lexicographically least
    rotation. Phase arguments throughout the package index this canonical
    word."""

    system: EdgeShift
    word: tuple[int, ...]

    def __post_init__(self) -> None:
        word = tuple(self.word)
        if not word:
            raise ValidationError("orbit word is empty")
        sysm = self.system
        for e in word:
            if not 0 <= e < sysm.n_edges:
                raise ValidationError(f"edge index {e} out of range")
        p = len(word)
        for i in range(p):
            if sysm.edge_target[word[i]] != sysm.edge_source[word[(i + 1) % p]]:
                raise ValidationError(
                    "orbit word does not close into a cycle: "
                    + ".".join(sysm.edge_names[e] for e in word))
        for d in range(1, p):
            if p % d == 0 and word == word[:d] * (p // d):
                raise ValidationError("orbit word is not primitive")
        object.__setattr__(
            self, "word", min(word[i:] + word[:i] for i in range(p)))

    @property
    def period(self) -> int:
        return len(self.word)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self.system.edge_names[e] for e in self.word)

    def point(self, phase: int = 0) -> "HeteroclinicPoint":
        """The periodic path whose edge at position n is
        word[(phase + n) % period]."""
        ph = phase % self.period
        return HeteroclinicPoint(self.system, self, ph, (), 0, self, ph)

    @classmethod
    def from_edge_names(cls, system: EdgeShift,
                        names: Sequence[str]) -> "PeriodicOrbit":
        return cls(system, tuple(system.edge_index(n) for n in names))

    def __repr__(self) -> str:
        return f"PeriodicOrbit({'.'.join(self.names)})"


# --------------------------------------------------------------------------
# heteroclinic points


@dataclass(frozen=True, repr=False)
class HeteroclinicPoint:
    """A bi-infinite edge path with periodic tails on both sides.

    Coordinates follow the left tail below core_start, the explicit core on
    [core_start, core_start + len(core)), and the right tail from the core
    end on. Phases are anchored at the core boundaries: left_phase is the
    left word position at core_start, right_phase the right word position at
    the core end.

    Construction normalises to the unique minimal form: tail-extending core
    edges are absorbed, a fully periodic path is stored with empty core at
    position 0, and otherwise the core end is exactly the first position
    from which the path is right-periodic.
    """

    system: EdgeShift
    left: PeriodicOrbit
    left_phase: int
    core: tuple[int, ...]
    core_start: int
    right: PeriodicOrbit
    right_phase: int

    def __post_init__(self) -> None:
        if self.left.system != self.system or self.right.system != self.system:
            raise MismatchedShift("orbit tails belong to a different shift")
        core = tuple(self.core)
        lw, rw = self.left.word, self.right.word
        pl, pr = len(lw), len(rw)
        lp, rp = self.left_phase % pl, self.right_phase % pr
        cs = self.core_start
        sysm = self.system

        first = core[0] if core else rw[rp]
        if sysm.edge_target[lw[(lp - 1) % pl]] != sysm.edge_source[first]:
            raise ValidationError("left tail does not compose with the core")
        for i in range(len(core) - 1):
            if sysm.edge_target[core[i]] != sysm.edge_source[core[i + 1]]:
                raise ValidationError("core edges do not compose")
        if core and sysm.edge_target[core[-1]] != sysm.edge_source[rw[rp]]:
            raise ValidationError("core does not compose with the right tail")

        # push tails maximally inward
        while core and core[-1] == rw[(rp - 1) % pr]:
            core = core[:-1]
            rp = (rp - 1) % pr
        while core and core[0] == lw[lp % pl]:
            core = core[1:]
            lp = (lp + 1) % pl
            cs += 1

        left = self.left
        if not core:
            span = lcm(pl, pr)
            if all(lw[(lp - 1 - j) % pl] == rw[(rp - 1 - j) % pr]
                   for j in range(span)):
                # one periodic path: both tails describe it
                assert self.left == self.right
                left = self.right
                lp = rp = (rp - cs) % pr
                cs = 0
            else:
                steps = 0
                while lw[(lp - 1) % pl] == rw[(rp - 1) % pr]:
                    cs -= 1
                    lp = (lp - 1) % pl
                    rp = (rp - 1) % pr
                    steps += 1
                    assert steps <= span

        object.__setattr__(self, "left", left)
        object.__setattr__(self, "left_phase", lp)
        object.__setattr__(self, "core", core)
        object.__setattr__(self, "core_start", cs)
        object.__setattr__(self, "right_phase", rp)

    # -- coordinates ---------------------------------------------------------

    @property
    def core_end(self) -> int:
        return self.core_start + len(self.core)

    def coord(self, n: int) -> int:
        """Edge index at position n."""
        if n >= self.core_end:
            return self.right.word[
                (self.right_phase + n - self.core_end) % self.right.period]
        if n >= self.core_start:
            return self.core[n - self.core_start]
        return self.left.word[
            (self.left_phase + n - self.core_start) % self.left.period]

    @property
    def is_periodic(self) -> bool:
        return (not self.core and self.left == self.right
                and self.left_phase == self.right_phase)

    @property
    def sort_key(self) -> tuple:
        return (self.core_start, self.core, self.left.word, self.left_phase,
                self.right.word, self.right_phase)

    def __repr__(self) -> str:
        names = self.system.edge_names
        lpart = ".".join(names[e] for e in self.left.word)
        cpart = ".".join(names[e] for e in self.core) or "~"
        rpart = ".".join(names[e] for e in self.right.word)
        return (f"<({lpart})^{self.left_phase} {cpart}@{self.core_start} "
                f"({rpart})^{self.right_phase}>")


# --------------------------------------------------------------------------
# point operations


def _same_system(x: HeteroclinicPoint, y: HeteroclinicPoint) -> None:
    if x.system != y.system:
        raise MismatchedShift("points belong to different shifts")


def metric(x: HeteroclinicPoint, y: HeteroclinicPoint) -> Fraction:
    """Dyadic distance 2^-r, r the least |n| at which the paths differ."""
    _same_system(x, y)
    if x == y:
        return Fraction(0)
    bound = (max(abs(x.core_start), abs(x.core_end),
                 abs(y.core_start), abs(y.core_end))
             + lcm(x.left.period, y.left.period)
             + lcm(x.right.period, y.right.period) + 2)
    for r in range(bound + 1):
        if x.coord(r) != y.coord(r) or x.coord(-r) != y.coord(-r):
            return Fraction(1, 2 ** r)
    raise AssertionError("distinct points agree beyond the decision bound")


def shift(x: HeteroclinicPoint, k: int = 1) -> HeteroclinicPoint:
    """k-fold left shift: the result's coordinate n is x's coordinate n + k."""
    return HeteroclinicPoint(x.system, x.left, x.left_phase, x.core,
                             x.core_start - k, x.right, x.right_phase)


def bracket(x: HeteroclinicPoint, y: HeteroclinicPoint) -> HeteroclinicPoint:
    """Splice: x's future (n >= 0) joined to y's past (n <= 0).

    Defined exactly when the two paths share the edge at position 0, i.e.
    their distance is at most the bracket radius with equality allowed.
    """
    _same_system(x, y)
    if x.coord(0) != y.coord(0):
        raise BracketUndefined(
            "paths disagree at position 0: "
            f"{x.system.edge_names[x.coord(0)]} vs "
            f"{x.system.edge_names[y.coord(0)]}")
    lo = min(0, y.core_start)
    hi = max(0, x.core_end)
    core = (tuple(y.coord(n) for n in range(lo, 0))
            + tuple(x.coord(n) for n in range(0, hi)))
    lp = (y.left_phase + lo - y.core_start) % y.left.period
    rp = (x.right_phase + hi - x.core_end) % x.right.period
    return HeteroclinicPoint(x.system, y.left, lp, core, lo, x.right, rp)


def stably_equivalent(x: HeteroclinicPoint, y: HeteroclinicPoint) -> bool:
    """True when the paths eventually agree in forward time."""
    _same_system(x, y)
    return (x.right == y.right
            and (x.right_phase - x.core_end) % x.right.period
            == (y.right_phase - y.core_end) % y.right.period)


def unstably_equivalent(x: HeteroclinicPoint, y: HeteroclinicPoint) -> bool:
    """True when the paths eventually agree in backward time."""
    _same_system(x, y)
    return (x.left == y.left
            and (x.left_phase - x.core_start) % x.left.period
            == (y.left_phase - y.core_start) % y.left.period)


def forward_agreement_start(x: HeteroclinicPoint,
                            y: HeteroclinicPoint) -> Optional[int]:
    """Least N with x.coord(n) == y.coord(n) for all n >= N.

    Requires stably equivalent points; returns None when x == y.
    """
    _same_system(x, y)
    if not stably_equivalent(x, y):
        raise ValidationError("points are not stably equivalent")
    if x == y:
        return None
    top = max(x.core_end, y.core_end)
    floor = (min(x.core_start, y.core_start)
             - lcm(x.left.period, y.left.period) - 1)
    for n in range(top - 1, floor - 1, -1):
        if x.coord(n) != y.coord(n):
            return n + 1
    raise AssertionError("distinct stably equivalent points always disagree")


def backward_agreement_end(x: HeteroclinicPoint,
                           y: HeteroclinicPoint) -> Optional[int]:
    """Greatest N with x.coord(n) == y.coord(n) for all n <= N.

    Requires unstably equivalent points; returns None when x == y.
    """
    _same_system(x, y)
    if not unstably_equivalent(x, y):
        raise ValidationError("points are not unstably equivalent")
    if x == y:
        return None
    bottom = min(x.core_start, y.core_start)
    ceil = (max(x.core_end, y.core_end)
            + lcm(x.right.period, y.right.period) + 1)
    for n in range(bottom, ceil + 1):
        if x.coord(n) != y.coord(n):
            return n - 1
    raise AssertionError("distinct unstably equivalent points always disagree")


# --------------------------------------------------------------------------
# past cylinders


@dataclass(frozen=True, repr=False)
class Cylinder:
    """Clopen set pinning every coordinate n <= hi: a local unstable
    neighbourhood of radius 2^-hi.

    The pinned pattern is an eventually periodic past: the base orbit below
    the explicit word, the word ending at position hi. base_phase anchors
    the base word at the word start (position hi - len(word) + 1)."""

    system: EdgeShift
    base: PeriodicOrbit
    base_phase: int
    word: tuple[int, ...]
    hi: int

    def __post_init__(self) -> None:
        if self.base.system != self.system:
            raise MismatchedShift("cylinder base belongs to a different shift")
        word = tuple(self.word)
        bw = self.base.word
        p = len(bw)
        phase = self.base_phase % p
        sysm = self.system
        if word:
            if sysm.edge_target[bw[(phase - 1) % p]] != sysm.edge_source[word[0]]:
                raise ValidationError("base tail does not compose with the word")
            for i in range(len(word) - 1):
                if sysm.edge_target[word[i]] != sysm.edge_source[word[i + 1]]:
                    raise ValidationError("cylinder word does not compose")
        while word and word[0] == bw[phase % p]:
            word = word[1:]
            phase = (phase + 1) % p
        object.__setattr__(self, "word", word)
        object.__setattr__(self, "base_phase", phase)

    @property
    def word_start(self) -> int:
        return self.hi - len(self.word) + 1

    def pattern(self, n: int) -> int:
        """Pinned edge index at position n <= hi."""
        if n > self.hi:
            raise OutsideSupport(f"coordinate {n} above cylinder top {self.hi}")
        ws = self.word_start
        if n >= ws:
            return self.word[n - ws]
        return self.base.word[(self.base_phase + n - ws) % self.base.period]

    @property
    def end_vertex(self) -> int:
        return self.system.edge_target[self.pattern(self.hi)]

    @property
    def sort_key(self) -> tuple:
        return (self.hi, self.word, self.base.word, self.base_phase)

    def contains(self, x: HeteroclinicPoint) -> bool:
        if x.system != self.system:
            raise MismatchedShift("point belongs to a different shift")
        lo = (min(x.core_start, self.word_start)
              - lcm(x.left.period, self.base.period))
        return all(x.coord(n) == self.pattern(n)
                   for n in range(lo, self.hi + 1))

    def intersect(self, other: "Cylinder") -> Optional["Cylinder"]:
        """The intersection cylinder, or None when the sets are disjoint."""
        if other.system != self.system:
            raise MismatchedShift("cylinders belong to different shifts")
        a, b = (self, other) if self.hi <= other.hi else (other, self)
        lo = (min(a.word_start, b.word_start)
              - lcm(a.base.period, b.base.period))
        if all(a.pattern(n) == b.pattern(n) for n in range(lo, a.hi + 1)):
            return b
        return None

    def shifted(self, k: int) -> "Cylinder":
        """Image under the k-fold left shift: pins n <= hi - k."""
        return Cylinder(self.system, self.base, self.base_phase,
                        self.word, self.hi - k)

    def completion(self) -> HeteroclinicPoint:
        """A canonical member: continue past hi along least-index edges
        until a vertex repeats, then cycle forever."""
        v = self.end_vertex
        seen = {v: 0}
        walk: list[int] = []
        while True:
            e = min(self.system.out_edges(v))
            walk.append(e)
            v = self.system.edge_target[e]
            if v in seen:
                j0 = seen[v]
                break
            seen[v] = len(walk)
        cycle = tuple(walk[j0:])
        orbit = PeriodicOrbit(self.system, cycle)
        rp = _rotation_index(orbit.word, cycle)
        return HeteroclinicPoint(
            self.system, self.base, self.base_phase,
            self.word + tuple(walk[:j0]), self.word_start, orbit, rp)

    @classmethod
    def unstable_ball(cls, x: HeteroclinicPoint, hi: int) -> "Cylinder":
        """The set of paths agreeing with x on every n <= hi."""
        if hi >= x.core_start:
            word = tuple(x.coord(n) for n in range(x.core_start, hi + 1))
            phase = x.left_phase
        else:
            word = ()
            phase = (x.left_phase + (hi + 1) - x.core_start) % x.left.period
        return cls(x.system, x.left, phase, word, hi)

    def __repr__(self) -> str:
        names = self.system.edge_names
        wpart = ".".join(names[e] for e in self.word) or "~"
        bpart = ".".join(names[e] for e in self.base.word)
        return f"Cylinder(({bpart})^{self.base_phase} {wpart} <= {self.hi})"


# --------------------------------------------------------------------------
# enumeration


OrbitSet = Union[PeriodicOrbit, Sequence[PeriodicOrbit]]


def _as_orbit_tuple(orbits: OrbitSet) -> tuple[PeriodicOrbit, ...]:
    if isinstance(orbits, PeriodicOrbit):
        return (orbits,)
    return tuple(orbits)


def _paths(system: EdgeShift, vertex: int,
           length: int) -> Iterator[tuple[int, ...]]:
    if length == 0:
        yield ()
        return
    for e in system.out_edges(vertex):
        if length == 1:
            yield (e,)
        else:
            for rest in _paths(system, system.edge_target[e], length - 1):
                yield (e,) + rest


def enumerate_heteroclinic(system: EdgeShift, attracting: OrbitSet,
                           repelling: OrbitSet,
                           max_core: int) -> tuple[HeteroclinicPoint, ...]:
    """All paths that run from the repelling orbits to the attracting ones
    and are tail-periodic outside the window [-max_core, max_core].

    Every valid combination of tail phases and window word yields a distinct
    path, so the result needs no deduplication; it is sorted by the points'
    canonical sort key.
    """
    if max_core < 0:
        raise ValidationError("enumeration window must be >= 0")
    att = _as_orbit_tuple(attracting)
    rep = _as_orbit_tuple(repelling)
    for orb in att + rep:
        if orb.system != system:
            raise MismatchedShift("orbit belongs to a different shift")
    width = 2 * max_core + 1
    out = []
    for q in rep:
        for qp in range(q.period):
            start = system.edge_target[q.word[(qp - 1) % q.period]]
            for word in _paths(system, start, width):
                end = system.edge_target[word[-1]]
                for p in att:
                    for pp in range(p.period):
                        if system.edge_source[p.word[pp]] == end:
                            out.append(HeteroclinicPoint(
                                system, q, qp, word, -max_core, p, pp))
    out.sort(key=lambda t: t.sort_key)
    return tuple(out)
