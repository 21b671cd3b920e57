"""Core layer tests.

Oracles here are independent of the implementation: raw coordinate formulas,
window scans, and brute-force path enumeration are coded inline and the
package's answers are compared against them.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import lcm

import pytest
from hypothesis import given, settings, strategies as st

from smale_spectra.errors import (
    BracketUndefined,
    MismatchedShift,
    ValidationError,
)
from smale_spectra.sft_core import (
    Cylinder,
    EdgeShift,
    HeteroclinicPoint,
    PeriodicOrbit,
    backward_agreement_end,
    bracket,
    enumerate_heteroclinic,
    forward_agreement_start,
    full_shift,
    golden_mean_shift,
    metric,
    shift,
    stably_equivalent,
    unstably_equivalent,
)

FULL2 = full_shift(2)
FULL3 = full_shift(3)
GOLDEN = golden_mean_shift()
SYSTEMS = (FULL2, FULL3, GOLDEN)


# ---------------------------------------------------------------- oracles


def raw_coord(left_word, left_phase, core, core_start, right_word, right_phase, n):
    """Defining formula for a spliced two-tailed sequence, written from
    scratch: left periodic tail below core_start, explicit core, right
    periodic tail from core_start + len(core) on."""
    core_end = core_start + len(core)
    if core_start <= n < core_end:
        return core[n - core_start]
    if n >= core_end:
        return right_word[(right_phase + n - core_end) % len(right_word)]
    return left_word[(left_phase + n - core_start) % len(left_word)]


def point_coord_window(x, lo, hi):
    return tuple(x.coord(n) for n in range(lo, hi + 1))


def oracle_metric(x, y, probe=64):
    if point_coord_window(x, -probe, probe) == point_coord_window(y, -probe, probe):
        return Fraction(0)
    for r in range(probe + 1):
        if x.coord(r) != y.coord(r) or x.coord(-r) != y.coord(-r):
            return Fraction(1, 2**r)
    raise AssertionError("probe window too small")


def oracle_stably_equivalent(x, y):
    n0 = max(x.core_start + len(x.core), y.core_start + len(y.core))
    span = lcm(x.right.period, y.right.period)
    return all(x.coord(n) == y.coord(n) for n in range(n0, n0 + span))


def oracle_unstably_equivalent(x, y):
    n0 = min(x.core_start, y.core_start)
    span = lcm(x.left.period, y.left.period)
    return all(x.coord(n) == y.coord(n) for n in range(n0 - span, n0))


def primitive_cycles(system, max_len=4):
    """All primitive cycles up to max_len, by brute path enumeration."""
    found = set()
    for length in range(1, max_len + 1):
        for edges in itertools.product(range(system.n_edges), repeat=length):
            ok = all(
                system.edge_target[edges[i]] == system.edge_source[edges[(i + 1) % length]]
                for i in range(length)
            )
            if not ok:
                continue
            if any(length % d == 0 and edges == edges[:d] * (length // d)
                   for d in range(1, length)):
                continue
            found.add(min(edges[i:] + edges[:i] for i in range(length)))
    return tuple(PeriodicOrbit(system, w) for w in sorted(found))


ORBITS = {s: primitive_cycles(s) for s in SYSTEMS}


# ------------------------------------------------------------- strategies


@st.composite
def points(draw, system=None):
    sys_ = system or draw(st.sampled_from(SYSTEMS))
    left = draw(st.sampled_from(ORBITS[sys_]))
    left_phase = draw(st.integers(0, left.period - 1))
    core_start = draw(st.integers(-3, 3))
    core_len = draw(st.integers(0, 4))
    vertex = sys_.edge_target[left.word[(left_phase - 1) % left.period]]
    core = []
    for _ in range(core_len):
        options = sys_.out_edges(vertex)
        e = options[draw(st.integers(0, len(options) - 1))]
        core.append(e)
        vertex = sys_.edge_target[e]
    pairs = [
        (orb, ph)
        for orb in ORBITS[sys_]
        for ph in range(orb.period)
        if sys_.edge_source[orb.word[ph]] == vertex
    ]
    right, right_phase = draw(st.sampled_from(pairs))
    return HeteroclinicPoint(
        system=sys_, left=left, left_phase=left_phase,
        core=tuple(core), core_start=core_start,
        right=right, right_phase=right_phase,
    )


@st.composite
def point_pairs(draw):
    sys_ = draw(st.sampled_from(SYSTEMS))
    return draw(points(system=sys_)), draw(points(system=sys_))


# ------------------------------------------------------------ EdgeShift


def test_edge_shift_basic_shape():
    assert FULL2.n_vertices == 1
    assert FULL2.n_edges == 2
    assert FULL2.edge_names == ("0", "1")
    assert GOLDEN.n_vertices == 2
    assert GOLDEN.edge_names == ("a", "b", "c")
    assert GOLDEN.adjacency() == ((1, 1), (1, 0))
    assert FULL3.adjacency() == ((3,),)


def test_edge_shift_constants():
    assert FULL2.expansion == Fraction(2)
    assert FULL2.bracket_radius == Fraction(1)


def test_edge_shift_degrees_and_irreducibility():
    assert GOLDEN.out_edges(0) == (0, 1)
    assert GOLDEN.out_edges(1) == (2,)
    assert GOLDEN.in_edges(1) == (1,)
    assert all(s.is_irreducible() for s in SYSTEMS)
    two_loops = EdgeShift.from_adjacency(((1, 0), (0, 1)))
    assert not two_loops.is_irreducible()


def test_edge_shift_rejects_sinks_and_bad_names():
    with pytest.raises(ValidationError):
        EdgeShift.from_edges(("u", "w"), (("a", "u", "w"), ("b", "u", "u")))
    with pytest.raises(ValidationError):
        EdgeShift.from_edges(("u",), (("a", "u", "u"), ("a", "u", "u")))
    with pytest.raises(ValidationError):
        EdgeShift.from_edges(("u",), ())


def test_from_adjacency_multi_edges():
    m = EdgeShift.from_adjacency(((2,),))
    assert m.n_edges == 2
    assert m.edge_source == (0, 0)


# ---------------------------------------------------------- PeriodicOrbit


def test_orbit_canonical_rotation():
    o1 = PeriodicOrbit(GOLDEN, (2, 1))  # c b rotates to b c
    o2 = PeriodicOrbit(GOLDEN, (1, 2))
    assert o1 == o2
    assert o1.word == (1, 2)
    assert o1.names == ("b", "c")


def test_orbit_rejects_non_primitive_and_invalid():
    with pytest.raises(ValidationError):
        PeriodicOrbit(FULL2, (0, 0))
    with pytest.raises(ValidationError):
        PeriodicOrbit(GOLDEN, (1, 1))  # b cannot follow b
    with pytest.raises(ValidationError):
        PeriodicOrbit(GOLDEN, ())


def test_orbit_point_coords():
    orb = PeriodicOrbit(GOLDEN, (1, 2))
    x = orb.point(1)
    assert x.is_periodic
    for n in range(-6, 6):
        assert x.coord(n) == orb.word[(1 + n) % 2]


def test_orbit_from_edge_names():
    orb = PeriodicOrbit.from_edge_names(GOLDEN, ("c", "b"))
    assert orb.word == (1, 2)


# ------------------------------------------------------ canonical points


@given(points())
@settings(max_examples=300, deadline=None)
def test_point_coord_matches_raw_formula(x):
    # reconstruct raw data equal to the canonical fields and recheck
    for n in range(-20, 21):
        expected = raw_coord(
            x.left.word, x.left_phase, x.core, x.core_start,
            x.right.word, x.right_phase, n,
        )
        assert x.coord(n) == expected


@given(st.data())
@settings(max_examples=300, deadline=None)
def test_canonicalization_preserves_coords(data):
    sys_ = data.draw(st.sampled_from(SYSTEMS))
    left = data.draw(st.sampled_from(ORBITS[sys_]))
    lp = data.draw(st.integers(0, left.period - 1))
    cs = data.draw(st.integers(-3, 3))
    length = data.draw(st.integers(0, 5))
    vertex = sys_.edge_target[left.word[(lp - 1) % left.period]]
    core = []
    for _ in range(length):
        options = sys_.out_edges(vertex)
        e = options[data.draw(st.integers(0, len(options) - 1))]
        core.append(e)
        vertex = sys_.edge_target[e]
    pairs = [
        (orb, ph)
        for orb in ORBITS[sys_]
        for ph in range(orb.period)
        if sys_.edge_source[orb.word[ph]] == vertex
    ]
    right, rp = data.draw(st.sampled_from(pairs))
    x = HeteroclinicPoint(sys_, left, lp, tuple(core), cs, right, rp)
    for n in range(-24, 25):
        assert x.coord(n) == raw_coord(left.word, lp, tuple(core), cs,
                                       right.word, rp, n)


@given(points())
@settings(max_examples=300, deadline=None)
def test_canonical_form_is_minimal(x):
    if x.core:
        # no further absorption possible on either side
        assert x.core[-1] != x.right.word[(x.right_phase - 1) % x.right.period]
        assert x.core[0] != x.left.word[x.left_phase % x.left.period]
    elif not x.is_periodic:
        assert (x.left.word[(x.left_phase - 1) % x.left.period]
                != x.right.word[(x.right_phase - 1) % x.right.period])
    else:
        assert x.core_start == 0
        assert x.left == x.right and x.left_phase == x.right_phase


@given(points())
@settings(max_examples=200, deadline=None)
def test_canonicalization_idempotent(x):
    again = HeteroclinicPoint(
        x.system, x.left, x.left_phase, x.core, x.core_start,
        x.right, x.right_phase,
    )
    assert again == x


def test_point_rejects_bad_junction():
    # golden mean: tail of (a) ends at vertex 0, edge c starts at vertex 1
    a = PeriodicOrbit(GOLDEN, (0,))
    bc = PeriodicOrbit(GOLDEN, (1, 2))
    with pytest.raises(ValidationError):
        HeteroclinicPoint(GOLDEN, a, 0, (2,), 0, bc, 0)


def test_point_rejects_mismatched_system():
    z2 = PeriodicOrbit(FULL2, (0,))
    z3 = PeriodicOrbit(FULL3, (0,))
    with pytest.raises(MismatchedShift):
        HeteroclinicPoint(FULL2, z2, 0, (), 0, z3, 0)


def test_periodic_normal_form():
    orb = PeriodicOrbit(FULL2, (0, 1))
    x = HeteroclinicPoint(FULL2, orb, 1, (1, 0, 1), -1, orb, 0)
    # core extends the same periodic pattern, so the point is periodic
    assert x.is_periodic
    assert x.core == () and x.core_start == 0
    assert x.left_phase == x.right_phase


# ------------------------------------------------------------ operations


@given(point_pairs())
@settings(max_examples=300, deadline=None)
def test_metric_against_scan(pair):
    x, y = pair
    assert metric(x, y) == oracle_metric(x, y)


@given(point_pairs())
@settings(max_examples=200, deadline=None)
def test_metric_axioms(pair):
    x, y = pair
    assert metric(x, y) == metric(y, x)
    assert (metric(x, y) == 0) == (x == y)
    assert metric(x, y) <= 1


@given(points(), points(), points())
@settings(max_examples=150, deadline=None)
def test_metric_ultrametric(x, y, z):
    if x.system is y.system is z.system:
        assert metric(x, z) <= max(metric(x, y), metric(y, z))


@given(points(), st.integers(-6, 6))
@settings(max_examples=300, deadline=None)
def test_shift_translates_coords(x, k):
    y = shift(x, k)
    for n in range(-12, 13):
        assert y.coord(n) == x.coord(n + k)


@given(points(), st.integers(-5, 5), st.integers(-5, 5))
@settings(max_examples=150, deadline=None)
def test_shift_group_law(x, a, b):
    assert shift(shift(x, a), b) == shift(x, a + b)


@given(point_pairs())
@settings(max_examples=300, deadline=None)
def test_bracket_defined_iff_edge_zero_matches(pair):
    x, y = pair
    if x.coord(0) == y.coord(0):
        z = bracket(x, y)
        for n in range(0, 16):
            assert z.coord(n) == x.coord(n)
        for n in range(-16, 1):
            assert z.coord(n) == y.coord(n)
        assert stably_equivalent(z, x)
        assert unstably_equivalent(z, y)
    else:
        with pytest.raises(BracketUndefined):
            bracket(x, y)


@given(point_pairs())
@settings(max_examples=200, deadline=None)
def test_bracket_axioms(pair):
    x, y = pair
    assert bracket(x, x) == x
    if x.coord(0) == y.coord(0):
        z = bracket(x, y)
        assert bracket(bracket(x, y), y) == z
        assert bracket(x, bracket(x, y)) == z
        assert bracket(z, y) == z


@given(points(), points(), points())
@settings(max_examples=150, deadline=None)
def test_bracket_triple_axioms(x, y, z):
    if not (x.system is y.system is z.system):
        return
    if x.coord(0) == y.coord(0) == z.coord(0):
        assert bracket(bracket(x, y), z) == bracket(x, z)
        assert bracket(x, bracket(y, z)) == bracket(x, z)


@given(point_pairs())
@settings(max_examples=150, deadline=None)
def test_bracket_shift_compatibility(pair):
    x, y = pair
    if x.coord(0) == y.coord(0) and x.coord(1) == y.coord(1):
        assert bracket(shift(x, 1), shift(y, 1)) == shift(bracket(x, y), 1)


@given(point_pairs())
@settings(max_examples=200, deadline=None)
def test_stable_contraction(pair):
    x, y = pair
    if x.coord(0) != y.coord(0):
        return
    z = bracket(x, y)  # stably equivalent to x, agrees on n >= 0
    if z == x:
        return
    d = metric(x, z)
    assert metric(shift(x, 1), shift(z, 1)) == d / 2
    assert metric(shift(x, -1), shift(z, -1)) == d * 2


@given(point_pairs())
@settings(max_examples=300, deadline=None)
def test_equivalences_against_window_oracle(pair):
    x, y = pair
    assert stably_equivalent(x, y) == oracle_stably_equivalent(x, y)
    assert unstably_equivalent(x, y) == oracle_unstably_equivalent(x, y)


@given(point_pairs())
@settings(max_examples=300, deadline=None)
def test_agreement_boundaries(pair):
    x, y = pair
    if stably_equivalent(x, y) and x != y:
        n0 = forward_agreement_start(x, y)
        assert x.coord(n0 - 1) != y.coord(n0 - 1)
        assert all(x.coord(n) == y.coord(n) for n in range(n0, n0 + 40))
    if unstably_equivalent(x, y) and x != y:
        n1 = backward_agreement_end(x, y)
        assert x.coord(n1 + 1) != y.coord(n1 + 1)
        assert all(x.coord(n) == y.coord(n) for n in range(n1 - 40, n1 + 1))


def test_agreement_none_for_equal_points():
    x = PeriodicOrbit(FULL2, (0,)).point(0)
    assert forward_agreement_start(x, x) is None
    assert backward_agreement_end(x, x) is None


def test_metric_mixed_systems_rejected():
    x = PeriodicOrbit(FULL2, (0,)).point(0)
    y = PeriodicOrbit(FULL3, (0,)).point(0)
    with pytest.raises(MismatchedShift):
        metric(x, y)
    with pytest.raises(MismatchedShift):
        bracket(x, y)


# -------------------------------------------------------------- cylinders


@given(points(), st.integers(-4, 6))
@settings(max_examples=300, deadline=None)
def test_unstable_ball_contains_its_center(x, hi):
    c = Cylinder.unstable_ball(x, hi)
    assert c.hi == hi
    for n in range(hi - 15, hi + 1):
        assert c.pattern(n) == x.coord(n)
    assert c.contains(x)


@given(points(), st.integers(-3, 5))
@settings(max_examples=200, deadline=None)
def test_cylinder_membership_window_oracle(x, hi):
    c = Cylinder.unstable_ball(x, hi)
    y = c.completion()
    assert c.contains(y)
    span = lcm(x.left.period, c.base.period)
    lo = min(x.core_start, c.word_start) - span - 1
    assert all(y.coord(n) == x.coord(n) for n in range(lo, hi + 1))


@given(points(), st.integers(-3, 5))
@settings(max_examples=200, deadline=None)
def test_cylinder_excludes_points_differing_inside(x, hi):
    c = Cylinder.unstable_ball(x, hi)
    sys_ = x.system
    # flip the pinned coordinate at hi if the graph allows an alternative
    v_in = sys_.edge_source[x.coord(hi)]
    v_out = sys_.edge_target[x.coord(hi)]
    alts = [e for e in range(sys_.n_edges)
            if sys_.edge_source[e] == v_in and sys_.edge_target[e] == v_out
            and e != x.coord(hi)]
    if not alts:
        return
    # build the flipped point through raw pieces: copy window, swap one edge
    lo = min(x.core_start, hi)
    word = [x.coord(n) for n in range(lo, hi + 1)]
    word[hi - lo] = alts[0]
    pairs = [
        (orb, ph) for orb in ORBITS[sys_] for ph in range(orb.period)
        if sys_.edge_source[orb.word[ph]] == v_out
    ]
    if not pairs:
        return
    right, rp = pairs[0]
    lp = (x.left_phase + (lo - x.core_start)) % x.left.period
    flipped = HeteroclinicPoint(sys_, x.left, lp, tuple(word), lo, right, rp)
    assert not c.contains(flipped)


@given(points(), st.integers(-3, 5), st.integers(-4, 4))
@settings(max_examples=200, deadline=None)
def test_cylinder_shift_semantics(x, hi, k):
    c = Cylinder.unstable_ball(x, hi)
    moved = c.shifted(k)
    assert moved.hi == hi - k
    for n in range(hi - k - 12, hi - k + 1):
        assert moved.pattern(n) == c.pattern(n + k)
    assert moved.contains(shift(x, k))


@given(points(), points(), st.integers(-2, 4), st.integers(-2, 4))
@settings(max_examples=250, deadline=None)
def test_cylinder_intersection_oracle(x, y, h1, h2):
    if x.system is not y.system:
        return
    c1 = Cylinder.unstable_ball(x, h1)
    c2 = Cylinder.unstable_ball(y, h2)
    got = c1.intersect(c2)
    lo = min(c1.word_start, c2.word_start) - lcm(c1.base.period, c2.base.period)
    agree = all(c1.pattern(n) == c2.pattern(n)
                for n in range(lo, min(h1, h2) + 1))
    if agree:
        assert got is not None
        assert got.hi == max(h1, h2)
        deep = min(got.word_start, lo)
        tall = c1 if h1 >= h2 else c2
        assert all(got.pattern(n) == tall.pattern(n)
                   for n in range(deep, got.hi + 1))
    else:
        assert got is None


@given(points(), st.integers(-3, 5))
@settings(max_examples=200, deadline=None)
def test_completion_deterministic_and_contained(x, hi):
    c = Cylinder.unstable_ball(x, hi)
    y1 = c.completion()
    y2 = c.completion()
    assert y1 == y2
    assert c.contains(y1)


def test_cylinder_absorption_canonical():
    orb = PeriodicOrbit(FULL2, (0, 1))
    # word that merely continues the periodic base collapses away
    c = Cylinder(FULL2, orb, 0, (0, 1, 0), 2)
    assert c.word == ()
    assert c.pattern(2) == 0 and c.pattern(1) == 1 and c.pattern(0) == 0


# ----------------------------------------------------------- enumeration


def oracle_enumeration_count(system, attracting, repelling, m):
    """Count tail-periodic-outside-window points by direct fingerprinting."""
    window = range(-m, m + 1)
    seen = set()
    for q in repelling:
        for qp in range(q.period):
            for word in itertools.product(range(system.n_edges), repeat=len(window)):
                vertex = system.edge_target[q.word[(qp - 1) % q.period]]
                ok = True
                for e in word:
                    if system.edge_source[e] != vertex:
                        ok = False
                        break
                    vertex = system.edge_target[e]
                if not ok:
                    continue
                for p in attracting:
                    for pp in range(p.period):
                        if system.edge_source[p.word[pp]] != vertex:
                            continue
                        span = 3 * (m + 1) + 12
                        fp = tuple(
                            raw_coord(q.word, qp, word, -m, p.word, pp, n)
                            for n in range(-span, span + 1)
                        )
                        seen.add(fp)
    return len(seen)


def test_enumerate_full2_frozen_counts():
    p = (PeriodicOrbit(FULL2, (0,)),)
    q = (PeriodicOrbit(FULL2, (1,)),)
    assert len(enumerate_heteroclinic(FULL2, p, q, 0)) == 2
    assert len(enumerate_heteroclinic(FULL2, p, q, 1)) == 8
    assert len(enumerate_heteroclinic(FULL2, p, q, 2)) == 32


def test_enumerate_full3_frozen_counts():
    p = (PeriodicOrbit(FULL3, (0,)),)
    q = (PeriodicOrbit(FULL3, (1,)),)
    assert len(enumerate_heteroclinic(FULL3, p, q, 0)) == 3
    assert len(enumerate_heteroclinic(FULL3, p, q, 1)) == 27


@pytest.mark.parametrize("m", [0, 1, 2])
def test_enumerate_matches_fingerprint_oracle(m):
    cases = [
        (FULL2, (PeriodicOrbit(FULL2, (0,)),), (PeriodicOrbit(FULL2, (1,)),)),
        (GOLDEN, (PeriodicOrbit(GOLDEN, (0,)),), (PeriodicOrbit(GOLDEN, (1, 2)),)),
        (FULL3, (PeriodicOrbit(FULL3, (0,)),), (PeriodicOrbit(FULL3, (2,)),)),
    ]
    for system, p, q in cases:
        pts = enumerate_heteroclinic(system, p, q, m)
        assert len(pts) == oracle_enumeration_count(system, p, q, m)
        assert len(set(pts)) == len(pts)
        assert list(pts) == sorted(pts, key=lambda t: t.sort_key)
        for x in pts:
            assert x.right in p and x.left in q
            assert not x.is_periodic


def test_enumerate_membership_semantics():
    p = (PeriodicOrbit(FULL2, (0,)),)
    q = (PeriodicOrbit(FULL2, (1,)),)
    pts = enumerate_heteroclinic(FULL2, p, q, 1)
    for x in pts:
        assert all(x.coord(n) == 0 for n in range(30, 40))
        assert all(x.coord(n) == 1 for n in range(-40, -30))
        assert x.core_start >= -1 - 2  # tails periodic outside the window
        assert x.core_start + len(x.core) <= 2


def test_enumerate_rejects_negative_window():
    p = (PeriodicOrbit(FULL2, (0,)),)
    q = (PeriodicOrbit(FULL2, (1,)),)
    with pytest.raises(ValidationError):
        enumerate_heteroclinic(FULL2, p, q, -1)
