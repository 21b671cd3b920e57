"""Weight layer tests.

The binding oracle is the defining two-sided sum for the stable weight: both
tails stabilise after finitely many terms, so the partial sum is an exact
independent computation of omega_s from omega0 alone. Shell membership is
cross-checked by iterating the shift against stable set membership, and the
ramp distance is certified by an explicit witness point.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

import pytest

from smale_spectra.errors import (
    NotInStableClass,
    OverlappingOrbitSets,
    PeriodicPointExcluded,
    ValidationError,
)
from smale_spectra.groupoid_rep import BasicFunction, Cylinder
from smale_spectra.sft_core import (
    HeteroclinicPoint,
    PeriodicOrbit,
    enumerate_heteroclinic,
    full_shift,
    golden_mean_shift,
    metric,
    shift,
)
from smale_spectra.weights import (
    WeightSystem,
    entry_index,
    entry_ramp_value,
    hop_bound,
    omega0,
    omega_s,
    stable_distance,
    stable_lipschitz_constant,
    stable_set_contains,
)

FULL2 = full_shift(2)
FULL3 = full_shift(3)
GOLDEN = golden_mean_shift()

P2 = PeriodicOrbit(FULL2, (0,))
Q2 = PeriodicOrbit(FULL2, (1,))
ALT2 = PeriodicOrbit(FULL2, (0, 1))
PG = PeriodicOrbit(GOLDEN, (0,))
QG = PeriodicOrbit(GOLDEN, (1, 2))

W2 = WeightSystem(FULL2, (P2,), (Q2,))
WG = WeightSystem(GOLDEN, (PG,), (QG,))
# ramp systems: a multi-phase attracting set makes the ramp non-constant
RAMP_ALT = WeightSystem(FULL2, (ALT2,), (Q2,), kind="lipschitz-ramp")
RAMP_MIX = WeightSystem(FULL2, (ALT2, P2), (Q2,), kind="lipschitz-ramp")

SAMPLE2 = enumerate_heteroclinic(FULL2, (P2,), (Q2,), 3)
SAMPLE_ALT = enumerate_heteroclinic(FULL2, (ALT2,), (Q2,), 3)
SAMPLE_MIX = (enumerate_heteroclinic(FULL2, (ALT2, P2), (Q2,), 2))
SAMPLEG = enumerate_heteroclinic(GOLDEN, (PG,), (QG,), 3)


def seam(n):
    return HeteroclinicPoint(FULL2, Q2, 0, (), n, P2, 0)


# ---------------------------------------------------------------- oracles


def oracle_stable_member(w, x):
    """Directly compare x against every attracting phase point on a window
    long enough to force eventual agreement."""
    for orb in w.attracting:
        for ph in range(orb.period):
            span = max(x.core_end, 0) + lcm(orb.period, x.right.period) + 2
            if all(x.coord(n) == orb.word[(ph + n) % orb.period]
                   for n in range(0, span)):
                return True
    return False


def oracle_omega_s(w, x):
    """The defining two-sided sum, truncated after it stabilises exactly."""
    m = abs(x.core_end) + 3
    forward = sum(omega0(w, shift(x, n)) for n in range(0, m))
    backward = sum(1 - omega0(w, shift(x, -n)) for n in range(1, m))
    return forward - backward


def oracle_entry(w, x, probe=12):
    lo = x.core_start - probe
    for n in range(lo, x.core_end + probe):
        if (stable_set_contains(w, shift(x, n + 1))
                and not stable_set_contains(w, shift(x, n))):
            return n
    raise AssertionError("entry not found in probe window")


# ----------------------------------------------------------- construction


def test_weight_system_validation():
    with pytest.raises(OverlappingOrbitSets):
        WeightSystem(FULL2, (P2,), (P2,))
    with pytest.raises(ValidationError):
        WeightSystem(FULL2, (P2, P2), (Q2,))
    with pytest.raises(ValidationError):
        WeightSystem(FULL2, (P2,), (Q2,), kind="smooth")
    with pytest.raises(ValidationError):
        WeightSystem(FULL2, (P2,), (Q2,), kind="lipschitz-ramp",
                     ramp_slope=Fraction(0))
    with pytest.raises(ValidationError):
        WeightSystem(FULL2, (), (Q2,))
    with pytest.raises(ValidationError):
        WeightSystem(FULL2, (P2,), (QG,))
    assert W2.epsilon == Fraction(1)


# ------------------------------------------------------- stable membership


def test_stable_membership_against_oracle():
    for w, sample in ((W2, SAMPLE2), (WG, SAMPLEG), (RAMP_ALT, SAMPLE_ALT),
                      (RAMP_MIX, SAMPLE_MIX)):
        hits = 0
        for x in sample:
            for k in (-2, 0, 2, 5):
                y = shift(x, k)
                got = stable_set_contains(w, y)
                assert got == oracle_stable_member(w, y)
                hits += got
        assert hits > 0


def test_stable_set_is_forward_invariant():
    for x in SAMPLE2:
        for k in range(-3, 4):
            y = shift(x, k)
            if stable_set_contains(W2, y):
                assert stable_set_contains(W2, shift(y, 1))


# ------------------------------------------------------------ entry index


def test_entry_index_against_shift_iteration():
    for w, sample in ((W2, SAMPLE2), (WG, SAMPLEG), (RAMP_ALT, SAMPLE_ALT)):
        for x in sample:
            n = entry_index(w, x)
            assert n == oracle_entry(w, x)


def test_entry_index_guards():
    with pytest.raises(PeriodicPointExcluded):
        entry_index(W2, P2.point(0))
    with pytest.raises(NotInStableClass):
        entry_index(W2, Q2.point(0))
    stray = HeteroclinicPoint(FULL2, Q2, 0, (), 0, ALT2, 0)
    with pytest.raises(NotInStableClass):
        entry_index(W2, stray)


def test_entry_shifts_by_one():
    for x in SAMPLE2[: 40]:
        n = entry_index(W2, x)
        assert entry_index(W2, shift(x, 1)) == n - 1
        assert entry_index(W2, shift(x, -1)) == n + 1


# ----------------------------------------------------------------- omega0


def test_omega0_urysohn_values():
    for w, sample in ((W2, SAMPLE2), (RAMP_ALT, SAMPLE_ALT)):
        for x in sample:
            for k in (-4, -1, 0, 1, 3):
                y = shift(x, k)
                v = omega0(w, y)
                assert 0 <= v <= 1
                if stable_set_contains(w, y):
                    assert v == 0
                elif not stable_set_contains(w, shift(y, 1)):
                    assert v == 1
                else:
                    assert v > 0


def test_omega0_indicator_is_binary():
    for x in SAMPLE2:
        assert omega0(W2, x) in (Fraction(0), Fraction(1))


def test_ramp_value_frozen_cases():
    # attracting orbit (0 1): the shell-zero path 0.(0 1 0 1 ...) sits at
    # distance 1/2 from the stable set: the only aligned candidate phase
    # disagrees one step after the entry edge
    x = HeteroclinicPoint(FULL2, Q2, 0, (0,), 0, ALT2, 0)
    assert x.coord(0) == 0 and x.coord(1) == 0 and x.coord(2) == 1
    assert entry_index(RAMP_ALT, x) == 0
    assert stable_distance(RAMP_ALT, x) == Fraction(1, 2)
    assert omega0(RAMP_ALT, x) == Fraction(1, 2)
    # adding the fixed orbit (0) to the attracting set improves the best
    # shadowing tail: agreement through position 1, mismatch at 2
    assert stable_distance(RAMP_MIX, x) == Fraction(1, 4)
    assert omega0(RAMP_MIX, x) == Fraction(1, 4)
    # steeper ramps clamp at one
    steep = WeightSystem(FULL2, (ALT2,), (Q2,), kind="lipschitz-ramp",
                         ramp_slope=Fraction(4))
    assert omega0(steep, x) == Fraction(1)
    shallow = WeightSystem(FULL2, (ALT2,), (Q2,), kind="lipschitz-ramp",
                           ramp_slope=Fraction(1, 4))
    assert omega0(shallow, x) == Fraction(1, 8)


def test_ramp_reduces_to_indicator_for_fixed_point_target():
    # a single fixed attracting point leaves no shadowing candidate at the
    # entry edge, so every shell-zero value saturates
    ramp = WeightSystem(FULL2, (P2,), (Q2,), kind="lipschitz-ramp",
                        ramp_slope=Fraction(2))
    for x in SAMPLE2:
        if x.core_end == 1:
            assert omega0(ramp, x) == Fraction(1) == omega0(W2, x)


def test_stable_distance_witness():
    for w, sample in ((RAMP_ALT, SAMPLE_ALT), (RAMP_MIX, SAMPLE_MIX),
                      (WG, SAMPLEG)):
        for x in sample:
            if x.core_end != 1:
                continue
            d = stable_distance(w, x)
            assert 0 < d <= 1
            # a witness at distance exactly d: graft the best shadowing
            # tail onto x's past
            best = None
            for orb in w.attracting:
                for ph in range(orb.period):
                    try:
                        cand = HeteroclinicPoint(
                            w.system, x.left, x.left_phase,
                            tuple(x.coord(n) for n in range(x.core_start, 0)),
                            x.core_start, orb, ph)
                    except ValidationError:
                        continue  # tail does not glue onto x's past
                    dist = metric(x, cand)
                    if stable_set_contains(w, cand):
                        best = dist if best is None else min(best, dist)
            if best is None:
                # no tail glues on at all: every stable point already
                # disagrees at the origin, which the metric caps at one
                best = Fraction(1)
            assert best == d


# ----------------------------------------------------------------- omega_s


def test_omega_s_matches_defining_sum():
    for w, sample in ((W2, SAMPLE2), (WG, SAMPLEG), (RAMP_ALT, SAMPLE_ALT),
                      (RAMP_MIX, SAMPLE_MIX)):
        for x in sample:
            assert omega_s(w, x) == oracle_omega_s(w, x)


def test_omega_s_cocycle_direction():
    # applying the shift decreases the stable weight by exactly one
    for w, sample in ((W2, SAMPLE2), (RAMP_ALT, SAMPLE_ALT), (WG, SAMPLEG)):
        for x in sample:
            base = omega_s(w, x)
            assert omega_s(w, shift(x, 1)) == base - 1
            assert omega_s(w, shift(x, -1)) == base + 1


def test_omega_s_shell_pinch():
    for w, sample in ((W2, SAMPLE2), (RAMP_ALT, SAMPLE_ALT)):
        for x in sample:
            n = entry_index(w, x)
            v = omega_s(w, x)
            assert n < v <= n + 1
            if w.kind == "indicator":
                assert v == n + 1


def test_omega_s_guards():
    with pytest.raises(PeriodicPointExcluded):
        omega_s(W2, P2.point(0))
    with pytest.raises(NotInStableClass):
        omega_s(W2, Q2.point(0))


# ------------------------------------------------------ locality of omega0


def test_ramp_lipschitz_on_shell_zero():
    # on shell zero the ramp is slope-Lipschitz: |w0(x) - w0(y)| <= C d(x,y)
    for w, sample in ((RAMP_ALT, SAMPLE_ALT), (RAMP_MIX, SAMPLE_MIX)):
        zero_shell = [x for x in sample if x.core_end == 1]
        assert len(zero_shell) >= 2
        for x in zero_shell:
            for y in zero_shell:
                gap = abs(omega0(w, x) - omega0(w, y))
                assert gap <= w.ramp_slope * metric(x, y)


def test_same_shell_weight_lipschitz():
    # same-shell pairs: the weight gap is controlled after syncing to shell
    # zero; this is the provable locality statement for path spaces
    for w, sample in ((RAMP_ALT, SAMPLE_ALT), (RAMP_MIX, SAMPLE_MIX)):
        by_shell = {}
        for x in sample:
            by_shell.setdefault(entry_index(w, x), []).append(x)
        checked = 0
        for n, xs in by_shell.items():
            for x in xs:
                for y in xs:
                    gap = abs(omega_s(w, x) - omega_s(w, y))
                    assert gap <= w.ramp_slope * metric(shift(x, n),
                                                        shift(y, n))
                    checked += 1
        assert checked > 0


def test_entry_ramp_table_matches_pointwise_values():
    for w, sample in ((RAMP_ALT, SAMPLE_ALT), (RAMP_MIX, SAMPLE_MIX),
                      (WG, SAMPLEG), (W2, SAMPLE2)):
        for x in sample:
            if x.core_end != 1:
                continue
            table = entry_ramp_value(w, x.coord(0), x.right, x.right_phase)
            assert table == omega0(w, x)


def test_entry_ramp_table_rejects_stable_configuration():
    with pytest.raises(ValidationError):
        entry_ramp_value(W2, 0, P2, 0)  # continuing the tail is not an entry
    with pytest.raises(ValidationError):
        entry_ramp_value(W2, 1, ALT2, 0)  # orbit outside the attracting set


# --------------------------------------------------------------- hop bound


def test_hop_bound_frozen_cases():
    u = BasicFunction.splice(seam(0), seam(1))
    assert hop_bound(W2, u) == 1
    far = BasicFunction.splice(seam(3), seam(0), depth=3)
    assert hop_bound(W2, far) == 3
    e = BasicFunction.diagonal(Cylinder.unstable_ball(seam(0), 1))
    assert hop_bound(W2, e) == 1
    assert stable_lipschitz_constant(W2, far) == Fraction(6)


def test_hop_bound_dominates_entry_jumps():
    # every class point of every piece jumps by at most the bound
    cases = [
        BasicFunction.splice(seam(0), seam(1)),
        BasicFunction.splice(seam(2), seam(0), depth=3),
        BasicFunction.diagonal(Cylinder.unstable_ball(seam(1), 2)),
    ]
    for f in cases:
        k = hop_bound(W2, f)
        dom = f.basic_set.domain_cylinder
        for x in SAMPLE2:
            if not dom.contains(x):
                continue
            y = f.basic_set.transport(x)
            jump = abs(entry_index(W2, y) - entry_index(W2, x))
            assert jump <= k


def test_hop_bound_golden():
    v = HeteroclinicPoint(GOLDEN, QG, 0, (), 0, PG, 0)
    w = shift(v, -2)
    f = BasicFunction.splice(v, w)
    k = hop_bound(WG, f)
    dom = f.basic_set.domain_cylinder
    for x in SAMPLEG:
        if not dom.contains(x):
            continue
        y = f.basic_set.transport(x)
        assert abs(entry_index(WG, y) - entry_index(WG, x)) <= k
