import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mfg_switch.profiles.step_profile import StepProfile, l2_distance, time_integral
from mfg_switch.utilities.errors import BadInterval, DimensionMismatch, InvalidMass

F = Fraction


def indicator(horizon=2, start=0, end=1, value=1):
    return StepProfile.from_intervals(horizon, [(start, end, value)])


def test_constant_integral():
    assert time_integral(StepProfile.constant(F(1, 2), 2), 0, 2) == 1


def test_single_piece_integrals():
    f = indicator()
    assert time_integral(f, 0, 2) == 1
    assert time_integral(f, F(1, 2), F(3, 2)) == F(1, 2)


def test_integral_rejects_reversed_or_outside_interval():
    f = indicator()
    with pytest.raises(BadInterval):
        time_integral(f, 1, F(1, 2))
    with pytest.raises(BadInterval):
        time_integral(f, 0, 3)


def test_l2_examples():
    f = indicator()
    assert l2_distance(f, f) == 0
    assert l2_distance(StepProfile.constant(1, 2), StepProfile.constant(0, 2)) == pytest.approx(math.sqrt(2))
    assert l2_distance(f, StepProfile.constant(0, 2)) == pytest.approx(1.0)


def test_value_at_uses_right_open_pieces_and_terminal():
    f = StepProfile((0, 1, 2), (F(1), F(0)), F(3))
    assert f.value_at(0) == 1
    assert f.value_at(1) == 0
    assert f.value_at(F(1, 2)) == 1
    assert f.value_at(2) == 3
    with pytest.raises(BadInterval):
        f.value_at(F(5, 2))


def test_validation():
    with pytest.raises(BadInterval):
        StepProfile((0, 1, 1), (1, 2), 0)
    with pytest.raises(BadInterval):
        StepProfile((F(1, 2), 2), (1,), 0)
    with pytest.raises(DimensionMismatch):
        StepProfile((0, 1, 2), (1,), 0)


@pytest.mark.parametrize(
    "values, terminal",
    [((F(-1, 10), F(1)), F(0)), ((F(1), float("nan")), F(0)), ((F(1), F(0)), float("inf"))],
)
def test_negative_or_non_finite_mass_is_rejected(values, terminal):
    with pytest.raises(InvalidMass):
        StepProfile((0, 1, 2), values, terminal)


def test_difference_below_zero_is_rejected_but_distance_is_not():
    f = StepProfile.constant(F(0), 2)
    g = StepProfile.constant(F(1), 2)
    with pytest.raises(InvalidMass):
        f - g
    assert l2_distance(f, g) == pytest.approx(math.sqrt(2))


def test_from_intervals_sums_overlaps_and_merges():
    f = StepProfile.from_intervals(2, [(0, 1, F(1, 2)), (F(1, 2), 2, F(1, 2))], terminal=F(1, 2))
    assert f.breakpoints == (0, F(1, 2), 1, 2)
    assert f.values == (F(1, 2), F(1), F(1, 2))
    merged = StepProfile.from_intervals(2, [(0, 1, 1), (1, 2, 1)])
    assert merged.piece_count == 1


def test_combine_merges_partitions():
    f = StepProfile((0, 1, 2), (F(1), F(0)), 0)
    g = StepProfile((0, F(1, 2), 2), (F(0), F(1)), 1)
    total = f + g
    assert total.breakpoints == (0, F(1, 2), 1, 2)
    assert total.values == (1, 2, 1)
    assert total.terminal == 1
    assert total.piece_count <= f.piece_count + g.piece_count
    assert (total - g).values == f.values
    with pytest.raises(DimensionMismatch):
        f + StepProfile.constant(0, 3)


def test_blend_and_scale():
    f = StepProfile.constant(F(1), 2)
    g = StepProfile.constant(F(0), 2)
    assert f.blend(g, F(1, 4)).values == (F(3, 4),)
    assert f.scale(F(1, 3)).terminal == F(1, 3)


def test_dict_round_trip_keeps_fractions_and_floats():
    f = StepProfile((0, F(1, 3), 2), (F(2, 7), 0.25), F(1, 9))
    assert StepProfile.from_dict(f.to_dict()) == f


breakpoint_lists = st.lists(
    st.integers(min_value=1, max_value=63), min_size=0, max_size=5, unique=True
).map(lambda ks: (F(0),) + tuple(F(k, 32) for k in sorted(ks)) + (F(2),))


@st.composite
def profiles(draw):
    cuts = draw(breakpoint_lists)
    values = tuple(
        F(draw(st.integers(min_value=0, max_value=20)), 10) for _ in range(len(cuts) - 1)
    )
    return StepProfile(cuts, values, F(0))


@given(profiles(), st.integers(0, 64), st.integers(0, 64), st.integers(0, 64))
def test_integral_is_additive(f, a, b, c):
    a, b, c = sorted(F(x, 32) for x in (a, b, c))
    assert time_integral(f, a, b) + time_integral(f, b, c) == time_integral(f, a, c)


@given(profiles(), profiles(), profiles())
def test_l2_triangle_inequality(f, g, h):
    assert l2_distance(f, h) <= l2_distance(f, g) + l2_distance(g, h) + 1e-12
    assert l2_distance(f, g) == pytest.approx(l2_distance(g, f))
