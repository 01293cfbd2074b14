"""Channel model: frozen oracle values, algebraic identities, domain errors.

Oracle values marked "mpmath" were computed once with mpmath at 50 decimal
digits from the defining formulas and frozen here.
"""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uavlc.channel import (
    InfeasibleGeometryError,
    UavPose,
    User,
    VlcParams,
    average_gain,
    capacity,
    concentrator_gain,
    demand_coefficient,
    homogeneous_los_factor,
    illumination_power,
    lambert_order,
    link_distance,
    los_gain,
    los_probability,
    optimal_ambient,
    power_exponent,
    required_power,
)


def pose(x=0.0, y=0.0, h=20.0):
    return UavPose(x, y, h)


# ---------------------------------------------------------------- lambert order


def test_lambert_order_semi_angle_60_is_one():
    assert lambert_order(60.0) == pytest.approx(1.0, rel=1e-15)


def test_lambert_order_semi_angle_45_is_two():
    # mpmath: -ln 2 / ln cos(45 deg) = 2 exactly (cos 45 = 2^(-1/2))
    assert lambert_order(45.0) == pytest.approx(2.0, rel=1e-14)


def test_lambert_order_boundary_90_returns_limit_zero():
    assert lambert_order(90.0) == 0.0


@pytest.mark.parametrize("bad", [0.0, -5.0, 90.0001, 180.0])
def test_lambert_order_domain(bad):
    with pytest.raises(ValueError):
        lambert_order(bad)


@given(st.floats(min_value=1.0, max_value=89.9))
def test_lambert_order_decreases_with_semi_angle(phi):
    assert lambert_order(phi) > lambert_order(phi + 0.1)


# ---------------------------------------------------------- concentrator gain


def test_concentrator_gain_full_fov(table1):
    assert concentrator_gain(30.0, table1) == pytest.approx(2.25, rel=1e-15)


def test_concentrator_gain_narrow_fov():
    params = VlcParams(psi_c=60.0)
    # mpmath: 1.5^2 / sin^2(60 deg) = 3
    assert concentrator_gain(0.0, params) == pytest.approx(3.0, rel=1e-14)
    assert concentrator_gain(60.0001, params) == 0.0
    assert concentrator_gain(-1.0, params) == 0.0


def test_concentrator_gain_rejects_bad_fov():
    with pytest.raises(ValueError):
        concentrator_gain(10.0, VlcParams(psi_c=0.0))
    with pytest.raises(ValueError):
        concentrator_gain(10.0, VlcParams(psi_c=120.0))


# ------------------------------------------------------------------- LoS gain


def test_los_gain_directly_underneath_reference_value(table1):
    # mpmath: 0.5 * 2.25 / (2 pi 400) = 4.476232774459556e-4
    user = User(0.0, 0.0, 1.0)
    assert los_gain(pose(), user, table1) == pytest.approx(4.476232774459556e-4, rel=1e-12)


@given(
    st.floats(min_value=-60.0, max_value=60.0),
    st.floats(min_value=-60.0, max_value=60.0),
    st.floats(min_value=20.0, max_value=90.0),
)
def test_los_gain_matches_altitude_power_form(dx, dy, phi):
    # Independent route: h = (m+1) rho g H^(m+1) / (2 pi d^(m+3)).
    params = VlcParams(phi_half=phi)
    user = User(dx, dy, 1.0)
    uav = pose()
    m = lambert_order(phi)
    d = link_distance(uav, user)
    expected = (m + 1.0) * params.rho * 2.25 * uav.altitude ** (m + 1.0) / (2.0 * math.pi * d ** (m + 3.0))
    assert los_gain(uav, user, params) == pytest.approx(expected, rel=1e-12)


def test_los_gain_underneath_scales_inverse_square_in_altitude(table1):
    # From the gain law with d = H the altitude exponent is exactly -2 for
    # every Lambertian order (the m+1 and m+3 powers cancel).
    user = User(0.0, 0.0, 1.0)
    for phi in (90.0, 60.0, 45.0):
        params = VlcParams(phi_half=phi)
        g1 = los_gain(pose(h=20.0), user, params)
        g2 = los_gain(pose(h=40.0), user, params)
        assert g2 / g1 == pytest.approx(0.25, rel=1e-12)


def test_los_gain_zero_outside_fov():
    params = VlcParams(psi_c=30.0)
    # horizontal offset 40 at altitude 20 -> psi = atan(40/20) = 63 deg > 30
    assert los_gain(pose(), User(40.0, 0.0, 1.0), params) == 0.0


# ---------------------------------------------------------------- LoS blockage


def test_los_probability_frozen_value():
    # Elevation 30 deg: d = H / sin(30 deg) = 2H; horizontal = H sqrt(3).
    # mpmath: 1/(1 + 10 exp(-0.6 * 20)) = 0.9999385616513693
    params = VlcParams()
    h = 20.0
    user = User(h * math.sqrt(3.0), 0.0, 1.0)
    assert los_probability(pose(h=h), user, params) == pytest.approx(
        0.9999385616513693, rel=1e-12
    )


@given(st.floats(min_value=0.0, max_value=200.0))
def test_los_probability_in_unit_interval_and_decreasing(r):
    params = VlcParams()
    p_near = los_probability(pose(), User(r, 0.0, 1.0), params)
    p_far = los_probability(pose(), User(r + 10.0, 0.0, 1.0), params)
    assert 0.0 < p_far < p_near <= 1.0


def test_average_gain_is_product(table1):
    user = User(12.0, -7.0, 1.0)
    uav = pose()
    expected = los_probability(uav, user, table1) * los_gain(uav, user, table1)
    assert average_gain(uav, user, table1) == pytest.approx(expected, rel=1e-15)
    assert average_gain(uav, user, table1) <= los_gain(uav, user, table1)


def test_homogeneous_los_factor_default_is_vertical_sigmoid(table1):
    expected = 1.0 / (1.0 + 10.0 * math.exp(-0.6 * 80.0))
    assert homogeneous_los_factor(table1) == pytest.approx(expected, rel=1e-15)
    assert homogeneous_los_factor(VlcParams(b_bar=0.7)) == 0.7


# --------------------------------------------------------- capacity and power


def test_capacity_zero_power_is_zero(table1):
    assert capacity(0.0, 1e-4, 0.0, table1) == 0.0


def test_capacity_strictly_increasing_in_power(table1):
    caps = [capacity(p, 4.4e-4, 1e-4, table1) for p in (0.5, 1.0, 2.0, 4.0)]
    assert all(a < b for a, b in zip(caps, caps[1:]))


def test_capacity_rejects_negative_arguments(table1):
    with pytest.raises(ValueError):
        capacity(-1.0, 1e-4, 0.0, table1)
    with pytest.raises(ValueError):
        capacity(1.0, 1e-4, -1e-6, table1)


@given(
    st.floats(min_value=0.05, max_value=3.0),
    st.floats(min_value=-50.0, max_value=50.0),
    st.floats(min_value=-50.0, max_value=50.0),
    st.floats(min_value=0.0, max_value=2e-3),
)
def test_required_power_round_trips_through_capacity(rate, dx, dy, ambient):
    params = VlcParams()
    user = User(dx, dy, rate)
    uav = pose()
    p = required_power(user, uav, ambient, params)
    gain = homogeneous_los_factor(params) * los_gain(uav, user, params)
    assert capacity(p, gain, ambient, params) == pytest.approx(rate, rel=1e-9)


def test_required_power_underneath_scales_square_in_altitude():
    # P = l N d^(m+3) with l carrying H^(m+1): directly underneath the
    # altitude law is H^2 regardless of the Lambertian order.
    user = User(0.0, 0.0, 1.0)
    for phi in (90.0, 60.0):
        powers = [
            required_power(user, pose(h=h), 0.0, VlcParams(phi_half=phi, altitude=h))
            for h in (10.0, 20.0, 40.0)
        ]
        assert powers[1] / powers[0] == pytest.approx(4.0, rel=1e-10)
        assert powers[2] / powers[1] == pytest.approx(4.0, rel=1e-10)


def test_required_power_follows_distance_law_at_fixed_altitude(table1):
    # Moving off-axis at fixed H multiplies the power by (d/H)^(m+3).
    user0 = User(0.0, 0.0, 1.0)
    user1 = User(30.0, 0.0, 1.0)
    p0 = required_power(user0, pose(), 0.0, table1)
    p1 = required_power(user1, pose(), 0.0, table1)
    d = link_distance(pose(), user1)
    assert p1 / p0 == pytest.approx((d / 20.0) ** power_exponent(table1), rel=1e-10)


def test_required_power_infeasible_outside_fov():
    params = VlcParams(psi_c=30.0)
    with pytest.raises(InfeasibleGeometryError):
        required_power(User(40.0, 0.0, 1.0), pose(), 0.0, params)


def test_illumination_power_zero_when_ambient_meets_target(table1):
    assert illumination_power(User(0, 0, 1.0), pose(), 5e-4, table1) == 0.0
    assert illumination_power(User(0, 0, 1.0), pose(), 1.0, table1) == 0.0


def test_illumination_power_dark_room_underneath(table1):
    user = User(0.0, 0.0, 1.0)
    gain = homogeneous_los_factor(table1) * los_gain(pose(), user, table1)
    expected = table1.eta_r / (table1.xi * gain)
    assert illumination_power(user, pose(), 0.0, table1) == pytest.approx(expected, rel=1e-12)


# ---------------------------------------------------------- demand coefficient


@given(
    st.floats(min_value=-55.0, max_value=55.0),
    st.floats(min_value=-55.0, max_value=55.0),
    st.floats(min_value=0.05, max_value=2.0),
    st.floats(min_value=0.0, max_value=1.2e-3),
)
def test_demand_coefficient_matches_pointwise_maximum(dx, dy, rate, ambient):
    params = VlcParams()
    user = User(dx, dy, rate)
    uav = pose()
    direct = max(
        required_power(user, uav, ambient, params),
        illumination_power(user, uav, ambient, params),
    )
    d = link_distance(uav, user)
    closed = demand_coefficient(user, ambient, params) * d ** power_exponent(params)
    assert closed == pytest.approx(direct, rel=1e-9)


def test_demand_coefficient_positive_even_when_lit(table1):
    # With ambient above eta_r only the rate term remains, still positive.
    assert demand_coefficient(User(0, 0, 1.0), 2e-3, table1) > 0.0


# -------------------------------------------------------------- ambient optimum


def test_optimal_ambient_reference_value(table1):
    # mpmath: (5e-4 + 1e-10)/(1 + 2.633318077776692) - 1e-10
    assert optimal_ambient(1.0, table1) == pytest.approx(1.3761518423791655e-4, rel=1e-12)


def test_optimal_ambient_zero_branch():
    params = VlcParams(eta_r=1e-12, n_w=1e-3)
    assert optimal_ambient(1.0, params) == 0.0


def test_optimal_ambient_equalizes_both_demands(table1):
    # At the optimum the illumination deficit equals the rate term.
    for rate in (0.3, 1.0, 1.5):
        i_star = optimal_ambient(rate, table1)
        m_term = table1.eta_r - i_star
        n_term = (table1.n_w + i_star) * math.sqrt(
            (2.0 * math.pi / math.e) * (2.0 ** (2.0 * rate) - 1.0)
        )
        assert m_term == pytest.approx(n_term, rel=1e-12)


@given(st.floats(min_value=0.05, max_value=2.0))
def test_optimal_ambient_minimizes_demand(rate):
    params = VlcParams()
    user = User(0.0, 0.0, rate)
    i_star = optimal_ambient(rate, params)
    c_star = demand_coefficient(user, i_star, params)
    for ambient in (0.0, 0.5 * i_star, 1.5 * i_star, params.eta_r):
        assert c_star <= demand_coefficient(user, ambient, params) * (1.0 + 1e-12)
