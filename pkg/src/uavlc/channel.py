"""Optical wireless channel model for UAV-mounted light transmitters.

Link geometry, Lambertian emission, concentrator optics, line-of-sight
blockage statistics, and the closed-form power bookkeeping used by the
deployment optimizer.  Conventions at the API boundary: angles in degrees,
distances in metres, rates in Mbit/s, optical power in watts.

A transmitter hovers at altitude ``H`` pointing straight down and a ground
receiver points straight up, so the radiance angle at the source and the
incidence angle at the detector coincide: ``cos(phi) = cos(psi) = H / d``
with ``d`` the 3-D link distance.  Diffuse reflections are neglected; the
only stochastic element is whether the direct path is blocked, summarised
by an elevation-dependent probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

_LN2 = math.log(2.0)
# Forward SNR prefactor of the intensity-modulated rate law; its
# reciprocal appears under the square root when the law is inverted.
_SNR_COEF = math.e / (2.0 * math.pi)


class InfeasibleGeometryError(ValueError):
    """A link with zero optical gain was asked to carry positive demand."""


@dataclass(frozen=True)
class VlcParams:
    """Channel and environment constants shared by every link.

    Attributes
    ----------
    phi_half : transmitter semi-angle at half power, degrees, in (0, 90].
    psi_c : receiver field-of-view semi-angle, degrees, in (0, 90].
    rho : photodetector area, m^2.
    xi : photodetector responsivity, A/W.
    n_e : refractive index of the receiver concentrator.
    n_w : receiver noise floor expressed as an equivalent ambient level, W.
    env_x, env_y : offset (degrees) and decay (1/degree) of the sigmoid
        line-of-sight probability in the elevation angle.
    eta_r : illumination target at the receiver, W.
    altitude : hover altitude H of every transmitter, m.
    d_min : minimum *squared* horizontal separation between UAVs, m^2.
    b_bar : homogeneous line-of-sight factor used in power budgeting;
        ``None`` evaluates the blockage sigmoid at a 90-degree elevation.
    """

    phi_half: float = 90.0
    psi_c: float = 90.0
    rho: float = 0.5
    xi: float = 0.8
    n_e: float = 1.5
    n_w: float = 1e-10
    env_x: float = 10.0
    env_y: float = 0.6
    eta_r: float = 5e-4
    altitude: float = 20.0
    d_min: float = 25.0
    b_bar: float | None = None


@dataclass(frozen=True)
class User:
    """A ground user at ``(x, y)`` requesting ``rate`` Mbit/s."""

    x: float
    y: float
    rate: float


@dataclass(frozen=True)
class UavPose:
    """Horizontal position, altitude and transmit power of one UAV."""

    x: float
    y: float
    altitude: float
    power: float = 0.0


def lambert_order(phi_half: float) -> float:
    """Lambertian mode number ``m = -ln 2 / ln cos(phi_half)``.

    The semi-angle is in degrees and must lie in (0, 90].  The 90-degree
    boundary is the ideal cosine emitter; the formula degenerates there
    (``ln 0``) and the limit value 0 is returned explicitly.
    """
    if not 0.0 < phi_half <= 90.0:
        raise ValueError(f"phi_half must lie in (0, 90] degrees, got {phi_half!r}")
    if phi_half == 90.0:
        return 0.0
    return -_LN2 / math.log(math.cos(math.radians(phi_half)))


def concentrator_gain(psi: float, params: VlcParams) -> float:
    """Gain of the receiver concentrator at incidence angle ``psi`` degrees.

    ``n_e^2 / sin^2(psi_c)`` inside the field of view, zero outside.
    """
    if not 0.0 < params.psi_c <= 90.0:
        raise ValueError(f"psi_c must lie in (0, 90] degrees, got {params.psi_c!r}")
    if psi < 0.0 or psi > params.psi_c:
        return 0.0
    s = math.sin(math.radians(params.psi_c))
    return params.n_e * params.n_e / (s * s)


def link_distance(uav: UavPose, user: User) -> float:
    """3-D distance between a hovering transmitter and a ground user."""
    dx = uav.x - user.x
    dy = uav.y - user.y
    return math.sqrt(dx * dx + dy * dy + uav.altitude * uav.altitude)


def los_gain(uav: UavPose, user: User, params: VlcParams) -> float:
    """Direct-path channel gain of the downlink, dimensionless.

    Lambertian source of order ``m``, detector area ``rho``, concentrator
    gain ``g(psi)``; the vertical geometry gives
    ``cos(phi) = cos(psi) = H/d``.  Zero outside the field of view.
    Reflected paths are taken as negligible and contribute nothing.
    """
    d = link_distance(uav, user)
    cos_psi = min(1.0, max(-1.0, uav.altitude / d))
    psi = math.degrees(math.acos(cos_psi))
    g = concentrator_gain(psi, params)
    if g == 0.0:
        return 0.0
    m = lambert_order(params.phi_half)
    return (m + 1.0) * params.rho / (2.0 * math.pi * d * d) * g * cos_psi**m * cos_psi


def los_probability(uav: UavPose, user: User, params: VlcParams) -> float:
    """Probability that the direct path is unblocked.

    Sigmoid in the elevation angle ``tau = arcsin(H/d)`` (degrees):
    ``1 / (1 + X exp(-Y (tau - X)))``.
    """
    d = link_distance(uav, user)
    tau = math.degrees(math.asin(min(1.0, uav.altitude / d)))
    return 1.0 / (1.0 + params.env_x * math.exp(-params.env_y * (tau - params.env_x)))


def average_gain(uav: UavPose, user: User, params: VlcParams) -> float:
    """Blockage-averaged gain: LoS probability times LoS gain."""
    return los_probability(uav, user, params) * los_gain(uav, user, params)


def homogeneous_los_factor(params: VlcParams) -> float:
    """The constant LoS probability used when budgeting power.

    Power budgets use one homogeneous factor for every link rather than the
    per-link sigmoid; by default it is the sigmoid evaluated at a 90-degree
    elevation (a receiver straight below its transmitter).
    """
    if params.b_bar is not None:
        return params.b_bar
    return 1.0 / (1.0 + params.env_x * math.exp(-params.env_y * (90.0 - params.env_x)))


def capacity(power: float, gain: float, ambient: float, params: VlcParams) -> float:
    """Achievable rate of an intensity-modulated link, Mbit/s.

    ``0.5 * log2(1 + (e / 2 pi) * (xi P h / (n_w + I))^2)`` where ``h`` is
    whichever gain the caller deems appropriate (the homogeneous average
    gain for budgeting, or a per-link diagnostic gain).
    """
    if power < 0.0 or gain < 0.0 or ambient < 0.0:
        raise ValueError("power, gain and ambient must be nonnegative")
    amp = params.xi * power * gain / (params.n_w + ambient)
    return 0.5 * math.log2(1.0 + _SNR_COEF * amp * amp)


def _rate_factor(rate: float) -> float:
    """``sqrt((2 pi / e) (2^{2R} - 1))``, the inverse of the rate law."""
    if rate < 0.0:
        raise ValueError(f"rate must be nonnegative, got {rate!r}")
    return math.sqrt((2.0 * math.pi / math.e) * (2.0 ** (2.0 * rate) - 1.0))


def _budget_gain(uav: UavPose, user: User, params: VlcParams) -> float:
    gain = homogeneous_los_factor(params) * los_gain(uav, user, params)
    if gain <= 0.0:
        raise InfeasibleGeometryError(
            f"user at ({user.x}, {user.y}) sees zero gain from UAV at "
            f"({uav.x}, {uav.y}); it lies outside the field of view"
        )
    return gain


def required_power(user: User, uav: UavPose, ambient: float, params: VlcParams) -> float:
    """Smallest transmit power meeting the user's rate demand.

    Exact inversion of :func:`capacity` at the homogeneous average gain:
    ``P = (n_w + I) sqrt((2 pi / e)(2^{2R} - 1)) / (xi B h)``.
    """
    if ambient < 0.0:
        raise ValueError("ambient must be nonnegative")
    return (params.n_w + ambient) * _rate_factor(user.rate) / (params.xi * _budget_gain(uav, user, params))


def illumination_power(user: User, uav: UavPose, ambient: float, params: VlcParams) -> float:
    """Smallest transmit power topping ambient light up to ``eta_r``.

    Solves ``xi P B h = max(eta_r - I, 0)``; zero when ambient light alone
    already meets the illumination target.
    """
    if ambient < 0.0:
        raise ValueError("ambient must be nonnegative")
    deficit = max(params.eta_r - ambient, 0.0)
    if deficit == 0.0:
        return 0.0
    return deficit / (params.xi * _budget_gain(uav, user, params))


def demand_coefficient(user: User, ambient: float, params: VlcParams) -> float:
    """Coefficient ``c_j`` in the distance law ``P = c_j d^(m+3)``.

    Folds both per-user requirements into one number: with
    ``l = 2 pi / (xi B (m+1) rho g H^(m+1))``, the power needed to serve
    the user from 3-D distance ``d`` is ``l * max(M_j, N_j) * d^(m+3)``,
    where ``M_j`` is the illumination deficit and ``N_j`` the rate term.
    Agrees with ``max(required_power, illumination_power)`` for any pose
    inside the field of view.
    """
    if ambient < 0.0:
        raise ValueError("ambient must be nonnegative")
    m = lambert_order(params.phi_half)
    g = concentrator_gain(0.0, params)
    b = homogeneous_los_factor(params)
    geom = 2.0 * math.pi / (
        params.xi * b * (m + 1.0) * params.rho * g * params.altitude ** (m + 1.0)
    )
    m_term = max(params.eta_r - ambient, 0.0)
    n_term = (params.n_w + ambient) * _rate_factor(user.rate)
    return geom * max(m_term, n_term)


def power_exponent(params: VlcParams) -> float:
    """Exponent ``m + 3`` of the per-user distance law."""
    return lambert_order(params.phi_half) + 3.0


def optimal_ambient(rate: float, params: VlcParams) -> float:
    """Ambient level minimizing the power demand of a user at ``rate``.

    The illumination deficit falls with ambient light while the rate term
    grows; the minimizer of their maximum is the crossing point
    ``(eta_r + n_w) / (1 + sqrt((2 pi / e)(2^{2R} - 1))) - n_w`` when that
    is nonnegative, and zero otherwise.
    """
    s = _rate_factor(rate)
    if params.eta_r < params.n_w * s:
        return 0.0
    return (params.eta_r + params.n_w) / (1.0 + s) - params.n_w
