"""Static downlink geometry and eavesdropper exclusion radii.

The transmitted beam is Gaussian with a full divergence angle ``theta_div``
quoted at 1/e^2, so its 1/e^2 radius at range ``d`` is ``theta_div * d / 2``.
Collection fractions use the footprint-area approximation (aperture area over
beam footprint area) for the legitimate receiver; the interceptor's fraction
adds the Gaussian tail factor imposed by the exclusion angle.

Two exclusion-radius models are provided.  The "partial" model gives the
interceptor a fixed telescope at the same range as the receiver and inverts
the degradation ratio in closed form.  The "total" model is more
conservative: the interceptor collects *all* light outside the exclusion
cone, and the radius solves an implicit equation handled by bisection.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .numerics import Interval, find_root

__all__ = [
    "LinkBudgetWarning",
    "BeamModel",
    "LinkGeometry",
    "ExclusionCurveRow",
    "bob_free_space",
    "eve_free_space",
    "gamma_partial",
    "exclusion_radius_partial",
    "exclusion_radius_total",
    "radius_vs_gamma_curve",
    "db_to_fraction",
    "fraction_to_db",
]


class LinkBudgetWarning(UserWarning):
    """Signals a clamped or otherwise suspicious link-budget value."""


def db_to_fraction(loss_db: float) -> float:
    """Convert a positive loss in dB to a transmission fraction."""
    return 10.0 ** (-loss_db / 10.0)


def fraction_to_db(fraction: float) -> float:
    """Convert a transmission fraction to a positive loss in dB."""
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"fraction must be in (0, 1], got {fraction}")
    return -10.0 * math.log10(fraction)


@dataclass(frozen=True)
class BeamModel:
    """Linear far-field beam growth: 1/e^2 radius ``divergence * d / 2``."""

    divergence_full_angle: float

    def __post_init__(self):
        if not self.divergence_full_angle > 0:
            raise ValueError(
                f"divergence_full_angle must be > 0, got {self.divergence_full_angle}"
            )

    def radius_at(self, distance: float) -> float:
        if distance < 0:
            raise ValueError(f"distance must be >= 0, got {distance}")
        return 0.5 * self.divergence_full_angle * distance


@dataclass(frozen=True)
class LinkGeometry:
    """Downlink geometry for the receiver and a ground-based interceptor.

    Distances are transmitter-to-receiver slant ranges; telescope sizes are
    diameters; ``eta_b`` lumps every receiver-side loss (atmosphere,
    pointing, optics, detector) into one fraction.
    """

    dist_bob: float = 1.2e6
    dist_eve: float = 1.2e6
    diam_bob: float = 1.0
    diam_eve: float = 2.0
    divergence_full_angle: float = 1e-5
    eta_b: float = 0.01
    exclusion_radius: float = 12.5

    def __post_init__(self):
        problems = []
        for name in ("dist_bob", "dist_eve", "diam_bob", "diam_eve", "divergence_full_angle"):
            if not getattr(self, name) > 0:
                problems.append(f"{name} must be > 0, got {getattr(self, name)}")
        if not 0.0 < self.eta_b <= 1.0:
            problems.append(f"eta_b must be in (0, 1], got {self.eta_b}")
        if self.exclusion_radius < 0:
            problems.append(f"exclusion_radius must be >= 0, got {self.exclusion_radius}")
        if problems:
            raise ValueError("; ".join(problems))

    @property
    def exclusion_angle(self) -> float:
        """Small-angle exclusion half-angle ``r_E / d_B``."""
        return self.exclusion_radius / self.dist_bob

    @property
    def beam(self) -> BeamModel:
        return BeamModel(self.divergence_full_angle)


def bob_free_space(geom: LinkGeometry, exact_gaussian: bool = False) -> float:
    """Fraction of transmitted light collected by the receiver aperture.

    The default footprint-area approximation is ``D^2 / (theta^2 d^2)``,
    clamped to 1 (with a warning) when the footprint is smaller than the
    aperture.  ``exact_gaussian=True`` switches to the encircled-power
    expression ``1 - exp(-2 a^2 / w(d)^2)`` for sensitivity studies.
    """
    if exact_gaussian:
        w = geom.beam.radius_at(geom.dist_bob)
        a = 0.5 * geom.diam_bob
        return 1.0 - math.exp(-2.0 * a * a / (w * w))
    ratio = geom.diam_bob**2 / (geom.divergence_full_angle * geom.dist_bob) ** 2
    if ratio > 1.0:
        warnings.warn(
            f"beam footprint smaller than receiver aperture (ratio {ratio:.3g}); clamped to 1",
            LinkBudgetWarning,
            stacklevel=2,
        )
        return 1.0
    return ratio


def eve_free_space(geom: LinkGeometry) -> float:
    """Interceptor's collection fraction outside the exclusion angle.

    Footprint ratio at the interceptor's range times the Gaussian tail factor
    ``exp(-2 (2 theta_E / theta_div)^2)``.
    """
    ratio = geom.diam_eve**2 / (geom.divergence_full_angle * geom.dist_eve) ** 2
    tail = math.exp(-2.0 * (2.0 * geom.exclusion_angle / geom.divergence_full_angle) ** 2)
    return ratio * tail


def gamma_partial(geom: LinkGeometry) -> float:
    """Channel-degradation ratio for the fixed-telescope interceptor model.

    ``(1/eta_b) (d_B/d_E)^2 (D_E/D_B)^2 exp(-2 (2 theta_E/theta_div)^2)``.
    Values >= 1 are legal outputs (they mean no secrecy is possible) and are
    rejected only when fed into secrecy computations.
    """
    tail = math.exp(-2.0 * (2.0 * geom.exclusion_angle / geom.divergence_full_angle) ** 2)
    return (
        (1.0 / geom.eta_b)
        * (geom.dist_bob / geom.dist_eve) ** 2
        * (geom.diam_eve / geom.diam_bob) ** 2
        * tail
    )


def exclusion_radius_partial(
    gamma_target: float,
    dist: float,
    eta_b: float,
    diam_ratio_eve_over_bob: float,
    divergence: float,
) -> float:
    """Exclusion radius achieving ``gamma_target`` against a fixed telescope.

    Inverts :func:`gamma_partial` at equal ranges:
    ``r = (theta d / 2) sqrt( ln((1/gamma)(1/eta_b)(D_E/D_B)^2) / 2 )``
    with the natural logarithm.

    Raises ``ValueError`` when the logarithm argument is below 1, i.e. when
    the target degradation is met with no exclusion zone at all; an argument
    of exactly 1 returns 0.
    """
    if not 0.0 < gamma_target < 1.0:
        raise ValueError(f"gamma_target must be in (0, 1), got {gamma_target}")
    if not dist > 0 or not divergence > 0 or not diam_ratio_eve_over_bob > 0:
        raise ValueError("dist, divergence and diameter ratio must be > 0")
    if not 0.0 < eta_b <= 1.0:
        raise ValueError(f"eta_b must be in (0, 1], got {eta_b}")
    log_arg = (1.0 / gamma_target) * (1.0 / eta_b) * diam_ratio_eve_over_bob**2
    if log_arg < 1.0:
        raise ValueError(
            f"no exclusion radius needed: degradation target already met (log argument {log_arg:.4g} < 1)"
        )
    return 0.5 * divergence * dist * math.sqrt(0.5 * math.log(log_arg))


def exclusion_radius_total(
    gamma_target: float, dist: float, diam_bob: float, divergence: float
) -> float:
    """Exclusion radius when the interceptor collects *all* outside light.

    Solves ``exp(-2 (r/(theta d))^2) = gamma (1 - exp(-2 (D_B/(theta d))^2))``
    for ``r`` by bisection on ``[0, 10 w(d)]``: the left side is the beam
    power beyond radius ``r`` on the outside-cone scale, the right side the
    target fraction of the receiver's collected power.
    """
    if not 0.0 < gamma_target < 1.0:
        raise ValueError(f"gamma_target must be in (0, 1), got {gamma_target}")
    if not dist > 0 or not diam_bob > 0 or not divergence > 0:
        raise ValueError("dist, diam_bob and divergence must be > 0")
    scale = divergence * dist
    rhs = gamma_target * (1.0 - math.exp(-2.0 * (diam_bob / scale) ** 2))
    w = 0.5 * scale

    def imbalance(r: float) -> float:
        return math.exp(-2.0 * (r / scale) ** 2) - rhs

    return find_root(imbalance, Interval(0.0, 10.0 * w), tol=1e-10 * max(w, 1.0))


@dataclass(frozen=True)
class ExclusionCurveRow:
    gamma: float
    radius_partial: float
    radius_total: float


def radius_vs_gamma_curve(geom: LinkGeometry, gamma_grid: list[float]) -> list[ExclusionCurveRow]:
    """Exclusion radii for both interceptor models over a degradation grid."""
    rows = []
    ratio = geom.diam_eve / geom.diam_bob
    for gamma in gamma_grid:
        rows.append(
            ExclusionCurveRow(
                gamma=gamma,
                radius_partial=exclusion_radius_partial(
                    gamma, geom.dist_bob, geom.eta_b, ratio, geom.divergence_full_angle
                ),
                radius_total=exclusion_radius_total(
                    gamma, geom.dist_bob, geom.diam_bob, geom.divergence_full_angle
                ),
            )
        )
    return rows
