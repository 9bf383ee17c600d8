"""Shared numerical primitives.

Binary Shannon entropy, bounded 1-D maximisation (grid scan plus
golden-section refinement), bracketed bisection, and the power fraction of a
Gaussian beam falling on an offset circular disk.  Everything here is a pure
function of its inputs and safe to call concurrently.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from scipy.integrate import quad
from scipy.special import erf

__all__ = [
    "Interval",
    "QuadratureSpec",
    "DEFAULT_QUADRATURE",
    "BracketError",
    "ToleranceNotReached",
    "binary_entropy",
    "maximize_1d",
    "find_root",
    "gaussian_disk_fraction",
]

# Inputs within this distance of a closed domain boundary are clamped rather
# than rejected, so downstream float rounding does not trip domain checks.
_CLAMP_EPS = 1e-12

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class BracketError(ValueError):
    """The supplied bracket does not straddle a sign change."""


class ToleranceNotReached(RuntimeError):
    """Adaptive quadrature could not meet the requested tolerance.

    Attributes:
        best_estimate: the most accurate value obtained.
        residual: the estimated absolute error of ``best_estimate``.
    """

    def __init__(self, message: str, best_estimate: float, residual: float):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.residual = residual


@dataclass(frozen=True)
class Interval:
    """A finite open interval ``(lo, hi)`` with ``lo < hi``."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError(f"interval bounds must be finite, got ({self.lo}, {self.hi})")
        if not self.lo < self.hi:
            raise ValueError(f"interval requires lo < hi, got ({self.lo}, {self.hi})")

    @property
    def width(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class QuadratureSpec:
    """Accuracy contract for the disk-fraction quadrature."""

    absolute_tolerance: float = 1e-11
    max_subdivisions: int = 200

    def __post_init__(self):
        if not self.absolute_tolerance > 0:
            raise ValueError(f"absolute_tolerance must be > 0, got {self.absolute_tolerance}")
        if self.max_subdivisions < 1:
            raise ValueError(f"max_subdivisions must be >= 1, got {self.max_subdivisions}")


DEFAULT_QUADRATURE = QuadratureSpec()


def _clamped_probability(p: float, name: str = "probability") -> float:
    if p < 0.0:
        if p >= -_CLAMP_EPS:
            return 0.0
        raise ValueError(f"{name} out of [0, 1]: {p}")
    if p > 1.0:
        if p <= 1.0 + _CLAMP_EPS:
            return 1.0
        raise ValueError(f"{name} out of [0, 1]: {p}")
    return p


def binary_entropy(p: float) -> float:
    """Binary Shannon entropy in bits, with the convention 0*log2(0) = 0."""
    p = _clamped_probability(p)
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def _golden_max(f: Callable[[float], float], lo: float, hi: float, tol: float):
    """Golden-section search for a maximum on [lo, hi]; one f-eval per step."""
    c = hi - _INV_PHI * (hi - lo)
    d = lo + _INV_PHI * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - _INV_PHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INV_PHI * (hi - lo)
            fd = f(d)
    if fc >= fd:
        return c, fc
    return d, fd


def maximize_1d(
    f: Callable[[float], float],
    domain: Interval,
    tol: float,
    grid_points: int = 64,
) -> tuple[float, float]:
    """Maximise ``f`` over ``domain``; returns ``(argmax, max)``.

    A coarse grid scan (including both endpoints) seeds a golden-section
    refinement of the best grid cell's neighbourhood.  The grid seed makes the
    search robust to mild non-unimodality, e.g. flat clipped plateaus next to
    a single interior peak.
    """
    if not tol > 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    if grid_points < 2:
        raise ValueError(f"grid_points must be >= 2, got {grid_points}")
    lo, hi = domain.lo, domain.hi
    step = (hi - lo) / (grid_points - 1)
    best_x, best_f = lo, f(lo)
    best_i = 0
    for i in range(1, grid_points):
        x = lo + i * step if i < grid_points - 1 else hi
        fx = f(x)
        if fx > best_f:
            best_x, best_f, best_i = x, fx, i
    sub_lo = max(lo, lo + (best_i - 1) * step)
    sub_hi = min(hi, lo + (best_i + 1) * step)
    if sub_hi - sub_lo > tol:
        gx, gf = _golden_max(f, sub_lo, sub_hi, tol)
        if gf > best_f:
            best_x, best_f = gx, gf
    return best_x, best_f


def find_root(f: Callable[[float], float], bracket: Interval, tol: float) -> float:
    """Bisection on ``bracket`` down to width ``tol``; returns the midpoint."""
    if not tol > 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    lo, hi = bracket.lo, bracket.hi
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise BracketError(
            f"no sign change on [{lo}, {hi}]: f(lo)={flo}, f(hi)={fhi}"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if (fmid > 0.0) == (flo > 0.0):
            lo, flo = mid, fmid
        else:
            hi, fhi = mid, fmid
    return 0.5 * (lo + hi)


def gaussian_disk_fraction(
    beam_radius_w: float,
    offset: float,
    disk_radius: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """Fraction of a Gaussian beam's power collected by an offset disk.

    The beam intensity profile is ``(2 / (pi w^2)) exp(-2 r^2 / w^2)`` where
    ``w`` is the 1/e^2 radius.  The disk has radius ``disk_radius`` and its
    centre sits ``offset`` metres from the beam axis.

    Parameters
    ----------
    beam_radius_w : float
        Beam 1/e^2 radius at the collection plane (> 0).
    offset : float
        Distance of the disk centre from the beam axis (>= 0).
    disk_radius : float
        Radius of the collecting disk (>= 0).
    spec : QuadratureSpec
        Accuracy contract for the adaptive quadrature.

    Returns
    -------
    float
        Collected power fraction in [0, 1].

    Notes
    -----
    The double integral is reduced to a single adaptive integral over the
    chord position: for each abscissa the along-chord integral of the Gaussian
    is analytic (erf).  Raises :class:`ToleranceNotReached` when the requested
    tolerance cannot be certified; the exception carries the best estimate.
    """
    if not beam_radius_w > 0:
        raise ValueError(f"beam_radius_w must be > 0, got {beam_radius_w}")
    if offset < 0:
        raise ValueError(f"offset must be >= 0, got {offset}")
    if disk_radius < 0:
        raise ValueError(f"disk_radius must be >= 0, got {disk_radius}")
    if disk_radius == 0.0:
        return 0.0

    w = beam_radius_w
    # Beyond 13.5 beam radii the intensity is < 1e-158; clip the integration
    # range there so adaptive subdivision is not wasted on dead tails.
    clip = 13.5 * w
    lo = max(offset - disk_radius, -clip)
    hi = min(offset + disk_radius, clip)
    if lo >= hi:
        return 0.0

    sqrt2_over_w = math.sqrt(2.0) / w
    inv_w2 = 1.0 / (w * w)

    def chord(x: float) -> float:
        half = disk_radius * disk_radius - (x - offset) * (x - offset)
        if half <= 0.0:
            return 0.0
        return math.exp(-2.0 * x * x * inv_w2) * erf(sqrt2_over_w * math.sqrt(half))

    prefactor = math.sqrt(2.0 / math.pi) / w
    value, abserr, *rest = quad(
        chord,
        lo,
        hi,
        epsabs=spec.absolute_tolerance / prefactor,
        epsrel=1e-12,
        limit=spec.max_subdivisions,
        full_output=1,
    )
    estimate = prefactor * value
    residual = prefactor * abserr
    # rest[0] is QUADPACK's info dict; a warning message is appended after it
    # only when the integrator gave up.
    if len(rest) > 1 or residual > spec.absolute_tolerance * (1.0 + 1e-9) + 1e-15 * abs(estimate):
        raise ToleranceNotReached(
            f"disk-fraction quadrature residual {residual:.3e} exceeds "
            f"tolerance {spec.absolute_tolerance:.3e}",
            best_estimate=min(max(estimate, 0.0), 1.0),
            residual=residual,
        )
    return min(max(estimate, 0.0), 1.0)
