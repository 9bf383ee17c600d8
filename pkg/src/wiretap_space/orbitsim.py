"""Coplanar circular-orbit pass model.

The transmitter satellite and the interceptor satellite fly circular
equatorial orbits, the ground station sits on the rotating equator, and all
three line up at ``t = 0`` (transmitter at zenith, interceptor directly
beneath it).  The module traces instantaneous collection efficiencies over
one pass, integrates them into an effective channel-degradation factor,
solves for the orbital exclusion radius achieving a target degradation, and
reports revisit/alignment periods.
"""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, replace
from typing import IO

import numpy as np

from .numerics import (
    DEFAULT_QUADRATURE,
    Interval,
    QuadratureSpec,
    find_root,
    gaussian_disk_fraction,
)

__all__ = [
    "PhysicalConstants",
    "DEFAULT_CONSTANTS",
    "OrbitScenario",
    "PassProfile",
    "StepSizeWarning",
    "PASS_PROFILE_COLUMNS",
    "angular_velocity",
    "pass_window",
    "instantaneous_efficiencies",
    "integrated_gamma",
    "required_orbital_exclusion",
    "alignment_periods",
    "write_pass_profile",
]


class StepSizeWarning(UserWarning):
    """The pass integral changed by more than 1% when the grid was refined."""


@dataclass(frozen=True)
class PhysicalConstants:
    """Two-body and Earth-rotation constants; overridable in configs."""

    earth_mu: float = 3.986004418e14
    earth_radius: float = 6.371e6
    earth_angular_velocity: float = 7.2921159e-5


DEFAULT_CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class OrbitScenario:
    """Two-satellite plus ground-station configuration.

    ``eve_orbit_offset`` is the radial separation of the interceptor's orbit
    below the transmitter's (the orbital exclusion radius).  The time grid is
    two-zone: ``fine_time_step`` inside ``|t| < fine_window`` where the
    interceptor sweeps through the beam, ``time_step`` elsewhere.

    ``bob_aperture_model`` selects how the ground station's collected
    fraction is computed: ``"gaussian"`` (encircled power, default) or
    ``"footprint"`` (aperture-over-footprint area ratio).  The footprint
    approximation overstates the loss roughly twofold near culmination,
    where the beam footprint is comparable to the telescope, so the
    encircled-power form is the default for pass integrals.
    ``legacy_beam_width`` widens the beam to ``theta * d`` instead of
    ``theta * d / 2`` for comparison runs.
    """

    alice_altitude: float = 600e3
    eve_orbit_offset: float = 16e3
    eve_telescope_diameter: float = 2.0
    diam_bob: float = 1.0
    eta_b: float = 0.01
    divergence_full_angle: float = 1e-5
    min_elevation: float = math.radians(20.0)
    time_step: float = 1.0
    fine_time_step: float = 2e-4
    fine_window: float = 5.0
    bob_aperture_model: str = "gaussian"
    legacy_beam_width: bool = False

    def __post_init__(self):
        problems = []
        if not self.alice_altitude > 0:
            problems.append(f"alice_altitude must be > 0, got {self.alice_altitude}")
        if not 0.0 < self.eve_orbit_offset < self.alice_altitude:
            problems.append(
                f"eve_orbit_offset must be in (0, alice_altitude), got {self.eve_orbit_offset}"
            )
        for name in ("eve_telescope_diameter", "diam_bob", "divergence_full_angle",
                     "time_step", "fine_time_step", "fine_window"):
            if not getattr(self, name) > 0:
                problems.append(f"{name} must be > 0, got {getattr(self, name)}")
        if not 0.0 < self.eta_b <= 1.0:
            problems.append(f"eta_b must be in (0, 1], got {self.eta_b}")
        if not 0.0 < self.min_elevation <= 0.5 * math.pi:
            problems.append(f"min_elevation must be in (0, pi/2], got {self.min_elevation}")
        if self.bob_aperture_model not in ("gaussian", "footprint"):
            problems.append(f"unknown bob_aperture_model: {self.bob_aperture_model!r}")
        if problems:
            raise ValueError("; ".join(problems))


@dataclass(frozen=True)
class PassProfile:
    """Time series over one pass plus the integrated degradation factor."""

    times: np.ndarray
    eta_bob: np.ndarray
    eta_eve: np.ndarray
    d_bob: np.ndarray
    d_eve: np.ndarray
    beam_offset: np.ndarray
    pass_half_duration: float
    integrated_eta_bob: float
    integrated_eta_eve: float
    integrated_gamma: float
    convergence_delta: float


def angular_velocity(orbit_radius: float, constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """Circular-orbit angular rate ``sqrt(GM / a^3)``."""
    if not orbit_radius > constants.earth_radius:
        raise ValueError(
            f"orbit_radius must exceed the Earth radius {constants.earth_radius}, got {orbit_radius}"
        )
    return math.sqrt(constants.earth_mu / orbit_radius**3)


def _elevation(psi: float, orbit_radius: float, earth_radius: float) -> float:
    """Elevation of the satellite at central angle ``psi`` from the station."""
    slant = math.sqrt(
        orbit_radius**2 + earth_radius**2 - 2.0 * orbit_radius * earth_radius * math.cos(psi)
    )
    return math.asin((orbit_radius * math.cos(psi) - earth_radius) / slant)


def pass_window(scenario: OrbitScenario, constants: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """Half-width T of the symmetric integration window ``[-T, T]``.

    T is the total time the transmitter spends above ``min_elevation``
    (culmination-centred, so twice the culmination-to-crossing time), capped
    at the horizon-to-horizon limit so the line of sight never drops below
    the geometric horizon inside the window.
    """
    orbit_radius = constants.earth_radius + scenario.alice_altitude
    rel_rate = angular_velocity(orbit_radius, constants) - constants.earth_angular_velocity
    if rel_rate <= 0:
        raise ValueError("transmitter must move faster than the ground station rotates")
    if scenario.min_elevation >= 0.5 * math.pi - 1e-12:
        return 0.0
    psi_horizon = math.acos(constants.earth_radius / orbit_radius)

    def above_min(psi: float) -> float:
        return _elevation(psi, orbit_radius, constants.earth_radius) - scenario.min_elevation

    psi_cross = find_root(above_min, Interval(1e-12, psi_horizon), tol=1e-12)
    return min(2.0 * psi_cross / rel_rate, psi_horizon / rel_rate)


def _pass_geometry(scenario: OrbitScenario, constants: PhysicalConstants, times: np.ndarray):
    """Vectorised positions and beam geometry at the given times.

    Returns (d_bob, d_eve, along_beam, beam_offset): transmitter-station and
    transmitter-interceptor distances, the interceptor's projection onto the
    transmitter-to-station beam axis, and her perpendicular distance from it.
    """
    a_alice = constants.earth_radius + scenario.alice_altitude
    a_eve = a_alice - scenario.eve_orbit_offset
    w_alice = angular_velocity(a_alice, constants)
    w_eve = angular_velocity(a_eve, constants)
    w_ground = constants.earth_angular_velocity

    ax, ay = a_alice * np.cos(w_alice * times), a_alice * np.sin(w_alice * times)
    ex, ey = a_eve * np.cos(w_eve * times), a_eve * np.sin(w_eve * times)
    bx = constants.earth_radius * np.cos(w_ground * times)
    by = constants.earth_radius * np.sin(w_ground * times)

    abx, aby = bx - ax, by - ay
    d_bob = np.hypot(abx, aby)
    ux, uy = abx / d_bob, aby / d_bob
    aex, aey = ex - ax, ey - ay
    d_eve = np.hypot(aex, aey)
    along = aex * ux + aey * uy
    beam_offset = np.hypot(aex - along * ux, aey - along * uy)
    return d_bob, d_eve, along, beam_offset


def _eta_bob_series(scenario: OrbitScenario, d_bob: np.ndarray) -> np.ndarray:
    theta = scenario.divergence_full_angle
    if scenario.bob_aperture_model == "footprint":
        frac = np.minimum(scenario.diam_bob**2 / (theta * d_bob) ** 2, 1.0)
    else:
        w = 0.5 * theta * d_bob
        a = 0.5 * scenario.diam_bob
        frac = 1.0 - np.exp(-2.0 * a * a / (w * w))
    return scenario.eta_b * frac


def _eta_eve_series(
    scenario: OrbitScenario,
    d_bob: np.ndarray,
    along: np.ndarray,
    beam_offset: np.ndarray,
    quad_spec: QuadratureSpec,
) -> np.ndarray:
    theta = scenario.divergence_full_angle
    disk = 0.5 * scenario.eve_telescope_diameter
    widths = theta * along if scenario.legacy_beam_width else 0.5 * theta * along
    eta = np.zeros_like(d_bob)
    # Interceptor collects only between transmitter and station, and only
    # where her disk is within ~8 beam widths of the axis (beyond that the
    # captured fraction is below 1e-19).
    candidates = (along > 0.0) & (along < d_bob) & (beam_offset <= disk + 8.0 * widths)
    for i in np.nonzero(candidates)[0]:
        eta[i] = gaussian_disk_fraction(float(widths[i]), float(beam_offset[i]), disk, quad_spec)
    return eta


def instantaneous_efficiencies(
    scenario: OrbitScenario,
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
    t: float = 0.0,
) -> tuple[float, float]:
    """Collection efficiencies of station and interceptor at time ``t``."""
    times = np.array([float(t)])
    d_bob, _, along, beam_offset = _pass_geometry(scenario, constants, times)
    eta_bob = _eta_bob_series(scenario, d_bob)
    eta_eve = _eta_eve_series(scenario, d_bob, along, beam_offset, DEFAULT_QUADRATURE)
    return float(eta_bob[0]), float(eta_eve[0])


def _two_zone_times(half_duration: float, fine: float, coarse: float, fine_window: float) -> np.ndarray:
    window = min(fine_window, half_duration)
    positive = np.arange(0.0, window, fine)
    if window < half_duration:
        positive = np.concatenate(
            [positive, np.arange(window, half_duration, coarse), [half_duration]]
        )
    else:
        positive = np.concatenate([positive, [half_duration]])
    return np.concatenate([-positive[:0:-1], positive])


def _profile_once(
    scenario: OrbitScenario,
    constants: PhysicalConstants,
    half_duration: float,
    fine: float,
    coarse: float,
):
    times = _two_zone_times(half_duration, fine, coarse, scenario.fine_window)
    d_bob, d_eve, along, beam_offset = _pass_geometry(scenario, constants, times)
    eta_bob = _eta_bob_series(scenario, d_bob)
    eta_eve = _eta_eve_series(scenario, d_bob, along, beam_offset, DEFAULT_QUADRATURE)
    int_bob = float(np.trapezoid(eta_bob, times))
    int_eve = float(np.trapezoid(eta_eve, times))
    return times, eta_bob, eta_eve, d_bob, d_eve, beam_offset, int_bob, int_eve


def integrated_gamma(
    scenario: OrbitScenario, constants: PhysicalConstants = DEFAULT_CONSTANTS
) -> PassProfile:
    """Trace one pass and integrate the degradation factor.

    The factor is the interceptor's time-integrated collection efficiency
    over the station's, both on the symmetric window from
    :func:`pass_window`.  The integral is evaluated twice, at the scenario's
    steps and at half steps; the refined result is returned and a
    :class:`StepSizeWarning` is emitted when the two disagree by more than 1%.
    """
    half = pass_window(scenario, constants)
    if half <= 0.0:
        raise ValueError("pass window is empty; lower min_elevation")
    coarse, fine = scenario.time_step, scenario.fine_time_step
    *_, int_bob_1, int_eve_1 = _profile_once(scenario, constants, half, fine, coarse)
    times, eta_bob, eta_eve, d_bob, d_eve, beam_offset, int_bob_2, int_eve_2 = _profile_once(
        scenario, constants, half, 0.5 * fine, 0.5 * coarse
    )
    gamma_1 = int_eve_1 / int_bob_1
    gamma_2 = int_eve_2 / int_bob_2
    delta = abs(gamma_2 - gamma_1) / gamma_2 if gamma_2 > 0 else abs(gamma_2 - gamma_1)
    if delta > 0.01:
        warnings.warn(
            f"integrated degradation changed by {delta:.2%} on step halving; "
            "decrease the time steps",
            StepSizeWarning,
            stacklevel=2,
        )
    return PassProfile(
        times=times,
        eta_bob=eta_bob,
        eta_eve=eta_eve,
        d_bob=d_bob,
        d_eve=d_eve,
        beam_offset=beam_offset,
        pass_half_duration=half,
        integrated_eta_bob=int_bob_2,
        integrated_eta_eve=int_eve_2,
        integrated_gamma=gamma_2,
        convergence_delta=delta,
    )


def required_orbital_exclusion(
    scenario: OrbitScenario,
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
    gamma_target: float = 0.1,
    offset_bounds: tuple[float, float] = (1e3, 2e5),
    tol: float = 25.0,
) -> float:
    """Orbital separation below the transmitter achieving ``gamma_target``.

    Bisects :func:`integrated_gamma` over the offset; each probe is a full
    pass integration, so the default tolerance is a coarse 25 m.
    """
    if not 0.0 < gamma_target < 1.0:
        raise ValueError(f"gamma_target must be in (0, 1), got {gamma_target}")

    def excess(offset: float) -> float:
        probe = replace(scenario, eve_orbit_offset=offset)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", StepSizeWarning)
            return integrated_gamma(probe, constants).integrated_gamma - gamma_target

    return find_root(excess, Interval(*offset_bounds), tol=tol)


def alignment_periods(
    scenario: OrbitScenario, constants: PhysicalConstants = DEFAULT_CONSTANTS
) -> tuple[float, float]:
    """(station revisit period, interceptor alignment period) in seconds.

    The revisit period is set by the transmitter-vs-ground relative angular
    rate; the alignment period by the interceptor-vs-transmitter rate, which
    shrinks toward zero as their orbits approach (period diverges).
    """
    a_alice = constants.earth_radius + scenario.alice_altitude
    a_eve = a_alice - scenario.eve_orbit_offset
    w_alice = angular_velocity(a_alice, constants)
    w_eve = angular_velocity(a_eve, constants)
    d_ground = w_alice - constants.earth_angular_velocity
    d_eve = w_eve - w_alice
    if d_ground == 0.0 or d_eve == 0.0:
        raise ValueError("degenerate configuration: equal angular rates")
    return 2.0 * math.pi / d_ground, 2.0 * math.pi / d_eve


PASS_PROFILE_COLUMNS = ("t_s", "eta_bob", "eta_eve", "d_bob_m", "d_eve_m", "offset_m")


def write_pass_profile(profile: PassProfile, stream: IO[str]) -> None:
    """Emit the pass time series as CSV with a fixed column set."""
    writer = csv.writer(stream, lineterminator="\r\n")
    writer.writerow(PASS_PROFILE_COLUMNS)
    for i in range(len(profile.times)):
        writer.writerow(
            [
                f"{profile.times[i]:.9g}",
                f"{profile.eta_bob[i]:.9g}",
                f"{profile.eta_eve[i]:.9g}",
                f"{profile.d_bob[i]:.9g}",
                f"{profile.d_eve[i]:.9g}",
                f"{profile.beam_offset[i]:.9g}",
            ]
        )
