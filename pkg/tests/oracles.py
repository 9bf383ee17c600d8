"""Independent reference implementations used only by the tests.

Nothing here shares code with the library paths it checks: the disk
integral is estimated by Monte Carlo instead of quadrature, maxima by dense
grid enumeration instead of golden section, roots by a plain bisection loop,
and orbital periods by step-wise propagation instead of rate differences.
"""
from __future__ import annotations

import math

import mpmath
import numpy as np

mpmath.mp.dps = 50


def entropy_bits(p) -> float:
    """Arbitrary-precision binary entropy in bits."""
    p = mpmath.mpf(p)
    if p == 0 or p == 1:
        return 0.0
    one = mpmath.mpf(1)
    return float(-(p * mpmath.log(p, 2) + (one - p) * mpmath.log(one - p, 2)))


def mc_disk_fraction(
    w: float, offset: float, disk_radius: float, n_samples: int, seed: int
) -> tuple[float, float]:
    """Monte-Carlo estimate of the beam power fraction on an offset disk.

    Samples points uniformly in the disk by rejection from its bounding
    square, averages the beam intensity over the square (zero outside the
    disk) and scales by the square area.  Returns (estimate, standard error).
    """
    rng = np.random.default_rng(seed)
    total = 0.0
    total_sq = 0.0
    done = 0
    batch = 4_000_000
    while done < n_samples:
        m = min(batch, n_samples - done)
        x = rng.uniform(offset - disk_radius, offset + disk_radius, m)
        y = rng.uniform(-disk_radius, disk_radius, m)
        inside = (x - offset) ** 2 + y**2 <= disk_radius**2
        density = np.where(
            inside, np.exp(-2.0 * (x * x + y * y) / (w * w)) * 2.0 / (math.pi * w * w), 0.0
        )
        total += float(density.sum())
        total_sq += float((density * density).sum())
        done += m
    area = (2.0 * disk_radius) ** 2
    mean = total / done
    variance = max(total_sq / done - mean * mean, 0.0)
    return mean * area, math.sqrt(variance / done) * area


def mc_disk_fraction_adaptive(
    w: float,
    offset: float,
    disk_radius: float,
    seed: int,
    rel_target: float = 2.5e-4,
    max_samples: int = 200_000_000,
) -> tuple[float, float]:
    """Monte-Carlo estimate refined until the standard error is small enough."""
    n = 2_000_000
    while True:
        estimate, stderr = mc_disk_fraction(w, offset, disk_radius, n, seed)
        if estimate > 0.0 and stderr / estimate <= rel_target:
            return estimate, stderr
        if n >= max_samples:
            return estimate, stderr
        n = min(n * 4, max_samples)


def grid_argmax(f, lo: float, hi: float, n: int = 10_000_001) -> float:
    """Dense-grid brute-force argmax of a vectorisable function."""
    xs = np.linspace(lo, hi, n)
    return float(xs[int(np.argmax(f(xs)))])


def bisect_reference(f, lo: float, hi: float, iterations: int = 100) -> float:
    """Plain bisection loop, independent of the library implementation."""
    flo = f(lo)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if (f(mid) > 0.0) == (flo > 0.0):
            lo = mid
            flo = f(mid)
        else:
            hi = mid
    return 0.5 * (lo + hi)


def propagated_lap_period(
    omega_fast: float, omega_slow: float, duration: float, step: float
) -> float:
    """Mean time between laps from step-wise propagation of both angles.

    Both bodies advance on a fixed grid; a lap event is a wrap of the
    relative angle past a multiple of 2*pi.  Returns the mean spacing of
    detected events (at least two events must occur within ``duration``).
    """
    times = np.arange(0.0, duration, step)
    relative = (omega_fast - omega_slow) * times
    laps = np.floor(relative / (2.0 * math.pi))
    events = times[1:][np.diff(laps) > 0]
    if events.size < 2:
        raise ValueError("fewer than two lap events; extend the propagation")
    return float(np.mean(np.diff(events)))
