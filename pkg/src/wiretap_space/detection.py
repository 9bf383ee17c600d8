"""Quantum detection theory for the binary coherent-state ensemble.

An on-off keyed source emits either vacuum or a coherent pulse.  After
attenuation the receiver sees two pure states whose overlap is
``c = exp(-nbar/2)`` with ``nbar`` the received mean photon number; all
discrimination quantities below depend on the states only through ``c``.
Angles are kept in radians; degree rendering belongs to the reporting layer.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .numerics import Interval, binary_entropy, maximize_1d

__all__ = [
    "BinaryCoherentEnsemble",
    "HelstromSolution",
    "overlap",
    "distinguishability_angle",
    "helstrom_error",
    "helstrom_projector",
    "holevo_binary",
]


@dataclass(frozen=True)
class BinaryCoherentEnsemble:
    """Vacuum/coherent pair at a receiver.

    ``mean_photons`` is the mean photon number of the non-vacuum symbol at
    that receiver (all losses already applied); ``prior_q`` is the prior
    probability of the vacuum symbol.
    """

    mean_photons: float
    prior_q: float = 0.5

    def __post_init__(self):
        if self.mean_photons < 0:
            raise ValueError(f"mean_photons must be >= 0, got {self.mean_photons}")
        if not 0.0 <= self.prior_q <= 1.0:
            raise ValueError(f"prior_q must be in [0, 1], got {self.prior_q}")


@dataclass(frozen=True)
class HelstromSolution:
    """Minimum-error projective measurement in the span of the two states.

    ``projector_angle_0`` (``_1``) is the angle between the outcome-0
    (outcome-1) projector and the corresponding signal state, so the
    conditional error probabilities are ``sin^2`` of the angles.  The angles
    satisfy ``projector_angle_0 + projector_angle_1 = pi/2 - angle_phi``.
    """

    avg_error: float
    error_given_0: float
    error_given_1: float
    angle_phi: float
    projector_angle_0: float
    projector_angle_1: float


def overlap(mean_photons: float) -> float:
    """State overlap ``exp(-mean_photons/2)`` of vacuum vs coherent pulse."""
    if mean_photons < 0:
        raise ValueError(f"mean_photons must be >= 0, got {mean_photons}")
    return math.exp(-0.5 * mean_photons)


def distinguishability_angle(mean_photons: float) -> float:
    """Angle ``arccos(overlap)`` between the two states, in [0, pi/2)."""
    return math.acos(overlap(mean_photons))


def helstrom_error(ensemble: BinaryCoherentEnsemble) -> float:
    """Minimum average error probability for one-shot discrimination.

    Closed form for two pure states with prior ``q``:
    ``(1 - sqrt(1 - 4 q (1-q) exp(-nbar))) / 2``.
    """
    q = ensemble.prior_q
    radicand = 1.0 - 4.0 * q * (1.0 - q) * math.exp(-ensemble.mean_photons)
    return 0.5 * (1.0 - math.sqrt(max(radicand, 0.0)))


def helstrom_projector(ensemble: BinaryCoherentEnsemble) -> HelstromSolution:
    """Optimal projective measurement and its conditional error probabilities.

    Within the rank-2 span the projector angles are constrained by
    ``phi0 + phi1 = pi/2 - phi`` and chosen to minimise
    ``q sin^2(phi0) + (1-q) sin^2(phi1)``.  For the uniform prior the
    symmetric split ``phi0 = phi1 = (pi/2 - phi)/2`` is optimal and is used
    directly; otherwise the angle is found numerically.  The resulting average
    error always equals :func:`helstrom_error`.
    """
    q = ensemble.prior_q
    c = overlap(ensemble.mean_photons)
    phi = math.acos(c)
    beta = math.asin(c)  # pi/2 - phi without cancellation for small overlaps
    if beta <= 0.0:
        # Orthogonal limit: both states identified perfectly.
        return HelstromSolution(0.0, 0.0, 0.0, phi, 0.0, 0.0)
    if abs(q - 0.5) < 1e-12:
        phi0 = 0.5 * beta
    else:
        def neg_avg_error(angle: float) -> float:
            s0 = math.sin(angle)
            s1 = math.sin(beta - angle)
            return -(q * s0 * s0 + (1.0 - q) * s1 * s1)

        phi0, _ = maximize_1d(neg_avg_error, Interval(0.0, beta), tol=1e-9)
    phi1 = beta - phi0
    e0 = math.sin(phi0) ** 2
    e1 = math.sin(phi1) ** 2
    avg = q * e0 + (1.0 - q) * e1
    return HelstromSolution(avg, e0, e1, phi, phi0, phi1)


def holevo_binary(ensemble: BinaryCoherentEnsemble) -> float:
    """Holevo bound in bits for the binary ensemble.

    The average state of two pure states with overlap ``c`` and prior ``q``
    has eigenvalues ``(1 +/- sqrt(1 - 4 q (1-q) (1 - c^2))) / 2``; the bound
    is the binary entropy of the larger one.  For ``q = 1/2`` this reduces to
    ``h((1 + c) / 2)``.
    """
    q = ensemble.prior_q
    c = overlap(ensemble.mean_photons)
    radicand = 1.0 - 4.0 * q * (1.0 - q) * (1.0 - c * c)
    lam_plus = 0.5 * (1.0 + math.sqrt(max(radicand, 0.0)))
    return binary_entropy(lam_plus)
