"""Threshold-detector model for the legitimate receiver.

A gated single-photon detector either clicks or stays silent.  Dark counts
and Poissonian stray light combine multiplicatively as independent no-click
events; the signal is attenuated by the full channel efficiency while stray
light only sees the receiver's internal optical efficiency.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .numerics import binary_entropy

__all__ = ["DetectorModel", "BobChannel", "bob_click_model", "mutual_info_bob"]


@dataclass(frozen=True)
class DetectorModel:
    """Receiver imperfections: dark counts, internal optics, stray light."""

    p_dark: float = 1e-7
    eta_optical: float = 1.0
    stray_mean: float = 1e-4

    def __post_init__(self):
        if not 0.0 <= self.p_dark <= 1.0:
            raise ValueError(f"p_dark must be in [0, 1], got {self.p_dark}")
        if not 0.0 < self.eta_optical <= 1.0:
            raise ValueError(f"eta_optical must be in (0, 1], got {self.eta_optical}")
        if self.stray_mean < 0:
            raise ValueError(f"stray_mean must be >= 0, got {self.stray_mean}")


@dataclass(frozen=True)
class BobChannel:
    """No-click probabilities of the induced binary channel.

    ``eps0`` conditions on the vacuum symbol, ``eps1`` on the pulse symbol;
    adding signal can only increase the click probability, so
    ``eps1 <= eps0``.
    """

    eps0: float
    eps1: float

    def __post_init__(self):
        if not 0.0 <= self.eps1 <= self.eps0 <= 1.0:
            raise ValueError(
                f"require 0 <= eps1 <= eps0 <= 1, got eps0={self.eps0}, eps1={self.eps1}"
            )


def bob_click_model(detector: DetectorModel, received_mean_photons: float) -> BobChannel:
    """No-click probabilities for a threshold detector.

    ``received_mean_photons`` is the signal mean photon number at the
    detector with every channel loss already applied (detector efficiency is
    folded into the channel efficiency upstream).
    """
    if received_mean_photons < 0:
        raise ValueError(f"received_mean_photons must be >= 0, got {received_mean_photons}")
    stray = detector.eta_optical * detector.stray_mean
    no_dark = 1.0 - detector.p_dark
    eps0 = no_dark * math.exp(-stray)
    eps1 = no_dark * math.exp(-(received_mean_photons + stray))
    return BobChannel(eps0=eps0, eps1=eps1)


def mutual_info_bob(q: float, channel: BobChannel) -> float:
    """Mutual information in bits of the click/no-click channel.

    ``q`` is the prior probability of the vacuum symbol.  Equals
    ``h(q eps0 + (1-q) eps1) - q h(eps0) - (1-q) h(eps1)``.
    """
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"q must be in [0, 1], got {q}")
    p_silent = q * channel.eps0 + (1.0 - q) * channel.eps1
    info = (
        binary_entropy(p_silent)
        - q * binary_entropy(channel.eps0)
        - (1.0 - q) * binary_entropy(channel.eps1)
    )
    return max(info, 0.0)
