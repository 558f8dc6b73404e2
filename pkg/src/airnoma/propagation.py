"""Path loss, array gain pattern, and the conditional law of the
effective channel gain.

A user at ground range d and azimuth theta sees the transmit beam
through a critically spaced uniform linear array whose power pattern
follows the Fejer kernel of the azimuth offset (small-sector
approximation).  Amplitude fading is Rayleigh, so the effective gain --
the squared projection of the channel on the beam -- is exponential with
mean gain/path-loss given the location.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveDistance, ValidationError

__all__ = [
    "DistancePowerLaw",
    "CloseInModel",
    "ChannelModel",
    "LinkBudget",
    "path_loss",
    "fejer_kernel",
    "beam_gain",
    "beam_gain_exact",
    "effective_gain_cdf",
]


@dataclass(frozen=True)
class DistancePowerLaw:
    """Linear attenuation 1 + d^exponent with the slant distance in meters."""

    exponent: float = 2.0

    def __post_init__(self):
        if self.exponent <= 0.0:
            raise ValidationError("path-loss exponent must be positive")


@dataclass(frozen=True)
class CloseInModel:
    """Close-in 1 m reference model for mmWave carriers:
    32.4 + 21 log10(d) + 20 log10(f_GHz) in dB."""

    carrier_ghz: float = 30.0

    def __post_init__(self):
        if self.carrier_ghz <= 0.0:
            raise ValidationError("carrier frequency must be positive")


PathLossModel = DistancePowerLaw | CloseInModel


@dataclass(frozen=True)
class ChannelModel:
    path_loss: PathLossModel
    array_size: int  # antennas across the scanned dimension
    sector_half_angle: float  # [rad]; users span twice this around the beam axis
    beam_angle: float = 0.0  # [rad]; azimuth of the beam center

    def __post_init__(self):
        if self.array_size < 1:
            raise ValidationError("array size must be at least 1")
        if not 0.0 < self.sector_half_angle < 0.5 * math.pi:
            raise ValidationError("sector half-angle must lie in (0, pi/2)")


@dataclass(frozen=True)
class LinkBudget:
    tx_power_dbm: float
    noise_dbm: float

    @property
    def tx_power_mw(self) -> float:
        return 10.0 ** (0.1 * self.tx_power_dbm)

    @property
    def noise_mw(self) -> float:
        return 10.0 ** (0.1 * self.noise_dbm)

    @property
    def tx_snr(self) -> float:
        """Linear transmit-power-to-noise ratio."""
        return 10.0 ** (0.1 * (self.tx_power_dbm - self.noise_dbm))


def path_loss(model, distance):
    """Linear attenuation at the 3-D distance [m].

    Accepts a ChannelModel or a bare path-loss variant; scalar in,
    scalar out.
    """
    variant = getattr(model, "path_loss", model)
    d = np.asarray(distance, dtype=float)
    if np.any(d <= 0.0):
        raise NonPositiveDistance("path loss requires a positive distance")
    if isinstance(variant, DistancePowerLaw):
        out = 1.0 + d ** variant.exponent
    elif isinstance(variant, CloseInModel):
        out = 10.0 ** (0.1 * (32.4 + 21.0 * np.log10(d)
                              + 20.0 * math.log10(variant.carrier_ghz)))
    else:
        raise TypeError(f"unknown path-loss model {variant!r}")
    return float(out) if np.ndim(distance) == 0 else out


def fejer_kernel(size: int, x):
    """Array power gain at angular offset x [rad]:
    (1/size) * (sin(size*pi*x/2) / sin(pi*x/2))^2.

    The removable singularities at x = 0 (mod 2) evaluate to the peak
    value ``size``; the result always lies in [0, size].
    """
    m = int(size)
    if m < 1:
        raise ValidationError("array size must be a positive integer")
    xs = np.asarray(x, dtype=float)
    den = np.sin(0.5 * np.pi * xs)
    num = np.sin(0.5 * np.pi * m * xs)
    at_peak = np.abs(den) < 1e-9
    ratio = (num / np.where(at_peak, 1.0, den)) ** 2 / m
    out = np.clip(np.where(at_peak, float(m), ratio), 0.0, float(m))
    return float(out) if np.ndim(x) == 0 else out


def beam_gain(model: ChannelModel, theta):
    """Gain toward azimuth theta under the small-sector approximation
    (offset angle used directly; both analysis and simulation use this)."""
    offset = model.beam_angle - np.asarray(theta, dtype=float)
    out = fejer_kernel(model.array_size, offset)
    return float(out) if np.ndim(theta) == 0 else out


def beam_gain_exact(model: ChannelModel, theta):
    """Gain with the exact steering argument sin(beam) - sin(theta).

    Kept only to measure the small-sector approximation error; all
    analysis paths use :func:`beam_gain`.
    """
    offset = math.sin(model.beam_angle) - np.sin(np.asarray(theta, dtype=float))
    out = fejer_kernel(model.array_size, offset)
    return float(out) if np.ndim(theta) == 0 else out


def effective_gain_cdf(model: ChannelModel, distance, altitude, theta, eta):
    """P{effective gain < eta} for a user at ground range ``distance``.

    Conditioned on the location, the gain is exponential with mean
    beam_gain/path_loss evaluated at the slant distance.
    """
    if np.any(np.asarray(eta) < 0.0):
        raise ValidationError("threshold eta must be non-negative")
    slant = np.hypot(np.asarray(distance, dtype=float), altitude)
    pl = path_loss(model, slant)
    g = beam_gain(model, theta)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = -np.expm1(-np.asarray(eta, dtype=float) * pl / g)
    # eta = 0 at a pattern null is 0/0: a zero threshold is never exceeded
    out = np.where(np.isnan(out), 0.0, out)
    scalars = all(np.ndim(v) == 0 for v in (distance, theta, eta))
    return float(out) if scalars else out
