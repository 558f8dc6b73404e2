"""Geometry of the annular-sector user region and the beam footprint.

A base station hovers at altitude h over the sector origin.  Tilting a
beam of fixed vertical width so that its axis meets the ground at
distance D illuminates a ground annulus; when the beam is too narrow to
light the whole region, D is the scan variable trading near-edge against
far-edge coverage.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import OutOfScanRange, PartialCoverageRequired, ValidationError

__all__ = [
    "Coverage",
    "RegionGeometry",
    "RadiatedRegion",
    "required_vertical_beamwidth",
    "coverage_status",
    "boresight_limits",
    "radiated_region",
    "coverage_fraction",
    "bisecting_boresight",
]

_EDGE_SLACK = 1e-9  # meters of tolerance at scan-interval endpoints


class Coverage(enum.Enum):
    FULL = "full"
    PARTIAL = "partial"


@dataclass(frozen=True)
class RegionGeometry:
    inner_radius: float  # [m]
    outer_radius: float  # [m]
    half_angle: float  # [rad]; the sector spans twice this in azimuth
    altitude: float  # [m]
    vertical_beamwidth: float  # [rad]

    def __post_init__(self):
        if not 0.0 <= self.inner_radius < self.outer_radius:
            raise ValidationError("need 0 <= inner_radius < outer_radius")
        if not 0.0 < self.half_angle < math.pi:
            raise ValidationError("half_angle must lie in (0, pi)")
        if self.altitude <= 0.0:
            raise ValidationError("altitude must be positive")
        if not 0.0 < self.vertical_beamwidth < math.pi:
            raise ValidationError("vertical_beamwidth must lie in (0, pi)")


@dataclass(frozen=True)
class RadiatedRegion:
    """Ground annulus actually illuminated, already clipped to the user region."""

    inner: float  # [m]
    outer: float  # [m]
    boresight: float  # [m]; ground distance where the beam axis lands

    def __post_init__(self):
        if not 0.0 <= self.inner <= self.outer:
            raise ValidationError("radiated annulus edges out of order")


def required_vertical_beamwidth(geom: RegionGeometry) -> float:
    """Smallest vertical beamwidth that lights the whole region from altitude h."""
    return (math.atan(geom.outer_radius / geom.altitude)
            - math.atan(geom.inner_radius / geom.altitude))


def coverage_status(geom: RegionGeometry) -> Coverage:
    """FULL when the available beamwidth meets or exceeds the required one."""
    if geom.vertical_beamwidth >= required_vertical_beamwidth(geom):
        return Coverage.FULL
    return Coverage.PARTIAL


def boresight_limits(geom: RegionGeometry) -> tuple[float, float]:
    """Scan interval [D_lo, D_hi] keeping the footprint inside the region.

    At D_lo the footprint touches the inner edge, at D_hi the outer one.
    """
    if coverage_status(geom) is Coverage.FULL:
        raise PartialCoverageRequired(
            "boresight scan is degenerate when the beam covers the whole region")
    half = 0.5 * geom.vertical_beamwidth
    d_lo = geom.altitude * math.tan(math.atan(geom.inner_radius / geom.altitude) + half)
    d_hi = geom.altitude * math.tan(math.atan(geom.outer_radius / geom.altitude) - half)
    return d_lo, d_hi


def radiated_region(geom: RegionGeometry, boresight: float) -> RadiatedRegion:
    """Illuminated annulus when the beam axis meets the ground at ``boresight``."""
    if boresight <= 0.0:
        raise OutOfScanRange("boresight distance must be positive")
    half = 0.5 * geom.vertical_beamwidth
    axis = math.atan(boresight / geom.altitude)
    near = geom.altitude * math.tan(axis - half)  # may be negative, clipped below
    far_angle = axis + half
    far = geom.altitude * math.tan(far_angle) if far_angle < 0.5 * math.pi else math.inf
    if coverage_status(geom) is Coverage.PARTIAL:
        d_lo, d_hi = boresight_limits(geom)
        if not d_lo - _EDGE_SLACK <= boresight <= d_hi + _EDGE_SLACK:
            raise OutOfScanRange(
                f"boresight {boresight:.6g} m outside scan interval "
                f"[{d_lo:.6g}, {d_hi:.6g}] m")
    elif near > geom.inner_radius + _EDGE_SLACK or far < geom.outer_radius - _EDGE_SLACK:
        raise OutOfScanRange(
            "boresight does not cover the region despite a sufficient beamwidth")
    inner = min(max(geom.inner_radius, near), geom.outer_radius)
    outer = max(min(geom.outer_radius, far), geom.inner_radius)
    return RadiatedRegion(inner=inner, outer=outer, boresight=float(boresight))


def coverage_fraction(geom: RegionGeometry, region: RadiatedRegion) -> float:
    """Served fraction of the user region's area."""
    num = region.outer ** 2 - region.inner ** 2
    den = geom.outer_radius ** 2 - geom.inner_radius ** 2
    return num / den


def bisecting_boresight(geom: RegionGeometry) -> float:
    """Boresight whose axis bisects the region's elevation span.

    Canonical pointing under full coverage, where any covering boresight
    yields the same clipped annulus.
    """
    mid = 0.5 * (math.atan(geom.inner_radius / geom.altitude)
                 + math.atan(geom.outer_radius / geom.altitude))
    return geom.altitude * math.tan(mid)
