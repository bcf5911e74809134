"""Spherical-earth coordinate primitives: points, angles, distances.

All public interfaces speak decimal degrees; angles are converted to
radians internally. Distances are kilometers on a sphere of fixed radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CoordinateError

# Mean earth radius. Reproduces the reference coverage radii within 1%.
EARTH_RADIUS_KM = 6371.0

# Single shared constant so scalar and vectorized paths round identically.
_DEG_TO_RAD = math.pi / 180.0

# A great-circle distance in kilometers; always >= 0 and <= pi * radius.
DistanceKm = float


@dataclass(frozen=True)
class GeoPoint:
    """A (latitude, longitude) pair in decimal degrees."""

    lat_deg: float
    lon_deg: float

    def __post_init__(self):
        # Coerce numpy scalars so downstream JSON serialization stays plain.
        object.__setattr__(self, "lat_deg", float(self.lat_deg))
        object.__setattr__(self, "lon_deg", float(self.lon_deg))
        if not (math.isfinite(self.lat_deg) and math.isfinite(self.lon_deg)):
            raise CoordinateError(f"non-finite coordinates: ({self.lat_deg}, {self.lon_deg})")
        if not -90.0 <= self.lat_deg <= 90.0:
            raise CoordinateError(f"latitude {self.lat_deg} outside [-90, 90]")
        if not -180.0 <= self.lon_deg <= 180.0:
            raise CoordinateError(f"longitude {self.lon_deg} outside [-180, 180]")


@dataclass(frozen=True)
class EarthModel:
    """Spherical earth with a fixed radius; immutable for the life of a run."""

    radius_km: float = EARTH_RADIUS_KM

    def __post_init__(self):
        if not math.isfinite(self.radius_km) or self.radius_km <= 0:
            raise CoordinateError(f"earth radius must be positive, got {self.radius_km}")


DEFAULT_EARTH = EarthModel()


def degrees_to_radians(deg: float) -> float:
    """Convert decimal degrees to radians (deg * pi / 180)."""
    if not math.isfinite(deg):
        raise CoordinateError(f"non-finite angle: {deg}")
    return deg * _DEG_TO_RAD


def haversine_distance(a: GeoPoint, b: GeoPoint, earth: EarthModel = DEFAULT_EARTH) -> DistanceKm:
    """Great-circle distance between two points, in kilometers.

    Uses d = 2 * R * arcsin(sqrt(h)) with
    h = sin^2(dlat/2) + cos(lat_a) * cos(lat_b) * sin^2(dlon/2).
    The sqrt(h) argument is clamped into [0, 1] so antipodal or
    nearly-identical points cannot produce NaN through float overshoot.
    """
    lat1 = degrees_to_radians(a.lat_deg)
    lat2 = degrees_to_radians(b.lat_deg)
    dlat = degrees_to_radians(b.lat_deg - a.lat_deg)
    dlon = degrees_to_radians(b.lon_deg - a.lon_deg)
    h = math.sin(dlat / 2.0) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin(dlon / 2.0) ** 2
    return 2.0 * earth.radius_km * math.asin(min(1.0, math.sqrt(max(0.0, h))))


def haversine_to_many(
    origin: GeoPoint,
    lats_deg: np.ndarray,
    lons_deg: np.ndarray,
    earth: EarthModel = DEFAULT_EARTH,
) -> np.ndarray:
    """Vectorized haversine distances from ``origin`` to arrays of coordinates."""
    lat1 = degrees_to_radians(origin.lat_deg)
    lats = np.asarray(lats_deg) * _DEG_TO_RAD
    dlat = (np.asarray(lats_deg) - origin.lat_deg) * _DEG_TO_RAD
    dlon = (np.asarray(lons_deg) - origin.lon_deg) * _DEG_TO_RAD
    h = np.sin(dlat / 2.0) ** 2 + math.cos(lat1) * np.cos(lats) * np.sin(dlon / 2.0) ** 2
    return 2.0 * earth.radius_km * np.arcsin(np.minimum(1.0, np.sqrt(h)))


def destination_point(
    center: GeoPoint,
    bearing_deg: float,
    distance: DistanceKm,
    earth: EarthModel = DEFAULT_EARTH,
) -> GeoPoint:
    """Point at ``distance`` km from ``center`` along an initial bearing.

    Bearing is degrees clockwise from north, taken mod 360. The returned
    longitude is normalized into [-180, 180]; latitude needs no wrapping
    for distances below half the circumference.
    """
    if not math.isfinite(bearing_deg):
        raise CoordinateError(f"non-finite bearing: {bearing_deg}")
    if not math.isfinite(distance) or distance < 0:
        raise CoordinateError(f"distance must be a finite non-negative value, got {distance}")
    if distance == 0.0:
        return center
    lat1 = degrees_to_radians(center.lat_deg)
    lon1 = degrees_to_radians(center.lon_deg)
    theta = degrees_to_radians(bearing_deg % 360.0)
    delta = distance / earth.radius_km
    sin_lat2 = math.sin(lat1) * math.cos(delta) + math.cos(lat1) * math.sin(delta) * math.cos(theta)
    lat2 = math.asin(max(-1.0, min(1.0, sin_lat2)))
    y = math.sin(theta) * math.sin(delta) * math.cos(lat1)
    x = math.cos(delta) - math.sin(lat1) * math.sin(lat2)
    lon2 = lon1 + math.atan2(y, x)
    lon2_deg = math.degrees(lon2)
    # Wrap only when needed: the shift-and-modulo loses low-order longitude
    # bits, which matters for short displacements.
    if not -180.0 <= lon2_deg <= 180.0:
        lon2_deg = (lon2_deg + 180.0) % 360.0 - 180.0
    return GeoPoint(math.degrees(lat2), lon2_deg)
