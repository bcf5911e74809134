"""Per-cluster coverage geometry: point of means, radius, coverage circle.

The coverage radius of a cluster is the haversine distance from its point
of means (coordinate mean of the members) to the member farthest from that
point. The coverage circle is centered on the cluster centroid; centroid
and point of means are computed through the same coordinate mean here, so
they coincide by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .clustering import NOISE, Centroid, Labeling
from .errors import ConfigError
from .geo import DEFAULT_EARTH, DistanceKm, EarthModel, GeoPoint, destination_point, haversine_distance

DEFAULT_VERTEX_COUNT = 64


@dataclass(frozen=True)
class CoverageSummary:
    cluster_id: int
    centroid: Centroid
    point_of_means: GeoPoint
    distant_point: GeoPoint
    radius_km: DistanceKm


@dataclass(frozen=True)
class CoverageCircle:
    center: GeoPoint
    radius_km: DistanceKm
    ring: tuple[GeoPoint, ...]  # closed: first vertex repeated last


def point_of_means(members: Sequence[GeoPoint]) -> GeoPoint:
    """Coordinate mean of a non-empty point set (compensated summation)."""
    if len(members) == 0:
        raise ValueError("point of means of an empty cluster is undefined")
    n = len(members)
    return GeoPoint(
        math.fsum(p.lat_deg for p in members) / n,
        math.fsum(p.lon_deg for p in members) / n,
    )


def coverage_radius(
    members: Sequence[GeoPoint], earth: EarthModel = DEFAULT_EARTH
) -> tuple[GeoPoint, DistanceKm]:
    """(farthest member from the point of means, that exact distance).

    The maximum is found by exhaustive scan; ties keep the earliest member.
    """
    if len(members) == 0:
        raise ValueError("coverage radius of an empty cluster is undefined")
    mean = point_of_means(members)
    distant = members[0]
    radius = haversine_distance(mean, members[0], earth)
    for member in members[1:]:
        d = haversine_distance(mean, member, earth)
        if d > radius:
            distant, radius = member, d
    return distant, radius


def coverage_circle(
    centroid: Centroid,
    radius_km: DistanceKm,
    vertex_count: int = DEFAULT_VERTEX_COUNT,
    earth: EarthModel = DEFAULT_EARTH,
) -> CoverageCircle:
    """Spherical polygon approximating the coverage circumference.

    Vertices sit at bearings i * 360 / vertex_count; the ring is closed by
    repeating the first vertex. Radius zero collapses every vertex onto the
    center.
    """
    if vertex_count < 3:
        raise ConfigError(f"a ring needs at least 3 vertices, got {vertex_count}")
    if radius_km < 0:
        raise ValueError(f"radius must be non-negative, got {radius_km}")
    vertices = [
        destination_point(centroid, i * 360.0 / vertex_count, radius_km, earth)
        for i in range(vertex_count)
    ]
    vertices.append(vertices[0])
    return CoverageCircle(center=centroid, radius_km=radius_km, ring=tuple(vertices))


def summarize(
    labeling: Labeling, points: Sequence[GeoPoint], earth: EarthModel = DEFAULT_EARTH
) -> list[CoverageSummary]:
    """One coverage summary per non-empty cluster, ordered by cluster id.

    NOISE points never participate. The summary's centroid and point of
    means are the same coordinate mean.
    """
    if len(points) != len(labeling.labels):
        raise ValueError(
            f"labeling covers {len(labeling.labels)} points, got {len(points)}"
        )
    summaries = []
    for cid in range(labeling.n_clusters):
        member_idx = labeling.members(cid)
        if member_idx.size == 0:
            continue
        members = [points[i] for i in member_idx]
        mean = point_of_means(members)
        distant, radius = coverage_radius(members, earth)
        summaries.append(
            CoverageSummary(
                cluster_id=cid,
                centroid=mean,
                point_of_means=mean,
                distant_point=distant,
                radius_km=radius,
            )
        )
    return summaries
