"""Great-circle geometry on the spherical Earth model.

All distances use the IUGG mean Earth radius (6371.0088 km). Coordinates
are (latitude, longitude) pairs in degrees; longitude is normalized to
(-180, 180].
"""

from __future__ import annotations

import math

EARTH_RADIUS_KM = 6371.0088


class DegenerateCenterError(ValueError):
    """Raised when a point set has no well-defined spherical center of mass
    (the 3-D mean vector cancels to ~zero, e.g. two antipodal points)."""


def normalize_lon(lon: float) -> float:
    """Wrap any longitude into the canonical (-180, 180] range."""
    if -180.0 < lon <= 180.0:
        return lon  # already canonical; keep the exact value
    wrapped = math.fmod(lon + 180.0, 360.0)
    if wrapped < 0.0:
        wrapped += 360.0
    # wrapped == 0 corresponds to the -180/180 seam; canonical form is +180
    return wrapped - 180.0 if wrapped != 0.0 else 180.0


def haversine_km(a: tuple[float, float], b: tuple[float, float]) -> float:
    """Great-circle distance in kilometers between two (lat, lon) points.

    Symmetric in its arguments and exactly zero for identical points.
    """
    lat1, lon1 = a
    lat2, lon2 = b
    phi1 = math.radians(lat1)
    phi2 = math.radians(lat2)
    dphi = math.radians(lat2 - lat1)
    dlam = math.radians(lon2 - lon1)
    h = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2.0) ** 2
    # Clamp against rounding pushing the argument above 1 for near-antipodes.
    return 2.0 * EARTH_RADIUS_KM * math.asin(min(1.0, math.sqrt(h)))


def to_unit_vector(lat: float, lon: float) -> tuple[float, float, float]:
    """Unit vector on the sphere for a (lat, lon) in degrees."""
    phi = math.radians(lat)
    lam = math.radians(lon)
    c = math.cos(phi)
    return (c * math.cos(lam), c * math.sin(lam), math.sin(phi))


def from_unit_vector(x: float, y: float, z: float) -> tuple[float, float]:
    """(lat, lon) in degrees for a direction vector (need not be unit length)."""
    lat = math.degrees(math.atan2(z, math.hypot(x, y)))
    lon = math.degrees(math.atan2(y, x))
    return (lat, normalize_lon(lon))


def center_of_mass(points: list[tuple[float, float]]) -> tuple[float, float]:
    """Spherical center of mass: the 3-D mean of unit position vectors,
    projected back onto the sphere.

    Raises DegenerateCenterError when the mean vector norm falls below
    1e-12 (antipodal cancellation); callers that need totality substitute
    the first point.
    """
    if not points:
        raise ValueError("center_of_mass needs at least one point")
    sx = sy = sz = 0.0
    for lat, lon in points:
        x, y, z = to_unit_vector(lat, lon)
        sx += x
        sy += y
        sz += z
    n = len(points)
    mx, my, mz = sx / n, sy / n, sz / n
    if math.sqrt(mx * mx + my * my + mz * mz) < 1e-12:
        raise DegenerateCenterError("mean position vector cancels to zero")
    return from_unit_vector(mx, my, mz)
