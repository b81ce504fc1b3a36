"""Shared input validation helpers.

Every check raises :class:`ValueError` with a message naming the offending
argument; transport layers translate these into their own error shapes.
"""

from __future__ import annotations

import math
from datetime import datetime, timezone

import numpy as np

#: Admissible pairwise judgment intensities: the integers 1..9 and their
#: reciprocals. User-entered judgments must come from this set; machine-built
#: ratio matrices are free to hold arbitrary positive reals.
SAATY_SCALE: tuple[float, ...] = tuple(
    sorted({float(k) for k in range(1, 10)} | {1.0 / k for k in range(2, 10)})
)

_SAATY_TOL = 1e-9


def check_positive_vector(values, name: str = "scores") -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError(f"{name} must be a non-empty one-dimensional sequence")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise ValueError(f"{name} must contain only strictly positive finite values")
    return arr


def check_score_matrix(X, name: str = "X") -> np.ndarray:
    arr = np.asarray(X, dtype=float)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} must be a non-empty two-dimensional array")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise ValueError(f"{name} must contain only strictly positive finite values")
    return arr


def is_saaty_value(value) -> bool:
    try:
        v = float(value)
    except (TypeError, ValueError):
        return False
    if not math.isfinite(v):
        return False
    return any(abs(v - s) <= _SAATY_TOL for s in SAATY_SCALE)


def check_saaty_value(value, name: str = "judgment") -> float:
    if not is_saaty_value(value):
        raise ValueError(
            f"{name} {value!r} is not on the 1-9 judgment scale (integers 1..9 or their reciprocals)"
        )
    return float(value)


def check_latitude(lat, name: str = "latitude") -> float:
    v = _finite_real(lat, name)
    if not -90.0 <= v <= 90.0:
        raise ValueError(f"{name} must lie in [-90, 90], got {lat!r}")
    return v


def check_longitude(lon, name: str = "longitude") -> float:
    v = _finite_real(lon, name)
    if not -180.0 <= v <= 180.0:
        raise ValueError(f"{name} must lie in [-180, 180], got {lon!r}")
    return v


def check_radius_km(radius_km) -> float:
    v = _finite_real(radius_km, "radius_km")
    if v <= 0.0:
        raise ValueError(f"radius_km must be positive, got {radius_km!r}")
    return v


def check_rating_score(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"{name} must be an integer between 1 and 5, got {value!r}")
    if not 1 <= value <= 5:
        raise ValueError(f"{name} must be between 1 and 5, got {value!r}")
    return value


def check_non_negative_int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"{name} must be a non-negative integer, got {value!r}")
    if value < 0:
        raise ValueError(f"{name} must be non-negative, got {value!r}")
    return value


def check_non_negative_real(value, name: str) -> float:
    v = _finite_real(value, name)
    if v < 0.0:
        raise ValueError(f"{name} must be non-negative, got {value!r}")
    return v


def _finite_real(value, name: str) -> float:
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise ValueError(f"{name} must be a real number, got {value!r}") from None
    if not math.isfinite(v):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return v


def parse_rfc3339(text, name: str = "timestamp") -> datetime:
    """Parse an RFC 3339 timestamp into an aware UTC datetime.

    A UTC offset (or ``Z``) is required; naive timestamps are rejected.
    """
    if not isinstance(text, str):
        raise ValueError(f"{name} must be an RFC 3339 string, got {text!r}")
    normalized = text.strip()
    if normalized.endswith(("Z", "z")):
        normalized = normalized[:-1] + "+00:00"
    try:
        dt = datetime.fromisoformat(normalized)
    except ValueError:
        raise ValueError(f"{name} is not an RFC 3339 timestamp: {text!r}") from None
    if dt.tzinfo is None:
        raise ValueError(f"{name} must carry a UTC offset: {text!r}")
    return dt.astimezone(timezone.utc)


def format_rfc3339(dt: datetime) -> str:
    if dt.tzinfo is None:
        raise ValueError("cannot format a naive datetime")
    return dt.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")
