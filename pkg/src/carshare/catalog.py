"""Vehicle inventory, geographic filtering, and 1-5 service evaluations.

Reads go straight to the store; writes run inside its transactions. The
external-evaluation XML import accepts the format formalized by the
bundled ``data/evaluations.xsd``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from xml.etree import ElementTree

from .storage import Database
from .validation import (
    check_latitude,
    check_longitude,
    check_non_negative_int,
    check_radius_km,
    check_rating_score,
    format_rfc3339,
    parse_rfc3339,
)

FUEL_TYPES = ("petrol", "diesel", "electric", "hybrid")

#: Mean Earth radius, km; distances use the spherical great-circle model.
EARTH_RADIUS_KM = 6371.0088

#: Midpoint of the 1-5 scale; unrated vehicles report this for every
#: category so they stay rankable.
NEUTRAL_RATING = 3.0

#: Rating rows imported from external evaluation documents are attributed
#: to this reserved source id instead of a client account.
EXTERNAL_SOURCE_ID = "external"


def great_circle_km(lat1: float, lon1: float, lat2: float, lon2: float) -> float:
    """Great-circle distance between two coordinates, km (haversine form)."""
    phi1 = math.radians(lat1)
    phi2 = math.radians(lat2)
    dphi = math.radians(lat2 - lat1)
    dlmb = math.radians(lon2 - lon1)
    a = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlmb / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_KM * math.asin(min(1.0, math.sqrt(a)))


@dataclass
class Vehicle:
    partner_id: int
    brand: str
    model: str
    color: str
    air_conditioning: bool
    price_per_hour: int  # cents
    fuel_type: str
    odometer_km: int
    latitude: float
    longitude: float
    parking: str
    active: bool = True
    id: int | None = None

    def validate(self) -> "Vehicle":
        check_non_negative_int(self.price_per_hour, "price_per_hour")
        check_non_negative_int(self.odometer_km, "odometer_km")
        check_latitude(self.latitude)
        check_longitude(self.longitude)
        if self.fuel_type not in FUEL_TYPES:
            raise ValueError(f"fuel_type must be one of {FUEL_TYPES}, got {self.fuel_type!r}")
        for name in ("brand", "model", "color", "parking"):
            if not isinstance(getattr(self, name), str):
                raise ValueError(f"{name} must be a string")
        return self


@dataclass(frozen=True)
class RatingRecord:
    """One 1-5 evaluation of a vehicle; ratings are append-only."""

    vehicle_id: int
    user_id: int | str
    comfort: int
    consumption: int
    safety: int
    timestamp: datetime = field(default_factory=lambda: datetime.now(timezone.utc))

    def __post_init__(self):
        check_rating_score(self.comfort, "comfort")
        check_rating_score(self.consumption, "consumption")
        check_rating_score(self.safety, "safety")


@dataclass(frozen=True)
class RatingSummary:
    """Per-category rating means plus their overall average."""

    count: int
    mean_comfort: float
    mean_consumption: float
    mean_safety: float
    overall: float

    @classmethod
    def neutral(cls) -> "RatingSummary":
        return cls(0, NEUTRAL_RATING, NEUTRAL_RATING, NEUTRAL_RATING, NEUTRAL_RATING)

    @classmethod
    def from_means(cls, count: int, comfort: float, consumption: float, safety: float) -> "RatingSummary":
        return cls(
            count=count,
            mean_comfort=comfort,
            mean_consumption=consumption,
            mean_safety=safety,
            overall=(comfort + consumption + safety) / 3.0,
        )


@dataclass(frozen=True)
class RejectedRecord:
    record_id: str | None
    reason: str


@dataclass(frozen=True)
class ImportReport:
    accepted: int
    rejected: tuple[RejectedRecord, ...]


class MalformedDocumentError(ValueError):
    """The import document cannot be processed at all (nothing is stored)."""


class UnknownVehicleError(LookupError):
    def __init__(self, vehicle_id):
        super().__init__(f"unknown vehicle {vehicle_id!r}")
        self.vehicle_id = vehicle_id


_VEHICLE_COLUMNS = (
    "id, partner_id, brand, model, color, air_conditioning, price_per_hour, "
    "fuel_type, odometer_km, latitude, longitude, parking, active"
)


def _vehicle_from_row(row) -> Vehicle:
    return Vehicle(
        id=row[0],
        partner_id=row[1],
        brand=row[2],
        model=row[3],
        color=row[4],
        air_conditioning=bool(row[5]),
        price_per_hour=row[6],
        fuel_type=row[7],
        odometer_km=row[8],
        latitude=row[9],
        longitude=row[10],
        parking=row[11],
        active=bool(row[12]),
    )


class VehicleStore:
    """Catalog operations over the transactional store."""

    def __init__(self, db: Database):
        self._db = db

    # -- inventory ---------------------------------------------------------

    def upsert_vehicle(self, vehicle: Vehicle) -> int:
        vehicle.validate()
        values = (
            vehicle.partner_id,
            vehicle.brand,
            vehicle.model,
            vehicle.color,
            int(vehicle.air_conditioning),
            vehicle.price_per_hour,
            vehicle.fuel_type,
            vehicle.odometer_km,
            vehicle.latitude,
            vehicle.longitude,
            vehicle.parking,
            int(vehicle.active),
        )
        with self._db.write() as conn:
            if vehicle.id is None:
                cur = conn.execute(
                    "INSERT INTO vehicles (partner_id, brand, model, color, air_conditioning,"
                    " price_per_hour, fuel_type, odometer_km, latitude, longitude, parking, active)"
                    " VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)",
                    values,
                )
                return int(cur.lastrowid)
            conn.execute(
                "INSERT OR REPLACE INTO vehicles (id, partner_id, brand, model, color,"
                " air_conditioning, price_per_hour, fuel_type, odometer_km, latitude,"
                " longitude, parking, active) VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)",
                (vehicle.id, *values),
            )
            return int(vehicle.id)

    def get_vehicle(self, vehicle_id: int) -> Vehicle | None:
        with self._db.read() as conn:
            row = conn.execute(
                f"SELECT {_VEHICLE_COLUMNS} FROM vehicles WHERE id = ?", (vehicle_id,)
            ).fetchone()
        return _vehicle_from_row(row) if row else None

    def list_active(self) -> list[Vehicle]:
        with self._db.read() as conn:
            rows = conn.execute(
                f"SELECT {_VEHICLE_COLUMNS} FROM vehicles WHERE active = 1 ORDER BY id"
            ).fetchall()
        return [_vehicle_from_row(r) for r in rows]

    def list_by_area(self, lat: float, lon: float, radius_km: float) -> list[Vehicle]:
        """Active vehicles within ``radius_km`` of the center, nearest first.

        The boundary is inclusive; ties are broken by ascending id.
        """
        lat = check_latitude(lat)
        lon = check_longitude(lon)
        radius_km = check_radius_km(radius_km)
        hits = []
        for vehicle in self.list_active():
            distance = great_circle_km(lat, lon, vehicle.latitude, vehicle.longitude)
            if distance <= radius_km:
                hits.append((distance, vehicle.id, vehicle))
        hits.sort(key=lambda t: (t[0], t[1]))
        return [v for _, _, v in hits]

    # -- evaluations -------------------------------------------------------

    def record_rating(self, record: RatingRecord) -> None:
        self._require_vehicle(record.vehicle_id)
        if record.user_id == EXTERNAL_SOURCE_ID:
            raise ValueError("external evaluations must go through import_external")
        with self._db.write() as conn:
            conn.execute(
                "INSERT INTO ratings (vehicle_id, user_id, source, external_record_id,"
                " comfort, consumption, safety, created_at) VALUES (?, ?, 'user', NULL, ?, ?, ?, ?)",
                (
                    record.vehicle_id,
                    record.user_id,
                    record.comfort,
                    record.consumption,
                    record.safety,
                    format_rfc3339(record.timestamp),
                ),
            )

    def rating_summary(self, vehicle_id: int) -> RatingSummary:
        self._require_vehicle(vehicle_id)
        return self.rating_summaries([vehicle_id])[vehicle_id]

    def rating_summaries(self, vehicle_ids) -> dict[int, RatingSummary]:
        """Summaries for many vehicles at once; unrated ones come back neutral."""
        ids = list(vehicle_ids)
        summaries = {vid: RatingSummary.neutral() for vid in ids}
        if not ids:
            return summaries
        placeholders = ",".join("?" * len(ids))
        with self._db.read() as conn:
            rows = conn.execute(
                "SELECT vehicle_id, COUNT(*), AVG(comfort), AVG(consumption), AVG(safety)"
                f" FROM ratings WHERE vehicle_id IN ({placeholders}) GROUP BY vehicle_id",
                ids,
            ).fetchall()
        for vid, count, comfort, consumption, safety in rows:
            summaries[vid] = RatingSummary.from_means(count, comfort, consumption, safety)
        return summaries

    # -- external import ---------------------------------------------------

    def import_external(self, xml_document: bytes) -> ImportReport:
        """Import external evaluations from an XML document.

        A document that cannot be parsed (or whose root is not
        ``evaluations``) is rejected whole; individual records failing
        validation are skipped and reported while the rest are stored.
        Record ids make the import idempotent: replays are rejected as
        duplicates.
        """
        try:
            root = ElementTree.fromstring(xml_document)
        except ElementTree.ParseError as exc:
            raise MalformedDocumentError(f"not a well-formed XML document: {exc}") from exc
        if root.tag != "evaluations":
            raise MalformedDocumentError(
                f"document root must be <evaluations>, got <{root.tag}>"
            )

        accepted: list[tuple] = []
        rejected: list[RejectedRecord] = []
        seen_ids: set[str] = set()
        with self._db.write() as conn:
            known_vehicles = {row[0] for row in conn.execute("SELECT id FROM vehicles")}
            stored_ids = {
                row[0]
                for row in conn.execute(
                    "SELECT external_record_id FROM ratings WHERE external_record_id IS NOT NULL"
                )
            }
            for element in root:
                record_id = element.get("record_id")
                try:
                    row = self._parse_evaluation(element, known_vehicles)
                except ValueError as exc:
                    rejected.append(RejectedRecord(record_id, str(exc)))
                    continue
                if row[0] in seen_ids or row[0] in stored_ids:
                    rejected.append(RejectedRecord(row[0], "duplicate record_id"))
                    continue
                seen_ids.add(row[0])
                accepted.append(row)
            conn.executemany(
                "INSERT INTO ratings (external_record_id, vehicle_id, user_id, source,"
                " comfort, consumption, safety, created_at)"
                " VALUES (?, ?, NULL, 'external', ?, ?, ?, ?)",
                accepted,
            )
        return ImportReport(accepted=len(accepted), rejected=tuple(rejected))

    @staticmethod
    def _parse_evaluation(element, known_vehicles) -> tuple:
        if element.tag != "evaluation":
            raise ValueError(f"unexpected element <{element.tag}>")
        record_id = element.get("record_id")
        if not record_id or not record_id.strip():
            raise ValueError("missing record_id attribute")
        vehicle_raw = element.get("vehicle_id")
        if vehicle_raw is None:
            raise ValueError("missing vehicle_id attribute")
        try:
            vehicle_id = int(vehicle_raw)
        except ValueError:
            raise ValueError(f"vehicle_id is not an integer: {vehicle_raw!r}") from None
        if vehicle_id not in known_vehicles:
            raise ValueError(f"unknown vehicle {vehicle_id}")
        scores = {}
        for category in ("comfort", "consumption", "safety"):
            node = element.find(category)
            if node is None or node.text is None:
                raise ValueError(f"missing <{category}> element")
            try:
                value = int(node.text.strip())
            except ValueError:
                raise ValueError(f"<{category}> is not an integer: {node.text!r}") from None
            if not 1 <= value <= 5:
                raise ValueError(f"<{category}> must be between 1 and 5, got {value}")
            scores[category] = value
        stamp_node = element.find("timestamp")
        if stamp_node is not None and stamp_node.text:
            stamp = format_rfc3339(parse_rfc3339(stamp_node.text.strip(), "timestamp"))
        else:
            stamp = format_rfc3339(datetime.now(timezone.utc))
        return (
            record_id.strip(),
            vehicle_id,
            scores["comfort"],
            scores["consumption"],
            scores["safety"],
            stamp,
        )

    def _require_vehicle(self, vehicle_id) -> None:
        with self._db.read() as conn:
            row = conn.execute("SELECT 1 FROM vehicles WHERE id = ?", (vehicle_id,)).fetchone()
        if row is None:
            raise UnknownVehicleError(vehicle_id)


def deactivate(vehicle: Vehicle) -> Vehicle:
    return replace(vehicle, active=False)
