"""Vehicle reservations with conflict exclusion.

Intervals are half-open UTC ``[start, end)``; back-to-back bookings touch
without overlapping. The overlap check and the insert run inside a single
write transaction, so under concurrent attempts on one vehicle exactly one
confirmed booking survives per overlapping window.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime

from .catalog import UnknownVehicleError
from .costs import Tariff, TripPlan, quote_trip
from .storage import Database, epoch_us, from_epoch_us

STATUS_CONFIRMED = "confirmed"
STATUS_CANCELLED = "cancelled"


class BookingConflictError(RuntimeError):
    """The requested interval overlaps a confirmed booking."""


class InvalidIntervalError(ValueError):
    pass


@dataclass(frozen=True)
class Booking:
    id: int
    user_id: int
    vehicle_id: int
    start: datetime
    end: datetime
    quote: int  # cents
    status: str


class BookingService:
    def __init__(self, db: Database):
        self._db = db

    def create(
        self,
        user_id: int,
        vehicle_id: int,
        start: datetime,
        end: datetime,
        trip: TripPlan,
    ) -> Booking:
        """Book a vehicle for ``[start, end)`` at a quote from its partner tariff."""
        if start.tzinfo is None or end.tzinfo is None:
            raise InvalidIntervalError("booking interval must use aware timestamps")
        start_us = epoch_us(start)
        end_us = epoch_us(end)
        if start_us >= end_us:
            raise InvalidIntervalError("booking start must precede its end")

        tariff = self.vehicle_tariff(vehicle_id)
        quote = quote_trip(tariff, trip)

        with self._db.write() as conn:
            clash = conn.execute(
                "SELECT 1 FROM bookings WHERE vehicle_id = ? AND status = ?"
                " AND start_us < ? AND ? < end_us LIMIT 1",
                (vehicle_id, STATUS_CONFIRMED, end_us, start_us),
            ).fetchone()
            if clash is not None:
                raise BookingConflictError(
                    f"vehicle {vehicle_id} already has a confirmed booking overlapping this interval"
                )
            cur = conn.execute(
                "INSERT INTO bookings (user_id, vehicle_id, start_us, end_us, quote, status)"
                " VALUES (?, ?, ?, ?, ?, ?)",
                (user_id, vehicle_id, start_us, end_us, quote, STATUS_CONFIRMED),
            )
            booking_id = int(cur.lastrowid)
        return Booking(
            id=booking_id,
            user_id=user_id,
            vehicle_id=vehicle_id,
            start=from_epoch_us(start_us),
            end=from_epoch_us(end_us),
            quote=quote,
            status=STATUS_CONFIRMED,
        )

    def cancel(self, booking_id: int) -> None:
        with self._db.write() as conn:
            cur = conn.execute(
                "UPDATE bookings SET status = ? WHERE id = ?", (STATUS_CANCELLED, booking_id)
            )
            if cur.rowcount == 0:
                raise LookupError(f"unknown booking {booking_id}")

    def for_vehicle(self, vehicle_id: int) -> list[Booking]:
        with self._db.read() as conn:
            rows = conn.execute(
                "SELECT id, user_id, vehicle_id, start_us, end_us, quote, status"
                " FROM bookings WHERE vehicle_id = ? ORDER BY start_us, id",
                (vehicle_id,),
            ).fetchall()
        return [
            Booking(
                id=r[0],
                user_id=r[1],
                vehicle_id=r[2],
                start=from_epoch_us(r[3]),
                end=from_epoch_us(r[4]),
                quote=r[5],
                status=r[6],
            )
            for r in rows
        ]

    def vehicle_tariff(self, vehicle_id: int) -> Tariff:
        """Tariff of the partner owning an active vehicle."""
        with self._db.read() as conn:
            row = conn.execute(
                "SELECT p.rate_travel, p.rate_standby, p.rate_distance, p.included_km, v.active"
                " FROM vehicles v JOIN partners p ON p.id = v.partner_id WHERE v.id = ?",
                (vehicle_id,),
            ).fetchone()
        if row is None or not row[4]:
            raise UnknownVehicleError(vehicle_id)
        return Tariff(
            rate_travel=row[0], rate_standby=row[1], rate_distance=row[2], included_km=row[3]
        )
