"""HTTP service shell: JSON endpoints under /api/v1.

Every error response uses the same body shape, ``{error_code, message}``.
Money is integer cents and timestamps RFC 3339 in every payload. Request
bodies are never logged.
"""

from __future__ import annotations

import logging
from typing import Optional

from fastapi import Depends, FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .accounts import AccountService, AuthError, DuplicateEmailError, RegistrationError, TokenError
from .bookings import BookingConflictError, BookingService, InvalidIntervalError
from .catalog import (
    MalformedDocumentError,
    RatingRecord,
    RatingSummary,
    UnknownVehicleError,
    Vehicle,
    VehicleStore,
    great_circle_km,
)
from .config import Config
from .costs import TripPlan, quote_trip
from .ranking import PreferenceProfile, RatedVehicle, rank_vehicles
from .storage import Database
from .validation import format_rfc3339, parse_rfc3339

logger = logging.getLogger("carshare.api")


class ApiError(Exception):
    def __init__(self, status_code: int, error_code: str, message: str):
        super().__init__(message)
        self.status_code = status_code
        self.error_code = error_code
        self.message = message


class RegisterBody(BaseModel):
    email: str
    password: str


class ConfirmBody(BaseModel):
    token: str


class LoginBody(BaseModel):
    email: str
    password: str


class RankBody(BaseModel):
    lat: float
    lon: float
    radius_km: float
    criteria: Optional[list[str]] = None
    judgments: Optional[list[float]] = None
    mode: str = "fast"


class SimulateBody(BaseModel):
    vehicle_id: int
    travel_minutes: int
    standby_minutes: int
    distance_km: float


class TripPlanBody(BaseModel):
    travel_minutes: int
    standby_minutes: int
    distance_km: float


class BookingBody(BaseModel):
    vehicle_id: int
    start: str
    end: str
    trip_plan: TripPlanBody


class RatingBody(BaseModel):
    comfort: int
    consumption: int
    safety: int


def _summary_json(summary: RatingSummary) -> dict:
    return {
        "count": summary.count,
        "mean_comfort": summary.mean_comfort,
        "mean_consumption": summary.mean_consumption,
        "mean_safety": summary.mean_safety,
        "overall": summary.overall,
    }


def _vehicle_json(vehicle: Vehicle, summary: RatingSummary, distance_km: float | None) -> dict:
    body = {
        "id": vehicle.id,
        "partner_id": vehicle.partner_id,
        "brand": vehicle.brand,
        "model": vehicle.model,
        "color": vehicle.color,
        "air_conditioning": vehicle.air_conditioning,
        "price_per_hour_cents": vehicle.price_per_hour,
        "fuel_type": vehicle.fuel_type,
        "odometer_km": vehicle.odometer_km,
        "latitude": vehicle.latitude,
        "longitude": vehicle.longitude,
        "parking": vehicle.parking,
        "ratings": _summary_json(summary),
    }
    if distance_km is not None:
        body["distance_km"] = distance_km
    return body


def create_app(config: Config | None = None, db: Database | None = None) -> FastAPI:
    cfg = config or Config.load()
    database = db or Database(cfg.db_path)
    database.init_schema()

    app = FastAPI(title="carshare", docs_url=None, redoc_url=None)
    app.state.config = cfg
    app.state.db = database
    accounts = AccountService(database, cfg)
    store = VehicleStore(database)
    bookings = BookingService(database)
    app.state.accounts = accounts
    app.state.store = store
    app.state.bookings = bookings

    def current_user(request: Request) -> int:
        header = request.headers.get("authorization", "")
        if not header.lower().startswith("bearer "):
            raise ApiError(401, "unauthorized", "missing bearer token")
        user_id = accounts.authenticate(header[7:].strip())
        if user_id is None:
            raise ApiError(401, "unauthorized", "invalid or expired session")
        return user_id

    @app.exception_handler(ApiError)
    async def handle_api_error(request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status_code,
            content={"error_code": exc.error_code, "message": exc.message},
        )

    @app.exception_handler(RequestValidationError)
    async def handle_validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"error_code": "invalid_request", "message": "request body failed validation"},
        )

    @app.post("/api/v1/auth/register", status_code=201)
    def register(body: RegisterBody):
        try:
            user_id = accounts.register(body.email, body.password)
        except DuplicateEmailError:
            raise ApiError(409, "email_taken", "an account with this email already exists")
        except RegistrationError as exc:
            raise ApiError(400, "invalid_registration", str(exc))
        return {"id": user_id, "email": body.email, "confirmed": False}

    @app.post("/api/v1/auth/confirm")
    def confirm(body: ConfirmBody):
        try:
            user_id = accounts.confirm(body.token)
        except TokenError as exc:
            raise ApiError(400, "invalid_token", str(exc))
        return {"id": user_id, "confirmed": True}

    @app.post("/api/v1/auth/login")
    def login(body: LoginBody):
        try:
            session = accounts.login(body.email, body.password)
        except AuthError:
            raise ApiError(401, "authentication_failed", "invalid credentials")
        return {"token": session.token, "expires_at": format_rfc3339(session.expires_at)}

    @app.get("/api/v1/vehicles")
    def vehicles(lat: float, lon: float, radius_km: float):
        try:
            found = store.list_by_area(lat, lon, radius_km)
        except ValueError as exc:
            raise ApiError(400, "invalid_request", str(exc))
        summaries = store.rating_summaries([v.id for v in found])
        return [
            _vehicle_json(
                v,
                summaries[v.id],
                great_circle_km(lat, lon, v.latitude, v.longitude),
            )
            for v in found
        ]

    @app.post("/api/v1/rank")
    def rank(body: RankBody):
        try:
            found = store.list_by_area(body.lat, body.lon, body.radius_km)
        except ValueError as exc:
            raise ApiError(400, "invalid_request", str(exc))
        if not found:
            raise ApiError(404, "empty_fleet", "no active vehicles in the requested area")
        summaries = store.rating_summaries([v.id for v in found])
        fleet = [RatedVehicle(v.id, summaries[v.id]) for v in found]
        try:
            criteria = tuple(body.criteria) if body.criteria else None
            if criteria is not None:
                profile = PreferenceProfile(
                    criteria=criteria, judgments=tuple(body.judgments or ())
                )
            elif body.judgments:
                profile = PreferenceProfile(judgments=tuple(body.judgments))
            else:
                profile = PreferenceProfile.equal_importance()
            ranked = rank_vehicles(fleet, profile, body.mode)
        except ValueError as exc:
            raise ApiError(400, "invalid_request", str(exc))
        return {
            "entries": [
                {"vehicle_id": e.vehicle_id, "global_score": e.global_score, "rank": e.rank}
                for e in ranked.entries
            ],
            "criteria": list(ranked.criteria),
            "criteria_weights": [float(w) for w in ranked.criteria_weights],
            "consistency": {
                "lambda_max": ranked.consistency.lambda_max,
                "ci": ranked.consistency.ci,
                "ri": ranked.consistency.ri,
                "cr": ranked.consistency.cr,
                "acceptable": ranked.consistency.acceptable,
            },
            "mode": ranked.mode,
        }

    @app.post("/api/v1/simulate")
    def simulate(body: SimulateBody):
        try:
            trip = TripPlan(
                travel_minutes=body.travel_minutes,
                standby_minutes=body.standby_minutes,
                distance_km=body.distance_km,
            )
        except ValueError as exc:
            raise ApiError(400, "invalid_request", str(exc))
        try:
            tariff = bookings.vehicle_tariff(body.vehicle_id)
        except UnknownVehicleError:
            raise ApiError(404, "vehicle_not_found", f"unknown vehicle {body.vehicle_id}")
        return {"cost_cents": quote_trip(tariff, trip)}

    @app.post("/api/v1/bookings", status_code=201)
    def create_booking(body: BookingBody, user_id: int = Depends(current_user)):
        try:
            start = parse_rfc3339(body.start, "start")
            end = parse_rfc3339(body.end, "end")
            trip = TripPlan(
                travel_minutes=body.trip_plan.travel_minutes,
                standby_minutes=body.trip_plan.standby_minutes,
                distance_km=body.trip_plan.distance_km,
            )
        except ValueError as exc:
            raise ApiError(400, "invalid_request", str(exc))
        try:
            booking = bookings.create(user_id, body.vehicle_id, start, end, trip)
        except InvalidIntervalError as exc:
            raise ApiError(400, "invalid_interval", str(exc))
        except UnknownVehicleError:
            raise ApiError(404, "vehicle_not_found", f"unknown vehicle {body.vehicle_id}")
        except BookingConflictError:
            raise ApiError(409, "booking_conflict", "vehicle is already booked in this interval")
        return {
            "id": booking.id,
            "user_id": booking.user_id,
            "vehicle_id": booking.vehicle_id,
            "start": format_rfc3339(booking.start),
            "end": format_rfc3339(booking.end),
            "quote_cents": booking.quote,
            "status": booking.status,
        }

    @app.post("/api/v1/vehicles/{vehicle_id}/ratings", status_code=201)
    def rate_vehicle(vehicle_id: int, body: RatingBody, user_id: int = Depends(current_user)):
        try:
            record = RatingRecord(
                vehicle_id=vehicle_id,
                user_id=user_id,
                comfort=body.comfort,
                consumption=body.consumption,
                safety=body.safety,
            )
        except ValueError as exc:
            raise ApiError(400, "invalid_request", str(exc))
        try:
            store.record_rating(record)
        except UnknownVehicleError:
            raise ApiError(404, "vehicle_not_found", f"unknown vehicle {vehicle_id}")
        return {"recorded": True, "summary": _summary_json(store.rating_summary(vehicle_id))}

    @app.post("/api/v1/admin/import")
    async def admin_import(request: Request):
        token = request.headers.get("x-admin-token")
        if not cfg.admin_token or token != cfg.admin_token:
            raise ApiError(403, "forbidden", "admin token required")
        payload = await request.body()
        try:
            report = store.import_external(payload)
        except MalformedDocumentError as exc:
            raise ApiError(400, "malformed_document", str(exc))
        return {
            "accepted": report.accepted,
            "rejected": [
                {"record_id": r.record_id, "reason": r.reason} for r in report.rejected
            ],
        }

    return app
