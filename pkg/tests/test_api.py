from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from carshare.catalog import VehicleStore
from carshare.storage import Database
from carshare.webapp import create_app
from conftest import add_partner, make_vehicle

PORTO = {"lat": 41.1579, "lon": -8.6291, "radius_km": 10.0}
LISTING_FIELDS = (
    "brand", "model", "color", "air_conditioning", "price_per_hour_cents",
    "fuel_type", "odometer_km", "parking",
)


@pytest.fixture
def app(test_config):
    application = create_app(test_config)
    add_partner(application.state.db)
    return application


@pytest.fixture
def client(app):
    return TestClient(app)


@pytest.fixture
def store(app) -> VehicleStore:
    return app.state.store


def register_and_login(client, app, email="rider@example.com", password="hunter2secret"):
    assert client.post("/api/v1/auth/register", json={"email": email, "password": password}).status_code == 201
    token = app.state.accounts.pending_confirmations(email)[0]
    assert client.post("/api/v1/auth/confirm", json={"token": token}).status_code == 200
    response = client.post("/api/v1/auth/login", json={"email": email, "password": password})
    assert response.status_code == 200
    return response.json()["token"]


class TestAuthEndpoints:
    def test_register_confirm_login_flow(self, client, app):
        token = register_and_login(client, app)
        assert token

    def test_duplicate_email_is_409(self, client):
        body = {"email": "dup@example.com", "password": "hunter2secret"}
        assert client.post("/api/v1/auth/register", json=body).status_code == 201
        response = client.post("/api/v1/auth/register", json=body)
        assert response.status_code == 409
        assert set(response.json()) == {"error_code", "message"}

    def test_weak_password_is_400(self, client):
        response = client.post(
            "/api/v1/auth/register", json={"email": "weak@example.com", "password": "short"}
        )
        assert response.status_code == 400
        assert response.json()["error_code"] == "invalid_registration"

    def test_login_failures_are_uniform_401(self, client, app):
        register_and_login(client, app, email="known@example.com")
        client.post("/api/v1/auth/register",
                    json={"email": "pending@example.com", "password": "hunter2secret"})
        bodies = []
        for attempt in (
            {"email": "ghost@example.com", "password": "hunter2secret"},
            {"email": "known@example.com", "password": "wrong-password"},
            {"email": "pending@example.com", "password": "hunter2secret"},
        ):
            response = client.post("/api/v1/auth/login", json=attempt)
            assert response.status_code == 401
            bodies.append(response.json())
        assert all(body == bodies[0] for body in bodies)

    def test_confirm_with_bad_token_is_400(self, client):
        response = client.post("/api/v1/auth/confirm", json={"token": "garbage"})
        assert response.status_code == 400
        assert response.json()["error_code"] == "invalid_token"

    def test_malformed_body_uses_error_shape(self, client):
        response = client.post("/api/v1/auth/register", json={"email": "x@y.zz"})
        assert response.status_code == 400
        assert set(response.json()) == {"error_code", "message"}


class TestVehicleListing:
    def test_listing_carries_all_fields_and_summary(self, client, store):
        vid = store.upsert_vehicle(make_vehicle())
        response = client.get("/api/v1/vehicles", params=PORTO)
        assert response.status_code == 200
        (record,) = response.json()
        assert record["id"] == vid
        for field in LISTING_FIELDS:
            assert field in record, field
        assert record["ratings"]["count"] == 0
        assert record["ratings"]["overall"] == 3.0
        assert record["distance_km"] == pytest.approx(0.0, abs=1e-9)

    def test_out_of_area_vehicles_hidden(self, client, store):
        store.upsert_vehicle(make_vehicle(latitude=38.72, longitude=-9.14))  # Lisbon
        response = client.get("/api/v1/vehicles", params=PORTO)
        assert response.json() == []

    def test_invalid_radius_is_400(self, client):
        response = client.get("/api/v1/vehicles", params={**PORTO, "radius_km": -2})
        assert response.status_code == 400


class TestRankEndpoint:
    def test_rank_returns_entries_weights_and_consistency(self, client, store):
        for i in range(3):
            store.upsert_vehicle(make_vehicle())
        response = client.post("/api/v1/rank", json={**PORTO, "judgments": [2, 4, 2]})
        assert response.status_code == 200
        body = response.json()
        assert [e["rank"] for e in body["entries"]] == [1, 2, 3]
        assert body["criteria"] == ["performance", "consumption", "security"]
        assert sum(body["criteria_weights"]) == pytest.approx(1.0, abs=1e-9)
        assert body["consistency"]["acceptable"] is True
        assert body["mode"] == "fast"
        assert sum(e["global_score"] for e in body["entries"]) == pytest.approx(1.0, abs=1e-9)

    def test_matrix_mode_supported(self, client, store):
        store.upsert_vehicle(make_vehicle())
        response = client.post("/api/v1/rank", json={**PORTO, "mode": "matrix"})
        assert response.status_code == 200
        assert response.json()["mode"] == "matrix"

    def test_empty_area_is_404(self, client):
        response = client.post("/api/v1/rank", json=PORTO)
        assert response.status_code == 404
        assert response.json()["error_code"] == "empty_fleet"

    def test_off_scale_judgments_are_400(self, client, store):
        store.upsert_vehicle(make_vehicle())
        response = client.post("/api/v1/rank", json={**PORTO, "judgments": [2.5, 1, 1]})
        assert response.status_code == 400

    def test_eight_criteria_rejected(self, client, store):
        store.upsert_vehicle(make_vehicle())
        names = [f"c{i}" for i in range(8)]
        response = client.post(
            "/api/v1/rank", json={**PORTO, "criteria": names, "judgments": [1.0] * 28}
        )
        assert response.status_code == 400

    def test_custom_criteria_subset(self, client, store):
        store.upsert_vehicle(make_vehicle())
        response = client.post(
            "/api/v1/rank",
            json={**PORTO, "criteria": ["comfort", "safety"], "judgments": [3.0]},
        )
        assert response.status_code == 200
        assert response.json()["criteria"] == ["comfort", "safety"]


class TestSimulateAndBook:
    def test_simulate_quotes_by_partner_tariff(self, client, store):
        vid = store.upsert_vehicle(make_vehicle())
        response = client.post("/api/v1/simulate", json={
            "vehicle_id": vid, "travel_minutes": 60, "standby_minutes": 30, "distance_km": 0.0,
        })
        assert response.status_code == 200
        assert response.json() == {"cost_cents": 60 * 30 + 30 * 10}

    def test_simulate_unknown_vehicle_404(self, client):
        response = client.post("/api/v1/simulate", json={
            "vehicle_id": 404, "travel_minutes": 1, "standby_minutes": 1, "distance_km": 1.0,
        })
        assert response.status_code == 404

    def test_booking_requires_auth(self, client, store):
        vid = store.upsert_vehicle(make_vehicle())
        response = client.post("/api/v1/bookings", json=_booking_body(vid))
        assert response.status_code == 401

    def test_booking_lifecycle_and_conflict(self, client, app, store):
        vid = store.upsert_vehicle(make_vehicle())
        token = register_and_login(client, app)
        headers = {"Authorization": f"Bearer {token}"}
        created = client.post("/api/v1/bookings", json=_booking_body(vid), headers=headers)
        assert created.status_code == 201
        body = created.json()
        assert body["status"] == "confirmed"
        assert body["quote_cents"] == 60 * 30  # one hour travelling, distance within allowance
        assert body["start"].endswith("Z")
        clash = client.post("/api/v1/bookings", json=_booking_body(vid), headers=headers)
        assert clash.status_code == 409
        assert clash.json()["error_code"] == "booking_conflict"

    def test_back_to_back_bookings_allowed(self, client, app, store):
        vid = store.upsert_vehicle(make_vehicle())
        token = register_and_login(client, app)
        headers = {"Authorization": f"Bearer {token}"}
        first = _booking_body(vid, start="2026-09-01T10:00:00Z", end="2026-09-01T11:00:00Z")
        second = _booking_body(vid, start="2026-09-01T11:00:00Z", end="2026-09-01T12:00:00Z")
        assert client.post("/api/v1/bookings", json=first, headers=headers).status_code == 201
        assert client.post("/api/v1/bookings", json=second, headers=headers).status_code == 201

    def test_invalid_interval_is_400(self, client, app, store):
        vid = store.upsert_vehicle(make_vehicle())
        token = register_and_login(client, app)
        headers = {"Authorization": f"Bearer {token}"}
        body = _booking_body(vid, start="2026-09-01T12:00:00Z", end="2026-09-01T11:00:00Z")
        response = client.post("/api/v1/bookings", json=body, headers=headers)
        assert response.status_code == 400
        naive = _booking_body(vid, start="2026-09-01T10:00:00", end="2026-09-01T11:00:00")
        response = client.post("/api/v1/bookings", json=naive, headers=headers)
        assert response.status_code == 400


class TestRatingsEndpoint:
    def test_rating_requires_auth(self, client, store):
        vid = store.upsert_vehicle(make_vehicle())
        response = client.post(f"/api/v1/vehicles/{vid}/ratings",
                               json={"comfort": 5, "consumption": 4, "safety": 3})
        assert response.status_code == 401

    def test_rating_updates_summary(self, client, app, store):
        vid = store.upsert_vehicle(make_vehicle())
        token = register_and_login(client, app)
        response = client.post(
            f"/api/v1/vehicles/{vid}/ratings",
            json={"comfort": 5, "consumption": 4, "safety": 3},
            headers={"Authorization": f"Bearer {token}"},
        )
        assert response.status_code == 201
        assert response.json()["summary"]["overall"] == 4.0
        listing = client.get("/api/v1/vehicles", params=PORTO).json()
        assert listing[0]["ratings"]["count"] == 1

    def test_out_of_range_score_is_400(self, client, app, store):
        vid = store.upsert_vehicle(make_vehicle())
        token = register_and_login(client, app)
        response = client.post(
            f"/api/v1/vehicles/{vid}/ratings",
            json={"comfort": 6, "consumption": 4, "safety": 3},
            headers={"Authorization": f"Bearer {token}"},
        )
        assert response.status_code == 400


XML_OK = (
    b'<?xml version="1.0"?><evaluations>'
    b'<evaluation record_id="r1" vehicle_id="1"><comfort>4</comfort>'
    b"<consumption>4</consumption><safety>5</safety></evaluation></evaluations>"
)


class TestAdminImport:
    def test_requires_admin_token(self, client, store):
        store.upsert_vehicle(make_vehicle())
        assert client.post("/api/v1/admin/import", content=XML_OK).status_code == 403
        wrong = client.post("/api/v1/admin/import", content=XML_OK,
                            headers={"X-Admin-Token": "nope"})
        assert wrong.status_code == 403

    def test_import_reports_accept_and_reject(self, client, store):
        store.upsert_vehicle(make_vehicle())
        response = client.post("/api/v1/admin/import", content=XML_OK,
                               headers={"X-Admin-Token": "test-admin"})
        assert response.status_code == 200
        assert response.json() == {"accepted": 1, "rejected": []}

    def test_malformed_document_is_400(self, client):
        response = client.post("/api/v1/admin/import", content=b"<<<",
                               headers={"X-Admin-Token": "test-admin"})
        assert response.status_code == 400
        assert response.json()["error_code"] == "malformed_document"

    def test_disabled_without_configured_token(self, tmp_path):
        from carshare.config import Config
        from conftest import TEST_CONFIG_KWARGS

        config = Config(db_path=str(tmp_path / "noadmin.db"), **TEST_CONFIG_KWARGS)
        client = TestClient(create_app(config))
        response = client.post("/api/v1/admin/import", content=XML_OK,
                               headers={"X-Admin-Token": ""})
        assert response.status_code == 403


def _booking_body(vehicle_id, start="2026-09-01T10:00:00Z", end="2026-09-01T11:00:00Z"):
    return {
        "vehicle_id": vehicle_id,
        "start": start,
        "end": end,
        "trip_plan": {"travel_minutes": 60, "standby_minutes": 0, "distance_km": 5.0},
    }
