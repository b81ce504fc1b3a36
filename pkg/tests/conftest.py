from __future__ import annotations

import logging
import socket
import threading
import time
from types import SimpleNamespace

import pytest

from carshare.catalog import Vehicle, VehicleStore
from carshare.config import Config
from carshare.costs import Tariff
from carshare.storage import Database

#: Low-cost scrypt parameters so auth-heavy tests stay fast.
TEST_CONFIG_KWARGS = dict(scrypt_n=1024, scrypt_r=8, scrypt_p=1)


@pytest.fixture
def db():
    database = Database(":memory:")
    database.init_schema()
    yield database
    database.close()


@pytest.fixture
def store(db):
    return VehicleStore(db)


@pytest.fixture
def test_config(tmp_path):
    return Config(db_path=str(tmp_path / "test.db"), admin_token="test-admin", **TEST_CONFIG_KWARGS)


DEFAULT_TARIFF = Tariff(rate_travel=30, rate_standby=10, rate_distance=25, included_km=20.0)


def add_partner(db, partner_id=1, tariff=DEFAULT_TARIFF, name=None):
    with db.write() as conn:
        conn.execute(
            "INSERT INTO partners (id, name, rate_travel, rate_standby, rate_distance, included_km)"
            " VALUES (?, ?, ?, ?, ?, ?)",
            (partner_id, name or f"partner-{partner_id}", tariff.rate_travel,
             tariff.rate_standby, tariff.rate_distance, tariff.included_km),
        )
    return partner_id


def add_client(db, email="rider@example.com"):
    with db.write() as conn:
        cur = conn.execute(
            "INSERT INTO clients (email, password_hash, confirmed, created_at)"
            " VALUES (?, 'scrypt$x', 1, '2024-01-01T00:00:00Z')",
            (email,),
        )
        return int(cur.lastrowid)


def make_vehicle(partner_id=1, **overrides) -> Vehicle:
    base = dict(
        partner_id=partner_id,
        brand="Renault",
        model="Clio",
        color="blue",
        air_conditioning=True,
        price_per_hour=700,
        fuel_type="petrol",
        odometer_km=42_000,
        latitude=41.1579,
        longitude=-8.6291,
        parking="Central Station",
        active=True,
    )
    base.update(overrides)
    return Vehicle(**base)


@pytest.fixture
def seeded_store(db, store):
    """Store with one partner and one client ready for vehicles and ratings."""
    add_partner(db)
    user_id = add_client(db)
    return SimpleNamespace(db=db, store=store, user_id=user_id)


class LiveServer:
    """A real uvicorn server on a loopback port, for end-to-end tests."""

    def __init__(self, config: Config):
        import uvicorn

        from carshare.webapp import create_app

        self.config = config
        self.app = create_app(config)
        self.log_records: list[logging.LogRecord] = []

        class _Capture(logging.Handler):
            def __init__(self, sink):
                super().__init__(level=logging.DEBUG)
                self._sink = sink

            def emit(self, record):
                self._sink.append(record)

        self._capture = _Capture(self.log_records)
        # uvicorn loggers do not propagate to root, so attach everywhere relevant
        self._captured_loggers = [
            logging.getLogger(name)
            for name in ("", "uvicorn", "uvicorn.error", "uvicorn.access", "carshare")
        ]
        for log in self._captured_loggers:
            log.addHandler(self._capture)
        uv_config = uvicorn.Config(
            self.app, host="127.0.0.1", port=config.port, log_level="info", access_log=True
        )
        self._server = uvicorn.Server(uv_config)
        self._thread = threading.Thread(target=self._server.run, daemon=True)

    @property
    def base_url(self) -> str:
        return f"http://127.0.0.1:{self.config.port}"

    def start(self):
        self._thread.start()
        deadline = time.monotonic() + 15
        while not self._server.started:
            if time.monotonic() > deadline:
                raise RuntimeError("server did not start in time")
            time.sleep(0.02)
        return self

    def stop(self):
        self._server.should_exit = True
        self._thread.join(timeout=10)
        for log in self._captured_loggers:
            log.removeHandler(self._capture)

    def logged_text(self) -> str:
        return "\n".join(record.getMessage() for record in self.log_records)


def free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


@pytest.fixture(scope="session")
def live_server(tmp_path_factory):
    root = tmp_path_factory.mktemp("live")
    config = Config(
        db_path=str(root / "live.db"),
        port=free_port(),
        admin_token="live-admin",
        **TEST_CONFIG_KWARGS,
    )
    server = LiveServer(config).start()
    yield server
    server.stop()
