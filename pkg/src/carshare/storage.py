"""Transactional persistence on SQLite.

One embedded file-backed store keeps the whole system runnable without
external services. File databases hand out one connection per thread and
serialize writers through ``BEGIN IMMEDIATE``; in-memory databases share a
single connection behind a lock (they exist for tests). The relational
schema is in third normal form; see the schema section in the README.
"""

from __future__ import annotations

import json
import sqlite3
import threading
from contextlib import contextmanager
from datetime import datetime, timedelta, timezone
from pathlib import Path

SCHEMA = """
CREATE TABLE IF NOT EXISTS clients (
    id INTEGER PRIMARY KEY,
    email TEXT NOT NULL UNIQUE COLLATE NOCASE,
    password_hash TEXT NOT NULL,
    confirmed INTEGER NOT NULL DEFAULT 0,
    created_at TEXT NOT NULL
);

CREATE TABLE IF NOT EXISTS partners (
    id INTEGER PRIMARY KEY,
    name TEXT NOT NULL UNIQUE,
    rate_travel INTEGER NOT NULL,
    rate_standby INTEGER NOT NULL,
    rate_distance INTEGER NOT NULL,
    included_km REAL NOT NULL
);

CREATE TABLE IF NOT EXISTS vehicles (
    id INTEGER PRIMARY KEY,
    partner_id INTEGER NOT NULL REFERENCES partners(id),
    brand TEXT NOT NULL,
    model TEXT NOT NULL,
    color TEXT NOT NULL,
    air_conditioning INTEGER NOT NULL,
    price_per_hour INTEGER NOT NULL,
    fuel_type TEXT NOT NULL,
    odometer_km INTEGER NOT NULL,
    latitude REAL NOT NULL,
    longitude REAL NOT NULL,
    parking TEXT NOT NULL,
    active INTEGER NOT NULL DEFAULT 1
);

CREATE TABLE IF NOT EXISTS ratings (
    id INTEGER PRIMARY KEY,
    vehicle_id INTEGER NOT NULL REFERENCES vehicles(id),
    user_id INTEGER REFERENCES clients(id),
    source TEXT NOT NULL DEFAULT 'user' CHECK (source IN ('user', 'external')),
    external_record_id TEXT UNIQUE,
    comfort INTEGER NOT NULL CHECK (comfort BETWEEN 1 AND 5),
    consumption INTEGER NOT NULL CHECK (consumption BETWEEN 1 AND 5),
    safety INTEGER NOT NULL CHECK (safety BETWEEN 1 AND 5),
    created_at TEXT NOT NULL
);
CREATE INDEX IF NOT EXISTS idx_ratings_vehicle ON ratings(vehicle_id);

CREATE TABLE IF NOT EXISTS bookings (
    id INTEGER PRIMARY KEY,
    user_id INTEGER NOT NULL REFERENCES clients(id),
    vehicle_id INTEGER NOT NULL REFERENCES vehicles(id),
    start_us INTEGER NOT NULL,
    end_us INTEGER NOT NULL,
    quote INTEGER NOT NULL,
    status TEXT NOT NULL CHECK (status IN ('confirmed', 'cancelled')),
    CHECK (start_us < end_us)
);
CREATE INDEX IF NOT EXISTS idx_bookings_vehicle ON bookings(vehicle_id);

CREATE TABLE IF NOT EXISTS sessions (
    token TEXT PRIMARY KEY,
    user_id INTEGER NOT NULL REFERENCES clients(id),
    expires_at_us INTEGER NOT NULL
);

CREATE TABLE IF NOT EXISTS confirmation_tokens (
    token TEXT PRIMARY KEY,
    user_id INTEGER NOT NULL REFERENCES clients(id),
    expires_at_us INTEGER NOT NULL,
    used INTEGER NOT NULL DEFAULT 0
);

CREATE TABLE IF NOT EXISTS outbox (
    id INTEGER PRIMARY KEY,
    recipient TEXT NOT NULL,
    kind TEXT NOT NULL,
    body TEXT NOT NULL,
    created_at TEXT NOT NULL
);
"""

#: Insertion order respects foreign keys; deletion uses the reverse.
TABLES = (
    "clients",
    "partners",
    "vehicles",
    "ratings",
    "bookings",
    "sessions",
    "confirmation_tokens",
    "outbox",
)

SNAPSHOT_FORMAT = "carshare-snapshot"
SNAPSHOT_VERSION = 1

_EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)


def epoch_us(dt: datetime) -> int:
    """Microseconds since the Unix epoch, computed exactly from timedelta parts."""
    if dt.tzinfo is None:
        raise ValueError("naive datetimes are not storable")
    delta = dt.astimezone(timezone.utc) - _EPOCH
    return (delta.days * 86_400 + delta.seconds) * 1_000_000 + delta.microseconds


def from_epoch_us(us: int) -> datetime:
    return _EPOCH + timedelta(microseconds=us)


class SnapshotError(RuntimeError):
    pass


class Database:
    """Connection manager with explicit read/write scopes.

    ``write()`` opens a ``BEGIN IMMEDIATE`` transaction so concurrent
    check-then-insert sequences (booking creation, imports) serialize on
    the database write lock.
    """

    def __init__(self, path: str | Path = ":memory:"):
        self.path = str(path)
        self._is_memory = self.path == ":memory:"
        self._lock = threading.RLock()
        self._local = threading.local()
        self._memory_conn = self._open() if self._is_memory else None

    def _open(self) -> sqlite3.Connection:
        conn = sqlite3.connect(
            self.path,
            timeout=30.0,
            isolation_level=None,  # explicit transaction control
            check_same_thread=False,
        )
        conn.execute("PRAGMA foreign_keys = ON")
        if not self._is_memory:
            conn.execute("PRAGMA journal_mode = WAL")
            conn.execute("PRAGMA busy_timeout = 30000")
        return conn

    def _connection(self) -> sqlite3.Connection:
        if self._is_memory:
            return self._memory_conn
        conn = getattr(self._local, "conn", None)
        if conn is None:
            conn = self._open()
            self._local.conn = conn
        return conn

    @contextmanager
    def read(self):
        if self._is_memory:
            with self._lock:
                yield self._memory_conn
        else:
            yield self._connection()

    @contextmanager
    def write(self):
        if self._is_memory:
            self._lock.acquire()
        conn = self._connection()
        try:
            conn.execute("BEGIN IMMEDIATE")
            try:
                yield conn
            except BaseException:
                conn.execute("ROLLBACK")
                raise
            conn.execute("COMMIT")
        finally:
            if self._is_memory:
                self._lock.release()

    def init_schema(self) -> None:
        with self.read() as conn:
            conn.executescript(SCHEMA)

    def close(self) -> None:
        if self._is_memory:
            self._memory_conn.close()
        else:
            conn = getattr(self._local, "conn", None)
            if conn is not None:
                conn.close()
                self._local.conn = None

    # -- snapshots -----------------------------------------------------------

    def export_snapshot(self) -> str:
        """Serialize every table into canonical JSON (sorted keys, rows by id).

        Restoring an export and exporting again yields identical bytes.
        """
        payload = {"format": SNAPSHOT_FORMAT, "version": SNAPSHOT_VERSION, "tables": {}}
        with self.read() as conn:
            for table in TABLES:
                columns = [row[1] for row in conn.execute(f"PRAGMA table_info({table})")]
                order = columns[0]
                rows = conn.execute(
                    f"SELECT {', '.join(columns)} FROM {table} ORDER BY {order}"
                ).fetchall()
                payload["tables"][table] = {
                    "columns": columns,
                    "rows": [list(row) for row in rows],
                }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"

    def restore_snapshot(self, text: str, force: bool = False) -> None:
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SnapshotError(f"snapshot is not valid JSON: {exc}") from exc
        if payload.get("format") != SNAPSHOT_FORMAT or payload.get("version") != SNAPSHOT_VERSION:
            raise SnapshotError("unrecognized snapshot format")
        tables = payload.get("tables", {})
        missing = [t for t in TABLES if t not in tables]
        if missing:
            raise SnapshotError(f"snapshot is missing tables: {', '.join(missing)}")
        self.init_schema()
        with self.write() as conn:
            if not force:
                for table in TABLES:
                    row = conn.execute(f"SELECT 1 FROM {table} LIMIT 1").fetchone()
                    if row is not None:
                        raise SnapshotError(
                            f"store is not empty (table {table}); pass force to overwrite"
                        )
            for table in reversed(TABLES):
                conn.execute(f"DELETE FROM {table}")
            for table in TABLES:
                spec = tables[table]
                columns = spec["columns"]
                placeholders = ", ".join("?" * len(columns))
                conn.executemany(
                    f"INSERT INTO {table} ({', '.join(columns)}) VALUES ({placeholders})",
                    [tuple(row) for row in spec["rows"]],
                )
