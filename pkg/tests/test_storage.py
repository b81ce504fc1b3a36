from __future__ import annotations

from datetime import datetime, timezone

import pytest

from carshare.storage import TABLES, Database, SnapshotError, epoch_us, from_epoch_us
from conftest import add_client, add_partner, make_vehicle


class TestSchema:
    def test_every_table_has_a_primary_key(self, db):
        with db.read() as conn:
            names = {row[0] for row in conn.execute(
                "SELECT name FROM sqlite_master WHERE type = 'table' AND name NOT LIKE 'sqlite_%'"
            )}
            assert names == set(TABLES)
            for table in TABLES:
                pk_columns = [row for row in conn.execute(f"PRAGMA table_info({table})") if row[5] > 0]
                assert pk_columns, f"table {table} has no primary key"

    def test_foreign_keys_enforced(self, db):
        import sqlite3

        with pytest.raises(sqlite3.IntegrityError):
            with db.write() as conn:
                conn.execute(
                    "INSERT INTO vehicles (partner_id, brand, model, color, air_conditioning,"
                    " price_per_hour, fuel_type, odometer_km, latitude, longitude, parking, active)"
                    " VALUES (99, 'x', 'y', 'z', 0, 0, 'petrol', 0, 0, 0, 'p', 1)"
                )

    def test_write_rolls_back_on_error(self, db):
        add_partner(db)
        with pytest.raises(RuntimeError):
            with db.write() as conn:
                conn.execute(
                    "INSERT INTO partners (id, name, rate_travel, rate_standby, rate_distance, included_km)"
                    " VALUES (50, 'temp', 1, 1, 1, 0)"
                )
                raise RuntimeError("boom")
        with db.read() as conn:
            assert conn.execute("SELECT COUNT(*) FROM partners").fetchone()[0] == 1

    def test_init_schema_is_idempotent(self, db):
        db.init_schema()
        db.init_schema()


class TestEpochHelpers:
    def test_roundtrip_preserves_microseconds(self):
        moment = datetime(2026, 3, 14, 15, 9, 26, 535897, tzinfo=timezone.utc)
        assert from_epoch_us(epoch_us(moment)) == moment

    def test_naive_datetime_rejected(self):
        with pytest.raises(ValueError, match="naive"):
            epoch_us(datetime(2026, 1, 1))


def _populate(db):
    add_partner(db)
    user = add_client(db)
    from carshare.catalog import RatingRecord, VehicleStore

    store = VehicleStore(db)
    vid = store.upsert_vehicle(make_vehicle())
    store.record_rating(
        RatingRecord(vid, user, 4, 3, 5, datetime(2025, 1, 1, tzinfo=timezone.utc))
    )
    return store


class TestSnapshots:
    def test_export_restore_export_is_byte_identical(self, db, tmp_path):
        _populate(db)
        first = db.export_snapshot()

        target = Database(str(tmp_path / "restored.db"))
        target.restore_snapshot(first)
        second = target.export_snapshot()
        assert first == second

    def test_empty_store_exports_valid_snapshot(self, db, tmp_path):
        text = db.export_snapshot()
        target = Database(str(tmp_path / "empty.db"))
        target.restore_snapshot(text)
        assert target.export_snapshot() == text

    def test_restore_over_populated_store_refused(self, db):
        _populate(db)
        snapshot = db.export_snapshot()
        with pytest.raises(SnapshotError, match="not empty"):
            db.restore_snapshot(snapshot)

    def test_restore_with_force_overwrites(self, db):
        store = _populate(db)
        snapshot = db.export_snapshot()
        store.upsert_vehicle(make_vehicle(color="green"))
        db.restore_snapshot(snapshot, force=True)
        assert db.export_snapshot() == snapshot

    def test_garbage_snapshot_rejected(self, db):
        with pytest.raises(SnapshotError, match="JSON"):
            db.restore_snapshot("not json at all")
        with pytest.raises(SnapshotError, match="format"):
            db.restore_snapshot('{"format": "other", "version": 1}')

    def test_missing_table_rejected(self, db):
        import json

        payload = json.loads(db.export_snapshot())
        del payload["tables"]["outbox"]
        with pytest.raises(SnapshotError, match="outbox"):
            db.restore_snapshot(json.dumps(payload))
