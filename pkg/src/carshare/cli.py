"""Command-line driver: fleet seeding, scalability benchmarks, the savings
grid regression check, data snapshots, and the API server."""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .bench import SEED_PARTNERS, bench_csv, bench_rank, synthetic_fleet
from .catalog import VehicleStore
from .config import Config
from .costs import (
    ADT_VALUES,
    ANM_VALUES,
    DEFAULT_OWNERSHIP_PROFILE,
    fixture_pricing,
    load_pricing_fixture,
    reference_sm_cents,
    scenario_grid,
)
from .storage import Database, SnapshotError
from .validation import format_rfc3339

#: Disabled-credential marker; never verifies, so seed accounts cannot log in.
_DISABLED_HASH = "!"
_SEED_CLIENT_EMAIL = "fleet-seed@carshare.invalid"
_SEED_CLIENT_CREATED = "2024-01-01T00:00:00Z"


@click.group()
def main():
    """Carsharing decision support toolkit."""


@main.command()
@click.option("--n", required=True, type=int, help="Number of vehicles to create.")
@click.option("--seed", "rng_seed", required=True, type=int, help="RNG seed; same seed, same fleet.")
@click.option("--db", "db_path", default="carshare.db", show_default=True, help="SQLite database path.")
@click.option("--force", is_flag=True, help="Replace an existing fleet instead of refusing.")
def seed(n, rng_seed, db_path, force):
    """Persist a deterministic synthetic fleet with partners and ratings."""
    if n < 1:
        raise click.ClickException("--n must be at least 1")
    db = Database(db_path)
    db.init_schema()
    with db.read() as conn:
        occupied = conn.execute("SELECT 1 FROM vehicles LIMIT 1").fetchone() is not None
    if occupied:
        if not force:
            raise click.ClickException("store already holds a fleet; pass --force to replace it")
        with db.write() as conn:
            for table in ("ratings", "bookings", "vehicles", "partners"):
                conn.execute(f"DELETE FROM {table}")
    vehicles, ratings = synthetic_fleet(n, rng_seed)
    store = VehicleStore(db)
    with db.write() as conn:
        conn.execute(
            "INSERT OR IGNORE INTO clients (email, password_hash, confirmed, created_at)"
            " VALUES (?, ?, 0, ?)",
            (_SEED_CLIENT_EMAIL, _DISABLED_HASH, _SEED_CLIENT_CREATED),
        )
        seed_user = conn.execute(
            "SELECT id FROM clients WHERE email = ?", (_SEED_CLIENT_EMAIL,)
        ).fetchone()[0]
        for partner_id, (name, tariff) in enumerate(SEED_PARTNERS, start=1):
            conn.execute(
                "INSERT INTO partners (id, name, rate_travel, rate_standby, rate_distance, included_km)"
                " VALUES (?, ?, ?, ?, ?, ?)",
                (partner_id, name, tariff.rate_travel, tariff.rate_standby,
                 tariff.rate_distance, tariff.included_km),
            )
    for vehicle in vehicles:
        store.upsert_vehicle(vehicle)
    with db.write() as conn:
        conn.executemany(
            "INSERT INTO ratings (vehicle_id, user_id, source, external_record_id,"
            " comfort, consumption, safety, created_at) VALUES (?, ?, 'user', NULL, ?, ?, ?, ?)",
            [
                (r.vehicle_id, seed_user, r.comfort, r.consumption, r.safety,
                 format_rfc3339(r.timestamp))
                for r in ratings
            ],
        )
    click.echo(f"seeded {len(vehicles)} vehicles, {len(ratings)} ratings into {db_path}")


@main.command()
@click.option("--n-list", required=True, help="Comma-separated fleet sizes, e.g. 1000,2000.")
@click.option("--mode", type=click.Choice(["matrix", "fast"]), default="fast", show_default=True)
@click.option("--reps", default=5, show_default=True, type=int, help="Timed repetitions per size.")
@click.option("--out", "out_path", default=None, help="Write the CSV here as well as stdout.")
@click.option("--seed", "rng_seed", default=42, show_default=True, type=int)
def bench(n_list, mode, reps, out_path, rng_seed):
    """Time ranking over growing synthetic fleets and emit a CSV."""
    try:
        sizes = [int(part) for part in n_list.split(",") if part.strip()]
    except ValueError:
        raise click.ClickException(f"--n-list must be comma-separated integers, got {n_list!r}")
    if not sizes:
        raise click.ClickException("--n-list must name at least one fleet size")
    try:
        rows = bench_rank(sizes, mode, reps, rng_seed)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    csv_text = bench_csv(rows)
    if out_path:
        Path(out_path).write_text(csv_text, encoding="utf-8")
    click.echo(csv_text, nl=False)


@main.command()
@click.option("--out", "out_path", default=None, help="Write the grid CSV here.")
@click.option("--fixture", "fixture_path", default=None,
              help="Alternative pricing fixture CSV (defaults to the packaged one).")
def table1(out_path, fixture_path):
    """Reproduce the reference savings grid; exit nonzero on any mismatch."""
    try:
        pricing_table = load_pricing_fixture(fixture_path)
    except (OSError, ValueError) as exc:
        raise click.ClickException(f"cannot load pricing fixture: {exc}")
    try:
        grid = scenario_grid(
            DEFAULT_OWNERSHIP_PROFILE, fixture_pricing(pricing_table), ANM_VALUES, ADT_VALUES
        )
    except ValueError as exc:
        raise click.ClickException(str(exc))
    if out_path:
        Path(out_path).write_text(grid.to_csv(), encoding="utf-8")

    expected = reference_sm_cents()
    diffs = []
    click.echo(f"{'anm':>4} {'adt':>4} {'sm_$':>9} {'sy_$':>10}")
    for anm in ANM_VALUES:
        for adt in ADT_VALUES:
            cell = grid.cell(anm, adt)
            click.echo(f"{anm:>4} {adt:>4} {cell.sm / 100:>9.2f} {cell.sy / 100:>10.2f}")
            want_sm = expected[(anm, adt)]
            if cell.sm != want_sm or cell.sy != 12 * want_sm:
                diffs.append((anm, adt, cell.sm, want_sm))
    if diffs:
        for anm, adt, got, want in diffs:
            click.echo(f"MISMATCH at (anm={anm}, adt={adt}): sm={got} cents, expected {want}", err=True)
        sys.exit(1)
    click.echo("all 32 grid cells match the reference values")


@main.command()
@click.option("--db", "db_path", default="carshare.db", show_default=True)
@click.option("--out", "out_path", default=None, help="Export the store to this snapshot file.")
@click.option("--restore", "restore_path", default=None, help="Restore the store from this snapshot file.")
@click.option("--force", is_flag=True, help="Allow restoring over a non-empty store.")
def snapshot(db_path, out_path, restore_path, force):
    """Export or restore a complete, portable copy of the data store."""
    if bool(out_path) == bool(restore_path):
        raise click.ClickException("pass exactly one of --out or --restore")
    db = Database(db_path)
    db.init_schema()
    if out_path:
        try:
            Path(out_path).write_text(db.export_snapshot(), encoding="utf-8")
        except OSError as exc:
            raise click.ClickException(f"cannot write snapshot: {exc}")
        click.echo(f"exported {db_path} to {out_path}")
    else:
        try:
            text = Path(restore_path).read_text("utf-8")
        except OSError as exc:
            raise click.ClickException(f"cannot read snapshot: {exc}")
        try:
            db.restore_snapshot(text, force=force)
        except SnapshotError as exc:
            raise click.ClickException(str(exc))
        click.echo(f"restored {db_path} from {restore_path}")


@main.command()
@click.option("--config", "config_path", default=None, help="JSON config file (see README).")
@click.option("--host", default=None, help="Override the listen address.")
@click.option("--port", default=None, type=int, help="Override the listen port.")
def serve(config_path, host, port):
    """Run the HTTP API server."""
    import uvicorn

    from .webapp import create_app

    cfg = Config.load(config_path)
    app = create_app(cfg)
    uvicorn.run(app, host=host or cfg.host, port=port if port is not None else cfg.port)


if __name__ == "__main__":
    main()
