"""Synthetic fleets and the ranking scalability harness.

Fleet generation is fully deterministic per seed. The harness times only
the ranking call itself: the fleet is prepared in memory beforehand and
one untimed warm-up run per configuration absorbs first-run effects.
"""

from __future__ import annotations

import csv
import io
import random
import statistics
import time
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone

from .catalog import FUEL_TYPES, RatingRecord, RatingSummary, Vehicle
from .costs import Tariff
from .ranking import PreferenceProfile, RankedList, RatedVehicle, rank_vehicles

BENCH_CSV_HEADER = ("n", "mode", "reps", "mean_ms", "std_ms", "min_ms", "max_ms")

_BRANDS = (
    ("Renault", ("Clio", "Zoe", "Megane")),
    ("Volkswagen", ("Golf", "Polo", "ID.3")),
    ("Toyota", ("Yaris", "Corolla", "Prius")),
    ("Fiat", ("500", "Panda", "Tipo")),
    ("Nissan", ("Leaf", "Micra", "Juke")),
)
_COLORS = ("white", "black", "silver", "blue", "red", "green")
_PARKINGS = (
    "Central Station", "Market Square", "Riverside Garage", "University Lot",
    "Harbor Deck", "City Hall", "North Park", "Airport P2",
)

#: Synthetic fleets scatter around this city center (Porto).
CITY_CENTER = (41.1579, -8.6291)

#: Operators seeded alongside synthetic fleets, with their tariffs.
SEED_PARTNERS = (
    ("UrbanWheels", Tariff(rate_travel=30, rate_standby=10, rate_distance=25, included_km=20.0)),
    ("GoShare", Tariff(rate_travel=28, rate_standby=12, rate_distance=30, included_km=15.0)),
    ("CityDrive", Tariff(rate_travel=35, rate_standby=8, rate_distance=20, included_km=25.0)),
)

_RATING_EPOCH = datetime(2024, 1, 1, tzinfo=timezone.utc)


def synthetic_fleet(n: int, rng_seed: int) -> tuple[list[Vehicle], list[RatingRecord]]:
    """Deterministic fleet of ``n`` vehicles plus their seeded user ratings.

    Vehicle ids are assigned 1..n; rating timestamps derive from the seed,
    so the same (n, seed) pair always produces an identical fleet.
    """
    if n < 1:
        raise ValueError(f"fleet size must be at least 1, got {n}")
    rng = random.Random(rng_seed)
    lat0, lon0 = CITY_CENTER
    vehicles: list[Vehicle] = []
    ratings: list[RatingRecord] = []
    for vid in range(1, n + 1):
        brand, models = _BRANDS[rng.randrange(len(_BRANDS))]
        vehicles.append(
            Vehicle(
                id=vid,
                partner_id=1 + rng.randrange(len(SEED_PARTNERS)),
                brand=brand,
                model=models[rng.randrange(len(models))],
                color=_COLORS[rng.randrange(len(_COLORS))],
                air_conditioning=rng.random() < 0.7,
                price_per_hour=rng.randrange(300, 1501),
                fuel_type=FUEL_TYPES[rng.randrange(len(FUEL_TYPES))],
                odometer_km=rng.randrange(0, 200_001),
                latitude=lat0 + rng.uniform(-0.15, 0.15),
                longitude=lon0 + rng.uniform(-0.15, 0.15),
                parking=_PARKINGS[rng.randrange(len(_PARKINGS))],
                active=True,
            )
        )
        for _ in range(rng.randrange(0, 6)):
            ratings.append(
                RatingRecord(
                    vehicle_id=vid,
                    user_id=1,
                    comfort=rng.randrange(1, 6),
                    consumption=rng.randrange(1, 6),
                    safety=rng.randrange(1, 6),
                    timestamp=_RATING_EPOCH + timedelta(minutes=rng.randrange(0, 525_600)),
                )
            )
    return vehicles, ratings


def synthetic_rated_fleet(n: int, rng_seed: int) -> list[RatedVehicle]:
    """The same synthetic fleet reduced to in-memory ranking inputs."""
    vehicles, ratings = synthetic_fleet(n, rng_seed)
    by_vehicle: dict[int, list[RatingRecord]] = {}
    for record in ratings:
        by_vehicle.setdefault(record.vehicle_id, []).append(record)
    fleet = []
    for vehicle in vehicles:
        records = by_vehicle.get(vehicle.id)
        if not records:
            summary = RatingSummary.neutral()
        else:
            count = len(records)
            summary = RatingSummary.from_means(
                count,
                sum(r.comfort for r in records) / count,
                sum(r.consumption for r in records) / count,
                sum(r.safety for r in records) / count,
            )
        fleet.append(RatedVehicle(vehicle.id, summary))
    return fleet


@dataclass(frozen=True)
class BenchRow:
    n: int
    mode: str
    repetitions: int
    mean_ms: float
    std_ms: float
    min_ms: float
    max_ms: float

    def __post_init__(self):
        if self.repetitions < 1:
            raise ValueError("repetitions must be at least 1")
        if not self.min_ms <= self.mean_ms <= self.max_ms:
            raise ValueError("timing summary is inconsistent")


def bench_rank(
    n_list,
    mode: str,
    repetitions: int,
    rng_seed: int = 42,
    profile: PreferenceProfile | None = None,
) -> list[BenchRow]:
    """Time ranking over synthetic fleets of increasing size.

    Repetitions at a fixed seed must return identical rankings; the
    harness verifies that before reporting timings.
    """
    sizes = sorted(int(n) for n in n_list)
    if any(n < 1 for n in sizes):
        raise ValueError("fleet sizes must be at least 1")
    if repetitions < 3:
        raise ValueError("at least 3 repetitions are required")
    prefs = profile or PreferenceProfile.equal_importance()
    rows = []
    for n in sizes:
        fleet = synthetic_rated_fleet(n, rng_seed)
        baseline = rank_vehicles(fleet, prefs, mode)  # warm-up, untimed
        timings_ms = []
        for _ in range(repetitions):
            started = time.perf_counter()
            ranked = rank_vehicles(fleet, prefs, mode)
            timings_ms.append((time.perf_counter() - started) * 1000.0)
            if ranked.entries != baseline.entries:
                raise RuntimeError(f"ranking is not deterministic at n={n}")
        rows.append(
            BenchRow(
                n=n,
                mode=mode,
                repetitions=repetitions,
                mean_ms=statistics.fmean(timings_ms),
                std_ms=statistics.stdev(timings_ms) if repetitions > 1 else 0.0,
                min_ms=min(timings_ms),
                max_ms=max(timings_ms),
            )
        )
    return rows


def bench_csv(rows) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(BENCH_CSV_HEADER)
    for row in rows:
        writer.writerow(
            [
                row.n,
                row.mode,
                row.repetitions,
                f"{row.mean_ms:.3f}",
                f"{row.std_ms:.3f}",
                f"{row.min_ms:.3f}",
                f"{row.max_ms:.3f}",
            ]
        )
    return out.getvalue()


def last_ranking(n: int, rng_seed: int, mode: str) -> RankedList:
    """One ranking run at the benchmark's default profile (used by tests)."""
    fleet = synthetic_rated_fleet(n, rng_seed)
    return rank_vehicles(fleet, PreferenceProfile.equal_importance(), mode)
