"""Trip pricing and ownership-versus-carsharing savings arithmetic.

All money values are integer cents. The only place fractional cents can
arise is the distance charge, which is rounded half-up; everything else
stays in exact integer arithmetic.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, fields
from decimal import ROUND_HALF_UP, Decimal
from importlib import resources
from typing import Callable, Mapping

from .validation import check_non_negative_int, check_non_negative_real

#: Trips-per-month and hours-per-trip axes of the shipped scenario grid.
ANM_VALUES: tuple[int, ...] = (1, 4, 8, 12)
ADT_VALUES: tuple[int, ...] = (1, 2, 3, 4, 5, 6, 7, 8)

#: Published monthly savings, in whole dollars, that the savings pipeline
#: must reproduce when run with the shipped pricing fixture and the default
#: ownership profile. Used by ``carshare table1`` as a regression baseline.
REFERENCE_SM_DOLLARS: dict[int, tuple[int, ...]] = {
    1: (542, 534, 527, 519, 511, 503, 501, 494),
    4: (519, 494, 466, 438, 410, 383, 355, 327),
    8: (494, 438, 383, 327, 286, 234, 181, 128),
    12: (466, 383, 313, 234, 155, 76, -3, -82),
}

PRICING_FIXTURE_HEADER = ("anm", "adt", "monthly_cost_cents")
GRID_CSV_HEADER = ("anm", "adt", "sm_cents", "sy_cents")


def reference_sm_cents() -> dict[tuple[int, int], int]:
    """Reference monthly savings keyed by (trips/month, hours/trip), in cents."""
    return {
        (anm, adt): dollars * 100
        for anm, row in REFERENCE_SM_DOLLARS.items()
        for adt, dollars in zip(ADT_VALUES, row)
    }


@dataclass(frozen=True)
class Tariff:
    """Per-minute and per-km rental pricing, cents."""

    rate_travel: int
    rate_standby: int
    rate_distance: int
    included_km: float = 0.0

    def __post_init__(self):
        check_non_negative_int(self.rate_travel, "rate_travel")
        check_non_negative_int(self.rate_standby, "rate_standby")
        check_non_negative_int(self.rate_distance, "rate_distance")
        check_non_negative_real(self.included_km, "included_km")


@dataclass(frozen=True)
class TripPlan:
    """A trip described by driving time, standby time, and distance."""

    travel_minutes: int
    standby_minutes: int
    distance_km: float

    def __post_init__(self):
        check_non_negative_int(self.travel_minutes, "travel_minutes")
        check_non_negative_int(self.standby_minutes, "standby_minutes")
        check_non_negative_real(self.distance_km, "distance_km")


@dataclass(frozen=True)
class OwnershipProfile:
    """Monthly own-car cost lines, cents."""

    car_payment: int
    insurance: int
    gas: int
    license_registration_taxes: int
    maintenance: int
    parking: int

    def __post_init__(self):
        for f in fields(self):
            check_non_negative_int(getattr(self, f.name), f.name)

    def total(self) -> int:
        return sum(getattr(self, f.name) for f in fields(self))


#: Cost profile behind the shipped scenario grid: $300 car payment, $30
#: insurance, $100 gas, $30 license/registration/taxes, $30 maintenance,
#: $60 parking per month.
DEFAULT_OWNERSHIP_PROFILE = OwnershipProfile(
    car_payment=30000,
    insurance=3000,
    gas=10000,
    license_registration_taxes=3000,
    maintenance=3000,
    parking=6000,
)


@dataclass(frozen=True)
class SavingsResult:
    """Monthly and yearly savings, cents. Negative values mean carsharing costs more."""

    sm: int
    sy: int

    def __post_init__(self):
        if self.sy != 12 * self.sm:
            raise ValueError(f"yearly savings must be exactly 12x monthly: sm={self.sm}, sy={self.sy}")


@dataclass(frozen=True)
class ScenarioGrid:
    """Savings per (trips/month, hours/trip) grid point."""

    anm_values: tuple[int, ...]
    adt_values: tuple[int, ...]
    cells: Mapping[tuple[int, int], SavingsResult]

    def __post_init__(self):
        expected = {(anm, adt) for anm in self.anm_values for adt in self.adt_values}
        if set(self.cells) != expected:
            raise ValueError("grid cells do not match the anm/adt axes")

    def cell(self, anm: int, adt: int) -> SavingsResult:
        return self.cells[(anm, adt)]

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(GRID_CSV_HEADER)
        for anm in self.anm_values:
            for adt in self.adt_values:
                cell = self.cells[(anm, adt)]
                writer.writerow([anm, adt, cell.sm, cell.sy])
        return out.getvalue()


def quote_trip(tariff: Tariff, plan: TripPlan) -> int:
    """Total trip cost in cents.

    Time charges are exact integer products; the distance charge applies
    only beyond the included allowance and is rounded half-up to the cent.
    """
    time_cost = (
        tariff.rate_travel * plan.travel_minutes
        + tariff.rate_standby * plan.standby_minutes
    )
    excess_km = max(0.0, plan.distance_km - tariff.included_km)
    distance_cost = int(
        (Decimal(tariff.rate_distance) * Decimal(repr(excess_km))).quantize(
            Decimal("1"), rounding=ROUND_HALF_UP
        )
    )
    return time_cost + distance_cost


def monthly_savings(own: OwnershipProfile, carshare_monthly_cost: int) -> SavingsResult:
    """Savings from replacing the owned car with carsharing at the given monthly cost."""
    cost = check_non_negative_int(carshare_monthly_cost, "carshare_monthly_cost")
    sm = own.total() - cost
    return SavingsResult(sm=sm, sy=12 * sm)


def scenario_grid(
    own: OwnershipProfile,
    pricing: Callable[[int, int], int],
    anm_values=ANM_VALUES,
    adt_values=ADT_VALUES,
) -> ScenarioGrid:
    """Evaluate monthly/yearly savings over a (trips/month, hours/trip) grid.

    ``pricing(anm, adt)`` must return the carsharing monthly cost in cents
    for every grid point; a missing point aborts the grid.
    """
    anm_values = tuple(anm_values)
    adt_values = tuple(adt_values)
    cells: dict[tuple[int, int], SavingsResult] = {}
    for anm in anm_values:
        for adt in adt_values:
            try:
                cost = pricing(anm, adt)
            except LookupError as exc:
                raise ValueError(f"pricing undefined at grid point ({anm}, {adt})") from exc
            cells[(anm, adt)] = monthly_savings(own, cost)
    return ScenarioGrid(anm_values=anm_values, adt_values=adt_values, cells=cells)


#: Per-person yearly CO2 reduction attributed to carsharing, kg (low, high).
CO2_SAVED_KG_PER_PERSON_YEAR: tuple[int, int] = (175, 265)

#: Share of yearly car kilometers dropped after switching (low, high).
KM_REDUCTION_RATE: tuple[float, float] = (0.15, 0.20)


def co2_savings(persons: int) -> tuple[int, int]:
    """Yearly CO2 reduction range in kg for a population of carsharers."""
    p = check_non_negative_int(persons, "persons")
    low, high = CO2_SAVED_KG_PER_PERSON_YEAR
    return (low * p, high * p)


def km_reduction(annual_km: float) -> tuple[float, float]:
    """Range of yearly kilometers no longer driven, given current annual mileage."""
    km = check_non_negative_real(annual_km, "annual_km")
    low, high = KM_REDUCTION_RATE
    return (low * km, high * km)


def load_pricing_fixture(path=None) -> dict[tuple[int, int], int]:
    """Load a pricing table mapping (anm, adt) to monthly cost in cents.

    Reads the packaged fixture when no path is given.
    """
    if path is None:
        text = (resources.files("carshare.data") / "pricing_fixture.csv").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(h.strip() for h in header) != PRICING_FIXTURE_HEADER:
        raise ValueError(f"pricing fixture must start with header {','.join(PRICING_FIXTURE_HEADER)}")
    table: dict[tuple[int, int], int] = {}
    for row in reader:
        if not row:
            continue
        if len(row) != 3:
            raise ValueError(f"malformed pricing fixture row: {row!r}")
        anm, adt, cost = (int(v) for v in row)
        if cost < 0:
            raise ValueError(f"pricing fixture cost must be non-negative: {row!r}")
        key = (anm, adt)
        if key in table:
            raise ValueError(f"duplicate pricing fixture point {key}")
        table[key] = cost
    return table


def fixture_pricing(table: Mapping[tuple[int, int], int]) -> Callable[[int, int], int]:
    """Wrap a pricing table as the callable form ``scenario_grid`` expects."""

    def pricing(anm: int, adt: int) -> int:
        return table[(anm, adt)]

    return pricing
