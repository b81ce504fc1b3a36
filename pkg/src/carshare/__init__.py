"""Carsharing decision support: preference-driven vehicle ranking, trip
cost simulation, a booking service, and scalability benchmarks."""

from .ahp import (
    CR_THRESHOLD,
    RANDOM_INDEX,
    ConsistencyReport,
    ConvergenceError,
    EigenResult,
    PairwiseMatrix,
    aggregate_global,
    build_pairwise,
    consistency_report,
    principal_weights,
    ratio_matrix,
)
from .bookings import Booking, BookingConflictError, BookingService, InvalidIntervalError
from .catalog import (
    EARTH_RADIUS_KM,
    FUEL_TYPES,
    NEUTRAL_RATING,
    ImportReport,
    MalformedDocumentError,
    RatingRecord,
    RatingSummary,
    UnknownVehicleError,
    Vehicle,
    VehicleStore,
    great_circle_km,
)
from .config import Config
from .costs import (
    ADT_VALUES,
    ANM_VALUES,
    DEFAULT_OWNERSHIP_PROFILE,
    OwnershipProfile,
    SavingsResult,
    ScenarioGrid,
    Tariff,
    TripPlan,
    co2_savings,
    fixture_pricing,
    km_reduction,
    load_pricing_fixture,
    monthly_savings,
    quote_trip,
    scenario_grid,
)
from .ranking import (
    DEFAULT_CRITERIA,
    MAX_CRITERIA,
    AHPRanker,
    Contribution,
    PreferenceProfile,
    RankedEntry,
    RankedList,
    RatedVehicle,
    criterion_scores,
    explain,
    global_scores,
    rank_vehicles,
)
from .storage import Database
from .validation import SAATY_SCALE

__version__ = "0.1.0"

__all__ = [
    "AHPRanker",
    "ADT_VALUES",
    "ANM_VALUES",
    "Booking",
    "BookingConflictError",
    "BookingService",
    "CR_THRESHOLD",
    "Config",
    "ConsistencyReport",
    "Contribution",
    "ConvergenceError",
    "DEFAULT_CRITERIA",
    "DEFAULT_OWNERSHIP_PROFILE",
    "Database",
    "EARTH_RADIUS_KM",
    "EigenResult",
    "FUEL_TYPES",
    "ImportReport",
    "InvalidIntervalError",
    "MAX_CRITERIA",
    "MalformedDocumentError",
    "NEUTRAL_RATING",
    "OwnershipProfile",
    "PairwiseMatrix",
    "PreferenceProfile",
    "RANDOM_INDEX",
    "RankedEntry",
    "RankedList",
    "RatedVehicle",
    "RatingRecord",
    "RatingSummary",
    "SAATY_SCALE",
    "SavingsResult",
    "ScenarioGrid",
    "Tariff",
    "TripPlan",
    "UnknownVehicleError",
    "Vehicle",
    "VehicleStore",
    "aggregate_global",
    "build_pairwise",
    "co2_savings",
    "consistency_report",
    "criterion_scores",
    "explain",
    "fixture_pricing",
    "global_scores",
    "great_circle_km",
    "km_reduction",
    "load_pricing_fixture",
    "monthly_savings",
    "principal_weights",
    "quote_trip",
    "rank_vehicles",
    "ratio_matrix",
    "scenario_grid",
]
