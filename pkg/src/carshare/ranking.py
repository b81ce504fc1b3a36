"""Preference-driven vehicle ranking.

Criterion weights come from the user's pairwise importance judgments;
per-criterion alternative priorities come from the fleet's rating
averages, either through explicit ratio matrices (``matrix`` mode, the
shape the benchmarks measure) or by direct normalization (``fast`` mode).
Ratio matrices are consistent by construction, so both modes agree to
floating-point precision.

The same math is exposed ecosystem-style through :class:`AHPRanker`, an
estimator over positive (n_alternatives, n_criteria) score matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import ahp
from .catalog import RatingSummary
from .validation import check_saaty_value, check_score_matrix

#: Rating category backing each supported criterion name. The two label
#: pairs (performance/comfort, security/safety) are interchangeable.
CRITERION_CATEGORIES: dict[str, str] = {
    "performance": "comfort",
    "comfort": "comfort",
    "consumption": "consumption",
    "security": "safety",
    "safety": "safety",
}

DEFAULT_CRITERIA: tuple[str, ...] = ("performance", "consumption", "security")

#: Consistency and usability both degrade beyond seven criteria, so larger
#: profiles are rejected outright.
MAX_CRITERIA = 7

RANKING_MODES = ("matrix", "fast")


@dataclass(frozen=True)
class PreferenceProfile:
    """Criterion names plus upper-triangle pairwise importance judgments.

    Judgments are user input and must come from the 1-9 scale or its
    reciprocals; see :data:`carshare.validation.SAATY_SCALE`.
    """

    criteria: tuple[str, ...] = DEFAULT_CRITERIA
    judgments: tuple[float, ...] = (1.0, 1.0, 1.0)

    def __post_init__(self):
        criteria = tuple(self.criteria)
        if not 1 <= len(criteria) <= MAX_CRITERIA:
            raise ValueError(
                f"between 1 and {MAX_CRITERIA} criteria are supported, got {len(criteria)}"
            )
        if len(set(criteria)) != len(criteria):
            raise ValueError("criterion names must be unique")
        k = len(criteria)
        judgments = tuple(float(v) for v in self.judgments)
        expected = k * (k - 1) // 2
        if len(judgments) != expected:
            raise ValueError(
                f"expected {expected} pairwise judgments for {k} criteria, got {len(judgments)}"
            )
        for value in judgments:
            check_saaty_value(value)
        object.__setattr__(self, "criteria", criteria)
        object.__setattr__(self, "judgments", judgments)

    @classmethod
    def equal_importance(cls, criteria: Sequence[str] = DEFAULT_CRITERIA) -> "PreferenceProfile":
        criteria = tuple(criteria)
        k = len(criteria)
        return cls(criteria=criteria, judgments=(1.0,) * (k * (k - 1) // 2))


@dataclass(frozen=True)
class RatedVehicle:
    """A vehicle reduced to what ranking needs: its id and rating summary."""

    vehicle_id: int
    summary: RatingSummary


@dataclass(frozen=True)
class RankedEntry:
    vehicle_id: int
    global_score: float
    rank: int


@dataclass(frozen=True)
class RankedList:
    """Ranking result: entries sorted by descending global score (ties by id),
    with the criteria weights and consistency diagnostics that produced it.

    ``local_priorities[k][i]`` is the priority of ``entries[i]`` under
    criterion k; columns follow entry order.
    """

    entries: tuple[RankedEntry, ...]
    criteria: tuple[str, ...]
    criteria_weights: np.ndarray
    consistency: ahp.ConsistencyReport
    mode: str
    local_priorities: np.ndarray = field(repr=False)


def criterion_scores(vehicles: Sequence[RatedVehicle], criterion: str) -> np.ndarray:
    """Per-vehicle scores for one criterion, taken from rating means.

    Unrated vehicles carry the neutral default, so every output lies in
    [1, 5] and is strictly positive.
    """
    if len(vehicles) == 0:
        raise ValueError("vehicle sequence must not be empty")
    category = CRITERION_CATEGORIES.get(criterion)
    if category is None:
        known = ", ".join(sorted(CRITERION_CATEGORIES))
        raise ValueError(f"unknown criterion {criterion!r}; expected one of: {known}")
    attribute = f"mean_{category}"
    return np.array([getattr(v.summary, attribute) for v in vehicles], dtype=float)


def local_priorities(score_matrix: np.ndarray, mode: str) -> np.ndarray:
    """Per-criterion alternative priorities for an (N, K) positive score matrix.

    Returns a (K, N) array whose rows each sum to 1. ``matrix`` mode runs
    the eigenvector computation on an explicit ratio matrix per criterion;
    ``fast`` mode normalizes scores directly, which the consistent-matrix
    identity makes equivalent.
    """
    if mode not in RANKING_MODES:
        raise ValueError(f"mode must be one of {RANKING_MODES}, got {mode!r}")
    scores = check_score_matrix(score_matrix, "score matrix")
    n, k = scores.shape
    locals_ = np.empty((k, n))
    for col in range(k):
        column = scores[:, col]
        if mode == "matrix":
            comparison = ahp.ratio_matrix(column)
            locals_[col] = ahp.principal_weights(comparison).weights
            del comparison  # alternative matrices get large; free eagerly
        else:
            locals_[col] = column / column.sum()
    return locals_


def global_scores(score_matrix: np.ndarray, criteria_weights, mode: str = "fast") -> np.ndarray:
    """Criteria-weighted aggregation of local priorities into global ones."""
    return ahp.aggregate_global(criteria_weights, local_priorities(score_matrix, mode))


def derive_criteria_weights(profile: PreferenceProfile) -> tuple[np.ndarray, ahp.ConsistencyReport]:
    """Criterion weights and consistency diagnostics from a preference profile."""
    matrix = ahp.build_pairwise(len(profile.criteria), profile.judgments)
    eigen = ahp.principal_weights(matrix)
    report = ahp.consistency_report(matrix, eigen.lambda_max)
    return eigen.weights, report


def rank_vehicles(
    vehicles: Sequence[RatedVehicle],
    prefs: PreferenceProfile,
    mode: str = "fast",
) -> RankedList:
    """Rank a fleet against a preference profile.

    An inconsistent profile (CR above the threshold) still ranks; the
    attached report carries ``acceptable=False`` as a warning. Results are
    independent of input order: the fleet is canonicalized by vehicle id
    before any arithmetic.
    """
    if mode not in RANKING_MODES:
        raise ValueError(f"mode must be one of {RANKING_MODES}, got {mode!r}")
    fleet = sorted(vehicles, key=lambda v: v.vehicle_id)
    if not fleet:
        raise ValueError("cannot rank an empty fleet")
    ids = [v.vehicle_id for v in fleet]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate vehicle ids in fleet")

    weights, report = derive_criteria_weights(prefs)
    scores = np.column_stack([criterion_scores(fleet, name) for name in prefs.criteria])
    locals_ = local_priorities(scores, mode)
    globals_ = ahp.aggregate_global(weights, locals_)

    order = sorted(range(len(fleet)), key=lambda i: (-globals_[i], ids[i]))
    entries = tuple(
        RankedEntry(vehicle_id=ids[i], global_score=float(globals_[i]), rank=position + 1)
        for position, i in enumerate(order)
    )
    ordered_locals = locals_[:, order]
    ordered_locals.setflags(write=False)
    weights.setflags(write=False)
    return RankedList(
        entries=entries,
        criteria=prefs.criteria,
        criteria_weights=weights,
        consistency=report,
        mode=mode,
        local_priorities=ordered_locals,
    )


@dataclass(frozen=True)
class Contribution:
    criterion: str
    weight: float
    local_priority: float
    contribution: float


def explain(ranked: RankedList, vehicle_id: int) -> list[Contribution]:
    """Per-criterion breakdown of one vehicle's global score.

    The contribution column sums back to the entry's global score.
    """
    for position, entry in enumerate(ranked.entries):
        if entry.vehicle_id == vehicle_id:
            break
    else:
        raise ValueError(f"vehicle {vehicle_id!r} is not part of this ranking")
    rows = []
    for k, criterion in enumerate(ranked.criteria):
        weight = float(ranked.criteria_weights[k])
        local = float(ranked.local_priorities[k, position])
        rows.append(Contribution(criterion, weight, local, weight * local))
    return rows


class AHPRanker(BaseEstimator, TransformerMixin):
    """Score alternatives from a positive criterion-score matrix.

    Rows of ``X`` are alternatives, columns are criteria (higher is
    better). Criterion weights are derived once from the configured
    pairwise ``judgments``; ``predict`` then maps any score matrix to
    global priority shares and ``transform`` to the per-criterion
    weighted contributions those shares sum over.

    Parameters
    ----------
    judgments : sequence of float, optional
        Upper-triangle pairwise importance values on the 1-9 scale.
        Defaults to equal importance.
    criteria : sequence of str, optional
        Column labels; purely descriptive. Length must match ``X``.
    mode : {"fast", "matrix"}
        Local-priority computation; both agree to 1e-9.
    """

    def __init__(self, judgments=None, criteria=None, mode="fast"):
        self.judgments = judgments
        self.criteria = criteria
        self.mode = mode

    def fit(self, X, y=None):
        X = check_score_matrix(X, "X")
        k = X.shape[1]
        if self.criteria is not None:
            names = tuple(str(c) for c in self.criteria)
            if len(names) != k:
                raise ValueError(f"{len(names)} criteria names for {k} score columns")
        else:
            names = tuple(f"criterion_{i + 1}" for i in range(k))
        if self.judgments is not None:
            judgments = tuple(float(v) for v in self.judgments)
        else:
            judgments = (1.0,) * (k * (k - 1) // 2)
        profile = PreferenceProfile(criteria=names, judgments=judgments)
        weights, report = derive_criteria_weights(profile)
        self.criteria_names_ = names
        self.criteria_weights_ = weights
        self.consistency_ = report
        self.n_features_in_ = k
        return self

    def predict(self, X) -> np.ndarray:
        """Global priority shares for each row of ``X``; sums to 1."""
        check_is_fitted(self, "criteria_weights_")
        X = self._check_shape(X)
        return global_scores(X, self.criteria_weights_, self.mode)

    def transform(self, X) -> np.ndarray:
        """(N, K) weighted local priorities; rows sum to the predict output."""
        check_is_fitted(self, "criteria_weights_")
        X = self._check_shape(X)
        locals_ = local_priorities(X, self.mode)
        return (locals_ * self.criteria_weights_[:, None]).T

    def _check_shape(self, X) -> np.ndarray:
        X = check_score_matrix(X, "X")
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} criteria columns, expected {self.n_features_in_}"
            )
        return X
