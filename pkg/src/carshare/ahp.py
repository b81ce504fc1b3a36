"""Pairwise-comparison mathematics: judgment matrices, eigenvector
priorities, and consistency diagnostics.

Priorities are plain 1-D numpy arrays normalized to sum 1, so they read
directly as shares. Matrices are immutable once constructed and safe to
share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .validation import check_positive_vector

#: Random consistency baseline (Saaty), indexed by matrix order. Orders
#: above 10 are rejected because no baseline is tabulated for them.
RANDOM_INDEX: dict[int, float] = {
    1: 0.0,
    2: 0.0,
    3: 0.58,
    4: 0.90,
    5: 1.12,
    6: 1.24,
    7: 1.32,
    8: 1.41,
    9: 1.45,
    10: 1.49,
}

#: A judgment matrix is accepted as consistent when CR stays at or below this.
CR_THRESHOLD = 0.10

MAX_ITERATIONS = 1000
CONVERGENCE_TOL = 1e-10
_RECIPROCITY_TOL = 1e-12


class ConvergenceError(RuntimeError):
    """Power iteration hit the iteration cap before stabilizing.

    Carries the last iterate so callers can inspect how far it got.
    """

    def __init__(self, message: str, weights: np.ndarray, lambda_max: float, iterations: int):
        super().__init__(message)
        self.weights = weights
        self.lambda_max = lambda_max
        self.iterations = iterations
        self.converged = False


class PairwiseMatrix:
    """Square positive reciprocal judgment matrix.

    ``entries[i][j]`` expresses how strongly item ``i`` dominates item
    ``j``; the diagonal is exactly 1 and the lower triangle mirrors the
    upper one through reciprocals.
    """

    __slots__ = ("entries",)

    def __init__(self, entries, *, validate: bool = True):
        m = np.array(entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ValueError("judgment matrix must be square and non-empty")
        if validate:
            _check_reciprocal(m)
        m.setflags(write=False)
        self.entries = m

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"PairwiseMatrix(n={self.n})"


def _check_reciprocal(m: np.ndarray) -> None:
    if not np.all(np.isfinite(m)) or np.any(m <= 0.0):
        raise ValueError("judgment matrix entries must be strictly positive and finite")
    if np.any(np.diag(m) != 1.0):
        raise ValueError("judgment matrix diagonal must be exactly 1")
    # entries[j][i] == 1/entries[i][j]  <=>  entries[i][j] * entries[j][i] == 1
    if np.any(np.abs(m * m.T - 1.0) > _RECIPROCITY_TOL):
        raise ValueError("judgment matrix is not reciprocal")


def build_pairwise(n: int, upper_judgments) -> PairwiseMatrix:
    """Assemble a reciprocal judgment matrix from its upper triangle.

    ``upper_judgments`` holds the n(n-1)/2 strictly positive ratios in
    row-major order; the diagonal is set to 1 and the lower triangle to
    the reciprocals.
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(f"matrix order must be a positive integer, got {n!r}")
    judgments = [float(v) for v in upper_judgments]
    expected = n * (n - 1) // 2
    if len(judgments) != expected:
        raise ValueError(
            f"expected {expected} upper-triangle judgments for order {n}, got {len(judgments)}"
        )
    for v in judgments:
        if not np.isfinite(v) or v <= 0.0:
            raise ValueError(f"judgments must be strictly positive and finite, got {v!r}")
    m = np.ones((n, n))
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            m[i, j] = judgments[k]
            m[j, i] = 1.0 / judgments[k]
            k += 1
    return PairwiseMatrix(m)


def ratio_matrix(scores) -> PairwiseMatrix:
    """Perfectly consistent judgment matrix of score ratios.

    ``entries[i][j] == scores[i] / scores[j]``. The construction
    guarantees reciprocity, so re-validation is skipped; that matters for
    large alternative matrices.
    """
    s = check_positive_vector(scores, "scores")
    m = s[:, None] / s[None, :]
    return PairwiseMatrix(m, validate=False)


@dataclass(frozen=True)
class EigenResult:
    """Principal eigenpair of a judgment matrix.

    ``weights`` sums to 1; ``lambda_max`` is the eigenvalue estimate taken
    as the priority sum of the final un-normalized iterate.
    """

    weights: np.ndarray
    lambda_max: float
    iterations: int
    converged: bool


def principal_weights(
    m: PairwiseMatrix,
    *,
    max_iterations: int = MAX_ITERATIONS,
    tol: float = CONVERGENCE_TOL,
) -> EigenResult:
    """Dominant right eigenvector of ``m`` by power iteration.

    Starts from the uniform vector and stops once successive normalized
    iterates differ by less than ``tol`` in max-norm. Positive reciprocal
    matrices always converge; the cap exists as a guard and trips a
    :class:`ConvergenceError` that carries the last iterate.
    """
    a = m.entries
    n = m.n
    if n == 1:
        unit = np.array([1.0])
        unit.setflags(write=False)
        return EigenResult(unit, 1.0, 0, True)
    w = np.full(n, 1.0 / n)
    lam = float("nan")
    for iteration in range(1, max_iterations + 1):
        y = a @ w
        lam = float(y.sum())  # w sums to 1, so this estimates the eigenvalue
        w_next = y / lam
        if float(np.max(np.abs(w_next - w))) < tol:
            w_next.setflags(write=False)
            return EigenResult(w_next, lam, iteration, True)
        w = w_next
    raise ConvergenceError(
        f"power iteration did not stabilize within {max_iterations} iterations",
        weights=w,
        lambda_max=lam,
        iterations=max_iterations,
    )


@dataclass(frozen=True)
class ConsistencyReport:
    """Consistency diagnostics for a judgment matrix of order n.

    ``ci == (lambda_max - n) / (n - 1)`` for n >= 2 and 0 otherwise;
    ``cr == ci / ri`` for n >= 3 and 0 otherwise. ``acceptable`` applies
    the standard 0.10 ceiling; enforcing it is left to callers.
    """

    lambda_max: float
    ci: float
    ri: float
    cr: float
    acceptable: bool


def consistency_report(m: PairwiseMatrix, lambda_max: float) -> ConsistencyReport:
    n = m.n
    if n > max(RANDOM_INDEX):
        raise ValueError(
            f"no random consistency baseline for order {n}; orders above {max(RANDOM_INDEX)} are not supported"
        )
    ri = RANDOM_INDEX[n]
    ci = 0.0 if n <= 1 else (lambda_max - n) / (n - 1)
    cr = 0.0 if n <= 2 else ci / ri
    return ConsistencyReport(
        lambda_max=float(lambda_max),
        ci=float(ci),
        ri=ri,
        cr=float(cr),
        acceptable=cr <= CR_THRESHOLD,
    )


def aggregate_global(criteria_weights, local_priorities) -> np.ndarray:
    """Aggregate per-criterion priorities into global ones.

    ``global[i] = sum_k criteria_weights[k] * local_priorities[k][i]``.
    Both inputs must already be normalized; the convex combination then
    sums to 1 by construction.
    """
    w = np.asarray(criteria_weights, dtype=float)
    locals_ = np.atleast_2d(np.asarray(local_priorities, dtype=float))
    if w.ndim != 1 or w.size < 1:
        raise ValueError("criteria weights must be a non-empty vector")
    if locals_.shape[0] != w.shape[0]:
        raise ValueError(
            f"dimension mismatch: {w.shape[0]} criteria weights vs {locals_.shape[0]} local priority rows"
        )
    if abs(float(w.sum()) - 1.0) > 1e-9:
        raise ValueError("criteria weights must sum to 1")
    row_sums = locals_.sum(axis=1)
    if np.any(np.abs(row_sums - 1.0) > 1e-9):
        raise ValueError("each local priority row must sum to 1")
    return w @ locals_
