"""Field discovery: correlation, principal-component extraction, varimax.

The pipeline is ``pearson_matrix`` -> ``principal_components`` ->
``varimax`` -> ``classify_by_max_loading``. Factor numbers in public
outputs are 1-based; factor 1 explains the most variance.
"""

from __future__ import annotations

import csv
import io
import logging
import warnings
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Sequence, TextIO

import numpy as np

from .exceptions import NumericalError, ParseError, UndefinedCorrelationError
from .matrixops import CitationMatrix, ProfileOrientation

logger = logging.getLogger(__name__)

DEFAULT_N_FACTORS = 5
DEFAULT_TOLERANCE = 1e-6
DEFAULT_MAX_SWEEPS = 100
# slack for floating-point noise when checking monotonicity of the criterion
_MONOTONE_SLACK = 1e-12


def _frozen(a):
    arr = np.array(a, dtype=float, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    journals: tuple[str, ...]
    cells: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "journals", tuple(self.journals))
        object.__setattr__(self, "cells", _frozen(self.cells))
        p = len(self.journals)
        if self.cells.shape != (p, p):
            raise ValueError(f"cells must be {p}x{p}, got {self.cells.shape}")


@dataclass(frozen=True, eq=False)
class FactorModel:
    """Loadings plus per-factor and per-journal summaries.

    ``eigenvalues`` holds the extraction eigenvalues, or the sums of squared
    loadings once the model has been rotated. ``rotation`` maps the unrotated
    loadings onto these ones (identity when unrotated).
    """

    journals: tuple[str, ...]
    loadings: np.ndarray
    eigenvalues: np.ndarray
    rotation: np.ndarray | None = None
    rotated: bool = False
    sweeps: int = 0
    criterion_history: tuple[float, ...] = ()
    variance_proportions: np.ndarray = field(init=False)
    communalities: np.ndarray = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "journals", tuple(self.journals))
        L = _frozen(self.loadings)
        if L.ndim != 2 or L.shape[0] != len(self.journals):
            raise ValueError("loadings must be a p x k array with one row per journal")
        object.__setattr__(self, "loadings", L)
        object.__setattr__(self, "eigenvalues", _frozen(self.eigenvalues))
        k = L.shape[1]
        R = np.eye(k) if self.rotation is None else self.rotation
        object.__setattr__(self, "rotation", _frozen(R))
        object.__setattr__(self, "criterion_history", tuple(float(v) for v in self.criterion_history))
        sq = L**2
        object.__setattr__(self, "variance_proportions", _frozen(sq.sum(axis=0) / L.shape[0]))
        object.__setattr__(self, "communalities", _frozen(sq.sum(axis=1)))

    @property
    def k(self) -> int:
        return self.loadings.shape[1]

    @property
    def p(self) -> int:
        return self.loadings.shape[0]


@dataclass(frozen=True)
class FactorAssignment:
    """Journal -> (1-based factor number, loading used for the decision)."""

    factors: Mapping[str, int]
    loadings: Mapping[str, float]
    signed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "factors", MappingProxyType(dict(self.factors)))
        object.__setattr__(self, "loadings", MappingProxyType(dict(self.loadings)))

    def __getitem__(self, journal: str) -> int:
        return self.factors[journal]

    def __contains__(self, journal: str) -> bool:
        return journal in self.factors

    def __len__(self):
        return len(self.factors)

    def members(self, factor: int) -> list[str]:
        return [j for j, f in self.factors.items() if f == factor]


def pearson_matrix(matrix: CitationMatrix, orientation: ProfileOrientation | str) -> CorrelationMatrix:
    """Pearson correlation between every pair of journal profiles."""
    X = np.asarray(matrix.profiles(orientation), dtype=float)
    centered = X - X.mean(axis=1, keepdims=True)
    norms = np.sqrt((centered**2).sum(axis=1))
    for j, nrm in zip(matrix.journals, norms):
        if nrm == 0.0:
            raise UndefinedCorrelationError(j)
    Z = centered / norms[:, None]
    R = Z @ Z.T
    R = np.clip((R + R.T) / 2.0, -1.0, 1.0)
    np.fill_diagonal(R, 1.0)
    return CorrelationMatrix(matrix.journals, R)


def _orient_columns(L: np.ndarray) -> np.ndarray:
    """+1/-1 per column so that each column's largest-magnitude entry is positive."""
    idx = np.argmax(np.abs(L), axis=0)
    signs = np.sign(L[idx, np.arange(L.shape[1])])
    signs[signs == 0] = 1.0
    return signs


def kaiser_k(eigenvalues: Sequence[float]) -> int:
    """Number of eigenvalues greater than one (at least one)."""
    return max(1, int(np.sum(np.asarray(eigenvalues) > 1.0)))


def principal_components(corr: CorrelationMatrix, k: int | str = DEFAULT_N_FACTORS) -> FactorModel:
    """Principal-component loadings of a correlation matrix.

    ``k="auto"`` keeps the components with eigenvalue greater than one.
    Column ``f`` of the loadings is ``eigenvector_f * sqrt(eigenvalue_f)``;
    negative eigenvalues (round-off on near-singular input) are clamped to
    zero with a warning.
    """
    C = np.asarray(corr.cells, dtype=float)
    p = C.shape[0]
    if not np.allclose(C, C.T, atol=1e-12, rtol=0):
        raise ValueError("correlation matrix must be symmetric")
    try:
        w, V = np.linalg.eigh((C + C.T) / 2.0)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigendecomposition failed: {exc}") from exc
    order = np.argsort(-w, kind="stable")
    w, V = w[order], V[:, order]
    if k == "auto":
        k = kaiser_k(w)
    k = int(k)
    if not 1 <= k <= p:
        raise ValueError(f"k must be between 1 and {p}, got {k}")
    w, V = w[:k], V[:, :k]
    if (w < 0).any():
        warnings.warn(f"clamping {int((w < 0).sum())} negative eigenvalue(s) to zero", RuntimeWarning, stacklevel=2)
        w = np.clip(w, 0.0, None)
    L = V * np.sqrt(w)
    L = L * _orient_columns(L)
    return FactorModel(corr.journals, L, w)


def varimax_criterion(L: np.ndarray) -> float:
    """Sum over factors of the variance of the squared loadings."""
    sq = np.asarray(L, dtype=float) ** 2
    return float(np.sum(np.mean(sq**2, axis=0) - np.mean(sq, axis=0) ** 2))


def _pair_angle(x: np.ndarray, y: np.ndarray) -> float:
    # closed-form optimum of the criterion over a planar rotation of (x, y)
    p = x.shape[0]
    u = x * x - y * y
    v = 2.0 * x * y
    A, B = u.sum(), v.sum()
    num = 2.0 * np.dot(u, v) - 2.0 * A * B / p
    den = np.dot(u, u) - np.dot(v, v) - (A * A - B * B) / p
    return float(np.arctan2(num, den) / 4.0)


def varimax(
    model: FactorModel,
    kaiser_normalize: bool = True,
    tolerance: float = DEFAULT_TOLERANCE,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
) -> FactorModel:
    """Orthogonal varimax rotation by sweeps of pairwise planar rotations.

    Each planar rotation is the exact optimum for its factor pair, so the
    criterion cannot decrease between sweeps; a sweep that loses to
    round-off is discarded as converged, and any larger decrease raises
    :class:`NumericalError`. Iteration stops once a sweep gains less
    than ``tolerance`` or after ``max_sweeps`` sweeps.

    Rotated factors are re-ordered by descending sum of squared loadings and
    sign-oriented like the extraction step.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    L0 = np.asarray(model.loadings, dtype=float)
    p, k = L0.shape
    if k < 2:
        return model

    if kaiser_normalize:
        h = np.sqrt((L0**2).sum(axis=1))
        h[h == 0] = 1.0
    else:
        h = np.ones(p)
    B = L0 / h[:, None]
    R = np.eye(k)

    history = [varimax_criterion(B)]
    sweeps = 0
    while sweeps < max_sweeps:
        sweeps += 1
        saved_B, saved_R = B.copy(), R.copy()
        for a in range(k - 1):
            for b in range(a + 1, k):
                phi = _pair_angle(B[:, a], B[:, b])
                if phi == 0.0:
                    continue
                c, s = np.cos(phi), np.sin(phi)
                G = np.array([[c, -s], [s, c]])
                B[:, [a, b]] = B[:, [a, b]] @ G
                R[:, [a, b]] = R[:, [a, b]] @ G
        crit = varimax_criterion(B)
        gain = crit - history[-1]
        if gain < -_MONOTONE_SLACK * max(1.0, abs(crit)):
            raise NumericalError(f"varimax criterion decreased by {-gain:.3e} in sweep {sweeps}")
        if gain < 0:
            # round-off only: already at the optimum, keep the previous sweep
            B, R = saved_B, saved_R
            break
        history.append(crit)
        logger.debug("varimax sweep %d: criterion %.12g (gain %.3e)", sweeps, crit, gain)
        if gain < tolerance:
            break

    L = B * h[:, None]
    ss = (L**2).sum(axis=0)
    order = np.argsort(-ss, kind="stable")
    L, R = L[:, order], R[:, order]
    signs = _orient_columns(L)
    L, R = L * signs, R * signs
    R = np.asarray(model.rotation) @ R
    return FactorModel(
        model.journals,
        L,
        (L**2).sum(axis=0),
        rotation=R,
        rotated=True,
        sweeps=sweeps,
        criterion_history=history,
    )


def classify_by_max_loading(model: FactorModel, signed: bool = False) -> FactorAssignment:
    """Assign every journal to the factor with its greatest loading.

    By default the greatest absolute loading wins; ``signed=True`` compares
    raw values instead. Ties go to the lower-numbered factor.
    """
    L = np.asarray(model.loadings)
    if L.size == 0:
        raise ValueError("model has no loadings")
    scores = L if signed else np.abs(L)
    best = np.argmax(scores, axis=1)
    factors = {j: int(f) + 1 for j, f in zip(model.journals, best)}
    values = {j: float(L[i, f]) for i, (j, f) in enumerate(zip(model.journals, best))}
    return FactorAssignment(factors, values, signed)


def format_factor_report(model: FactorModel, assignment: FactorAssignment) -> str:
    """Per-journal rows (id, factor, loadings, communality), then a footer block.

    The footer follows one blank line and carries the eigenvalue (sum of
    squared loadings) and variance proportion of each factor.
    """
    k = model.k
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["journal", "factor", *(f"loading_{f + 1}" for f in range(k)), "communality"])
    for i, j in enumerate(model.journals):
        writer.writerow([j, assignment[j], *map(repr, model.loadings[i].tolist()), repr(float(model.communalities[i]))])
    buf.write("\n")
    writer.writerow(["statistic", *(f"factor_{f + 1}" for f in range(k))])
    writer.writerow(["eigenvalue", *map(repr, model.eigenvalues.tolist())])
    writer.writerow(["variance_proportion", *map(repr, model.variance_proportions.tolist())])
    return buf.getvalue()


def parse_factor_report(source: TextIO, name: str = "<factors>") -> tuple[FactorModel, FactorAssignment]:
    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty factor report", line=1, source=name) from None
    if header[:2] != ["journal", "factor"] or header[-1] != "communality":
        raise ParseError("unexpected factor report header", line=1, source=name)
    k = len(header) - 3
    journals, factors, rows = [], {}, []
    footer = {}
    in_footer = False
    for row in reader:
        line = reader.line_num
        if not row:
            in_footer = True
            continue
        try:
            if in_footer:
                if row[0] == "statistic":
                    continue
                footer[row[0]] = [float(v) for v in row[1:]]
                continue
            if len(row) != k + 3:
                raise ParseError(f"expected {k + 3} fields, got {len(row)}", line=line, source=name)
            journals.append(row[0])
            factors[row[0]] = int(row[1])
            rows.append([float(v) for v in row[2 : 2 + k]])
        except ValueError as exc:
            raise ParseError(str(exc), line=line, source=name) from None
    if "eigenvalue" not in footer or not journals:
        raise ParseError("factor report lacks rows or eigenvalue footer", source=name)
    L = np.array(rows, dtype=float)
    model = FactorModel(tuple(journals), L, np.array(footer["eigenvalue"]))
    values = {j: float(L[i, factors[j] - 1]) for i, j in enumerate(journals)}
    return model, FactorAssignment(factors, values)
