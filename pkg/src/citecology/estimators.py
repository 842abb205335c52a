"""scikit-learn compatible wrappers around the analysis stages.

Each estimator takes plain arrays, so the stages slot into sklearn
pipelines, ``clone`` and ``get_params``/``set_params``. Square citation
matrices are passed with cell ``[i, j]`` = citations from journal ``i`` to
journal ``j``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .centrality import betweenness
from .factors import (
    DEFAULT_MAX_SWEEPS,
    DEFAULT_N_FACTORS,
    DEFAULT_TOLERANCE,
    FactorModel,
    classify_by_max_loading,
    pearson_matrix,
    principal_components,
    varimax,
)
from .matrixops import CitationMatrix, ProfileOrientation
from .similarity import DEFAULT_THRESHOLD, SimilarityMatrix, build_graph, cosine_matrix


def check_citation_matrix(X, journals=None) -> CitationMatrix:
    """Validate a square, nonnegative, integer-valued count matrix."""
    if isinstance(X, CitationMatrix):
        return X
    X = check_array(X, dtype=None, ensure_min_samples=1, ensure_min_features=1)
    if X.shape[0] != X.shape[1]:
        raise ValueError(f"citation matrix must be square, got shape {X.shape}")
    if (X < 0).any():
        raise ValueError("citation counts must be nonnegative")
    if not np.array_equal(X, np.round(X)):
        raise ValueError("citation counts must be whole numbers")
    if journals is None:
        journals = tuple(str(i) for i in range(X.shape[0]))
    elif len(journals) != X.shape[0]:
        raise ValueError(f"got {len(journals)} journal ids for a {X.shape[0]}x{X.shape[0]} matrix")
    return CitationMatrix(tuple(journals), X.astype(np.int64))


def check_loadings(L) -> np.ndarray:
    return check_array(L, dtype=np.float64, ensure_min_features=1)


class CitationFactorAnalysis(ClusterMixin, BaseEstimator):
    """Principal components of profile correlations, varimax-rotated.

    ``fit`` stores the loadings and assigns each journal to its
    highest-loading factor; ``labels_`` holds 1-based factor numbers.

    Parameters
    ----------
    n_factors : int or "auto", default=5
        Number of factors; ``"auto"`` keeps eigenvalues greater than one.
    orientation : {"column", "row"}, default="column"
        Profiles are the citations each journal receives (column) or gives (row).
    rotate : bool, default=True
    kaiser_normalize : bool, default=True
    tol : float, default=1e-6
    max_sweeps : int, default=100
    signed : bool, default=False
        Classify by signed instead of absolute loading.
    """

    def __init__(
        self,
        n_factors=DEFAULT_N_FACTORS,
        orientation="column",
        rotate=True,
        kaiser_normalize=True,
        tol=DEFAULT_TOLERANCE,
        max_sweeps=DEFAULT_MAX_SWEEPS,
        signed=False,
    ):
        self.n_factors = n_factors
        self.orientation = orientation
        self.rotate = rotate
        self.kaiser_normalize = kaiser_normalize
        self.tol = tol
        self.max_sweeps = max_sweeps
        self.signed = signed

    def fit(self, X, y=None, journals=None):
        matrix = check_citation_matrix(X, journals)
        orientation = ProfileOrientation.parse(self.orientation)
        corr = pearson_matrix(matrix, orientation)
        unrotated = principal_components(corr, self.n_factors)
        model = varimax(unrotated, self.kaiser_normalize, self.tol, self.max_sweeps) if self.rotate else unrotated
        assignment = classify_by_max_loading(model, self.signed)

        self.journals_ = matrix.journals
        self.correlation_ = np.array(corr.cells)
        self.unrotated_loadings_ = np.array(unrotated.loadings)
        self.model_ = model
        self.assignment_ = assignment
        self.loadings_ = np.array(model.loadings)
        self.rotation_ = np.array(model.rotation)
        self.eigenvalues_ = np.array(model.eigenvalues)
        self.variance_proportions_ = np.array(model.variance_proportions)
        self.communalities_ = np.array(model.communalities)
        self.n_factors_ = model.k
        self.labels_ = np.array([assignment[j] for j in matrix.journals])
        return self


class Varimax(TransformerMixin, BaseEstimator):
    """Learn a varimax rotation of a loading matrix; ``transform`` applies it."""

    def __init__(self, kaiser_normalize=True, tol=DEFAULT_TOLERANCE, max_sweeps=DEFAULT_MAX_SWEEPS):
        self.kaiser_normalize = kaiser_normalize
        self.tol = tol
        self.max_sweeps = max_sweeps

    def fit(self, X, y=None):
        L = check_loadings(X)
        ids = tuple(str(i) for i in range(L.shape[0]))
        model = varimax(FactorModel(ids, L, (L**2).sum(axis=0)), self.kaiser_normalize, self.tol, self.max_sweeps)
        self.rotation_ = np.array(model.rotation)
        self.criterion_history_ = np.array(model.criterion_history)
        self.n_sweeps_ = model.sweeps
        self.n_features_in_ = L.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "rotation_")
        L = check_loadings(X)
        if L.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} factors, got {L.shape[1]}")
        return L @ self.rotation_


class CosineSimilarity(TransformerMixin, BaseEstimator):
    """Map a square citation matrix to the cosine similarity of its profiles.

    Stateless: ``fit`` only validates its input.
    """

    def __init__(self, orientation="column"):
        self.orientation = orientation

    def fit(self, X, y=None):
        check_citation_matrix(X)
        ProfileOrientation.parse(self.orientation)
        return self

    def transform(self, X):
        matrix = check_citation_matrix(X)
        return np.array(cosine_matrix(matrix, self.orientation).cells)


class BetweennessCentrality(BaseEstimator):
    """Threshold a similarity matrix and score nodes by betweenness.

    ``betweenness_`` is normalized and in input node order.
    """

    def __init__(self, threshold=DEFAULT_THRESHOLD):
        self.threshold = threshold

    def fit(self, X, y=None, journals=None):
        S = check_array(X, dtype=np.float64)
        if S.shape[0] != S.shape[1]:
            raise ValueError(f"similarity matrix must be square, got shape {S.shape}")
        ids = tuple(journals) if journals is not None else tuple(str(i) for i in range(S.shape[0]))
        graph = build_graph(SimilarityMatrix(ids, S), self.threshold)
        report = betweenness(graph)
        self.graph_ = graph
        self.report_ = report
        self.betweenness_ = np.array([report[j].normalized for j in ids])
        self.raw_betweenness_ = np.array([report[j].raw for j in ids])
        self.n_components_ = report.components
        return self

    def fit_transform(self, X, y=None, journals=None):
        return self.fit(X, y, journals).betweenness_
