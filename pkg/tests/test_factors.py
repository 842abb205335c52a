import io
import math
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from citecology.exceptions import UndefinedCorrelationError
from citecology.factors import (
    CorrelationMatrix,
    FactorModel,
    classify_by_max_loading,
    format_factor_report,
    parse_factor_report,
    pearson_matrix,
    principal_components,
    varimax,
    varimax_criterion,
)
from citecology.matrixops import CitationMatrix

import oracles


def row_matrix(*profiles):
    """Matrix whose rows are the given profiles (padded to square with zeros)."""
    n = max(len(profiles), len(profiles[0]))
    cells = np.zeros((n, n), dtype=int)
    for i, p in enumerate(profiles):
        cells[i, : len(p)] = p
    return CitationMatrix(tuple(f"J{i}" for i in range(n)), cells)


def random_corr(rng, p):
    X = rng.normal(size=(p + 5, p)) @ rng.normal(size=(p, p))
    return CorrelationMatrix(tuple(map(str, range(p))), np.corrcoef(X, rowvar=False))


def model_of(L):
    L = np.asarray(L, dtype=float)
    return FactorModel(tuple(f"J{i}" for i in range(len(L))), L, (L**2).sum(axis=0))


# -- Pearson ----------------------------------------------------------------------


def test_identical_profiles_correlate_perfectly():
    m = row_matrix((1, 2, 3), (1, 2, 3), (3, 1, 2))
    assert pearson_matrix(m, "row").cells[0, 1] == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize(
    "x, y, fillers",
    [
        ((1, 2, 3), (3, 2, 1), [(1, 0, 0)]),
        ((1, 0, 1, 0), (0, 1, 0, 1), [(1, 0, 0, 0), (0, 0, 1, 1)]),
    ],
)
def test_anticorrelated_profiles(x, y, fillers):
    expected = oracles.pearson_r(x, y)
    assert expected == pytest.approx(-1.0, abs=1e-12)
    m = row_matrix(x, y, *fillers)
    assert pearson_matrix(m, "row").cells[0, 1] == pytest.approx(expected, abs=1e-12)


def test_zero_variance_profile_names_journal():
    m = CitationMatrix(("A", "B", "C"), np.array([[2, 2, 2], [1, 0, 3], [0, 1, 1]]))
    with pytest.raises(UndefinedCorrelationError, match="'A'"):
        pearson_matrix(m, "row")


def test_pearson_matches_oracle():
    rng = np.random.default_rng(5)
    cells = rng.integers(0, 6, size=(7, 7))
    cells[np.arange(7), np.arange(7)] += 1
    m = CitationMatrix(tuple("ABCDEFG"), cells)
    R = pearson_matrix(m, "column").cells
    cols = cells.T.tolist()
    for a in range(7):
        for b in range(7):
            assert R[a, b] == pytest.approx(oracles.pearson_r(cols[a], cols[b]), abs=1e-12)


@given(
    arrays(np.int64, (5, 5), elements=st.integers(0, 9)),
    st.integers(0, 4),
    st.integers(1, 50),
    st.integers(0, 50),
)
@settings(max_examples=100, deadline=None)
def test_pearson_affine_invariance(cells, row, scale, shift):
    if any(np.ptp(r) == 0 for r in cells):
        return
    base = pearson_matrix(CitationMatrix(tuple("ABCDE"), cells), "row").cells
    moved = cells.copy()
    moved[row] = moved[row] * scale + shift
    after = pearson_matrix(CitationMatrix(tuple("ABCDE"), moved), "row").cells
    assert np.abs(after - base).max() < 1e-9


# -- extraction -------------------------------------------------------------------


def test_identity_extraction():
    m = principal_components(CorrelationMatrix(("a", "b"), np.eye(2)), 2)
    assert m.eigenvalues.tolist() == pytest.approx([1.0, 1.0], abs=1e-12)
    assert m.variance_proportions.tolist() == pytest.approx([0.5, 0.5], abs=1e-12)


def test_equicorrelation_2x2():
    corr = [[1.0, 0.6], [0.6, 1.0]]
    expected = oracles.eigenvalues_2x2(corr)
    m = principal_components(CorrelationMatrix(("a", "b"), corr), 2)
    assert m.eigenvalues.tolist() == pytest.approx(list(expected), abs=1e-10)
    assert m.eigenvalues.tolist() == pytest.approx([1.6, 0.4], abs=1e-10)
    assert m.variance_proportions.tolist() == pytest.approx([0.8, 0.2], abs=1e-10)


@pytest.mark.parametrize("p", [2, 3, 7, 20])
def test_full_rank_reconstruction(p):
    corr = random_corr(np.random.default_rng(p), p)
    m = principal_components(corr, p)
    assert np.abs(m.loadings @ m.loadings.T - corr.cells).max() < 1e-8
    assert sum(m.variance_proportions) == pytest.approx(1.0, abs=1e-8)


def test_sign_convention_and_order():
    corr = random_corr(np.random.default_rng(1), 9)
    m = principal_components(corr, 4)
    assert list(m.eigenvalues) == sorted(m.eigenvalues, reverse=True)
    for f in range(4):
        col = m.loadings[:, f]
        assert col[np.argmax(np.abs(col))] > 0


def test_kaiser_auto_k():
    corr = random_corr(np.random.default_rng(2), 10)
    w = np.linalg.eigvalsh(corr.cells)
    assert principal_components(corr, "auto").k == int((w > 1).sum())


def test_negative_eigenvalues_clamped():
    # indefinite "correlation" matrix: its smallest eigenvalue is negative
    corr = np.array([[1, 0.9, -0.9], [0.9, 1, 0.9], [-0.9, 0.9, 1]])
    with pytest.warns(RuntimeWarning, match="clamping"):
        m = principal_components(CorrelationMatrix(("a", "b", "c"), corr), 3)
    assert (m.eigenvalues >= 0).all()


def test_k_out_of_range():
    with pytest.raises(ValueError):
        principal_components(CorrelationMatrix(("a", "b"), np.eye(2)), 3)


# -- varimax ----------------------------------------------------------------------


def test_simple_structure_is_fixed_point():
    L = np.array([[0.9, 0], [0.8, 0], [0, 0.7], [0, 0.6], [0, 0.5]])
    out = varimax(model_of(L))
    assert np.abs(np.abs(out.loadings) - np.abs(L)).max() < 1e-12


def test_single_factor_unchanged():
    m = model_of([[0.3], [0.9], [0.5]])
    assert varimax(m) is m


@pytest.mark.parametrize("kaiser", [True, False])
def test_contrived_2x2_against_grid_search(kaiser):
    L = [[0.707, 0.707], [0.707, -0.707]]
    theta, best, _ = oracles.grid_search_varimax_2d(L, step=0.001, kaiser=kaiser)
    out = varimax(model_of(L), kaiser_normalize=kaiser)

    h = np.sqrt((np.asarray(L) ** 2).sum(axis=1))
    scaled = out.loadings / h[:, None] if kaiser else out.loadings
    ours = oracles.varimax_value(scaled.tolist())
    assert ours >= best - 1e-12
    assert abs(ours - best) < 1e-4
    # simple structure: one loading per row, carrying the row's full norm
    A = np.abs(out.loadings)
    assert np.sort(A, axis=1)[:, 0].max() < 1e-4
    assert np.abs(A.max(axis=1) - h).max() < 1e-4
    angle = math.atan2(out.rotation[1, 0], out.rotation[0, 0]) % (math.pi / 2)
    assert min(abs(angle - theta), math.pi / 2 - abs(angle - theta)) <= 0.001


def test_exact_half_root_two_rotates_to_identity():
    r = 1 / math.sqrt(2)
    A = np.abs(varimax(model_of([[r, r], [r, -r]])).loadings)
    assert min(np.abs(A - np.eye(2)).max(), np.abs(A - np.eye(2)[::-1]).max()) < 1e-4


loadings = st.tuples(st.integers(2, 30), st.integers(2, 6), st.integers(0, 2**32 - 1)).map(
    lambda t: np.random.default_rng(t[2]).uniform(-1, 1, size=(t[0], t[1])) / np.sqrt(t[1])
)


@given(loadings, st.booleans())
@settings(max_examples=100, deadline=None)
def test_varimax_invariants(L, kaiser):
    before = model_of(L)
    after = varimax(before, kaiser_normalize=kaiser)
    assert np.abs(after.communalities - before.communalities).max() < 1e-9
    assert np.all(np.diff(after.criterion_history) >= -1e-12)
    R = after.rotation
    assert np.abs(R.T @ R - np.eye(L.shape[1])).max() < 1e-9
    assert np.abs(L @ R - after.loadings).max() < 1e-9
    assert list(after.eigenvalues) == sorted(after.eigenvalues, reverse=True)
    assert sum(after.variance_proportions) <= 1 + 1e-9 or (L**2).sum(axis=1).max() > 1


def test_criterion_definition():
    L = np.random.default_rng(3).normal(size=(6, 3))
    assert varimax_criterion(L) == pytest.approx(oracles.varimax_value(L.tolist()), abs=1e-12)


def test_sweep_cap():
    L = np.random.default_rng(4).normal(size=(12, 4))
    out = varimax(model_of(L), tolerance=1e-300, max_sweeps=2)
    assert out.sweeps == 2


# -- classification ---------------------------------------------------------------


@pytest.mark.parametrize(
    "row, signed, factor",
    [
        ((0.9, 0.1), False, 1),
        ((0.5, 0.5), False, 1),
        ((-0.8, 0.3), False, 1),
        ((-0.8, 0.3), True, 2),
    ],
)
def test_classification_rules(row, signed, factor):
    a = classify_by_max_loading(model_of([row]), signed=signed)
    assert a["J0"] == factor


@given(loadings, st.integers(0, 29), st.floats(0.01, 100))
@settings(max_examples=100, deadline=None)
def test_classification_scale_invariant(L, row, scale):
    row %= len(L)
    a = classify_by_max_loading(model_of(L))
    L2 = L.copy()
    L2[row] *= scale
    b = classify_by_max_loading(model_of(L2))
    assert a.factors == b.factors


def test_factor_report_round_trip():
    L = np.random.default_rng(8).normal(size=(5, 3)) / 2
    m = model_of(L)
    a = classify_by_max_loading(m)
    text = format_factor_report(m, a)
    m2, a2 = parse_factor_report(io.StringIO(text))
    assert np.array_equal(m2.loadings, m.loadings)
    assert np.array_equal(m2.eigenvalues, m.eigenvalues)
    assert a2.factors == a.factors
    assert format_factor_report(m2, a2) == text
