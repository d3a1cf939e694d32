import numpy as np
import pytest

# Project
from core.models import Relation, NormOrder, FactorMethod
from core.exceptions import MethodMismatch, DimensionMismatch
from core.factorize import decompose
from core.accounting import step_checks, norm_accounting

DIAG = np.diag([3.0, 1.0])


def test_svd_diagonal_identity():
    accounting = norm_accounting(DIAG, decompose(DIAG, FactorMethod.SVD_L2, 2))
    assert accounting.order == NormOrder.L2
    assert accounting.full_rank
    assert (accounting.total_lhs, accounting.total_rhs) == pytest.approx((10, 10))
    assert accounting.relation == Relation.EQUALITY
    np.testing.assert_allclose(accounting.column_lhs, accounting.column_rhs)
    np.testing.assert_allclose(accounting.row_lhs, accounting.row_rhs)


def test_taxicab_diagonal_boundary_case():
    accounting = norm_accounting(DIAG, decompose(DIAG, FactorMethod.TAXICAB_SVD, 2))
    assert accounting.relation == Relation.EQUALITY
    assert accounting.total_rhs == pytest.approx(4)
    assert accounting.margin == pytest.approx(0, abs=1e-12)


def test_svd_random_identities(rng):
    for _ in range(50):
        X = rng.normal(size=(5, 4))
        accounting = norm_accounting(X, decompose(X, FactorMethod.SVD_L2, 4))
        assert accounting.full_rank
        assert accounting.relation == Relation.EQUALITY
        assert accounting.total_lhs == pytest.approx(accounting.total_rhs, rel=1e-9)
        np.testing.assert_allclose(accounting.column_lhs, accounting.column_rhs, rtol=1e-8)
        np.testing.assert_allclose(accounting.row_lhs, accounting.row_rhs, rtol=1e-8)


def test_taxicab_random_inequalities(rng):
    for _ in range(50):
        X = rng.uniform(0.1, 2.0, size=(5, 4)) * rng.choice((-1.0, 1.0), size=(5, 4))
        accounting = norm_accounting(X, decompose(X, FactorMethod.TAXICAB_SVD, 4))
        assert accounting.relation == Relation.STRICT_INEQUALITY
        assert accounting.margin > 0
        assert np.all(accounting.column_lhs <= accounting.column_rhs + 1e-9)
        assert np.all(accounting.row_lhs <= accounting.row_rhs + 1e-9)


def test_partial_run_counts_the_residual(rng):
    X = rng.normal(size=(5, 4))
    d = decompose(X, FactorMethod.SVD_L2, 2)
    accounting = norm_accounting(X, d)
    assert not accounting.full_rank
    assert accounting.total_lhs == pytest.approx(sum(delta ** 2 for delta in d.deltas) + np.square(d.residual).sum())
    assert accounting.relation == Relation.EQUALITY


@pytest.mark.parametrize("method", list(FactorMethod))
def test_step_checks_hold(rng, method):
    X = rng.normal(size=(4, 4))
    d = decompose(X, method, 4)
    checks = step_checks(X, d)
    assert len(checks) == d.rank
    assert all(check.holds for check in checks)
    if method == FactorMethod.SVD_L2:
        assert all(check.equality for check in checks)


def test_l1min_is_rejected(rng):
    X = rng.normal(size=(4, 3))
    with pytest.raises(MethodMismatch):
        norm_accounting(X, decompose(X, FactorMethod.L1MIN_SVD, 2))


def test_foreign_decomposition_is_rejected(rng):
    d = decompose(rng.normal(size=(4, 3)), FactorMethod.SVD_L2, 2)
    with pytest.raises(DimensionMismatch):
        norm_accounting(rng.normal(size=(3, 4)), d)
