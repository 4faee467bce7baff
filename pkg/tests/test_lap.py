import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment

from lap import (
    AUCTION,
    HUNGARIAN,
    CertificateError,
    EpsSchedule,
    auction_batch,
    check_certificate,
    hungarian_batch,
    lap_auction,
    lap_hungarian,
    lap_solve_batch,
    oracle_lap,
    repair_duals,
)


@pytest.mark.parametrize("solve", [lap_hungarian, lap_auction])
def test_zero_matrix(solve):
    M = np.zeros((3, 3))
    cert = solve(M)
    assert cert.value == 0
    assert np.array_equal(cert.R, M)
    check_certificate(M, cert)


@pytest.mark.parametrize("solve", [lap_hungarian, lap_auction])
def test_two_by_two_tie(solve):
    cert = solve([[1, 2], [3, 4]])
    assert cert.value == 5
    check_certificate([[1, 2], [3, 4]], cert)


@pytest.mark.parametrize("solve", [lap_hungarian, lap_auction])
def test_zero_cost_perfect_matching(solve):
    perm = np.array([2, 0, 3, 1])
    M = np.ones((4, 4))
    M[np.arange(4), perm] = 0
    cert = solve(M)
    assert cert.value == 0
    assert np.array_equal(cert.assign, perm)


def test_one_by_one():
    assert oracle_lap([[5]]) == 5
    cert = lap_hungarian([[5]])
    assert cert.value == 5
    assert cert.R[0, 0] == 0


def test_oracle_small_cases():
    assert oracle_lap([[1, 2], [3, 4]]) == 5
    M = np.outer(np.arange(3), np.arange(3))
    # anti-diagonal 0*2 + 1*1 + 2*0
    assert oracle_lap(M) == 1


def test_oracle_refuses_large():
    with pytest.raises(ValueError):
        oracle_lap(np.zeros((11, 11)))


@pytest.mark.parametrize("seed", range(100))
def test_hungarian_matches_oracle_7x7(seed):
    M = np.random.default_rng(seed).integers(0, 100, size=(7, 7)).astype(float)
    cert = lap_hungarian(M)
    assert cert.value == oracle_lap(M)
    check_certificate(M, cert)


@pytest.mark.parametrize("m", range(1, 21))
def test_batched_solvers_agree(m):
    """50 matrices per size: Hungarian, auction and scipy agree exactly."""
    rng = np.random.default_rng(1000 + m)
    M = rng.integers(0, 10 ** 6 + 1, size=(50, m, m)).astype(float)
    hung = hungarian_batch(M)
    auct = auction_batch(M)
    for k in range(50):
        rows, cols = linear_sum_assignment(M[k])
        expected = M[k][rows, cols].sum()
        assert hung.value[k] == expected
        assert auct.value[k] == expected
        check_certificate(M[k], hung[k])
        check_certificate(M[k], auct[k])
        if m <= 8:
            assert hung.value[k] == oracle_lap(M[k])


def test_residuals_are_nonnegative_and_zero_on_assignment():
    M = np.random.default_rng(7).random((20, 6, 6)) * 10
    res = lap_solve_batch(M, HUNGARIAN)
    assert (res.R >= 0).all()
    assert (res.R[np.arange(20)[:, None], np.arange(6)[None, :], res.assign] == 0).all()
    np.testing.assert_allclose(res.value, M[np.arange(20)[:, None], np.arange(6)[None, :], res.assign].sum(1))


def test_auction_handles_fractional_costs():
    M = np.random.default_rng(3).random((30, 5, 5))
    auct = lap_solve_batch(M, AUCTION)
    hung = lap_solve_batch(M, HUNGARIAN)
    np.testing.assert_allclose(auct.value, hung.value, rtol=0, atol=1e-12)


def test_auction_with_custom_schedule():
    M = np.random.default_rng(4).integers(0, 50, size=(6, 6)).astype(float)
    cert = lap_auction(M, EpsSchedule(start_div=1.0, factor=2.0))
    assert cert.value == oracle_lap(M)


def test_repair_duals_flags_suboptimal_assignment():
    M = np.array([[[0.0, 10.0], [10.0, 0.0]]])
    _, _, ok = repair_duals(M, np.array([[1, 0]]))
    assert not ok[0]
    _, _, ok = repair_duals(M, np.array([[0, 1]]))
    assert ok[0]


def test_invalid_costs():
    with pytest.raises(ValueError, match="negative"):
        lap_hungarian([[1, -1], [0, 0]])
    with pytest.raises(ValueError, match="non-finite"):
        lap_hungarian([[1, np.inf], [0, 0]])
    with pytest.raises(ValueError, match="square"):
        lap_solve_batch(np.zeros((2, 2, 3)))
    with pytest.raises(ValueError, match="unknown LAP method"):
        lap_solve_batch(np.zeros((1, 2, 2)), "simplex")


def test_check_certificate_rejects_tampering():
    M = np.array([[4.0, 1.0], [2.0, 3.0]])
    cert = lap_hungarian(M)
    cert.R[0, 0] = -1.0
    with pytest.raises(CertificateError):
        check_certificate(M, cert)


@pytest.mark.parametrize("seed", range(20))
def test_residuals_solve_to_zero(seed):
    rng = np.random.default_rng(500 + seed)
    m = int(rng.integers(1, 12))
    M = rng.integers(0, 1000, size=(m, m)).astype(float)
    for solve in (lap_hungarian, lap_auction):
        cert = solve(M)
        assert lap_hungarian(cert.R).value == pytest.approx(0, abs=1e-9)
        assert lap_auction(cert.R).value == pytest.approx(0, abs=1e-9)
