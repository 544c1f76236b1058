import numpy as np
import pytest

from rgspectra import linalg
from rgspectra.models import complete_graph


def random_symmetric(rs, n, scale=1.0):
    m = rs.standard_normal((n, n)) * scale
    return (m + m.T) / 2


def test_zero_matrix():
    summ = linalg.eigen_symmetric(np.zeros((4, 4)))
    assert (summ.eigenvalues == 0).all()
    assert summ.spectral_norm == 0.0
    assert linalg.spectral_norm(np.zeros((4, 4))) == 0.0


def test_diagonal_case():
    summ = linalg.eigen_symmetric(np.diag([1.0, -3.0, 2.0]))
    assert np.allclose(summ.eigenvalues, [-3.0, 1.0, 2.0])
    assert summ.spectral_norm == 3.0


def test_k4_adjacency_spectrum():
    # J - I on 4 vertices: eigenvalues -1 (x3) and 3, by the rank-1 structure
    summ = linalg.eigen_symmetric(complete_graph(4).astype(float))
    assert np.allclose(summ.eigenvalues, [-1.0, -1.0, -1.0, 3.0], atol=1e-12)
    assert abs(summ.spectral_norm - 3.0) < 1e-12


def test_all_ones_norm():
    n = 7
    assert abs(linalg.spectral_norm(np.ones((n, n))) - n) < 1e-12


def test_rejects_nonfinite_and_asymmetric():
    with pytest.raises(ValueError):
        linalg.eigen_symmetric(np.array([[0.0, np.inf], [np.inf, 0.0]]))
    with pytest.raises(ValueError):
        linalg.spectral_norm(np.array([[0.0, 1.0], [0.5, 0.0]]))


def test_symmetrize():
    m = np.array([[0.0, 1.0], [0.5, 0.0]])
    s = linalg.symmetrize(m)
    assert np.array_equal(s, s.T)


def test_weyl_identical_and_shift():
    rs = np.random.default_rng(1)
    m = random_symmetric(rs, 6)
    assert linalg.weyl_deviation(m, m) == 0.0
    c = 0.75
    shifted = m + c * np.eye(6)
    assert abs(linalg.weyl_deviation(m, shifted) - c) < 1e-12


def test_weyl_dimension_mismatch():
    with pytest.raises(ValueError):
        linalg.weyl_deviation(np.zeros((2, 2)), np.zeros((3, 3)))


def test_weyl_inequality_bulk():
    # deviation of sorted spectra never exceeds the norm of the difference
    rs = np.random.default_rng(2)
    for _ in range(1000):
        n = int(rs.integers(2, 21))
        a = random_symmetric(rs, n)
        b = random_symmetric(rs, n)
        assert linalg.weyl_deviation(a, b) <= linalg.spectral_norm(a - b) + 1e-8


def test_orthogonality_and_trace_consistency():
    rs = np.random.default_rng(3)
    for _ in range(50):
        n = int(rs.integers(2, 40))
        m = random_symmetric(rs, n, scale=rs.uniform(0.1, 10))
        summ = linalg.eigen_symmetric(m)
        v = summ.eigenvectors
        assert np.abs(v.T @ v - np.eye(n)).max() <= 1e-8
        assert abs(summ.eigenvalues.sum() - np.trace(m)) <= 1e-8 * n * np.abs(m).max()
        assert (np.diff(summ.eigenvalues) >= 0).all()
        assert summ.residual <= linalg.RESIDUAL_TOL * n * max(1.0, summ.spectral_norm)


def _power_iteration_norm(m, start, iters=100000, tol=1e-12):
    # independent oracle: power iteration on m @ m converges to ||m||^2
    mm = m @ m
    v = start / np.linalg.norm(start)
    lam = 0.0
    for _ in range(iters):
        w = mm @ v
        nxt = float(np.linalg.norm(w))
        if nxt == 0.0:
            return 0.0
        v = w / nxt
        if abs(nxt - lam) <= tol * max(nxt, 1.0):
            lam = nxt
            break
        lam = nxt
    return lam**0.5


def test_spectral_norm_vs_power_iteration():
    rs = np.random.default_rng(4)
    for _ in range(100):
        n = int(rs.integers(2, 16))
        m = random_symmetric(rs, n)
        oracle = _power_iteration_norm(m, rs.standard_normal(n))
        assert abs(linalg.spectral_norm(m) - oracle) <= 1e-6 * max(oracle, 1e-30)


def test_sign_convention_deterministic():
    rs = np.random.default_rng(5)
    m = random_symmetric(rs, 8)
    a = linalg.eigen_symmetric(m).eigenvectors
    b = linalg.eigen_symmetric(m.copy()).eigenvectors
    assert np.array_equal(a, b)
    # first significant component of every column is positive
    for col in range(8):
        v = a[:, col]
        nz = np.nonzero(np.abs(v) > 1e-12 * np.abs(v).max())[0]
        assert v[nz[0]] > 0
