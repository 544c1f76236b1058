"""Dense symmetric eigendecomposition and eigenvalue-deviation utilities.

Thin, contract-checked layer over LAPACK's symmetric eigensolver (via
``numpy.linalg``).  The contract, not the algorithm, is what downstream code
relies on: eigenvalues sorted non-decreasing, orthonormal eigenvectors with a
deterministic sign convention (first nonzero component positive), and a
reconstruction residual bounded by ``1e-10 * n * max(1, ||M||)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class SpectralSummary:
    """Full spectrum of a symmetric matrix.

    ``eigenvalues`` ascend; ``eigenvectors[:, i]`` belongs to
    ``eigenvalues[i]``; ``residual`` is the largest 2-norm of
    ``M v - lambda v`` over all eigenpairs.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    spectral_norm: float
    residual: float


def check_symmetric(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    if not np.isfinite(m).all():
        raise ValueError("matrix entries must be finite")
    if not np.array_equal(m, m.T):
        raise ValueError("matrix must be exactly symmetric (use symmetrize())")
    return m


def symmetrize(m: np.ndarray) -> np.ndarray:
    """(M + M') / 2, exactly symmetric in floating point."""
    m = np.asarray(m, dtype=np.float64)
    return (m + m.T) / 2.0


def fix_signs(vecs: np.ndarray) -> np.ndarray:
    """Flip each column so its first nonzero component is positive.

    "Nonzero" is judged against 1e-12 times the column's max magnitude, so
    rounding noise in components that are analytically zero cannot flip signs.
    """
    v = vecs.copy()
    scale = np.abs(v).max(axis=0)
    for col in range(v.shape[1]):
        thr = 1e-12 * scale[col]
        nz = np.nonzero(np.abs(v[:, col]) > thr)[0]
        if nz.size and v[nz[0], col] < 0:
            v[:, col] = -v[:, col]
    return v


def eigen_symmetric(m: np.ndarray) -> SpectralSummary:
    """Eigendecomposition with residual and sign conventions applied."""
    m = check_symmetric(m)
    vals, vecs = np.linalg.eigh(m)
    vecs = fix_signs(vecs)
    norm = float(max(abs(vals[0]), abs(vals[-1]))) if vals.size else 0.0
    resid = float(np.linalg.norm(m @ vecs - vecs * vals, axis=0).max()) if vals.size else 0.0
    bound = RESIDUAL_TOL * m.shape[0] * max(1.0, norm)
    if resid > bound:
        raise ArithmeticError(f"eigensolver residual {resid:g} exceeds contract {bound:g}")
    vals.setflags(write=False)
    vecs.setflags(write=False)
    return SpectralSummary(
        eigenvalues=vals, eigenvectors=vecs, spectral_norm=norm, residual=resid
    )


def eigenvalues(m: np.ndarray) -> np.ndarray:
    """Sorted (non-decreasing) eigenvalues; values-only fast path."""
    return np.linalg.eigvalsh(check_symmetric(m))


def spectral_norm(m: np.ndarray) -> float:
    """Largest absolute eigenvalue (= largest singular value for symmetric input)."""
    vals = eigenvalues(m)
    return float(max(abs(vals[0]), abs(vals[-1]))) if vals.size else 0.0


def weyl_deviation(a: np.ndarray, b: np.ndarray) -> float:
    """max_i |lambda_i(a) - lambda_i(b)| with both spectra sorted ascending.

    By Weyl's inequality this never exceeds ``spectral_norm(a - b)``.
    """
    a = check_symmetric(a)
    b = check_symmetric(b)
    if a.shape != b.shape:
        raise ValueError("matrices must have equal dimensions")
    return float(np.abs(np.linalg.eigvalsh(a) - np.linalg.eigvalsh(b)).max())
