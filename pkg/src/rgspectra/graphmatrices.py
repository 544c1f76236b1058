"""Normalized Laplacians and the exact four-term difference decomposition.

Central objects, for a model with probability matrix Abar (expected adjacency)
and a realized adjacency A:

    L    = I - D^{-1/2} A    D^{-1/2}      realized normalized Laplacian
    Lbar = I - T^{-1/2} Abar T^{-1/2}      expected normalized Laplacian

with D/T the realized/expected degree diagonals.  Writing
W = T^{-1/2} Abar T^{-1/2} and splitting its spectrum at a threshold tau into
a far-from-trivial part M and a remainder N (W = M + N), the difference
splits exactly into four pieces

    L - Lbar = M1 + M2 + M3 + M4,
    M1 = T^{-1/2} (Abar - A) T^{-1/2},   M2 = f(M1),
    M3 = f(-N),                          M4 = f(-M),
    f(B) = D^{-1/2} T^{1/2} B T^{1/2} D^{-1/2} - B.

Each piece has its own concentration behaviour; ``decompose`` returns all
four plus their spectral norms.  The sign convention is fixed by requiring
the sum to reproduce L - Lbar entrywise (with L, Lbar as defined above);
spectral norms are unaffected by it.

Isolated vertices (zero realized or expected degree) are hard errors: the
normalized Laplacian is undefined there and patching it would silently change
what is being measured.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .models import DegreeProfile, GraphSample, ProbabilityMatrix, degrees


class IsolatedVertexError(ValueError):
    """A vertex has zero (realized or expected) degree."""


@dataclass(frozen=True)
class LaplacianPair:
    L: np.ndarray
    Lbar: np.ndarray


@dataclass(frozen=True)
class SpectralSplit:
    """Spectrum of Lbar ordered by distance of eigenvalues from 1.

    ``mu`` holds the eigenvalues with |1 - mu_1| >= |1 - mu_2| >= ...;
    ``phi[:, i]`` is the orthonormal eigenvector of ``mu[i]``; ``Lambda`` is
    the prefix with |1 - mu| >= tau and ``k`` its size.  ``M`` and ``N`` are
    the spectral sums of (1 - mu) phi phi' over the prefix and the remainder,
    so M + N reconstructs T^{-1/2} Abar T^{-1/2}.
    """

    mu: np.ndarray
    phi: np.ndarray
    Lambda: np.ndarray
    k: int
    M: np.ndarray
    N: np.ndarray
    tau: float


@dataclass(frozen=True)
class Decomposition:
    M1: np.ndarray
    M2: np.ndarray
    M3: np.ndarray
    M4: np.ndarray
    norms: tuple[float, float, float, float]


def default_tau(n: int) -> float:
    """Default split threshold 1 / (ln(ln(max(n, 27))) * sqrt(ln n))."""
    ln_n = math.log(max(n, 2))
    return 1.0 / (math.log(math.log(max(n, 27))) * math.sqrt(ln_n))


def _profile(pm: ProbabilityMatrix, gs: GraphSample | None) -> DegreeProfile:
    prof = degrees(pm, gs)
    if prof.t_min <= 0:
        raise IsolatedVertexError("model has a vertex with zero expected degree")
    if prof.d is not None and prof.d.min() <= 0:
        raise IsolatedVertexError("sample has an isolated vertex")
    return prof


def centered_adjacency(gs: GraphSample, pm: ProbabilityMatrix) -> np.ndarray:
    """B = A - Abar; independent zero-mean entries, zero diagonal."""
    if gs.n != pm.n:
        raise ValueError("sample and model dimensions differ")
    return gs.adj.astype(np.float64) - pm.p


def expected_halfscaled(pm: ProbabilityMatrix) -> np.ndarray:
    """W = T^{-1/2} Abar T^{-1/2} (equals I - Lbar)."""
    prof = _profile(pm, None)
    s = 1.0 / np.sqrt(prof.t)
    return np.outer(s, s) * pm.p


def laplacians(gs: GraphSample, pm: ProbabilityMatrix) -> LaplacianPair:
    """Realized and expected normalized Laplacians of one sample."""
    if gs.n != pm.n:
        raise ValueError("sample and model dimensions differ")
    prof = _profile(pm, gs)
    eye = np.eye(pm.n)
    sd = 1.0 / np.sqrt(prof.d.astype(np.float64))
    st = 1.0 / np.sqrt(prof.t)
    L = eye - np.outer(sd, sd) * gs.adj
    Lbar = eye - np.outer(st, st) * pm.p
    return LaplacianPair(L=L, Lbar=Lbar)


def f_transform(b: np.ndarray, prof: DegreeProfile) -> np.ndarray:
    """f(B) = D^{-1/2} T^{1/2} B T^{1/2} D^{-1/2} - B (linear in B)."""
    if prof.d is None:
        raise ValueError("profile must carry realized degrees")
    if prof.t.min() <= 0 or prof.d.min() <= 0:
        raise IsolatedVertexError("f-transform needs positive degrees")
    b = np.asarray(b, dtype=np.float64)
    r = np.sqrt(prof.t / prof.d)
    return np.outer(r, r) * b - b


def spectral_split(pm: ProbabilityMatrix, tau: float) -> SpectralSplit:
    """Split the expected-Laplacian spectrum at |1 - mu| >= tau.

    Eigenvalues of Lbar are recovered from W = I - Lbar; ordering by |1 - mu|
    descending is stable with respect to the ascending eigensolver output, and
    eigenvector signs follow the first-nonzero-positive convention, so the
    split is deterministic.
    """
    if not 0.0 < tau:
        raise ValueError("tau must be positive")
    w = expected_halfscaled(pm)
    summ = linalg.eigen_symmetric(w)
    nu = summ.eigenvalues  # nu = 1 - mu, ascending
    order = np.argsort(-np.abs(nu), kind="stable")
    nu_sorted = nu[order]
    phi = summ.eigenvectors[:, order]
    k = int((np.abs(nu_sorted) >= tau).sum())
    mu = 1.0 - nu_sorted
    m_mat = linalg.symmetrize((phi[:, :k] * nu_sorted[:k]) @ phi[:, :k].T)
    n_mat = linalg.symmetrize((phi[:, k:] * nu_sorted[k:]) @ phi[:, k:].T)
    return SpectralSplit(
        mu=mu, phi=phi, Lambda=mu[:k], k=k, M=m_mat, N=n_mat, tau=float(tau)
    )


def lambda_sum_sq(split: SpectralSplit) -> float:
    """sum over Lambda of (1 - mu)^2; drives the Laplacian deviation bound."""
    return float(((1.0 - split.Lambda) ** 2).sum())


def decompose(
    gs: GraphSample,
    pm: ProbabilityMatrix,
    tau: float,
    split: SpectralSplit | None = None,
) -> Decomposition:
    """Four matrices summing exactly (up to rounding) to L - Lbar.

    ``split`` may be passed in to reuse one eigendecomposition of the expected
    Laplacian across many samples of the same model; it must come from
    ``spectral_split(pm, tau)``.
    """
    prof = _profile(pm, gs)
    if split is None:
        split = spectral_split(pm, tau)
    st = 1.0 / np.sqrt(prof.t)
    m1 = np.outer(st, st) * (pm.p - gs.adj)
    m2 = f_transform(m1, prof)
    m3 = f_transform(-split.N, prof)
    m4 = f_transform(-split.M, prof)
    norms = tuple(linalg.spectral_norm(m) for m in (m1, m2, m3, m4))
    return Decomposition(M1=m1, M2=m2, M3=m3, M4=m4, norms=norms)


def decomposition_residual(dec: Decomposition, pair: LaplacianPair) -> float:
    """Max-abs entry of (M1 + M2 + M3 + M4) - (L - Lbar)."""
    total = dec.M1 + dec.M2 + dec.M3 + dec.M4
    return float(np.abs(total - (pair.L - pair.Lbar)).max())


def eigvec_infnorm_products(split: SpectralSplit, prof: DegreeProfile) -> np.ndarray:
    """|1 - mu_i| * ||phi_i||_inf for every i, in split order.

    Deterministically bounded by 1/sqrt(min expected degree) -- a fact about
    the expected Laplacian itself, not a tail bound.
    """
    return np.abs(1.0 - split.mu) * np.abs(split.phi).max(axis=0)


def scaling_deviation(prof: DegreeProfile) -> float:
    """max_i |sqrt(t_i / d_i) - 1|, the norm of D^{-1/2} T^{1/2} - I."""
    if prof.d is None:
        raise ValueError("profile must carry realized degrees")
    d = prof.d.astype(np.float64)
    if prof.t.min() <= 0 or d.min() <= 0:
        raise IsolatedVertexError("scaling deviation needs positive degrees")
    return float(np.abs(np.sqrt(prof.t / d) - 1.0).max())
