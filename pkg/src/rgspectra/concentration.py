"""Seeded Monte Carlo trials confronting the spectral concentration bounds.

Each trial realizes one graph (or one synthetic random symmetric matrix) and
measures scale-free surrogates of the deviation bounds:

    adjacency_ratio  = ||A - Abar|| / sqrt(Delta)            target 2 + eps
    laplacian_gap    = sqrt(delta) * max_i |l_i(L) - l_i(Lbar)|
                                                target 2 + sqrt(sum (1-mu)^2) + eps
    m_norms          = sqrt(delta) * (||M1||, ||M2||, ||M3||, ||M4||)
    degree_dev       = max_i |d_i - t_i| / sqrt(t_i ln n)    target 3
    scaling_dev      = max_i |sqrt(t_i / d_i) - 1|

Delta / delta are the max / min expected degrees (max variance row sum for
synthetic matrices).  The additive slack ``eps`` stands in for the vanishing
terms of the asymptotic statements; experiment pass flags compare the q95
quantile over trials against bound + eps.  Everything is a pure function of
(config, master seed): per-trial seeds come from the pinned mixing function,
so results are independent of execution order and worker count.
"""

from __future__ import annotations

import math
import multiprocessing as mp
from dataclasses import dataclass

import numpy as np

from . import graphmatrices, linalg, rng
from .config import (
    GRAPH_CRITERIA,
    SYNTHETIC_CRITERIA,
    ConfigError,
    ExperimentConfig,
)
from .graphmatrices import IsolatedVertexError
from .models import (
    GraphSample,
    ProbabilityMatrix,
    chung_lu,
    complete_graph,
    degrees,
    erdos_renyi,
    hypercube_graph,
    load_edge_list,
    load_weights,
    percolation,
    probability_matrix,
    random_regular_graph,
    sample,
    sampled_degrees,
)

MAX_RESAMPLES = 3
WEYL_SLACK = 1e-8


class EmptyExperimentError(ValueError):
    """An experiment needs at least one trial."""


# ---------------------------------------------------------------------------
# Tail calculators.


def chernoff_tails(expectation: float, lam: float) -> tuple[float, float]:
    """(lower, upper) Chernoff tail probabilities for a sum of indicators.

    lower = exp(-lam^2 / (2 E)),  upper = exp(-lam^2 / (2 (E + lam/3))).
    """
    if expectation <= 0:
        raise ValueError("expectation must be positive")
    if lam < 0:
        raise ValueError("deviation must be nonnegative")
    lower = math.exp(-(lam**2) / (2.0 * expectation))
    upper = math.exp(-(lam**2) / (2.0 * (expectation + lam / 3.0)))
    return lower, upper


# ---------------------------------------------------------------------------
# Single-trial measurements.


@dataclass(frozen=True)
class DegreeTrial:
    deviation: float
    passed: bool
    hypothesis_ok: bool


def degree_concentration_trial(pm: ProbabilityMatrix, seed: int) -> DegreeTrial:
    """max_i |d_i - t_i| / sqrt(t_i ln n) for one sample; passes at <= 3.

    The underlying tail bound assumes t_i >= ln n for every vertex; when that
    fails the trial still runs but is flagged.
    """
    if pm.n < 2:
        raise ValueError("degree concentration needs n >= 2")
    prof = degrees(pm)
    if prof.t_min <= 0:
        raise IsolatedVertexError("model has a vertex with zero expected degree")
    ln_n = math.log(pm.n)
    d = sampled_degrees(pm, seed)
    dev = float((np.abs(d - prof.t) / np.sqrt(prof.t * ln_n)).max())
    return DegreeTrial(
        deviation=dev, passed=dev <= 3.0, hypothesis_ok=bool(prof.t_min >= ln_n)
    )


@dataclass(frozen=True)
class AdjacencyTrial:
    ratio: float
    weyl_max: float
    hypothesis_ok: bool


def adjacency_trial(
    pm: ProbabilityMatrix, seed: int, abar_eigs: np.ndarray | None = None
) -> AdjacencyTrial:
    """||A - Abar|| / sqrt(Delta) plus the per-index eigenvalue gaps.

    ``weyl_max`` is max_i |l_i(A) - l_i(Abar)| / sqrt(Delta); by Weyl's
    inequality it never exceeds ``ratio``.  Pass ``abar_eigs`` to reuse the
    model spectrum across trials.
    """
    prof = degrees(pm)
    if prof.t_max <= 0:
        raise ValueError("model has no expected edges")
    if abar_eigs is None:
        abar_eigs = np.linalg.eigvalsh(pm.p)
    gs = sample(pm, seed)
    b = gs.adj.astype(np.float64) - pm.p
    scale = math.sqrt(prof.t_max)
    ratio = linalg.spectral_norm(b) / scale
    a_eigs = np.linalg.eigvalsh(gs.adj.astype(np.float64))
    weyl_max = float(np.abs(a_eigs - abar_eigs).max()) / scale
    ln4 = math.log(max(pm.n, 2)) ** 4
    return AdjacencyTrial(ratio=ratio, weyl_max=weyl_max, hypothesis_ok=prof.t_max >= ln4)


@dataclass(frozen=True)
class LaplacianTrial:
    gap: float
    m_norms: tuple[float, float, float, float]
    degree_dev: float
    scaling_dev: float
    decomposition_maxabs: float
    weyl_ok: bool
    triangle_ok: bool
    resamples: int
    effective_seed: int
    aborted: bool


def _sample_without_isolated(
    pm: ProbabilityMatrix, seed: int, max_resamples: int
) -> tuple[GraphSample | None, int, int]:
    """Resample up to ``max_resamples`` times until no vertex is isolated."""
    for attempt in range(max_resamples + 1):
        s = seed if attempt == 0 else rng.derive_seed(seed, attempt)
        if sampled_degrees(pm, s).min() > 0:
            return sample(pm, s), attempt, s
    return None, max_resamples, seed


def laplacian_trial(
    pm: ProbabilityMatrix,
    seed: int,
    tau: float,
    split: graphmatrices.SpectralSplit | None = None,
    lbar_eigs: np.ndarray | None = None,
    max_resamples: int = MAX_RESAMPLES,
) -> LaplacianTrial:
    """One Laplacian deviation trial with the isolated-vertex resample policy.

    Samples with sub-seeds derived from ``seed`` until the graph has minimum
    degree >= 1 (at most ``max_resamples`` retries); a still-isolated trial is
    reported as aborted rather than patched.  Verifies per trial that the
    four-matrix decomposition reproduces L - Lbar and that the measured gap
    obeys Weyl's inequality and the triangle inequality against the M-norms.
    """
    prof0 = degrees(pm)
    if prof0.t_min <= 0:
        raise IsolatedVertexError("model has a vertex with zero expected degree")
    if split is None:
        split = graphmatrices.spectral_split(pm, tau)
    if lbar_eigs is None:
        lbar_eigs = np.linalg.eigvalsh(
            np.eye(pm.n) - graphmatrices.expected_halfscaled(pm)
        )
    gs, resamples, eff_seed = _sample_without_isolated(pm, seed, max_resamples)
    if gs is None:
        return LaplacianTrial(
            gap=math.nan,
            m_norms=(math.nan,) * 4,
            degree_dev=math.nan,
            scaling_dev=math.nan,
            decomposition_maxabs=math.nan,
            weyl_ok=False,
            triangle_ok=False,
            resamples=resamples,
            effective_seed=eff_seed,
            aborted=True,
        )

    prof = degrees(pm, gs)
    pair = graphmatrices.laplacians(gs, pm)
    dec = graphmatrices.decompose(gs, pm, tau, split=split)
    sqrt_delta = math.sqrt(prof.t_min)

    l_eigs = np.linalg.eigvalsh(pair.L)
    gap_raw = float(np.abs(l_eigs - lbar_eigs).max())
    diff_norm = linalg.spectral_norm(pair.L - pair.Lbar)
    ln_n = math.log(max(pm.n, 2))
    degree_dev = float(
        (np.abs(prof.d - prof.t) / np.sqrt(prof.t * ln_n)).max()
    )
    return LaplacianTrial(
        gap=sqrt_delta * gap_raw,
        m_norms=tuple(sqrt_delta * v for v in dec.norms),
        degree_dev=degree_dev,
        scaling_dev=graphmatrices.scaling_deviation(prof),
        decomposition_maxabs=graphmatrices.decomposition_residual(dec, pair),
        weyl_ok=gap_raw <= diff_norm + WEYL_SLACK,
        triangle_ok=diff_norm <= sum(dec.norms) + WEYL_SLACK,
        resamples=resamples,
        effective_seed=eff_seed,
        aborted=False,
    )


def percolation_adjacency_trial(
    host_adj: np.ndarray, prob: float, seed: int, host_eigs: np.ndarray | None = None
) -> float:
    """max_i |l_i(A(G_p)) - p l_i(A(G))| / sqrt(p Delta_G) for one percolation draw."""
    if prob <= 0:
        raise ValueError("retention probability must be positive")
    pm = percolation(host_adj, prob)
    host = np.asarray(host_adj, dtype=np.float64)
    if host_eigs is None:
        host_eigs = np.linalg.eigvalsh(host)
    delta_g = float(host.sum(axis=1).max())
    gs = sample(pm, seed)
    a_eigs = np.linalg.eigvalsh(gs.adj.astype(np.float64))
    return float(np.abs(a_eigs - prob * host_eigs).max()) / math.sqrt(prob * delta_g)


@dataclass(frozen=True)
class PercolationLaplacianTrial:
    gap: float
    expected_laplacian_maxabs: float
    resamples: int
    aborted: bool


def host_laplacian(host_adj: np.ndarray) -> np.ndarray:
    host = np.asarray(host_adj, dtype=np.float64)
    deg = host.sum(axis=1)
    if deg.min() <= 0:
        raise IsolatedVertexError("host graph has an isolated vertex")
    s = 1.0 / np.sqrt(deg)
    return np.eye(host.shape[0]) - np.outer(s, s) * host


def percolation_laplacian_trial(
    host_adj: np.ndarray,
    prob: float,
    seed: int,
    host_lap_eigs: np.ndarray | None = None,
    max_resamples: int = MAX_RESAMPLES,
) -> PercolationLaplacianTrial:
    """sqrt(p delta_G) * max_i |l_i(L(G_p)) - l_i(L(G))| for one draw.

    The expected Laplacian of the percolated graph coincides with the host's
    normalized Laplacian (the retention probability cancels in the scaling);
    the trial reports the max-abs entry difference as a per-trial identity
    check.
    """
    if prob <= 0:
        raise ValueError("retention probability must be positive")
    pm = percolation(host_adj, prob)
    host = np.asarray(host_adj, dtype=np.float64)
    l_host = host_laplacian(host)
    if host_lap_eigs is None:
        host_lap_eigs = np.linalg.eigvalsh(l_host)
    delta_g = float(host.sum(axis=1).min())
    # the identity is a statement about the model, so it survives aborts
    lbar = np.eye(pm.n) - graphmatrices.expected_halfscaled(pm)
    identity_maxabs = float(np.abs(lbar - l_host).max())

    gs, resamples, _ = _sample_without_isolated(pm, seed, max_resamples)
    if gs is None:
        return PercolationLaplacianTrial(
            gap=math.nan, expected_laplacian_maxabs=identity_maxabs,
            resamples=resamples, aborted=True,
        )
    pair = graphmatrices.laplacians(gs, pm)
    lp_eigs = np.linalg.eigvalsh(pair.L)
    gap = math.sqrt(prob * delta_g) * float(np.abs(lp_eigs - host_lap_eigs).max())
    return PercolationLaplacianTrial(
        gap=gap, expected_laplacian_maxabs=identity_maxabs,
        resamples=resamples, aborted=False,
    )


# ---------------------------------------------------------------------------
# Degree-fluctuation statistics (the X_i = (d_i - t_i)^2 / t_i family).


@dataclass(frozen=True)
class XStatistics:
    trials: int
    mean: np.ndarray
    mean_se: np.ndarray
    variance: np.ndarray
    cov: np.ndarray
    cov_se: np.ndarray
    cov_exact: np.ndarray


def exact_x_covariance(pm: ProbabilityMatrix) -> np.ndarray:
    """Cov(X_i, X_j) = p_ij (1 - p_ij)(1 - 2 p_ij) / (t_i t_j) for i != j.

    The formula is symmetric in (i, j); the diagonal (the variance, which has
    no such closed form) is left at zero.
    """
    prof = degrees(pm)
    if prof.t_min <= 0:
        raise IsolatedVertexError("model has a vertex with zero expected degree")
    p = pm.p
    cov = p * (1.0 - p) * (1.0 - 2.0 * p) / np.outer(prof.t, prof.t)
    np.fill_diagonal(cov, 0.0)
    return cov


def x_statistics(pm: ProbabilityMatrix, trials: int, seed: int) -> XStatistics:
    """Monte Carlo moments of X_i = (d_i - t_i)^2 / t_i over seeded samples.

    Sub-seed t of ``seed`` reproduces the degrees of ``sample(pm, sub_seed)``
    exactly.  The covariance standard error is estimated per pair from the
    second moment of the centered products.
    """
    if trials < 2:
        raise ValueError("need at least two trials for moment estimates")
    prof = degrees(pm)
    if prof.t_min <= 0:
        raise IsolatedVertexError("model has a vertex with zero expected degree")
    n = pm.n
    x = np.empty((trials, n))
    for tr in range(trials):
        d = sampled_degrees(pm, rng.derive_seed(seed, tr))
        x[tr] = (d - prof.t) ** 2 / prof.t
    mean = x.mean(axis=0)
    var = x.var(axis=0, ddof=1)
    mean_se = np.sqrt(var / trials)
    centered = x - mean
    cov = centered.T @ centered / (trials - 1)
    cov_biased = centered.T @ centered / trials
    sq = centered**2
    second = sq.T @ sq / trials
    cov_se = np.sqrt(np.maximum(second - cov_biased**2, 0.0) / trials)
    return XStatistics(
        trials=trials,
        mean=mean,
        mean_se=mean_se,
        variance=var,
        cov=cov,
        cov_se=cov_se,
        cov_exact=exact_x_covariance(pm),
    )


@dataclass(frozen=True)
class WeightedTailResult:
    frequency: float
    threshold: float
    trials: int
    eta: float


def weighted_x_tail(
    pm: ProbabilityMatrix, a, eta: float, trials: int, seed: int
) -> WeightedTailResult:
    """Empirical frequency of X >= sum(a) + eta * sqrt(max(a) * sum(a)).

    X = sum_i a_i X_i; the Chebyshev-type bound caps the frequency at
    (2 + o(1)) / eta^2.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 1 or a.size != pm.n:
        raise ValueError("weights must be a vector of length n")
    if (a < 0).any() or not a.any():
        raise ValueError("weights must be nonnegative and not all zero")
    if eta <= 0:
        raise ValueError("eta must be positive")
    if trials < 1:
        raise ValueError("need at least one trial")
    prof = degrees(pm)
    if prof.t_min <= 0:
        raise IsolatedVertexError("model has a vertex with zero expected degree")
    total = float(a.sum())
    threshold = total + eta * math.sqrt(float(a.max()) * total)
    hits = 0
    for tr in range(trials):
        d = sampled_degrees(pm, rng.derive_seed(seed, tr))
        x_val = float(a @ ((d - prof.t) ** 2 / prof.t))
        if x_val >= threshold:
            hits += 1
    return WeightedTailResult(
        frequency=hits / trials, threshold=threshold, trials=trials, eta=eta
    )


# ---------------------------------------------------------------------------
# Synthetic heterogeneous-variance matrices (beyond the graph case).


@dataclass(frozen=True)
class SyntheticVarianceModel:
    """Per-entry scales for a random symmetric matrix with a variance profile.

    Entry (i, j) of a draw is ``scales[i, j] * U`` with U uniform on [-1, 1],
    so |b_ij| <= 1 and Var(b_ij) = scales[i, j]^2 / 3.  The scales combine a
    deterministic ramp (rows differ by design) with one seeded uniform draw
    per entry, fixed for the lifetime of the model.
    """

    n: int
    scales: np.ndarray
    sigma2: np.ndarray
    max_row_var: float
    scale_seed: int


def synthetic_variance_model(n: int, scale_seed: int) -> SyntheticVarianceModel:
    if n < 2:
        raise ValueError("need n >= 2")
    ramp = 0.5 + np.arange(n) / (n - 1)  # row scale in [0.5, 1.5]
    iu, ju = np.triu_indices(n, k=1)
    u = rng.uniforms(scale_seed, iu.size)
    s = np.zeros((n, n))
    vals = np.sqrt(ramp[iu] * ramp[ju]) / 1.5 * u
    s[iu, ju] = vals
    s[ju, iu] = vals
    sigma2 = s**2 / 3.0
    s.setflags(write=False)
    sigma2.setflags(write=False)
    return SyntheticVarianceModel(
        n=n,
        scales=s,
        sigma2=sigma2,
        max_row_var=float(sigma2.sum(axis=1).max()),
        scale_seed=scale_seed,
    )


def synthetic_sample(model: SyntheticVarianceModel, seed: int) -> np.ndarray:
    iu, ju = np.triu_indices(model.n, k=1)
    u = rng.uniforms(seed, iu.size)
    b = np.zeros((model.n, model.n))
    vals = model.scales[iu, ju] * (2.0 * u - 1.0)
    b[iu, ju] = vals
    b[ju, iu] = vals
    return b


def synthetic_adjacency_trial(model: SyntheticVarianceModel, seed: int) -> AdjacencyTrial:
    """||B|| / sqrt(max variance row sum) for one synthetic draw."""
    b = synthetic_sample(model, seed)
    ratio = linalg.spectral_norm(b) / math.sqrt(model.max_row_var)
    ln4 = math.log(model.n) ** 4
    return AdjacencyTrial(ratio=ratio, weyl_max=ratio, hypothesis_ok=model.max_row_var >= ln4)


# ---------------------------------------------------------------------------
# Experiment driver.


@dataclass(frozen=True)
class TrialReport:
    trial_index: int
    seed: int
    adjacency_ratio: float | None
    adjacency_weyl: float | None
    laplacian_gap: float | None
    m_norms: tuple[float, float, float, float] | None
    degree_dev: float | None
    scaling_dev: float | None
    decomposition_maxabs: float | None
    resamples: int
    aborted: bool


@dataclass(frozen=True)
class ExperimentSummary:
    model: dict
    n: int
    trials: int
    master_seed: int
    tau: float | None
    epsilon: float
    delta: float
    Delta: float
    k_lambda: int | None
    lambda_sum_sq: float | None
    bounds: dict
    hypothesis: dict
    quantiles: dict
    criteria: dict
    passed: bool
    aborted_trials: int
    abort_indices: tuple[int, ...]
    reports: tuple[TrialReport, ...]


def build_model(spec) -> ProbabilityMatrix | SyntheticVarianceModel:
    """Instantiate the model described by a validated config model spec."""
    kind = spec["kind"]
    if kind == "erdos_renyi":
        return erdos_renyi(spec["n"], spec["prob"])
    if kind == "chung_lu":
        w = spec["weights"] if "weights" in spec else load_weights(spec["weights_file"])
        return chung_lu(np.asarray(w, dtype=np.float64))
    if kind == "percolation":
        return percolation(build_host(spec["host"]), spec["prob"])
    if kind == "explicit_matrix":
        if "matrix" in spec:
            return probability_matrix(np.asarray(spec["matrix"], dtype=np.float64))
        return probability_matrix(np.loadtxt(spec["path"], ndmin=2))
    if kind == "synthetic_variance":
        return synthetic_variance_model(spec["n"], spec["scale_seed"])
    raise ConfigError(f"unknown model kind {kind!r}")


def build_host(spec) -> np.ndarray:
    kind = spec["kind"]
    if kind == "complete":
        return complete_graph(spec["n"])
    if kind == "hypercube":
        return hypercube_graph(spec["dim"])
    if kind == "random_regular":
        return random_regular_graph(spec["n"], spec["degree"], spec["seed"])
    if kind == "edge_list":
        return load_edge_list(spec["path"])
    raise ConfigError(f"unknown host kind {kind!r}")


class _ExperimentContext:
    """Per-model state shared by every trial (spectra of the expected matrices)."""

    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        model = build_model(cfg.model)
        self.synthetic = isinstance(model, SyntheticVarianceModel)
        self.model = model
        if self.synthetic:
            self.criteria = cfg.criteria or SYNTHETIC_CRITERIA
            bad = set(self.criteria) - set(SYNTHETIC_CRITERIA)
            if bad:
                raise ConfigError(
                    f"criteria {sorted(bad)} do not apply to synthetic_variance models"
                )
            self.n = model.n
            self.delta = float(model.sigma2.sum(axis=1).min())
            self.Delta = model.max_row_var
            self.tau = None
            self.split = None
            return

        self.criteria = cfg.criteria or GRAPH_CRITERIA
        self.n = model.n
        prof = degrees(model)
        self.prof = prof
        self.delta = prof.t_min
        self.Delta = prof.t_max
        self.tau = cfg.tau if cfg.tau is not None else graphmatrices.default_tau(self.n)
        self.needs_adjacency = "adjacency" in self.criteria
        self.needs_laplacian = bool(
            {"laplacian", "m1", "decomposition"} & set(self.criteria)
        )
        self.needs_degree = "degree" in self.criteria
        self.abar_eigs = np.linalg.eigvalsh(model.p) if self.needs_adjacency else None
        need_split = self.needs_laplacian or "eigen_products" in self.criteria
        self.split = graphmatrices.spectral_split(model, self.tau) if need_split else None
        self.lbar_eigs = (
            np.linalg.eigvalsh(np.eye(self.n) - graphmatrices.expected_halfscaled(model))
            if self.needs_laplacian
            else None
        )

    def run_trial(self, index: int) -> TrialReport:
        seed = rng.derive_seed(self.cfg.master_seed, index)
        if self.synthetic:
            trial = synthetic_adjacency_trial(self.model, seed)
            return TrialReport(
                trial_index=index,
                seed=seed,
                adjacency_ratio=trial.ratio,
                adjacency_weyl=trial.weyl_max,
                laplacian_gap=None,
                m_norms=None,
                degree_dev=None,
                scaling_dev=None,
                decomposition_maxabs=None,
                resamples=0,
                aborted=False,
            )

        adjacency_ratio = adjacency_weyl = None
        if self.needs_adjacency:
            at = adjacency_trial(self.model, seed, abar_eigs=self.abar_eigs)
            adjacency_ratio, adjacency_weyl = at.ratio, at.weyl_max

        gap = m_norms = scaling = decomp = None
        degree_dev = None
        resamples = 0
        aborted = False
        if self.needs_laplacian:
            lt = laplacian_trial(
                self.model, seed, self.tau, split=self.split, lbar_eigs=self.lbar_eigs
            )
            resamples, aborted = lt.resamples, lt.aborted
            if not lt.aborted:
                gap, m_norms = lt.gap, lt.m_norms
                scaling = lt.scaling_dev
                decomp = lt.decomposition_maxabs
                degree_dev = lt.degree_dev
                if not (lt.weyl_ok and lt.triangle_ok):
                    raise AssertionError(
                        f"trial {index}: Weyl/triangle consistency violated"
                    )
        if degree_dev is None and self.needs_degree:
            degree_dev = degree_concentration_trial(self.model, seed).deviation

        return TrialReport(
            trial_index=index,
            seed=seed,
            adjacency_ratio=adjacency_ratio,
            adjacency_weyl=adjacency_weyl,
            laplacian_gap=gap,
            m_norms=m_norms,
            degree_dev=degree_dev,
            scaling_dev=scaling,
            decomposition_maxabs=decomp,
            resamples=resamples,
            aborted=aborted,
        )


_WORKER_CTX: _ExperimentContext | None = None


def _worker_init(cfg: ExperimentConfig) -> None:
    global _WORKER_CTX
    _WORKER_CTX = _ExperimentContext(cfg)


def _worker_trial(index: int) -> TrialReport:
    assert _WORKER_CTX is not None
    return _WORKER_CTX.run_trial(index)


def quantile(sorted_values, q: float) -> float:
    """Linear-interpolation quantile of pre-sorted values (numpy's default rule)."""
    vals = list(sorted_values)
    if not vals:
        raise ValueError("no values")
    pos = q * (len(vals) - 1)
    lo = math.floor(pos)
    hi = math.ceil(pos)
    frac = pos - lo
    return vals[lo] * (1.0 - frac) + vals[hi] * frac


def _quantile_row(values: list[float]) -> dict | None:
    if not values:
        return None
    s = sorted(values)
    return {"median": quantile(s, 0.5), "q95": quantile(s, 0.95), "max": s[-1]}


def run_experiment(cfg: ExperimentConfig, workers: int = 1) -> ExperimentSummary:
    """Run all trials of a config and aggregate quantiles and pass flags.

    The summary is a pure function of the config (trial seeds derive from the
    master seed and trial index), and aggregation is keyed by trial index, so
    any worker count produces identical output.
    """
    if cfg.trials < 1:
        raise EmptyExperimentError("experiment needs trials >= 1")
    ctx = _ExperimentContext(cfg)
    indices = list(range(cfg.trials))
    if workers <= 1:
        reports = [ctx.run_trial(i) for i in indices]
    else:
        with mp.get_context("spawn").Pool(
            processes=workers, initializer=_worker_init, initargs=(cfg,)
        ) as pool:
            reports = pool.map(_worker_trial, indices, chunksize=1)
    reports.sort(key=lambda r: r.trial_index)
    return summarize(ctx, reports)


def summarize(ctx: _ExperimentContext, reports: list[TrialReport]) -> ExperimentSummary:
    cfg = ctx.cfg
    aborted = [r.trial_index for r in reports if r.aborted]
    live = [r for r in reports if not r.aborted]

    def collect(get) -> list[float]:
        return [get(r) for r in live if get(r) is not None]

    quantiles = {
        "adjacency_ratio": _quantile_row(collect(lambda r: r.adjacency_ratio)),
        "adjacency_weyl": _quantile_row(collect(lambda r: r.adjacency_weyl)),
        "laplacian_gap": _quantile_row(collect(lambda r: r.laplacian_gap)),
        "degree_dev": _quantile_row(collect(lambda r: r.degree_dev)),
        "scaling_dev": _quantile_row(collect(lambda r: r.scaling_dev)),
    }
    for idx in range(4):
        key = f"m{idx + 1}"
        quantiles[key] = _quantile_row(
            collect(lambda r, idx=idx: r.m_norms[idx] if r.m_norms else None)
        )

    ln4 = math.log(max(ctx.n, 2)) ** 4
    k_lambda = ctx.split.k if ctx.split is not None else None
    lam_sq = graphmatrices.lambda_sum_sq(ctx.split) if ctx.split is not None else None
    lap_bound = 2.0 + math.sqrt(lam_sq) if lam_sq is not None else None
    bounds = {"adjacency": 2.0, "m1": 2.0, "laplacian": lap_bound, "degree": 3.0}
    hypothesis = {
        "adjacency": bool(ctx.Delta >= ln4),
        "laplacian": bool(ctx.delta >= max(k_lambda or 0, ln4)),
        "degree": bool(not ctx.synthetic and ctx.delta >= math.log(max(ctx.n, 2))),
    }

    eps = cfg.epsilon
    criteria: dict[str, dict] = {}
    for name in ctx.criteria:
        if name == "adjacency":
            row = quantiles["adjacency_ratio"]
            criteria[name] = _crit(row and row["q95"], 2.0 + eps)
        elif name == "laplacian":
            row = quantiles["laplacian_gap"]
            criteria[name] = _crit(row and row["q95"], lap_bound + eps)
        elif name == "m1":
            row = quantiles["m1"]
            criteria[name] = _crit(row and row["q95"], 2.0 + eps)
        elif name == "degree":
            devs = collect(lambda r: r.degree_dev)
            failures = sum(1 for v in devs if v > 3.0)
            allowed = max(1, math.ceil(len(devs) / ctx.n**2)) if devs else 0
            criteria[name] = {
                "value": float(failures),
                "bound": float(allowed),
                "pass": bool(devs) and failures <= allowed,
            }
        elif name == "decomposition":
            res = collect(lambda r: r.decomposition_maxabs)
            criteria[name] = _crit(max(res) if res else None, 1e-8)
        elif name == "eigen_products":
            products = graphmatrices.eigvec_infnorm_products(ctx.split, ctx.prof)
            worst = float(products.max())
            criteria[name] = _crit(worst, 1.0 / math.sqrt(ctx.delta) + 1e-10)

    passed = bool(criteria) and all(c["pass"] for c in criteria.values())
    return ExperimentSummary(
        model=dict(cfg.model),
        n=ctx.n,
        trials=cfg.trials,
        master_seed=cfg.master_seed,
        tau=ctx.tau,
        epsilon=eps,
        delta=ctx.delta,
        Delta=ctx.Delta,
        k_lambda=k_lambda,
        lambda_sum_sq=lam_sq,
        bounds=bounds,
        hypothesis=hypothesis,
        quantiles=quantiles,
        criteria=criteria,
        passed=passed,
        aborted_trials=len(aborted),
        abort_indices=tuple(aborted),
        reports=tuple(reports),
    )


def _crit(value, bound) -> dict:
    if value is None:
        return {"value": None, "bound": float(bound), "pass": False}
    return {"value": float(value), "bound": float(bound), "pass": bool(value <= bound)}
