"""Edge-independent random graph models and reproducible sampling.

A model is a symmetric matrix of edge probabilities ``p[i, j]`` with zero
diagonal; every potential edge {i, j} appears independently with probability
``p[i, j]``.  Constructors cover the classic special cases (Erdos-Renyi,
expected-degree-sequence a.k.a. Chung-Lu, bond percolation of a host graph);
``sample`` realizes one graph from a 64-bit seed via the pinned generator in
:mod:`rgspectra.rng`.

Simple graphs only: self-loop probabilities are rejected at construction, and
Chung-Lu weight vectors whose implied probabilities exceed 1 are an error, not
clamped.  All arrays are frozen read-only after validation, so instances are
safe to share across threads; concurrent sampling with distinct seeds needs no
coordination.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import rng


@dataclass(frozen=True)
class ProbabilityMatrix:
    """Symmetric edge-probability matrix with zero diagonal."""

    n: int
    p: np.ndarray


@dataclass(frozen=True)
class GraphSample:
    """One realized simple graph (0/1 symmetric adjacency) plus its seed."""

    n: int
    adj: np.ndarray
    seed: int


@dataclass(frozen=True)
class DegreeProfile:
    """Expected degrees ``t`` (and realized degrees ``d`` when sampled)."""

    t: np.ndarray
    d: np.ndarray | None
    t_max: float
    t_min: float


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def probability_matrix(p: np.ndarray) -> ProbabilityMatrix:
    """Validate and wrap an explicit probability matrix.

    Requires an n-by-n matrix, exactly symmetric, entries in [0, 1] and a zero
    diagonal (no self-loops).
    """
    p = np.array(p, dtype=np.float64)
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        raise ValueError("probability matrix must be square")
    n = p.shape[0]
    if n < 1:
        raise ValueError("need at least one vertex")
    if not np.isfinite(p).all():
        raise ValueError("probabilities must be finite")
    if (p < 0).any() or (p > 1).any():
        raise ValueError("probabilities must lie in [0, 1]")
    if not np.array_equal(p, p.T):
        raise ValueError("probability matrix must be symmetric")
    if np.diagonal(p).any():
        raise ValueError("self-loop probabilities are not supported (diagonal must be 0)")
    return ProbabilityMatrix(n=n, p=_freeze(p))


def erdos_renyi(n: int, prob: float) -> ProbabilityMatrix:
    """G(n, p): every edge present independently with the same probability."""
    if n < 1:
        raise ValueError("need at least one vertex")
    if not 0.0 <= prob <= 1.0:
        raise ValueError("edge probability must lie in [0, 1]")
    p = np.full((n, n), float(prob))
    np.fill_diagonal(p, 0.0)
    return ProbabilityMatrix(n=n, p=_freeze(p))


def chung_lu(w) -> ProbabilityMatrix:
    """Expected-degree-sequence model: p_ij = w_i * w_j / sum(w).

    Weights must be nonnegative with positive sum, and must satisfy
    max(w)**2 <= sum(w) so that every p_ij is a probability.  Violations are
    errors; nothing is clamped.
    """
    w = np.asarray(w, dtype=np.float64)
    if w.ndim != 1 or w.size < 1:
        raise ValueError("weights must be a nonempty vector")
    if not np.isfinite(w).all() or (w < 0).any():
        raise ValueError("weights must be finite and nonnegative")
    total = float(w.sum())
    if total <= 0:
        raise ValueError("weight sum must be positive")
    wmax2 = float(w.max()) ** 2
    if wmax2 > total:
        raise ValueError(
            f"max weight squared ({wmax2:g}) exceeds weight sum ({total:g}); "
            "p_ij would leave [0, 1]"
        )
    p = np.outer(w, w) / total
    np.fill_diagonal(p, 0.0)
    return ProbabilityMatrix(n=w.size, p=_freeze(p))


def percolation(host_adj: np.ndarray, prob: float) -> ProbabilityMatrix:
    """Bond percolation of a host graph: each host edge kept with probability ``prob``."""
    a = np.asarray(host_adj)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("host adjacency must be square")
    if not np.isin(a, (0, 1)).all():
        raise ValueError("host adjacency must be 0/1")
    if not np.array_equal(a, a.T):
        raise ValueError("host adjacency must be symmetric")
    if np.diagonal(a).any():
        raise ValueError("host graph must be loop-free")
    if not 0.0 <= prob <= 1.0:
        raise ValueError("retention probability must lie in [0, 1]")
    p = float(prob) * a.astype(np.float64)
    return ProbabilityMatrix(n=a.shape[0], p=_freeze(p))


@lru_cache(maxsize=8)
def _triu_indices(n: int):
    iu, ju = np.triu_indices(n, k=1)
    return _freeze(iu), _freeze(ju)


def sample(pm: ProbabilityMatrix, seed: int) -> GraphSample:
    """Realize one graph: upper-triangle Bernoulli draws, mirrored.

    Edge (i, j), i < j, is compared against the uniform at counter
    ``i*(2n-i-1)//2 + (j-i-1)`` of stream ``seed`` (row-major upper-triangle
    order), so identical (pm, seed) reproduce the adjacency bit for bit.
    """
    n = pm.n
    iu, ju = _triu_indices(n)
    u = rng.uniforms(seed, iu.size)
    bits = u < pm.p[iu, ju]
    adj = np.zeros((n, n), dtype=np.int8)
    adj[iu, ju] = bits
    adj[ju, iu] = bits
    return GraphSample(n=n, adj=_freeze(adj), seed=seed)


def sampled_degrees(pm: ProbabilityMatrix, seed: int) -> np.ndarray:
    """Degree vector of ``sample(pm, seed)`` without materializing the adjacency."""
    n = pm.n
    iu, ju = _triu_indices(n)
    u = rng.uniforms(seed, iu.size)
    bits = u < pm.p[iu, ju]
    return np.bincount(iu[bits], minlength=n) + np.bincount(ju[bits], minlength=n)


def degrees(pm: ProbabilityMatrix, gs: GraphSample | None = None) -> DegreeProfile:
    """Expected degrees t_i = sum_j p_ij, plus realized degrees when a sample is given."""
    if gs is not None and gs.n != pm.n:
        raise ValueError("sample and model dimensions differ")
    t = pm.p.sum(axis=1)
    d = gs.adj.sum(axis=1, dtype=np.int64) if gs is not None else None
    return DegreeProfile(
        t=_freeze(t),
        d=_freeze(d) if d is not None else None,
        t_max=float(t.max()),
        t_min=float(t.min()),
    )


def load_weights(path) -> np.ndarray:
    """Read a weight vector from a one-value-per-line text file."""
    vals = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                vals.append(float(line))
    if not vals:
        raise ValueError(f"no weights found in {path}")
    return np.asarray(vals, dtype=np.float64)


# ---------------------------------------------------------------------------
# Host graphs for percolation experiments.


def complete_graph(n: int) -> np.ndarray:
    if n < 1:
        raise ValueError("need at least one vertex")
    a = np.ones((n, n), dtype=np.int8)
    np.fill_diagonal(a, 0)
    return a


def hypercube_graph(dim: int) -> np.ndarray:
    """Adjacency of the dim-dimensional hypercube on 2**dim vertices."""
    if dim < 1:
        raise ValueError("dimension must be positive")
    n = 1 << dim
    a = np.zeros((n, n), dtype=np.int8)
    v = np.arange(n)
    for b in range(dim):
        w = v ^ (1 << b)
        a[v, w] = 1
    return a


def random_regular_graph(n: int, degree: int, seed: int) -> np.ndarray:
    """Seeded random d-regular simple graph.

    Starts from a circulant d-regular graph (neighbors at offsets 1..d/2, plus
    the antipode when d is odd and n even) and randomizes it with double-edge
    switches: pick two edges {a,b}, {c,d}, replace with {a,c}, {b,d} when the
    result stays simple.  10 * |E| accepted switches are enough to scramble the
    circulant structure; degrees are preserved exactly throughout.
    """
    if n < 3 or degree < 1 or degree >= n:
        raise ValueError("need 0 < degree < n and n >= 3")
    if degree % 2 == 1 and n % 2 == 1:
        raise ValueError("n * degree must be even")
    if degree % 2 == 1 and degree + 1 > n - 1:
        raise ValueError("degree too large for antipodal construction")

    neighbors: list[set[int]] = [set() for _ in range(n)]
    for off in range(1, degree // 2 + 1):
        for i in range(n):
            j = (i + off) % n
            neighbors[i].add(j)
            neighbors[j].add(i)
    if degree % 2 == 1:
        half = n // 2
        for i in range(half):
            neighbors[i].add(i + half)
            neighbors[i + half].add(i)

    edges = sorted({(min(i, j), max(i, j)) for i in range(n) for j in neighbors[i]})
    slot = {e: i for i, e in enumerate(edges)}
    m = len(edges)
    target = 10 * m
    accepted = 0
    counter = 0
    batch = 4096
    buf = np.empty(0)
    pos = 0

    def draw() -> float:
        nonlocal buf, pos, counter
        if pos >= buf.size:
            buf = rng.uniforms(seed, batch, start=counter)
            counter += batch
            pos = 0
        v = buf[pos]
        pos += 1
        return v

    def replace_edge(old: tuple[int, int], new: tuple[int, int]) -> None:
        i = slot.pop(old)
        edges[i] = new
        slot[new] = i

    while accepted < target:
        e1 = edges[int(draw() * m)]
        e2 = edges[int(draw() * m)]
        a, b = e1
        c, d = e2
        if draw() < 0.5:
            c, d = d, c
        if len({a, b, c, d}) < 4:
            continue
        if c in neighbors[a] or d in neighbors[b]:
            continue
        neighbors[a].remove(b)
        neighbors[b].remove(a)
        neighbors[c].remove(d)
        neighbors[d].remove(c)
        neighbors[a].add(c)
        neighbors[c].add(a)
        neighbors[b].add(d)
        neighbors[d].add(b)
        replace_edge(e1, (min(a, c), max(a, c)))
        replace_edge((min(c, d), max(c, d)), (min(b, d), max(b, d)))
        accepted += 1

    adj = np.zeros((n, n), dtype=np.int8)
    for i in range(n):
        for j in neighbors[i]:
            adj[i, j] = 1
    return adj


def save_edge_list(gs: GraphSample, path) -> None:
    """Write "i j" pairs (0-indexed, i < j) under a "# n=<n> seed=<seed>" header."""
    iu, ju = np.nonzero(np.triu(gs.adj, k=1))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# n={gs.n} seed={gs.seed}\n")
        for i, j in zip(iu.tolist(), ju.tolist()):
            fh.write(f"{i} {j}\n")


def load_edge_list(path) -> np.ndarray:
    """Read an adjacency matrix from the edge-list format written by save_edge_list."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        fields = dict(
            part.split("=", 1) for part in header.lstrip("# ").split() if "=" in part
        )
        if "n" not in fields:
            raise ValueError(f"{path}: missing '# n=... seed=...' header")
        n = int(fields["n"])
        adj = np.zeros((n, n), dtype=np.int8)
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            i_s, j_s = line.split()
            i, j = int(i_s), int(j_s)
            adj[i, j] = 1
            adj[j, i] = 1
    return adj


def edge_count_stddev(pm: ProbabilityMatrix) -> float:
    """Standard deviation of the total edge count (independent Bernoulli sum)."""
    iu, ju = _triu_indices(pm.n)
    q = pm.p[iu, ju]
    return math.sqrt(float((q * (1.0 - q)).sum()))
