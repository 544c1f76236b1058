"""Good-closed-walk combinatorics and exact trace moments.

A closed walk of length k on vertex set [n] is a sequence i_1 ... i_k with
consecutive vertices distinct (including the wrap i_k -> i_1; diagonals are
zero, so loops never contribute).  A walk is *good* when every edge it uses is
traversed at least twice -- precisely the walks that survive in
E(tr(B^k)) for centered independent-entry matrices B, since any
multiplicity-1 edge contributes a factor E(b_e) = 0.

Canonical walks live on [p] with vertices first appearing in the order
1, 2, ..., p; their count per (k, p) is what the classical combinatorial
bounds control.  Everything here is exact: walk counts use integer
arithmetic, moments use closed-form centered-Bernoulli edge moments, and the
bound formulas are evaluated literally so tests can confront them with
exhaustive enumeration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .models import ProbabilityMatrix

ENUM_BUDGET = 10**8


class WalkBudgetError(ValueError):
    """Enumeration over n**k closed walks would exceed ENUM_BUDGET."""


@dataclass(frozen=True)
class ClosedWalk:
    """One closed walk: vertex sequence (implicitly closed) and edge multiplicities."""

    vertices: tuple[int, ...]
    edge_multiplicities: dict[tuple[int, int], int]


@dataclass(frozen=True)
class WalkCensus:
    """All canonical good closed walks of length k on p vertices."""

    k: int
    p: int
    canonical_walks: tuple[ClosedWalk, ...]
    count: int


def enumerate_canonical(k: int, p: int) -> WalkCensus:
    """Exhaustively enumerate canonical good closed walks of length k on [p].

    A good walk visiting p vertices needs p - 1 distinct tree edges, each
    traversed at least twice, so no walk exists for p > k//2 + 1 and the
    enumeration short-circuits to an empty census there.

    The search is depth-first over interior vertices with two prunings:
    new labels must follow first-appearance order, and a branch dies when the
    remaining steps cannot both introduce the missing vertices and lift every
    multiplicity-1 edge to 2.
    """
    if k < 2 or p < 2:
        raise ValueError("need walk length k >= 2 and vertex count p >= 2")
    if p > k // 2 + 1:
        return WalkCensus(k=k, p=p, canonical_walks=(), count=0)

    walks: list[ClosedWalk] = []
    seq = [1]
    mult: dict[tuple[int, int], int] = {}
    state = {"deficit": 0, "maxseen": 1}

    def place(pos: int) -> None:
        cur = seq[-1]
        steps_left = k - pos  # includes the final closing step
        last = pos == k - 1
        top = min(state["maxseen"] + 1, p)
        for v in range(1, top + 1):
            if v == cur or (last and v == 1):
                continue
            e = (cur, v) if cur < v else (v, cur)
            q = mult.get(e, 0)
            ddef = 1 if q == 0 else (-1 if q == 1 else 0)
            dmax = 1 if v > state["maxseen"] else 0
            if 2 * (p - state["maxseen"] - dmax) + state["deficit"] + ddef > steps_left:
                continue
            mult[e] = q + 1
            state["deficit"] += ddef
            state["maxseen"] += dmax
            seq.append(v)
            if last:
                if state["maxseen"] == p:
                    ec = (1, v)
                    qc = mult.get(ec, 0)
                    if qc >= 1 and state["deficit"] == (1 if qc == 1 else 0):
                        mult[ec] = qc + 1
                        walks.append(
                            ClosedWalk(vertices=tuple(seq), edge_multiplicities=dict(mult))
                        )
                        mult[ec] = qc
            else:
                place(pos + 1)
            seq.pop()
            state["maxseen"] -= dmax
            state["deficit"] -= ddef
            if q == 0:
                del mult[e]
            else:
                mult[e] = q

    place(1)
    return WalkCensus(k=k, p=p, canonical_walks=tuple(walks), count=len(walks))


def falling_factorial(n: int, p: int) -> int:
    out = 1
    for i in range(p):
        out *= n - i
    return out


def count_full(n: int, k: int, p: int, census: WalkCensus | None = None) -> int:
    """|walks on [n]| = n (n-1) ... (n-p+1) * |canonical walks|; exact integer."""
    if census is None:
        census = enumerate_canonical(k, p)
    if n < 0:
        raise ValueError("n must be nonnegative")
    return falling_factorial(n, p) * census.count if n >= p else 0


def fk_bound(n: int, k: int, p: int) -> float:
    """Classical count bound: (n)_p * Catalan(p-1) * C(k, 2p-2) * p^(2(k-2p+2)).

    (1/p) * C(2p-2, p-1) is the (p-1)-st Catalan number, so the value is an
    exact integer; it is returned as a float since it overflows 64 bits fast.
    """
    if p < 2 or n < p or k < 2 * p - 2:
        raise ValueError("need n >= p >= 2 and k >= 2p - 2")
    catalan = math.comb(2 * p - 2, p - 1) // p
    exact = falling_factorial(n, p) * catalan * math.comb(k, 2 * p - 2) * p ** (
        2 * (k - 2 * p + 2)
    )
    return float(exact)


def vu_bound(k: int, p: int) -> float:
    """Sharper canonical-count bound: C(k,2p-2) 2^(2k-2p+3) p^(k-2p+2) (k-2p+4)^(k-2p+2)."""
    if p < 2 or p > k // 2 + 1:
        raise ValueError("need 2 <= p <= k//2 + 1")
    r = k - 2 * p + 2
    exact = math.comb(k, 2 * p - 2) * 2 ** (2 * k - 2 * p + 3) * p**r * (k - 2 * p + 4) ** r
    return float(exact)


def s_term(n: int, k: int, p: int, delta: float) -> float:
    """n * Delta^(p-1) times the canonical-count bound; one term of the trace sum.

    At the top index p = k//2 + 1 (k even) this collapses to
    n * 2^(k+1) * Delta^(k/2), and successive terms satisfy
    S(n,k,p-1) <= (16 k^4 / Delta) * S(n,k,p).
    """
    if delta <= 0:
        raise ValueError("Delta must be positive")
    if n < 1:
        raise ValueError("n must be positive")
    return float(n) * float(delta) ** (p - 1) * vu_bound(k, p)


class TraceBound(NamedTuple):
    value: float
    condition_ok: bool


def trace_bound(n: int, k: int, delta: float) -> TraceBound:
    """|E tr(B^k)| <= 2^(k+2) n Delta^(k/2), valid when k^4 <= Delta / 32.

    The bound value is returned for any even k; ``condition_ok`` records
    whether the validity condition holds at these arguments.
    """
    if k < 2 or k % 2 != 0:
        raise ValueError("k must be even and >= 2")
    if delta <= 0:
        raise ValueError("Delta must be positive")
    value = 2.0 ** (k + 2) * n * float(delta) ** (k / 2)
    return TraceBound(value=value, condition_ok=k**4 <= delta / 32.0)


def centered_bernoulli_moment(p: float, q: int) -> float:
    """E((X - p)^q) for X ~ Bernoulli(p); exactly 0 at q = 1."""
    return p * (1.0 - p) ** q + (1.0 - p) * (-p) ** q


def _scan_closed_walks(
    n: int,
    k: int,
    leaf: Callable[[dict[tuple[int, int], int]], None],
    prune_single_edges: bool,
) -> None:
    """Drive ``leaf`` over closed walks of length k on [n] (0-based labels).

    With ``prune_single_edges`` the scan visits only good walks, abandoning
    branches whose multiplicity-1 edges can no longer be repaired.
    """
    mult: dict[tuple[int, int], int] = {}
    state = {"deficit": 0}

    def rec(pos: int, first: int, cur: int) -> None:
        if pos == k:
            ec = (first, cur) if first < cur else (cur, first)
            qc = mult.get(ec, 0)
            if prune_single_edges and (qc == 0 or state["deficit"] > (1 if qc == 1 else 0)):
                return
            mult[ec] = qc + 1
            leaf(mult)
            if qc:
                mult[ec] = qc
            else:
                del mult[ec]
            return
        last = pos == k - 1
        steps_left = k - pos
        for v in range(n):
            if v == cur or (last and v == first):
                continue
            e = (cur, v) if cur < v else (v, cur)
            q = mult.get(e, 0)
            ddef = 1 if q == 0 else (-1 if q == 1 else 0)
            if prune_single_edges and state["deficit"] + ddef > steps_left:
                continue
            mult[e] = q + 1
            state["deficit"] += ddef
            rec(pos + 1, first, v)
            state["deficit"] -= ddef
            if q == 0:
                del mult[e]
            else:
                mult[e] = q

    for s in range(n):
        rec(1, s, s)


def _check_budget(n: int, k: int) -> None:
    if k < 1:
        raise ValueError("walk length must be positive")
    if n**k > ENUM_BUDGET:
        raise WalkBudgetError(f"n**k = {n}**{k} exceeds enumeration budget {ENUM_BUDGET}")


def exact_trace_moment(pm: ProbabilityMatrix, k: int, good_only: bool = False) -> float:
    """E(tr(B^k)) for B = A - Abar, summed exactly over closed walks.

    Each walk contributes the product over its distinct edges of the
    centered-Bernoulli moment E(b_e^q_e).  ``good_only`` restricts the sum to
    walks without multiplicity-1 edges; the result is identical because those
    walks contribute exactly zero.
    """
    n = pm.n
    _check_budget(n, k)
    p = pm.p
    mom = np.empty((n, n, k + 1))
    for q in range(k + 1):
        mom[:, :, q] = p * (1.0 - p) ** q + (1.0 - p) * (-p) ** q
    total = 0.0

    def leaf(mult: dict[tuple[int, int], int]) -> None:
        nonlocal total
        term = 1.0
        for (a, b), q in mult.items():
            term *= mom[a, b, q]
            if term == 0.0:
                return
        total += term

    _scan_closed_walks(n, k, leaf, prune_single_edges=good_only)
    return total


def walk_weight_bound(pm: ProbabilityMatrix, k: int) -> float:
    """Sum over good closed walks of prod over distinct edges of sigma_e^2.

    With sigma_e^2 = p_e (1 - p_e), this dominates |E(tr(B^k))| term by term.
    """
    n = pm.n
    _check_budget(n, k)
    sigma2 = pm.p * (1.0 - pm.p)
    total = 0.0

    def leaf(mult: dict[tuple[int, int], int]) -> None:
        nonlocal total
        term = 1.0
        for (a, b), _q in mult.items():
            term *= sigma2[a, b]
            if term == 0.0:
                return
        total += term

    _scan_closed_walks(n, k, leaf, prune_single_edges=True)
    return total


def census_table(k_max: int, n: int | None = None) -> list[dict]:
    """Rows (k, p, count, fk_bound, vu_bound) for all 2 <= k <= k_max, valid p.

    The classical bound needs a vertex-universe size; its column is only
    filled when ``n`` is given (and then uses the full-count normalization
    against count * (n)_p).
    """
    if k_max < 2:
        raise ValueError("k_max must be >= 2")
    if k_max > 10:
        raise WalkBudgetError("census table budget is k_max <= 10")
    rows = []
    for k in range(2, k_max + 1):
        for p in range(2, k // 2 + 2):
            census = enumerate_canonical(k, p)
            fk = fk_bound(n, k, p) if n is not None and n >= p else None
            rows.append(
                {
                    "k": k,
                    "p": p,
                    "count": census.count,
                    "fk_bound": fk,
                    "vu_bound": vu_bound(k, p),
                }
            )
    return rows
