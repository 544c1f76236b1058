import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rgspectra import models, rng, walks
from rgspectra.walks import (
    WalkBudgetError,
    centered_bernoulli_moment,
    count_full,
    enumerate_canonical,
    exact_trace_moment,
    fk_bound,
    s_term,
    trace_bound,
    vu_bound,
    walk_weight_bound,
)


def brute_force_canonical_count(k, p):
    """Filter all p^(k-1) interior assignments; the slow, obviously-right oracle."""
    count = 0
    for tail in itertools.product(range(1, p + 1), repeat=k - 1):
        seq = (1,) + tail
        if any(seq[i] == seq[(i + 1) % k] for i in range(k)):
            continue
        first_seen = list(dict.fromkeys(seq))
        if first_seen != list(range(1, p + 1)):
            continue
        mult = {}
        for i in range(k):
            a, b = seq[i], seq[(i + 1) % k]
            e = (min(a, b), max(a, b))
            mult[e] = mult.get(e, 0) + 1
        if min(mult.values()) >= 2:
            count += 1
    return count


# --- canonical enumeration ---------------------------------------------------


def test_census_spot_values():
    c22 = enumerate_canonical(2, 2)
    assert c22.count == 1 and c22.canonical_walks[0].vertices == (1, 2)
    c43 = enumerate_canonical(4, 3)
    assert c43.count == 2
    assert {w.vertices for w in c43.canonical_walks} == {(1, 2, 1, 3), (1, 2, 3, 2)}
    assert enumerate_canonical(4, 4).count == 0


def test_census_matches_brute_force():
    for k in range(2, 9):
        for p in range(2, k // 2 + 2):
            assert enumerate_canonical(k, p).count == brute_force_canonical_count(k, p)


def test_census_walks_are_good_and_canonical():
    for k, p in [(6, 3), (8, 4), (9, 3), (10, 5)]:
        census = enumerate_canonical(k, p)
        seen = set()
        for w in census.canonical_walks:
            assert w.vertices not in seen
            seen.add(w.vertices)
            assert min(w.edge_multiplicities.values()) >= 2
            assert sum(w.edge_multiplicities.values()) == k
            seq = w.vertices
            assert all(seq[i] != seq[(i + 1) % k] for i in range(k))
            assert list(dict.fromkeys(seq)) == list(range(1, p + 1))


def test_census_rejects_bad_arguments():
    with pytest.raises(ValueError):
        enumerate_canonical(1, 2)
    with pytest.raises(ValueError):
        enumerate_canonical(4, 1)


# --- counting bounds ----------------------------------------------------------


def test_count_full_values():
    assert count_full(5, 2, 2) == 20
    assert count_full(10, 4, 3) == 1440
    assert count_full(3, 4, 4) == 0


def test_fk_bound_values():
    assert fk_bound(10, 4, 3) == 1440.0
    assert fk_bound(5, 2, 2) == 20.0
    with pytest.raises(ValueError):
        fk_bound(3, 4, 4)  # n < p
    with pytest.raises(ValueError):
        fk_bound(10, 2, 3)  # k < 2p - 2


def test_vu_bound_values():
    assert vu_bound(4, 3) == 32.0
    assert vu_bound(2, 2) == 8.0
    with pytest.raises(ValueError):
        vu_bound(4, 4)


def test_bound_chain_up_to_k10():
    n = 12
    for k in range(2, 11):
        for p in range(2, k // 2 + 2):
            census = enumerate_canonical(k, p)
            assert census.count <= vu_bound(k, p)
            assert count_full(n, k, p, census) <= fk_bound(n, k, p)


# --- S terms and the trace bound ----------------------------------------------


def test_s_term_top_index_closed_form():
    # at p = k/2 + 1 the term collapses to n * 2^(k+1) * Delta^(k/2)
    for k in (2, 4, 6, 8):
        for n, delta in [(5, 3.0), (100, 64.0)]:
            top = k // 2 + 1
            assert s_term(n, k, top, delta) == pytest.approx(
                n * 2 ** (k + 1) * delta ** (k / 2), rel=1e-12
            )


def test_s_term_ratio_sweep():
    for k in (4, 6, 8):
        delta = 32.0 * k**4
        top = k // 2 + 1
        for p in range(3, top + 1):
            assert s_term(7, k, p - 1, delta) <= (16 * k**4 / delta) * s_term(
                7, k, p, delta
            ) * (1 + 1e-12)
        total = sum(s_term(7, k, p, delta) for p in range(2, top + 1))
        assert total < 2 * s_term(7, k, top, delta)


def test_trace_bound_values():
    assert trace_bound(6, 4, 2) == (1536.0, False)
    assert trace_bound(1, 2, 1) == (16.0, False)
    value, ok = trace_bound(10, 2, 512)
    assert value == 81920.0 and ok
    with pytest.raises(ValueError):
        trace_bound(4, 3, 2.0)


# --- exact trace moments -------------------------------------------------------


def test_moment_helper():
    assert centered_bernoulli_moment(0.3, 1) == 0.0
    assert centered_bernoulli_moment(0.3, 2) == pytest.approx(0.21)
    assert centered_bernoulli_moment(0.0, 5) == 0.0


def test_exact_moment_deterministic_model_vanishes():
    pm = models.probability_matrix([[0, 1, 0], [1, 0, 1], [0, 1, 0]])
    for k in (2, 3, 4, 5, 6):
        assert exact_trace_moment(pm, k) == 0.0


@pytest.mark.parametrize("p", [0.2, 0.5, 0.9])
def test_exact_moment_single_edge_closed_forms(p):
    pm = models.probability_matrix([[0.0, p], [p, 0.0]])
    assert exact_trace_moment(pm, 2) == pytest.approx(2 * p * (1 - p), abs=1e-15)
    assert exact_trace_moment(pm, 4) == pytest.approx(
        2 * (p * (1 - p) ** 4 + (1 - p) * p**4), abs=1e-15
    )
    assert walk_weight_bound(pm, 2) == pytest.approx(2 * p * (1 - p), abs=1e-15)


def test_walk_weight_bound_zero_model():
    assert walk_weight_bound(models.probability_matrix(np.zeros((3, 3))), 4) == 0.0


def test_good_only_filter_is_lossless():
    rs = np.random.default_rng(8)
    for n in (3, 4):
        p = rs.random((n, n))
        p = (p + p.T) / 2
        np.fill_diagonal(p, 0.0)
        pm = models.probability_matrix(p)
        for k in (2, 3, 4, 5, 6):
            full = exact_trace_moment(pm, k)
            good = exact_trace_moment(pm, k, good_only=True)
            assert full == good


def test_moment_dominated_by_weight_bound():
    rs = np.random.default_rng(9)
    for n in (2, 3, 4, 5, 6):
        for _ in range(3):
            p = rs.random((n, n))
            p = (p + p.T) / 2
            np.fill_diagonal(p, 0.0)
            pm = models.probability_matrix(p)
            for k in (2, 4, 6):
                assert abs(exact_trace_moment(pm, k)) <= walk_weight_bound(pm, k) + 1e-12


def test_odd_moments_exist():
    # zero diagonals forbid loops but not odd-length good walks (k = 9 triangle
    # walks traverse each edge three times); no parity claim holds in general
    assert enumerate_canonical(9, 3).count > 0
    pm = models.probability_matrix(0.3 * (1 - np.eye(3)))
    assert exact_trace_moment(pm, 9) != 0.0


def test_budget_guard():
    pm = models.erdos_renyi(30, 0.5)
    with pytest.raises(WalkBudgetError):
        exact_trace_moment(pm, 8)
    with pytest.raises(WalkBudgetError):
        walk_weight_bound(pm, 8)


@given(st.integers(0, 10**6))
@settings(max_examples=20, deadline=None)
def test_moment_bound_property(seed):
    rs = np.random.default_rng(seed)
    n = int(rs.integers(2, 5))
    p = rs.random((n, n))
    p = (p + p.T) / 2
    np.fill_diagonal(p, 0.0)
    pm = models.probability_matrix(p)
    k = int(rs.choice([2, 4]))
    assert abs(exact_trace_moment(pm, k)) <= walk_weight_bound(pm, k) + 1e-12


def test_monte_carlo_cross_check():
    # sample mean of tr(B^k) over 1e5 seeded draws vs. the exact enumeration
    pm = models.probability_matrix([[0, 0.3, 0.6], [0.3, 0, 0.2], [0.6, 0.2, 0]])
    trials = 10**5
    seeds = np.array([rng.derive_seed(99, t) for t in range(trials)], dtype=np.uint64)
    iu, ju = np.triu_indices(3, 1)
    u = rng.uniform_block(seeds, iu.size)
    bits = u < pm.p[iu, ju]
    b = np.zeros((trials, 3, 3))
    b[:, iu, ju] = bits - pm.p[iu, ju]
    b[:, ju, iu] = b[:, iu, ju]
    # consistency with the public sampler on the first sub-seed
    gs = models.sample(pm, int(seeds[0]))
    assert np.array_equal(gs.adj[iu, ju], bits[0].astype(np.int8))
    ev = np.linalg.eigvalsh(b)
    for k in (2, 4):
        traces = (ev**k).sum(axis=1)
        exact = exact_trace_moment(pm, k)
        se = traces.std(ddof=1) / math.sqrt(trials)
        assert abs(traces.mean() - exact) <= 5 * se


def test_census_table_shape():
    rows = walks.census_table(4, n=12)
    assert [(r["k"], r["p"]) for r in rows] == [(2, 2), (3, 2), (4, 2), (4, 3)]
    assert rows[0]["count"] == 1 and rows[0]["vu_bound"] == 8.0
    assert rows[-1]["count"] == 2 and rows[-1]["vu_bound"] == 32.0
    no_n = walks.census_table(2)
    assert no_n[0]["fk_bound"] is None
    with pytest.raises(WalkBudgetError):
        walks.census_table(11)
