from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import random_corpus
from nbwalk.errors import NonPositiveWeight
from nbwalk.graph import FIXTURES, GnpLike, adjacency_matrix, generate_test_graph, load_fixture
from nbwalk.edgespace import (
    build_edge_space,
    check_weights,
    default_u_grid,
    degree_weights,
    op_B,
    op_P_tilde,
    op_S,
    op_T,
    op_tau,
    op_weighted,
    unit_weights,
    verify_identities,
)

EXPECTED_KEYS = {
    "B=ST-tau",
    "A=TS",
    "D=T tau S",
    "P=S_wT_w-tau_w",
    "T_wS_w=WAW",
    "T_w tau_w S_w=D_w",
    "(I-uP)(I-u tau_w)",
    "intertwining S_w/T_w",
}


def test_canonical_ordering_diamond():
    es = build_edge_space(load_fixture("diamond"))
    pairs = list(zip(es.source.tolist(), es.target.tolist()))
    assert pairs == sorted(pairs)
    assert pairs[:3] == [(0, 1), (0, 2), (1, 0)]
    assert es.size == 10
    assert list(es.outgoing(1)) == [2, 3, 4]


@pytest.mark.parametrize("name", FIXTURES)
def test_reversal_is_a_fixed_point_free_involution(name):
    es = build_edge_space(load_fixture(name))
    r = es.reversal
    assert np.array_equal(r[r], np.arange(es.size))
    assert np.all(r != np.arange(es.size))
    assert np.array_equal(es.source[r], es.target)


@pytest.mark.parametrize("name", FIXTURES)
def test_B_and_P_structure(name):
    g = load_fixture(name)
    es = build_edge_space(g)
    B = op_B(es)
    P = op_P_tilde(es)
    d_head = g.degrees[es.target]
    assert np.array_equal(B.sum(axis=1), d_head - 1)
    assert np.allclose(P.sum(axis=1), 1.0)
    assert np.allclose(P.sum(axis=0), 1.0)
    assert np.allclose(P, B / (d_head - 1)[:, None])
    # never step straight back
    assert np.all(B[np.arange(es.size), es.reversal] == 0)


def test_incidence_shapes_and_entries():
    g = load_fixture("diamond")
    es = build_edge_space(g)
    S, T, tau = op_S(es), op_T(es), op_tau(es)
    assert S.shape == (10, 4) and T.shape == (4, 10)
    assert np.array_equal(S.sum(axis=1), np.ones(10))
    assert np.array_equal(T.sum(axis=0), np.ones(10))
    assert np.array_equal(tau, tau.T) and np.array_equal(tau @ tau, np.eye(10))


def _nb_walk_counts(g, k):
    """Count non-backtracking vertex walks x0 x1 ... x_{k+1} by direct enumeration."""
    es = build_edge_space(g)
    idx = es.index
    counts = np.zeros((es.size, es.size), dtype=int)
    for e in range(es.size):
        walks = [[int(es.source[e]), int(es.target[e])]]
        for _ in range(k):
            walks = [w + [z] for w in walks for z in g.adjacency[w[-1]] if z != w[-2]]
        for w in walks:
            counts[e, idx[(w[-2], w[-1])]] += 1
    return counts


@pytest.mark.parametrize("name", ["diamond", "bowtie", "k4", "k23"])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_B_powers_count_nb_walks(name, k):
    g = load_fixture(name)
    B = op_B(build_edge_space(g)).astype(int)
    assert np.array_equal(np.linalg.matrix_power(B, k), _nb_walk_counts(g, k))


@pytest.mark.parametrize("name", FIXTURES)
@pytest.mark.parametrize("mode", ["unit", "degree", "random"])
def test_identities_on_fixtures(name, mode):
    g = load_fixture(name)
    es = build_edge_space(g)
    if mode == "unit":
        w = unit_weights(g)
    elif mode == "degree":
        w = degree_weights(g)
    else:
        w = np.random.default_rng(len(name)).uniform(0.2, 3.0, g.n)
    report = verify_identities(es, w)
    assert set(report.residuals) == EXPECTED_KEYS
    assert report.passed, report.residuals


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(5, 12))
def test_identities_property(seed, n):
    g = generate_test_graph(GnpLike(n, 0.5), seed)
    w = np.random.default_rng(seed).uniform(0.1, 5.0, g.n)
    assert verify_identities(build_edge_space(g), w).passed


def test_degree_weights_reproduce_P_tilde():
    for g in random_corpus(10, seed=3):
        es = build_edge_space(g)
        ops = op_weighted(es, degree_weights(g))
        assert np.max(np.abs(ops.P - op_P_tilde(es))) < 1e-15
        assert np.array_equal(ops.B, op_B(es))
        assert np.allclose(ops.A_w, adjacency_matrix(g) / np.sqrt(np.outer(g.degrees - 1, g.degrees - 1)))


def test_weighted_tau_is_not_symmetric_for_uneven_weights():
    g = load_fixture("diamond")
    ops = op_weighted(build_edge_space(g), np.array([1.0, 2.0, 3.0, 4.0]))
    assert not np.allclose(ops.tau_w, ops.tau_w.T)
    assert verify_identities(build_edge_space(g), ops.weights, ops=ops).passed


def test_unit_weighted_tau_is_tau():
    g = load_fixture("k4")
    es = build_edge_space(g)
    assert np.array_equal(op_weighted(es, unit_weights(g)).tau_w, op_tau(es))


@pytest.mark.parametrize("bad", [[1, 1, 0, 1], [1, -2, 1, 1], [1, np.inf, 1, 1], [1, 1, 1]])
def test_non_positive_weights_rejected(bad):
    g = load_fixture("diamond")
    with pytest.raises((NonPositiveWeight, ValueError)):
        check_weights(g, np.array(bad, dtype=float))


def test_default_u_grid():
    u = default_u_grid()
    assert len(u) == 21 and u[0] == -0.5 and u[-1] == 0.5 and 0.0 in u


def test_singular_u_values_are_skipped():
    # with unit weights I + u tau is singular exactly at u = +-1
    g = load_fixture("triangle")
    es = build_edge_space(g)
    rep = verify_identities(es, unit_weights(g), u_grid=[-1.0, 0.3, 1.0])
    assert set(rep.skipped_u) == {-1.0, 1.0}
    assert rep.passed


def test_corrupted_operator_fails_verification():
    g = load_fixture("diamond")
    es = build_edge_space(g)
    ops = op_weighted(es, degree_weights(g))
    P = ops.P.copy()
    P[0, 3] += 0.25
    bad = replace(ops, P=P)
    assert not verify_identities(es, ops.weights, ops=bad).passed
