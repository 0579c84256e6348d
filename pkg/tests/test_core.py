import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cspaceviz.core import (
    DiscretizationSpec, PerturbationSpec, apply_epsilon, bin_center, build_tree, discretize,
    duplicate_ranks, subsample,
)
from cspaceviz.exceptions import InputError
from cspaceviz.planar import Dataset

from oracles import duplicate_groups_bruteforce

PI = math.pi


@pytest.mark.parametrize("theta, n_d, expected", [(-PI, 4, 0), (0.0, 4, 2), (PI, 4, 3), (0.1, 500, 257),
                                                  (2.0, 500, 409)])
def test_discretize_examples(theta, n_d, expected):
    assert discretize(theta, n_d) == expected


@pytest.mark.parametrize("theta", [PI + 1e-9, -4.0, float("nan")])
def test_discretize_rejects_out_of_range(theta):
    with pytest.raises(InputError):
        discretize(theta, 4)


def test_bin_center_examples():
    assert bin_center(0, 2) == pytest.approx(-PI / 2)
    assert bin_center(1, 2) == pytest.approx(PI / 2)
    assert abs(bin_center(discretize(0.1, 500), 500) - 0.1) <= PI / 500
    with pytest.raises(InputError):
        bin_center(2, 2)
    with pytest.raises(InputError):
        bin_center(-1, 2)


@settings(max_examples=3000)
@given(st.floats(-PI, PI), st.integers(1, 20_000))
def test_bin_residual_bound(theta, n_d):
    # on a bin edge the exact residual equals the bound; allow representation error only
    assert abs(bin_center(discretize(theta, n_d), n_d) - theta) <= PI / n_d + 4 * np.spacing(PI)


def test_discretize_at_bin_edges_consistent_with_centers():
    n_d = 7
    edges = -PI + np.arange(n_d) * (2 * PI / n_d)
    assert list(discretize(edges, n_d)) == list(range(n_d))


def test_build_tree_example():
    ds = Dataset(np.array([[0.1, 0.5], [0.1, -0.5], [2.0, 0.2]]))
    tree = build_tree(ds, 0, DiscretizationSpec(500))
    assert tree.children == {257: [(0.5, 0), (-0.5, 1)], 409: [(0.2, 2)]}


def test_build_tree_degenerate_cases():
    one = build_tree(Dataset(np.array([[0.3, -0.3]])), 0, DiscretizationSpec(10))
    assert len(one.children) == 1 and len(one) == 1
    same = Dataset(np.column_stack([np.full(6, 0.01), np.linspace(-3, 3, 6)]))
    tree = build_tree(same, 0, DiscretizationSpec(10))
    assert len(tree.children) == 1 and len(next(iter(tree.children.values()))) == 6


def test_build_tree_rejects_bad_index():
    ds = Dataset(np.zeros((3, 3)))
    for i in (-1, 2, 5):
        with pytest.raises(InputError):
            build_tree(ds, i, DiscretizationSpec(10))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 60), st.integers(2, 5), st.integers(1, 200))
def test_tree_partition_and_permutation_invariance(seed, m, n, n_d):
    rng = np.random.default_rng(seed)
    X = rng.uniform(-PI, PI, (m, n))
    spec = DiscretizationSpec(n_d)
    perm = rng.permutation(m)
    for i in range(n - 1):
        tree = build_tree(Dataset(X), i, spec)
        assert len(tree) == m
        for b, kids in tree.children.items():
            assert [k for _, k in kids] == sorted(k for _, k in kids)
            assert all(discretize(X[k, i], n_d) == b for _, k in kids)
        shuffled = build_tree(Dataset(X[perm]), i, spec)
        assert set(shuffled.children) == set(tree.children)
        for b in tree.children:
            assert sorted(t for t, _ in shuffled.children[b]) == sorted(t for t, _ in tree.children[b])


def test_epsilon_identity_without_shared_child_bins():
    # child bins all distinct
    X = np.array([[-3.0, -2.0], [-1.0, 0.0], [1.0, 2.0]])
    ds = Dataset(X)
    out = apply_epsilon(ds, DiscretizationSpec(10), PerturbationSpec(0.05))
    np.testing.assert_array_equal(out.samples, X)


def test_epsilon_two_samples_shared_child_bin():
    X = np.array([[-2.0, 0.05], [2.0, 0.06]])
    spec = DiscretizationSpec(50)
    assert duplicate_groups_bruteforce(X.tolist(), 50) == [0, 1]
    out = apply_epsilon(Dataset(X), spec, PerturbationSpec(0.01))
    np.testing.assert_array_equal(out.samples[0], X[0])
    np.testing.assert_allclose(np.abs(out.samples[1] - X[1]), 0.01, rtol=0, atol=1e-15)


def test_epsilon_rejects_too_large():
    with pytest.raises(InputError):
        apply_epsilon(Dataset(np.zeros((2, 2))), DiscretizationSpec(10), PerturbationSpec(PI / 10))
    with pytest.raises(InputError):
        PerturbationSpec(-0.1)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 40), st.integers(2, 4), st.integers(2, 30))
def test_duplicate_ranks_match_bruteforce(seed, m, n, n_d):
    X = np.random.default_rng(seed).uniform(-PI, PI, (m, n))
    assert duplicate_ranks(X, n_d).tolist() == duplicate_groups_bruteforce(X.tolist(), n_d)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 80), st.integers(2, 5), st.integers(1, 100),
       st.floats(0.0, 0.999))
def test_epsilon_bound_and_bin_stability(seed, m, n, n_d, frac):
    rng = np.random.default_rng(seed)
    X = rng.uniform(-PI, PI, (m, n))
    # force duplicates and boundary angles
    X[: m // 2, 1] = X[0, 1]
    X[rng.random((m, n)) < 0.05] = PI
    X[rng.random((m, n)) < 0.05] = -PI
    eps = frac * PI / n_d
    spec = DiscretizationSpec(n_d)
    out = apply_epsilon(Dataset(X), spec, PerturbationSpec(eps)).samples
    assert np.max(np.abs(out - X)) <= eps
    assert np.all(np.abs(out) <= PI)
    np.testing.assert_array_equal(discretize(out, n_d), discretize(X, n_d))


def test_subsample_examples():
    X = np.random.default_rng(0).uniform(-PI, PI, (10, 2))
    ds = Dataset(X)
    assert subsample(ds, 1.0, 3) == ds
    half = subsample(ds, 0.5, 3)
    assert len(half) == 5
    rows = {tuple(r) for r in X}
    assert all(tuple(r) in rows for r in half.samples)
    idx = [np.flatnonzero((X == r).all(axis=1))[0] for r in half.samples]
    assert idx == sorted(idx)
    assert subsample(ds, 0.5, 3) == half
    for bad in (0.0, 1.5, -0.2):
        with pytest.raises(InputError):
            subsample(ds, bad, 0)
