import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slacksvm.data import DataError, Dataset, SparseExample, parse_libsvm
from slacksvm.kernels import (GaussianKernel, LinearKernel,
                              PrecomputedGramKernel, kernel_from_spec)


def ex(values, label=1):
    values = np.asarray(values, dtype=np.float64)
    nz = np.flatnonzero(values)
    return SparseExample(nz, values[nz], label)


def test_linear_pair_is_dot_product():
    k = LinearKernel()
    assert k.pair(ex([1.0, 2.0]), ex([3.0, 4.0])) == pytest.approx(11.0)
    assert k.eval_count == 1


def test_linear_disjoint_support():
    k = LinearKernel()
    a = SparseExample([0], [1.0], 1)
    b = SparseExample([3], [2.0], -1)
    assert k.pair(a, b) == 0.0


def test_gaussian_pinned_value():
    # sigma^2 = 0.5, points at distance 1: exp(-1/(2*0.5)) = exp(-1).
    k = GaussianKernel(0.5)
    a = SparseExample([0], [1.0], 1)
    b = SparseExample([], [], 1)
    assert k.pair(a, b) == pytest.approx(np.exp(-1.0), rel=1e-12)


def test_gaussian_self_similarity_is_one():
    k = GaussianKernel(2.0)
    ds = parse_libsvm("+1 1:0.5 3:-2\n-1 2:4\n+1 1:1\n")
    assert np.array_equal(k.diag(ds), np.ones(3))
    for j in range(ds.n):
        assert k.row(ds, j)[j] == 1.0


def test_gaussian_requires_positive_bandwidth():
    with pytest.raises(ValueError):
        GaussianKernel(0.0)


@given(st.integers(0, 2**32), st.floats(0.1, 10.0))
@settings(max_examples=50, deadline=None)
def test_row_matches_pairs(seed, sigma_sq):
    rng = np.random.default_rng(seed)
    n, d = 8, 4
    x = rng.standard_normal((n, d))
    x[rng.random((n, d)) < 0.3] = 0.0
    labels = np.where(rng.random(n) < 0.5, 1, -1)
    ds = Dataset([ex(x[i], labels[i]) for i in range(n)], dimension=d)
    for kernel in (LinearKernel(), GaussianKernel(sigma_sq)):
        j = int(rng.integers(n))
        row = kernel.row(ds, j)
        for i in range(n):
            assert row[i] == pytest.approx(
                kernel.pair(ds.examples[i], ds.examples[j]), rel=1e-10, abs=1e-12)


def test_cross_matches_pairs():
    rng = np.random.default_rng(3)
    a = Dataset([ex(rng.standard_normal(3), 1) for _ in range(5)], dimension=3)
    b = Dataset([ex(rng.standard_normal(3), -1) for _ in range(4)], dimension=3)
    k = GaussianKernel(1.5)
    g = k.cross(a, [1, 3], b)
    assert g.shape == (2, 4)
    for r, i in enumerate((1, 3)):
        for j in range(4):
            assert g[r, j] == pytest.approx(
                k.pair(a.examples[i], b.examples[j]), rel=1e-10)


def test_eval_counter_is_exact():
    ds = parse_libsvm("+1 1:1\n-1 2:1\n+1 1:0.5 2:0.5\n")
    other = parse_libsvm("+1 1:2\n-1 2:3\n")
    k = LinearKernel()
    k.pair(ds.examples[0], ds.examples[1])
    k.row(ds, 0)
    k.diag(ds)
    k.cross(ds, [0, 2], other)
    assert k.eval_count == 1 + 3 + 3 + 2 * 2


def test_counter_never_resets():
    k = LinearKernel()
    before = k.eval_count
    k.pair(ex([1.0]), ex([1.0]))
    assert k.eval_count == before + 1


def test_mismatched_dimensions_align_on_common_prefix():
    # A model trained on low-dim data may score higher-dim inputs; extra
    # coordinates on either side contribute zero to linear products.
    a = Dataset([SparseExample([0], [2.0], 1)], dimension=1)
    b = Dataset([SparseExample([0, 4], [3.0, 7.0], 1)], dimension=5)
    k = LinearKernel()
    assert k.cross(a, [0], b)[0, 0] == pytest.approx(6.0)


def test_precomputed_gram_lookup():
    ds = parse_libsvm("+1 1:1\n-1 2:1\n")
    gram = np.array([[1.0, 0.25], [0.25, 1.0]])
    k = PrecomputedGramKernel(gram, ds)
    assert k.pair(ds.examples[0], ds.examples[1]) == 0.25
    assert np.array_equal(k.row(ds, 1), gram[:, 1])
    stranger = SparseExample([0], [1.0], 1)
    with pytest.raises(DataError):
        k.pair(ds.examples[0], stranger)


def test_precomputed_gram_shape_checked():
    ds = parse_libsvm("+1 1:1\n-1 2:1\n")
    with pytest.raises(DataError):
        PrecomputedGramKernel(np.eye(3), ds)


def test_kernel_from_spec():
    assert isinstance(kernel_from_spec("linear"), LinearKernel)
    g = kernel_from_spec("gaussian:0.5")
    assert isinstance(g, GaussianKernel) and g.sigma_sq == 0.5
    assert g.spec_string == "gaussian:0.5"
    for bad in ("rbf", "gaussian:", "gaussian:abc", ""):
        with pytest.raises(ValueError):
            kernel_from_spec(bad)
