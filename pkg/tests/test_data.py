import numpy as np
import pytest
from scipy import sparse

from smoothsvm.data import (augment_bias, build_dataset, build_gram,
                            dataset_from_arrays, rbf_kernel)
from smoothsvm.errors import (DimensionMismatch, EmptyDataset, LabelOutOfRange,
                              NonPositiveKernelWidth, ZeroRow)


def test_norms_single_row():
    d = build_dataset([([3, 4], 1)])
    assert d.row_inf_norms.tolist() == [4.0]
    assert d.row_sq_norms.tolist() == [25.0]


def test_norms_two_rows():
    d = build_dataset([([1, -2], 1), ([0.5, 0.5], -1)])
    np.testing.assert_array_equal(d.row_inf_norms, [2.0, 0.5])
    np.testing.assert_array_equal(d.row_sq_norms, [5.0, 0.5])


def test_norms_recompute_exactly():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(40, 7))
    d = dataset_from_arrays(X, np.sign(rng.normal(size=40)))
    np.testing.assert_array_equal(d.row_inf_norms, np.abs(X).max(axis=1))
    np.testing.assert_array_equal(d.row_sq_norms, np.einsum("ij,ij->i", X, X))
    np.testing.assert_allclose(d.row_sq_norms, (X * X).sum(axis=1), rtol=1e-14)


def test_zero_row_rejected():
    with pytest.raises(ZeroRow) as exc:
        build_dataset([([1, 0], 1), ([0, 0], 1)])
    assert exc.value.row == 1


def test_bad_inputs():
    with pytest.raises(EmptyDataset):
        build_dataset([])
    with pytest.raises(LabelOutOfRange):
        build_dataset([([1.0], 2)])
    with pytest.raises(DimensionMismatch):
        build_dataset([([1.0], 1), ([1.0, 2.0], -1)])


def test_arrays_are_read_only():
    d = build_dataset([([1.0, 2.0], 1)])
    with pytest.raises(ValueError):
        d.X[0, 0] = 5.0


def test_sparse_input_densified():
    X = sparse.csr_matrix(np.array([[0.0, 2.0], [1.0, 0.0]]))
    d = dataset_from_arrays(X, np.array([1.0, -1.0]))
    np.testing.assert_array_equal(d.X, [[0.0, 2.0], [1.0, 0.0]])


@pytest.mark.parametrize("X, expected, inf", [
    ([[3, 4]], [[3, 4, 1]], [4]),
    ([[0.2]], [[0.2, 1]], [1]),
    ([[-5, 2], [1, 1]], [[-5, 2, 1], [1, 1, 1]], [5, 1]),
])
def test_augment_bias(X, expected, inf):
    d = dataset_from_arrays(np.array(X, float), np.ones(len(X)))
    a = augment_bias(d)
    np.testing.assert_array_equal(a.X, expected)
    np.testing.assert_array_equal(a.row_inf_norms, inf)
    assert a.bias and a.n_features == d.n_features
    assert a.n_weights == d.n_weights + 1


def test_double_augment_is_visible():
    d = augment_bias(augment_bias(build_dataset([([2.0], 1)])))
    assert d.X.shape == (1, 3)


def test_gram_examples():
    same = build_gram(build_dataset([([1.0], 1), ([1.0], -1)]), 1.0)
    np.testing.assert_array_equal(same.kernel, np.ones((2, 2)))
    # a zero sample is not a valid Dataset row, so use the kernel directly
    K = rbf_kernel(np.array([[0.0], [1.0]]), np.array([[0.0], [1.0]]), 1.0)
    assert K[0, 1] == pytest.approx(np.exp(-1.0), rel=1e-15)
    g = build_gram(build_dataset([([1.0], 1), ([2.0], -1)]), 1.0)
    # effective matrix scales columns by the labels
    np.testing.assert_allclose(g.K, g.kernel * np.array([1.0, -1.0]))


def test_gram_default_width_is_feature_count():
    rng = np.random.default_rng(1)
    X = rng.normal(size=(6, 3))
    g = build_gram(dataset_from_arrays(X, np.ones(6)))
    assert g.width == 3
    np.testing.assert_allclose(g.kernel[0, 1], np.exp(-np.sum((X[0] - X[1]) ** 2) / 3))


def test_gram_symmetric_psd_unit_diagonal():
    rng = np.random.default_rng(2)
    d = dataset_from_arrays(rng.normal(size=(15, 4)), np.sign(rng.normal(size=15)))
    g = build_gram(d)
    np.testing.assert_allclose(g.kernel, g.kernel.T, atol=1e-10)
    np.testing.assert_array_equal(np.diag(g.kernel), np.ones(15))
    assert np.linalg.eigvalsh(g.kernel).min() >= -1e-8


def test_gram_rejects_bad_width():
    d = build_dataset([([1.0], 1)])
    with pytest.raises(NonPositiveKernelWidth):
        build_gram(d, 0.0)
    with pytest.raises(NonPositiveKernelWidth):
        rbf_kernel(d.X, d.X, -1.0)
