import numpy as np
import pytest

from emovid.normalize import (
    NormalizationConfig,
    apply_normalization,
    apply_range_scaler,
    apply_standardizer,
    fit_normalization,
    fit_range_scaler,
    fit_standardizer,
    normalize_pipeline,
    rootsift,
)


def test_fit_range_scaler_examples():
    params = fit_range_scaler(np.array([[3.0, -1.0]]))
    np.testing.assert_array_equal(params.mins, params.maxs)
    params = fit_range_scaler(np.array([[-2.0], [0.0], [2.0]]))
    assert (params.mins[0], params.maxs[0]) == (-2.0, 2.0)
    with pytest.raises(ValueError, match="empty"):
        fit_range_scaler([])
    with pytest.raises(ValueError, match="inconsistent"):
        fit_range_scaler([np.zeros(3), np.zeros(4)])


def test_fit_range_scaler_matches_linear_scan_oracle():
    rng = np.random.default_rng(55)
    matrix = rng.standard_normal((50, 8))
    params = fit_range_scaler(matrix)
    for j in range(8):
        lo = hi = matrix[0, j]
        for i in range(50):
            lo = min(lo, matrix[i, j])
            hi = max(hi, matrix[i, j])
        assert params.mins[j] == lo and params.maxs[j] == hi


def test_apply_range_scaler_examples():
    params = fit_range_scaler(np.array([[-2.0], [2.0]]))
    assert apply_range_scaler(np.array([1.0]), params)[0] == 0.5
    assert apply_range_scaler(np.array([3.0]), params)[0] == 1.0  # clipped
    degenerate = fit_range_scaler(np.array([[5.0]]))
    assert apply_range_scaler(np.array([5.0]), degenerate)[0] == 0.0
    with pytest.raises(ValueError, match="dimension mismatch"):
        apply_range_scaler(np.zeros(2), params)


def test_range_scaler_endpoints_attained_on_train():
    rng = np.random.default_rng(9)
    matrix = rng.standard_normal((20, 6))
    params = fit_range_scaler(matrix)
    scaled = apply_range_scaler(matrix, params)
    assert (scaled >= -1.0).all() and (scaled <= 1.0).all()
    np.testing.assert_array_equal(scaled.min(axis=0), -np.ones(6))
    np.testing.assert_array_equal(scaled.max(axis=0), np.ones(6))


def test_rootsift_examples():
    np.testing.assert_array_equal(rootsift(np.array([1.0])), [1.0])
    out = rootsift(np.full(9, 3.0))
    np.testing.assert_allclose(out, np.full(9, 1.0 / 3.0), rtol=1e-15)
    # hand evaluation of sign(x)*sqrt(|x|/||x||_1) for x=[4,-1]
    out = rootsift(np.array([4.0, -1.0]))
    np.testing.assert_allclose(out, [0.8944271909999159, -0.4472135954999579], rtol=1e-15)
    assert abs(np.linalg.norm(out) - 1.0) <= 1e-12
    np.testing.assert_array_equal(rootsift(np.zeros(4)), np.zeros(4))


def test_rootsift_unit_norm_and_sign_preservation():
    rng = np.random.default_rng(12)
    for _ in range(50):
        dim = int(rng.integers(1, 200))
        x = rng.standard_normal(dim) * rng.uniform(1e-3, 1e3)
        y = rootsift(x)
        assert abs(np.linalg.norm(y) - 1.0) <= 1e-9
        np.testing.assert_array_equal(np.sign(y), np.sign(x))
        assert np.argmax(np.abs(y)) == np.argmax(np.abs(x))


def test_fit_standardizer_examples():
    params = fit_standardizer(np.array([[0.0], [2.0]]))
    assert (params.means[0], params.stds[0]) == (1.0, 1.0)
    params = fit_standardizer(np.full((5, 2), 3.25))
    np.testing.assert_array_equal(params.means, [3.25, 3.25])
    np.testing.assert_array_equal(params.stds, [0.0, 0.0])
    with pytest.raises(ValueError, match="empty"):
        fit_standardizer([])


def test_fit_standardizer_matches_two_pass_oracle():
    rng = np.random.default_rng(77)
    matrix = rng.standard_normal((100, 5)) * 4 + 1
    params = fit_standardizer(matrix)
    for j in range(5):
        mean = sum(matrix[i, j] for i in range(100)) / 100.0
        var = sum((matrix[i, j] - mean) ** 2 for i in range(100)) / 100.0
        assert abs(params.means[j] - mean) <= 1e-12
        assert abs(params.stds[j] - np.sqrt(var)) <= 1e-12


def test_apply_standardizer_examples():
    params = fit_standardizer(np.array([[-1.0], [3.0]]))  # mean 1, std 2
    assert apply_standardizer(np.array([5.0]), params)[0] == 2.0
    degenerate = fit_standardizer(np.full((3, 1), 4.0))
    assert apply_standardizer(np.array([9.0]), degenerate)[0] == 0.0
    with pytest.raises(ValueError, match="dimension mismatch"):
        apply_standardizer(np.zeros(2), params)


def test_standardized_train_has_zero_mean_unit_std():
    rng = np.random.default_rng(31)
    matrix = rng.standard_normal((40, 7)) * 3 - 2
    params = fit_standardizer(matrix)
    out = apply_standardizer(matrix, params)
    np.testing.assert_allclose(out.mean(axis=0), np.zeros(7), atol=1e-9)
    np.testing.assert_allclose(out.std(axis=0), np.ones(7), atol=1e-9)


def test_normalize_pipeline_train_equals_others():
    rng = np.random.default_rng(4)
    matrix = rng.standard_normal((12, 5))
    train_out, others_out, params = normalize_pipeline(matrix, matrix)
    np.testing.assert_array_equal(train_out, others_out)
    assert params.range_scaler is not None and params.standardizer is not None


def test_normalize_pipeline_rootsift_stage_unit_norm():
    rng = np.random.default_rng(21)
    matrix = rng.standard_normal((15, 6))
    params = fit_normalization(matrix, NormalizationConfig(standardize=False))
    out = apply_normalization(matrix, params)
    norms = np.linalg.norm(out, axis=1)
    np.testing.assert_allclose(norms, np.ones(15), atol=1e-9)


def test_normalize_pipeline_single_train_video_maps_to_zero():
    rng = np.random.default_rng(2)
    train = rng.standard_normal((1, 8))
    others = rng.standard_normal((4, 8))
    train_out, others_out, _ = normalize_pipeline(train, others)
    np.testing.assert_array_equal(train_out, np.zeros((1, 8)))
    np.testing.assert_array_equal(others_out, np.zeros((4, 8)))


def test_normalize_pipeline_deterministic():
    rng = np.random.default_rng(66)
    train = rng.standard_normal((10, 4))
    others = rng.standard_normal((3, 4))
    a_train, a_others, _ = normalize_pipeline(train, others)
    b_train, b_others, _ = normalize_pipeline(train.copy(), others.copy())
    assert (a_train == b_train).all() and (a_others == b_others).all()


def test_normalization_toggles():
    rng = np.random.default_rng(14)
    matrix = rng.standard_normal((6, 3))
    params = fit_normalization(matrix, NormalizationConfig(False, False, False))
    np.testing.assert_array_equal(apply_normalization(matrix, params), matrix)
    assert params.range_scaler is None and params.standardizer is None
