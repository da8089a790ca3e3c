import numpy as np
import pytest

from slacksvm.data import SyntheticSpec, generate, parse_libsvm
from slacksvm.kernels import GaussianKernel, LinearKernel, kernel_from_spec
from slacksvm.model import (SolverError, deserialize_model, load_model,
                            save_model, score_batch, serialize_model)
from slacksvm.sbp import SbpConfig, rescale_check, sbp_init, sbp_step, sbp_train


def train_pair(n=60, seed=0, **cfg):
    ds = generate(SyntheticSpec(kind="margin_separable", n=n, dimension=2,
                                seed=seed, margin=0.3, radius=1.0))
    kernel = LinearKernel()
    config = SbpConfig(**{"nu": 0.0, "iterations": 200, "seed": 0, **cfg})
    return ds, kernel, config


class TestInit:
    def test_eta0_gaussian_is_one(self):
        ds = parse_libsvm("+1 1:3\n-1 2:4\n")
        state = sbp_init(ds, GaussianKernel(1.0), SbpConfig(nu=0.1, iterations=1))
        assert state.eta0 == 1.0

    def test_eta0_linear(self):
        # max ||x||^2 = 4 -> eta0 = 1/2
        ds = parse_libsvm("+1 1:2\n-1 1:1\n")
        state = sbp_init(ds, LinearKernel(), SbpConfig(nu=0.1, iterations=1))
        assert state.eta0 == 0.5

    def test_eta0_override(self):
        ds = parse_libsvm("+1 1:2\n")
        state = sbp_init(ds, LinearKernel(),
                         SbpConfig(nu=0.1, iterations=1, eta0_override=0.1))
        assert state.eta0 == 0.1

    def test_init_costs_n_evals(self):
        ds = parse_libsvm("+1 1:1\n-1 1:-1\n+1 2:1\n")
        k = LinearKernel()
        sbp_init(ds, k, SbpConfig(nu=0.0, iterations=1))
        assert k.eval_count == 3

    def test_bias_mode_needs_both_classes(self):
        ds = parse_libsvm("+1 1:1\n+1 1:2\n")
        with pytest.raises(SolverError):
            sbp_init(ds, LinearKernel(), SbpConfig(nu=0.0, iterations=1, use_bias=True))


def test_config_validation():
    with pytest.raises(ValueError):
        SbpConfig(nu=-0.1, iterations=10)
    with pytest.raises(ValueError):
        SbpConfig(nu=0.1, iterations=0)


def test_hand_traced_single_step():
    # One positive point at x=1, linear kernel, nu=0: gamma starts at 0,
    # the only index is sampled, alpha=[1], c=[1], r^2=1, no rescale.
    ds = parse_libsvm("+1 1:1.0\n")
    k = LinearKernel()
    config = SbpConfig(nu=0.0, iterations=1)
    state = sbp_init(ds, k, config)
    sbp_step(state, ds, k, config, np.random.default_rng(0))
    assert state.alpha.tolist() == [1.0]
    assert state.responses.tolist() == [1.0]
    assert state.norm_sq == 1.0
    assert state.t == 1


def test_step_cost_is_one_row():
    ds, kernel, config = train_pair(n=30)
    state = sbp_init(ds, kernel, config)
    before = kernel.eval_count
    sbp_step(state, ds, kernel, config, np.random.default_rng(1))
    assert kernel.eval_count - before == ds.n


def test_norm_never_exceeds_one():
    ds, kernel, config = train_pair(n=40, iterations=300)
    state = sbp_init(ds, kernel, config)
    rng = np.random.default_rng(config.seed)
    for _ in range(config.iterations):
        sbp_step(state, ds, kernel, config, rng)
        assert state.norm_sq <= 1.0 + 1e-9
        assert np.all(state.alpha >= 0.0)


def test_responses_consistent_with_alpha():
    ds, kernel, config = train_pair(n=50, iterations=250, nu=0.1)
    state = sbp_init(ds, kernel, config)
    rng = np.random.default_rng(config.seed)
    for _ in range(config.iterations):
        sbp_step(state, ds, kernel, config, rng)
    gram = np.array([[LinearKernel()._pair(a, b) for b in ds.examples]
                     for a in ds.examples])
    y = ds.labels
    recomputed = y * (gram @ (state.alpha * y))
    np.testing.assert_allclose(state.responses, recomputed, rtol=1e-6, atol=1e-9)
    assert state.norm_sq == pytest.approx(float(state.alpha @ recomputed), rel=1e-6)


def test_train_exact_eval_budget():
    ds, kernel, config = train_pair(n=35, iterations=120)
    sbp_train(ds, kernel, config)
    assert kernel.eval_count == ds.n * config.iterations + ds.n


def test_train_determinism():
    ds, _, config = train_pair(n=40, iterations=150, nu=0.05)
    m1, r1 = sbp_train(ds, LinearKernel(), config)
    m2, r2 = sbp_train(ds, LinearKernel(), config)
    assert np.array_equal(m1.alpha, m2.alpha)
    assert m1.bias == m2.bias
    assert r1.samples == r2.samples


def test_train_reaches_good_margin_on_two_points():
    # {(+1 at +1), (-1 at -1)}: optimal unit-norm margin is 1.
    ds = parse_libsvm("+1 1:1\n-1 1:-1\n")
    kernel = LinearKernel()
    config = SbpConfig(nu=0.0, iterations=100, seed=0)
    model, record = sbp_train(ds, kernel, config)
    # f(w_bar) is the final water level before rescaling; the rescaled
    # model therefore has margins >= 1 at hinge 0.
    assert record.samples[-1].empirical_hinge == pytest.approx(0.0)
    gram = np.array([[1.0, -1.0], [-1.0, 1.0]])
    margins = ds.labels * (gram @ (model.alpha * ds.labels))
    assert margins.min() >= 0.9  # objective >= 0.9 of the optimum


def test_support_size_bounded_by_iterations():
    ds, kernel, config = train_pair(n=50, iterations=1)
    model, _ = sbp_train(ds, kernel, config)
    assert model.support_size <= 1


def test_unseparable_all_negative_margin_errors():
    # Single mislabeled pair at the same point: every w gives gamma <= 0.
    ds = parse_libsvm("+1 1:1\n-1 1:1\n")
    with pytest.raises(SolverError, match="no positive margin"):
        sbp_train(ds, LinearKernel(), SbpConfig(nu=0.0, iterations=50, seed=0))


def test_bias_mode_handles_shifted_classes():
    # Classes separated only by an offset along a constant feature need the
    # unregularized bias to reach zero hinge.
    lines = []
    rng = np.random.default_rng(8)
    for _ in range(30):
        lines.append(f"+1 1:{rng.uniform(2.0, 3.0)!r}")
        lines.append(f"-1 1:{rng.uniform(0.5, 1.5)!r}")
    ds = parse_libsvm("\n".join(lines) + "\n")
    config = SbpConfig(nu=0.0, iterations=400, seed=1, use_bias=True)
    model, record = sbp_train(ds, LinearKernel(), config)
    scores = score_batch(model, ds, LinearKernel())
    assert np.all(ds.labels * scores > 0)
    assert model.bias != 0.0


class TestSerialization:
    def test_round_trip(self, tmp_path):
        ds, kernel, config = train_pair(n=25, iterations=80, nu=0.02)
        model, _ = sbp_train(ds, kernel, config)
        path = tmp_path / "m.model"
        save_model(model, path)
        again = load_model(path, dataset=ds)
        assert np.array_equal(model.alpha, again.alpha)
        assert again.bias == model.bias
        assert again.kernel_spec == model.kernel_spec
        assert again.use_bias == model.use_bias

    def test_bytes_are_deterministic(self):
        ds, _, config = train_pair(n=25, iterations=80)
        m1, _ = sbp_train(ds, LinearKernel(), config)
        m2, _ = sbp_train(ds, LinearKernel(), config)
        assert serialize_model(m1) == serialize_model(m2)

    def test_dataset_mismatch_detected(self):
        ds, kernel, config = train_pair(n=25, iterations=40)
        model, _ = sbp_train(ds, kernel, config)
        other = parse_libsvm("+1 1:1\n")
        with pytest.raises(ValueError):
            deserialize_model(serialize_model(model), dataset=other)


def test_rescale_check_reports_bounds():
    ds, kernel, config = train_pair(n=40, iterations=400)
    model, _ = sbp_train(ds, kernel, config)
    report = rescale_check(model, ds, LinearKernel(),
                           reference_norm=1.0 / 0.3, reference_loss=0.0,
                           eps_bar=0.1)
    assert report.norm_bound == pytest.approx((1.0 / 0.3) / (1.0 - 0.1 / 0.3))
    assert report.norm >= 0.0
    with pytest.raises(ValueError):
        rescale_check(model, ds, LinearKernel(), reference_norm=100.0,
                      reference_loss=0.0, eps_bar=1.0)
