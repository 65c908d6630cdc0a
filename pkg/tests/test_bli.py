import numpy as np
import pytest
from hypothesis import given, strategies as st

from warpsem import bli
from warpsem.beliefs import GaussianBelief

T = 0.002


def _kalman_gain_oracle(q, r, n=100_000):
    # plain scalar Riccati iteration from a diffuse start
    var = 1e6
    for _ in range(n):
        pred = var + q
        k = pred / (pred + r)
        var = (1 - k) * pred
    return k


class TestConfig:
    def test_noise_settling(self):
        cfg = bli.config_from_tau90(0.7, T)
        # 0.002 / (0.002 + 0.7 / 2.3) at 30 digits
        assert cfg.lam == pytest.approx(0.00652852682372978, rel=1e-13)

    def test_speech_settling(self):
        cfg = bli.config_from_tau90(0.005, T)
        assert cfg.lam == pytest.approx(0.479166666666667, rel=1e-13)

    def test_process_variance(self):
        cfg = bli.config_from_lambda(0.5)
        assert cfg.process_variance == 0.5
        assert cfg.observation_variance == 1.0

    def test_invalid(self):
        for tau, t in [(0.0, T), (-1.0, T), (0.1, 0.0)]:
            with pytest.raises(ValueError):
                bli.config_from_tau90(tau, t)
        for lam in (0.0, 1.0, 1.5):
            with pytest.raises(ValueError):
                bli.config_from_lambda(lam)

    @given(st.floats(1e-4, 10.0))
    def test_lambda_in_unit_interval(self, tau):
        cfg = bli.config_from_tau90(tau, T)
        assert 0 < cfg.lam < 1
        assert cfg.process_variance == pytest.approx(cfg.lam ** 2 / (1 - cfg.lam), rel=1e-14)


class TestPredictUpdate:
    def test_predict(self):
        cfg = bli.config_from_lambda(0.5)
        p = bli.predict(bli.BliState(GaussianBelief(0.0, 1.0)), cfg)
        assert (p.mean, p.variance) == (0.0, 1.5)
        p = bli.predict(bli.BliState(GaussianBelief(2.0, 0.1)), cfg)
        assert p.mean == 2.0 and p.variance == pytest.approx(0.6, abs=1e-15)

    def test_predict_static(self):
        cfg = bli.BliConfig(lam=0.5, process_variance=0.0)
        prior = GaussianBelief(1.0, 0.3)
        assert bli.predict(bli.BliState(prior), cfg) == prior

    def test_update_equal_split(self):
        state, k = bli.update(GaussianBelief(0.0, 1.0), GaussianBelief(1.0, 1.0))
        assert (state.mean, state.variance, k) == (0.5, 0.5, 0.5)

    def test_update_flat(self):
        prior = GaussianBelief(0.7, 2.0)
        state, k = bli.update(prior, GaussianBelief(5.0, np.inf))
        assert k == 0.0
        assert state.mean == prior.mean and state.variance == prior.variance

    def test_update_precision_arithmetic(self):
        state, k = bli.update(GaussianBelief(0.0, 3.0), GaussianBelief(4.0, 1.0))
        assert state.mean == pytest.approx(3.0, abs=1e-15)
        assert state.variance == pytest.approx(0.75, abs=1e-15)
        assert k == pytest.approx(0.75, abs=1e-15)

    @given(st.floats(-10, 10), st.floats(1e-2, 1e2), st.floats(-10, 10), st.floats(1e-2, 1e2))
    def test_kalman_mean_form(self, m, v, x, r):
        state, k = bli.update(GaussianBelief(m, v), GaussianBelief(x, r))
        assert state.mean == pytest.approx(m + k * (x - m), rel=1e-12, abs=1e-12)
        assert state.variance == pytest.approx((1 - k) * v, rel=1e-12)

    def test_natural_form_matches(self):
        prior = GaussianBelief(np.array([0.0, 1.0, 2.0]), np.array([3.0, 0.5, 1.0]))
        prec = np.array([1.0, 0.0, 0.25])
        state = bli.update_natural(prior, prec, prec * np.array([4.0, 9.0, -2.0]))
        ref0, _ = bli.update(GaussianBelief(0.0, 3.0), GaussianBelief(4.0, 1.0))
        ref2, _ = bli.update(GaussianBelief(2.0, 1.0), GaussianBelief(-2.0, 4.0))
        np.testing.assert_allclose(state.mean, [ref0.mean, 1.0, ref2.mean], rtol=1e-14)
        np.testing.assert_allclose(state.variance, [ref0.variance, 0.5, ref2.variance], rtol=1e-14)


class TestSteadyState:
    @pytest.mark.parametrize("lam", [0.01, 0.1, 0.5, 0.9])
    def test_gain_equals_lambda(self, lam):
        cfg = bli.config_from_lambda(lam)
        k = bli.steady_state_gain(cfg)
        assert abs(k - lam) < 1e-10
        assert k == pytest.approx(_kalman_gain_oracle(cfg.process_variance, 1.0), abs=1e-12)

    def test_table_settings(self):
        for tau in (0.005, 0.7):
            cfg = bli.config_from_tau90(tau, T)
            assert abs(bli.steady_state_gain(cfg) - cfg.lam) < 1e-10

    def test_static_state(self):
        assert bli.steady_state_gain(bli.BliConfig(lam=0.5, process_variance=0.0)) == 0.0

    def test_non_convergence_raises(self):
        with pytest.raises(RuntimeError):
            bli.steady_state_gain(bli.config_from_lambda(0.001), max_iter=3)

    def test_steady_variance_closed_form(self):
        cfg = bli.config_from_lambda(0.3)
        state = bli.BliState(GaussianBelief(0.0, 10.0))
        for _ in range(2000):
            state, _ = bli.update(bli.predict(state, cfg), GaussianBelief(0.0, 1.0))
        assert state.variance == pytest.approx(bli.steady_state_variance(cfg), rel=1e-12)

    @given(st.floats(1e-3, 1e3))
    def test_variance_monotone_convergent(self, v0):
        cfg = bli.config_from_lambda(0.2)
        state = bli.BliState(GaussianBelief(0.0, v0))
        vs = []
        for _ in range(200):
            state, _ = bli.update(bli.predict(state, cfg), GaussianBelief(0.0, 1.0))
            vs.append(state.variance)
        d = np.diff(vs)
        assert np.all(d <= 1e-15) or np.all(d >= -1e-15)
        assert vs[-1] == pytest.approx(bli.steady_state_variance(cfg), rel=1e-9)


class TestLeakyIntegrator:
    def test_clamped_gain_matches_direct_filter(self):
        rng = np.random.default_rng(7)
        x = rng.standard_normal(10_000)
        cfg = bli.config_from_lambda(0.1)
        state = bli.BliState(GaussianBelief(0.0, bli.steady_state_variance(cfg)))
        means = np.empty_like(x)
        for k, xk in enumerate(x):
            state, _ = bli.update(bli.predict(state, cfg), GaussianBelief(xk, 1.0))
            means[k] = state.mean
        y = np.empty_like(x)
        prev = 0.0
        for k, xk in enumerate(x):
            prev = prev + 0.1 * (xk - prev)
            y[k] = prev
        np.testing.assert_allclose(means, y, atol=1e-12, rtol=0)

    @pytest.mark.parametrize("tau", [0.005, 0.05, 0.7])
    def test_step_settling(self, tau):
        cfg = bli.config_from_tau90(tau, T)
        state = bli.BliState(GaussianBelief(0.0, bli.steady_state_variance(cfg)))
        for k in range(1, 100_000):
            state, _ = bli.update(bli.predict(state, cfg), GaussianBelief(1.0, 1.0))
            if state.mean >= 0.9:
                break
        # tau / T is an integer block count; round away float residue
        assert abs(k - round(tau / T)) <= 2
