"""Scikit-learn estimator contract and fitted attributes."""

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from fluidmimo import PathAngles, RateMaximizer, Scenario, SystemParams


def make_scenario(seed=0, n=4, m=4):
    rng = np.random.default_rng(seed)
    params = SystemParams.from_dbm(1.5, 15.0, 30.0, 3, 3)
    angles = PathAngles.random(3, 3, rng)
    return Scenario(
        params=params,
        angles=angles,
        region_half_width=2.25,
        min_spacing=0.75,
        num_tx=n,
        num_rx=m,
    )


class TestEstimatorContract:
    def test_get_params_roundtrip(self):
        est = RateMaximizer(design="rfa", epsilon=1e-4)
        params = est.get_params()
        assert params["design"] == "rfa"
        assert params["epsilon"] == 1e-4
        est.set_params(max_outer_iters=7)
        assert est.get_params()["max_outer_iters"] == 7

    def test_clone_preserves_params(self):
        est = RateMaximizer(design="fpa", probe_points_per_wavelength=8.0)
        cloned = clone(est)
        assert cloned.get_params() == est.get_params()

    def test_score_before_fit_raises(self):
        with pytest.raises(NotFittedError):
            RateMaximizer().score()

    def test_fit_requires_scenario(self):
        with pytest.raises(TypeError):
            RateMaximizer().fit(np.zeros((3, 3)))


class TestFitting:
    def test_fit_sets_attributes(self):
        est = RateMaximizer().fit(make_scenario())
        assert est.layout_.num_tx == 4 and est.layout_.num_rx == 4
        assert est.covariance_.trace == pytest.approx(
            est.scenario_.params.power_budget, rel=1e-9
        )
        assert est.bound_ == est.objective_path_[-1]
        assert est.n_iter_ >= 1
        assert isinstance(est.converged_, bool)
        assert est.score() == est.bound_

    def test_design_ordering_on_one_instance(self):
        scenario = make_scenario(seed=3)
        scores = {
            d: RateMaximizer(design=d).fit(scenario).bound_ for d in ("fa", "rfa", "fpa")
        }
        assert scores["fa"] >= scores["rfa"] - 1e-9
        assert scores["rfa"] >= scores["fpa"] - 1e-9

    def test_fpa_design_keeps_linear_array(self):
        est = RateMaximizer(design="fpa").fit(make_scenario(seed=4))
        np.testing.assert_allclose(est.layout_.tx_positions[:, 1], 0.0)
        np.testing.assert_allclose(
            np.diff(est.layout_.tx_positions[:, 0]), 0.75, atol=1e-12
        )

    def test_estimate_rate_below_bound(self):
        est = RateMaximizer().fit(make_scenario(seed=5))
        rate = est.estimate_rate(num_samples=2000, seed=1)
        assert rate.mean_rate <= est.bound_ + 3 * rate.std_error

    def test_invalid_design_rejected(self):
        with pytest.raises(ValueError):
            RateMaximizer(design="xyz").fit(make_scenario())

    def test_explicit_initial_layout_used(self):
        scenario = make_scenario(seed=6)
        from fluidmimo import build_baseline_layout

        layout = build_baseline_layout(
            "fa", 4, 4, scenario.params, scenario.region_half_width, scenario.min_spacing
        )
        scenario = Scenario(
            params=scenario.params,
            angles=scenario.angles,
            region_half_width=scenario.region_half_width,
            min_spacing=scenario.min_spacing,
            num_tx=4,
            num_rx=4,
            initial_layout=layout,
        )
        est = RateMaximizer(design="fpa").fit(scenario)
        np.testing.assert_array_equal(est.layout_.tx_positions, layout.tx_positions)
