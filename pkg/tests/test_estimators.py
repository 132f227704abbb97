"""Estimator API: fit/predict, parameter protocol, cloning."""

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

import spikesparse as ss
from helpers import tiny_instance


class TestHdaSolver:
    def test_fit_recovers_truth(self):
        d, u0, f = tiny_instance(16, 32, 3, seed=1)
        est = ss.HdaSolver(lam=10.0, max_iters=20000, tol=0.0, sample_every=1000)
        assert est.fit(d.entries, f) is est
        assert np.linalg.norm(est.coef_ - u0) / np.linalg.norm(u0) <= 1e-2
        assert est.stop_reason_ == "max_iters"
        assert est.trace_[-1].t == 20000

    def test_predict_reconstructs_signal(self):
        d, _, f = tiny_instance(12, 24, 2, seed=2)
        est = ss.HdaSolver(lam=10.0, max_iters=10000, tol=0.0).fit(d, f)
        assert np.linalg.norm(est.predict() - f) <= 1e-2 * np.linalg.norm(f)
        assert est.score(d, f) == pytest.approx(0.0, abs=1e-2)

    def test_not_fitted(self):
        with pytest.raises(NotFittedError):
            ss.HdaSolver().predict()

    def test_get_params_round_trip(self):
        est = ss.HdaSolver(lam=7.0, max_iters=123)
        params = est.get_params()
        assert params["lam"] == 7.0 and params["max_iters"] == 123
        cloned = clone(est)
        assert cloned.get_params() == params

    def test_rejects_unnormalized_matrix(self):
        with pytest.raises(ValueError):
            ss.HdaSolver().fit(np.array([[2.0, 0.0], [0.0, 1.0]]), np.zeros(2))


class TestOtherSolvers:
    def test_lbi_converges(self):
        d, u0, f = tiny_instance(12, 24, 2, seed=3)
        smax = d.spectral_norm()
        est = ss.LbiSolver(lam=10.0, delta=1.0 / smax ** 2, max_iters=20000, tol=1e-12).fit(d, f)
        assert est.stop_reason_ == "converged"
        assert np.linalg.norm(est.coef_ - u0) / np.linalg.norm(u0) <= 1e-3

    def test_bcd_policy_passthrough(self):
        d, u0, f = tiny_instance(8, 12, 1, seed=4)
        est = ss.BcdSolver(lam=10.0, max_iters=5000, tol=0.0, policy="greedy").fit(d, f)
        assert est.get_params()["policy"] == "greedy"
        assert np.linalg.norm(est.coef_ - u0) / np.linalg.norm(u0) <= 1e-6

    def test_hopping_exposes_events(self):
        d, _, f = tiny_instance(8, 12, 1, seed=5)
        est = ss.HoppingSolver(lam=10.0, max_iters=2000, tol=0.0).fit(d, f)
        assert est.events_
        assert est.events_[0].time > 0
        assert est.n_iter_ == pytest.approx(2000.0)

    def test_noise_keyword(self):
        d, _, f = tiny_instance(8, 12, 1, seed=6)
        noise = ss.make_noise_model("multiplicative_white", 0.5, seed=1)
        est = ss.HdaSolver(lam=10.0, max_iters=3000, tol=0.0).fit(d, f, noise=noise)
        assert est.trace_[-1].rel_residual < 1.0
