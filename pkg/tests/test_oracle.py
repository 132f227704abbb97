"""Exhaustive minimum-l1 reference and the penalized-stationarity checker."""

import numpy as np
import pytest

import spikesparse as ss
from helpers import stable_lbi_config, tiny_instance
from spikesparse.errors import Infeasible, TooLarge


def lasso_cd_reference(dictionary, f, lam, sweeps=4000):
    """Classic coordinate minimization of 0.5||Au-f||^2 + lam||u||_1.

    Independent of the package solvers: its fixed point is the penalized
    stationary point by construction.
    """
    A = dictionary.entries
    u = np.zeros(dictionary.n)
    r = f - A @ u
    for _ in range(sweeps):
        for i in range(dictionary.n):
            old = u[i]
            z = old + A[:, i] @ r
            new = ss.shrink(z, lam)
            if new != old:
                r -= (new - old) * A[:, i]
                u[i] = new
    return u


class TestBasisPursuitOracle:
    def test_prefers_single_sparse_column(self):
        s = 1.0 / np.sqrt(2.0)
        d = ss.as_dictionary(np.array([[1.0, 0.0, s], [0.0, 1.0, s]]))
        sol = ss.oracle_basis_pursuit(d, d.entries[:, 2])
        np.testing.assert_allclose(sol.u_star, [0.0, 0.0, 1.0], atol=1e-12)
        assert sol.l1 == pytest.approx(1.0, abs=1e-12)
        assert sol.feasible

    def test_zero_signal(self):
        d = ss.normalize_columns(np.eye(3))
        sol = ss.oracle_basis_pursuit(d, np.zeros(3))
        assert np.all(sol.u_star == 0.0)
        assert sol.l1 == 0.0 and sol.support.size == 0

    def test_planted_truth_recovered_and_solvers_match(self):
        # 4x8 with two planted entries of magnitude 0.4; chosen seed has a
        # well-separated minimizer that every solver reaches.
        g = np.random.default_rng(23)
        d = ss.normalize_columns(g.standard_normal((4, 8)))
        support = g.choice(8, size=2, replace=False)
        u0 = np.zeros(8)
        u0[support] = 0.4 * g.choice([-1.0, 1.0], size=2)
        f = d.entries @ u0

        sol = ss.oracle_basis_pursuit(d, f)
        assert sol.unique
        np.testing.assert_allclose(sol.u_star, u0, atol=1e-9)

        nu = np.linalg.norm(sol.u_star)
        cfg = ss.SolverConfig(lam=10.0, max_iters=60000, tol=0.0)
        hda = ss.run("hda", d, f, cfg=cfg, sample_every=10 ** 9)
        lbi = ss.run("lbi", d, f, cfg=stable_lbi_config(d), sample_every=10 ** 9)
        bcd = ss.run("bcd", d, f, cfg=ss.SolverConfig(lam=10.0, max_iters=20000, tol=0.0,
                                                      bcd_policy="greedy"), sample_every=10 ** 9)
        for res in (hda, lbi, bcd):
            assert np.linalg.norm(res.u - sol.u_star) / nu <= 1e-3

    def test_scale_equivariance(self):
        d, _, f = tiny_instance(5, 9, 2, seed=31)
        base = ss.oracle_basis_pursuit(d, f)
        for c in (2.0, -0.5):
            scaled = ss.oracle_basis_pursuit(d, c * f)
            np.testing.assert_allclose(scaled.u_star, c * base.u_star, atol=1e-9)

    def test_too_large(self):
        inst = ss.generate_instance(8, 20, 2, seed=0)
        with pytest.raises(TooLarge):
            ss.oracle_basis_pursuit(inst.dictionary, inst.clean_signal)

    def test_infeasible_signal(self):
        d = ss.as_dictionary(np.array([[1.0], [0.0]]))
        with pytest.raises(Infeasible):
            ss.oracle_basis_pursuit(d, np.array([0.0, 1.0]))

    def test_tie_breaks_toward_smaller_support(self):
        d = ss.normalize_columns(np.eye(3))
        sol = ss.oracle_basis_pursuit(d, d.entries[:, 1])
        np.testing.assert_array_equal(sol.support, [1])


class TestLassoKkt:
    def test_zero_optimal_iff_small_drive(self):
        d, _, f = tiny_instance(6, 10, 2, seed=8)
        lam_big = float(np.max(np.abs(ss.drive(d, f)))) + 0.1
        assert ss.verify_lasso_kkt(np.zeros(10), d, f, lam_big).ok

        lam_small = float(np.max(np.abs(ss.drive(d, f)))) * 0.5
        report = ss.verify_lasso_kkt(np.zeros(10), d, f, lam_small)
        assert not report.ok
        assert report.worst_index == int(np.argmax(np.abs(ss.drive(d, f))))
        assert report.worst > 0.0

    def test_scalar_closed_form(self):
        d = ss.as_dictionary(np.array([[1.0]]))
        assert ss.verify_lasso_kkt(np.array([0.6]), d, np.array([1.0]), 0.4).ok
        assert not ss.verify_lasso_kkt(np.array([0.5]), d, np.array([1.0]), 0.4, kkt_tol=1e-6).ok

    def test_independent_reference_solution_passes(self):
        d, _, f = tiny_instance(6, 10, 2, seed=9)
        lam = 0.05
        u = lasso_cd_reference(d, f, lam)
        report = ss.verify_lasso_kkt(u, d, f, lam, kkt_tol=1e-6)
        assert report.ok, f"worst violation {report.worst} at {report.worst_index}"


class TestConvergedBcdStructure:
    def test_fixed_point_is_feasible_with_pinned_gaps(self):
        # A settled one-coordinate run reproduces the signal and parks every
        # potential within the threshold band of its readout, pinned at the
        # band edge wherever the readout is nonzero.
        d, _, f = tiny_instance(6, 9, 1, seed=10)
        cfg = ss.SolverConfig(lam=10.0, max_iters=20000, tol=0.0, bcd_policy="greedy")
        res = ss.run("bcd", d, f, cfg=cfg, sample_every=10 ** 9)
        assert res.trace[-1].rel_residual <= 1e-8
        gap = res.state.v - res.state.u
        assert np.max(np.abs(gap)) <= cfg.lam + 1e-10
        active = res.state.u != 0.0
        assert active.any()
        np.testing.assert_allclose(gap[active], cfg.lam * np.sign(res.state.u[active]), atol=1e-10)
