"""Scikit-learn style estimator wrappers around the solvers.

``fit(A, f)`` solves the sparse-recovery system for one signal: ``A`` is
the column-normalized dictionary (or a Dictionary object) and ``f`` the
signal, mirroring the (X, y) convention.  The recovered coefficients land
in ``coef_`` and the sampled diagnostics in ``trace_``.  Parameters follow
the get_params/set_params protocol, so the solvers clone and grid-search
like any other estimator.
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .problems import as_dictionary
from .solvers import SolverConfig, run
from .validation import as_vector


class BaseSparseSolver(BaseEstimator):
    """Common fit loop; subclasses pin the solver kind."""

    _kind: str = ""

    def __init__(self, lam=10.0, delta=1.0, max_iters=10000, tol=1e-8,
                 stall_window=10, sample_every=10):
        self.lam = lam
        self.delta = delta
        self.max_iters = max_iters
        self.tol = tol
        self.stall_window = stall_window
        self.sample_every = sample_every

    def _config(self) -> SolverConfig:
        return SolverConfig(lam=self.lam, delta=self.delta, max_iters=self.max_iters,
                            tol=self.tol, stall_window=self.stall_window)

    def fit(self, A, f, noise=None):
        dictionary = as_dictionary(A)
        f = as_vector(f, length=dictionary.m, name="signal")
        result = run(self._kind, dictionary, f, cfg=self._config(),
                     sample_every=self.sample_every, noise=noise)
        self.dictionary_ = dictionary
        self.coef_ = result.u
        self.trace_ = result.trace
        self.stop_reason_ = result.stop_reason
        self.n_iter_ = result.t_final
        self.result_ = result
        return self

    def _check_fitted(self):
        if not hasattr(self, "coef_"):
            raise NotFittedError(f"{type(self).__name__} is not fitted yet; call fit(A, f) first")

    def predict(self, A=None) -> np.ndarray:
        """Reconstruct the signal from the fitted coefficients."""
        self._check_fitted()
        dictionary = self.dictionary_ if A is None else as_dictionary(A)
        return dictionary.entries @ self.coef_

    def score(self, A, f) -> float:
        """Negative relative residual of the reconstruction against ``f``."""
        self._check_fitted()
        f = as_vector(f, name="signal")
        nf = np.linalg.norm(f)
        if nf == 0.0:
            return 0.0
        return -float(np.linalg.norm(self.predict(A) - f)) / float(nf)


class LbiSolver(BaseSparseSolver):
    """Analog gradient iteration with soft-threshold readout."""

    _kind = "lbi"


class BcdSolver(BaseSparseSolver):
    """One-coordinate-at-a-time variant; pick the update order via ``policy``."""

    _kind = "bcd"

    def __init__(self, lam=10.0, delta=1.0, max_iters=10000, tol=1e-8,
                 stall_window=10, sample_every=10, policy="cyclic", policy_seed=0):
        super().__init__(lam=lam, delta=delta, max_iters=max_iters, tol=tol,
                         stall_window=stall_window, sample_every=sample_every)
        self.policy = policy
        self.policy_seed = policy_seed

    def _config(self) -> SolverConfig:
        return SolverConfig(lam=self.lam, delta=self.delta, max_iters=self.max_iters,
                            tol=self.tol, stall_window=self.stall_window,
                            bcd_policy=self.policy, bcd_seed=self.policy_seed)


class HdaSolver(BaseSparseSolver):
    """Integrate-and-fire iteration; the solution is the scaled spike average."""

    _kind = "hda"


class HoppingSolver(BaseSparseSolver):
    """Event-driven integrate-and-fire; ``max_iters`` doubles as the time horizon.

    After fitting, the spike log is available as ``events_``.
    """

    _kind = "hopping"

    def fit(self, A, f, noise=None):
        super().fit(A, f, noise=noise)
        self.events_ = self.result_.events
        return self
