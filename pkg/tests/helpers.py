"""Shared test fixtures: small seeded instances built from library pieces."""

import numpy as np

import spikesparse as ss


def tiny_instance(m, n, nz, seed, amp=(0.25, 0.5)):
    """Dictionary + planted truth with amplitudes bounded away from zero.

    Returns (dictionary, u0, f).
    """
    g = np.random.default_rng(seed)
    d = ss.normalize_columns(g.standard_normal((m, n)))
    support = g.choice(n, size=nz, replace=False)
    u0 = np.zeros(n)
    u0[support] = g.uniform(amp[0], amp[1], size=nz) * g.choice([-1.0, 1.0], size=nz)
    return d, u0, d.entries @ u0


def stable_lbi_config(dictionary, lam=10.0, max_iters=20000):
    """LBI config with the gradient step inside the convergence range."""
    smax = dictionary.spectral_norm()
    return ss.SolverConfig(lam=lam, delta=1.0 / (smax * smax), max_iters=max_iters, tol=0.0)
