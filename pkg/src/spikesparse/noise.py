"""Signal corruption models and the static-noise stopping bound.

Noise streams are keyed on (seed, iteration) so replaying any iteration
reproduces its corruption exactly, independent of sampling cadence.
"""

from dataclasses import dataclass

import numpy as np

from .validation import as_vector

KINDS = ("multiplicative_white", "additive_white", "static")


@dataclass(frozen=True)
class NoiseModel:
    kind: str
    level: float = 0.0
    seed: int = 0
    static_eps: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}; expected one of {KINDS}")
        if self.level < 0:
            raise ValueError(f"noise level must be nonnegative, got {self.level}")
        if (self.static_eps is None) == (self.kind == "static"):
            raise ValueError("static_eps must be given exactly when kind='static'")


def make_noise_model(kind: str, level: float, seed: int, m: int | None = None) -> NoiseModel:
    """Build a model from CLI-style parameters.

    For the static kind the offset vector is drawn once as level * N(0, 1)
    of length ``m``.
    """
    if kind == "static":
        if m is None:
            raise ValueError("static noise needs the signal length m")
        eps = level * np.random.default_rng((int(seed),)).standard_normal(m)
        eps.setflags(write=False)
        return NoiseModel(kind=kind, level=level, seed=int(seed), static_eps=eps)
    return NoiseModel(kind=kind, level=level, seed=int(seed))


def corrupt(f0, model: NoiseModel | None, k: int) -> np.ndarray:
    """Corrupted signal at iteration ``k`` (k >= 1). ``model=None`` is a no-op."""
    f0 = as_vector(f0, name="clean signal")
    if model is None:
        return f0
    if k < 1:
        raise ValueError(f"iteration index must be >= 1, got {k}")
    if model.kind == "static":
        return f0 + model.static_eps
    eps = np.random.default_rng((int(model.seed), int(k))).standard_normal(f0.shape[0])
    if model.kind == "multiplicative_white":
        return f0 * (1.0 + model.level * eps)
    return f0 + model.level * eps


def cumulative_noise_norm(model: NoiseModel, f0, up_to: int) -> float:
    """l2 norm of the summed corruption over iterations 1..up_to."""
    if up_to < 1:
        raise ValueError(f"up_to must be >= 1, got {up_to}")
    return float(cumulative_noise_norm_curve(model, f0, [up_to])[0])


def cumulative_noise_norm_curve(model: NoiseModel, f0, checkpoints) -> np.ndarray:
    """Cumulative corruption norms at each checkpoint, in one pass."""
    f0 = as_vector(f0, name="clean signal")
    checkpoints = sorted(int(c) for c in checkpoints)
    if not checkpoints or checkpoints[0] < 1:
        raise ValueError("checkpoints must be positive iteration indices")
    acc = np.zeros_like(f0)
    out = np.empty(len(checkpoints))
    pos = 0
    for k in range(1, checkpoints[-1] + 1):
        acc += corrupt(f0, model, k) - f0
        while pos < len(checkpoints) and checkpoints[pos] == k:
            out[pos] = np.linalg.norm(acc)
            pos += 1
    return out


def static_noise_bound(c: float, eps_norm: float, t: float) -> float:
    """Upper bound on the squared clean-signal residual under static noise.

    Equals (c/t - eps_norm)^2 + eps_norm^2, hence never below eps_norm^2.
    Usable as a stopping criterion for de-noising: once the measured squared
    residual approaches the bound's floor, further iterations over-fit noise.
    """
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    return c * c / (t * t) - 2.0 * c * eps_norm / t + 2.0 * eps_norm * eps_norm


def fit_residual_scale(ts, residuals) -> float:
    """Estimate the integrated-residual constant from a trace.

    Least-squares constant fit of residual(t) * t; with static noise this
    is exactly the norm of the running residual integral, so the fit
    recovers the constant the stopping bound needs.
    """
    ts = np.asarray(ts, dtype=np.float64)
    residuals = np.asarray(residuals, dtype=np.float64)
    if ts.size == 0 or ts.shape != residuals.shape:
        raise ValueError("ts and residuals must be equal-length, nonempty")
    return float(np.mean(residuals * ts))
