"""Residuals, the solver energy, sparsity measures, rate fits and comparisons."""

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientData, ZeroReference, ZeroSignal
from .problems import Dictionary
from .validation import as_vector


@dataclass(frozen=True)
class TraceRecord:
    """One sampled diagnostic row of a solver run.

    ``t`` is the iteration count for discrete solvers and continuous time
    for the event-driven one.  ``comm_events`` counts ternary spike
    broadcasts, ``analog_msgs`` full-precision coefficient broadcasts; both
    are cumulative.
    """

    t: float
    residual: float
    rel_residual: float
    energy: float
    l1: float
    l0: int
    comm_events: int
    analog_msgs: int


@dataclass(frozen=True)
class ComparisonReport:
    rel_mse: float
    rel_l1_diff: float


def l0_count(u: np.ndarray) -> int:
    """Entries whose magnitude exceeds 1e-6 * max(1, ||u||_inf)."""
    u = np.asarray(u)
    tol = 1e-6 * max(1.0, float(np.max(np.abs(u))) if u.size else 1.0)
    return int(np.count_nonzero(np.abs(u) > tol))


def residuals(u, dictionary: Dictionary, f) -> tuple[float, float]:
    """l2 residual of the reconstruction and its ratio to ||f||."""
    u = as_vector(u, length=dictionary.n, name="coefficients")
    f = as_vector(f, length=dictionary.m, name="signal")
    res = float(np.linalg.norm(dictionary.entries @ u - f))
    nf = float(np.linalg.norm(f))
    if nf == 0.0:
        raise ZeroSignal("relative residual undefined for a zero signal")
    return res, res / nf


def energy(spike_sum, t: float, dictionary: Dictionary, f, lam: float) -> float:
    """Lyapunov-style objective: squared residual plus a decaying l1 term.

    With the running spike average s = spike_sum / t this is
    ||f - lam * A s||^2 + (lam^2 / t) * ||s||_1, which decreases
    monotonically along integrate-and-fire runs.
    """
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    spike_sum = as_vector(spike_sum, length=dictionary.n, name="spike_sum")
    f = as_vector(f, length=dictionary.m, name="signal")
    s_bar = spike_sum / t
    res = np.linalg.norm(f - lam * (dictionary.entries @ s_bar))
    return float(res * res + (lam * lam / t) * np.sum(np.abs(s_bar)))


def energy_from_coefficients(u, t: float, dictionary: Dictionary, f, lam: float) -> float:
    """Same objective written in terms of u = lam * s."""
    if t <= 0:
        raise ValueError(f"t must be positive, got {t}")
    u = as_vector(u, length=dictionary.n, name="coefficients")
    f = as_vector(f, length=dictionary.m, name="signal")
    res = np.linalg.norm(f - dictionary.entries @ u)
    return float(res * res + (lam / t) * np.sum(np.abs(u)))


def fit_loglog_slope(trace, t_min: float, t_max: float) -> float:
    """Least-squares slope of log y against log t over [t_min, t_max].

    ``trace`` is a sequence of (t, y) pairs; only samples with y > 0 inside
    the window are used, and at least 8 are required.
    """
    pts = np.asarray([(t, y) for t, y in trace], dtype=np.float64)
    if pts.size:
        keep = (pts[:, 0] >= t_min) & (pts[:, 0] <= t_max) & (pts[:, 1] > 0)
        pts = pts[keep]
    if pts.shape[0] < 8:
        raise InsufficientData(
            f"need >= 8 positive samples in [{t_min}, {t_max}], got {pts.shape[0]}"
        )
    slope, _ = np.polyfit(np.log(pts[:, 0]), np.log(pts[:, 1]), 1)
    return float(slope)


def comm_cost(trace) -> tuple[int, int]:
    """Cumulative (spike_events, analog_msgs) at the end of a trace.

    Accepts a list of TraceRecord or anything with a ``trace`` attribute.
    """
    records = getattr(trace, "trace", trace)
    if not records:
        return 0, 0
    last = records[-1]
    return int(last.comm_events), int(last.analog_msgs)


def compare(u_a, u_b) -> ComparisonReport:
    """Relative squared difference and relative l1-norm difference of two solutions."""
    u_a = np.asarray(u_a, dtype=np.float64).ravel()
    u_b = np.asarray(u_b, dtype=np.float64).ravel()
    if u_a.shape != u_b.shape:
        raise ZeroReference(f"shape mismatch {u_a.shape} vs {u_b.shape}")
    nb2 = float(np.dot(u_b, u_b))
    if nb2 == 0.0:
        raise ZeroReference("reference vector has zero norm")
    diff = u_a - u_b
    l1_b = float(np.sum(np.abs(u_b)))
    if l1_b == 0.0:
        raise ZeroReference("reference vector has zero l1 norm")
    return ComparisonReport(
        rel_mse=float(np.dot(diff, diff)) / nb2,
        rel_l1_diff=abs(float(np.sum(np.abs(u_a))) - l1_b) / l1_b,
    )
