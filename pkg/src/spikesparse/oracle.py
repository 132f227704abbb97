"""Independent small-instance ground truth via exhaustive support enumeration.

Every support of size up to m is solved by least squares; the feasible
candidate of minimum l1 norm is the exact minimum-l1 solution.  Slow and
exact, which is the point: it validates the iterative solvers and doubles
as a uniqueness probe.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import Infeasible, TooLarge
from .problems import Dictionary
from .validation import as_vector

EXHAUSTIVE_MAX_N = 14


@dataclass(frozen=True)
class OracleSolution:
    u_star: np.ndarray
    l1: float
    support: np.ndarray
    feasible: bool
    unique: bool


@dataclass(frozen=True)
class KktReport:
    """Stationarity violations of a candidate for the l1-penalized least squares.

    ``violation[i]`` is how far coordinate i breaks its optimality
    condition (0 when satisfied): active coordinates must see a gradient
    equal to lam times their sign, inactive ones a gradient within lam.
    """

    ok: bool
    violation: np.ndarray

    @property
    def worst_index(self) -> int:
        return int(np.argmax(self.violation))

    @property
    def worst(self) -> float:
        return float(np.max(self.violation)) if self.violation.size else 0.0


def default_feasibility_tol(f) -> float:
    return 1e-9 * (1.0 + float(np.linalg.norm(f)))


def oracle_basis_pursuit(dictionary: Dictionary, f, feas_tol: float | None = None) -> OracleSolution:
    """Exact minimum-l1 solution of A u = f by support enumeration.

    Ties break toward the smaller, then lexicographically earlier support.
    Raises TooLarge outside the exhaustive regime (n <= 14) and Infeasible
    when no support reproduces f within tolerance.
    """
    m, n = dictionary.m, dictionary.n
    if n > EXHAUSTIVE_MAX_N:
        raise TooLarge(f"n={n} exceeds the exhaustive regime (n <= {EXHAUSTIVE_MAX_N})")
    f = as_vector(f, length=m, name="signal")
    if feas_tol is None:
        feas_tol = default_feasibility_tol(f)

    A = dictionary.entries
    norm_f = float(np.linalg.norm(f))
    candidates = []  # (l1, size, support tuple, u)
    for size in range(0, min(m, n) + 1):
        for support in combinations(range(n), size):
            if size == 0:
                resid = norm_f
                u = np.zeros(n)
            else:
                cols = A[:, support]
                x, _, _, _ = np.linalg.lstsq(cols, f, rcond=None)
                resid = float(np.linalg.norm(cols @ x - f))
                u = np.zeros(n)
                u[list(support)] = x
            if resid <= feas_tol:
                candidates.append((float(np.sum(np.abs(u))), size, support, u))

    if not candidates:
        raise Infeasible(f"no support of size <= {min(m, n)} reaches residual <= {feas_tol:.3g}")

    best = min(candidates, key=lambda c: (c[0], c[1], c[2]))
    l1_star, _, _, u_star = best
    # Exhaustiveness self-check: nothing kept beats the winner.
    assert all(c[0] >= l1_star for c in candidates)

    # Uniqueness probe: any feasible candidate whose l1 matches the optimum
    # but whose coefficients differ flags a non-unique minimizer.
    scale = max(1.0, float(np.max(np.abs(u_star))))
    unique = True
    for l1_c, _, _, u_c in candidates:
        if l1_c <= l1_star * (1 + 1e-9) + 1e-12:
            if np.max(np.abs(u_c - u_star)) > 1e-7 * scale:
                unique = False
                break

    # Least-squares dust below the support tolerance is snapped to exact
    # zero so u_star and support agree.
    u_star = np.where(np.abs(u_star) > 1e-12 * scale, u_star, 0.0)
    support_star = np.flatnonzero(u_star)
    return OracleSolution(
        u_star=u_star,
        l1=float(np.sum(np.abs(u_star))),
        support=support_star,
        feasible=True,
        unique=unique,
    )


def verify_lasso_kkt(u, dictionary: Dictionary, f, lam: float, kkt_tol: float = 1e-6) -> KktReport:
    """Check the stationarity conditions of the l1-penalized least squares.

    For each coordinate: a nonzero u_i needs A_i . (f - A u) = lam * sign(u_i)
    within ``kkt_tol``; a zero u_i needs |A_i . (f - A u)| <= lam + kkt_tol.
    """
    if lam <= 0:
        raise ValueError(f"lam must be positive, got {lam}")
    u = as_vector(u, length=dictionary.n, name="coefficients")
    f = as_vector(f, length=dictionary.m, name="signal")
    grad = dictionary.entries.T @ (f - dictionary.entries @ u)
    active = u != 0.0
    violation = np.where(
        active,
        np.abs(grad - lam * np.sign(u)),
        np.maximum(np.abs(grad) - lam, 0.0),
    )
    satisfied = violation <= kkt_tol
    return KktReport(ok=bool(satisfied.all()), violation=np.where(satisfied, 0.0, violation))
