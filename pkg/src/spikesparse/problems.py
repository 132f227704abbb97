"""Problem instances: normalized dictionaries, planted sparse signals, drives.

Instances are generated with numpy's PCG64 generator so a recorded integer
seed reproduces them bit-exactly on any platform.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import IllConditionedWarning, InvalidDimensions, ZeroColumn
from .validation import as_matrix, as_vector

MIN_COLUMN_NORM = 1e-14
MIN_SINGULAR_VALUE = 1e-8


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Dictionary:
    """Column-normalized m-by-n matrix with its cached Gram matrix.

    Immutable after construction; the arrays are marked read-only so a
    dictionary can be shared freely across runs and worker threads.
    """

    entries: np.ndarray
    gram: np.ndarray

    @property
    def m(self) -> int:
        return self.entries.shape[0]

    @property
    def n(self) -> int:
        return self.entries.shape[1]

    def spectral_norm(self) -> float:
        """Largest singular value of the column-normalized matrix."""
        return float(np.linalg.norm(self.entries, 2))


@dataclass(frozen=True)
class GroundTruth:
    """Planted sparse coefficients: values, their support, and the support size."""

    values: np.ndarray
    support: np.ndarray
    nz: int


@dataclass(frozen=True)
class ProblemInstance:
    dictionary: Dictionary
    truth: GroundTruth
    clean_signal: np.ndarray
    seed: int = field(default=0)

    @property
    def m(self) -> int:
        return self.dictionary.m

    @property
    def n(self) -> int:
        return self.dictionary.n


def _build_dictionary(entries: np.ndarray) -> Dictionary:
    entries = _readonly(entries)
    gram = _readonly(entries.T @ entries)
    n = entries.shape[1]
    if n > 1:
        off = np.abs(gram - np.diag(np.diag(gram)))
        worst = np.unravel_index(np.argmax(off), off.shape)
        if off[worst] >= 1.0 - 1e-12:
            raise ValueError(
                f"columns {worst[0]} and {worst[1]} are parallel (|gram|={off[worst]:.6g}); "
                "distinct columns must satisfy |A_i.A_j| < 1"
            )
    return Dictionary(entries=entries, gram=gram)


def normalize_columns(matrix) -> Dictionary:
    """Divide each column by its l2 norm and cache the Gram matrix.

    Raises ZeroColumn if any column norm falls below 1e-14.
    """
    matrix = as_matrix(matrix, "matrix")
    norms = np.linalg.norm(matrix, axis=0)
    small = np.flatnonzero(norms < MIN_COLUMN_NORM)
    if small.size:
        raise ZeroColumn(int(small[0]))
    return _build_dictionary(matrix / norms)


def as_dictionary(matrix_or_dictionary, tol: float = 1e-8) -> Dictionary:
    """Coerce an already-normalized matrix (or pass a Dictionary through).

    The matrix must have unit-norm columns within ``tol``; raw matrices
    should go through normalize_columns instead.
    """
    if isinstance(matrix_or_dictionary, Dictionary):
        return matrix_or_dictionary
    matrix = as_matrix(matrix_or_dictionary, "dictionary matrix")
    norms = np.linalg.norm(matrix, axis=0)
    bad = np.flatnonzero(np.abs(norms - 1.0) > tol)
    if bad.size:
        raise ValueError(
            f"column {bad[0]} has norm {norms[bad[0]]:.6g}; pass a Dictionary or a "
            "column-normalized matrix (see normalize_columns)"
        )
    return _build_dictionary(matrix)


def generate_instance(
    m: int,
    n: int,
    nz: int,
    amp_lo: float = -0.5,
    amp_hi: float = 0.5,
    seed: int = 0,
) -> ProblemInstance:
    """Draw a random recovery problem: Gaussian dictionary, planted sparse truth.

    Dictionary entries are i.i.d. standard normal before column
    normalization.  The truth has ``nz`` support positions chosen uniformly
    without replacement, with amplitudes uniform on [amp_lo, amp_hi).  The
    clean signal is the dictionary applied to the truth.  Deterministic in
    ``seed``.
    """
    if not (0 < nz <= n):
        raise InvalidDimensions(f"need 0 < nz <= n, got nz={nz}, n={n}")
    if not (0 < m <= n):
        raise InvalidDimensions(f"need 0 < m <= n, got m={m}, n={n}")
    if not amp_lo < amp_hi:
        raise InvalidDimensions(f"need amp_lo < amp_hi, got [{amp_lo}, {amp_hi}]")

    rng = np.random.default_rng(seed)
    dictionary = normalize_columns(rng.standard_normal((m, n)))

    support = np.sort(rng.choice(n, size=nz, replace=False))
    values = np.zeros(n)
    values[support] = rng.uniform(amp_lo, amp_hi, size=nz)

    # Gaussian matrices are full row rank with probability one; a failure
    # here means the caller fed degenerate dimensions or got a measure-zero
    # draw, and downstream decay guarantees quietly lose their footing.
    sigma_min = np.linalg.svd(dictionary.entries, compute_uv=False)[-1]
    if sigma_min <= MIN_SINGULAR_VALUE:
        warnings.warn(
            f"smallest singular value {sigma_min:.3g} <= {MIN_SINGULAR_VALUE}; "
            "dictionary is numerically rank deficient",
            IllConditionedWarning,
        )

    clean_signal = dictionary.entries @ values
    support = np.ascontiguousarray(support, dtype=np.int64)
    support.setflags(write=False)
    return ProblemInstance(
        dictionary=dictionary,
        truth=GroundTruth(values=_readonly(values), support=support, nz=nz),
        clean_signal=_readonly(clean_signal),
        seed=int(seed),
    )


def drive(dictionary: Dictionary, f) -> np.ndarray:
    """Feedforward projection of a signal onto the dictionary columns (A^T f)."""
    f = as_vector(f, length=dictionary.m, name="signal")
    return dictionary.entries.T @ f
