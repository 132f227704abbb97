"""The two scalar nonlinearities every solver is built on.

Both operate componentwise and accept scalars or numpy arrays.
"""

import numpy as np


def shrink(x, lam):
    """Soft threshold: shift ``x`` toward zero by ``lam``, zeroing the dead band.

    Returns ``x - lam`` for ``x > lam``, ``x + lam`` for ``x < -lam`` and 0
    on ``[-lam, lam]``.
    """
    if lam <= 0:
        raise ValueError(f"lam must be positive, got {lam}")
    out = np.sign(x) * np.maximum(np.abs(x) - lam, 0.0)
    if np.isscalar(x):
        return float(out)
    return out


def threshold(x, lam):
    """Ternary quantizer: +1 for ``x >= lam``, -1 for ``x <= -lam``, else 0.

    The boundary fires: a potential that exactly reaches ``lam`` emits a
    spike, matching the continuous-time spike condition v = lam.
    """
    if lam <= 0:
        raise ValueError(f"lam must be positive, got {lam}")
    out = np.where(np.greater_equal(x, lam), 1, np.where(np.less_equal(x, -lam), -1, 0))
    if np.isscalar(x):
        return int(out)
    return out
