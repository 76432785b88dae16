"""Small dense complex Hermitian solves and scalar special functions.

Everything here operates on plain numpy arrays; matrices are at most a few
tens of rows, so a Cholesky factorization is both fast and stable.
"""

import numpy as np
from scipy.linalg import cho_factor, cho_solve
from scipy.special import ndtr, ndtri

__all__ = ["hermitian_solve", "outer_hermitian", "inv_norm_cdf", "is_hermitian"]


def is_hermitian(a: np.ndarray, rtol: float = 1e-12) -> bool:
    """Check A == A^H within a relative tolerance."""
    scale = max(np.abs(a).max(), 1.0)
    return bool(np.abs(a - a.conj().T).max() <= rtol * scale)


def hermitian_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve A x = b for Hermitian positive-definite A.

    ``b`` may be a vector or a matrix of stacked right-hand sides.
    Raises ValueError if the factorization hits a non-positive pivot,
    which signals a caller bug: every call site builds A as a positive
    multiple of the identity plus a sum of outer products.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    try:
        c, low = cho_factor(a, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise ValueError("matrix is not positive definite") from exc
    return cho_solve((c, low), b, check_finite=False)


def outer_hermitian(v: np.ndarray) -> np.ndarray:
    """Return v v^H, Hermitian by construction."""
    v = np.asarray(v)
    if v.size == 0:
        raise ValueError("empty vector")
    m = np.outer(v, v.conj())
    # symmetrize so A == A^H holds bitwise, not just to rounding
    return 0.5 * (m + m.conj().T)


def inv_norm_cdf(p: float) -> float:
    """Inverse of the standard normal CDF.

    The inverse Q-function used by the finite-blocklength rate is
    ``inv_norm_cdf(1 - psi)``.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    return float(ndtri(p))


def norm_cdf(x: float) -> float:
    """Standard normal CDF (exposed for round-trip checks)."""
    return float(ndtr(x))
