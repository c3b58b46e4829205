"""Dense complex linear algebra helpers shared by the rest of the package.

Real-linear maps on C^n are represented on R^(2n) with the interleaved
ordering (Re_1, Im_1, Re_2, Im_2, ...), so multiplication by i is a fixed
signed permutation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg as la

MAX_DIM = 512


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds used throughout the package."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-12
    nullspace_tol: float = 1e-8
    fd_step: float = 1e-4

    def __post_init__(self):
        for name in ("abs_tol", "rel_tol", "nullspace_tol"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {value}")
        if not np.isfinite(self.fd_step) or self.fd_step <= 0:
            raise ValueError(f"fd_step must be > 0, got {self.fd_step}")


DEFAULT_TOL = Tolerance()


def as_vector(v, dim: int | None = None) -> np.ndarray:
    """Coerce `v` to a finite 1-d complex array, optionally of length `dim`."""
    arr = np.asarray(v, dtype=complex)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"expected a nonempty 1-d vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector has non-finite entries")
    if dim is not None and arr.size != dim:
        raise ValueError(f"dimension mismatch: expected {dim}, got {arr.size}")
    return arr


def as_matrix(A) -> np.ndarray:
    arr = np.asarray(A, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has non-finite entries")
    return arr


def _check_pair(v, w):
    v = as_vector(v)
    w = as_vector(w)
    if v.size != w.size:
        raise ValueError(f"dimension mismatch: {v.size} vs {w.size}")
    return v, w


def inner(v, w) -> complex:
    """Hermitian inner product, antilinear in `v` and linear in `w`."""
    v, w = _check_pair(v, w)
    return complex(np.vdot(v, w))


def real_inner(v, w) -> float:
    """The real inner product (v, w)_R = 2 Re<v, w>."""
    return 2.0 * inner(v, w).real


def norm(v) -> float:
    return float(np.linalg.norm(as_vector(v)))


def matrix_exp(A, t: float = 1.0) -> np.ndarray:
    """exp(tA) by scaling and squaring with a Pade approximant.

    Raises OverflowError when the result is not finite.
    """
    A = as_matrix(A)
    if A.shape[0] > MAX_DIM:
        raise ValueError(f"matrix dimension {A.shape[0]} exceeds cap {MAX_DIM}")
    with np.errstate(over="raise", invalid="raise"):
        try:
            out = la.expm(t * A)
        except FloatingPointError as exc:
            raise OverflowError(f"matrix exponential overflowed for |tA| = {abs(t) * np.linalg.norm(A):.3g}") from exc
    if not np.all(np.isfinite(out)):
        raise OverflowError("matrix exponential is not finite")
    return out


def real_nullspace(L, tol: Tolerance | float = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (as columns) of the kernel of a real matrix.

    A right-singular direction counts as null when its singular value is at
    most ``nullspace_tol * max_singular_value``; directions beyond the row
    count are always null. A zero map has the whole space as kernel.
    """
    L = np.asarray(L, dtype=float)
    if L.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {L.shape}")
    if not np.all(np.isfinite(L)):
        raise ValueError("matrix has non-finite entries")
    rel = tol.nullspace_tol if isinstance(tol, Tolerance) else float(tol)
    n = L.shape[1]
    if L.shape[0] == 0 or n == 0:
        return np.eye(n)
    _, s, vh = np.linalg.svd(L, full_matrices=True)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > rel * smax)) if smax > 0 else 0
    return vh[rank:].T.copy()


def fd_derivative(f: Callable[[float], np.ndarray], x: float, h: float = DEFAULT_TOL.fd_step):
    """Central difference (f(x+h) - f(x-h)) / 2h."""
    if not h > 0:
        raise ValueError("step must be positive")
    fp = np.asarray(f(x + h))
    fm = np.asarray(f(x - h))
    if not (np.all(np.isfinite(fp)) and np.all(np.isfinite(fm))):
        raise ValueError(f"non-finite evaluation near x = {x}")
    return (fp - fm) / (2.0 * h)


def to_real(v) -> np.ndarray:
    """C^n -> R^(2n), interleaving real and imaginary parts."""
    v = np.asarray(v, dtype=complex)
    out = np.empty(v.shape[:-1] + (2 * v.shape[-1],))
    out[..., 0::2] = v.real
    out[..., 1::2] = v.imag
    return out


def to_complex(x) -> np.ndarray:
    """Inverse of :func:`to_real`."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] % 2:
        raise ValueError("real vector must have even length")
    return x[..., 0::2] + 1j * x[..., 1::2]


def complex_structure(n: int) -> np.ndarray:
    """Matrix of multiplication by i on R^(2n)."""
    J = np.zeros((2 * n, 2 * n))
    for k in range(n):
        J[2 * k + 1, 2 * k] = 1.0
        J[2 * k, 2 * k + 1] = -1.0
    return J


def realify(A) -> np.ndarray:
    """Real 2n x 2n matrix of the complex-linear map v -> A v."""
    A = np.asarray(A, dtype=complex)
    n = A.shape[1]
    out = np.empty((2 * A.shape[0], 2 * n))
    out[0::2, 0::2] = A.real
    out[0::2, 1::2] = -A.imag
    out[1::2, 0::2] = A.imag
    out[1::2, 1::2] = A.real
    return out


def max_principal_angle(U, V) -> float:
    """Largest principal angle between the column spans of U and V.

    Returns pi/2 when the dimensions differ and 0 when both are empty.
    """
    U = np.asarray(U)
    V = np.asarray(V)
    if U.shape[1] != V.shape[1]:
        return float(np.pi / 2)
    if U.shape[1] == 0:
        return 0.0
    return float(np.max(la.subspace_angles(U, V)))


def random_state(rng: np.random.Generator, n: int, levels: int | None = None) -> np.ndarray:
    """Normalized complex Gaussian vector, supported on the first `levels` entries."""
    m = n if levels is None else levels
    psi = np.zeros(n, dtype=complex)
    psi[:m] = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    return psi / np.linalg.norm(psi)
