"""Lie algebras from structure constants, generator representations and g#.

A representation is given by anti-Hermitian matrices ``A_i = drho(e_i)``
satisfying

    [A_i, A_j] = sum_k c[i, j, k] A_k + i w[i, j] 1

where ``w`` is a real 2-cocycle (zero for a genuine linear representation).
The central extension g# = g + R absorbs ``w`` into its bracket, and its
extra basis vector acts by ``i 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .numeric import DEFAULT_TOL, Tolerance, as_vector, fd_derivative, matrix_exp

JACOBI_TOL = 1e-12


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr)
    arr.setflags(write=False)
    return arr


class LieAlgebra:
    """Finite-dimensional real Lie algebra.

    Parameters
    ----------
    dim : int
        Dimension d.
    entries : iterable of (i, j, k, value)
        Nonzero structure constants ``[e_i, e_j] = sum_k c[i, j, k] e_k``,
        zero-based with ``i < j``. The ``i > j`` half follows by antisymmetry.
    basis_names : sequence of str, optional
    check : bool
        Reject tensors whose Jacobi residual exceeds ``JACOBI_TOL`` (scaled
        by the squared size of the constants when those exceed one).
    """

    def __init__(self, dim: int, entries: Iterable[Sequence] = (), basis_names=None, check: bool = True):
        if int(dim) != dim or dim < 1:
            raise ValueError(f"dimension must be a positive integer, got {dim}")
        self.dim = int(dim)
        c = np.zeros((self.dim, self.dim, self.dim))
        clean = []
        for entry in entries:
            i, j, k, value = entry
            i, j, k, value = int(i), int(j), int(k), float(value)
            if not (0 <= i < j < self.dim and 0 <= k < self.dim):
                raise ValueError(f"bad structure-constant index ({i}, {j}, {k}) for dim {self.dim}")
            if not np.isfinite(value):
                raise ValueError("structure constants must be finite")
            if value == 0.0:
                continue
            c[i, j, k] += value
            c[j, i, k] -= value
        for i, j, k in zip(*np.nonzero(c)):
            if i < j:
                clean.append((int(i), int(j), int(k), float(c[i, j, k])))
        self.structure = tuple(clean)
        self.c = _frozen(c)
        if basis_names is None:
            basis_names = [f"e{k + 1}" for k in range(self.dim)]
        if len(basis_names) != self.dim:
            raise ValueError("need one basis name per dimension")
        self.basis_names = tuple(str(n) for n in basis_names)
        if check:
            res = self.jacobi_residual()
            scale = max(1.0, float(np.max(np.abs(c))) ** 2)
            if res > JACOBI_TOL * scale:
                raise ValueError(f"structure constants violate the Jacobi identity (residual {res:.3e})")

    @classmethod
    def abelian(cls, dim: int, basis_names=None) -> "LieAlgebra":
        return cls(dim, (), basis_names)

    def bracket(self, x, y) -> np.ndarray:
        x = self._coords(x)
        y = self._coords(y)
        return np.einsum("i,j,ijk->k", x, y, self.c)

    def ad(self, x) -> np.ndarray:
        """Matrix of ``y -> [x, y]`` in the chosen basis."""
        return np.einsum("i,ijk->kj", self._coords(x), self.c)

    def jacobi_residual(self) -> float:
        c = self.c
        # [[e_i, e_j], e_k] + cyclic, expanded in the basis
        t = np.einsum("ijl,lkm->ijkm", c, c)
        jac = t + np.transpose(t, (1, 2, 0, 3)) + np.transpose(t, (2, 0, 1, 3))
        return float(np.max(np.abs(jac))) if jac.size else 0.0

    def is_abelian(self) -> bool:
        return not self.structure

    def _coords(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise ValueError(f"expected {self.dim} coordinates, got shape {x.shape}")
        return x

    def __repr__(self):
        return f"LieAlgebra(dim={self.dim}, nonzero={len(self.structure)})"


@dataclass(frozen=True)
class ModelSpec:
    """Builder name and parameters a representation came from."""

    name: str
    params: dict = field(default_factory=dict)


class Representation:
    """Anti-Hermitian generators of a (projective) unitary representation.

    Parameters
    ----------
    algebra : LieAlgebra
    generators : array_like, shape (d, n, n)
        ``A_i = drho(e_i)``.
    cocycle : array_like, shape (d, d), optional
        Exactly antisymmetric closure defect ``w``; zero when omitted.
    safe_levels : int, optional
        For truncated models: closure is only required on the span of the
        first ``safe_levels`` basis vectors.
    """

    def __init__(self, algebra: LieAlgebra, generators, cocycle=None, safe_levels: int | None = None,
                 name: str = "", spec: ModelSpec | None = None):
        gens = np.asarray(generators, dtype=complex)
        if gens.ndim != 3 or gens.shape[0] != algebra.dim or gens.shape[1] != gens.shape[2]:
            raise ValueError(f"generators must have shape ({algebra.dim}, n, n), got {gens.shape}")
        if not np.all(np.isfinite(gens)):
            raise ValueError("generators have non-finite entries")
        d, n = algebra.dim, gens.shape[1]
        w = np.zeros((d, d)) if cocycle is None else np.asarray(cocycle, dtype=float)
        if w.shape != (d, d):
            raise ValueError(f"cocycle must have shape ({d}, {d}), got {w.shape}")
        if not np.all(np.isfinite(w)):
            raise ValueError("cocycle has non-finite entries")
        if not np.array_equal(w, -w.T):
            raise ValueError("cocycle must be exactly antisymmetric")
        if safe_levels is not None and not (1 <= int(safe_levels) <= n):
            raise ValueError(f"safe_levels must lie in [1, {n}], got {safe_levels}")
        self.algebra = algebra
        self.generators = _frozen(gens)
        self.cocycle = _frozen(w)
        self.safe_levels = None if safe_levels is None else int(safe_levels)
        self.name = name
        self.spec = spec

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def hdim(self) -> int:
        return self.generators.shape[1]

    @property
    def safe_domain(self) -> np.ndarray | None:
        """Projector onto the safe levels, or None when closure holds globally."""
        if self.safe_levels is None:
            return None
        return np.diag((np.arange(self.hdim) < self.safe_levels).astype(complex))

    def drho(self, xi) -> np.ndarray:
        return drho(self, xi)

    def __repr__(self):
        return f"Representation(name={self.name!r}, d={self.dim}, n={self.hdim})"


class CentralExtension:
    """g# = g + R with bracket ``[(x, a), (y, b)] = ([x, y], w(x, y))``.

    The last coordinate is the central direction; its generator is ``i 1``.
    """

    def __init__(self, base: Representation, algebra: LieAlgebra, generators):
        self.base = base
        self.algebra = algebra
        self.generators = _frozen(generators)

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def hdim(self) -> int:
        return self.base.hdim

    @property
    def center(self) -> int:
        return self.algebra.dim - 1

    @property
    def safe_levels(self):
        return self.base.safe_levels

    @property
    def safe_domain(self):
        return self.base.safe_domain

    def central_element(self) -> np.ndarray:
        e = np.zeros(self.dim)
        e[-1] = 1.0
        return e

    def lift(self, xi, central: float = 0.0) -> np.ndarray:
        """Lift ``xi`` in g to g# with the given central coordinate."""
        xi = np.asarray(xi, dtype=float)
        if xi.shape != (self.dim - 1,):
            raise ValueError(f"expected {self.dim - 1} coordinates, got shape {xi.shape}")
        return np.append(xi, central)

    def drho(self, xi) -> np.ndarray:
        return drho(self, xi)

    def __repr__(self):
        return f"CentralExtension(base={self.base!r})"


@dataclass
class ResidualRecord:
    kind: str
    index: tuple
    residual: float


@dataclass
class ValidationReport:
    records: list
    threshold: float

    @property
    def passed(self) -> bool:
        return all(r.residual <= self.threshold for r in self.records)

    def failures(self) -> list:
        return [r for r in self.records if not r.residual <= self.threshold]

    def worst(self, kind: str) -> float:
        vals = [r.residual for r in self.records if r.kind == kind]
        return max(vals) if vals else 0.0


def closure_defect(rep: Representation, i: int, j: int) -> np.ndarray:
    """``[A_i, A_j] - sum_k c[i, j, k] A_k - i w[i, j] 1`` on the full space."""
    A = rep.generators
    comm = A[i] @ A[j] - A[j] @ A[i]
    lin = np.einsum("k,kab->ab", rep.algebra.c[i, j], A)
    return comm - lin - 1j * rep.cocycle[i, j] * np.eye(rep.hdim)


def cocycle_identity_residual(algebra: LieAlgebra, w) -> float:
    """max |w([e_i, e_j], e_k) + cyclic| over basis triples."""
    w = np.asarray(w, dtype=float)
    t = np.einsum("ijl,lk->ijk", algebra.c, w)
    res = t + np.transpose(t, (1, 2, 0)) + np.transpose(t, (2, 0, 1))
    return float(np.max(np.abs(res))) if res.size else 0.0


def validate(rep: Representation, tol: Tolerance = DEFAULT_TOL) -> ValidationReport:
    """Residuals of anti-Hermiticity, closure and Jacobi; never raises."""
    records = []
    A = rep.generators
    for i in range(rep.dim):
        records.append(ResidualRecord("anti_hermitian", (i,), float(np.linalg.norm(A[i] + A[i].conj().T))))
    P = rep.safe_domain
    for i in range(rep.dim):
        for j in range(i + 1, rep.dim):
            D = closure_defect(rep, i, j)
            if P is not None:
                D = D @ P
            records.append(ResidualRecord("closure", (i, j), float(np.linalg.norm(D))))
    records.append(ResidualRecord("jacobi", (), rep.algebra.jacobi_residual()))
    records.append(ResidualRecord("cocycle_identity", (), cocycle_identity_residual(rep.algebra, rep.cocycle)))
    return ValidationReport(records, tol.abs_tol)


def central_extension(rep: Representation) -> CentralExtension:
    """Build g# and its generators ``(A_1, ..., A_d, i 1)``.

    Raises ValueError when ``w`` is not a 2-cocycle, since the twisted
    bracket then fails the Jacobi identity.
    """
    d = rep.dim
    entries = list(rep.algebra.structure)
    for i in range(d):
        for j in range(i + 1, d):
            if rep.cocycle[i, j] != 0.0:
                entries.append((i, j, d, rep.cocycle[i, j]))
    names = list(rep.algebra.basis_names) + ["center"]
    try:
        ext_alg = LieAlgebra(d + 1, entries, names)
    except ValueError as exc:
        raise ValueError(f"cocycle is not a 2-cocycle: {exc}") from exc
    gens = np.concatenate([rep.generators, 1j * np.eye(rep.hdim)[None]], axis=0)
    return CentralExtension(rep, ext_alg, gens)


def drho(rep, xi) -> np.ndarray:
    """``sum_i xi_i A_i`` for a Representation (g coords) or CentralExtension (g# coords)."""
    xi = np.asarray(xi, dtype=float)
    if xi.shape != (rep.generators.shape[0],):
        raise ValueError(f"expected {rep.generators.shape[0]} coordinates, got shape {xi.shape}")
    if not np.all(np.isfinite(xi)):
        raise ValueError("algebra element has non-finite coordinates")
    return np.tensordot(xi, rep.generators, axes=1)


def drho_k(rep, xis: Sequence) -> np.ndarray:
    """Ordered product ``drho(xi_1) ... drho(xi_k)``."""
    if len(xis) == 0:
        raise ValueError("need at least one algebra element")
    out = drho(rep, xis[0])
    for xi in xis[1:]:
        out = out @ drho(rep, xi)
    return out


def seminorm_pB(rep, B: Sequence[Sequence], psi) -> float:
    """``max over tuples in B of |drho_k(tuple) psi|``.

    B is a finite set of equal-length tuples standing in for a bounded set.
    """
    if len(B) == 0:
        raise ValueError("B must be nonempty")
    k = len(B[0])
    if k < 1 or any(len(t) != k for t in B):
        raise ValueError("all tuples in B must have the same length k >= 1")
    psi = as_vector(psi, rep.generators.shape[1])
    return max(float(np.linalg.norm(drho_k(rep, t) @ psi)) for t in B)


def adjoint(ext: CentralExtension, eta, xi) -> np.ndarray:
    """``Ad_{exp eta} xi = exp(ad_eta) xi`` in g# coordinates."""
    return matrix_exp(ext.algebra.ad(eta)).real @ np.asarray(xi, dtype=float)


def group_element(ext: CentralExtension, eta) -> np.ndarray:
    """``rho(exp eta) = exp(drho#(eta))``."""
    return matrix_exp(drho(ext, eta))


class PolynomialPath:
    """``x -> sum_p x**p coeffs[p]``, a polynomial plot into a vector space."""

    def __init__(self, coeffs):
        coeffs = np.asarray(coeffs)
        if coeffs.ndim != 2 or coeffs.shape[0] == 0:
            raise ValueError("coeffs must have shape (degree + 1, dim)")
        self.coeffs = coeffs

    def __call__(self, x: float) -> np.ndarray:
        powers = float(x) ** np.arange(self.coeffs.shape[0])
        return powers @ self.coeffs

    def derivative(self) -> "PolynomialPath":
        if self.coeffs.shape[0] == 1:
            return PolynomialPath(np.zeros_like(self.coeffs))
        p = np.arange(1, self.coeffs.shape[0])
        return PolynomialPath(self.coeffs[1:] * p[:, None])


def plot_derivative_check(rep, xi_path: PolynomialPath, psi_path: PolynomialPath, s: float, t: float,
                          v1: float = 1.0, v2: float = 1.0, h: float = DEFAULT_TOL.fd_step) -> float:
    """Product rule for ``(s, t) -> drho(xi_s) psi_t`` along direction (v1, v2).

    Compares the central difference in the direction (v1, v2) against
    ``drho(d xi_s) psi_t v1 + drho(xi_s) d psi_t v2``.
    """
    def along(eps):
        return drho(rep, xi_path(s + eps * v1).real) @ psi_path(t + eps * v2)

    fd = fd_derivative(along, 0.0, h)
    dxi = xi_path.derivative()(s).real
    dpsi = psi_path.derivative()(t)
    exact = v1 * (drho(rep, dxi) @ psi_path(t)) + v2 * (drho(rep, xi_path(s).real) @ dpsi)
    return float(np.linalg.norm(fd - exact))
