"""Momentum map of the g#-action on P(H) and the identities it satisfies.

Everything here is evaluated at a single state ``psi`` (normalized unless a
function says otherwise) for a :class:`~momentkit.lie.CentralExtension`.
Elements of g# carry the central coordinate last; lifts of elements of g
use central coordinate 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lie import CentralExtension, adjoint, drho, group_element
from .numeric import DEFAULT_TOL, Tolerance, as_vector, max_principal_angle, real_nullspace, to_complex, to_real
from .projective import alpha, hermitean_local, project_out, symplectic_omega

TANGENT_TOL = 1e-10


@dataclass(frozen=True)
class Covector:
    """Linear functional on g#, ``lam(xi) = sum_i coords[i] xi[i]``."""

    coords: np.ndarray

    def __call__(self, xi) -> float:
        return float(np.dot(self.coords, np.asarray(xi, dtype=float)))

    @property
    def base(self) -> np.ndarray:
        return self.coords[:-1]

    @property
    def central(self) -> float:
        return float(self.coords[-1])


@dataclass(frozen=True)
class TwoCocycle:
    """Antisymmetric bilinear form on g given by its values on basis pairs."""

    mat: np.ndarray

    def __call__(self, xi, eta) -> float:
        return float(np.asarray(xi) @ self.mat @ np.asarray(eta))

    def cocycle_residual(self, algebra) -> float:
        """max |omega([x, y], z) + cyclic| over basis triples."""
        t = np.einsum("ijl,lk->ijk", algebra.c, self.mat)
        res = t + np.transpose(t, (1, 2, 0)) + np.transpose(t, (2, 0, 1))
        return float(np.max(np.abs(res))) if res.size else 0.0

    def antisymmetry_residual(self) -> float:
        return float(np.max(np.abs(self.mat + self.mat.T)))


@dataclass(frozen=True)
class HermitianFormOnAlgebra:
    mat: np.ndarray

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(0.5 * (self.mat + self.mat.conj().T))[0])

    def hermiticity_residual(self) -> float:
        return float(np.max(np.abs(self.mat - self.mat.conj().T)))


@dataclass(frozen=True)
class StabilizerBasis:
    """Basis of ``{xi in g# : drho(xi) psi in i R psi}`` with eigenvalues ``a``.

    ``basis[0]`` is always the central direction (``a = 1``).
    """

    basis: np.ndarray  # shape (k, d + 1)
    eigen: np.ndarray  # shape (k,)
    residuals: np.ndarray  # |drho(xi) psi - i a psi| per basis element

    @property
    def dim(self) -> int:
        return self.basis.shape[0]


@dataclass(frozen=True)
class KernelReport:
    direct: np.ndarray  # complex columns spanning Ker D mu (nullspace route)
    formula: np.ndarray  # complex columns spanning the orthogonal-complement formula
    max_angle: float
    injective: bool
    span_dim: int  # real dimension of drho(g#) psi
    hilbert_dim: int

    @property
    def dim(self) -> int:
        return self.direct.shape[1]

    @property
    def spans_complement(self) -> bool:
        """Whether drho(g#) psi spans the real complement of psi (dimension 2n - 1)."""
        return self.span_dim == 2 * self.hilbert_dim - 1

    @property
    def derivative_zero(self) -> bool:
        return self.dim == 2 * self.hilbert_dim - 2


def _state(ext: CentralExtension, psi, normalize: bool = False) -> np.ndarray:
    psi = as_vector(psi, ext.hdim)
    nrm = np.linalg.norm(psi)
    if nrm == 0:
        raise ValueError("the zero vector is not a state")
    if normalize:
        return psi / nrm
    if abs(nrm - 1.0) > 1e-10:
        raise ValueError(f"state must be normalized, |psi| = {nrm:.12g}")
    return psi


def _tangent(psi: np.ndarray, dv) -> np.ndarray:
    dv = as_vector(dv, psi.size)
    if abs(np.vdot(psi, dv)) > TANGENT_TOL * max(1.0, np.linalg.norm(dv)):
        raise ValueError("dv is not in the tangent hyperplane <psi, .> = 0")
    return dv


def orbit_vectors(ext: CentralExtension, psi) -> np.ndarray:
    """Columns ``drho#(e_k) psi`` for every basis vector of g#."""
    psi = as_vector(psi, ext.hdim)
    return np.einsum("kab,b->ak", ext.generators, psi)


def fundamental_field(ext: CentralExtension, xi, psi) -> np.ndarray:
    """``X_xi(psi) = drho#(xi) psi``, tangent to the sphere at ``psi``."""
    return drho(ext, xi) @ as_vector(psi, ext.hdim)


def fundamental_field_local(ext: CentralExtension, xi, psi, v) -> np.ndarray:
    """``X_xi`` in the sphere chart at ``psi``, evaluated at chart point ``v``.

    ``drho(xi)(psi + v) - Re<psi, drho(xi) v> (psi + v)``
    """
    psi = as_vector(psi, ext.hdim)
    v = as_vector(v, ext.hdim)
    A = drho(ext, xi)
    x = psi + v
    return A @ x - np.vdot(psi, A @ v).real * x


def raw_momentum(ext: CentralExtension, psi) -> np.ndarray:
    """``<psi, i drho(e_k) psi> / <psi, psi>`` as complex numbers, every coordinate numeric."""
    psi = as_vector(psi, ext.hdim)
    nn = np.vdot(psi, psi).real
    if nn == 0:
        raise ValueError("the zero vector is not a state")
    return np.einsum("a,kab,b->k", psi.conj(), 1j * ext.generators, psi) / nn


def momentum(ext: CentralExtension, psi) -> Covector:
    """Momentum map at the ray of ``psi`` (any nonzero representative).

    The central coordinate is ``<psi, i * i psi> / <psi, psi> = -1``
    identically and is stored as that constant.
    """
    psi = _state(ext, psi, normalize=True)
    vals = raw_momentum(ext, psi).real
    vals[-1] = -1.0
    return Covector(vals)


def comomentum_via_alpha(ext: CentralExtension, xi, psi) -> float:
    """``alpha_psi(-X_xi(psi))``."""
    psi = _state(ext, psi)
    return alpha(psi, -fundamental_field(ext, xi, psi))


def momentum_derivative(ext: CentralExtension, psi, dv) -> Covector:
    """``D mu(dv)(e_k) = 2 Re<i drho(e_k) psi, dv>`` for ``dv`` tangent to P(H)."""
    psi = _state(ext, psi)
    dv = _tangent(psi, dv)
    X = orbit_vectors(ext, psi)
    vals = 2.0 * (np.conj(1j * X).T @ dv).real
    vals[-1] = 0.0  # mu(center) is the constant -1
    return Covector(vals)


def _tangent_basis(psi: np.ndarray, tol: Tolerance) -> np.ndarray:
    """Real orthonormal basis (columns in R^2n) of ``{v : <psi, v> = 0}``."""
    F = np.vstack([to_real(psi), to_real(1j * psi)])
    return real_nullspace(F, tol)


def momentum_kernel(ext: CentralExtension, psi, tol: Tolerance = DEFAULT_TOL) -> KernelReport:
    """Kernel of ``D mu`` computed directly and via the complement formula.

    Direct route: nullspace of the real matrix of ``D mu`` on a real basis
    of the tangent hyperplane. Formula route: real orthogonal complement of
    ``i R psi + i drho(g#) psi`` in H.
    """
    psi = _state(ext, psi)
    n = ext.hdim
    Q = _tangent_basis(psi, tol)
    X = orbit_vectors(ext, psi)
    iX = to_real((1j * X).T)  # rows: i drho(e_k) psi in R^2n
    M = iX @ Q
    direct = to_complex((Q @ real_nullspace(M, tol)).T).T
    F = np.vstack([to_real(1j * psi)[None], iX])
    formula = to_complex(real_nullspace(F, tol).T).T
    angle = max_principal_angle(to_real(direct.T).T, to_real(formula.T).T)
    span_dim = 2 * n - real_nullspace(to_real(X.T), tol).shape[1]
    return KernelReport(direct, formula, angle, direct.shape[1] == 0, span_dim, n)


def ks_cocycle(ext: CentralExtension, psi, central_lift=None) -> TwoCocycle:
    """``omega(xi, eta) = 2 Im<drho(xi#) psi, drho(eta#) psi>`` on basis pairs of g.

    ``central_lift`` optionally gives the central coordinates of the lifts
    ``e_k#``; the result does not depend on them.
    """
    psi = _state(ext, psi)
    V = orbit_vectors(ext, psi)[:, :-1]
    if central_lift is not None:
        V = V + 1j * np.outer(psi, np.asarray(central_lift, dtype=float))
    return TwoCocycle(2.0 * (V.conj().T @ V).imag)


def delta_map(ext: CentralExtension, lam) -> TwoCocycle:
    """``(delta lam)(e_i, e_j) = lam([e_i#, e_j#])``."""
    coords = lam.coords if isinstance(lam, Covector) else np.asarray(lam, dtype=float)
    d = ext.dim - 1
    mat = np.einsum("ijk,k->ij", ext.algebra.c[:d, :d, :], coords)
    return TwoCocycle(mat)


def check_omega_equals_delta_mu(ext: CentralExtension, psi) -> float:
    return float(np.max(np.abs(ks_cocycle(ext, psi).mat - delta_map(ext, momentum(ext, psi)).mat), initial=0.0))


def hermitian_h(ext: CentralExtension, psi) -> HermitianFormOnAlgebra:
    """``h_ij = 2 <P drho(e_i) psi, P drho(e_j) psi>`` with P removing the psi component."""
    psi = _state(ext, psi)
    V = orbit_vectors(ext, psi)[:, :-1]
    PV = V - np.outer(psi, psi.conj() @ V)
    return HermitianFormOnAlgebra(2.0 * (PV.conj().T @ PV))


def check_hamiltonian(ext: CentralExtension, psi, xi, dv) -> float:
    """``|Omega(P X_xi, dv) - D mu(dv)(xi)|`` at ``[psi]``."""
    psi = _state(ext, psi)
    dv = _tangent(psi, dv)
    zero = np.zeros_like(psi)
    lhs = symplectic_omega(zero, project_out(psi, fundamental_field(ext, xi, psi)), dv)
    rhs = momentum_derivative(ext, psi, dv)(xi)
    return abs(lhs - rhs)


def check_equivariance(ext: CentralExtension, eta, psi, xi) -> float:
    """``|mu(rho(exp eta) psi)(xi) - mu(psi)(Ad_{exp(-eta)} xi)|``."""
    psi = _state(ext, psi)
    eta = np.asarray(eta, dtype=float)
    g = group_element(ext, eta)
    lhs = momentum(ext, g @ psi)(xi)
    rhs = momentum(ext, psi)(adjoint(ext, -eta, xi))
    return abs(lhs - rhs)


def kahler_invariance_check(ext: CentralExtension, eta, psi, dv, dw, v=None) -> float:
    """Invariance of the Hermitean form under ``rho(exp eta)``.

    Chart coordinates at ``psi`` map to chart coordinates at ``rho(g) psi``
    by ``x -> rho(g) x``; tangents are pushed the same way and then
    projected to the target hyperplane.
    """
    psi = _state(ext, psi)
    dv = _tangent(psi, dv)
    dw = _tangent(psi, dw)
    v = np.zeros_like(psi) if v is None else _tangent(psi, v)
    g = group_element(ext, eta)
    gpsi = g @ psi
    before = hermitean_local(v, dv, dw)
    after = hermitean_local(project_out(gpsi, g @ v), project_out(gpsi, g @ dv), project_out(gpsi, g @ dw))
    return abs(after - before)


def stabilizer(ext: CentralExtension, psi, tol: Tolerance = DEFAULT_TOL) -> StabilizerBasis:
    """Real nullspace of ``xi -> P drho#(xi) psi``, central direction first."""
    psi = _state(ext, psi)
    d = ext.dim - 1
    V = orbit_vectors(ext, psi)[:, :-1]
    PV = V - np.outer(psi, psi.conj() @ V)
    null = real_nullspace(to_real(PV.T).T, tol)
    basis = np.zeros((1 + null.shape[1], d + 1))
    basis[0, -1] = 1.0
    basis[1:, :d] = null.T
    eigen = np.empty(basis.shape[0])
    residuals = np.empty(basis.shape[0])
    for k, xi in enumerate(basis):
        x = fundamental_field(ext, xi, psi)
        a = np.vdot(psi, x).imag
        eigen[k] = a
        residuals[k] = np.linalg.norm(x - 1j * a * psi)
    eigen[0] = 1.0
    return StabilizerBasis(basis, eigen, residuals)


def stabilizer_bracket_residual(ext: CentralExtension, stab: StabilizerBasis) -> float:
    """Distance of brackets of basis elements from the span of the basis."""
    Q, _ = np.linalg.qr(stab.basis.T)
    worst = 0.0
    for i in range(stab.dim):
        for j in range(i + 1, stab.dim):
            b = ext.algebra.bracket(stab.basis[i], stab.basis[j])
            worst = max(worst, float(np.linalg.norm(b - Q @ (Q.T @ b))))
    return worst


@dataclass(frozen=True)
class CharacterReport:
    in_stabilizer: bool
    stabilizer_residual: float
    residual: float  # max_t |F(exp t xi) - exp(-i t mu(xi))|
    modulus_residual: float  # max_t | |F(exp t xi)| - 1 |


def default_t_grid() -> np.ndarray:
    return np.linspace(0.0, 2.0 * np.pi, 64)


def character_check(ext: CentralExtension, psi, xi, t_grid=None, stab_tol: float = 1e-8) -> CharacterReport:
    """Compare ``F(g) = <psi, rho(g) psi>`` on ``exp(t xi)`` with ``exp(-i t mu(xi))``.

    A ``xi`` outside the stabilizer is reported, not rejected.
    """
    psi = _state(ext, psi)
    xi = np.asarray(xi, dtype=float)
    ts = default_t_grid() if t_grid is None else np.asarray(t_grid, dtype=float)
    x = fundamental_field(ext, xi, psi)
    a = np.vdot(psi, x).imag
    stab_res = float(np.linalg.norm(x - 1j * a * psi))
    m = momentum(ext, psi)(xi)
    res = 0.0
    mod = 0.0
    for t in ts:
        F = np.vdot(psi, group_element(ext, t * xi) @ psi)
        res = max(res, abs(F - np.exp(-1j * t * m)))
        mod = max(mod, abs(abs(F) - 1.0))
    return CharacterReport(stab_res <= stab_tol, stab_res, float(res), float(mod))


def stabilizer_momentum_inclusion_check(ext: CentralExtension, psi, eta, xi=None) -> float:
    """``|mu(rho(exp eta) psi)(xi) - mu(psi)(xi)|``, maximized over a basis when ``xi`` is None."""
    psi = _state(ext, psi)
    g = group_element(ext, eta)
    diff = momentum(ext, g @ psi).coords - momentum(ext, psi).coords
    if xi is None:
        return float(np.max(np.abs(diff)))
    return abs(float(np.dot(diff, np.asarray(xi, dtype=float))))
