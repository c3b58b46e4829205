"""Charts, Kähler data and the prequantum connection on P(V), S(V), L(V).

Projective charts are centred at a unit vector ``psi`` and take values in
the complex hyperplane ``{v : <psi, v> = 0}``; sphere charts take values in
the real hyperplane ``{v : Re <psi, v> = 0}``. All inner products are
antilinear in the first slot.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .numeric import DEFAULT_TOL, as_vector, fd_derivative

CHART_GUARD = 1e-10
PHASE_ZERO = 1e-12
UNIT_TOL = 1e-12


class ChartDomainError(ValueError):
    """A point lies outside (or on the boundary of) a chart domain."""


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    """Unit representative of a ray, with its first nonzero entry real positive."""

    rep: np.ndarray

    def __post_init__(self):
        v = as_vector(self.rep)
        if abs(np.linalg.norm(v) - 1.0) > UNIT_TOL:
            raise ValueError("representative must have unit norm")
        first = _first_nonzero(v)
        if abs(v[first].imag) > UNIT_TOL or v[first].real <= 0:
            raise ValueError("first nonzero entry must be real and positive")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "rep", v)

    @classmethod
    def from_vector(cls, chi) -> "ProjectivePoint":
        v = as_vector(chi)
        nrm = np.linalg.norm(v)
        if nrm == 0:
            raise ValueError("the zero vector does not define a ray")
        v = v / nrm
        z = v[_first_nonzero(v)]
        v = v * (abs(z) / z)
        k = _first_nonzero(v)
        v[k] = abs(v[k])
        return cls(v)

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        return self.rep.shape == other.rep.shape and np.allclose(self.rep, other.rep, rtol=0, atol=1e-12)

    def __hash__(self):
        return hash(self.rep.tobytes())


def _first_nonzero(v: np.ndarray) -> int:
    idx = np.flatnonzero(np.abs(v) > PHASE_ZERO)
    if idx.size == 0:
        raise ValueError("vector has no entry above the phase threshold")
    return int(idx[0])


def _unit(psi) -> np.ndarray:
    if isinstance(psi, ProjectivePoint):
        return psi.rep
    v = as_vector(psi)
    if abs(np.linalg.norm(v) - 1.0) > 1e-10:
        raise ValueError("chart centre must be a unit vector")
    return v


def _pair(psi, x):
    psi = _unit(psi)
    return psi, as_vector(x, psi.size)


def project_out(psi, x) -> np.ndarray:
    """Remove the ``psi`` component: ``x - <psi, x> psi`` for unit ``psi``."""
    psi, x = _pair(psi, x)
    return x - np.vdot(psi, x) * psi


# ---------------------------------------------------------------- P(V)

def chart_p(psi, chi) -> np.ndarray:
    """``kappa_psi([chi]) = chi / <psi, chi> - psi``."""
    psi, chi = _pair(psi, chi)
    ip = np.vdot(psi, chi)
    if abs(ip) <= CHART_GUARD:
        raise ChartDomainError(f"<psi, chi> = {ip:.3g} is outside the chart domain")
    return chi / ip - psi


def chart_p_inv(psi, v) -> ProjectivePoint:
    """``[psi + v]`` as a normalized, phase-fixed representative."""
    psi, v = _pair(psi, v)
    return ProjectivePoint.from_vector(psi + v)


def transition_p(psi, psi2, v) -> np.ndarray:
    """Coordinate change ``v -> (psi + v) / <psi2, psi + v> - psi2``."""
    psi, v = _pair(psi, v)
    psi2 = _unit(psi2)
    x = psi + v
    ip = np.vdot(psi2, x)
    if abs(ip) <= CHART_GUARD:
        raise ChartDomainError("point is outside the overlap of the two charts")
    return x / ip - psi2


def transition_p_derivative(psi, psi2, v, dv) -> np.ndarray:
    """Derivative of :func:`transition_p` at ``v`` applied to ``dv``."""
    psi, v = _pair(psi, v)
    psi2 = _unit(psi2)
    dv = as_vector(dv, psi.size)
    x = psi + v
    ip = np.vdot(psi2, x)
    if abs(ip) <= CHART_GUARD:
        raise ChartDomainError("point is outside the overlap of the two charts")
    return dv / ip - x * np.vdot(psi2, dv) / ip**2


def transition_tangent(psi, v, dv) -> np.ndarray:
    """Push ``dv`` from chart ``psi`` at ``v`` to the chart centred at ``(psi+v)/|psi+v|``.

    Equals ``(dv - <psi', dv> psi') / |psi + v|``.
    """
    psi, v = _pair(psi, v)
    dv = as_vector(dv, psi.size)
    x = psi + v
    r = np.linalg.norm(x)
    psi2 = x / r
    return (dv - np.vdot(psi2, dv) * psi2) / r


def hermitean_local(v, dv, dw) -> complex:
    """Fubini-Study Hermitean form at chart coordinate ``v``.

    ``2 (<dv, dw> / (1 + |v|^2) - <dv, v><v, dw> / (1 + |v|^2)^2)``
    """
    v = as_vector(v)
    dv = as_vector(dv, v.size)
    dw = as_vector(dw, v.size)
    q = 1.0 + np.vdot(v, v).real
    return complex(2.0 * (np.vdot(dv, dw) / q - np.vdot(dv, v) * np.vdot(v, dw) / q**2))


def metric_g(v, dv, dw) -> float:
    return hermitean_local(v, dv, dw).real


def symplectic_omega(v, dv, dw) -> float:
    return hermitean_local(v, dv, dw).imag


# ---------------------------------------------------------------- S(V)

def chart_s(psi, chi) -> np.ndarray:
    """``chi / Re<psi, chi> - psi`` for unit ``chi`` with ``Re<psi, chi> > 0``."""
    psi, chi = _pair(psi, chi)
    re = np.vdot(psi, chi).real
    if re <= CHART_GUARD:
        raise ChartDomainError(f"Re<psi, chi> = {re:.3g} is outside the sphere chart")
    return chi / re - psi


def chart_s_inv(psi, v) -> np.ndarray:
    psi, v = _pair(psi, v)
    x = psi + v
    return x / np.linalg.norm(x)


def chart_s_inv_derivative(psi, v, dv) -> np.ndarray:
    """Tangent at ``chart_s_inv(psi, v)`` represented by chart direction ``dv``."""
    psi, v = _pair(psi, v)
    dv = as_vector(dv, psi.size)
    x = psi + v
    r = np.linalg.norm(x)
    return dv / r - x * np.vdot(x, dv).real / r**3


def alpha(psi, dv, tol: float = 1e-10) -> float:
    """Connection 1-form ``-i <psi, dv>`` on a tangent vector of the sphere."""
    psi, dv = _pair(psi, dv)
    ip = np.vdot(psi, dv)
    if abs(ip.real) > tol * max(1.0, np.linalg.norm(dv)):
        raise ValueError(f"not tangent to the sphere: Re<psi, dv> = {ip.real:.3g}")
    return float(ip.imag)


def alpha_local(v, dv, psi=None) -> float:
    """Connection form in the sphere chart at ``psi``.

    Without ``psi`` this is ``Im<v, dv> / (1 + |v|^2)``, which is exact when
    ``dv`` has no component along ``i psi`` (in particular on the complex
    hyperplane ``<psi, .> = 0``). Passing ``psi`` adds the vertical term
    ``Im<psi, dv> / (1 + |v|^2)`` so the value is exact on the whole chart.
    """
    v = as_vector(v)
    dv = as_vector(dv, v.size)
    q = 1.0 + np.vdot(v, v).real
    val = np.vdot(v, dv).imag
    if psi is not None:
        val += np.vdot(_unit(psi), dv).imag
    return float(val / q)


def curvature_check(v, dv, dw, h: float = DEFAULT_TOL.fd_step, psi=None):
    """Finite-difference exterior derivative of the connection vs the symplectic form.

    With constant vector fields ``dv`` and ``dw`` the Lie bracket vanishes, so
    ``d alpha(dv, dw) = L_dv alpha(dw) - L_dw alpha(dv)``. Both Lie derivatives
    are central differences of :func:`alpha_local` along straight lines.

    Returns ``(d_alpha, omega, residual)``. When ``psi`` is None the inputs
    are taken to lie in the complex hyperplane of the chart and ``omega`` is
    :func:`symplectic_omega`; otherwise ``omega`` is the pullback of the
    symplectic form along the bundle projection.
    """
    v = as_vector(v)
    dv = as_vector(dv, v.size)
    dw = as_vector(dw, v.size)
    ld_w = fd_derivative(lambda e: alpha_local(v + e * dv, dw, psi), 0.0, h)
    ld_v = fd_derivative(lambda e: alpha_local(v + e * dw, dv, psi), 0.0, h)
    d_alpha = float(ld_w - ld_v)
    if psi is None:
        omega = symplectic_omega(v, dv, dw)
    else:
        phi = chart_s_inv(psi, v)
        a = project_out(phi, chart_s_inv_derivative(psi, v, dv))
        b = project_out(phi, chart_s_inv_derivative(psi, v, dw))
        omega = float(2.0 * np.vdot(a, b).imag)
    return d_alpha, omega, abs(d_alpha - omega)


# ---------------------------------------------------------------- L(V)

def clutching(psi, psi2, chi) -> complex:
    """U(1) transition ``g_{psi psi2}([chi])`` of the sphere bundle."""
    psi = _unit(psi)
    psi2 = _unit(psi2)
    chi = as_vector(chi, psi.size)
    a = np.vdot(psi, chi)
    b = np.vdot(psi2, chi)
    if abs(a) <= CHART_GUARD or abs(b) <= CHART_GUARD:
        raise ChartDomainError("point is outside the overlap of the two charts")
    r = b / a
    return complex(r / abs(r))


def trivialization(psi, v, z) -> np.ndarray:
    """``tau_psi(v, z) = z (psi + v) / |psi + v|`` for ``|z| = 1``."""
    return complex(z) * chart_s_inv(psi, v)


def line_chart(psi, v, z) -> np.ndarray:
    """``Lambda_psi(v, z) = z (psi + v)``."""
    psi, v = _pair(psi, v)
    return complex(z) * (psi + v)


def bundle_transition(psi, psi2, v, z):
    """``(v, z) -> (kappa_{psi psi2}(v), <psi2, psi + v> z)``."""
    psi, v = _pair(psi, v)
    v2 = transition_p(psi, psi2, v)
    z2 = complex(np.vdot(_unit(psi2), psi + v)) * complex(z)
    return v2, z2
