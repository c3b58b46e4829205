import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from momentkit import moment as mm
from momentkit import projective as pg
from momentkit.lie import central_extension
from momentkit.models import su2_spin, torus_diag, weyl_truncated
from momentkit.numeric import fd_derivative, matrix_exp, max_principal_angle, random_state, real_nullspace, to_complex, to_real
from momentkit.verify import random_tangent

from .conftest import philox

SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]]),
    np.diag([1.0 + 0j, -1.0]),
)
e1 = np.array([1.0 + 0j, 0.0])
e2 = np.array([0.0 + 0j, 1.0])
CENTER4 = np.array([0.0, 0, 0, 1])


def basis(n, k):
    v = np.zeros(n, dtype=complex)
    v[k] = 1
    return v


# ------------------------------------------------------------------ oracles

def bloch_oracle(psi):
    """<psi, (sigma_a / 2) psi> / <psi, psi> for a qubit."""
    return np.array([np.vdot(psi, s @ psi).real / 2 for s in SIGMA]) / np.vdot(psi, psi).real


def test_oracle_bloch_vector(spin_half):
    rng = philox(30)
    for _ in range(100):
        psi = random_state(rng, 2)
        mu = mm.momentum(spin_half, psi)
        assert np.allclose(mu.base, bloch_oracle(psi), atol=1e-15)
        assert abs(np.linalg.norm(mu.base) - 0.5) <= 1e-10


def test_oracle_momentum_derivative_finite_differences(zoo_ext):
    rng = philox(31)
    for _ in range(20):
        psi = random_state(rng, zoo_ext.hdim, zoo_ext.safe_levels)
        dv = random_tangent(rng, psi, zoo_ext.safe_levels)
        h = 1e-4
        fd = fd_derivative(lambda t: mm.momentum(zoo_ext, pg.chart_p_inv(psi, t * dv).rep).coords, 0.0, h)
        assert np.max(np.abs(fd - mm.momentum_derivative(zoo_ext, psi, dv).coords)) <= 1e-7


def test_oracle_fundamental_field_is_chart_velocity_of_the_flow(zoo_ext):
    rng = philox(32)
    for _ in range(10):
        psi = random_state(rng, zoo_ext.hdim)
        v = random_tangent(rng, psi) * 0.5 + 0.2j * psi
        xi = rng.standard_normal(zoo_ext.dim)
        phi = pg.chart_s_inv(psi, v)
        A = mm.drho(zoo_ext, xi)
        fd = fd_derivative(lambda t: pg.chart_s(psi, matrix_exp(A, t) @ phi), 0.0, 1e-5)
        assert np.linalg.norm(fd - mm.fundamental_field_local(zoo_ext, xi, psi, v)) < 1e-7


def torus_kernel_oracle(weights, psi):
    """Kernel of D mu for a diagonal torus: Re(conj(psi_k) dv_k) = 0 for every k with w_k != 0."""
    n = psi.size
    rows = [to_real(psi).reshape(1, -1), to_real(1j * psi).reshape(1, -1)]  # tangent: <psi, dv> = 0
    for k, w in enumerate(weights):
        if w:
            rows.append(to_real(psi[k] * np.eye(n)[k]).reshape(1, -1))
    return to_complex(real_nullspace(np.vstack(rows)).T).T


def test_oracle_torus_kernel():
    rng = philox(33)
    for weights in ([1, 1, 1], [1, 2, 0], [3, -1, 2, 5]):
        ext = central_extension(torus_diag(weights))
        n = len(weights)
        for psi in [random_state(rng, n) for _ in range(5)] + [basis(n, 0), (basis(n, 0) + basis(n, 1)) / np.sqrt(2)]:
            kr = mm.momentum_kernel(ext, psi)
            oracle = torus_kernel_oracle(weights, psi)
            assert kr.dim == oracle.shape[1]
            assert max_principal_angle(to_real(kr.direct.T).T, to_real(oracle.T).T) <= 1e-8


def test_oracle_hermitian_h_brute_force(zoo_ext):
    rng = philox(34)
    psi = random_state(rng, zoo_ext.hdim)
    d = zoo_ext.dim - 1
    h = mm.hermitian_h(zoo_ext, psi).mat
    for i in range(d):
        for j in range(d):
            a = zoo_ext.generators[i] @ psi
            b = zoo_ext.generators[j] @ psi
            pa = a - np.vdot(psi, a) * psi
            pb = b - np.vdot(psi, b) * psi
            assert abs(h[i, j] - 2 * np.vdot(pa, pb)) < 1e-14


# ------------------------------------------------------------------ worked examples

def test_fundamental_field_examples(spin_half):
    psi = random_state(philox(35), 2)
    assert np.allclose(mm.fundamental_field(spin_half, CENTER4, psi), 1j * psi)
    assert np.allclose(mm.fundamental_field(spin_half, [1, 0, 0, 0], e1), -0.5j * e2)
    assert np.array_equal(mm.fundamental_field(spin_half, np.zeros(4), psi), np.zeros(2))


def test_momentum_examples(spin_half):
    assert np.allclose(mm.momentum(spin_half, e1).coords, [0, 0, 0.5, -1], atol=1e-16)
    tor = central_extension(torus_diag([1, 1, 1]))
    assert np.array_equal(mm.momentum(tor, basis(3, 0)).coords, [-1, 0, 0, -1])
    for k in range(3):
        assert mm.momentum(tor, basis(3, k)).coords[k] == -1
    w = central_extension(weyl_truncated(10))
    assert np.allclose(mm.momentum(w, basis(10, 0)).coords, [0, 0, -1], atol=1e-16)


def test_momentum_rejects_zero_state(spin_half):
    with pytest.raises(ValueError):
        mm.momentum(spin_half, np.zeros(2))


def test_comomentum_examples(spin_half):
    psi = random_state(philox(36), 2)
    assert mm.comomentum_via_alpha(spin_half, CENTER4, psi) == pytest.approx(-1.0)
    assert mm.comomentum_via_alpha(spin_half, [0, 0, 1, 0], e1) == pytest.approx(0.5)


def test_momentum_derivative_examples(spin_half):
    assert np.array_equal(mm.momentum_derivative(spin_half, e1, np.zeros(2)).coords, np.zeros(4))
    assert mm.momentum_derivative(spin_half, e1, e2)([1, 0, 0, 0]) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        mm.momentum_derivative(spin_half, e1, e1)


def test_kernel_examples(spin_half):
    kr = mm.momentum_kernel(spin_half, e1)
    assert kr.injective and kr.dim == 0 and kr.spans_complement
    tor = central_extension(torus_diag([1, 1]))
    kr = mm.momentum_kernel(tor, e1)
    # e1 is a common eigenvector: D mu = 0 and the kernel is the whole tangent space span_R{e2, i e2}
    assert kr.derivative_zero and kr.dim == 2
    assert max_principal_angle(to_real(kr.direct.T).T, to_real(np.array([e2, 1j * e2])).T) < 1e-12
    assert mm.stabilizer(tor, e1).dim == tor.dim


def test_ks_cocycle_examples(spin_half):
    om = mm.ks_cocycle(spin_half, e1)
    assert om.mat[0, 1] == pytest.approx(0.5)
    assert om.mat[0, 2] == 0 and om.mat[1, 2] == 0
    assert om.antisymmetry_residual() == 0
    tor = central_extension(torus_diag([1, 2, 3]))
    real_psi = np.array([0.6, 0.0, 0.8]) + 0j
    assert np.all(mm.ks_cocycle(tor, real_psi).mat == 0)
    psi = random_state(philox(37), 2)
    shifted = mm.ks_cocycle(spin_half, psi, central_lift=[0.3, -2.0, 5.0])
    assert np.max(np.abs(shifted.mat - mm.ks_cocycle(spin_half, psi).mat)) <= 1e-12


def test_delta_map_examples(spin_half):
    tor = central_extension(torus_diag([1, 1]))
    assert np.all(mm.delta_map(tor, [0.3, -0.2, 7.0]).mat == 0)
    lam = mm.momentum(spin_half, e1)
    assert mm.delta_map(spin_half, lam).mat[0, 1] == pytest.approx(0.5)
    w = central_extension(weyl_truncated(8))
    lam = mm.momentum(w, random_state(philox(38), 8, 6))
    assert np.array_equal(mm.delta_map(w, lam).mat, -w.base.cocycle)


def test_omega_delta_mu_spin_half(spin_half):
    assert mm.check_omega_equals_delta_mu(spin_half, e1) <= 1e-15


def test_hermitian_h_examples(spin_half):
    h = mm.hermitian_h(spin_half, e1).mat
    assert np.allclose(h, 0.5 * np.array([[1, 1j, 0], [-1j, 1, 0], [0, 0, 0]]), atol=1e-16)
    tor = central_extension(torus_diag([1, 2, 3]))
    assert np.all(mm.hermitian_h(tor, basis(3, 1)).mat == 0)


def test_hamiltonian_examples(spin_half):
    psi = random_state(philox(39), 2)
    dv = random_tangent(philox(40), psi)
    assert mm.check_hamiltonian(spin_half, psi, CENTER4, dv) <= 1e-15
    assert mm.momentum_derivative(spin_half, psi, dv)(CENTER4) == 0
    lhs = pg.symplectic_omega(np.zeros(2), pg.project_out(e1, mm.fundamental_field(spin_half, [1, 0, 0, 0], e1)), e2)
    assert lhs == pytest.approx(1.0)
    assert mm.check_hamiltonian(spin_half, e1, [1, 0, 0, 0], e2) <= 1e-15


def test_equivariance_examples(spin_half):
    tor = central_extension(torus_diag([1, 2, 3]))
    rng = philox(41)
    for _ in range(5):
        assert mm.check_equivariance(tor, rng.standard_normal(4), random_state(rng, 3), rng.standard_normal(4)) <= 1e-14
    eta = [0, 0, np.pi / 2, 0]
    g = mm.group_element(spin_half, eta)
    assert abs(mm.momentum(spin_half, g @ e1)([1, 0, 0, 0])) < 1e-15
    assert mm.check_equivariance(spin_half, eta, e1, [1, 0, 0, 0]) <= 1e-15


def test_kahler_examples(zoo_ext):
    rng = philox(42)
    psi = random_state(rng, zoo_ext.hdim)
    dv, dw = random_tangent(rng, psi), random_tangent(rng, psi)
    assert mm.kahler_invariance_check(zoo_ext, np.zeros(zoo_ext.dim), psi, dv, dw) <= 1e-15
    central = np.zeros(zoo_ext.dim)
    central[-1] = 1.3
    assert mm.kahler_invariance_check(zoo_ext, central, psi, dv, dw) <= 1e-14


def test_stabilizer_examples(spin_half):
    tor = central_extension(torus_diag([2, -1, 3]))
    for k, w in enumerate([2, -1, 3]):
        stab = mm.stabilizer(tor, basis(3, k))
        assert stab.dim == 4
        # eigenvalue of each base generator at e_k is its weight there, or 0
        for xi, a in zip(stab.basis, stab.eigen):
            expected = 1.0 if xi[-1] == 1 else float(np.dot(xi[:3], [w if j == k else 0 for j in range(3)]))
            assert a == pytest.approx(expected)
    stab = mm.stabilizer(spin_half, e1)
    assert stab.dim == 2
    assert np.allclose(np.abs(stab.basis[1]), [0, 0, 1, 0])
    assert stab.eigen[0] == 1
    assert stab.eigen[1] * stab.basis[1][2] == pytest.approx(-0.5)
    for _ in range(10):
        assert mm.stabilizer(spin_half, random_state(philox(43 + _), 2)).dim == 2


def test_character_examples(spin_half):
    rng = philox(44)
    psi = random_state(rng, 2)
    ts = mm.default_t_grid()
    rep = mm.character_check(spin_half, psi, CENTER4)
    assert rep.in_stabilizer and rep.residual <= 1e-14
    F = [np.vdot(e1, mm.group_element(spin_half, [0, 0, t, 0]) @ e1) for t in ts]
    assert np.allclose(F, np.exp(-0.5j * ts), atol=1e-15)
    assert mm.character_check(spin_half, e1, [0, 0, 1, 0]).residual <= 1e-14
    tor = central_extension(torus_diag([1, 1, 1]))
    for k in range(3):
        xi = np.zeros(4)
        xi[k] = 1
        assert mm.momentum(tor, basis(3, k))(xi) == -1
        assert mm.character_check(tor, basis(3, k), xi).residual <= 1e-14
    off = mm.character_check(spin_half, e1, [1, 0, 0, 0])
    assert not off.in_stabilizer and off.residual > 0.1


def test_stabilizer_inclusion_examples(spin_half):
    psi = random_state(philox(45), 2)
    assert mm.stabilizer_momentum_inclusion_check(spin_half, psi, 2.7 * CENTER4) <= 1e-15
    for t in (0.3, 1.0, 4.0):
        assert mm.stabilizer_momentum_inclusion_check(spin_half, e1, [0, 0, t, 0]) <= 1e-15


# ------------------------------------------------------------------ properties

@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), model=st.sampled_from(["su2:1", "su2:2", "torus", "weyl"]),
       re=st.floats(-5, 5), im=st.floats(-5, 5))
def test_phase_and_scale_invariance(seed, model, re, im):
    c = complex(re, im)
    if abs(c) < 1e-3:
        c = 1.0
    ext = central_extension({"su2:1": su2_spin(1), "su2:2": su2_spin(2), "torus": torus_diag([1, 2, 3]),
                             "weyl": weyl_truncated(6)}[model])
    psi = random_state(np.random.default_rng(seed), ext.hdim)
    a, b = mm.momentum(ext, psi), mm.momentum(ext, c * psi)
    assert np.max(np.abs(a.coords - b.coords)) <= 1e-12
    assert a.central == -1.0 and b.central == -1.0


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), two_j=st.integers(1, 4))
def test_cocycle_identities_property(seed, two_j):
    ext = central_extension(su2_spin(two_j))
    rng = np.random.default_rng(seed)
    psi = random_state(rng, ext.hdim)
    om = mm.ks_cocycle(ext, psi)
    assert om.cocycle_residual(ext.base.algebra) <= 1e-12
    assert mm.check_omega_equals_delta_mu(ext, psi) <= 1e-12
    h = mm.hermitian_h(ext, psi)
    assert h.min_eigenvalue() >= -1e-10
    assert np.max(np.abs(h.mat.imag - om.mat)) <= 1e-12
    assert h.hermiticity_residual() <= 1e-14


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), two_j=st.integers(1, 4))
def test_su2_momentum_norm_bounded_by_spin(seed, two_j):
    ext = central_extension(su2_spin(two_j))
    psi = random_state(np.random.default_rng(seed), ext.hdim)
    assert np.linalg.norm(mm.momentum(ext, psi).base) <= two_j / 2 + 1e-12


def test_spin_one_extremes():
    ext = central_extension(su2_spin(2))
    norms = [np.linalg.norm(mm.momentum(ext, basis(3, k)).base) for k in range(3)]
    assert norms == pytest.approx([1.0, 0.0, 1.0], abs=1e-15)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), model=st.sampled_from(["su2:1", "su2:2", "torus", "weyl"]))
def test_kernel_routes_agree_property(seed, model):
    ext = central_extension({"su2:1": su2_spin(1), "su2:2": su2_spin(2), "torus": torus_diag([1, 0, 2]),
                             "weyl": weyl_truncated(6)}[model])
    psi = random_state(np.random.default_rng(seed), ext.hdim, ext.safe_levels)
    kr = mm.momentum_kernel(ext, psi)
    assert kr.max_angle <= 1e-8
    assert kr.injective == kr.spans_complement
    assert kr.derivative_zero == (mm.stabilizer(ext, psi).dim == ext.dim)
    for col in kr.direct.T:
        assert np.max(np.abs(mm.momentum_derivative(ext, psi, col).coords)) <= 1e-10
