"""Seeded verification suites and the CSV report they produce.

Each suite draws its samples from its own Philox stream keyed on
(seed, model, suite), so selecting a subset of suites does not change the
samples of the others and reports are byte-identical for a fixed config.
"""

from __future__ import annotations

import csv
import io
import zlib
from dataclasses import dataclass, field

import numpy as np

from . import moment as mm
from . import projective as pg
from .lie import (
    CentralExtension,
    PolynomialPath,
    adjoint,
    central_extension,
    closure_defect,
    group_element,
    plot_derivative_check,
    seminorm_pB,
    validate,
)
from .numeric import DEFAULT_TOL, Tolerance, fd_derivative, random_state

SUITES = ("geometry", "hamiltonian", "cocycle", "equivariance", "stabilizer", "plots5")
DEFAULT_MODELS = ("su2:1", "su2:2", "torus:3", "weyl:12")
GEOMETRY_DIM = 8
LEAK_TOL = 1e-12
CSV_HEADER = "suite,check,sample,residual,threshold,pass"


@dataclass(frozen=True)
class Record:
    suite: str
    check: str
    sample: int
    residual: float
    threshold: float

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.threshold)


@dataclass
class Report:
    seed: int
    models: tuple
    suites: tuple
    samples: int
    tol: Tolerance
    records: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def sorted_records(self) -> list:
        order = {s: k for k, s in enumerate(("validate",) + SUITES)}
        return sorted(self.records, key=lambda r: (order.get(r.suite, 99), r.check, r.sample))

    def summary(self) -> dict:
        out = {}
        for r in self.sorted_records():
            s = out.setdefault(r.suite, {"checks": 0, "failed": 0, "max_residual": 0.0})
            s["checks"] += 1
            s["failed"] += 0 if r.passed else 1
            if not r.residual <= s["max_residual"]:
                s["max_residual"] = r.residual
        return out

    def max_residual(self, check_suffix: str) -> float:
        vals = [r.residual for r in self.records if r.check.endswith(check_suffix)]
        return max(vals) if vals else 0.0

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("# momentkit verify report\n")
        buf.write(f"# seed={self.seed} bitgen=Philox\n")
        buf.write(f"# models={';'.join(self.models)}\n")
        buf.write(f"# suites={','.join(self.suites)} samples={self.samples}\n")
        buf.write(f"# tol abs={self.tol.abs_tol:g} rel={self.tol.rel_tol:g} "
                  f"null={self.tol.nullspace_tol:g} fd_step={self.tol.fd_step:g}\n")
        buf.write(CSV_HEADER + "\n")
        writer = csv.writer(buf, lineterminator="\n")
        for r in self.sorted_records():
            writer.writerow([r.suite, r.check, r.sample, f"{r.residual:.6e}", f"{r.threshold:.1e}", int(r.passed)])
        for suite, s in self.summary().items():
            buf.write(f"# summary suite={suite} checks={s['checks']} failed={s['failed']} "
                      f"max_residual={s['max_residual']:.6e}\n")
        buf.write(f"# overall={'PASS' if self.passed else 'FAIL'}\n")
        return buf.getvalue()


def suite_rng(seed: int, model: str, suite: str) -> np.random.Generator:
    key = zlib.crc32(f"{model}/{suite}".encode())
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed) & (2**64 - 1), key])))


# ------------------------------------------------------------------ sampling

def random_ball(rng: np.random.Generator, dim: int, radius: float = 1.0) -> np.ndarray:
    x = rng.standard_normal(dim)
    return x / np.linalg.norm(x) * radius * rng.uniform() ** (1.0 / dim)


def random_tangent(rng: np.random.Generator, psi: np.ndarray, levels: int | None = None) -> np.ndarray:
    """Unit vector complex-orthogonal to ``psi``."""
    v = pg.project_out(psi, random_state(rng, psi.size, levels))
    return v / np.linalg.norm(v)


def state_levels(ext) -> int | None:
    return ext.safe_levels


def sample_state(ext, rng) -> np.ndarray:
    return random_state(rng, ext.hdim, state_levels(ext))


def orbit_leak(ext: CentralExtension, eta, psi, n_t: int = 9) -> float:
    """max over t in [0, 1] of the norm of ``exp(t drho(eta)) psi`` outside the safe levels."""
    if ext.safe_levels is None:
        return 0.0
    worst = 0.0
    for t in np.linspace(0.0, 1.0, n_t)[1:]:
        phi = group_element(ext, t * np.asarray(eta)) @ psi
        worst = max(worst, float(np.linalg.norm(phi[ext.safe_levels:])))
    return worst


def sample_group_pair(ext: CentralExtension, rng):
    """State and group direction for checks that move states along orbits.

    Truncated models only satisfy their commutation relations on the safe
    levels, so the state is drawn from the lower half of them and ``eta``
    is halved until the whole orbit segment stays inside (to ``LEAK_TOL``).
    """
    if ext.safe_levels is None:
        return sample_state(ext, rng), random_ball(rng, ext.dim)
    psi = random_state(rng, ext.hdim, max(1, ext.safe_levels // 2))
    eta = random_ball(rng, ext.dim)
    for _ in range(80):
        if orbit_leak(ext, eta, psi) <= LEAK_TOL:
            break
        eta = eta / 2
    return psi, eta


def _safe(fn, *args):
    try:
        return float(fn(*args))
    except (ValueError, ArithmeticError, np.linalg.LinAlgError):
        return float("inf")


# ------------------------------------------------------------------ suites

def geometry_suite(rng, samples: int, tol: Tolerance = DEFAULT_TOL, n: int = GEOMETRY_DIM):
    """Chart coherence, Kähler data and curvature on C^n (model independent)."""
    out = []
    h = tol.fd_step

    def add(check, k, res, thr):
        out.append(("geometry", check, k, res, thr))

    for k in range(samples):
        psi = random_state(rng, n)
        v = random_tangent(rng, psi) * rng.uniform()
        dv = random_tangent(rng, psi)
        dw = random_tangent(rng, psi)
        add("curvature", k, pg.curvature_check(v, dv, dw, h)[2], 1e-6)
        # full sphere chart: tangents may have a component along i psi
        sv = v + 1j * rng.standard_normal() * psi * 0.5
        sdv = dv + 1j * rng.standard_normal() * psi
        sdw = dw + 1j * rng.standard_normal() * psi
        add("curvature_sphere", k, pg.curvature_check(sv, sdv, sdw, h, psi=psi)[2], 1e-6)

        add("roundtrip_p", k, float(np.linalg.norm(pg.chart_p(psi, pg.chart_p_inv(psi, v).rep) - v)), 1e-12)
        add("roundtrip_s", k, float(np.linalg.norm(pg.chart_s(psi, pg.chart_s_inv(psi, sv)) - sv)), 1e-12)

        psi1, psi2 = _overlapping(rng, n, psi)
        direct = pg.transition_p(psi, psi2, v)
        chained = pg.transition_p(psi1, psi2, pg.transition_p(psi, psi1, v))
        add("transition_cocycle", k, float(np.linalg.norm(chained - direct)), 1e-10)

        z = np.exp(1j * rng.uniform(0, 2 * np.pi)) * (0.5 + rng.uniform())
        v1, z1 = pg.bundle_transition(psi, psi1, v, z)
        v2, z2 = pg.bundle_transition(psi1, psi2, v1, z1)
        v2d, z2d = pg.bundle_transition(psi, psi2, v, z)
        add("bundle_composition", k, float(np.linalg.norm(v2 - v2d) + abs(z2 - z2d)), 1e-10)

        chi = _in_overlap(rng, n, psi, psi1, psi2)
        triple = pg.clutching(psi, psi1, chi) * pg.clutching(psi1, psi2, chi) * pg.clutching(psi2, psi, chi)
        add("clutching_triple", k, abs(triple - 1.0), 1e-12)

        # Hermitean form agrees in two charts
        va = pg.chart_p(psi, chi)
        vb = pg.chart_p(psi2, chi)
        ta = random_tangent(rng, psi)
        tb = random_tangent(rng, psi)
        pa = pg.transition_p_derivative(psi, psi2, va, ta)
        pb = pg.transition_p_derivative(psi, psi2, va, tb)
        add("chart_independence", k, abs(pg.hermitean_local(va, ta, tb) - pg.hermitean_local(vb, pa, pb)), 1e-9)

        zz = np.exp(1j * rng.uniform(0, 2 * np.pi))
        add("alpha_u1", k, abs(pg.alpha(zz * psi, zz * sdv) - pg.alpha(psi, sdv)), 1e-14)
    return out


def _overlapping(rng, n, psi, guard: float = 0.05):
    while True:
        a, b = random_state(rng, n), random_state(rng, n)
        if min(abs(np.vdot(a, psi)), abs(np.vdot(b, psi)), abs(np.vdot(a, b))) > guard:
            return a, b


def _in_overlap(rng, n, *centres, guard: float = 0.05):
    while True:
        chi = random_state(rng, n)
        if all(abs(np.vdot(c, chi)) > guard for c in centres):
            return chi


def hamiltonian_suite(ext: CentralExtension, rng, samples: int, tol: Tolerance = DEFAULT_TOL):
    out = []
    label = ext.base.name
    h = tol.fd_step

    def add(check, k, res, thr):
        out.append(("hamiltonian", f"{label}/{check}", k, res, thr))

    for k in range(samples):
        psi = sample_state(ext, rng)
        xi = random_ball(rng, ext.dim)
        dv = random_tangent(rng, psi, state_levels(ext))
        add("hamiltonian", k, _safe(mm.check_hamiltonian, ext, psi, xi, dv), 1e-12)
        add("comomentum", k, _safe(lambda: abs(mm.comomentum_via_alpha(ext, xi, psi) - mm.momentum(ext, psi)(xi))), 1e-12)
        raw = mm.raw_momentum(ext, psi)
        add("momentum_real", k, float(np.max(np.abs(raw.imag))), 1e-12)
        add("central_hyperplane", k, abs(raw[-1].real + 1.0), 1e-15)

        def mu_along(t):
            return mm.momentum(ext, psi + t * dv).coords

        def exact_form():
            lhs = pg.symplectic_omega(np.zeros_like(psi), pg.project_out(psi, mm.fundamental_field(ext, xi, psi)), dv)
            return abs(lhs - float(np.dot(fd_derivative(mu_along, 0.0, h), xi)))

        add("iX_omega_fd", k, _safe(exact_form), 1e-7)
        if ext.base.spec is not None and ext.base.spec.name == "su2":
            j = ext.base.spec.params["two_j"] / 2
            r = float(np.linalg.norm(mm.momentum(ext, psi).base))
            add("bloch_radius", k, abs(r - j) if j == 0.5 else max(0.0, r - j), 1e-10)
    return out


def cocycle_suite(ext: CentralExtension, rng, samples: int, tol: Tolerance = DEFAULT_TOL):
    out = []
    label = ext.base.name
    d = ext.dim - 1

    def add(check, k, res, thr):
        out.append(("cocycle", f"{label}/{check}", k, res, thr))

    add("jacobi_ext", 0, ext.algebra.jacobi_residual(), 1e-12)
    closure = 0.0
    P = ext.safe_domain
    for i in range(d):
        for j in range(i + 1, d):
            D = closure_defect(ext.base, i, j)
            closure = max(closure, float(np.linalg.norm(D if P is None else D @ P)))
    add("closure_safe", 0, closure, 1e-12)

    prev = None
    w = ext.base.cocycle
    for k in range(samples):
        psi = sample_state(ext, rng)
        om = mm.ks_cocycle(ext, psi)
        mu = mm.momentum(ext, psi)
        add("omega_delta_mu", k, mm.check_omega_equals_delta_mu(ext, psi), 1e-12)
        add("delta_omega", k, om.cocycle_residual(ext.base.algebra), 1e-12)
        add("delta_delta_mu", k, mm.delta_map(ext, mu).cocycle_residual(ext.base.algebra), 1e-12)
        base_only = np.append(mu.base, 0.0)
        contrib = om.mat - mm.delta_map(ext, base_only).mat - mu.central * w
        add("central_contribution", k, float(np.max(np.abs(contrib), initial=0.0)), 1e-12)
        shifted = mm.ks_cocycle(ext, psi, central_lift=rng.standard_normal(d))
        add("lift_independence", k, float(np.max(np.abs(shifted.mat - om.mat), initial=0.0)), 1e-12)
        hf = mm.hermitian_h(ext, psi)
        add("h_psd", k, max(0.0, -hf.min_eigenvalue()), 1e-10)
        add("h_im_omega", k, float(np.max(np.abs(hf.mat.imag - om.mat), initial=0.0)), 1e-12)
        if prev is not None:
            psi0, om0, mu0 = prev
            lhs = om.mat - om0.mat
            rhs = mm.delta_map(ext, mu.coords - mu0.coords).mat
            add("cohomologous", k, float(np.max(np.abs(lhs - rhs), initial=0.0)), 1e-12)
        prev = (psi, om, mu)
    return out


def equivariance_suite(ext: CentralExtension, rng, samples: int, tol: Tolerance = DEFAULT_TOL):
    out = []
    label = ext.base.name

    def add(check, k, res, thr):
        out.append(("equivariance", f"{label}/{check}", k, res, thr))

    for k in range(samples):
        psi, eta = sample_group_pair(ext, rng)
        xi = random_ball(rng, ext.dim)
        add("equivariance", k, _safe(mm.check_equivariance, ext, eta, psi, xi), 1e-9)

        dv = random_tangent(rng, psi)
        dw = random_tangent(rng, psi)
        v = random_tangent(rng, psi) * rng.uniform()
        add("kahler", k, _safe(mm.kahler_invariance_check, ext, eta, psi, dv, dw, v), 1e-10)

        add("seminorm_ad", k, _safe(seminorm_covariance, ext, eta, psi, rng), 1e-9)
    return out


def seminorm_covariance(ext: CentralExtension, eta, psi, rng, n_tuples: int = 3) -> float:
    """Worst ``|p_B(rho(g) psi) - p_{Ad_{g^-1} B}(psi)|`` over singleton and pair sets B."""
    g = group_element(ext, eta)
    worst = 0.0
    for k in (1, 2):
        B = [tuple(random_ball(rng, ext.dim) for _ in range(k)) for _ in range(n_tuples)]
        moved = [tuple(adjoint(ext, -np.asarray(eta), x) for x in t) for t in B]
        worst = max(worst, abs(seminorm_pB(ext, B, g @ psi) - seminorm_pB(ext, moved, psi)))
    return worst


def stabilizer_suite(ext: CentralExtension, rng, samples: int, tol: Tolerance = DEFAULT_TOL):
    out = []
    label = ext.base.name
    n = ext.hdim

    def add(check, k, res, thr):
        out.append(("stabilizer", f"{label}/{check}", k, res, thr))

    for k in range(samples):
        psi = sample_state(ext, rng)
        kr = mm.momentum_kernel(ext, psi, tol)
        stab = mm.stabilizer(ext, psi, tol)
        add("kernel_angle", k, kr.max_angle, 1e-8)
        add("kernel_dims", k, float(kr.direct.shape[1] != kr.formula.shape[1]), 0.0)
        add("injectivity_flag", k, float(kr.injective != kr.spans_complement), 0.0)
        add("zero_derivative_flag", k, float(kr.derivative_zero != (stab.dim == ext.dim)), 0.0)
        add("stabilizer_residual", k, float(np.max(stab.residuals)), 1e-8)
        add("stabilizer_bracket", k, mm.stabilizer_bracket_residual(ext, stab), 1e-8)

    for b in range(n):
        psi = np.zeros(n, dtype=complex)
        psi[b] = 1.0
        stab = mm.stabilizer(ext, psi, tol)
        char_res = 0.0
        mod_res = 0.0
        for xi in stab.basis:
            rep = mm.character_check(ext, psi, xi)
            char_res = max(char_res, rep.residual if rep.in_stabilizer else float("inf"))
            mod_res = max(mod_res, rep.modulus_residual)
        add("character", b, char_res, 1e-9)
        add("character_modulus", b, mod_res, 1e-10)
        eta = rng.standard_normal(stab.dim) @ stab.basis
        add("stabilizer_inclusion", b, mm.stabilizer_momentum_inclusion_check(ext, psi, eta), 1e-9)
    return out


def plots_suite(ext: CentralExtension, rng, samples: int, tol: Tolerance = DEFAULT_TOL):
    out = []
    label = ext.base.name
    n = ext.hdim
    m = state_levels(ext) or n
    for k in range(samples):
        xi_path = PolynomialPath(rng.standard_normal((3, ext.dim)))
        c = np.zeros((3, n), dtype=complex)
        c[:, :m] = rng.standard_normal((3, m)) + 1j * rng.standard_normal((3, m))
        psi_path = PolynomialPath(c / np.sqrt(m))
        s, t = rng.uniform(-1, 1, 2)
        v1, v2 = rng.uniform(-1, 1, 2)
        res = plot_derivative_check(ext, xi_path, psi_path, s, t, v1, v2, tol.fd_step)
        out.append(("plots5", f"{label}/product_rule", k, res, 1e-6))
    return out


MODEL_SUITES = {
    "hamiltonian": hamiltonian_suite,
    "cocycle": cocycle_suite,
    "equivariance": equivariance_suite,
    "stabilizer": stabilizer_suite,
    "plots5": plots_suite,
}


def run_verify(models: dict, suites=SUITES, samples: int = 100, seed: int = 0,
               tol: Tolerance = DEFAULT_TOL) -> Report:
    """Run the selected suites on ``models`` (address -> Representation)."""
    unknown = set(suites) - set(SUITES)
    if unknown:
        raise ValueError(f"unknown suites: {sorted(unknown)}")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    suites = tuple(s for s in SUITES if s in suites)
    report = Report(seed, tuple(models), suites, samples, tol)
    raw = []
    if "geometry" in suites:
        raw += geometry_suite(suite_rng(seed, "-", "geometry"), samples, tol)
    for address, rep in models.items():
        vrep = validate(rep, tol)
        for r in vrep.records:
            idx = "-".join(str(i + 1) for i in r.index) or "all"
            raw.append(("validate", f"{rep.name}/{r.kind}[{idx}]", 0, r.residual, vrep.threshold))
        try:
            ext = central_extension(rep)
        except ValueError:
            raw.append(("validate", f"{rep.name}/central_extension", 0, float("inf"), 0.0))
            continue
        for suite in suites:
            if suite in MODEL_SUITES:
                raw += MODEL_SUITES[suite](ext, suite_rng(seed, address, suite), samples, tol)
    report.records = [Record(*r) for r in raw]
    return report
