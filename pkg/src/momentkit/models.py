"""Built-in representations and the JSON representation file format."""

from __future__ import annotations

import json
from pathlib import Path

import jsonschema
import numpy as np

from .lie import LieAlgebra, ModelSpec, Representation, validate
from .numeric import DEFAULT_TOL, Tolerance


class ModelError(ValueError):
    """A model could not be resolved, parsed or validated."""


def torus_diag(weights) -> Representation:
    """Abelian algebra R^n acting on C^n by ``A_k = i w_k E_kk``."""
    weights = [int(w) for w in weights]
    n = len(weights)
    if n == 0:
        raise ModelError("torus model needs at least one weight")
    gens = np.zeros((n, n, n), dtype=complex)
    for k, w in enumerate(weights):
        gens[k, k, k] = 1j * w
    alg = LieAlgebra.abelian(n, [f"t{k + 1}" for k in range(n)])
    label = "torus:" + ",".join(str(w) for w in weights)
    return Representation(alg, gens, name=label, spec=ModelSpec("torus", {"weights": weights}))


def spin_matrices(two_j: int):
    """Hermitian ``(J_x, J_y, J_z)`` in the basis ``m = j, j-1, ..., -j``."""
    j = two_j / 2.0
    m = j - np.arange(two_j + 1)
    # J_+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>; |m+1> sits one index earlier
    jp = np.diag(np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1)), 1).astype(complex)
    jm = jp.conj().T
    jx = (jp + jm) / 2
    jy = (jp - jm) / 2j
    jz = np.diag(m).astype(complex)
    return jx, jy, jz


def su2_spin(two_j: int) -> Representation:
    """Spin-j representation of su(2), ``A_a = -i J_a`` with ``[e1, e2] = e3`` cyclically."""
    if int(two_j) != two_j or two_j < 1:
        raise ModelError(f"two_j must be a positive integer, got {two_j}")
    two_j = int(two_j)
    alg = LieAlgebra(3, [(0, 1, 2, 1.0), (1, 2, 0, 1.0), (0, 2, 1, -1.0)], ["x", "y", "z"])
    gens = np.stack([-1j * J for J in spin_matrices(two_j)])
    return Representation(alg, gens, name=f"su2:{two_j}", spec=ModelSpec("su2", {"two_j": two_j}))


def ladder(n_levels: int) -> np.ndarray:
    """Truncated annihilation operator, ``a|k> = sqrt(k)|k-1>``."""
    return np.diag(np.sqrt(np.arange(1, n_levels)), 1).astype(complex)


def weyl_truncated(n_levels: int) -> Representation:
    """Truncated Heisenberg-Weyl model on ``n_levels`` Fock levels.

    ``A_q = i(a + a^dagger)/sqrt 2`` and ``A_p = (a^dagger - a)/sqrt 2`` on the abelian
    algebra R^2 with cocycle ``w(q, p) = 1``. Closure ``[A_q, A_p] = i 1``
    fails only on the top level; the safe domain is the lowest
    ``n_levels - 2`` levels.
    """
    if int(n_levels) != n_levels or n_levels < 4:
        raise ModelError(f"weyl model needs at least 4 levels, got {n_levels}")
    n_levels = int(n_levels)
    a = ladder(n_levels)
    ad = a.conj().T
    gens = np.stack([1j * (a + ad) / np.sqrt(2), (ad - a) / np.sqrt(2)])
    alg = LieAlgebra.abelian(2, ["q", "p"])
    w = np.array([[0.0, 1.0], [-1.0, 0.0]])
    return Representation(alg, gens, cocycle=w, safe_levels=n_levels - 2, name=f"weyl:{n_levels}",
                          spec=ModelSpec("weyl", {"n_levels": n_levels}))


# ------------------------------------------------------------------ files

_PAIR = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}

REPRESENTATION_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["name", "algebra_dim", "hilbert_dim", "structure_constants", "generators"],
    "properties": {
        "name": {"type": "string"},
        "algebra_dim": {"type": "integer", "minimum": 1},
        "hilbert_dim": {"type": "integer", "minimum": 1},
        "structure_constants": {
            "type": "array",
            "items": {"type": "array", "minItems": 4, "maxItems": 4, "items": {"type": "number"}},
        },
        "generators": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "array", "items": _PAIR}},
        },
        "cocycle": {"type": "array", "items": {"type": "array", "items": {"type": "number"}}},
        "safe_domain_levels": {"type": "integer", "minimum": 1},
    },
}


def to_document(rep: Representation) -> dict:
    doc = {
        "name": rep.name,
        "algebra_dim": rep.dim,
        "hilbert_dim": rep.hdim,
        "structure_constants": [[i + 1, j + 1, k + 1, v] for i, j, k, v in rep.algebra.structure],
        "generators": [
            [[[float(z.real), float(z.imag)] for z in row] for row in A] for A in rep.generators
        ],
    }
    if np.any(rep.cocycle != 0):
        doc["cocycle"] = rep.cocycle.tolist()
    if rep.safe_levels is not None:
        doc["safe_domain_levels"] = rep.safe_levels
    return doc


def save_model(rep: Representation, path) -> None:
    Path(path).write_text(json.dumps(to_document(rep), indent=1) + "\n", encoding="utf-8")


def from_document(doc: dict, strict: bool = True, tol: Tolerance = DEFAULT_TOL) -> Representation:
    """Parse a representation document.

    With ``strict`` the result must pass :func:`~momentkit.lie.validate`;
    the error message names the first failing generator or pair.
    """
    try:
        jsonschema.validate(doc, REPRESENTATION_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ModelError(f"malformed representation file: {exc.message}") from exc
    d, n = doc["algebra_dim"], doc["hilbert_dim"]
    entries = []
    for i, j, k, v in doc["structure_constants"]:
        if not all(float(x).is_integer() for x in (i, j, k)):
            raise ModelError(f"structure constant indices must be integers: {[i, j, k]}")
        i, j, k = int(i), int(j), int(k)
        if not (1 <= i < j <= d and 1 <= k <= d):
            raise ModelError(f"structure constant index out of range or not i < j: {[i, j, k]}")
        entries.append((i - 1, j - 1, k - 1, v))
    gens = np.asarray(doc["generators"], dtype=float)
    if gens.shape != (d, n, n, 2):
        raise ModelError(f"generators must be {d} matrices of size {n}x{n}, got shape {gens.shape[:-1]}")
    gens = gens[..., 0] + 1j * gens[..., 1]
    w = None
    if "cocycle" in doc:
        w = np.asarray(doc["cocycle"], dtype=float)
        if w.shape != (d, d):
            raise ModelError(f"cocycle must be {d}x{d}")
        if not np.array_equal(w, -w.T):
            raise ModelError("cocycle is not antisymmetric")
    try:
        alg = LieAlgebra(d, entries)
        rep = Representation(alg, gens, cocycle=w, safe_levels=doc.get("safe_domain_levels"), name=doc["name"],
                             spec=ModelSpec("file", {}))
    except ValueError as exc:
        raise ModelError(str(exc)) from exc
    if strict:
        report = validate(rep, tol)
        if not report.passed:
            bad = report.failures()[0]
            where = ", ".join(str(i + 1) for i in bad.index)
            raise ModelError(f"validation failed: {bad.kind} ({where}) residual {bad.residual:.3e}")
    return rep


def load_model(path, strict: bool = True, tol: Tolerance = DEFAULT_TOL) -> Representation:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ModelError(f"cannot read {path}: {exc}") from exc
    return from_document(doc, strict, tol)


def resolve_model(address: str, strict: bool = True, tol: Tolerance = DEFAULT_TOL) -> Representation:
    """Resolve ``builder:params`` or ``file:path``.

    Builders: ``su2:<two_j>``, ``torus:<n>`` (n unit weights),
    ``torus:<w1>,<w2>,...`` or ``torus:(w1,...)``, ``weyl:<levels>``.
    """
    kind, sep, arg = address.partition(":")
    if not sep:
        raise ModelError(f"unknown model {address!r}; expected builder:params or file:path")
    try:
        if kind == "file":
            return load_model(arg, strict, tol)
        if kind == "su2":
            return su2_spin(int(arg))
        if kind == "weyl":
            return weyl_truncated(int(arg))
        if kind == "torus":
            body = arg.strip().strip("()")
            if "," in arg or arg.strip().startswith("("):
                return torus_diag([int(x) for x in body.split(",") if x.strip()])
            return torus_diag([1] * int(body))
    except ValueError as exc:
        if isinstance(exc, ModelError):
            raise
        raise ModelError(f"bad parameters in {address!r}: {exc}") from exc
    raise ModelError(f"unknown model builder {kind!r}")
