"""Momentum maps of finite-dimensional projective unitary representations.

The package builds the Fubini-Study geometry of projective space, the
prequantum circle bundle over it, central extensions of Lie algebras from
generator matrices, and the momentum map with its cocycles, kernel and
stabilizers. Every identity relating these objects can be checked
numerically through :mod:`momentkit.verify` or the ``momentkit`` command.
"""

from .lie import (
    CentralExtension,
    LieAlgebra,
    Representation,
    adjoint,
    central_extension,
    drho,
    group_element,
    validate,
)
from .models import load_model, resolve_model, save_model, su2_spin, torus_diag, weyl_truncated
from .moment import momentum, momentum_kernel, stabilizer
from .numeric import DEFAULT_TOL, Tolerance

__version__ = "0.1.0"

__all__ = [
    "CentralExtension",
    "DEFAULT_TOL",
    "LieAlgebra",
    "Representation",
    "Tolerance",
    "adjoint",
    "central_extension",
    "drho",
    "group_element",
    "load_model",
    "momentum",
    "momentum_kernel",
    "resolve_model",
    "save_model",
    "stabilizer",
    "su2_spin",
    "torus_diag",
    "validate",
    "weyl_truncated",
]
