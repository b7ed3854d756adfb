"""Exact computations with mode transition algebras of Heisenberg and Virasoro modes."""

from .coeffs import C, ONE, X, ZERO, Coefficient
from .liealg import HEISENBERG, VIRASORO, AlgebraSpec, algebra
from .pbw import EnvElement, multiply, normal_order, truncate_left, truncate_right
from .zhu import ZhuElement, zhu_class, zhu_multiply, pi_map
from .mta import MtaElement, find_identity, mta_basis, mu, ostar, star

__version__ = "0.1.0"

__all__ = [
    "C", "ONE", "X", "ZERO", "Coefficient", "HEISENBERG", "VIRASORO", "AlgebraSpec", "algebra",
    "EnvElement", "multiply", "normal_order", "truncate_left", "truncate_right",
    "ZhuElement", "zhu_class", "zhu_multiply", "pi_map",
    "MtaElement", "find_identity", "mta_basis", "mu", "ostar", "star",
]
