"""Finite-dimensional quaternionic linear algebra: S-spectrum, defect numbers and the Cayley transform."""

from .cayley import (
    DEFAULT_LAMBDA,
    CayleyPair,
    LambdaParam,
    basis_compatible,
    cayley,
    cayley_invariance,
    gen_remark,
    inverse_cayley,
    self_adjoint_iff_unitary,
)
from .embed import SpectralSphere, chi, chi_inv, qinv, qsolve, rank_h
from .hspace import HilbertBasis, QMatrix, QVector, expand, gram_schmidt, inner, left_mul, polarization
from .qop import PartialOperator, classify, is_isometric, is_self_adjoint, is_symmetric, is_unitary
from .quat import Quaternion, q_inv, q_mul
from .spectral import defect_number, deficiency_index, iso_indices, pseudo_resolvent, regular_point, s_spectrum

__version__ = "0.1.0"

__all__ = [
    "basis_compatible",
    "cayley",
    "cayley_invariance",
    "CayleyPair",
    "chi",
    "chi_inv",
    "classify",
    "DEFAULT_LAMBDA",
    "defect_number",
    "deficiency_index",
    "expand",
    "gen_remark",
    "gram_schmidt",
    "HilbertBasis",
    "inner",
    "inverse_cayley",
    "is_isometric",
    "is_self_adjoint",
    "is_symmetric",
    "is_unitary",
    "iso_indices",
    "LambdaParam",
    "left_mul",
    "PartialOperator",
    "polarization",
    "pseudo_resolvent",
    "q_inv",
    "q_mul",
    "qinv",
    "QMatrix",
    "qsolve",
    "Quaternion",
    "QVector",
    "rank_h",
    "regular_point",
    "s_spectrum",
    "self_adjoint_iff_unitary",
    "SpectralSphere",
]
