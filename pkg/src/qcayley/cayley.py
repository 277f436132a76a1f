"""Quaternionic Cayley transform and its inverse.

For ``A`` in class Y and a quaternion ``lam`` with positive i, j, k parts,

    U_A = (A - lam I)(A - conj(lam) I)^{-1},   D(U_A) = ran(A - conj(lam) I),
    A_U = (lam I - conj(lam) U)(I - U)^{-1},   D(A_U) = ran(I - U),

where ``q I`` is left multiplication in a chosen Hilbert basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .config import RANK_TOL
from .embed import qsolve_right, rank_h
from .errors import (
    DimensionMismatch,
    InternalSingular,
    InvalidLambda,
    NotInClassY,
    NotIsometric,
    RankDeficient,
    RangeNotDense,
    Singular,
)
from .hspace import HilbertBasis, QMatrix, orthonormalize
from .qop import (
    Operator,
    PartialOperator,
    classify,
    frame_and_action,
    is_isometric,
    is_self_adjoint,
    is_unitary,
    operator_deviation,
    shifted_action,
)
from .quat import I, J, K, Quaternion

__all__ = [
    "LambdaParam",
    "DEFAULT_LAMBDA",
    "CayleyPair",
    "SelfAdjointReport",
    "InvarianceReport",
    "cayley",
    "inverse_cayley",
    "gen_remark",
    "self_adjoint_iff_unitary",
    "basis_compatible",
    "left_mult_gap",
    "cayley_invariance",
]


@dataclass(frozen=True)
class LambdaParam:
    """The transform parameter ``lam = l0 + l1 i + l2 j + l3 k``.

    ``l1, l2, l3 > 0`` is enforced unless ``relaxed`` is set, in which case
    any non-real value is accepted (experimental, outside the positivity
    convention).
    """

    value: Quaternion = Quaternion(0.0, 1.0, 1.0, 1.0)
    relaxed: bool = False

    def __post_init__(self):
        v = self.value
        if not isinstance(v, Quaternion):
            object.__setattr__(self, "value", Quaternion.from_array(v))
            v = self.value
        if self.relaxed:
            if v.imag_norm() == 0.0:
                raise InvalidLambda(f"lambda = {v} is real")
        elif not (v.x > 0 and v.y > 0 and v.z > 0):
            raise InvalidLambda(f"lambda = {v} needs strictly positive i, j, k parts")

    @property
    def conj(self) -> Quaternion:
        return self.value.conj()


DEFAULT_LAMBDA = LambdaParam()


def _lam(lam) -> LambdaParam:
    if lam is None:
        return DEFAULT_LAMBDA
    if isinstance(lam, LambdaParam):
        return lam
    return LambdaParam(lam)


def _n(a: Operator) -> int:
    return a.n if isinstance(a, PartialOperator) else a.shape[0]


@dataclass
class CayleyPair:
    source: Operator
    transform: Operator
    lam: LambdaParam
    basis: HilbertBasis
    residuals: dict = field(default_factory=dict)

    def compute_residuals(self) -> dict:
        """Defining identity and isometry, measured on the domain frame of A."""
        dom, m = frame_and_action(self.source)
        b = self.basis
        psi = m - b.left_matrix(self.lam.conj) @ dom
        phi = m - b.left_matrix(self.lam.value) @ dom
        u_dom, u_act = frame_and_action(self.transform)
        u_psi = u_act @ (u_dom.H @ psi)
        gram = u_act.H @ u_act
        self.residuals = {
            "cayley_identity": u_psi.max_abs_diff(phi),
            "isometry": gram.max_abs_diff(QMatrix.identity(gram.shape[0])),
        }
        return self.residuals


def _check_basis(a: Operator, basis: HilbertBasis | None) -> HilbertBasis:
    n = _n(a)
    if basis is None:
        return HilbertBasis.standard(n)
    if basis.n != n:
        raise DimensionMismatch(f"basis of H^{basis.n} vs operator on H^{n}")
    return basis


def cayley(a: Operator, lam=None, basis: HilbertBasis | None = None, check: bool = True,
           tol: float = RANK_TOL) -> CayleyPair:
    """Cayley transform of ``a``.

    Dense input gives a dense ``U_A``.  Partial input gives a partial
    operator whose domain frame is an orthonormalization of
    ``(A - conj(lam) I) D`` and whose action follows from
    ``U_A (A - conj(lam) I) phi = (A - lam I) phi``.

    ``check=False`` skips the class-Y precondition (used for negative
    controls); singular shifts then raise :class:`InternalSingular`.
    """
    lam = _lam(lam)
    basis = _check_basis(a, basis)
    if check and not classify(a, basis).in_Y:
        raise NotInClassY("Cayley transform needs a densely defined symmetric operator in class X")
    psi = shifted_action(a, lam.conj, basis)
    phi = shifted_action(a, lam.value, basis)
    if isinstance(a, QMatrix):
        try:
            u = qsolve_right(psi, phi, tol)
        except Singular as exc:
            raise InternalSingular(f"A - conj(lam) I is numerically singular: {exc}") from exc
        transform: Operator = u
    else:
        try:
            frame, r = orthonormalize(psi)
        except RankDeficient as exc:
            raise InternalSingular(f"A - conj(lam) I is not injective on D(A): {exc}") from exc
        transform = PartialOperator(frame, qsolve_right(r, phi, tol), a.working_space)
    pair = CayleyPair(a, transform, lam, basis)
    pair.compute_residuals()
    return pair


def inverse_cayley(u: Operator, lam=None, basis: HilbertBasis | None = None,
                   tol: float = RANK_TOL, iso_tol: float = 1e-9) -> Operator:
    """``A_U = (lam I - conj(lam) U)(I - U)^{-1}`` on ``ran(I - U)``.

    Requires ``U`` isometric with ``ran(I - U)`` dense: full rank for a dense
    ``U``; for a partial ``U`` read on its working space, ``I - U``
    injective on ``D(U)``.
    """
    lam = _lam(lam)
    basis = _check_basis(u, basis)
    if not is_isometric(u, iso_tol):
        raise NotIsometric("inverse Cayley transform needs an isometric operator")
    dom, m = frame_and_action(u)
    delta = dom - m
    image = basis.left_matrix(lam.value) @ dom - basis.left_matrix(lam.conj) @ m
    n, d = dom.shape
    # D and M have orthonormal columns, so 1 is the natural scale of D - M
    r = rank_h(delta, tol, scale=1.0)
    needed = d if isinstance(u, PartialOperator) and u.working_space else n
    if r < needed:
        raise RangeNotDense(f"rank of I - U is {r}, need {needed}")
    if isinstance(u, QMatrix):
        return qsolve_right(delta, image, tol)
    frame, rr = orthonormalize(delta)
    return PartialOperator(frame, qsolve_right(rr, image, tol), u.working_space)


def _theta_block(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [s, -c]])


def gen_remark(thetas: Sequence[float], signs: Sequence[int] = (),
               perm: Sequence[int] | None = None) -> QMatrix:
    """Block-diagonal matrix of ``+-1`` scalars and ``[[cos, sin], [sin, -cos]]`` blocks.

    Blocks are laid out as ``signs`` first, then one 2x2 block per theta,
    and then reordered by ``perm`` (a permutation of the block indices).
    The result is real, symmetric and an involution.
    """
    blocks = []
    for s in signs:
        if s not in (1, -1):
            raise ValueError(f"signs must be +1 or -1, got {s!r}")
        blocks.append(np.array([[float(s)]]))
    blocks.extend(_theta_block(float(t)) for t in thetas)
    if not blocks:
        raise ValueError("need at least one block")
    if perm is None:
        perm = range(len(blocks))
    perm = list(perm)
    if sorted(perm) != list(range(len(blocks))):
        raise ValueError(f"{perm} is not a permutation of {len(blocks)} blocks")
    ordered = [blocks[p] for p in perm]
    n = sum(b.shape[0] for b in ordered)
    out = np.zeros((n, n))
    k = 0
    for b in ordered:
        m = b.shape[0]
        out[k : k + m, k : k + m] = b
        k += m
    return QMatrix.from_real(out)


@dataclass(frozen=True)
class SelfAdjointReport:
    is_self_adjoint: bool
    transform_is_unitary: bool


def self_adjoint_iff_unitary(a: Operator, lam=None, basis: HilbertBasis | None = None,
                             tol: float = 1e-9) -> SelfAdjointReport:
    """Compute both sides of "A self-adjoint <=> U_A unitary" independently."""
    pair = cayley(a, lam, basis)
    return SelfAdjointReport(is_self_adjoint(a, tol), is_unitary(pair.transform, tol))


def basis_compatible(b1: HilbertBasis, b2: HilbertBasis, tol: float = 1e-9) -> bool:
    """True iff every ``<phi_k|theta_l>`` is real within ``tol``."""
    if b1.n != b2.n:
        raise DimensionMismatch(f"bases of H^{b1.n} and H^{b2.n}")
    cross = (b1.matrix.H @ b2.matrix).data
    return bool(np.abs(cross[..., 1:]).max() <= tol)


def left_mult_gap(b1: HilbertBasis, b2: HilbertBasis) -> float:
    """``max_t max |L_t - L'_t|`` over ``t = i, j, k`` for the two bases."""
    if b1.n != b2.n:
        raise DimensionMismatch(f"bases of H^{b1.n} and H^{b2.n}")
    return max(b1.left_matrix(t).max_abs_diff(b2.left_matrix(t)) for t in (I, J, K))


@dataclass(frozen=True)
class InvarianceReport:
    compatible: bool
    deviation: float
    left_mult_gap: float

    def to_json(self) -> dict:
        return {"compatible": self.compatible, "deviation": self.deviation,
                "left_mult_gap": self.left_mult_gap}


def cayley_invariance(a: Operator, lam, b1: HilbertBasis, b2: HilbertBasis,
                      tol: float = 1e-9) -> InvarianceReport:
    """Compare the transforms of ``a`` built from two bases.

    The class-Y precondition is checked against ``b1`` only so that
    incompatible ``b2`` can serve as a negative control.  A transform that
    cannot be formed under ``b2`` counts as infinite deviation.
    """
    compatible = basis_compatible(b1, b2, tol)
    u = cayley(a, lam, b1).transform
    try:
        v = cayley(a, lam, b2, check=False).transform
        dev = operator_deviation(u, v)
    except InternalSingular:
        dev = float("inf")
    return InvarianceReport(compatible, dev, left_mult_gap(b1, b2))
