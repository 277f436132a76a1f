"""Right-linear operators on H^n: dense matrices and partially defined ones.

A :class:`PartialOperator` is given by an orthonormal frame ``D`` (n x d) of
its domain and the images ``M`` (n x d) of the frame columns, so
``A (D c) = M c``.  Every subspace of H^n is closed, so partial operators are
the finite-dimensional stand-ins for densely defined symmetric operators
with nonzero defect.  The ``working_space`` flag records that reading: when
set (the default) the domain is treated as the space the operator is
densely defined in.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .config import BASIS_TOL, RANK_TOL
from .embed import rank_h, span_contains
from .errors import DimensionMismatch, InvalidOperator, NotInDomain
from .hspace import HilbertBasis, QMatrix, QVector, orthonormality_error
from .quat import I, J, K, Quaternion

__all__ = [
    "PartialOperator",
    "Operator",
    "ClassFlags",
    "frame_and_action",
    "shifted_action",
    "adjoint",
    "is_symmetric",
    "is_antisymmetric",
    "is_self_adjoint",
    "is_isometric",
    "is_unitary",
    "op_scalar_left",
    "op_scalar_right",
    "domain_invariant",
    "classify",
    "extends",
    "operator_deviation",
]

_UNITS = (I, J, K)


class PartialOperator:
    """Right-linear operator defined on the right span of ``domain_frame``."""

    __slots__ = ("domain_frame", "action", "working_space")

    def __init__(self, domain_frame: QMatrix, action: QMatrix, working_space: bool = True,
                 tol: float = BASIS_TOL):
        if domain_frame.shape != action.shape:
            raise InvalidOperator(
                f"domain_frame {domain_frame.shape} and action {action.shape} must have equal shapes"
            )
        n, d = domain_frame.shape
        if d < 1 or d > n:
            raise InvalidOperator(f"domain dimension {d} outside 1..{n}")
        err = orthonormality_error(domain_frame.data)
        if err > tol:
            raise InvalidOperator(f"domain_frame columns not orthonormal (error {err:.3g})")
        self.domain_frame = domain_frame
        self.action = action
        self.working_space = bool(working_space)

    @classmethod
    def restrict(cls, a: QMatrix, frame: QMatrix, working_space: bool = True) -> PartialOperator:
        """Restriction of a dense operator to the span of an orthonormal frame."""
        return cls(frame, a @ frame, working_space)

    @property
    def n(self) -> int:
        return self.domain_frame.shape[0]

    @property
    def d(self) -> int:
        return self.domain_frame.shape[1]

    @property
    def is_full(self) -> bool:
        return self.d == self.n

    def coefficients(self, phi: QVector, tol: float = 1e-9) -> QVector:
        """Coordinates of ``phi`` in the domain frame; raises if outside the domain."""
        if phi.dim != self.n:
            raise DimensionMismatch(f"vector of dim {phi.dim} vs operator on H^{self.n}")
        c = self.domain_frame.H @ phi
        resid = (self.domain_frame @ c - phi).norm()
        if resid > tol * max(1.0, phi.norm()):
            raise NotInDomain(f"vector lies {resid:.3g} away from the domain")
        return c

    def in_domain(self, phi: QVector, tol: float = 1e-9) -> bool:
        try:
            self.coefficients(phi, tol)
        except NotInDomain:
            return False
        return True

    def apply(self, phi: QVector, tol: float = 1e-9) -> QVector:
        return self.action @ self.coefficients(phi, tol)

    def __matmul__(self, phi):
        if isinstance(phi, QVector):
            return self.apply(phi)
        return NotImplemented

    def to_dense(self) -> QMatrix:
        """``M D^H``; only meaningful when the domain is all of H^n."""
        if not self.is_full:
            raise NotInDomain(f"domain has dimension {self.d} < {self.n}")
        return self.action @ self.domain_frame.H

    def __repr__(self) -> str:
        return f"PartialOperator(n={self.n}, d={self.d}, working_space={self.working_space})"


Operator = Union[QMatrix, PartialOperator]


@dataclass(frozen=True)
class ClassFlags:
    in_X: bool
    in_Y: bool
    in_Z: bool

    def to_json(self) -> dict:
        return {"in_X": self.in_X, "in_Y": self.in_Y, "in_Z": self.in_Z}


def frame_and_action(a: Operator) -> tuple[QMatrix, QMatrix]:
    """``(D, A D)`` for either kind of operator; ``D = I`` when dense."""
    if isinstance(a, PartialOperator):
        return a.domain_frame, a.action
    if not a.is_square:
        raise DimensionMismatch(f"operator must be square, got {a.shape}")
    return QMatrix.identity(a.shape[0]), a


def _basis(a: Operator, basis: HilbertBasis | None) -> HilbertBasis:
    n = a.n if isinstance(a, PartialOperator) else a.shape[0]
    if basis is None:
        return HilbertBasis.standard(n)
    if basis.n != n:
        raise DimensionMismatch(f"basis of H^{basis.n} vs operator on H^{n}")
    return basis


def shifted_action(a: Operator, q, basis: HilbertBasis | None = None) -> QMatrix:
    """Matrix of ``(A - q I)`` on the domain frame, ``q I`` taken in ``basis``."""
    basis = _basis(a, basis)
    d, m = frame_and_action(a)
    return m - basis.left_matrix(q) @ d


def adjoint(a: QMatrix) -> QMatrix:
    """Conjugate transpose; the unique ``A^H`` with ``<psi|A phi> = <A^H psi|phi>``."""
    if isinstance(a, PartialOperator):
        raise TypeError("adjoint is only provided for operators defined on all of H^n")
    return a.H


def _gram(a: Operator) -> QMatrix:
    # Entry (k, l) is <D e_k | A D e_l>: the form <phi|A psi> on the domain.
    d, m = frame_and_action(a)
    return d.H @ m


def _probe_coefficients(d: int) -> list[QVector]:
    probes = [QVector.unit(d, k) for k in range(d)]
    for k in range(d):
        for l in range(k + 1, d):
            for tau in (Quaternion(1.0), I, J, K):
                probes.append(QVector.unit(d, k) + QVector.unit(d, l) * tau)
    return probes


def is_symmetric(a: Operator, tol: float = 1e-9) -> bool:
    """``<A phi|psi> = <phi|A psi>`` on the domain.

    Dense: ``max |A - A^H| <= tol``.  Partial: the restricted form
    ``D^H M`` is Hermitian and ``Im <A phi|phi>`` vanishes on a fixed probe
    set of domain vectors.
    """
    if isinstance(a, QMatrix):
        if not a.is_square:
            return False
        return a.max_abs_diff(a.H) <= tol
    g = _gram(a)
    if g.max_abs_diff(g.H) > tol:
        return False
    scale = max(1.0, a.action.max_abs())
    for c in _probe_coefficients(a.d):
        val = (c.as_column().H @ g @ c.as_column())[0, 0]
        if val.imag_norm() > tol * scale * max(1.0, c.norm() ** 2):
            return False
    return True


def is_antisymmetric(a: Operator, tol: float = 1e-9) -> bool:
    """``<A phi|psi> = -<phi|A psi>`` on the domain."""
    g = _gram(a)
    return g.max_abs_diff(-g.H) <= tol


def is_self_adjoint(a: Operator, tol: float = 1e-9) -> bool:
    if isinstance(a, PartialOperator):
        return a.is_full and is_symmetric(a.to_dense(), tol)
    return is_symmetric(a, tol)


def is_isometric(u: Operator, tol: float = 1e-9) -> bool:
    """Dense: ``U^H U = I``.  Partial: images of the frame are orthonormal."""
    _, m = frame_and_action(u)
    return orthonormality_error(m.data) <= tol


def is_unitary(u: Operator, tol: float = 1e-9) -> bool:
    if isinstance(u, PartialOperator):
        if not u.is_full:
            return False
        u = u.to_dense()
    if not u.is_square:
        return False
    eye = QMatrix.identity(u.shape[0])
    return (u.H @ u).max_abs_diff(eye) <= tol and (u @ u.H).max_abs_diff(eye) <= tol


def op_scalar_left(q, a: Operator, basis: HilbertBasis | None = None) -> Operator:
    """``q A : phi -> q (A phi)``."""
    basis = _basis(a, basis)
    lq = basis.left_matrix(q)
    if isinstance(a, PartialOperator):
        return PartialOperator(a.domain_frame, lq @ a.action, a.working_space)
    return lq @ a


def op_scalar_right(a: Operator, q, basis: HilbertBasis | None = None,
                    tol: float = RANK_TOL) -> Operator:
    """``A q : phi -> A (q phi)``; the domain must be invariant under ``phi -> q phi``."""
    basis = _basis(a, basis)
    lq = basis.left_matrix(q)
    if isinstance(a, PartialOperator):
        moved = lq @ a.domain_frame
        if not span_contains(a.domain_frame, moved, tol):
            raise NotInDomain("left multiplication does not preserve the domain")
        return PartialOperator(a.domain_frame, a.action @ (a.domain_frame.H @ moved), a.working_space)
    return a @ lq


def domain_invariant(a: Operator, basis: HilbertBasis | None = None, tol: float = RANK_TOL) -> bool:
    """True iff ``i phi, j phi, k phi`` stay in the domain for every ``phi`` in it."""
    if isinstance(a, QMatrix):
        return True
    basis = _basis(a, basis)
    return all(span_contains(a.domain_frame, basis.left_matrix(t) @ a.domain_frame, tol) for t in _UNITS)


def _densely_defined(a: Operator) -> bool:
    if isinstance(a, QMatrix):
        return True
    return a.is_full or a.working_space


def classify(a: Operator, basis: HilbertBasis | None = None, tol: float = 1e-9) -> ClassFlags:
    """Membership in the operator classes X, Y and Z.

    X: domain invariant under left multiplication by i, j, k and ``t A``
    anti-symmetric for ``t = i, j, k``.  Y: X, symmetric and densely
    defined.  Z: isometric with ``ran(I - U)`` dense.
    """
    basis = _basis(a, basis)
    in_x = domain_invariant(a, basis) and all(
        is_antisymmetric(op_scalar_left(t, a, basis), tol) for t in _UNITS
    )
    in_y = in_x and _densely_defined(a) and is_symmetric(a, tol)
    in_z = False
    if is_isometric(a, tol):
        d, m = frame_and_action(a)
        r = rank_h(d - m, scale=1.0)
        if isinstance(a, PartialOperator) and a.working_space:
            in_z = r == a.d
        else:
            in_z = r == d.shape[0]
    return ClassFlags(in_x, in_y, in_z)


def extends(b: Operator, a: Operator, tol: float = 1e-9) -> bool:
    """``A subset B``: D(A) inside D(B) and B agrees with A there."""
    da, ma = frame_and_action(a)
    db, mb = frame_and_action(b)
    if da.shape[0] != db.shape[0]:
        raise DimensionMismatch("operators act on spaces of different dimension")
    if not span_contains(db, da):
        return False
    c = db.H @ da
    return (mb @ c).max_abs_diff(ma) <= tol * max(1.0, ma.max_abs())


def operator_deviation(u: Operator, v: Operator) -> float:
    """Distance between two operators measured on the domain of ``u``.

    Entrywise ``max |U - V|`` for dense pairs.  Otherwise the larger of how
    far D(U) sticks out of D(V) and how far V differs from U on D(U).
    """
    if isinstance(u, QMatrix) and isinstance(v, QMatrix):
        return u.max_abs_diff(v)
    du, mu = frame_and_action(u)
    dv, mv = frame_and_action(v)
    c = dv.H @ du
    outside = (dv @ c).max_abs_diff(du)
    return max(outside, (mv @ c).max_abs_diff(mu))
