"""Pseudo-resolvent, S-spectrum, regular points and defect numbers.

In finite dimension the S-spectrum is exactly the set of spheres of right
eigenvalues; the residual and continuous parts are empty.
"""

from __future__ import annotations

from dataclasses import dataclass

from .config import RANK_TOL
from .embed import SpectralSphere, least_singular_value, rank_h, right_eigen_spheres, singular_values
from .errors import NotInClass, NotIsometric
from .hspace import HilbertBasis, QMatrix
from .qop import Operator, PartialOperator, classify, frame_and_action, is_isometric, shifted_action
from .quat import Quaternion

__all__ = [
    "SpectralSphere",
    "RegularityCertificate",
    "DefectReport",
    "pseudo_resolvent",
    "s_spectrum",
    "in_point_s_spectrum",
    "regular_point",
    "defect_number",
    "deficiency_index",
    "iso_indices",
    "spectrum_report",
]


@dataclass(frozen=True)
class RegularityCertificate:
    """Lower bound ``|(A - q I) phi| >= c_q |phi|`` on the domain."""

    q: Quaternion
    c_q: float
    is_regular: bool


@dataclass(frozen=True)
class DefectReport:
    q: Quaternion
    d_q: int
    regular: bool
    c_q: float

    def to_json(self) -> dict:
        return {"q": self.q.to_json(), "d": self.d_q, "regular": self.regular, "c_q": self.c_q}


def pseudo_resolvent(a: QMatrix, q: Quaternion) -> QMatrix:
    """``Q_q(A) = A^2 - 2 Re(q) A + |q|^2 I``.

    Only real scalars appear, so no basis is involved.
    """
    n = a.shape[0]
    return a @ a - 2.0 * q.w * a + q.norm2() * QMatrix.identity(n)


def s_spectrum(a: QMatrix, tol: float = 1e-8) -> list[SpectralSphere]:
    """The S-spectrum of a square matrix as a sorted list of spheres."""
    return right_eigen_spheres(a, tol)


def in_point_s_spectrum(a: QMatrix, q: Quaternion, tol: float = RANK_TOL) -> bool:
    """Direct test ``ker Q_q(A) != {0}``."""
    scale = max(a.max_abs() ** 2, q.norm2())
    return rank_h(pseudo_resolvent(a, q), tol, scale) < a.shape[0]


def _shift_scale(a: Operator, q) -> float:
    # Reference size of A - qI, so that cancellation to roundoff reads as zero.
    _, m = frame_and_action(a)
    return max(m.max_abs(), abs(q))


def _regularity(m: QMatrix, tol: float, scale: float) -> tuple[float, bool]:
    n, d = m.shape
    c = least_singular_value(m)
    s = singular_values(m)
    smax = float(s[0]) if s.size else 0.0
    # same cut as rank_h, so regular <=> (A - qI) injective on the domain
    return c, d <= n and c > tol * max(smax, scale) * max(2 * n, 2 * d)


def regular_point(a: Operator, q: Quaternion, basis: HilbertBasis | None = None,
                  tol: float = RANK_TOL) -> RegularityCertificate:
    """Best constant ``c_q`` (least singular value of the shifted operator)."""
    c, ok = _regularity(shifted_action(a, q, basis), tol, _shift_scale(a, q))
    return RegularityCertificate(q, c, ok)


def defect_number(a: Operator, q: Quaternion, basis: HilbertBasis | None = None,
                  tol: float = RANK_TOL) -> DefectReport:
    """``d_q(A) = dim ran(A - q I)^perp``.

    Computed for every ``q``; ``regular`` tells whether the value carries
    its usual meaning (it is only defined at regular points).
    """
    m = shifted_action(a, q, basis)
    scale = _shift_scale(a, q)
    c, ok = _regularity(m, tol, scale)
    return DefectReport(q, m.shape[0] - rank_h(m, tol, scale), ok, c)


def deficiency_index(a: Operator, lam, basis: HilbertBasis | None = None,
                     tol: float = RANK_TOL) -> int:
    """``n(A) = d_lambda(A)`` for A in class Y."""
    lam_q = getattr(lam, "value", lam)
    if not classify(a, basis).in_Y:
        raise NotInClass("deficiency index is defined for class-Y operators only")
    return defect_number(a, lam_q, basis, tol).d_q


def iso_indices(u: Operator, tol: float = RANK_TOL) -> tuple[int, int]:
    """Deficiency indices ``(d^i, d^e)`` of an isometric operator.

    ``d^i`` is the defect number at ``mu = 0`` (one point of the unit ball),
    i.e. ``dim ran(U)^perp``; ``d^e = dim D(U)^perp``.
    """
    if not is_isometric(u):
        raise NotIsometric("deficiency indices need an isometric operator")
    dom, m = frame_and_action(u)
    n = dom.shape[0]
    d_int = n - rank_h(m, tol)
    d_ext = n - (u.d if isinstance(u, PartialOperator) else n)
    return d_int, d_ext


def spectrum_report(a: QMatrix, tol: float = 1e-8) -> dict:
    return {"spheres": [s.to_json() for s in s_spectrum(a, tol)], "tol": tol}
