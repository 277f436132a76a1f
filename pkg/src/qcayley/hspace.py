"""Right quaternionic Hilbert space H^n.

Vectors carry the right scalar action ``(phi q)_k = phi_k q`` and the inner
product ``<phi|psi> = sum_k conj(phi_k) psi_k``, conjugate-linear in the first
slot.  Left scalar multiplication is not intrinsic to a right space; it is
induced by a :class:`HilbertBasis` and always takes one explicitly.
"""

from __future__ import annotations

from numbers import Real
from typing import Iterable, Sequence

import numpy as np

from .config import BASIS_TOL, ZERO_TOL
from .errors import DimensionMismatch, NotOrthonormal, RankDeficient
from .quat import STRUCTURE, Quaternion, hamilton, qabs2, qconj

__all__ = [
    "QVector",
    "QMatrix",
    "HilbertBasis",
    "qmatmul",
    "inner",
    "polarization",
    "expand",
    "reconstruct",
    "orthonormalize",
    "gram_schmidt",
    "left_mul",
    "orthonormality_error",
]


def _product_terms() -> list[tuple[int, int, int, float]]:
    # (a, b, c, sign) with e_a e_b = sign * e_c; one nonzero per (a, b).
    terms = []
    for a in range(4):
        for b in range(4):
            (c,) = np.flatnonzero(STRUCTURE[a, b])
            terms.append((a, b, int(c), float(STRUCTURE[a, b, c])))
    return terms


_PRODUCT_TERMS = _product_terms()


def qmatmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of quaternion arrays of shapes ``(n, m, 4)`` and ``(m, p, 4)``.

    Sixteen real matrix products, one per pair of unit components.
    """
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply {a.shape[:2]} by {b.shape[:2]}")
    out = np.zeros((a.shape[0], b.shape[1], 4))
    for ia, ib, ic, sign in _PRODUCT_TERMS:
        out[:, :, ic] += sign * (a[:, :, ia] @ b[:, :, ib])
    return out


def _as_quat_array(q) -> np.ndarray:
    if isinstance(q, Quaternion):
        return q.to_array()
    if isinstance(q, Real):
        return np.array([float(q), 0.0, 0.0, 0.0])
    raise TypeError(f"expected a quaternion or real scalar, got {type(q).__name__}")


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


class QVector:
    """Column vector in H^n, stored as an ``(n, 4)`` float array."""

    __slots__ = ("data",)

    def __init__(self, data):
        arr = np.array(data, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 4 or arr.shape[0] < 1:
            raise ValueError(f"QVector needs shape (n, 4) with n >= 1, got {arr.shape}")
        self.data = _frozen(arr)

    @classmethod
    def from_quaternions(cls, comps: Iterable) -> QVector:
        return cls([_as_quat_array(q) for q in comps])

    @classmethod
    def zeros(cls, n: int) -> QVector:
        return cls(np.zeros((n, 4)))

    @classmethod
    def unit(cls, n: int, k: int) -> QVector:
        """Standard basis vector e_k (0-based)."""
        arr = np.zeros((n, 4))
        arr[k, 0] = 1.0
        return cls(arr)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    def __len__(self) -> int:
        return self.dim

    def __getitem__(self, k: int) -> Quaternion:
        return Quaternion.from_array(self.data[k])

    @property
    def components(self) -> list[Quaternion]:
        return [Quaternion.from_array(row) for row in self.data]

    def _check(self, other: QVector) -> None:
        if not isinstance(other, QVector):
            raise TypeError(f"expected QVector, got {type(other).__name__}")
        if other.dim != self.dim:
            raise DimensionMismatch(f"dimensions {self.dim} and {other.dim} differ")

    def __add__(self, other):
        if not isinstance(other, QVector):
            return NotImplemented
        self._check(other)
        return QVector(self.data + other.data)

    def __sub__(self, other):
        if not isinstance(other, QVector):
            return NotImplemented
        self._check(other)
        return QVector(self.data - other.data)

    def __neg__(self) -> QVector:
        return QVector(-self.data)

    def __mul__(self, q):
        """Right scalar action ``phi q``."""
        if isinstance(q, (Quaternion, Real)):
            return QVector(hamilton(self.data, _as_quat_array(q)))
        return NotImplemented

    def __rmul__(self, r):
        if isinstance(r, Real):
            return QVector(self.data * float(r))
        return NotImplemented

    def __truediv__(self, r):
        if isinstance(r, Real):
            return QVector(self.data / float(r))
        return NotImplemented

    def norm(self) -> float:
        return float(np.sqrt(qabs2(self.data).sum()))

    def as_column(self) -> QMatrix:
        return QMatrix(self.data[:, None, :])

    def max_abs_diff(self, other: QVector) -> float:
        self._check(other)
        return float(np.sqrt(qabs2(self.data - other.data)).max())

    def to_json(self) -> list[list[float]]:
        return self.data.tolist()

    def __repr__(self) -> str:
        return f"QVector({self.data.tolist()!r})"


class QMatrix:
    """Right-linear operator H^m -> H^n as an ``(n, m, 4)`` float array.

    Acts on vectors by ``(A phi)_k = sum_l a_kl phi_l``.
    """

    __slots__ = ("data",)

    def __init__(self, data):
        arr = np.array(data, dtype=float)
        if arr.ndim != 3 or arr.shape[2] != 4:
            raise ValueError(f"QMatrix needs shape (n, m, 4), got {arr.shape}")
        self.data = _frozen(arr)

    # constructors

    @classmethod
    def zeros(cls, n: int, m: int | None = None) -> QMatrix:
        return cls(np.zeros((n, n if m is None else m, 4)))

    @classmethod
    def identity(cls, n: int) -> QMatrix:
        return cls.from_real(np.eye(n))

    @classmethod
    def from_real(cls, r) -> QMatrix:
        r = np.asarray(r, dtype=float)
        if r.ndim != 2:
            raise ValueError("expected a 2-d real array")
        arr = np.zeros(r.shape + (4,))
        arr[..., 0] = r
        return cls(arr)

    @classmethod
    def from_quaternions(cls, rows: Sequence[Sequence]) -> QMatrix:
        return cls([[_as_quat_array(q) for q in row] for row in rows])

    @classmethod
    def diag(cls, entries: Sequence) -> QMatrix:
        n = len(entries)
        arr = np.zeros((n, n, 4))
        for k, q in enumerate(entries):
            arr[k, k] = _as_quat_array(q)
        return cls(arr)

    @classmethod
    def scalar(cls, q, n: int) -> QMatrix:
        """``diag(q, ..., q)``: left multiplication by q in the standard basis."""
        return cls.diag([q] * n)

    @classmethod
    def from_columns(cls, cols: Sequence[QVector]) -> QMatrix:
        if not cols:
            raise ValueError("need at least one column")
        return cls(np.stack([c.data for c in cols], axis=1))

    @classmethod
    def hstack(cls, *mats: QMatrix) -> QMatrix:
        return cls(np.concatenate([m.data for m in mats], axis=1))

    # shape and access

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape[0], self.data.shape[1]

    @property
    def is_square(self) -> bool:
        return self.data.shape[0] == self.data.shape[1]

    def __getitem__(self, kl: tuple[int, int]) -> Quaternion:
        k, l = kl
        return Quaternion.from_array(self.data[k, l])

    def column(self, l: int) -> QVector:
        return QVector(self.data[:, l, :])

    def columns(self) -> list[QVector]:
        return [self.column(l) for l in range(self.shape[1])]

    # algebra

    def _check_same(self, other: QMatrix) -> None:
        if other.shape != self.shape:
            raise DimensionMismatch(f"shapes {self.shape} and {other.shape} differ")

    def __add__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        self._check_same(other)
        return QMatrix(self.data + other.data)

    def __sub__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        self._check_same(other)
        return QMatrix(self.data - other.data)

    def __neg__(self) -> QMatrix:
        return QMatrix(-self.data)

    def __mul__(self, r):
        if isinstance(r, Real):
            return QMatrix(self.data * float(r))
        return NotImplemented

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, QMatrix):
            return QMatrix(qmatmul(self.data, other.data))
        if isinstance(other, QVector):
            if other.dim != self.shape[1]:
                raise DimensionMismatch(f"cannot apply {self.shape} matrix to a {other.dim}-vector")
            return QVector(qmatmul(self.data, other.data[:, None, :])[:, 0, :])
        return NotImplemented

    @property
    def H(self) -> QMatrix:
        """Conjugate transpose."""
        return QMatrix(qconj(self.data.transpose(1, 0, 2)))

    @property
    def T(self) -> QMatrix:
        return QMatrix(self.data.transpose(1, 0, 2))

    def lmul_entries(self, q) -> QMatrix:
        """Entrywise ``q a_kl``."""
        return QMatrix(hamilton(_as_quat_array(q), self.data))

    def rmul_entries(self, q) -> QMatrix:
        """Entrywise ``a_kl q``."""
        return QMatrix(hamilton(self.data, _as_quat_array(q)))

    # diagnostics

    def max_abs_diff(self, other: QMatrix) -> float:
        """Largest entrywise quaternion modulus of ``self - other``."""
        self._check_same(other)
        d = self.data - other.data
        if d.size == 0:
            return 0.0
        return float(np.sqrt(qabs2(d)).max())

    def max_abs(self) -> float:
        if self.data.size == 0:
            return 0.0
        return float(np.sqrt(qabs2(self.data)).max())

    def is_real(self, tol: float = ZERO_TOL) -> bool:
        return bool(np.all(np.abs(self.data[..., 1:]) <= tol))

    def real_part(self) -> np.ndarray:
        return self.data[..., 0].copy()

    def to_json(self) -> list:
        return self.data.tolist()

    def __repr__(self) -> str:
        n, m = self.shape
        return f"QMatrix<{n}x{m}>({self.data.tolist()!r})"


def orthonormality_error(frame: np.ndarray) -> float:
    """``max |<f_k|f_l> - delta_kl|`` over the columns of an ``(n, d, 4)`` array."""
    d = frame.shape[1]
    gram = qmatmul(qconj(frame.transpose(1, 0, 2)), frame)
    gram[..., 0] -= np.eye(d)
    return float(np.sqrt(qabs2(gram)).max()) if d else 0.0


class HilbertBasis:
    """Orthonormal basis ``{phi_k}`` of H^n, stored as the columns of a matrix.

    The basis determines the left scalar multiplication
    ``q phi = sum_k phi_k q <phi_k|phi>``; in matrix form that operator is
    ``B diag(q) B^H`` (see :meth:`left_matrix`).
    """

    __slots__ = ("matrix",)

    def __init__(self, matrix: QMatrix, tol: float = BASIS_TOL):
        if not isinstance(matrix, QMatrix):
            matrix = QMatrix(matrix)
        if not matrix.is_square:
            raise DimensionMismatch(f"a basis of H^n needs n columns, got shape {matrix.shape}")
        err = orthonormality_error(matrix.data)
        if err > tol:
            raise NotOrthonormal(f"max |<phi_k|phi_l> - delta_kl| = {err:.3g} exceeds {tol:g}")
        self.matrix = matrix

    @classmethod
    def standard(cls, n: int) -> HilbertBasis:
        return cls(QMatrix.identity(n))

    @classmethod
    def from_columns(cls, cols: Sequence[QVector], tol: float = BASIS_TOL) -> HilbertBasis:
        return cls(QMatrix.from_columns(cols), tol)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def columns(self) -> list[QVector]:
        return self.matrix.columns()

    def left_matrix(self, q) -> QMatrix:
        """Matrix of ``phi -> q phi`` in this basis."""
        return self.matrix @ QMatrix.scalar(q, self.n) @ self.matrix.H

    def left_mul(self, q, phi: QVector) -> QVector:
        return left_mul(q, phi, self)

    def to_json(self) -> list:
        return [c.to_json() for c in self.columns]

    def __repr__(self) -> str:
        return f"HilbertBasis(n={self.n})"


# --- operations ------------------------------------------------------------


def inner(phi: QVector, psi: QVector) -> Quaternion:
    """``<phi|psi> = sum_k conj(phi_k) psi_k``."""
    if phi.dim != psi.dim:
        raise DimensionMismatch(f"dimensions {phi.dim} and {psi.dim} differ")
    return Quaternion.from_array(hamilton(qconj(phi.data), psi.data).sum(axis=0))


def polarization(phi: QVector, psi: QVector) -> Quaternion:
    """Recover ``<phi|psi>`` from squared norms alone.

    ``1/4 (|phi+psi|^2 - |phi-psi|^2)
    + 1/4 sum_{t=i,j,k} (|phi t + psi|^2 - |phi t - psi|^2) t``
    """
    if phi.dim != psi.dim:
        raise DimensionMismatch(f"dimensions {phi.dim} and {psi.dim} differ")

    def n2(v: QVector) -> float:
        return float(qabs2(v.data).sum())

    out = np.zeros(4)
    out[0] = 0.25 * (n2(phi + psi) - n2(phi - psi))
    for c, tau in ((1, Quaternion(0, 1)), (2, Quaternion(0, 0, 1)), (3, Quaternion(0, 0, 0, 1))):
        pt = phi * tau
        out[c] = 0.25 * (n2(pt + psi) - n2(pt - psi))
    return Quaternion.from_array(out)


def expand(phi: QVector, basis: HilbertBasis) -> list[Quaternion]:
    """Fourier coefficients ``c_k = <phi_k|phi>`` of ``phi`` in ``basis``."""
    if phi.dim != basis.n:
        raise DimensionMismatch(f"vector of dim {phi.dim} vs basis of H^{basis.n}")
    coeffs = basis.matrix.H @ phi
    return coeffs.components


def reconstruct(coeffs: Sequence[Quaternion], basis: HilbertBasis) -> QVector:
    """``sum_k phi_k c_k``."""
    if len(coeffs) != basis.n:
        raise DimensionMismatch(f"{len(coeffs)} coefficients vs basis of H^{basis.n}")
    return basis.matrix @ QVector.from_quaternions(coeffs)


def orthonormalize(vectors, tol: float = 1e-9) -> tuple[QMatrix, QMatrix]:
    """Modified Gram-Schmidt with one re-orthogonalization pass.

    Returns ``(Q, R)`` with orthonormal columns ``Q``, upper-triangular
    ``R`` and ``V = Q R`` where ``V`` has the input vectors as columns.
    Coefficients act on the right, so the right span is preserved.

    Raises :class:`RankDeficient` when a residual falls below
    ``tol * max(1, |v|)``.
    """
    mat = vectors if isinstance(vectors, QMatrix) else QMatrix.from_columns(list(vectors))
    v = np.array(mat.data)
    n, d = v.shape[:2]
    q = np.zeros((n, d, 4))
    r = np.zeros((d, d, 4))
    for l in range(d):
        w = v[:, l, :].copy()
        scale = max(1.0, float(np.sqrt(qabs2(w).sum())))
        for _ in range(2):
            for k in range(l):
                c = hamilton(qconj(q[:, k, :]), w).sum(axis=0)
                w -= hamilton(q[:, k, :], c)
                r[k, l] += c
        nrm = float(np.sqrt(qabs2(w).sum()))
        if nrm <= tol * scale:
            raise RankDeficient(f"vector {l} lies in the right span of the previous ones")
        q[:, l, :] = w / nrm
        r[l, l, 0] = nrm
    return QMatrix(q), QMatrix(r)


def gram_schmidt(vectors: Sequence[QVector], tol: float = 1e-9) -> HilbertBasis:
    """Orthonormalize ``n`` right-linearly independent vectors of H^n."""
    vectors = list(vectors)
    if not vectors:
        raise ValueError("no vectors given")
    n = vectors[0].dim
    if len(vectors) != n:
        raise DimensionMismatch(f"a basis of H^{n} needs {n} vectors, got {len(vectors)}")
    q, _ = orthonormalize(vectors, tol)
    return HilbertBasis(q)


def left_mul(q, phi: QVector, basis: HilbertBasis) -> QVector:
    """Basis-induced left product ``sum_k phi_k q <phi_k|phi>``."""
    if phi.dim != basis.n:
        raise DimensionMismatch(f"vector of dim {phi.dim} vs basis of H^{basis.n}")
    b = basis.matrix.data
    coeffs = hamilton(qconj(b), phi.data[:, None, :]).sum(axis=0)
    scaled = hamilton(_as_quat_array(q), coeffs)
    return QVector(hamilton(b, scaled[None, :, :]).sum(axis=1))
