"""Random quaternionic objects for property checks.

Every function takes an explicit ``numpy.random.Generator``.
"""

from __future__ import annotations

import numpy as np

from .hspace import HilbertBasis, QMatrix, QVector, orthonormalize
from .qop import PartialOperator
from .quat import Quaternion

__all__ = [
    "quaternion",
    "unit_imaginary",
    "nonreal_quaternion",
    "vector",
    "matrix",
    "unitary",
    "basis",
    "real_orthogonal",
    "real_symmetric",
    "hermitian",
    "class_y",
    "partial_class_y",
    "partial_isometry",
    "partial_operator",
    "lambda_value",
    "remark_params",
]


def quaternion(rng: np.random.Generator, scale: float = 1.0) -> Quaternion:
    return Quaternion.from_array(rng.normal(scale=scale, size=4))


def unit_imaginary(rng: np.random.Generator) -> Quaternion:
    v = rng.normal(size=3)
    v /= np.linalg.norm(v)
    return Quaternion(0.0, *v)


def nonreal_quaternion(rng: np.random.Generator, min_imag: float = 0.1) -> Quaternion:
    while True:
        q = quaternion(rng)
        if q.imag_norm() >= min_imag:
            return q


def vector(rng: np.random.Generator, n: int) -> QVector:
    return QVector(rng.normal(size=(n, 4)))


def matrix(rng: np.random.Generator, n: int, m: int | None = None) -> QMatrix:
    return QMatrix(rng.normal(size=(n, n if m is None else m, 4)))


def unitary(rng: np.random.Generator, n: int) -> QMatrix:
    q, _ = orthonormalize(matrix(rng, n))
    return q


def basis(rng: np.random.Generator, n: int) -> HilbertBasis:
    return HilbertBasis(unitary(rng, n))


def real_orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(n, n)))
    return q * np.sign(np.diag(r))


def real_symmetric(rng: np.random.Generator, n: int) -> np.ndarray:
    x = rng.normal(size=(n, n))
    return 0.5 * (x + x.T)


def hermitian(rng: np.random.Generator, n: int) -> QMatrix:
    x = matrix(rng, n)
    return 0.5 * (x + x.H)


def class_y(rng: np.random.Generator, n: int, b: HilbertBasis | None = None) -> QMatrix:
    """``B S B^H`` with ``S`` real symmetric: commutes with every left multiplication in B."""
    s = QMatrix.from_real(real_symmetric(rng, n))
    if b is None:
        return s
    return b.matrix @ s @ b.matrix.H


def _real_frame(rng: np.random.Generator, n: int, d: int) -> tuple[np.ndarray, np.ndarray]:
    q = real_orthogonal(rng, n)
    return q[:, :d], q[:, d:]


def partial_class_y(rng: np.random.Generator, n: int, d: int,
                    b: HilbertBasis | None = None) -> PartialOperator:
    """Symmetric operator on a d-dimensional domain, in class X for basis ``b``.

    The domain is the B-image of a real subspace (hence invariant under left
    multiplication) and the action is ``D S + P K`` with ``S`` real
    symmetric and ``P`` spanning the real complement, so images may leave
    the domain.
    """
    dom, perp = _real_frame(rng, n, d)
    act = dom @ real_symmetric(rng, d)
    if d < n:
        act = act + perp @ rng.normal(size=(n - d, d))
    frame = QMatrix.from_real(dom)
    action = QMatrix.from_real(act)
    if b is not None:
        frame = b.matrix @ frame
        action = b.matrix @ action
    return PartialOperator(frame, action)


def partial_isometry(rng: np.random.Generator, n: int, d: int) -> PartialOperator:
    """Isometry from a random d-dimensional subspace onto another."""
    return PartialOperator(QMatrix(unitary(rng, n).data[:, :d]), QMatrix(unitary(rng, n).data[:, :d]))


def partial_operator(rng: np.random.Generator, n: int, d: int) -> PartialOperator:
    """Arbitrary right-linear map on a random d-dimensional subspace."""
    return PartialOperator(QMatrix(unitary(rng, n).data[:, :d]), matrix(rng, n, d))


def lambda_value(rng: np.random.Generator) -> Quaternion:
    """Random parameter with strictly positive i, j, k parts."""
    return Quaternion(rng.normal(), *rng.uniform(0.2, 2.0, size=3))


def remark_params(rng: np.random.Generator, max_n: int = 20) -> tuple[list[float], list[int], list[int]]:
    """Random ``(thetas, signs, perm)`` for a generated matrix of size <= max_n."""
    m = int(rng.integers(1, max_n // 2 + 1))
    n_signs = int(rng.integers(0, 2)) if 2 * m < max_n else 0
    thetas = rng.uniform(0.0, 2.0 * np.pi, size=m).tolist()
    signs = rng.choice([-1, 1], size=n_signs).tolist()
    perm = rng.permutation(m + n_signs).tolist()
    return thetas, [int(s) for s in signs], [int(p) for p in perm]
