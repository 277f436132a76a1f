"""Complex adjoint representation chi: H^{n x m} -> C^{2n x 2m}.

Convention (fixed everywhere, including file formats): a quaternion is split
as ``q = (w + x i) + (y + z i) j = a + b j`` and mapped to the 2x2 block
``[[a, b], [-conj(b), conj(a)]]``.  Entry ``(k, l)`` of a quaternionic
matrix occupies rows ``2k, 2k+1`` and columns ``2l, 2l+1`` of its image.

chi is an injective ring homomorphism with ``chi(M^H) = chi(M)^H``, so
inversion, rank and eigenvalues over H can be computed in C.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import RANK_TOL
from .errors import DimensionMismatch, NotSymplectic, OddComplexRank, RankDeficient, Singular
from .hspace import QMatrix, QVector, orthonormalize
from .quat import Quaternion

__all__ = [
    "SpectralSphere",
    "chi",
    "chi_inv",
    "symplectic_defect",
    "singular_values",
    "least_singular_value",
    "rank_h",
    "qsolve",
    "qsolve_right",
    "qinv",
    "right_eigenvalues",
    "conjugate_pairing_residual",
    "right_eigen_spheres",
    "orthocomplement",
    "span_contains",
    "same_span",
]


@dataclass(frozen=True, order=True)
class SpectralSphere:
    """The similarity class ``{q : Re q = re, |Im q| = im_norm}``.

    ``im_norm == 0`` is the single real point ``re``.
    """

    re: float
    im_norm: float

    def __post_init__(self):
        if self.im_norm < 0:
            raise ValueError("im_norm must be non-negative")

    def contains(self, q: Quaternion, tol: float = 1e-9) -> bool:
        return abs(q.w - self.re) <= tol and abs(q.imag_norm() - self.im_norm) <= tol

    def representative(self) -> Quaternion:
        return Quaternion(self.re, self.im_norm)

    def distance(self, q: Quaternion) -> float:
        """Euclidean distance in R^4 from ``q`` to the sphere."""
        return float(np.hypot(q.w - self.re, q.imag_norm() - self.im_norm))

    def to_json(self) -> dict:
        return {"re": self.re, "im_norm": self.im_norm}

    @classmethod
    def from_json(cls, obj: dict) -> SpectralSphere:
        return cls(float(obj["re"]), float(obj["im_norm"]))


def _data(m) -> np.ndarray:
    if isinstance(m, QMatrix):
        return m.data
    if isinstance(m, QVector):
        return m.data[:, None, :]
    raise TypeError(f"expected QMatrix or QVector, got {type(m).__name__}")


def chi(m) -> np.ndarray:
    """Complex adjoint matrix of a QMatrix (or a QVector as an n x 1 matrix)."""
    d = _data(m)
    n, k = d.shape[:2]
    a = d[..., 0] + 1j * d[..., 1]
    b = d[..., 2] + 1j * d[..., 3]
    out = np.empty((2 * n, 2 * k), dtype=complex)
    out[0::2, 0::2] = a
    out[0::2, 1::2] = b
    out[1::2, 0::2] = -b.conj()
    out[1::2, 1::2] = a.conj()
    return out


def symplectic_defect(c: np.ndarray) -> float:
    """Largest violation of the block pattern, relative to ``1 + max|c|``."""
    c = np.asarray(c)
    dev = max(
        np.abs(c[1::2, 0::2] + c[0::2, 1::2].conj()).max(initial=0.0),
        np.abs(c[1::2, 1::2] - c[0::2, 0::2].conj()).max(initial=0.0),
    )
    return float(dev / (1.0 + np.abs(c).max(initial=0.0)))


def chi_inv(c: np.ndarray, tol: float = 1e-9) -> QMatrix:
    """Map a symplectic complex matrix back to H, projecting out rounding."""
    c = np.asarray(c, dtype=complex)
    if c.ndim != 2 or c.shape[0] % 2 or c.shape[1] % 2:
        raise NotSymplectic(f"shape {c.shape} is not (2n, 2m)")
    dev = symplectic_defect(c)
    if dev > tol:
        raise NotSymplectic(f"block pattern violated by {dev:.3g} (tol {tol:g})")
    a = 0.5 * (c[0::2, 0::2] + c[1::2, 1::2].conj())
    b = 0.5 * (c[0::2, 1::2] - c[1::2, 0::2].conj())
    return QMatrix(np.stack([a.real, a.imag, b.real, b.imag], axis=-1))


def singular_values(m) -> np.ndarray:
    """Singular values of ``chi(m)``, descending; every value appears twice."""
    c = chi(m)
    if c.size == 0:
        return np.zeros(0)
    return np.linalg.svd(c, compute_uv=False)


def _threshold(s: np.ndarray, shape: tuple[int, int], tol: float, scale: float = 0.0) -> float:
    smax = float(s[0]) if s.size else 0.0
    return tol * max(smax, scale) * max(2 * shape[0], 2 * shape[1])


def least_singular_value(m) -> float:
    """``min |m phi| / |phi|`` over nonzero ``phi``; zero when m has a kernel."""
    n, k = _data(m).shape[:2]
    if k > n:
        return 0.0
    s = singular_values(m)
    return float(s[-1]) if s.size else 0.0


def rank_h(m, tol: float = RANK_TOL, scale: float = 0.0) -> int:
    """Rank over H: half the numerical complex rank of ``chi(m)``.

    Singular values at or below ``tol * max(sigma_max, scale) * max(2n, 2m)``
    count as zero.  ``scale`` is a known reference magnitude; it keeps
    roundoff-sized matrices such as ``I - U`` for ``U = I`` at rank zero.
    """
    shape = _data(m).shape[:2]
    s = singular_values(m)
    if s.size == 0:
        return 0
    r = int(np.count_nonzero(s > _threshold(s, shape, tol, scale)))
    if r % 2:
        raise OddComplexRank(f"complex rank {r} of chi is odd")
    return r // 2


def qsolve(m: QMatrix, rhs, tol: float = RANK_TOL):
    """Solve ``m X = rhs`` for square ``m`` of full quaternionic rank."""
    if not m.is_square:
        raise DimensionMismatch(f"qsolve needs a square matrix, got {m.shape}")
    if rank_h(m, tol) < m.shape[0]:
        raise Singular(f"matrix of size {m.shape[0]} is rank deficient")
    x = chi_inv(np.linalg.solve(chi(m), chi(rhs)))
    if isinstance(rhs, QVector):
        return x.column(0)
    return x


def qsolve_right(m: QMatrix, rhs: QMatrix, tol: float = RANK_TOL) -> QMatrix:
    """Solve ``X m = rhs``."""
    return qsolve(m.H, rhs.H, tol).H


def qinv(m: QMatrix, tol: float = RANK_TOL) -> QMatrix:
    return qsolve(m, QMatrix.identity(m.shape[0]), tol)


def right_eigenvalues(m: QMatrix) -> np.ndarray:
    """Eigenvalues of ``chi(m)``; they come in conjugate pairs."""
    if not m.is_square:
        raise DimensionMismatch(f"eigenvalues need a square matrix, got {m.shape}")
    c = chi(m)
    if np.allclose(c, c.conj().T, rtol=0.0, atol=1e-14 * (1.0 + np.abs(c).max())):
        return np.linalg.eigvalsh(c).astype(complex)
    return np.linalg.eigvals(c)


def conjugate_pairing_residual(eigs: np.ndarray) -> float:
    """Greedy conjugate matching; worst ``|z1 - conj(z2)| / (1 + |z1|)``.

    Real eigenvalues are expected twice and pair with each other.
    """
    remaining = list(np.asarray(eigs, dtype=complex))
    worst = 0.0
    while remaining:
        z = remaining.pop(0)
        if not remaining:
            return float("inf")
        dists = [abs(z - w.conjugate()) for w in remaining]
        j = int(np.argmin(dists))
        worst = max(worst, dists[j] / (1.0 + abs(z)))
        remaining.pop(j)
    return worst


def right_eigen_spheres(m: QMatrix, tol: float = 1e-8) -> list[SpectralSphere]:
    """Spheres ``(Re z, |Im z|)`` of the right eigenvalues of ``m``.

    Both members of a conjugate pair give the same sphere, so every
    eigenvalue of ``chi(m)`` is mapped and the results are merged when they
    agree within ``tol * (1 + |z|)``.  Sorted by ``(re, im_norm)``.
    """
    raw = []
    for z in right_eigenvalues(m):
        scale = tol * (1.0 + abs(z))
        im = abs(z.imag)
        raw.append((float(z.real), 0.0 if im <= scale else float(im), scale))
    raw.sort()
    merged: list[tuple[float, float, float]] = []
    for re, im, scale in raw:
        for idx, (r0, i0, s0) in enumerate(merged):
            if abs(re - r0) <= max(scale, s0) and abs(im - i0) <= max(scale, s0):
                break
        else:
            merged.append((re, im, scale))
    return sorted(SpectralSphere(re, im) for re, im, _ in merged)


def _complex_to_qvectors(vecs: np.ndarray) -> list[QVector]:
    # A complex column u is the first column of chi(v) for v = a + b j with
    # a = u[0::2], b = -conj(u[1::2]).
    out = []
    for u in vecs.T:
        a = u[0::2]
        b = -u[1::2].conj()
        out.append(QVector(np.stack([a.real, a.imag, b.real, b.imag], axis=-1)))
    return out


def orthocomplement(m: QMatrix, tol: float = RANK_TOL, scale: float = 0.0) -> QMatrix | None:
    """Orthonormal frame of ``ran(m)^perp``, or None if the range is everything."""
    n = m.shape[0]
    r = rank_h(m, tol, scale)
    if r == n:
        return None
    u, _, _ = np.linalg.svd(chi(m))
    candidates = _complex_to_qvectors(u[:, 2 * r :])
    frame: list[QVector] = []
    for v in candidates:
        try:
            q, _ = orthonormalize(frame + [v], tol=1e-6)
        except RankDeficient:
            continue
        frame = q.columns()
        if len(frame) == n - r:
            break
    if len(frame) != n - r:
        raise OddComplexRank("could not assemble a quaternionic frame for the complement")
    return QMatrix.from_columns(frame)


def span_contains(big: QMatrix, small: QMatrix, tol: float = RANK_TOL) -> bool:
    """True iff the right span of ``small`` lies inside that of ``big``."""
    return rank_h(QMatrix.hstack(big, small), tol) == rank_h(big, tol)


def same_span(s1: QMatrix, s2: QMatrix, tol: float = RANK_TOL) -> bool:
    """Subspace equality via ``rank[S1 S2] == rank S1 == rank S2``."""
    r1, r2 = rank_h(s1, tol), rank_h(s2, tol)
    return r1 == r2 == rank_h(QMatrix.hstack(s1, s2), tol)
