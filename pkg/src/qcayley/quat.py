"""Quaternion scalars and vectorized Hamilton-product kernels.

A quaternion ``q = w + x i + y j + z k`` is stored either as a
:class:`Quaternion` value or, for bulk work, as the trailing axis of a
float array of shape ``(..., 4)`` in the order ``[w, x, y, z]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Real

import numpy as np

from .config import ZERO_TOL
from .errors import ZeroQuaternion

__all__ = [
    "Quaternion",
    "ONE",
    "I",
    "J",
    "K",
    "ZERO",
    "q_mul",
    "q_inv",
    "in_sphere_S",
    "hamilton",
    "qconj",
    "qabs2",
    "STRUCTURE",
]


@dataclass(frozen=True)
class Quaternion:
    """An element of H with double-precision components."""

    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __post_init__(self):
        for name in ("w", "x", "y", "z"):
            object.__setattr__(self, name, float(getattr(self, name)))

    @classmethod
    def from_array(cls, arr) -> Quaternion:
        a = np.asarray(arr, dtype=float).reshape(4)
        return cls(a[0], a[1], a[2], a[3])

    @classmethod
    def parse(cls, text: str) -> Quaternion:
        """Parse the shell literal ``"w,x,y,z"``."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 4:
            raise ValueError(f"expected 'w,x,y,z', got {text!r}")
        return cls(*(float(p) for p in parts))

    def to_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def to_json(self) -> list[float]:
        return [self.w, self.x, self.y, self.z]

    @property
    def real(self) -> float:
        return self.w

    @property
    def imag(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)

    def imag_norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def conj(self) -> Quaternion:
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm2(self) -> float:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def __abs__(self) -> float:
        return math.sqrt(self.norm2())

    def is_real(self, tol: float = ZERO_TOL) -> bool:
        return self.imag_norm() <= tol

    def inverse(self) -> Quaternion:
        return q_inv(self)

    def __neg__(self) -> Quaternion:
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __add__(self, other):
        if isinstance(other, Quaternion):
            return Quaternion(self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z)
        if isinstance(other, Real):
            return Quaternion(self.w + other, self.x, self.y, self.z)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (Quaternion, Real)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, Real):
            return (-self) + other
        return NotImplemented

    def __mul__(self, other):
        # Quaternion times vector is deliberately unsupported: left scalar
        # multiplication of vectors depends on a chosen Hilbert basis.
        if isinstance(other, Quaternion):
            return q_mul(self, other)
        if isinstance(other, Real):
            return Quaternion(self.w * other, self.x * other, self.y * other, self.z * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Real):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, Real):
            return Quaternion(self.w / other, self.x / other, self.y / other, self.z / other)
        return NotImplemented

    def __repr__(self) -> str:
        return f"Quaternion({self.w!r}, {self.x!r}, {self.y!r}, {self.z!r})"

    def __str__(self) -> str:
        return f"{self.w:g}{self.x:+g}i{self.y:+g}j{self.z:+g}k"


ZERO = Quaternion()
ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def q_mul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product ``a b``."""
    return Quaternion(
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    )


def q_inv(q: Quaternion, tol: float = ZERO_TOL, scale: float = 0.0) -> Quaternion:
    """Return ``conj(q) / |q|**2``.

    Raises :class:`ZeroQuaternion` when ``|q| <= tol * (1 + scale)``; pass
    ``scale`` when ``q`` comes out of a computation on large operands.
    """
    n2 = q.norm2()
    if math.sqrt(n2) <= tol * (1.0 + scale):
        raise ZeroQuaternion(f"cannot invert {q!s}: modulus below {tol:g}")
    return q.conj() / n2


def in_sphere_S(q: Quaternion, tol: float = ZERO_TOL) -> bool:
    """True iff ``q`` lies on the sphere of imaginary units (``q*q == -1``)."""
    if tol < 0:
        raise ValueError("tol must be non-negative")
    return abs(q.w) <= tol and abs(abs(q) - 1.0) <= tol


# --- array kernels ---------------------------------------------------------


def _structure_tensor() -> np.ndarray:
    units = [ONE, I, J, K]
    t = np.zeros((4, 4, 4))
    for a, ua in enumerate(units):
        for b, ub in enumerate(units):
            t[a, b] = q_mul(ua, ub).to_array()
    return t


#: ``STRUCTURE[a, b, c]`` is the c-component of ``e_a e_b`` for units 1, i, j, k.
STRUCTURE = _structure_tensor()
_CONJ = np.array([1.0, -1.0, -1.0, -1.0])


def hamilton(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Broadcast Hamilton product of arrays with trailing axis 4."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a0, a1, a2, a3 = np.moveaxis(a, -1, 0)
    b0, b1, b2, b3 = np.moveaxis(b, -1, 0)
    return np.stack(
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ],
        axis=-1,
    )


def qconj(a: np.ndarray) -> np.ndarray:
    return np.asarray(a, dtype=float) * _CONJ


def qabs2(a: np.ndarray) -> np.ndarray:
    """Squared moduli over the trailing axis."""
    a = np.asarray(a, dtype=float)
    return np.einsum("...c,...c->...", a, a)
