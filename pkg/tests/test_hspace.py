import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qcayley import sampling as smp
from qcayley.errors import DimensionMismatch, NotOrthonormal, RankDeficient
from qcayley.hspace import (
    HilbertBasis,
    QMatrix,
    QVector,
    expand,
    gram_schmidt,
    inner,
    left_mul,
    orthonormalize,
    polarization,
    qmatmul,
    reconstruct,
)
from qcayley.quat import I, J, K, ONE, Quaternion


def qv(*comps):
    return QVector.from_quaternions(comps)


def brute_inner(phi, psi):
    return sum((a.conj() * b for a, b in zip(phi.components, psi.components)), Quaternion())


def test_inner_examples():
    e1 = QVector.unit(2, 0)
    assert inner(e1, e1) == ONE
    assert inner(e1 * J, e1) == -J
    assert inner(qv(ONE, I), qv(J, 0.0)) == J


def test_inner_matches_componentwise_formula(rng):
    for n in (1, 3, 7):
        phi, psi = smp.vector(rng, n), smp.vector(rng, n)
        assert abs(inner(phi, psi) - brute_inner(phi, psi)) < 1e-12


def test_inner_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        inner(QVector.zeros(2), QVector.zeros(3))


def test_polarization_examples(rng):
    e1 = QVector.unit(3, 0)
    assert abs(polarization(e1, e1) - ONE) < 1e-15
    psi = smp.vector(rng, 3)
    assert abs(polarization(QVector.zeros(3), psi)) < 1e-14
    for _ in range(20):
        phi, psi = smp.vector(rng, 3), smp.vector(rng, 3)
        assert abs(polarization(phi, psi) - inner(phi, psi)) < 1e-10


def test_expand_standard_basis(rng):
    b = HilbertBasis.standard(4)
    coeffs = expand(QVector.unit(4, 1), b)
    assert coeffs == [Quaternion(), ONE, Quaternion(), Quaternion()]
    phi = smp.vector(rng, 4)
    assert expand(phi, b) == phi.components


def test_expand_reconstruct_random_basis(rng):
    for n in (1, 2, 6):
        b = smp.basis(rng, n)
        phi = smp.vector(rng, n)
        assert reconstruct(expand(phi, b), b).max_abs_diff(phi) <= 1e-10


def test_gram_schmidt_examples():
    std = gram_schmidt([QVector.unit(2, 0), QVector.unit(2, 1)])
    assert std.matrix.max_abs_diff(QMatrix.identity(2)) == 0.0
    b = gram_schmidt([qv(1.0, 1.0), qv(1.0, -1.0)])
    s = 1 / math.sqrt(2.0)
    assert b.matrix.max_abs_diff(QMatrix.from_real([[s, s], [s, -s]])) < 1e-15
    with pytest.raises(RankDeficient):
        gram_schmidt([QVector.unit(2, 0), QVector.unit(2, 0) * K])


def test_orthonormalize_right_span(rng):
    v = smp.matrix(rng, 5, 3)
    q, r = orthonormalize(v)
    assert (q.H @ q).max_abs_diff(QMatrix.identity(3)) < 1e-13
    assert (q @ r).max_abs_diff(v) < 1e-12
    assert np.abs(np.tril(np.linalg.norm(r.data, axis=-1), -1)).max() == 0.0


def test_basis_validation():
    with pytest.raises(NotOrthonormal):
        HilbertBasis(QMatrix.from_real([[1.0, 1.0], [0.0, 1.0]]))
    with pytest.raises(DimensionMismatch):
        HilbertBasis(QMatrix.from_real([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]))


def test_left_mul_standard_basis_is_componentwise():
    p1, p2 = Quaternion(1, 2, 3, 4), Quaternion(-1, 0.5, 0, 2)
    out = left_mul(J, qv(p1, p2), HilbertBasis.standard(2))
    assert out.components == [J * p1, J * p2]


def test_left_mul_real_and_norm(rng):
    b = smp.basis(rng, 4)
    phi = smp.vector(rng, 4)
    assert left_mul(2.5, phi, b).max_abs_diff(phi * 2.5) < 1e-13
    q = smp.quaternion(rng)
    assert abs(left_mul(q, phi, b).norm() - abs(q) * phi.norm()) < 1e-12


def test_left_mul_matches_matrix_form(rng):
    b = smp.basis(rng, 3)
    q, phi = smp.quaternion(rng), smp.vector(rng, 3)
    assert (b.left_matrix(q) @ phi).max_abs_diff(left_mul(q, phi, b)) < 1e-13


def test_left_mul_depends_on_basis():
    twisted = HilbertBasis(QMatrix.diag([J, ONE]))
    e1 = QVector.unit(2, 0)
    # e1 j q <e1 j|e1> = j i (-j) = -i for q = i
    assert left_mul(I, e1, twisted).components[0] == -I
    assert left_mul(I, e1, HilbertBasis.standard(2)).components[0] == I


def test_qmatmul_against_scalar_loop(rng):
    a, b = smp.matrix(rng, 3, 2), smp.matrix(rng, 2, 4)
    prod = QMatrix(qmatmul(a.data, b.data))
    for k in range(3):
        for l in range(4):
            expect = sum((a[k, m] * b[m, l] for m in range(2)), Quaternion())
            assert abs(prod[k, l] - expect) < 1e-13


def test_vectors_are_immutable(rng):
    v = smp.vector(rng, 2)
    with pytest.raises(ValueError):
        v.data[0, 0] = 1.0


comp = st.floats(-10, 10, allow_nan=False)
vec3 = st.lists(st.tuples(comp, comp, comp, comp), min_size=3, max_size=3).map(QVector)


@settings(max_examples=100, deadline=None)
@given(vec3, vec3, st.tuples(comp, comp, comp, comp).map(lambda t: Quaternion(*t)))
def test_inner_axioms_property(phi, psi, q):
    assert abs(inner(phi, psi).conj() - inner(psi, phi)) < 1e-10
    assert abs(inner(phi, psi * q) - inner(phi, psi) * q) < 1e-9
    assert abs(inner(phi * q, psi) - q.conj() * inner(phi, psi)) < 1e-9
    pp = inner(phi, phi)
    assert pp.imag_norm() <= 1e-14 * max(1.0, pp.w) and pp.w >= 0.0


@settings(max_examples=100, deadline=None)
@given(vec3, vec3)
def test_polarization_property(phi, psi):
    scale = max(1.0, phi.norm() * psi.norm(), phi.norm() ** 2, psi.norm() ** 2)
    assert abs(polarization(phi, psi) - inner(phi, psi)) <= 1e-12 * scale
