import math

import numpy as np
import pytest

from qcayley import sampling as smp
from qcayley.cayley import gen_remark
from qcayley.errors import InvalidOperator, NotInDomain
from qcayley.hspace import QMatrix, inner, left_mul
from qcayley.qop import (
    PartialOperator,
    adjoint,
    classify,
    domain_invariant,
    extends,
    is_antisymmetric,
    is_isometric,
    is_self_adjoint,
    is_symmetric,
    is_unitary,
    op_scalar_left,
    op_scalar_right,
    operator_deviation,
)
from qcayley.quat import I, J, ONE


def test_adjoint_examples(rng):
    r = rng.normal(size=(3, 3))
    assert adjoint(QMatrix.from_real(r)).max_abs_diff(QMatrix.from_real(r.T)) == 0.0
    assert adjoint(QMatrix.from_quaternions([[I]]))[0, 0] == -I
    a = smp.matrix(rng, 4)
    phi, psi = smp.vector(rng, 4), smp.vector(rng, 4)
    assert abs(inner(psi, a @ phi) - inner(adjoint(a) @ psi, phi)) < 1e-11


def test_adjoint_rejects_partial(rng):
    with pytest.raises(TypeError):
        adjoint(smp.partial_operator(rng, 3, 2))


def test_symmetry_examples(rng):
    assert is_symmetric(gen_remark([0.3]))
    assert not is_symmetric(QMatrix.from_quaternions([[I]]))
    assert is_symmetric(QMatrix.from_real(smp.real_symmetric(rng, 5)))
    assert is_symmetric(smp.hermitian(rng, 4))
    assert is_antisymmetric(QMatrix.from_quaternions([[I]]))


def test_scalar_multiplication_examples(rng):
    a = smp.matrix(rng, 3)
    b = smp.basis(rng, 3)
    assert op_scalar_left(2.0, a, b).max_abs_diff(a * 2.0) < 1e-13
    assert op_scalar_right(a, 2.0, b).max_abs_diff(a * 2.0) < 1e-13
    lj = op_scalar_left(J, a)
    for k in range(3):
        for l in range(3):
            assert abs(lj[k, l] - J * a[k, l]) < 1e-15
    q = smp.quaternion(rng)
    assert op_scalar_left(q, a, b).H.max_abs_diff(op_scalar_right(a.H, q.conj(), b)) < 1e-11


def test_classify_examples():
    flags = classify(gen_remark([0.4, 2.0]))
    assert flags.in_X and flags.in_Y
    # The generated matrices have eigenvalue 1, so ran(I - A) is not dense.
    assert not flags.in_Z
    flags = classify(QMatrix.from_real(np.diag([1.0, -1.0])))
    assert flags.in_Y and not flags.in_Z
    assert not classify(QMatrix.from_quaternions([[I]])).in_Y
    assert classify(QMatrix.identity(2) * -1.0).in_Z


def test_dense_class_y_is_real_symmetric_in_standard_basis(rng):
    assert classify(QMatrix.from_real(smp.real_symmetric(rng, 4))).in_Y
    assert not classify(smp.hermitian(rng, 4)).in_Y
    b = smp.basis(rng, 4)
    a = smp.class_y(rng, 4, b)
    assert classify(a, b).in_Y
    assert not classify(a).in_Y


def test_isometry_examples():
    assert is_isometric(QMatrix.identity(3))
    assert is_isometric(gen_remark([1.3]))
    assert not is_isometric(QMatrix.from_real(np.diag([2.0, 1.0])))


def test_unitary_vs_isometric_partial(rng):
    u = smp.partial_isometry(rng, 4, 2)
    assert is_isometric(u) and not is_unitary(u)
    assert is_unitary(smp.unitary(rng, 4))


def test_partial_operator_validation(rng):
    with pytest.raises(InvalidOperator):
        PartialOperator(QMatrix.from_real([[1.0, 0.0], [0.0, 2.0]]), QMatrix.identity(2))
    with pytest.raises(InvalidOperator):
        PartialOperator(QMatrix.identity(2), smp.matrix(rng, 2, 1))


def test_partial_apply_and_domain(rng):
    a = smp.partial_operator(rng, 4, 2)
    c = smp.vector(rng, 2)
    phi = a.domain_frame @ c
    assert a.apply(phi).max_abs_diff(a.action @ c) < 1e-12
    assert a.in_domain(phi)
    outside = smp.vector(rng, 4)
    assert not a.in_domain(outside)
    with pytest.raises(NotInDomain):
        a.apply(outside)


def test_partial_symmetric_example():
    s = 1 / math.sqrt(2)
    frame = QMatrix.from_real([[s], [s]])
    a = PartialOperator.restrict(QMatrix.from_real(np.diag([1.0, 2.0])), frame)
    assert is_symmetric(a)
    assert not is_self_adjoint(a)
    assert classify(a).in_Y
    assert domain_invariant(a)


def test_partial_domain_not_invariant():
    frame = QMatrix.from_quaternions([[ONE], [J]]) * (1 / math.sqrt(2))
    a = PartialOperator(frame, frame)
    assert not domain_invariant(a)
    assert not classify(a).in_X
    with pytest.raises(NotInDomain):
        op_scalar_right(a, I)


def test_working_space_flag_controls_density(rng):
    a = smp.partial_class_y(rng, 4, 2)
    assert classify(a).in_Y
    strict = PartialOperator(a.domain_frame, a.action, working_space=False)
    flags = classify(strict)
    assert flags.in_X and not flags.in_Y


def test_extends_and_deviation(rng):
    big = QMatrix.from_real(smp.real_symmetric(rng, 4))
    q = QMatrix.from_real(smp.real_orthogonal(rng, 4))
    small = PartialOperator.restrict(big, QMatrix(q.data[:, :2]))
    assert extends(big, small)
    assert not extends(small, big)
    other = PartialOperator(small.domain_frame, small.action * 2.0)
    assert not extends(big, other)
    assert operator_deviation(small, small) < 1e-14
    assert operator_deviation(small, big) < 1e-12


def test_scalar_commutes_with_class_y(rng):
    b = smp.basis(rng, 3)
    a = smp.class_y(rng, 3, b)
    q = smp.quaternion(rng)
    assert op_scalar_left(q, a, b).max_abs_diff(op_scalar_right(a, q, b)) < 1e-12
    phi = smp.vector(rng, 3)
    assert (op_scalar_left(q, a, b) @ phi).max_abs_diff(left_mul(q, a @ phi, b)) < 1e-12
