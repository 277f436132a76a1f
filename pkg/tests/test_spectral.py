import math

import numpy as np
import pytest

from qcayley import sampling as smp
from qcayley.cayley import LambdaParam, gen_remark
from qcayley.embed import SpectralSphere, rank_h
from qcayley.errors import NotInClass, NotIsometric
from qcayley.hspace import QMatrix, QVector
from qcayley.qop import PartialOperator
from qcayley.quat import I, Quaternion
from qcayley.spectral import (
    defect_number,
    deficiency_index,
    in_point_s_spectrum,
    iso_indices,
    pseudo_resolvent,
    regular_point,
    s_spectrum,
)

LAM = Quaternion(0, 1, 1, 1)


def shift_example() -> PartialOperator:
    return PartialOperator(QVector.unit(2, 0).as_column(), QVector.unit(2, 1).as_column())


def test_pseudo_resolvent_examples(rng):
    q = smp.quaternion(rng)
    expect = QMatrix.identity(3) * (1 - 2 * q.w + q.norm2())
    assert pseudo_resolvent(QMatrix.identity(3), q).max_abs_diff(expect) < 1e-14
    a = smp.matrix(rng, 3)
    assert pseudo_resolvent(a, Quaternion()).max_abs_diff(a @ a) < 1e-14


def test_resolvent_factorization(rng):
    b = smp.basis(rng, 4)
    a = smp.class_y(rng, 4, b)
    q = smp.quaternion(rng)
    aq, aqc = a - b.left_matrix(q), a - b.left_matrix(q.conj())
    assert pseudo_resolvent(a, q).max_abs_diff(0.5 * (aq @ aqc + aqc @ aq)) < 1e-10


def test_s_spectrum_examples(rng):
    spheres = s_spectrum(gen_remark([2.2]))
    assert [(round(s.re, 9), s.im_norm) for s in spheres] == [(-1.0, 0.0), (1.0, 0.0)]
    assert s_spectrum(QMatrix.from_quaternions([[I]])) == [SpectralSphere(0.0, 1.0)]
    for s in s_spectrum(QMatrix.from_real(smp.real_symmetric(rng, 6))):
        assert s.im_norm == 0.0


def test_s_spectrum_against_pseudo_resolvent(rng):
    # on each sphere Q_q(A) is singular; off the spheres it is invertible
    a = smp.matrix(rng, 3)
    for s in s_spectrum(a):
        u = smp.unit_imaginary(rng)
        q = Quaternion(s.re) + u * s.im_norm
        assert rank_h(pseudo_resolvent(a, q), 1e-7) < 3
        assert in_point_s_spectrum(a, q, 1e-7)
    for _ in range(10):
        q = smp.quaternion(rng)
        assert not in_point_s_spectrum(a, q)


def test_i_spectrum_is_unit_sphere(rng):
    a = QMatrix.from_quaternions([[I]])
    for _ in range(5):
        assert in_point_s_spectrum(a, smp.unit_imaginary(rng))
    assert not in_point_s_spectrum(a, Quaternion(0.1, 1, 0, 0))


def test_regular_point_examples(rng):
    c = regular_point(QMatrix.identity(2), Quaternion())
    assert c.is_regular and c.c_q == pytest.approx(1.0)
    b = smp.basis(rng, 4)
    a = smp.class_y(rng, 4, b)
    assert regular_point(a, LAM, b).c_q >= math.sqrt(3) - 1e-9
    c = regular_point(QMatrix.from_real(np.diag([2.0, 3.0])), Quaternion(2.0))
    assert not c.is_regular and c.c_q == 0.0


def test_defect_examples(rng):
    b = smp.basis(rng, 3)
    assert defect_number(smp.class_y(rng, 3, b), LAM, b).d_q == 0
    assert defect_number(shift_example(), Quaternion()).d_q == 1
    assert defect_number(QMatrix.from_real(np.diag([2.0, 3.0])), Quaternion(2.0)).d_q == 1


def test_defect_of_partial_class_y(rng):
    for d in (1, 2, 3):
        a = smp.partial_class_y(rng, 5, d)
        rep = defect_number(a, LAM)
        assert rep.regular and rep.d_q == 5 - d


def test_deficiency_index(rng):
    a = QMatrix.from_real(smp.real_symmetric(rng, 4))
    assert deficiency_index(a, LambdaParam(LAM)) == 0
    assert deficiency_index(smp.partial_class_y(rng, 4, 1), LAM) == 3
    with pytest.raises(NotInClass):
        deficiency_index(QMatrix.from_quaternions([[I]]), LAM)


def test_iso_indices_examples(rng):
    assert iso_indices(shift_example()) == (1, 1)
    assert iso_indices(smp.unitary(rng, 4)) == (0, 0)
    assert iso_indices(smp.partial_isometry(rng, 5, 2)) == (3, 3)
    with pytest.raises(NotIsometric):
        iso_indices(QMatrix.from_real(np.diag([2.0, 1.0])))


def test_iso_indices_match_defects_inside_and_outside(rng):
    u = smp.partial_isometry(rng, 4, 3)
    d_i, d_e = iso_indices(u)
    assert defect_number(u, Quaternion(0.3, 0.1, 0, 0)).d_q == d_i
    assert defect_number(u, Quaternion(0, 2.0, 1.0, 0)).d_q == d_e


def test_nonreal_points_are_regular_for_class_y(rng):
    b = smp.basis(rng, 3)
    for a in (smp.class_y(rng, 3, b), smp.partial_class_y(rng, 3, 2, b)):
        for _ in range(10):
            q = smp.nonreal_quaternion(rng)
            c = regular_point(a, q, b)
            assert c.is_regular and c.c_q >= q.imag_norm() - 1e-9


def test_defect_constant_near_regular_point(rng):
    a = smp.partial_operator(rng, 4, 2)
    q0 = smp.nonreal_quaternion(rng)
    rep0 = defect_number(a, q0)
    for _ in range(50):
        step = smp.quaternion(rng)
        q = q0 + step * (0.9 * rep0.c_q / abs(step))
        assert defect_number(a, q).d_q == rep0.d_q
