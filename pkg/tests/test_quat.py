import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qcayley.errors import ZeroQuaternion
from qcayley.quat import I, J, K, ONE, ZERO, Quaternion, hamilton, in_sphere_S, q_inv, q_mul, qabs2, qconj

finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False)
quats = st.builds(Quaternion, finite, finite, finite, finite)


def test_unit_table():
    assert q_mul(I, J) == K
    assert q_mul(J, K) == I
    assert q_mul(K, I) == J
    assert q_mul(J, I) == -K
    assert q_mul(K, J) == -I
    assert q_mul(I, K) == -J
    for u in (I, J, K):
        assert q_mul(u, u) == -ONE
    assert q_mul(q_mul(I, J), K) == -ONE


def test_identity_element():
    q = Quaternion(0.3, -1.2, 2.5, 0.7)
    assert q * ONE == q
    assert ONE * q == q


def test_square_of_i_plus_j_plus_k():
    s = I + J + K
    assert s * s == Quaternion(-3.0)


def test_inverse_examples():
    assert q_inv(ONE) == ONE
    assert q_inv(I) == -I
    with pytest.raises(ZeroQuaternion):
        q_inv(ZERO)
    with pytest.raises(ZeroDivisionError):
        q_inv(Quaternion(1e-14, 0, 0, 0))


def test_sphere_membership():
    assert in_sphere_S(I, 1e-12)
    assert in_sphere_S((I + J + K) / math.sqrt(3.0), 1e-12)
    assert not in_sphere_S(ONE, 1e-12)
    assert not in_sphere_S(2 * I, 1e-12)


def test_parse_and_json():
    q = Quaternion.parse("0, 1,1 ,1")
    assert q == Quaternion(0, 1, 1, 1)
    assert Quaternion.from_array(q.to_json()) == q
    with pytest.raises(ValueError):
        Quaternion.parse("1,2,3")


def test_conj_is_involution_and_reverses_products():
    a, b = Quaternion(1, 2, 3, 4), Quaternion(-2, 0.5, 1, -1)
    assert a.conj().conj() == a
    assert (a * b).conj() == b.conj() * a.conj()


def test_vector_kernels_match_scalar(rng):
    a = rng.normal(size=(50, 4))
    b = rng.normal(size=(50, 4))
    prod = hamilton(a, b)
    for k in range(50):
        expect = Quaternion.from_array(a[k]) * Quaternion.from_array(b[k])
        assert np.allclose(prod[k], expect.to_array(), atol=1e-14)
    assert np.allclose(qabs2(a), (a * a).sum(axis=1))
    assert np.allclose(hamilton(a, qconj(a))[:, 0], qabs2(a))


@settings(max_examples=300, deadline=None)
@given(quats, quats, quats)
def test_associative_and_norm_multiplicative(a, b, c):
    scale = max(1.0, abs(a) * abs(b) * abs(c))
    assert abs((a * b) * c - a * (b * c)) <= 1e-12 * scale
    assert math.isclose(abs(a * b), abs(a) * abs(b), rel_tol=1e-12, abs_tol=1e-300)


@settings(max_examples=200, deadline=None)
@given(quats)
def test_q_times_conj_is_norm_squared(q):
    p = q * q.conj()
    assert abs(p - Quaternion(q.norm2())) <= 1e-12 * max(1.0, q.norm2())


@settings(max_examples=200, deadline=None)
@given(quats)
def test_inverse_property(q):
    if abs(q) < 1e-6:
        return
    assert abs(q * q_inv(q) - ONE) <= 1e-12
