import math

import numpy as np
import pytest
from hypothesis import given

from quatderiv import DomainError, I, J, K, ONE, Quaternion, UnitAxis
from quatderiv.quaternion import (
    components_from_involutions,
    conj_from_involutions,
    format_quaternion,
    general_basis,
    hamilton,
    inner,
    involution,
    parse_quaternion,
    polar,
    polar_total,
    quaternion_from_json,
    quaternion_to_json,
    rotate,
)

from conftest import nonzero_quats, pure_units, quats


def close(p, q, tol=1e-12):
    return abs(p - q) <= tol * max(1.0, abs(p), abs(q))


def test_unit_products():
    assert I * J == K and J * K == I and K * I == J
    assert J * I == -K
    for u in (I, J, K):
        assert u * u == -ONE
    assert I * J * K == -ONE


def test_hamilton_broadcasts():
    rng = np.random.default_rng(0)
    p = rng.normal(size=(3, 4))
    q = rng.normal(size=(5, 3, 4))
    out = hamilton(p, q)
    assert out.shape == (5, 3, 4)
    ref = Quaternion.from_array(p[1]) * Quaternion.from_array(q[2, 1])
    assert np.allclose(out[2, 1], ref.to_array(), atol=1e-14)


@given(quats, quats, quats)
def test_associative(p, q, r):
    assert close((p * q) * r, p * (q * r), 1e-11)


@given(quats, quats)
def test_norm_multiplicative_and_conj_reverses(p, q):
    assert math.isclose(abs(p * q), abs(p) * abs(q), rel_tol=1e-12, abs_tol=1e-12)
    assert close((p * q).conj(), q.conj() * p.conj())


@given(nonzero_quats)
def test_inverse(q):
    assert close(q * q.inverse(), ONE, 1e-12)
    assert close(q.inverse() * q, ONE, 1e-12)


def test_zero_has_no_inverse():
    with pytest.raises(DomainError):
        Quaternion(0.0).inverse()


@given(quats, nonzero_quats)
def test_rotation_preserves_norm_and_real_part(q, mu):
    r = rotate(q, mu)
    assert math.isclose(abs(r), abs(q), rel_tol=1e-11, abs_tol=1e-12)
    assert math.isclose(r.a, q.a, abs_tol=1e-11)


@given(quats, nonzero_quats)
def test_rotation_is_scale_invariant(q, mu):
    assert close(rotate(q, mu), rotate(q, mu * 3.7), 1e-11)


@given(quats, pure_units)
def test_involution_is_rotation_about_pure_axis(q, eta):
    assert close(involution(q, eta), rotate(q, eta), 1e-11)
    assert close(involution(involution(q, eta), eta), q, 1e-11)


def test_involution_rejects_non_pure_axis():
    with pytest.raises(DomainError):
        involution(I, Quaternion(1, 1, 0, 0))


@given(quats)
def test_components_and_conjugate_from_involutions(q):
    a, b, c, d = components_from_involutions(q)
    assert np.allclose([a, b, c, d], q.to_array(), atol=1e-12)
    assert close(conj_from_involutions(q), q.conj(), 1e-12)


@given(nonzero_quats)
def test_general_basis_is_orthonormal(mu):
    basis = general_basis(mu)
    gram = np.array([[inner(p, q) for q in basis] for p in basis])
    assert np.allclose(gram, np.eye(4), atol=1e-12)
    _, i2, j2, k2 = basis
    assert close(i2 * j2, k2, 1e-11)


def test_polar_roundtrip_and_real_inputs():
    q = Quaternion(0.5, -1.0, 2.0, 0.25)
    m, axis, t = polar(q)
    assert close(m * (ONE * math.cos(t) + axis * math.sin(t)), q)
    with pytest.raises(DomainError):
        polar(Quaternion(-2.0))
    assert polar_total(Quaternion(-2.0)) == (2.0, I, math.pi)
    assert polar_total(Quaternion(0.0)) == (0.0, I, 0.0)


def test_unit_axis_keeps_modulus():
    ax = UnitAxis.from_quaternion(Quaternion(0, 3, 4, 0))
    assert ax.original_modulus == 5.0 and ax.is_pure
    with pytest.raises(DomainError):
        UnitAxis.from_quaternion(Quaternion(0.0))


@given(quats)
def test_text_and_json_roundtrip_exact(q):
    assert parse_quaternion(format_quaternion(q)) == q
    assert quaternion_from_json(quaternion_to_json(q)) == q
