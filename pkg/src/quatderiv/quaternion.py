"""
Quaternion scalars.

A :class:`Quaternion` is an immutable value ``a + b i + c j + d k`` with
double-precision components. Arithmetic follows Hamilton's rules
``i^2 = j^2 = k^2 = ijk = -1`` so multiplication does not commute::

    >>> I * J
    Quaternion(a=0.0, b=0.0, c=0.0, d=1.0)
    >>> J * I
    Quaternion(a=0.0, b=0.0, c=0.0, d=-1.0)

Besides the algebra, this module provides rotations ``mu q mu^-1``,
involutions about pure unit axes, the component/involution identities and
polar decomposition. The array-level product :func:`hamilton` is shared with
:mod:`quatderiv.qmatrix`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from numbers import Real

import numpy as np

from .errors import DomainError

__all__ = [
    "Quaternion",
    "UnitAxis",
    "ONE",
    "I",
    "J",
    "K",
    "BASIS",
    "hamilton",
    "as_quaternion",
    "mul",
    "conj",
    "modulus",
    "inverse",
    "inner",
    "rotate",
    "involution",
    "components_from_involutions",
    "reconstruct",
    "conj_from_involutions",
    "polar",
    "polar_total",
    "general_basis",
    "format_quaternion",
    "parse_quaternion",
    "quaternion_to_json",
    "quaternion_from_json",
]

AXIS_TOL = 1e-10


# left-multiplication matrix of p: (p q)_r = sum_c SIGN[r, c] p[IDX[r, c]] q[c]
_L_IDX = np.array([[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]])
_L_SIGN = np.array([[1.0, -1, -1, -1], [1, 1, -1, 1], [1, 1, 1, -1], [1, -1, 1, 1]])


def hamilton(p, q):
    """Hamilton product of quaternion arrays whose last axis has length 4.

    Broadcasts over all leading axes.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    L = p[..., _L_IDX] * _L_SIGN
    return (L @ q[..., None])[..., 0]


@dataclass(frozen=True, slots=True)
class Quaternion:
    """Immutable quaternion ``a + b i + c j + d k``."""

    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    d: float = 0.0

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, float(getattr(self, name)))

    @classmethod
    def from_array(cls, arr) -> Quaternion:
        a, b, c, d = (float(x) for x in np.asarray(arr, dtype=float).reshape(4))
        return cls(a, b, c, d)

    def to_array(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c, self.d])

    def __iter__(self):
        return iter((self.a, self.b, self.c, self.d))

    @property
    def real(self) -> float:
        return self.a

    @property
    def vector(self) -> Quaternion:
        """The vector (imaginary) part as a pure quaternion."""
        return Quaternion(0.0, self.b, self.c, self.d)

    def is_pure(self, tol: float = 0.0) -> bool:
        return abs(self.a) <= tol

    def is_real(self, tol: float = 0.0) -> bool:
        return max(abs(self.b), abs(self.c), abs(self.d)) <= tol

    # arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Quaternion):
            return Quaternion(self.a + other.a, self.b + other.b,
                              self.c + other.c, self.d + other.d)
        if isinstance(other, Real):
            return Quaternion(self.a + other, self.b, self.c, self.d)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Quaternion(-self.a, -self.b, -self.c, -self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if isinstance(other, (Quaternion, Real)):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, Real):
            return (-self) + other
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            a1, b1, c1, d1 = self.a, self.b, self.c, self.d
            a2, b2, c2, d2 = other.a, other.b, other.c, other.d
            return Quaternion(
                a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
                a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
                a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
                a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
            )
        if isinstance(other, Real):
            return Quaternion(self.a * other, self.b * other,
                              self.c * other, self.d * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Real):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        # only real divisors: p / q is ambiguous between p q^-1 and q^-1 p
        if isinstance(other, Real):
            return self * (1.0 / other)
        return NotImplemented

    def conj(self) -> Quaternion:
        return Quaternion(self.a, -self.b, -self.c, -self.d)

    def norm2(self) -> float:
        return self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d

    def __abs__(self) -> float:
        return math.sqrt(self.norm2())

    def inverse(self) -> Quaternion:
        n2 = self.norm2()
        if n2 == 0.0:
            raise DomainError("zero quaternion has no inverse")
        return self.conj() * (1.0 / n2)

    def rotate(self, mu) -> Quaternion:
        return rotate(self, mu)

    def involution(self, eta) -> Quaternion:
        return involution(self, eta)

    def isclose(self, other, tol: float = 1e-12) -> bool:
        other = as_quaternion(other)
        return abs(self - other) <= tol

    def __repr__(self):
        return f"Quaternion(a={self.a!r}, b={self.b!r}, c={self.c!r}, d={self.d!r})"

    def __str__(self):
        return format_quaternion(self)


ONE = Quaternion(1.0, 0.0, 0.0, 0.0)
I = Quaternion(0.0, 1.0, 0.0, 0.0)
J = Quaternion(0.0, 0.0, 1.0, 0.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)
BASIS = (ONE, I, J, K)


def as_quaternion(x) -> Quaternion:
    """Coerce a real number, 4-sequence or Quaternion into a Quaternion."""
    if isinstance(x, Quaternion):
        return x
    if isinstance(x, Real):
        return Quaternion(float(x))
    return Quaternion.from_array(x)


@dataclass(frozen=True)
class UnitAxis:
    """A unit quaternion used as a rotation or involution axis.

    Construction from an arbitrary nonzero quaternion normalizes it and keeps
    the original modulus, so scale invariance of ``mu q mu^-1`` can be
    checked against the unnormalized input.
    """

    value: Quaternion
    original_modulus: float = 1.0

    @classmethod
    def from_quaternion(cls, q) -> UnitAxis:
        q = as_quaternion(q)
        m = abs(q)
        if m == 0.0:
            raise DomainError("axis must be nonzero")
        return cls(q * (1.0 / m), m)

    @property
    def is_pure(self) -> bool:
        return abs(self.value.a) <= AXIS_TOL


def mul(p, q) -> Quaternion:
    """Hamilton product ``p q``."""
    return as_quaternion(p) * as_quaternion(q)


def conj(q) -> Quaternion:
    return as_quaternion(q).conj()


def modulus(q) -> float:
    return abs(as_quaternion(q))


def inverse(q) -> Quaternion:
    return as_quaternion(q).inverse()


def inner(p, q) -> float:
    """Euclidean inner product ``Re(conj(p) q)`` of the component 4-vectors."""
    return (conj(p) * as_quaternion(q)).a


def rotate(q, mu) -> Quaternion:
    """Rotation ``mu q mu^-1`` for any nonzero ``mu``."""
    mu = as_quaternion(mu.value if isinstance(mu, UnitAxis) else mu)
    if mu.norm2() == 0.0:
        raise DomainError("rotation axis mu must be nonzero")
    return mu * as_quaternion(q) * mu.inverse()


def involution(q, eta) -> Quaternion:
    """Involution ``-eta q eta`` about a pure unit quaternion ``eta``."""
    eta = as_quaternion(eta.value if isinstance(eta, UnitAxis) else eta)
    if abs(eta.a) > AXIS_TOL or abs(abs(eta) - 1.0) > AXIS_TOL:
        raise DomainError(
            f"involution axis must be pure and unit (got {format_quaternion(eta)})"
        )
    return -(eta * as_quaternion(q) * eta)


def components_from_involutions(q):
    """Recover ``(a, b, c, d)`` from ``q`` and its three involutions."""
    q = as_quaternion(q)
    qi, qj, qk = involution(q, I), involution(q, J), involution(q, K)
    a = (q + qi + qj + qk) * 0.25
    # 1/(4i) x = -i x / 4 for the left factor 1/i = -i
    b = (-I) * (q + qi - qj - qk) * 0.25
    c = (-J) * (q - qi + qj - qk) * 0.25
    d = (-K) * (q - qi - qj + qk) * 0.25
    return a.a, b.a, c.a, d.a


def reconstruct(a, b, c, d) -> Quaternion:
    return Quaternion(a, b, c, d)


def conj_from_involutions(q) -> Quaternion:
    """Conjugate expressed through involutions: ``(-q + q^i + q^j + q^k) / 2``."""
    q = as_quaternion(q)
    return (-q + involution(q, I) + involution(q, J) + involution(q, K)) * 0.5


def polar(q):
    """Polar form ``q = |q| (cos t + axis sin t)``.

    Returns ``(modulus, axis, angle)`` with ``axis`` a pure unit quaternion
    and ``angle`` in ``[0, pi]``. Raises :class:`DomainError` for real ``q``
    where the axis is undefined; see :func:`polar_total`.
    """
    q = as_quaternion(q)
    v = abs(q.vector)
    if v == 0.0:
        raise DomainError("axis undefined for real q")
    m = abs(q)
    return m, q.vector * (1.0 / v), math.atan2(v, q.a)


def polar_total(q):
    """Like :func:`polar` but total: real ``q`` gets axis ``i`` by convention.

    The angle is 0 for positive reals and pi for negative reals; zero maps to
    ``(0, i, 0)``.
    """
    q = as_quaternion(q)
    if abs(q.vector) == 0.0:
        return abs(q), I, (math.pi if q.a < 0 else 0.0)
    return polar(q)


def general_basis(mu=ONE):
    """Rotated orthogonal basis ``(1, i^mu, j^mu, k^mu)``."""
    return (ONE, rotate(I, mu), rotate(J, mu), rotate(K, mu))


# serialization ---------------------------------------------------------------


def format_quaternion(q) -> str:
    """Space-separated ``"a b c d"`` using shortest round-trip decimals."""
    return " ".join(repr(x) for x in as_quaternion(q))


def parse_quaternion(text: str) -> Quaternion:
    parts = text.split()
    if len(parts) != 4:
        raise ValueError(f"expected 4 components, got {len(parts)}: {text!r}")
    return Quaternion(*(float(p) for p in parts))


def quaternion_to_json(q) -> str:
    return json.dumps(list(as_quaternion(q)))


def quaternion_from_json(text: str) -> Quaternion:
    return Quaternion.from_array(json.loads(text))
