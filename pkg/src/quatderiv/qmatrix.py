"""
Dense quaternion matrices.

:class:`QMatrix` stores an ``N x S`` quaternion matrix as a read-only
``(N, S, 4)`` float array (row-major, last axis the components ``a, b, c,
d``). ``vec`` stacks columns, matching the Jacobian convention used
throughout the package.

Inverse and Moore-Penrose inverse go through the complex adjoint
representation ``chi``: writing ``Q = Z1 + Z2 j`` with ``Z1 = Qa + Qb i`` and
``Z2 = Qc + Qd i``,

    chi(Q) = [[ Z1,        Z2      ],
              [-conj(Z2),  conj(Z1)]]

which is an injective ``*``-homomorphism (``chi(PQ) = chi(P) chi(Q)``,
``chi(Q^H) = chi(Q)^H``).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from numbers import Real

import numpy as np

from .errors import ConvergenceError, DomainError, ShapeError, SingularError, StructureError
from .quaternion import Quaternion, as_quaternion, hamilton

__all__ = [
    "QMatrix",
    "CommutationMatrix",
    "matmul",
    "add",
    "scale",
    "conj",
    "transpose",
    "hermitian",
    "trace",
    "frob_norm",
    "rotate",
    "involution",
    "real_part",
    "vec",
    "unvec",
    "kron",
    "hadamard",
    "commutation_matrix",
    "inverse",
    "pinv",
    "complex_adjoint",
    "from_complex_adjoint",
    "condition_number",
    "matrix_power",
    "eye",
    "zeros",
    "SINGULAR_COND",
    "unit_perturbation",
]

SINGULAR_COND = 1e12

# _MULT[x, y] is the component vector of e_x e_y for basis e = (1, i, j, k)
_MULT = hamilton(np.eye(4)[:, None, :], np.eye(4)[None, :, :])


class QMatrix:
    """Immutable dense quaternion matrix.

    Parameters
    ----------
    data : array_like, shape (rows, cols, 4)
        Components of each entry. A 2-D real array is accepted and treated
        as a real matrix.
    """

    __array_priority__ = 1000

    def __init__(self, data):
        arr = np.array(data, dtype=float)
        if arr.ndim == 2:
            arr = np.concatenate([arr[..., None], np.zeros(arr.shape + (3,))], axis=-1)
        if arr.ndim != 3 or arr.shape[-1] != 4:
            raise ShapeError(f"QMatrix data must have shape (rows, cols, 4), got {arr.shape}")
        arr.setflags(write=False)
        self._data = arr

    # construction ---------------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> QMatrix:
        return cls(np.zeros((rows, cols, 4)))

    @classmethod
    def eye(cls, n: int) -> QMatrix:
        return cls(np.eye(n))

    @classmethod
    def from_parts(cls, a, b=None, c=None, d=None) -> QMatrix:
        a = np.asarray(a, dtype=float)
        parts = [a] + [np.zeros_like(a) if x is None else np.asarray(x, dtype=float)
                       for x in (b, c, d)]
        return cls(np.stack(parts, axis=-1))

    @classmethod
    def from_quaternions(cls, rows) -> QMatrix:
        """Build from a nested list of quaternions / reals / 4-sequences."""
        return cls(np.array([[as_quaternion(x).to_array() for x in row] for row in rows]))

    @classmethod
    def scalar(cls, q) -> QMatrix:
        return cls(as_quaternion(q).to_array().reshape(1, 1, 4))

    @classmethod
    def column(cls, entries) -> QMatrix:
        return cls.from_quaternions([[x] for x in entries])

    @classmethod
    def random(cls, rng: np.random.Generator, rows: int, cols: int, low=-1.0, high=1.0) -> QMatrix:
        """Matrix with i.i.d. uniform components."""
        return cls(rng.uniform(low, high, size=(rows, cols, 4)))

    # basic properties -------------------------------------------------------

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def shape(self) -> tuple[int, int]:
        return self._data.shape[:2]

    @property
    def rows(self) -> int:
        return self._data.shape[0]

    @property
    def cols(self) -> int:
        return self._data.shape[1]

    def __getitem__(self, idx) -> Quaternion:
        i, j = idx
        return Quaternion.from_array(self._data[i, j])

    def item(self) -> Quaternion:
        if self.shape != (1, 1):
            raise ShapeError(f"item() needs a 1x1 matrix, got {self.shape}")
        return Quaternion.from_array(self._data[0, 0])

    def tolist(self):
        return [[list(map(float, e)) for e in row] for row in self._data]

    def components(self):
        """The four real component matrices ``(Qa, Qb, Qc, Qd)``."""
        return tuple(self._data[..., x] for x in range(4))

    def __repr__(self):
        return f"QMatrix(shape={self.shape}, data={self.tolist()!r})"

    def __eq__(self, other):
        return isinstance(other, QMatrix) and np.array_equal(self._data, other._data)

    __hash__ = None

    def allclose(self, other, atol=1e-12, rtol=0.0) -> bool:
        other = _as_qmatrix(other)
        return self.shape == other.shape and np.allclose(self._data, other._data, atol=atol, rtol=rtol)

    # arithmetic -------------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, QMatrix):
            _same_shape(self, other, "add")
            return QMatrix(self._data + other._data)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, QMatrix):
            _same_shape(self, other, "subtract")
            return QMatrix(self._data - other._data)
        return NotImplemented

    def __neg__(self):
        return QMatrix(-self._data)

    def __mul__(self, other):
        # Q * x: entrywise right multiplication by a scalar
        if isinstance(other, Real):
            return QMatrix(self._data * float(other))
        if isinstance(other, Quaternion):
            return QMatrix(hamilton(self._data, other.to_array()))
        return NotImplemented

    def __rmul__(self, other):
        # x * Q: entrywise left multiplication by a scalar
        if isinstance(other, Real):
            return QMatrix(self._data * float(other))
        if isinstance(other, Quaternion):
            return QMatrix(hamilton(other.to_array(), self._data))
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, Real):
            return QMatrix(self._data / float(other))
        return NotImplemented

    def __matmul__(self, other):
        if isinstance(other, QMatrix):
            return matmul(self, other)
        return NotImplemented

    # structural operators ---------------------------------------------------

    def conj(self) -> QMatrix:
        return QMatrix(self._data * np.array([1.0, -1.0, -1.0, -1.0]))

    @property
    def T(self) -> QMatrix:
        return QMatrix(self._data.transpose(1, 0, 2))

    @property
    def H(self) -> QMatrix:
        return self.T.conj()

    def real(self) -> QMatrix:
        out = np.zeros_like(self._data)
        out[..., 0] = self._data[..., 0]
        return QMatrix(out)

    def rotate(self, mu) -> QMatrix:
        return rotate(self, mu)

    def involution(self, eta) -> QMatrix:
        return involution(self, eta)

    def trace(self) -> Quaternion:
        return trace(self)

    def norm(self) -> float:
        return frob_norm(self)

    def vec(self) -> QMatrix:
        return vec(self)

    def inverse(self) -> QMatrix:
        return inverse(self)

    def pinv(self) -> QMatrix:
        return pinv(self)

    def __pow__(self, n: int) -> QMatrix:
        return matrix_power(self, n)

    @cached_property
    def adjoint(self) -> np.ndarray:
        """Cached complex adjoint ``chi(Q)``."""
        return complex_adjoint(self)


def _as_qmatrix(x) -> QMatrix:
    if isinstance(x, QMatrix):
        return x
    if isinstance(x, (Quaternion, Real)):
        return QMatrix.scalar(x)
    return QMatrix(x)


def _same_shape(p: QMatrix, q: QMatrix, what: str):
    if p.shape != q.shape:
        raise ShapeError(f"cannot {what} shapes {p.shape} and {q.shape}")


def zeros(rows: int, cols: int) -> QMatrix:
    return QMatrix.zeros(rows, cols)


def eye(n: int) -> QMatrix:
    return QMatrix.eye(n)


def matmul(p: QMatrix, q: QMatrix) -> QMatrix:
    """Matrix product with noncommutative entries."""
    if p.cols != q.rows:
        raise ShapeError(f"cannot multiply shapes {p.shape} and {q.shape}")
    # 16 real matmuls P_x Q_y, combined with the multiplication table
    pc = p.data.transpose(2, 0, 1)
    qc = q.data.transpose(2, 0, 1)
    prods = pc[:, None] @ qc[None, :]
    return QMatrix(np.einsum("xyz,xyns->nsz", _MULT, prods))


def add(p: QMatrix, q: QMatrix) -> QMatrix:
    return p + q


def scale(alpha, q: QMatrix, beta=1.0) -> QMatrix:
    """Two-sided scalar multiple ``alpha Q beta`` (entrywise)."""
    return as_quaternion(alpha) * q * as_quaternion(beta)


def conj(q: QMatrix) -> QMatrix:
    return q.conj()


def transpose(q: QMatrix) -> QMatrix:
    return q.T


def hermitian(q: QMatrix) -> QMatrix:
    return q.H


def real_part(q: QMatrix) -> QMatrix:
    return q.real()


def trace(q: QMatrix) -> Quaternion:
    if q.rows != q.cols:
        raise ShapeError(f"trace needs a square matrix, got {q.shape}")
    total = np.zeros(4)
    for n in range(q.rows):
        total = total + q.data[n, n]
    return Quaternion.from_array(total)


def frob_norm(q: QMatrix) -> float:
    return float(np.sqrt(np.sum(q.data.ravel() ** 2)))


def rotate(q: QMatrix, mu) -> QMatrix:
    """Entrywise rotation ``mu Q mu^-1``."""
    mu = as_quaternion(mu)
    if mu.norm2() == 0.0:
        raise DomainError("rotation axis mu must be nonzero")
    return mu * q * mu.inverse()


def involution(q: QMatrix, eta) -> QMatrix:
    """Entrywise involution ``-eta Q eta`` about a pure unit ``eta``."""
    from .quaternion import involution as _scalar_inv

    eta = as_quaternion(eta)
    _scalar_inv(Quaternion(), eta)  # validates the axis
    return -(eta * q * eta)


def vec(q: QMatrix) -> QMatrix:
    """Stack the columns of ``Q`` into an ``NS x 1`` column."""
    return QMatrix(q.data.transpose(1, 0, 2).reshape(-1, 1, 4))


def unvec(v: QMatrix, rows: int, cols: int) -> QMatrix:
    """Inverse of :func:`vec`."""
    if v.rows * v.cols != rows * cols:
        raise ShapeError(f"cannot reshape {v.shape} into ({rows}, {cols})")
    flat = v.data.reshape(-1, 4)
    return QMatrix(flat.reshape(cols, rows, 4).transpose(1, 0, 2))


def kron(p: QMatrix, q: QMatrix) -> QMatrix:
    """Kronecker product; block ``(i, j)`` is ``p_ij Q`` (scalar on the left)."""
    m, n = p.shape
    r, s = q.shape
    blocks = hamilton(p.data[:, None, :, None, :], q.data[None, :, None, :, :])
    return QMatrix(blocks.reshape(m * r, n * s, 4))


def hadamard(p: QMatrix, q: QMatrix) -> QMatrix:
    _same_shape(p, q, "take the Hadamard product of")
    return QMatrix(hamilton(p.data, q.data))


def matrix_power(q: QMatrix, n: int) -> QMatrix:
    if q.rows != q.cols:
        raise ShapeError(f"matrix power needs a square matrix, got {q.shape}")
    if n < 0:
        return matrix_power(inverse(q), -n)
    out = QMatrix.eye(q.rows)
    for _ in range(n):
        out = out @ q
    return out


@dataclass(frozen=True)
class CommutationMatrix:
    """The permutation ``K_{N,S}`` with ``K vec(Q) = vec(Q^T)`` for ``Q`` N x S."""

    n: int
    s: int

    @cached_property
    def index_map(self) -> np.ndarray:
        """``index_map[r]`` is the vec(Q) index landing at position r of vec(Q^T)."""
        n, s = self.n, self.s
        out = np.empty(n * s, dtype=int)
        for i in range(n):
            for j in range(s):
                out[j + s * i] = i + n * j
        return out

    def apply(self, v: QMatrix) -> QMatrix:
        if v.shape[0] != self.n * self.s:
            raise ShapeError(f"K_{{{self.n},{self.s}}} cannot act on {v.shape}")
        return QMatrix(v.data[self.index_map])

    def matrix(self) -> QMatrix:
        m = np.zeros((self.n * self.s, self.n * self.s))
        m[np.arange(self.n * self.s), self.index_map] = 1.0
        return QMatrix(m)

    def transpose(self) -> CommutationMatrix:
        return CommutationMatrix(self.s, self.n)


def commutation_matrix(n: int, s: int) -> QMatrix:
    """Materialized ``K_{N,S}`` as a real 0/1 QMatrix."""
    return CommutationMatrix(n, s).matrix()


# complex adjoint representation ---------------------------------------------


def complex_adjoint(q: QMatrix) -> np.ndarray:
    """``chi(Q)``: the ``2N x 2S`` complex matrix representing ``Q``."""
    a, b, c, d = q.components()
    z1 = a + 1j * b
    z2 = c + 1j * d
    return np.block([[z1, z2], [-z2.conj(), z1.conj()]])


def from_complex_adjoint(m, tol: float | None = 1e-10) -> QMatrix:
    """Inverse of :func:`complex_adjoint`.

    The two copies of each block are averaged. With ``tol`` set, a deviation
    from the ``chi`` block symmetry larger than ``tol * max(1, |m|)`` raises
    :class:`StructureError`.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape[0] % 2 or m.shape[1] % 2:
        raise StructureError(f"adjoint must have even dimensions, got {m.shape}")
    n, s = m.shape[0] // 2, m.shape[1] // 2
    z1, z2 = m[:n, :s], m[:n, s:]
    w2, w1 = m[n:, :s], m[n:, s:]
    if tol is not None:
        dev = max(np.abs(z1 - w1.conj()).max(initial=0.0), np.abs(z2 + w2.conj()).max(initial=0.0))
        if dev > tol * max(1.0, np.abs(m).max(initial=0.0)):
            raise StructureError(f"matrix lacks quaternion block symmetry (deviation {dev:.3g})")
    z1 = 0.5 * (z1 + w1.conj())
    z2 = 0.5 * (z2 - w2.conj())
    return QMatrix.from_parts(z1.real, z1.imag, z2.real, z2.imag)


def condition_number(q: QMatrix) -> float:
    """2-norm condition number of ``chi(Q)`` (equal to that of ``Q``)."""
    if q.rows != q.cols:
        raise ShapeError(f"condition number needs a square matrix, got {q.shape}")
    s = np.linalg.svd(q.adjoint, compute_uv=False)
    return float(np.inf) if s[-1] == 0.0 else float(s[0] / s[-1])


def inverse(q: QMatrix) -> QMatrix:
    """Matrix inverse; raises :class:`SingularError` when cond > 1e12."""
    if q.rows != q.cols:
        raise ShapeError(f"inverse needs a square matrix, got {q.shape}")
    cond = condition_number(q)
    if not cond < SINGULAR_COND:
        raise SingularError(f"matrix is singular to working precision (cond={cond:.3g})", cond)
    return from_complex_adjoint(np.linalg.inv(q.adjoint), tol=None)


def pinv(q: QMatrix) -> QMatrix:
    """Moore-Penrose inverse via the SVD of ``chi(Q)``."""
    if q.rows == 0 or q.cols == 0:
        return QMatrix.zeros(q.cols, q.rows)
    try:
        u, s, vh = np.linalg.svd(q.adjoint, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"complex SVD failed: {exc}") from exc
    cutoff = max(q.adjoint.shape) * np.finfo(float).eps * (s[0] if s.size else 0.0)
    s_inv = np.where(s > cutoff, 1.0 / np.where(s > cutoff, s, 1.0), 0.0)
    return from_complex_adjoint((vh.conj().T * s_inv) @ u.conj().T, tol=None)


def unit_perturbation(rows: int, cols: int, index: int, plane: int) -> QMatrix:
    """Matrix with a single basis unit ``BASIS[plane]`` at vec position ``index``."""
    out = np.zeros((rows, cols, 4))
    out[index % rows, index // rows, plane] = 1.0
    return QMatrix(out)

