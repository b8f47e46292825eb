"""
Numeric GHR derivatives.

This module is the independent referee for every closed-form derivative in
the package. It uses only function evaluations and quaternion arithmetic:

1. Real partials ``dF/dQa, dF/dQb, dF/dQc, dF/dQd`` are taken by central
   differences on each real component plane of each entry (optionally
   Richardson-extrapolated to O(h^4)).
2. Left GHR derivatives combine them against the rotated basis
   ``(1, i^k, j^k, k^k)`` multiplying from the right::

       dF/dQ^k  = (Fa - Fb i^k - Fc j^k - Fd k^k) / 4
       dF/dQ^k* = (Fa + Fb i^k + Fc j^k + Fd k^k) / 4

   Right derivatives put the basis on the left.

Jacobians follow the ``d vec F / d vec Q^k`` layout: an ``MP x NS`` matrix for
``F: H^{N x S} -> H^{M x P}``.

A :class:`GhrJacobian` holds the four blocks for the rotation axes
``mu, mu i, mu j, mu k``. With ``mu = 1`` these are the derivatives with
respect to ``Q, Q^i, Q^j, Q^k`` (or their conjugates) and satisfy
``d vec F = sum_n blocks[n] d vec(Q^{mu nu_n})``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, EvalError
from .qmatrix import QMatrix, frob_norm, rotate, unvec, vec
from .quaternion import BASIS, ONE, Quaternion, as_quaternion, general_basis, hamilton

__all__ = [
    "DiffConfig",
    "GhrJacobian",
    "partials_real",
    "combine_partials",
    "ghr_left",
    "ghr_left_conj",
    "ghr_right",
    "jacobian",
    "scalar_derivative",
    "gradient",
    "relative_error",
    "differential_check_scalar",
    "differential_check_matrix",
    "residual_slope",
    "rotation_conjugate_rule_check",
]

MatrixFn = Callable[[QMatrix], QMatrix]


@dataclass(frozen=True)
class DiffConfig:
    """Finite-difference policy and tolerances for the oracle.

    ``step`` is the base step ``h``; each probe uses ``h * max(1, |entry|)``.
    ``richardson`` combines steps ``h`` and ``h/2`` to cancel the O(h^2) term.
    """

    step: float = 1e-5
    scheme: str = "richardson"
    rel_tol: float = 1e-6
    abs_tol: float = 1e-9

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError(f"step must be positive, got {self.step}")
        if self.scheme not in ("central", "richardson"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")


DEFAULT_CONFIG = DiffConfig()


@dataclass(frozen=True)
class GhrJacobian:
    """Four GHR Jacobian blocks of a matrix function.

    ``blocks[n]`` is the derivative with respect to ``Q^{mu nu_n}`` (or its
    conjugate when ``wrt == "conjugate"``) for ``nu = (1, i, j, k)``.
    """

    wrt: str
    mu: Quaternion
    side: str
    blocks: tuple[QMatrix, QMatrix, QMatrix, QMatrix]
    input_shape: tuple[int, int] = field(default=(0, 0))
    output_shape: tuple[int, int] = field(default=(0, 0))

    @property
    def primary(self) -> QMatrix:
        """``D_{Q^mu} F`` (or ``D_{Q^mu*} F``)."""
        return self.blocks[0]

    def __getitem__(self, n: int) -> QMatrix:
        return self.blocks[n]


def _probe(F: MatrixFn, Q: QMatrix) -> QMatrix:
    try:
        out = F(Q)
    except Exception as exc:  # black box: any failure is an evaluation error
        raise EvalError(f"function failed at probe point: {exc}") from exc
    if isinstance(out, Quaternion):
        out = QMatrix.scalar(out)
    return out


def partials_real(F: MatrixFn, Q: QMatrix, cfg: DiffConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Real partial derivatives of ``vec F`` on each component plane.

    Returns
    -------
    ndarray, shape (4, MP, NS, 4)
        ``out[x, r, c]`` is the quaternion ``d (vec F)_r / d (vec Q)_c,x``
        where ``x`` indexes the component (a, b, c, d).
    """
    n, s = Q.shape
    base = _probe(F, Q)
    mp = base.rows * base.cols
    out = np.zeros((4, mp, n * s, 4))
    qdata = Q.data
    for col in range(n * s):
        i, j = col % n, col // n
        h = cfg.step * max(1.0, float(np.linalg.norm(qdata[i, j])))
        for x in range(4):
            def central(t):
                plus = qdata.copy()
                minus = qdata.copy()
                plus[i, j, x] += t
                minus[i, j, x] -= t
                fp = vec(_probe(F, QMatrix(plus))).data[:, 0]
                fm = vec(_probe(F, QMatrix(minus))).data[:, 0]
                return (fp - fm) / (2.0 * t)

            d1 = central(h)
            if cfg.scheme == "richardson":
                d2 = central(0.5 * h)
                out[x, :, col] = (4.0 * d2 - d1) / 3.0
            else:
                out[x, :, col] = d1
    return out


def combine_partials(partials: np.ndarray, axis=ONE, conjugate: bool = False,
                     side: str = "left") -> QMatrix:
    """Combine real partials into one GHR Jacobian for rotation axis ``axis``."""
    basis = general_basis(axis)
    sign = 1.0 if conjugate else -1.0
    total = partials[0].copy()
    for x in (1, 2, 3):
        e = basis[x].to_array()
        term = hamilton(partials[x], e) if side == "left" else hamilton(e, partials[x])
        total += sign * term
    return QMatrix(0.25 * total)


def _block_axes(mu):
    mu = as_quaternion(mu)
    if mu.norm2() == 0.0:
        raise DomainError("rotation axis mu must be nonzero")
    return mu, tuple(mu * nu for nu in BASIS)


def _jacobian_set(F, Q, mu, cfg, conjugate, side, partials=None):
    mu, axes = _block_axes(mu)
    if partials is None:
        partials = partials_real(F, Q, cfg)
    blocks = tuple(combine_partials(partials, ax, conjugate, side) for ax in axes)
    out_shape = _probe(F, Q).shape if F is not None else (0, 0)
    return GhrJacobian("conjugate" if conjugate else "plain", mu, side, blocks,
                       Q.shape, out_shape)


def ghr_left(F: MatrixFn, Q: QMatrix, mu=ONE, cfg: DiffConfig = DEFAULT_CONFIG) -> GhrJacobian:
    """Left GHR Jacobians with respect to ``Q^{mu nu}``, ``nu in (1, i, j, k)``."""
    return _jacobian_set(F, Q, mu, cfg, False, "left")


def ghr_left_conj(F: MatrixFn, Q: QMatrix, mu=ONE, cfg: DiffConfig = DEFAULT_CONFIG) -> GhrJacobian:
    """Left GHR Jacobians with respect to ``Q^{mu nu *}``."""
    return _jacobian_set(F, Q, mu, cfg, True, "left")


def ghr_right(F: MatrixFn, Q: QMatrix, mu=ONE, cfg: DiffConfig = DEFAULT_CONFIG,
              conjugate: bool = False) -> GhrJacobian:
    """Right GHR Jacobians: basis units multiply the partials from the left."""
    return _jacobian_set(F, Q, mu, cfg, conjugate, "right")


def jacobian(F: MatrixFn, Q: QMatrix, mu=ONE, conjugate: bool = False,
             cfg: DiffConfig = DEFAULT_CONFIG, side: str = "left") -> QMatrix:
    """Single Jacobian ``D_{Q^mu} F`` (``D_{Q^mu*} F`` with ``conjugate``)."""
    mu = as_quaternion(mu)
    if mu.norm2() == 0.0:
        raise DomainError("rotation axis mu must be nonzero")
    return combine_partials(partials_real(F, Q, cfg), mu, conjugate, side)


def scalar_derivative(f: Callable[[Quaternion], Quaternion], q, mu=ONE,
                      conjugate: bool = False, side: str = "left",
                      cfg: DiffConfig = DEFAULT_CONFIG) -> Quaternion:
    """GHR derivative of a scalar function of one quaternion."""
    def F(Q):
        return QMatrix.scalar(f(Q.item()))

    return jacobian(F, QMatrix.scalar(q), mu, conjugate, cfg, side).item()


def gradient(f: MatrixFn, Q: QMatrix, mu=ONE, conjugate: bool = False,
             cfg: DiffConfig = DEFAULT_CONFIG) -> QMatrix:
    """Gradient form ``df/dQ^mu`` (N x S) of a scalar-valued ``f``.

    Related to the Jacobian by ``D_{Q^mu} f = vec(df/dQ^mu)^T``.
    """
    D = jacobian(f, Q, mu, conjugate, cfg)
    if D.rows != 1:
        raise DomainError(f"gradient form needs a scalar function, got {D.rows} outputs")
    return unvec(D, *Q.shape)


def relative_error(approx: QMatrix, reference: QMatrix, cfg: DiffConfig = DEFAULT_CONFIG) -> float:
    """``|approx - reference| / max(|reference|, abs_tol / rel_tol)`` (Frobenius)."""
    if approx.shape != reference.shape:
        return math.inf
    floor = cfg.abs_tol / cfg.rel_tol
    return frob_norm(approx - reference) / max(frob_norm(reference), floor)


# differential checks ----------------------------------------------------------


def differential_check_scalar(f, q, dq, cfg: DiffConfig = DEFAULT_CONFIG,
                              conjugate: bool = False) -> float:
    """Residual ``|f(q+dq) - f(q) - sum_mu (df/dq^mu) dq^mu|``.

    With ``conjugate`` the expansion uses ``df/dq^mu*`` and ``dq^mu*``.
    """
    q, dq = as_quaternion(q), as_quaternion(dq)
    total = f(q + dq) - f(q)
    for nu in BASIS:
        d = scalar_derivative(f, q, nu, conjugate, cfg=cfg)
        dqn = dq.rotate(nu)
        total = total - d * (dqn.conj() if conjugate else dqn)
    return abs(total)


def differential_check_matrix(F: MatrixFn, Q: QMatrix, dQ: QMatrix,
                              cfg: DiffConfig = DEFAULT_CONFIG, mu=ONE,
                              conjugate: bool = False, jac: GhrJacobian | None = None) -> float:
    """Residual of ``d vec F = sum_nu D_{Q^{mu nu}} F  d vec(Q^{mu nu})``."""
    if jac is None:
        jac = _jacobian_set(F, Q, mu, cfg, conjugate, "left")
    resid = vec(F(Q + dQ) - F(Q))
    for ax, block in zip(_block_axes(jac.mu)[1], jac.blocks):
        dQr = rotate(dQ, ax)
        if conjugate:
            dQr = dQr.conj()
        resid = resid - block @ vec(dQr)
    return frob_norm(resid)


def residual_slope(residuals, scales) -> float:
    """Least-squares slope of ``log(residual)`` against ``log(scale)``."""
    r = np.asarray(residuals, dtype=float)
    s = np.asarray(scales, dtype=float)
    return float(np.polyfit(np.log(s), np.log(r), 1)[0])


def rotation_conjugate_rule_check(f, q, mu, nu, cfg: DiffConfig = DEFAULT_CONFIG,
                                  real_valued: bool | None = None) -> dict:
    """Residuals of the rotation and conjugate rules for scalar ``f``.

    Keys
    ----
    rotation, rotation_conj
        ``|(df/dq^mu)^nu - d f^nu / d q^{nu mu}|`` and its conjugate analogue.
    conjugate, conjugate_conj
        ``|(df/dq^mu)* - d_r f* / d q^{mu*}|`` and
        ``|(df/dq^mu*)* - d_r f* / d q^mu|``.
    real_rotation, real_conjugate
        Simplified forms valid for real-valued ``f`` (only when it is real).
    """
    q, mu, nu = as_quaternion(q), as_quaternion(mu), as_quaternion(nu)
    if mu.norm2() == 0.0 or nu.norm2() == 0.0:
        raise DomainError("mu and nu must be nonzero")

    def fnu(x):
        return f(x).rotate(nu)

    def fstar(x):
        return f(x).conj()

    D = lambda g, axis, conj=False, side="left": scalar_derivative(g, q, axis, conj, side, cfg)  # noqa: E731
    out = {
        "rotation": abs(D(f, mu).rotate(nu) - D(fnu, nu * mu)),
        "rotation_conj": abs(D(f, mu, True).rotate(nu) - D(fnu, nu * mu, True)),
        "conjugate": abs(D(f, mu).conj() - D(fstar, mu, True, "right")),
        "conjugate_conj": abs(D(f, mu, True).conj() - D(fstar, mu, False, "right")),
    }
    if real_valued is None:
        real_valued = f(q).is_real(1e-12)
    if real_valued:
        out["real_rotation"] = abs(D(f, mu).rotate(nu) - D(f, nu * mu))
        out["real_conjugate"] = abs(D(f, mu).conj() - D(f, mu, True))
    return out
