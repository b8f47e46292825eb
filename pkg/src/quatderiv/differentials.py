"""
First-order differentials of quaternion matrix functions.

Each :class:`DifferentialEntry` pairs a function ``F(P, Q)`` with the closed
form of ``dF`` in terms of ``(dP, dQ)``. Functions of a single variable
ignore ``P``. The harness compares the closed form against

* the first-order part of ``F(Q + dQ) - F(Q)``, isolated by a Richardson
  combination of symmetric differences (:func:`differential_table_check`), and
* the raw increment, whose remainder must shrink like ``|dQ|^2``
  (:func:`differential_slope`).

The Moore-Penrose differential :func:`dpinv` is included as an extra entry
``"Q^+"``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import DomainError, ShapeError
from .ghr import residual_slope
from .qmatrix import (
    QMatrix,
    condition_number,
    eye,
    frob_norm,
    hadamard,
    inverse,
    kron,
    pinv,
    rotate,
    trace,
    unvec,
    vec,
)
from .quaternion import Quaternion

__all__ = [
    "DifferentialEntry",
    "DIFFERENTIALS",
    "differential_table_check",
    "differential_slope",
    "dpinv",
    "reshape",
    "sample_differential_point",
]

SLOPE_SCALES = (1e-3, 1e-4, 1e-5)
# residual below this (relative to |F| + 1) counts as exactly linear
EXACT_TOL = 1e-12


def reshape(Q: QMatrix, rows: int, cols: int) -> QMatrix:
    """Column-major reshape, the linear reshaping operator behind ``vec``."""
    if rows * cols != Q.rows * Q.cols:
        raise ShapeError(f"cannot reshape {Q.rows}x{Q.cols} into {rows}x{cols}")
    return unvec(vec(Q), rows, cols)


def dpinv(Q: QMatrix, dQ: QMatrix, variant: str = "corrected", Qp: QMatrix | None = None) -> QMatrix:
    """Differential of the Moore-Penrose inverse.

    ``corrected`` evaluates::

        -Q+ dQ Q+ + Q+ Q+^H dQ^H (I_N - Q Q+) + (I_S - Q+ Q) dQ^H Q+^H Q+

    ``printed`` drops the ``dQ^H`` factor from the middle term, which makes the
    product conform only for square ``Q`` (it raises :class:`ShapeError`
    otherwise).

    The formula is the derivative along a path of constant rank.
    """
    if Q.shape != dQ.shape:
        raise ShapeError(f"dQ shape {dQ.shape} does not match Q shape {Q.shape}")
    n, s = Q.shape
    Qp = pinv(Q) if Qp is None else Qp
    dQH = dQ.H
    first = -(Qp @ dQ @ Qp)
    last = (eye(s) - Qp @ Q) @ dQH @ Qp.H @ Qp
    if variant == "corrected":
        middle = Qp @ Qp.H @ dQH @ (eye(n) - Q @ Qp)
    elif variant == "printed":
        if n != s:
            raise ShapeError(f"printed middle term does not conform for a {n}x{s} matrix")
        middle = Qp @ Qp.H @ (eye(n) - Q @ Qp)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return first + middle + last


@dataclass(frozen=True)
class DifferentialEntry:
    """``F(P, Q, params)`` and its differential ``rhs(P, Q, dP, dQ, params)``."""

    name: str
    F: Callable
    rhs: Callable
    linear: bool
    two_vars: bool = False
    square: bool = False
    invertible: bool = False


def _mu_conj(M, p):
    return rotate(M, p["mu"]).conj()


DIFFERENTIALS: dict[str, DifferentialEntry] = {}


def _add(e: DifferentialEntry):
    DIFFERENTIALS[e.name] = e


_add(DifferentialEntry("A", lambda P, Q, p: p["A"],
                       lambda P, Q, dP, dQ, p: QMatrix.zeros(*p["A"].shape), True))
_add(DifferentialEntry("alpha Q beta", lambda P, Q, p: p["alpha"] * Q * p["beta"],
                       lambda P, Q, dP, dQ, p: p["alpha"] * dQ * p["beta"], True))
_add(DifferentialEntry("P+Q", lambda P, Q, p: P + Q,
                       lambda P, Q, dP, dQ, p: dP + dQ, True, two_vars=True))
_add(DifferentialEntry("Tr(Q)", lambda P, Q, p: QMatrix.scalar(trace(Q)),
                       lambda P, Q, dP, dQ, p: QMatrix.scalar(trace(dQ)), True, square=True))
_add(DifferentialEntry("PQ", lambda P, Q, p: P @ Q,
                       lambda P, Q, dP, dQ, p: dP @ Q + P @ dQ, False, two_vars=True))
_add(DifferentialEntry("P kron Q", lambda P, Q, p: kron(P, Q),
                       lambda P, Q, dP, dQ, p: kron(dP, Q) + kron(P, dQ), False, two_vars=True))
_add(DifferentialEntry("Q^mu", lambda P, Q, p: rotate(Q, p["mu"]),
                       lambda P, Q, dP, dQ, p: rotate(dQ, p["mu"]), True))
_add(DifferentialEntry("Q^mu*", lambda P, Q, p: _mu_conj(Q, p),
                       lambda P, Q, dP, dQ, p: _mu_conj(dQ, p), True))
_add(DifferentialEntry("vec(Q)", lambda P, Q, p: vec(Q),
                       lambda P, Q, dP, dQ, p: vec(dQ), True))
_add(DifferentialEntry("reshape(Q)", lambda P, Q, p: reshape(Q, Q.cols, Q.rows),
                       lambda P, Q, dP, dQ, p: reshape(dQ, Q.cols, Q.rows), True))
_add(DifferentialEntry("Q^-1", lambda P, Q, p: inverse(Q),
                       lambda P, Q, dP, dQ, p: -(inverse(Q) @ dQ @ inverse(Q)), False,
                       square=True, invertible=True))
_add(DifferentialEntry("P had Q", lambda P, Q, p: hadamard(P, Q),
                       lambda P, Q, dP, dQ, p: hadamard(dP, Q) + hadamard(P, dQ), False,
                       two_vars=True))
_add(DifferentialEntry("Q^+", lambda P, Q, p: pinv(Q),
                       lambda P, Q, dP, dQ, p: dpinv(Q, dQ, p.get("variant", "corrected")), False))

TABLE_II = tuple(k for k in DIFFERENTIALS if k != "Q^+")


def _get(entry) -> DifferentialEntry:
    if isinstance(entry, DifferentialEntry):
        return entry
    try:
        return DIFFERENTIALS[entry]
    except KeyError:
        raise KeyError(f"unknown differential entry {entry!r}") from None


def _partner_shape(name, n, s):
    # shape of P for two-variable entries
    if name == "PQ":
        return (2, n)
    return (n, s)


def sample_differential_point(entry, rng, n: int = 3, s: int = 2):
    """Random ``(P, Q, params)`` in the entry's domain (cond < 1e3 when inverted)."""
    e = _get(entry)
    if e.square:
        s = n
    while True:
        Q = QMatrix.random(rng, n, s)
        if not e.invertible or condition_number(Q) < 1e3:
            break
    P = QMatrix.random(rng, *_partner_shape(e.name, n, s)) if e.two_vars else None
    mu = Quaternion(*rng.uniform(-1, 1, 4))
    params = {"A": QMatrix.random(rng, n, s), "alpha": Quaternion(*rng.uniform(-1, 1, 4)),
              "beta": Quaternion(*rng.uniform(-1, 1, 4)), "mu": mu}
    return P, Q, params


def _check_domain(e, Q):
    if e.invertible and condition_number(Q) >= 1e12:
        raise DomainError(f"{e.name}: Q is singular")
    if e.square and Q.rows != Q.cols:
        raise DomainError(f"{e.name}: Q must be square")


def differential_table_check(entry, Q: QMatrix, dQ: QMatrix, P: QMatrix | None = None,
                             dP: QMatrix | None = None, params: dict | None = None):
    """Return ``(lhs, rhs)`` for one entry at ``(P, Q)`` along ``(dP, dQ)``.

    ``lhs`` is the first-order part of the increment: the symmetric
    differences at steps 1 and 1/2 along the direction, Richardson-combined so
    the cubic remainder cancels. ``rhs`` is the closed-form differential.
    """
    e = _get(entry)
    params = dict(params or {})
    params.setdefault("mu", Quaternion(1))
    params.setdefault("alpha", Quaternion(1))
    params.setdefault("beta", Quaternion(1))
    params.setdefault("A", QMatrix.zeros(*Q.shape))
    _check_domain(e, Q)
    if e.two_vars:
        if P is None:
            raise ValueError(f"{e.name} needs a second variable P")
        if dP is None:
            dP = QMatrix.zeros(*P.shape)

    def at(t):
        Pt = P + dP * t if e.two_vars else None
        return e.F(Pt, Q + dQ * t, params)

    def sym(t):
        return (at(t) - at(-t)) * (1.0 / (2.0 * t))

    lhs = (sym(0.5) * 4.0 - sym(1.0)) * (1.0 / 3.0)
    rhs = e.rhs(P, Q, dP, dQ, params)
    return lhs, rhs


def differential_slope(entry, Q: QMatrix, direction: QMatrix, P: QMatrix | None = None,
                       dir_P: QMatrix | None = None, params: dict | None = None,
                       scales=SLOPE_SCALES):
    """Remainder ``|F(Q + dQ) - F(Q) - dF|`` at ``|dQ| = scale`` for each scale.

    Returns ``(slope, residuals, exact)``. ``exact`` is true when every
    remainder is at roundoff level, which is the expected outcome for linear
    entries; the log-log slope is then meaningless and reported as ``inf``.
    """
    e = _get(entry)
    params = dict(params or {})
    params.setdefault("mu", Quaternion(1))
    params.setdefault("alpha", Quaternion(1))
    params.setdefault("beta", Quaternion(1))
    params.setdefault("A", QMatrix.zeros(*Q.shape))
    _check_domain(e, Q)
    unit = direction * (1.0 / frob_norm(direction))
    unit_P = None
    if e.two_vars:
        dir_P = dir_P if dir_P is not None else QMatrix.zeros(*P.shape)
        unit_P = dir_P * (1.0 / frob_norm(direction))
    base = e.F(P, Q, params)
    scale_ref = frob_norm(base) + 1.0
    residuals = []
    for h in scales:
        dQ = unit * h
        dP = unit_P * h if e.two_vars else None
        inc = e.F(P + dP if e.two_vars else None, Q + dQ, params) - base
        residuals.append(frob_norm(inc - e.rhs(P, Q, dP, dQ, params)))
    if max(residuals) <= EXACT_TOL * scale_ref:
        return float("inf"), residuals, True
    return residual_slope(residuals, scales), residuals, False
