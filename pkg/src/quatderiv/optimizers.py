"""
Optimization with real-valued objectives of quaternion matrices.

Stationarity tests, the direction of maximum change, steepest descent, the
QLMS / WL-QLMS / QAPA adaptive filters and the matrix least-squares solver.

Step sizes follow the usual convention of absorbing the factor 1/2 of the
GHR gradient, so ``eta`` in the filter updates is twice the step taken along
``-(D_w J)^H``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DivergenceError, DomainError, ShapeError, SingularError
from .ghr import DEFAULT_CONFIG, DiffConfig, jacobian, partials_real
from .qmatrix import QMatrix, eye, frob_norm, inverse, rotate, unvec, vec
from .quaternion import BASIS, I, J, K, Quaternion, as_quaternion
from .rules import DifferentiableMap
from . import tables

__all__ = [
    "DescentConfig",
    "Trajectory",
    "StationaryReport",
    "real_objective",
    "squared_modulus_objective",
    "lsq_objective",
    "stationary_check",
    "max_change_direction",
    "first_order_change",
    "steepest_descent",
    "FilterState",
    "qlms_init",
    "wl_qlms_init",
    "qapa_init",
    "qlms_output",
    "qlms_gradient",
    "qlms_step",
    "wl_qlms_output",
    "wl_qlms_gradients",
    "wl_qlms_step",
    "qapa_error",
    "qapa_step",
    "nlms_step",
    "LsqProblem",
    "lsq_solve",
    "lsq_gradient",
    "normal_equation_residual",
    "tap_inputs",
    "ar1_signal",
    "system_id_data",
    "widely_linear_data",
]

REAL_TOL = 1e-12
DIVERGENCE_RUN = 10
STATIONARY_TOL = 1e-7


# objectives ---------------------------------------------------------------------------


def _real_value(F: QMatrix) -> float:
    if F.shape != (1, 1):
        raise DomainError(f"objective must be 1x1, got {F.rows}x{F.cols}")
    q = F.item()
    if max(abs(q.b), abs(q.c), abs(q.d)) > REAL_TOL * max(1.0, abs(q.a)):
        raise DomainError(f"objective is not real-valued: {q}")
    return q.a


def real_objective(f: Callable, in_shape, closed_form=None, name: str = "f") -> DifferentiableMap:
    """Wrap ``f`` (returning a float, Quaternion or 1x1 QMatrix) as a map.

    ``closed_form``, if given, returns ``(D_Q f, D_Q* f)`` as ``1 x NS`` rows.
    """

    def evaluate(Q):
        v = f(Q)
        if isinstance(v, QMatrix):
            return v
        return QMatrix.scalar(as_quaternion(v))

    return DifferentiableMap(tuple(in_shape), (1, 1), evaluate, closed_form, None, name)


def squared_modulus_objective() -> DifferentiableMap:
    """``f(q) = |q|^2`` with the closed-form pair ``(q*/2, q/2)``."""
    entry = tables.get_entry("T4:|q|^2")
    return DifferentiableMap((1, 1), (1, 1), lambda Q: entry.f(Q, {}),
                             lambda Q: (entry.dq(Q, {}), entry.dqc(Q, {})), None, "|q|^2")


def lsq_objective(p: "LsqProblem") -> DifferentiableMap:
    """``f(Q) = ||C - A Q B||_F^2`` with the closed-form gradient."""

    def f(Q):
        return QMatrix.scalar(Quaternion(frob_norm(p.C - p.A @ Q @ p.B) ** 2))

    def closed(Q):
        dqc = vec(lsq_gradient(p, Q)).T
        return dqc.conj(), dqc

    return DifferentiableMap(p.unknown_shape, (1, 1), f, closed, None, "||C - AQB||^2")


def _as_map(f, Q: QMatrix) -> DifferentiableMap:
    if isinstance(f, DifferentiableMap):
        return f
    return real_objective(f, Q.shape)


# stationarity ---------------------------------------------------------------------------


@dataclass
class StationaryReport:
    """Residual norms of the five stationarity conditions.

    Keys of ``residuals``: ``"xi"`` (real components), ``"zeta"``, ``"Q"``,
    ``"zeta*"`` and ``"Q*"``.
    """

    residuals: dict
    tol: float

    @property
    def holds(self) -> dict:
        return {k: v <= self.tol for k, v in self.residuals.items()}

    @property
    def stationary(self) -> bool:
        return all(self.holds.values())

    @property
    def agree(self) -> bool:
        return len(set(self.holds.values())) == 1


def stationary_check(f, Q: QMatrix, cfg: DiffConfig = DEFAULT_CONFIG,
                     tol: float = STATIONARY_TOL) -> StationaryReport:
    """Evaluate the five equivalent stationarity conditions with the oracle.

    The real-component gradient ``D_xi g`` comes straight from the real
    partials; the others are GHR Jacobians in the ``(1, i, j, k)`` axes.
    """
    F = _as_map(f, Q)
    _real_value(F(Q))
    parts = partials_real(F.evaluate, Q, cfg)
    res = {"xi": float(np.sqrt(np.sum(parts ** 2)))}
    for conj, key in ((False, ""), (True, "*")):
        blocks = [jacobian(F.evaluate, Q, nu, conj, cfg) for nu in BASIS]
        res["zeta" + key] = float(np.sqrt(sum(frob_norm(b) ** 2 for b in blocks)))
        res["Q" + key] = frob_norm(blocks[0])
    order = ("xi", "zeta", "Q", "zeta*", "Q*")
    return StationaryReport({k: res[k] for k in order}, tol)


def max_change_direction(f, Q: QMatrix, cfg: DiffConfig = DEFAULT_CONFIG) -> QMatrix:
    """``(D_Q* f)^T``, the ``NS x 1`` direction of steepest increase of ``f``."""
    F = _as_map(f, Q)
    _real_value(F(Q))
    return F.jac(Q, conjugate=True, cfg=cfg).T


def first_order_change(f, Q: QMatrix, direction: QMatrix, t: float = 1e-6) -> float:
    """Central-difference directional derivative of ``f`` along ``vec`` direction."""
    F = _as_map(f, Q)
    dQ = unvec(direction, *Q.shape) * t
    return (_real_value(F(Q + dQ)) - _real_value(F(Q - dQ))) / (2.0 * t)


# steepest descent ---------------------------------------------------------------------


@dataclass
class DescentConfig:
    """Settings for :func:`steepest_descent`.

    Parameters
    ----------
    eta : float
        Step size, strictly positive.
    objective : DifferentiableMap or callable
        Real-valued objective; checked at every evaluation.
    """

    eta: float
    objective: DifferentiableMap | Callable
    max_iters: int = 1000
    grad_tol: float = 1e-10
    diff: DiffConfig = DEFAULT_CONFIG

    def __post_init__(self):
        if not self.eta > 0:
            raise ValueError(f"eta must be positive, got {self.eta}")
        if self.max_iters < 0:
            raise ValueError("max_iters must be non-negative")


@dataclass
class Trajectory:
    iterates: list = field(default_factory=list)
    values: list = field(default_factory=list)
    grad_norms: list = field(default_factory=list)
    converged: bool = False

    def __len__(self):
        return len(self.iterates)


def steepest_descent(cfg: DescentConfig, Q0: QMatrix) -> Trajectory:
    """Iterate ``Q <- Q - eta df/dQ*`` and record every iterate.

    Stops when the gradient norm drops to ``grad_tol`` (the current iterate is
    the last one recorded) or after ``max_iters`` updates.

    Raises
    ------
    DivergenceError
        After 10 consecutive increases of the objective.
    """
    F = _as_map(cfg.objective, Q0)
    traj = Trajectory()
    Q = Q0
    rises = 0
    for it in range(cfg.max_iters + 1):
        value = _real_value(F(Q))
        if traj.values and value > traj.values[-1]:
            rises += 1
            if rises >= DIVERGENCE_RUN:
                raise DivergenceError(f"objective increased {rises} times in a row "
                                      f"(step {it}, value {value:.6g}, eta {cfg.eta})")
        else:
            rises = 0
        grad = unvec(F.jac(Q, conjugate=True, cfg=cfg.diff), *Q.shape)
        gn = frob_norm(grad)
        traj.iterates.append(Q)
        traj.values.append(value)
        traj.grad_norms.append(gn)
        if gn <= cfg.grad_tol:
            traj.converged = True
            break
        if it == cfg.max_iters:
            break
        Q = Q - grad * cfg.eta
    return traj


# adaptive filters ------------------------------------------------------------------------

VARIANTS = ("qlms", "wlqlms", "qapa")


@dataclass
class FilterState:
    """Weights and error history of an adaptive filter.

    ``weights`` holds ``[w]`` for QLMS and QAPA and ``[h, g, u, v]`` for
    WL-QLMS, each an ``N x 1`` QMatrix. ``output`` selects the QLMS output
    convention: ``"transpose"`` (``y = w^T x``) or ``"hermitian"``
    (``y = w^H x``).
    """

    variant: str
    weights: list
    eta: float
    eps: float = 0.0
    window: int = 1
    output: str = "transpose"
    history: list = field(default_factory=list)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        n_w = 4 if self.variant == "wlqlms" else 1
        if len(self.weights) != n_w:
            raise ShapeError(f"{self.variant} needs {n_w} weight vectors")
        N = self.weights[0].rows
        for w in self.weights:
            if w.shape != (N, 1):
                raise ShapeError(f"weights must be {N}x1 columns, got {w.shape}")
        if self.output not in ("transpose", "hermitian"):
            raise ValueError(f"unknown output convention {self.output!r}")
        if self.variant == "qapa" and self.window > N:
            raise ShapeError(f"window {self.window} exceeds order {N}")

    @property
    def order(self) -> int:
        return self.weights[0].rows

    @property
    def w(self) -> QMatrix:
        return self.weights[0]


def qlms_init(order: int, eta: float, output: str = "transpose") -> FilterState:
    return FilterState("qlms", [QMatrix.zeros(order, 1)], eta, output=output)


def wl_qlms_init(order: int, eta: float) -> FilterState:
    return FilterState("wlqlms", [QMatrix.zeros(order, 1) for _ in range(4)], eta)


def qapa_init(order: int, eta: float, window: int, eps: float) -> FilterState:
    if eps < 0:
        raise ValueError("eps must be non-negative")
    return FilterState("qapa", [QMatrix.zeros(order, 1)], eta, eps, window)


def _check_x(state: FilterState, x: QMatrix):
    if x.shape != (state.order, 1):
        raise ShapeError(f"input must be {state.order}x1, got {x.shape}")


def qlms_output(w: QMatrix, x: QMatrix, output: str = "transpose") -> Quaternion:
    return ((w.T if output == "transpose" else w.H) @ x).item()


def qlms_gradient(w: QMatrix, x: QMatrix, d, output: str = "transpose") -> QMatrix:
    """Closed-form ``D_w |d - y|^2`` (a ``1 x N`` row).

    ``-x^T e* / 2`` for ``y = w^T x`` and ``-e x^H / 2`` for ``y = w^H x``.
    """
    e = as_quaternion(d) - qlms_output(w, x, output)
    if output == "transpose":
        return x.T * e.conj() * -0.5
    return (e * x.H) * -0.5


def qlms_step(state: FilterState, x: QMatrix, d) -> FilterState:
    """One QLMS update; returns ``state`` after mutating it in place."""
    _check_x(state, x)
    w = state.w
    e = as_quaternion(d) - qlms_output(w, x, state.output)
    if state.output == "transpose":
        step = e * x.conj()
    else:
        step = x * e.conj()
    state.weights[0] = w + step * state.eta
    state.history.append(abs(e))
    return state


def _wl_inputs(x: QMatrix):
    return [x, rotate(x, I), rotate(x, J), rotate(x, K)]


def wl_qlms_output(weights, x: QMatrix) -> Quaternion:
    y = Quaternion(0.0)
    for w, xn in zip(weights, _wl_inputs(x)):
        y = y + (w.H @ xn).item()
    return y


def wl_qlms_gradients(weights, x: QMatrix, d) -> list:
    """Closed-form ``D_h J, D_g J, D_u J, D_v J``, each ``-e (x^nu)^H / 2``."""
    e = as_quaternion(d) - wl_qlms_output(weights, x)
    return [(e * xn.H) * -0.5 for xn in _wl_inputs(x)]


def wl_qlms_step(state: FilterState, x: QMatrix, d) -> FilterState:
    _check_x(state, x)
    e = as_quaternion(d) - wl_qlms_output(state.weights, x)
    ec = e.conj()
    state.weights = [w + (xn * ec) * state.eta
                     for w, xn in zip(state.weights, _wl_inputs(x))]
    state.history.append(abs(e))
    return state


def qapa_error(w: QMatrix, Qwin: QMatrix, d_vec: QMatrix) -> QMatrix:
    """``e = d - (w^H Q)^T``, the entrywise residual of ``d^T = w^H Q``."""
    return d_vec - (w.H @ Qwin).T


def qapa_step(state: FilterState, Qwin: QMatrix, d_vec: QMatrix) -> FilterState:
    """``w <- w + eta Q (Q^H Q + eps I)^-1 e*`` over a window of ``S`` inputs.

    Raises
    ------
    SingularError
        If the regularized Gram matrix cannot be inverted.
    """
    N, S = Qwin.shape
    if N != state.order:
        raise ShapeError(f"window must have {state.order} rows, got {N}")
    if S > N:
        raise ShapeError(f"window width {S} exceeds order {N}")
    if d_vec.shape != (S, 1):
        raise ShapeError(f"desired vector must be {S}x1, got {d_vec.shape}")
    e = qapa_error(state.w, Qwin, d_vec)
    gram = Qwin.H @ Qwin + eye(S) * state.eps
    state.weights[0] = state.w + (Qwin @ inverse(gram) @ e.conj()) * state.eta
    # a priori error of the newest sample, comparable with the LMS curves
    state.history.append(abs(e[0, 0]))
    return state


def nlms_step(w: QMatrix, x: QMatrix, d, eta: float, eps: float) -> tuple[QMatrix, float]:
    """Normalized LMS reference ``w + eta x e* / (|x|^2 + eps)`` with ``e = d - w^H x``.

    Returns the new weights and ``|e|``.
    """
    e = as_quaternion(d) - (w.H @ x).item()
    return w + (x * e.conj()) * (eta / (frob_norm(x) ** 2 + eps)), abs(e)


# least squares ------------------------------------------------------------------------


@dataclass
class LsqProblem:
    """``min_Q ||C - A Q B||_F^2`` with ``A`` R x N, ``B`` S x P, ``C`` R x P."""

    A: QMatrix
    B: QMatrix
    C: QMatrix

    def __post_init__(self):
        R, _ = self.A.shape
        _, P = self.B.shape
        if self.C.shape != (R, P):
            raise ShapeError(f"C must be {R}x{P} for A {self.A.shape} and B {self.B.shape}, "
                             f"got {self.C.shape}")

    @property
    def unknown_shape(self) -> tuple[int, int]:
        return (self.A.cols, self.B.rows)

    @property
    def solvable(self) -> bool:
        try:
            inverse(self.A.H @ self.A)
            inverse(self.B @ self.B.H)
        except SingularError:
            return False
        return True


def lsq_gradient(p: LsqProblem, Q: QMatrix) -> QMatrix:
    """Gradient form ``df/dQ* = -A^H (C - A Q B) B^H / 2``."""
    return (p.A.H @ (p.C - p.A @ Q @ p.B) @ p.B.H) * -0.5


def lsq_solve(p: LsqProblem) -> QMatrix:
    """``Q = (A^H A)^-1 A^H C B^H (B B^H)^-1``.

    Raises
    ------
    SingularError
        Naming the Gram factor (``A^H A`` or ``B B^H``) that is singular.
    """
    factors = []
    for name, G in (("A^H A", p.A.H @ p.A), ("B B^H", p.B @ p.B.H)):
        try:
            factors.append(inverse(G))
        except SingularError as exc:
            raise SingularError(f"Gram factor {name} is singular (cond {exc.cond:.3g})",
                                exc.cond) from None
    return factors[0] @ p.A.H @ p.C @ p.B.H @ factors[1]


def normal_equation_residual(p: LsqProblem, Q: QMatrix) -> float:
    """Relative residual of ``A^H A Q B B^H = A^H C B^H``."""
    rhs = p.A.H @ p.C @ p.B.H
    lhs = p.A.H @ p.A @ Q @ p.B @ p.B.H
    return frob_norm(lhs - rhs) / max(frob_norm(rhs), 1e-300)


# synthetic signals ---------------------------------------------------------------------


def _uniform_quats(rng, n):
    return rng.uniform(-1.0, 1.0, (n, 4))


def ar1_signal(rng, steps: int, a: float = 0.9, noise: float = 1.0) -> np.ndarray:
    """Quaternion AR(1) process ``s(n) = a s(n-1) + v(n)``, ``v`` uniform.

    Returns an array of shape ``(steps, 4)``.
    """
    v = _uniform_quats(rng, steps) * noise
    s = np.empty_like(v)
    prev = np.zeros(4)
    for n in range(steps):
        prev = a * prev + v[n]
        s[n] = prev
    return s


def tap_inputs(signal: np.ndarray, order: int) -> list:
    """Tap-delay regressors ``x(n) = [s(n), .., s(n - N + 1)]^T`` (zeros before 0)."""
    padded = np.vstack([np.zeros((order - 1, 4)), signal])
    return [QMatrix(padded[n:n + order][::-1].reshape(order, 1, 4).copy())
            for n in range(len(signal))]


def system_id_data(rng, order: int, steps: int, output: str = "transpose",
                   noise: float = 0.0, signal: str = "white", w_true: QMatrix | None = None):
    """Inputs, desired outputs and the true weights of a linear system.

    ``d(n) = y(n) + v(n)`` with ``y`` from ``w_true`` in the given output
    convention and ``v`` uniform noise of amplitude ``noise``. White inputs
    have i.i.d. U[-1, 1] components.
    """
    if w_true is None:
        w_true = QMatrix.random(rng, order, 1)
    s = _uniform_quats(rng, steps) if signal == "white" else ar1_signal(rng, steps)
    xs = tap_inputs(s, order)
    v = _uniform_quats(rng, steps) * noise
    ds = [qlms_output(w_true, x, output) + Quaternion.from_array(v[n]) for n, x in enumerate(xs)]
    return xs, ds, w_true


def widely_linear_data(rng, order: int, steps: int, noise: float = 0.0, g_scale: float = 1.0):
    """Widely linear target ``d = h^H x + g^H x^i + v`` with ``g != 0``.

    Returns ``(xs, ds, (h, g))``.
    """
    h = QMatrix.random(rng, order, 1)
    g = QMatrix.random(rng, order, 1) * g_scale
    xs = tap_inputs(_uniform_quats(rng, steps), order)
    v = _uniform_quats(rng, steps) * noise
    zero = QMatrix.zeros(order, 1)
    ds = [wl_qlms_output([h, g, zero, zero], x) + Quaternion.from_array(v[n])
          for n, x in enumerate(xs)]
    return xs, ds, (h, g)
