"""
Product rule, chain rule and identification of Jacobians from differentials.

Maps are wrapped in :class:`DifferentiableMap`, which evaluates a function
and returns its Jacobians either from a closed form (when one is attached and
the rotation axis is 1) or from the finite-difference oracle.

The identification routine solves ``d vec F = sum_n A_n d vec(Q^{nu_n})`` for
the four blocks from probe pairs ``(dQ, dF)``. Writing each quaternion
product ``a x`` as a real 4 x 4 matrix acting on the components of ``a``
turns this into one real linear system shared by every output row.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import RankError, ShapeError
from .ghr import DEFAULT_CONFIG, DiffConfig, GhrJacobian, jacobian
from .qmatrix import QMatrix, eye, kron, rotate, unit_perturbation, vec
from .quaternion import BASIS, ONE, Quaternion, as_quaternion
from . import tables

__all__ = [
    "DifferentiableMap",
    "product_rule",
    "product_rule_set",
    "chain_rule",
    "derivative_of_rotation",
    "identify_from_differential",
    "identify_jacobians",
    "synthesize_differential",
    "canonical_probes",
    "j_matrix",
    "j_identity_residual",
    "naive_product_gap",
    "sandwich_map",
    "quadratic_map",
    "square_map",
    "random_product_pair",
    "random_chain_pair",
]


@dataclass
class DifferentiableMap:
    """A matrix function with optional closed-form Jacobians.

    Parameters
    ----------
    in_shape, out_shape : tuple of int
    evaluate : callable
        ``QMatrix -> QMatrix``.
    closed_form : callable, optional
        ``Q -> (D_Q F, D_Q* F)`` at rotation axis 1.
    times_const : callable, optional
        ``(Q, C) -> (D_Q (F C), D_Q* (F C))`` with ``C`` held constant; used for
        the frozen term of the product rule.
    """

    in_shape: tuple[int, int]
    out_shape: tuple[int, int]
    evaluate: Callable[[QMatrix], QMatrix]
    closed_form: Callable | None = None
    times_const: Callable | None = None
    name: str = "map"

    def __call__(self, Q: QMatrix) -> QMatrix:
        return self.evaluate(Q)

    def jac(self, Q: QMatrix, mu=ONE, conjugate: bool = False,
            cfg: DiffConfig = DEFAULT_CONFIG) -> QMatrix:
        """``D_{Q^mu} F`` (``D_{Q^mu*} F``), closed form when available."""
        mu = as_quaternion(mu)
        if self.closed_form is not None and mu == ONE:
            return self.closed_form(Q)[1 if conjugate else 0]
        return jacobian(self.evaluate, Q, mu, conjugate, cfg)


def _check_in(F: DifferentiableMap, Q: QMatrix):
    if Q.shape != tuple(F.in_shape):
        raise ShapeError(f"{F.name} expects input {F.in_shape}, got {Q.shape}")


def product_rule(F: DifferentiableMap, G: DifferentiableMap, Q: QMatrix, mu=ONE,
                 conjugate: bool = False, cfg: DiffConfig = DEFAULT_CONFIG) -> QMatrix:
    """Jacobian of ``H = F G`` by the matrix product rule::

        D H = (I_P (x) F(Q)) D G + D (F G)|_{G = const}

    The frozen term uses ``F.times_const`` when available (axis 1), otherwise
    the oracle applied to ``Q -> F(Q) G(Q0)``.
    """
    _check_in(F, Q)
    _check_in(G, Q)
    if F.out_shape[1] != G.out_shape[0]:
        raise ShapeError(f"cannot multiply {F.out_shape} by {G.out_shape}")
    mu = as_quaternion(mu)
    F0, G0 = F(Q), G(Q)
    first = kron(eye(G0.cols), F0) @ G.jac(Q, mu, conjugate, cfg)
    if F.times_const is not None and mu == ONE:
        second = F.times_const(Q, G0)[1 if conjugate else 0]
    else:
        second = jacobian(lambda X: F(X) @ G0, Q, mu, conjugate, cfg)
    return first + second


def product_rule_set(F, G, Q, mu=ONE, conjugate: bool = False,
                     cfg: DiffConfig = DEFAULT_CONFIG) -> GhrJacobian:
    """All four product-rule blocks for axes ``mu nu``, ``nu in (1, i, j, k)``."""
    mu = as_quaternion(mu)
    blocks = tuple(product_rule(F, G, Q, mu * nu, conjugate, cfg) for nu in BASIS)
    H0 = F(Q) @ G(Q)
    return GhrJacobian("conjugate" if conjugate else "plain", mu, "left", blocks,
                       Q.shape, H0.shape)


def derivative_of_rotation(G: DifferentiableMap, Q: QMatrix, mu=ONE, nu=ONE,
                           conjugate: bool = False, cfg: DiffConfig = DEFAULT_CONFIG) -> QMatrix:
    """``D_{Q^mu} (G^nu)`` via the rotation rule ``(D_{Q^{nu^-1 mu}} G)^nu``.

    With ``conjugate`` the variable is ``Q^{mu*}``; the rule holds unchanged
    because rotation commutes with conjugation.
    """
    mu, nu = as_quaternion(mu), as_quaternion(nu)
    if nu == ONE:
        return G.jac(Q, mu, conjugate, cfg)
    return rotate(G.jac(Q, nu.inverse() * mu, conjugate, cfg), nu)


def chain_rule(F: DifferentiableMap, G: DifferentiableMap, Q: QMatrix, mu=ONE,
               conjugate: bool = False, via_conjugate: bool = False,
               cfg: DiffConfig = DEFAULT_CONFIG) -> QMatrix:
    """Jacobian of ``H = F(G(Q))`` by the matrix chain rule.

    ``conjugate`` selects ``D_{Q^mu*}``; ``via_conjugate`` sums over the
    conjugate inner set::

        D H = sum_nu (D_{G^nu} F)(D G^nu)        (via_conjugate=False)
        D H = sum_nu (D_{G^nu*} F)(D G^{nu*})    (via_conjugate=True)
    """
    _check_in(G, Q)
    if tuple(G.out_shape) != tuple(F.in_shape):
        raise ShapeError(f"G output {G.out_shape} does not match F input {F.in_shape}")
    mu = as_quaternion(mu)
    G0 = G(Q)
    total = None
    for nu in BASIS:
        outer = F.jac(G0, nu, via_conjugate, cfg)
        if via_conjugate:
            inner = jacobian(lambda X, nu=nu: rotate(G(X), nu).conj(), Q, mu, conjugate, cfg)
        else:
            inner = derivative_of_rotation(G, Q, mu, nu, conjugate, cfg)
        term = outer @ inner
        total = term if total is None else total + term
    return total


# identification ---------------------------------------------------------------------


def _right_mult(x: np.ndarray) -> np.ndarray:
    """Real 4 x 4 matrix of ``a -> a x`` acting on the components of ``a``."""
    a0, a1, a2, a3 = x
    return np.array([
        [a0, -a1, -a2, -a3],
        [a1, a0, a3, -a2],
        [a2, -a3, a0, a1],
        [a3, a2, -a1, a0],
    ])


def canonical_probes(rows: int, cols: int):
    """The ``4 N S`` unit perturbations, one per real component of each entry."""
    return [unit_perturbation(rows, cols, idx, plane)
            for idx in range(rows * cols) for plane in range(4)]


def _probe_vectors(dQ: QMatrix, conjugate: bool):
    out = []
    for nu in BASIS:
        x = rotate(dQ, nu)
        if conjugate:
            x = x.conj()
        out.append(vec(x).data[:, 0])
    return out


def identify_from_differential(pairs, conjugate: bool = False, rank_tol: float = 1e-10):
    """Recover ``(A_1, .., A_4)`` from probe pairs ``(dQ, dF)``.

    Solves ``d vec F = sum_n A_n d vec(Q^{nu_n})`` (``Q^{nu_n *}`` with
    ``conjugate``) for every output row at once.

    Raises
    ------
    RankError
        If the probes do not determine the blocks.
    """
    pairs = list(pairs)
    if not pairs:
        raise RankError("no probes supplied")
    ns = pairs[0][0].rows * pairs[0][0].cols
    mp = pairs[0][1].rows * pairs[0][1].cols
    n_unknown = 16 * ns
    M = np.zeros((4 * len(pairs), n_unknown))
    B = np.zeros((4 * len(pairs), mp))
    for p, (dQ, dF) in enumerate(pairs):
        xs = _probe_vectors(dQ, conjugate)
        for n, x in enumerate(xs):
            for c in range(ns):
                M[4 * p:4 * p + 4, 16 * c + 4 * n:16 * c + 4 * n + 4] = _right_mult(x[c])
        B[4 * p:4 * p + 4, :] = vec(dF).data[:, 0, :].T
    rank = np.linalg.matrix_rank(M, tol=rank_tol * max(1.0, np.abs(M).max()))
    if rank < n_unknown:
        raise RankError(f"probes determine rank {rank} of {n_unknown} unknowns; "
                        f"need {4 * ns} independent perturbations")
    if M.shape[0] == n_unknown:
        X = np.linalg.solve(M, B)
    else:
        X = np.linalg.lstsq(M, B, rcond=None)[0]
    # X[16 c + 4 n + comp, r] is component comp of block n at entry (r, c)
    X = X.reshape(ns, 4, 4, mp)
    blocks = tuple(QMatrix(np.transpose(X[:, n], (2, 0, 1))) for n in range(4))
    return tuple(blocks)


def synthesize_differential(blocks, dQ: QMatrix, conjugate: bool = False) -> QMatrix:
    """``sum_n A_n d vec(Q^{nu_n})`` (column ``MP x 1``)."""
    total = None
    for A, nu in zip(blocks, BASIS):
        x = rotate(dQ, nu)
        if conjugate:
            x = x.conj()
        term = A @ vec(x)
        total = term if total is None else total + term
    return total


def identify_jacobians(F: Callable, Q: QMatrix, conjugate: bool = False,
                       cfg: DiffConfig = DEFAULT_CONFIG, exact_linear: bool = False):
    """Identify the four Jacobian blocks of ``F`` at ``Q`` from differentials.

    Each canonical probe direction ``E`` gives ``dF`` as the first-order part of
    ``F(Q + t E) - F(Q)`` (Richardson-combined symmetric differences). With
    ``exact_linear`` the increment ``F(Q + E) - F(Q)`` is used directly, which
    is exact for maps linear in ``(Q, Q*, Q^T, Q^H)``.
    """
    pairs = []
    h = cfg.step
    for E in canonical_probes(*Q.shape):
        if exact_linear:
            dF = F(Q + E) - F(Q)
        else:
            def sym(t):
                return (F(Q + E * t) - F(Q - E * t)) * (1.0 / (2.0 * t))
            dF = (sym(0.5 * h) * 4.0 - sym(h)) * (1.0 / 3.0)
        pairs.append((E, vec(dF)))
    return identify_from_differential(pairs, conjugate)


# J matrix linking the stationarity conditions ---------------------------------------


def j_matrix(N: int, S: int) -> QMatrix:
    """Block matrix ``J`` with rows ``[I, nu i I, nu j I, nu k I]``.

    Row block ``r`` uses the signs of ``(1, i^nu, j^nu, k^nu)`` for
    ``nu = (1, i, j, k)[r]``; each block is ``NS x NS``.
    """
    m = N * S
    signs = (
        (1, 1, 1, 1),
        (1, 1, -1, -1),
        (1, -1, 1, -1),
        (1, -1, -1, 1),
    )
    data = np.zeros((4 * m, 4 * m, 4))
    idx = np.arange(m)
    for r, row in enumerate(signs):
        for c, sgn in enumerate(row):
            data[r * m + idx, c * m + idx, c] = sgn
    return QMatrix(data)


def j_identity_residual(N: int, S: int, scale: float = 4.0) -> float:
    """Max-abs residual of ``scale * J J^H - I_{4NS}``."""
    J = j_matrix(N, S)
    G = (J @ J.H) * scale - eye(4 * N * S)
    return float(np.abs(G.data).max())


def naive_product_gap(q) -> tuple[Quaternion, Quaternion, Quaternion]:
    """``(true, naive, gap)`` for ``f(q) = q q*``.

    The naive commutative product rule gives ``D_q(q) q* + q D_q(q*) = q* - q/2``;
    the GHR value is ``q*/2``.
    """
    q = as_quaternion(q)
    true = q.conj() * 0.5
    naive = q.conj() - q * 0.5
    return true, naive, naive - true


# map families used by the property suites ------------------------------------------

_OPS = {
    "": lambda Q: Q,
    "*": lambda Q: Q.conj(),
    "^T": lambda Q: Q.T,
    "^H": lambda Q: Q.H,
}
_SANDWICH_ID = {"": "T7:A1 Q A2", "*": "T7:A1 Q* A2", "^T": "T7:A1 Q^T A2", "^H": "T7:A1 Q^H A2"}


def sandwich_map(A1: QMatrix, op: str, A2: QMatrix, in_shape) -> DifferentiableMap:
    """``Q -> A1 op(Q) A2`` with closed forms from the linear registry rows."""
    entry = tables.get_entry(_SANDWICH_ID[op])
    f = _OPS[op]

    def closed(Q, A2=A2):
        p = {"A1": A1, "A2": A2}
        return entry.dq(Q, p), entry.dqc(Q, p)

    def times_const(Q, C):
        return closed(Q, A2 @ C)

    r, c = in_shape if op in ("", "*") else in_shape[::-1]
    if A1.cols != r or A2.rows != c:
        raise ShapeError(f"A1 {A1.shape}, op(Q) {(r, c)} and A2 {A2.shape} do not conform")
    return DifferentiableMap(tuple(in_shape), (A1.rows, A2.cols),
                             lambda Q: A1 @ f(Q) @ A2, closed, times_const, f"A1 Q{op} A2")


_QUAD_ID = {"QAQ^T": "T7:QAQ^T", "QAQ^H": "T7:QAQ^H", "Q*AQ^T": "T7:Q*AQ^T",
            "Q*AQ^H": "T7:Q*AQ^H", "Q^TAQ": "T7:Q^TAQ", "Q^TAQ*": "T7:Q^TAQ*",
            "Q^HAQ": "T7:Q^HAQ", "Q^HAQ*": "T7:Q^HAQ*"}


def quadratic_map(kind: str, A: QMatrix, in_shape) -> DifferentiableMap:
    """Quadratic forms such as ``Q A Q^H`` with closed forms from the registry."""
    entry = tables.get_entry(_QUAD_ID[kind])
    n, s = in_shape
    outer_q = not kind.startswith("Q^")
    out = (n, n) if outer_q else (s, s)
    inner = s if outer_q else n
    if A.shape != (inner, inner):
        raise ShapeError(f"{kind} on a {n}x{s} input needs A of shape {(inner, inner)}, got {A.shape}")
    return DifferentiableMap(tuple(in_shape), out, lambda Q: entry.f(Q, {"A": A}),
                             lambda Q: (entry.dq(Q, {"A": A}), entry.dqc(Q, {"A": A})),
                             None, kind)


def square_map(n: int) -> DifferentiableMap:
    """``X -> X^2`` on ``n x n`` matrices with the power-rule Jacobians."""
    return DifferentiableMap((n, n), (n, n), lambda X: X @ X,
                             lambda X: tables.power_series_jacobians(2, X), None, "X^2")


def _random_family(rng, in_shape, out_shape) -> DifferentiableMap:
    n, s = in_shape
    m, p = out_shape
    choices = ["", "*", "^T", "^H"]
    if out_shape == (n, n):
        choices += ["QAQ^T", "QAQ^H", "Q*AQ^T", "Q*AQ^H"]
    if out_shape == (s, s):
        choices += ["Q^TAQ", "Q^TAQ*", "Q^HAQ", "Q^HAQ*"]
    if in_shape == out_shape and n == s:
        choices.append("X^2")
    kind = choices[rng.integers(len(choices))]
    if kind in _OPS:
        r, c = (n, s) if kind in ("", "*") else (s, n)
        return sandwich_map(QMatrix.random(rng, m, r), kind, QMatrix.random(rng, c, p), in_shape)
    if kind == "X^2":
        return square_map(n)
    inner = s if kind.startswith("Q") and not kind.startswith("Q^") else n
    return quadratic_map(kind, QMatrix.random(rng, inner, inner), in_shape)


def random_product_pair(rng, in_shape=(2, 3), shapes=((2, 2), (2, 2))):
    """Random ``(F, G)`` from the map families with ``F G`` defined."""
    F = _random_family(rng, in_shape, shapes[0])
    G = _random_family(rng, in_shape, shapes[1])
    return F, G


def random_chain_pair(rng, in_shape=(2, 3), mid_shape=(2, 2), out_shape=(2, 2)):
    """Random ``(F, G)`` with ``F`` defined on the codomain of ``G``."""
    G = _random_family(rng, in_shape, mid_shape)
    F = _random_family(rng, mid_shape, out_shape)
    return F, G
