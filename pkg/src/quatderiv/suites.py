"""
Batch checks shared by the ``verify`` command and the acceptance tests.

Every check returns a plain dict with at least ``id``, ``verdict`` and the
worst observed error, so reports serialize to JSON unchanged.
"""

from __future__ import annotations

import numpy as np

from .differentials import DIFFERENTIALS, differential_slope, differential_table_check, \
    sample_differential_point
from .ghr import DEFAULT_CONFIG, DiffConfig, jacobian, relative_error
from .qmatrix import QMatrix, frob_norm
from .quaternion import Quaternion
from .rules import chain_rule, naive_product_gap, product_rule, random_chain_pair, \
    random_product_pair

__all__ = ["rule_checks", "differential_checks", "MIN_SLOPE", "RULE_TOL"]

RULE_TOL = 1e-6
MIN_SLOPE = 1.9
# first-order part of a differential must match its closed form to this
DIFF_TOL = 1e-8


def _product_check(rng, n_pairs, cfg):
    worst = 0.0
    worst_pair = None
    for _ in range(n_pairs):
        F, G = random_product_pair(rng)
        Q = QMatrix.random(rng, *F.in_shape)
        for conj in (False, True):
            err = relative_error(product_rule(F, G, Q, conjugate=conj, cfg=cfg),
                                 jacobian(lambda X: F(X) @ G(X), Q, conjugate=conj, cfg=cfg), cfg)
            if err > worst:
                worst, worst_pair = err, f"{F.name} * {G.name}"
    return {"id": "rule:product", "samples": n_pairs, "worst_err": worst,
            "worst_pair": worst_pair, "verdict": "pass" if worst <= RULE_TOL else "fail"}


def _chain_check(rng, n_pairs, cfg):
    worst = 0.0
    worst_pair = None
    for _ in range(n_pairs):
        F, G = random_chain_pair(rng)
        Q = QMatrix.random(rng, *G.in_shape)
        for conj in (False, True):
            ref = jacobian(lambda X: F(G(X)), Q, conjugate=conj, cfg=cfg)
            for via in (False, True):
                err = relative_error(chain_rule(F, G, Q, conjugate=conj, via_conjugate=via,
                                                cfg=cfg), ref, cfg)
                if err > worst:
                    worst, worst_pair = err, f"{F.name} o {G.name}"
    return {"id": "rule:chain", "samples": n_pairs, "worst_err": worst,
            "worst_pair": worst_pair, "verdict": "pass" if worst <= RULE_TOL else "fail"}


def rule_checks(seed: int = 0, n_pairs: int = 50, cfg: DiffConfig = DEFAULT_CONFIG) -> list[dict]:
    """Product and chain rule against the oracle, plus the naive-rule gap."""
    rng = np.random.default_rng([seed, 1])
    out = [_product_check(rng, n_pairs, cfg), _chain_check(rng, n_pairs, cfg)]
    true, naive, gap = naive_product_gap(Quaternion(1, 1, 0, 0))
    out.append({"id": "rule:naive-product-gap", "samples": 1, "worst_err": abs(gap),
                "true": list(true), "naive": list(naive),
                "verdict": "pass" if abs(gap) > 0.1 else "fail"})
    return out


def differential_checks(seed: int = 0, n_points: int = 5) -> list[dict]:
    """Closed-form differentials: first-order match and second-order remainder.

    Linear entries have a remainder at roundoff level and are reported as
    exact instead of with a slope.
    """
    out = []
    for k, name in enumerate(DIFFERENTIALS):
        rng = np.random.default_rng([seed, 2, k])
        worst_err, min_slope, exact = 0.0, float("inf"), True
        for _ in range(n_points):
            P, Q, params = sample_differential_point(name, rng)
            dQ = QMatrix.random(rng, *Q.shape)
            dP = QMatrix.random(rng, *P.shape) if P is not None else None
            lhs, rhs = differential_table_check(name, Q, dQ * 1e-3, P,
                                                dP * 1e-3 if dP is not None else None, params)
            worst_err = max(worst_err, frob_norm(lhs - rhs) / max(frob_norm(rhs), 1e-12))
            slope, _, is_exact = differential_slope(name, Q, dQ, P, dP, params)
            exact = exact and is_exact
            if not is_exact:
                min_slope = min(min_slope, slope)
        ok = worst_err <= DIFF_TOL and (exact or min_slope >= MIN_SLOPE)
        out.append({"id": f"diff:{name}", "samples": n_points, "worst_err": worst_err,
                    "slope": None if exact else min_slope, "exact": exact,
                    "verdict": "pass" if ok else "fail"})
    return out
