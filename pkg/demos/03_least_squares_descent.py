"""
Matrix least squares min ||C - A Q B||_F^2: direct solve versus steepest
descent along the conjugate gradient, plus the stationarity checks.
"""

import numpy as np

from quatderiv import QMatrix
from quatderiv.optimizers import (
    DescentConfig,
    LsqProblem,
    lsq_objective,
    lsq_solve,
    stationary_check,
    steepest_descent,
)
from quatderiv.qmatrix import frob_norm

rng = np.random.default_rng(11)
A, B = QMatrix.random(rng, 5, 3), QMatrix.random(rng, 2, 4)
p = LsqProblem(A, B, QMatrix.random(rng, 5, 4))
f = lsq_objective(p)

# %% closed form
Q_star = lsq_solve(p)
print("objective at the direct solution:", f.evaluate(Q_star).item().a)
rep = stationary_check(f, Q_star)
print("stationarity residuals:", {k: f"{v:.1e}" for k, v in rep.residuals.items()})

# %% descent: the step must stay below 2 / (||A||^2 ||B||^2) roughly
eta = 2.0 / (frob_norm(A) ** 2 * frob_norm(B) ** 2)
traj = steepest_descent(DescentConfig(eta, f, max_iters=5000, grad_tol=1e-10), QMatrix.zeros(3, 2))
for n in (0, 10, 100, 1000, len(traj) - 1):
    if n < len(traj):
        print(f"iter {n:>5}  f = {traj.values[n]:.6f}  |grad| = {traj.grad_norms[n]:.1e}")
print("converged:", traj.converged, " distance to direct solution:",
      f"{frob_norm(traj.iterates[-1] - Q_star):.1e}")

# %% a random point is not stationary and all five tests say so together
rep = stationary_check(f, QMatrix.random(rng, 3, 2))
print("random point:", {k: f"{v:.2f}" for k, v in rep.residuals.items()}, "agree:", rep.agree)
