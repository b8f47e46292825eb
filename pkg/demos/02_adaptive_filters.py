"""
QLMS, WL-QLMS and QAPA on synthetic system identification.

Prints learning curves as mean |e| over blocks of steps. The second half
uses a widely linear target (output depends on x and its conjugate), where
the strictly linear QLMS stalls and WL-QLMS does not.
"""

import numpy as np

from quatderiv.qmatrix import frob_norm
from quatderiv.cli import run_filter
from quatderiv.optimizers import qlms_init, qlms_step, widely_linear_data, wl_qlms_init, wl_qlms_step


def blocks(values, size):
    v = np.asarray(values)
    return [float(v[k:k + size].mean()) for k in range(0, len(v), size)]


# %% strictly linear target, three algorithms
steps = 1500
curves = {
    "qlms": run_filter("qlms", 4, steps, 0.05, seed=0),
    "qapa S=2": run_filter("qapa", 4, steps, 0.5, seed=0, window=2),
    "nlms": run_filter("nlms", 4, steps, 0.5, seed=0),
}
print(f"{'step':>6}" + "".join(f"{k:>12}" for k in curves))
size = 150
cols = {k: blocks([row[1] for row in c], size) for k, c in curves.items()}
for b in range(steps // size):
    print(f"{b * size:>6}" + "".join(f"{cols[k][b]:>12.2e}" for k in curves))

# %% widely linear target: y = h^H x + g^H x^i
rng = np.random.default_rng(7)
xs, ds, (h, g) = widely_linear_data(rng, 4, 2000, noise=0.01)
wl, ql = wl_qlms_init(4, 0.05), qlms_init(4, 0.05, "hermitian")
for x, d in zip(xs, ds):
    wl_qlms_step(wl, x, d)
    qlms_step(ql, x, d)
print("\nwidely linear target, mean |e|^2 over the last 500 steps")
print("  QLMS   ", np.mean(np.square(ql.history[-500:])))
print("  WL-QLMS", np.mean(np.square(wl.history[-500:])))
print("  |h_hat - h| =", frob_norm(wl.weights[0] - h))
