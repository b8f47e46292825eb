"""
GHR derivatives by hand and by finite differences.

Run with ``python demos/01_ghr_basics.py``. Walks through the algebra,
the derivative of |q|^2, why the ordinary product rule breaks, and a small
slice of the closed-form registry checked against the oracle.
"""

import numpy as np

from quatderiv import I, J, K, Quaternion, QMatrix
from quatderiv.qmatrix import eye, kron
from quatderiv.ghr import jacobian, relative_error, scalar_derivative
from quatderiv.rules import naive_product_gap
from quatderiv.tables import verify_table

# %% the algebra is not commutative
print("i j =", I * J, "   j i =", J * I)
q = Quaternion(1, 2, -1, 0.5)
print("q      =", q)
print("q^i    =", q.involution(I), "(real and i parts survive)")
print("q q^-1 =", q * q.inverse())

# %% derivative of |q|^2 = q q*
f = lambda x: Quaternion(x.norm2())  # noqa: E731
d = scalar_derivative(f, q)
dc = scalar_derivative(f, q, conjugate=True)
print("\nd|q|^2/dq  =", d, "  expected q*/2 =", q.conj() * 0.5)
print("d|q|^2/dq* =", dc, "  expected q/2  =", q * 0.5)

# %% the textbook product rule gives the wrong answer
true, naive, gap = naive_product_gap(Quaternion(1, 1, 0, 0))
print(f"\nat q = 1+i: GHR {true}, naive {naive}, gap {gap}")

# %% matrix Jacobians follow the same recipe
rng = np.random.default_rng(3)
A = QMatrix.random(rng, 2, 2)
Q = QMatrix.random(rng, 2, 3)
num = jacobian(lambda X: A @ X, Q)
print("\nD_Q(AQ) has shape", num.shape, "and I_3 kron A matches it to",
      f"{relative_error(num, kron(eye(3), A)):.1e}")

# %% a quick pass over the scalar rows
reports = verify_table(4, n_samples=5, seed=0)
for r in reports[:12]:
    print(f"{r.id:<28} {r.verdict:<13} {r.err_dq:.1e} {r.err_dqc:.1e}")
print(f"... {len(reports)} scalar rows, {sum(r.verdict == 'pass' for r in reports)} pass as printed")
