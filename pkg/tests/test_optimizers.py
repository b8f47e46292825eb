import numpy as np
import pytest

from quatderiv import DivergenceError, DomainError, QMatrix, Quaternion, ShapeError, SingularError, I, J, K
from quatderiv.ghr import jacobian, relative_error
from quatderiv.qmatrix import eye, frob_norm, rotate, unvec, vec
from quatderiv.optimizers import (
    DescentConfig,
    FilterState,
    LsqProblem,
    ar1_signal,
    first_order_change,
    lsq_gradient,
    lsq_objective,
    lsq_solve,
    max_change_direction,
    nlms_step,
    normal_equation_residual,
    qapa_init,
    qapa_step,
    qlms_gradient,
    qlms_init,
    qlms_output,
    qlms_step,
    real_objective,
    squared_modulus_objective,
    stationary_check,
    steepest_descent,
    system_id_data,
    tap_inputs,
    widely_linear_data,
    wl_qlms_gradients,
    wl_qlms_init,
    wl_qlms_output,
    wl_qlms_step,
)


def abs_g_sq(alpha, beta, lam):
    return real_objective(lambda Q: Quaternion((alpha * Q.item() * beta + lam).norm2()), (1, 1))


def random_lsq(rng, R=4, N=2, S=3, P=5):
    return LsqProblem(QMatrix.random(rng, R, N), QMatrix.random(rng, S, P), QMatrix.random(rng, R, P))


# stationarity ------------------------------------------------------------------------


def test_stationary_at_minimum_of_modulus():
    rep = stationary_check(squared_modulus_objective(), QMatrix.scalar(Quaternion(0.0)))
    assert rep.stationary and rep.agree


def test_not_stationary_at_one():
    rep = stationary_check(squared_modulus_objective(), QMatrix.scalar(Quaternion(1.0)))
    assert not any(rep.holds.values())
    assert rep.residuals["Q*"] == pytest.approx(0.5, abs=1e-9)
    assert rep.residuals["Q"] == pytest.approx(0.5, abs=1e-9)
    assert rep.residuals["xi"] == pytest.approx(2.0, abs=1e-8)


def test_stationary_at_least_squares_solution(rng):
    p = random_lsq(rng)
    rep = stationary_check(lsq_objective(p), lsq_solve(p))
    assert rep.stationary
    assert max(rep.residuals.values()) <= 1e-7


def test_stationarity_conditions_co_vanish(rng):
    p = random_lsq(rng)
    for _ in range(5):
        rep = stationary_check(lsq_objective(p), QMatrix.random(rng, 2, 3))
        assert rep.agree and not rep.stationary


def test_non_real_objective_rejected():
    with pytest.raises(DomainError):
        stationary_check(real_objective(lambda Q: Q.item() * I, (1, 1)), QMatrix.scalar(Quaternion(1.0)))


# direction of maximum change -------------------------------------------------------------


def test_direction_for_modulus():
    q = Quaternion(1, 1, 0, 0)
    d = max_change_direction(squared_modulus_objective(), QMatrix.scalar(q))
    assert d.item() == q * 0.5


def test_direction_for_constant_is_zero(rng):
    d = max_change_direction(real_objective(lambda Q: 3.0, (2, 2)), QMatrix.random(rng, 2, 2))
    assert d.shape == (4, 1) and d.norm() <= 1e-12


def test_direction_beats_random_probes(rng):
    alpha, beta, lam = (Quaternion(*rng.uniform(-1, 1, 4)) for _ in range(3))
    f = abs_g_sq(alpha, beta, lam)
    Q = QMatrix.random(rng, 1, 1)
    d = max_change_direction(f, Q)
    best = first_order_change(f, Q, d * (1.0 / d.norm()))
    for _ in range(200):
        u = QMatrix.random(rng, 1, 1)
        assert first_order_change(f, Q, u * (1.0 / u.norm())) <= best + 1e-9


# steepest descent ----------------------------------------------------------------------


def test_descent_on_modulus_is_geometric():
    q0 = Quaternion(0.3, -1.0, 2.0, 0.5)
    traj = steepest_descent(DescentConfig(0.5, squared_modulus_objective(), max_iters=40),
                            QMatrix.scalar(q0))
    for n, Q in enumerate(traj.iterates):
        assert abs(Q.item() - q0 * 0.75 ** n) <= 1e-12


def test_descent_from_stationary_point():
    traj = steepest_descent(DescentConfig(0.5, squared_modulus_objective()),
                            QMatrix.scalar(Quaternion(0.0)))
    assert len(traj) == 1 and traj.converged


def test_descent_reaches_direct_solution(rng):
    p = random_lsq(rng)
    eta = 2.0 / (frob_norm(p.A) ** 2 * frob_norm(p.B) ** 2)
    traj = steepest_descent(DescentConfig(eta, lsq_objective(p), max_iters=20000, grad_tol=1e-12),
                            QMatrix.zeros(2, 3))
    assert traj.converged
    assert frob_norm(traj.iterates[-1] - lsq_solve(p)) <= 1e-6
    assert all(b <= a + 1e-12 for a, b in zip(traj.values, traj.values[1:]))


def test_descent_divergence():
    with pytest.raises(DivergenceError):
        steepest_descent(DescentConfig(5.0, squared_modulus_objective()),
                         QMatrix.scalar(Quaternion(1.0)))
    with pytest.raises(ValueError):
        DescentConfig(0.0, squared_modulus_objective())


def test_descent_with_oracle_gradient(rng):
    f = lambda Q: Quaternion((Q.item() - Quaternion(1, 2, 0, 0)).norm2())  # noqa: E731
    traj = steepest_descent(DescentConfig(0.5, f, max_iters=200, grad_tol=1e-8),
                            QMatrix.scalar(Quaternion(0.0)))
    assert abs(traj.iterates[-1].item() - Quaternion(1, 2, 0, 0)) <= 1e-7


# QLMS ----------------------------------------------------------------------------------


def test_qlms_single_step():
    st = qlms_init(1, 1.0)
    qlms_step(st, QMatrix.scalar(Quaternion(1.0)), I)
    assert st.w.item() == I
    before = st.w
    qlms_step(st, QMatrix.scalar(Quaternion(1.0)), I)  # e = 0
    assert st.w == before and st.history == [1.0, 0.0]


@pytest.mark.parametrize("output", ["transpose", "hermitian"])
def test_qlms_gradient_matches_oracle(rng, output):
    for _ in range(10):
        w, x = QMatrix.random(rng, 3, 1), QMatrix.random(rng, 3, 1)
        d = Quaternion(*rng.uniform(-1, 1, 4))
        J_ = lambda W: QMatrix.scalar(Quaternion((d - qlms_output(W, x, output)).norm2()))  # noqa: E731
        assert relative_error(qlms_gradient(w, x, d, output), jacobian(J_, w)) <= 1e-7


def test_qlms_output_conventions_differ(rng):
    w, x = QMatrix.random(rng, 3, 1), QMatrix.random(rng, 3, 1)
    assert abs(qlms_output(w, x, "transpose") - qlms_output(w, x, "hermitian")) > 1e-3


@pytest.mark.parametrize("output", ["transpose", "hermitian"])
def test_qlms_system_identification(output):
    xs, ds, w_true = system_id_data(np.random.default_rng(1), 4, 5000, output)
    st = qlms_init(4, 0.05, output)
    for x, d in zip(xs, ds):
        qlms_step(st, x, d)
    assert min(st.history) < 1e-6 and st.history[-1] < 1e-6
    assert frob_norm(st.w - w_true) < 1e-6


def test_filter_state_validation():
    with pytest.raises(ShapeError):
        qlms_step(qlms_init(3, 0.1), QMatrix.zeros(2, 1), Quaternion(1.0))
    with pytest.raises(ValueError):
        FilterState("lms", [QMatrix.zeros(2, 1)], 0.1)
    with pytest.raises(ShapeError):
        FilterState("wlqlms", [QMatrix.zeros(2, 1)], 0.1)
    with pytest.raises(ShapeError):
        qapa_init(2, 0.1, 3, 1e-3)


# WL-QLMS ---------------------------------------------------------------------------------


def test_wl_gradients_match_oracle(rng):
    for _ in range(5):
        ws = [QMatrix.random(rng, 3, 1) for _ in range(4)]
        x = QMatrix.random(rng, 3, 1)
        d = Quaternion(*rng.uniform(-1, 1, 4))
        grads = wl_qlms_gradients(ws, x, d)
        for k in range(4):
            def J_(W, k=k):
                cur = list(ws)
                cur[k] = W
                return QMatrix.scalar(Quaternion((d - wl_qlms_output(cur, x)).norm2()))

            assert relative_error(grads[k], jacobian(J_, ws[k])) <= 1e-7


def test_wl_zero_error_keeps_weights(rng):
    st = wl_qlms_init(3, 0.1)
    st.weights = [QMatrix.random(rng, 3, 1) for _ in range(4)]
    x = QMatrix.random(rng, 3, 1)
    before = list(st.weights)
    wl_qlms_step(st, x, wl_qlms_output(before, x))
    assert all(a.allclose(b, atol=1e-15) for a, b in zip(st.weights, before))


def test_wl_reduces_to_qlms_on_real_data(rng):
    # with x real the four inputs coincide, so the summed weight moves at 4 eta
    wl, ql = wl_qlms_init(3, 0.025), qlms_init(3, 0.1, "hermitian")
    for _ in range(20):
        x = QMatrix.from_parts(rng.uniform(-1, 1, (3, 1)))
        d = Quaternion(rng.uniform(-1, 1))
        wl_qlms_step(wl, x, d)
        qlms_step(ql, x, d)
    total = wl.weights[0] + wl.weights[1] + wl.weights[2] + wl.weights[3]
    assert total.allclose(ql.w, atol=1e-12)


def test_wl_beats_strictly_linear_on_widely_linear_target():
    wl_err, ql_err = [], []
    for seed in range(20):
        xs, ds, _ = widely_linear_data(np.random.default_rng(seed), 4, 600, noise=0.01)
        a, b = wl_qlms_init(4, 0.05), qlms_init(4, 0.05, "hermitian")
        for x, d in zip(xs, ds):
            wl_qlms_step(a, x, d)
            qlms_step(b, x, d)
        wl_err.append(np.mean(np.square(a.history[-200:])))
        ql_err.append(np.mean(np.square(b.history[-200:])))
    assert np.mean(wl_err) < np.mean(ql_err)


# QAPA ------------------------------------------------------------------------------------


def test_qapa_window_one_equals_nlms():
    xs, ds, _ = system_id_data(np.random.default_rng(2), 4, 300, "hermitian")
    st = qapa_init(4, 0.5, 1, 1e-12)
    w = QMatrix.zeros(4, 1)
    for x, d in zip(xs, ds):
        qapa_step(st, x, QMatrix.scalar(d))
        w, e = nlms_step(w, x, d, 0.5, 1e-12)
        assert frob_norm(w - st.w) <= 1e-12
        assert abs(e - st.history[-1]) <= 1e-12


def test_qapa_exact_projection(rng):
    for S in (1, 2, 3, 5):
        st = qapa_init(5, 1.0, S, 0.0)
        st.weights[0] = QMatrix.random(rng, 5, 1)
        Qw, d = QMatrix.random(rng, 5, S), QMatrix.random(rng, S, 1)
        qapa_step(st, Qw, d)
        assert frob_norm(d.T - st.w.H @ Qw) <= 1e-9


def test_qapa_zero_error_and_singular(rng):
    st = qapa_init(3, 1.0, 2, 0.0)
    st.weights[0] = QMatrix.random(rng, 3, 1)
    Qw = QMatrix.random(rng, 3, 2)
    w0 = st.w
    qapa_step(st, Qw, (w0.H @ Qw).T)
    assert st.w.allclose(w0, atol=1e-14)
    x = QMatrix.random(rng, 3, 1)
    dup = QMatrix(np.concatenate([x.data, x.data], axis=1))
    with pytest.raises(SingularError):
        qapa_step(st, dup, QMatrix.random(rng, 2, 1))
    st.eps = 1e-3
    qapa_step(st, dup, QMatrix.random(rng, 2, 1))
    with pytest.raises(ShapeError):
        qapa_step(st, Qw, QMatrix.random(rng, 3, 1))


# least squares ------------------------------------------------------------------------------


def test_lsq_identity_problem(rng):
    C = QMatrix.random(rng, 3, 2)
    assert lsq_solve(LsqProblem(eye(3), eye(2), C)).allclose(C, atol=1e-14)


def test_lsq_scalar_problem():
    p = LsqProblem(QMatrix.scalar(I), QMatrix.scalar(J), QMatrix.scalar(K))
    ref = I.conj() * K * J.conj()  # |i|^2 = |j|^2 = 1
    assert abs(lsq_solve(p).item() - ref) <= 1e-15


def test_lsq_recovers_planted(rng):
    A, B, Q0 = QMatrix.random(rng, 5, 3), QMatrix.random(rng, 2, 4), QMatrix.random(rng, 3, 2)
    p = LsqProblem(A, B, A @ Q0 @ B)
    Q = lsq_solve(p)
    assert frob_norm(Q - Q0) <= 1e-9
    assert normal_equation_residual(p, Q) <= 1e-9
    assert frob_norm(lsq_gradient(p, Q)) <= 1e-8


def test_lsq_gradient_matches_oracle(rng):
    p = random_lsq(rng)
    f = lsq_objective(p)
    for _ in range(5):
        Q = QMatrix.random(rng, 2, 3)
        assert relative_error(f.jac(Q, conjugate=True), jacobian(f.evaluate, Q, conjugate=True)) <= 1e-6
        assert relative_error(f.jac(Q), jacobian(f.evaluate, Q)) <= 1e-6


def test_lsq_names_singular_factor(rng):
    A = QMatrix.random(rng, 3, 1) @ QMatrix.random(rng, 1, 2)
    p = LsqProblem(A, QMatrix.random(rng, 2, 3), QMatrix.random(rng, 3, 3))
    assert not p.solvable
    with pytest.raises(SingularError, match="A\\^H A"):
        lsq_solve(p)
    B = QMatrix.random(rng, 2, 1) @ QMatrix.random(rng, 1, 3)
    with pytest.raises(SingularError, match="B B\\^H"):
        lsq_solve(LsqProblem(QMatrix.random(rng, 3, 2), B, QMatrix.random(rng, 3, 3)))
    with pytest.raises(ShapeError):
        LsqProblem(eye(2), eye(2), QMatrix.zeros(3, 2))


# signals ------------------------------------------------------------------------------------


def test_generators_are_seeded():
    a = system_id_data(np.random.default_rng(5), 3, 50, signal="ar1")
    b = system_id_data(np.random.default_rng(5), 3, 50, signal="ar1")
    assert all(x == y for x, y in zip(a[0], b[0])) and a[1] == b[1]


def test_tap_inputs_delay_line():
    s = np.arange(12, dtype=float).reshape(3, 4)
    xs = tap_inputs(s, 2)
    assert xs[0][1, 0] == Quaternion(0.0)
    assert xs[2][0, 0] == Quaternion(8, 9, 10, 11) and xs[2][1, 0] == Quaternion(4, 5, 6, 7)
    assert ar1_signal(np.random.default_rng(0), 10).shape == (10, 4)
