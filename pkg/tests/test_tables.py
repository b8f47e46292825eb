import numpy as np
import pytest

from quatderiv import ConvergenceError, DomainError, HermitianError, I, J, K, ONE, QMatrix, Quaternion, ShapeError
from quatderiv.ghr import jacobian, relative_error
from quatderiv.qmatrix import commutation_matrix, eye, vec
from quatderiv.tables import (
    REGISTRY,
    entries,
    get_entry,
    power_series_jacobians,
    table4,
    table5,
    table6,
    table7,
    verify_entry,
    verify_table,
)

FLAGGED = {"T4:q* alpha q beta", "T5:q^H A q, A^H=A", "T6:Tr(Q^n), n=3", "T6:Tr(Q^-1)"}


def test_registry_counts():
    assert [len(entries(t)) for t in (4, 5, 6, 7)] == [36, 18, 28, 25]
    assert len(REGISTRY) == 107
    assert {e.id for e in entries() if e.corrected} == FLAGGED


@pytest.mark.parametrize("id", sorted(REGISTRY))
def test_row_against_oracle(id):
    rep = verify_entry(id, n_samples=4, seed=11)
    expected = "flagged_typo" if id in FLAGGED else "pass"
    assert rep.verdict == expected, rep.to_dict()


@pytest.mark.parametrize("id", sorted(FLAGGED))
def test_printed_forms_of_flagged_rows_really_fail(id):
    rep = verify_entry(id, n_samples=4, seed=3)
    assert max(rep.err_dq, rep.err_dqc) > 1e-3
    assert max(rep.corrected_err_dq, rep.corrected_err_dqc) <= 1e-6
    assert rep.note


def test_suspected_scalar_rows_pass_as_printed():
    for id in ("T4:(q*)^2", "T4:q^-1", "T4:(q*)^-1",
               "T4:(alpha q beta+lambda)/|alpha q beta+lambda|",
               "T4:(alpha q* beta+lambda)/|alpha q* beta+lambda|"):
        assert verify_entry(id, n_samples=6, seed=5).verdict == "pass"


def test_table4_values():
    q = Quaternion(1, 1, 1, 1)
    f, d, dc = table4("q*", q)
    assert d == Quaternion(-0.5) and dc == ONE
    _, d, _ = table4("|q|^2", q)
    assert d == Quaternion(0.5, -0.5, -0.5, -0.5)
    _, d, dc = table4("R(q)", q)
    assert d == Quaternion(0.25) and dc == Quaternion(0.25)


def test_table4_domain_errors():
    with pytest.raises(DomainError, match="V_q"):
        table4("|V_q|", Quaternion(2.0))
    with pytest.raises(DomainError):
        table4("q^-1", Quaternion(0.0))


def test_table5_values(rng):
    A = QMatrix.random(rng, 3, 3)
    A = (A + A.H) * 0.5
    q = QMatrix.random(rng, 3, 1)
    _, d, _ = table5("q^H A q, A^H=A", q, {"A": A})
    assert d.allclose(q.H @ A * 0.5, atol=1e-14)
    a = QMatrix.random(rng, 3, 1)
    _, d, _ = table5("a^T q beta", q, {"a": a, "beta": Quaternion(2.5)})
    assert d.allclose(a.T * 2.5, atol=1e-14)
    with pytest.raises(HermitianError):
        table5("q^H A q, A^H=A", q, {"A": QMatrix.random(rng, 3, 3)})
    with pytest.raises(ShapeError):
        table5("a^T q beta", QMatrix.random(rng, 3, 2), {"a": a, "beta": ONE})


def test_table6_values(rng):
    Q = QMatrix.random(rng, 3, 3)
    _, d, dc = table6("Tr(Q)", Q)
    assert d == eye(3) and dc == eye(3) * -0.5
    A = QMatrix.random(rng, 3, 3)
    _, _, dc = table6("Tr(AQ^H)", Q, {"A": A})
    assert dc.allclose(A, atol=0)


def test_trace_inverse_at_diagonal_point():
    Q = QMatrix.from_quaternions([[Quaternion(1, 1, 0, 0), Quaternion(0.0)],
                                  [Quaternion(0.0), Quaternion(2.0)]])
    f = lambda X: QMatrix.scalar(table6("Tr(Q^-1)", X)[0].item())  # noqa: E731
    _, d, dc = table6("Tr(Q^-1)", Q, corrected=True)
    assert relative_error(vec(d).T, jacobian(f, Q), ) <= 1e-8
    assert relative_error(vec(dc).T, jacobian(f, Q, conjugate=True)) <= 1e-8


def test_table7_values(rng):
    Q = QMatrix.random(rng, 2, 3)
    _, d, dc = table7("Q", Q)
    assert d == eye(6) and dc == eye(6) * -0.5
    _, _, dc = table7("Q^H", Q)
    assert dc == commutation_matrix(2, 3)
    Q = QMatrix.random(rng, 2, 2)
    F, d, dc = table7("QAQ^H", Q, {"A": eye(2)})
    ref = lambda X: X @ X.H  # noqa: E731
    assert relative_error(d, jacobian(ref, Q)) <= 1e-7
    assert relative_error(dc, jacobian(ref, Q, conjugate=True)) <= 1e-7


def test_gradient_form_matches_jacobian_form(rng):
    for e in entries(6):
        Q, p = e.sample(rng)
        if e.domain and e.domain(Q, p):
            continue
        _, d, dc = table6(e.id, Q, p, corrected=e.corrected is not None)
        f = lambda X: e.f(X, p)  # noqa: E731
        assert relative_error(vec(d).T, jacobian(f, Q)) <= 1e-6, e.id
        assert relative_error(vec(dc).T, jacobian(f, Q, conjugate=True)) <= 1e-6, e.id


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("N", [1, 2, 3])
def test_power_series_against_oracle(rng, n, N):
    Q = QMatrix.random(rng, N, N)
    d, dc = power_series_jacobians(n, Q)
    F = lambda X: X ** n  # noqa: E731
    assert relative_error(d, jacobian(F, Q)) <= 1e-6
    assert relative_error(dc, jacobian(F, Q, conjugate=True)) <= 1e-6


def test_power_series_special_cases(rng):
    d, _ = power_series_jacobians(1, QMatrix.random(rng, 2, 2))
    assert d == eye(4)
    d, _ = power_series_jacobians(2, QMatrix.scalar(I))
    assert d.item() == I  # q + R(q) at q = i
    q = Quaternion(0.3, -0.2, 0.5, 1.1)
    d, dc = power_series_jacobians(2, QMatrix.scalar(q))
    _, d4, dc4 = table4("q^2", q)
    assert abs(d.item() - d4) < 1e-14 and abs(dc.item() - dc4) < 1e-14
    d, _ = power_series_jacobians("exp", QMatrix.zeros(3, 3))
    assert d.allclose(eye(9), atol=1e-15)
    with pytest.raises(ShapeError):
        power_series_jacobians(2, QMatrix.random(rng, 2, 3))
    with pytest.raises(ConvergenceError):
        power_series_jacobians("exp", eye(2) * 200.0)


def test_exp_against_oracle(rng):
    Q = QMatrix.random(rng, 2, 2)
    d, dc = power_series_jacobians("exp", Q)
    F = lambda X: table7("exp(Q)", X)[0]  # noqa: E731
    assert relative_error(d, jacobian(F, Q)) <= 1e-6
    assert relative_error(dc, jacobian(F, Q, conjugate=True)) <= 1e-6


def test_scalar_specialization_across_tables(rng):
    alpha = Quaternion(*rng.uniform(-1, 1, 4))
    q = Quaternion(*rng.uniform(-1, 1, 4))
    Q, A = QMatrix.scalar(q), QMatrix.scalar(alpha)
    pairs = [
        (table7("AQ", Q, {"A": A}), table4("alpha q", q, {"alpha": alpha})),
        (table7("QA", Q, {"A": A}), table4("q beta", q, {"beta": alpha})),
        (table7("Q^H", Q), table4("q*", q)),
        (table7("Q^-1", Q), table4("q^-1", q)),
        (table6("Tr(Q)", Q), table4("q", q)),
        (table5("q^T A q", Q, {"A": A}), table4("q alpha q beta", q, {"alpha": alpha})),
    ]
    for (F, d, dc), (f4, d4, dc4) in pairs:
        assert abs(F.item() - f4) < 1e-13
        assert abs(d.item() - d4) < 1e-13 and abs(dc.item() - dc4) < 1e-13


def test_verify_table_sorted_and_deterministic():
    a = verify_table(4, n_samples=2, seed=9)
    b = verify_table(4, n_samples=2, seed=9)
    assert [r.id for r in a] == sorted(r.id for r in a)
    assert [r.to_dict() for r in a] == [r.to_dict() for r in b]


def test_unknown_row():
    with pytest.raises(KeyError):
        get_entry("T4:nope")
