import numpy as np
import pytest

from unital import optimize as op
from unital.covariant import m_curve
from unital.linalg import haar_unitary, random_hermitian, singular_values, unitary_from_hermitian


def fd_directional(obj, u, h, step=1e-6):
    """Central difference of f along U -> exp(i t H) U."""
    fp, _ = obj.value_and_grad(unitary_from_hermitian(step * h) @ u)
    fm, _ = obj.value_and_grad(unitary_from_hermitian(-step * h) @ u)
    return (fp - fm) / (2 * step)


def analytic_directional(obj, u, h):
    # dU = i H U, df = 2 Re tr[G^dag dU]
    _, g = obj.value_and_grad(u)
    return 2 * np.trace(g.conj().T @ (1j * h @ u)).real


@pytest.mark.parametrize(
    "obj",
    [op.tr_u_ubar_t2(3, 2), op.tr_usym_pt(3, 3), op.tr_b_ubar(np.diag([3.0, 2.0, 0.5]))],
    ids=lambda o: o.name,
)
def test_gradient_matches_finite_differences(obj):
    rng = np.random.default_rng(0)
    for _ in range(20):
        u = haar_unitary(obj.n, rng)
        h = random_hermitian(obj.n, rng)
        a, f = analytic_directional(obj, u, h), fd_directional(obj, u, h)
        assert abs(a - f) <= 1e-6 * max(1.0, abs(a))


def test_min_tr_a_abar_examples():
    assert op.min_tr_a_abar([1, 1, 1])[0] == pytest.approx(-1)
    assert op.min_tr_a_abar([1, 1, 1, 1])[0] == pytest.approx(-4)
    val, a = op.min_tr_a_abar([3, 2, 1])
    assert val == pytest.approx(-11)
    aa = a @ a.conj()
    assert np.allclose(aa, aa.conj().T)
    assert np.trace(aa).real == pytest.approx(val, abs=1e-12)
    assert np.allclose(singular_values(a), [3, 2, 1])
    with pytest.raises(ValueError):
        op.min_tr_a_abar([1, 2])


def test_attainable_examples():
    s = [3.0, 2.0, 1.0]
    val, a = op.attainable_tr_a_abar(s, [0, 1, 2], 2, [0])
    assert val == pytest.approx(2 * 3 * 2 + 1)
    assert np.trace(a @ a.conj()).real == pytest.approx(val)
    val, a = op.attainable_tr_a_abar(s, [0, 1, 2], 0, [])
    assert val == pytest.approx(sum(x * x for x in s))
    # the zero-product case needs blocks pairing each unit value with a zero
    val, a = op.attainable_tr_a_abar([1, 1, 0, 0], [0, 2, 1, 3], 4, [0, 1])
    assert val == pytest.approx(0.0)
    assert np.trace(a @ a.conj()).real == pytest.approx(0.0)
    with pytest.raises(ValueError):
        op.attainable_tr_a_abar(s, [0, 1, 2], 1, [])
    with pytest.raises(ValueError):
        op.attainable_tr_a_abar(s, [0, 1, 2], 4, [0, 0])


def test_attainable_random_permutations():
    rng = np.random.default_rng(1)
    for _ in range(20):
        d = rng.integers(2, 7)
        s = np.sort(rng.uniform(0, 2, d))[::-1]
        tau = rng.permutation(d)
        r = 2 * rng.integers(0, d // 2 + 1)
        signs = list(rng.integers(0, 2, r // 2))
        val, a = op.attainable_tr_a_abar(s, tau, r, signs)
        assert np.trace(a @ a.conj()).real == pytest.approx(val, abs=1e-12)
        assert np.allclose(np.sort(singular_values(a)), np.sort(s))
        assert val >= op.min_tr_a_abar(s)[0] - 1e-12


def test_max_abs_trace_given_x():
    assert op.max_abs_trace_given_x(1.0, 3)[0] == pytest.approx(3)
    assert op.max_abs_trace_given_x(-1 / 3, 3)[0] == pytest.approx(1)
    val, u = op.max_abs_trace_given_x(0.2, 5)
    assert abs(np.trace(u)) == pytest.approx(val, abs=1e-10)
    assert np.trace(u @ u.conj()).real / 5 == pytest.approx(0.2, abs=1e-10)
    assert val == pytest.approx(5 * m_curve(0.2, 5))


def test_u2_identity():
    assert op.u2_symmetric_trace_norm_identity(np.eye(2)) == pytest.approx((2, 2))
    lhs, rhs = op.u2_symmetric_trace_norm_identity(np.array([[0, 1], [-1, 0]], dtype=complex))
    assert lhs == pytest.approx(0, abs=1e-12) and rhs == pytest.approx(0, abs=1e-7)
    rng = np.random.default_rng(2)
    worst = max(abs(np.subtract(*op.u2_symmetric_trace_norm_identity(haar_unitary(2, rng)))) for _ in range(100))
    assert worst < 1e-10
    with pytest.raises(ValueError):
        op.u2_symmetric_trace_norm_identity(np.eye(3))
    with pytest.raises(ValueError):
        op.u2_symmetric_trace_norm_identity(2 * np.eye(2))


def test_manifold_minimize_small_cases():
    res = op.manifold_minimize(op.tr_u_ubar_t2(3, 1), restarts=5, seed=0)
    assert res.value == pytest.approx(-1 / 3, abs=1e-6)
    assert np.abs(res.minimizer @ res.minimizer.conj().T - np.eye(3)).max() < 1e-9
    res = op.manifold_minimize(op.tr_u_ubar_t2(3, 2), restarts=10, seed=0)
    assert res.value == pytest.approx(-7 / 9, abs=1e-4)


def test_symmetric_objective_reaches_theta_zero_value():
    res = op.manifold_minimize(op.tr_usym_pt(3, 3), restarts=10, seed=0)
    assert res.value == pytest.approx(-23 / 27, abs=1e-3)


def test_closed_form_dominance_d_equals_1():
    for d in (3, 5, 7):
        res = op.manifold_minimize(op.tr_u_ubar_t2(d, 1), restarts=5, seed=1)
        assert res.value >= -1 + 2 / d - 1e-6


def test_stationarity_when_gradient_small():
    for obj in (op.tr_u_ubar_t2(3, 2), op.tr_usym_pt(2, 2), op.tr_u_ubar_t2(3, 1)):
        res = op.manifold_minimize(obj, restarts=3, seed=2)
        assert res.grad_norm < 1e-7
        assert res.stationarity_residual < 1e-5
        u = res.minimizer
        if obj.name == "tr-u-ubar-t2":
            # Hermiticity defect of U conj(U)^{T2}, recomputed from scratch
            from unital.linalg import partial_transpose

            d2 = obj.n // 3
            m = u @ partial_transpose(u, 3, d2, 2).conj()
            assert np.linalg.norm(m - m.conj().T) < 1e-5


def test_minimize_deterministic():
    a = op.manifold_minimize(op.tr_u_ubar_t2(3, 2), restarts=3, seed=5)
    b = op.manifold_minimize(op.tr_u_ubar_t2(3, 2), restarts=3, seed=5)
    assert a.value == b.value and np.array_equal(a.minimizer, b.minimizer)


def test_make_objective():
    assert op.make_objective("tr-u-ubar-t2", 3, 2).n == 6
    assert op.make_objective("tr-usym-pt", 2).n == 4
    assert op.make_objective("tr-a-abar", 3, sigma=[1, 1, 1]).n == 3
    with pytest.raises(ValueError):
        op.make_objective("tr-a-abar", 3)
    with pytest.raises(ValueError):
        op.make_objective("nope", 3)
