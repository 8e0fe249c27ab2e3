import numpy as np
import pytest

from unital import witness as wt
from unital.covariant import covariant_family, rho_minus
from unital.linalg import flip_operator, haar_unitary, omega_projector, omega_vector, singular_values


def test_tight_constant_examples():
    assert wt.tight_constant(np.ones(3), 3) == pytest.approx(1 / 3, abs=1e-15)
    assert wt.tight_constant(np.ones(4), 4) == pytest.approx(1.0, abs=1e-15)
    assert wt.tight_constant([2, 1, 0], 3) == pytest.approx(4 / 3, abs=1e-15)


def test_tight_constant_errors():
    with pytest.raises(ValueError):
        wt.tight_constant([1, 2, 0], 3)
    with pytest.raises(ValueError):
        wt.tight_constant([1, 1], 3)
    with pytest.raises(ValueError):
        wt.tight_constant([1, -1], 2)


def test_flip_witness_examples():
    w3 = wt.flip_witness(np.eye(3))
    assert np.allclose(w3.matrix, flip_operator(3) + np.eye(9) / 3)
    assert wt.evaluate(w3, rho_minus(3)) == pytest.approx(-2 / 3, abs=1e-12)
    w4 = wt.flip_witness(np.eye(4))
    assert np.allclose(w4.matrix, flip_operator(4) + np.eye(16))
    assert np.linalg.eigvalsh(w4.matrix).min() > -1e-12
    w0 = wt.flip_witness(np.zeros((3, 3)))
    assert w0.w == 0 and np.array_equal(w0.matrix, np.zeros((9, 9)))


def test_evaluate_examples():
    w3 = wt.flip_witness(np.eye(3))
    assert wt.evaluate(w3, omega_projector(3)) == pytest.approx(4 / 3, abs=1e-12)
    for eps in np.linspace(0.01, 2 / 3, 7):
        assert wt.evaluate(w3, covariant_family(3, eps)) == pytest.approx(-eps, abs=1e-12)
    with pytest.raises(ValueError):
        wt.evaluate(w3, np.eye(4) / 4)


def test_oracle_examples():
    assert wt.min_tr_b_ubar_oracle(np.eye(3), trials=10, seed=0) == pytest.approx(-1 / 3, abs=1e-6)
    assert wt.min_tr_b_ubar_oracle(np.eye(2), trials=10, seed=0) == pytest.approx(-1.0, abs=1e-6)
    assert wt.min_tr_b_ubar_oracle(np.diag([2.0, 1.0, 0.0]), trials=10, seed=0) == pytest.approx(-4 / 3, abs=1e-3)


def test_witness_nonnegative_on_unitary_channels():
    rng = np.random.default_rng(0)
    for k in range(200):
        d = 2 + k % 4
        b = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        wit = wt.flip_witness(b)
        v = np.kron(np.eye(d), haar_unitary(d, rng)) @ omega_vector(d)
        assert wt.evaluate(wit, np.outer(v, v.conj())) >= -1e-9


def test_tight_constant_unitary_invariance():
    rng = np.random.default_rng(1)
    for d in (2, 3, 4, 5):
        b = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        a = haar_unitary(d, rng)
        lhs = wt.tight_constant(singular_values(b))
        rhs = wt.tight_constant(singular_values(b @ a.conj().T))
        assert lhs == pytest.approx(rhs, abs=1e-12)
