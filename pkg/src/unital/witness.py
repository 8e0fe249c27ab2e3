"""Flip-operator separation witnesses W = (1 (x) B) F (1 (x) B^dag) + w(B) 1."""
from dataclasses import dataclass

import numpy as np

from .channels import ChoiState
from .linalg import flip_operator, singular_values
from .optimize import manifold_minimize, tr_b_ubar


@dataclass(frozen=True)
class Witness:
    d: int
    b: np.ndarray
    w: float
    matrix: np.ndarray


def tight_constant(singular_values, d: int | None = None) -> float:
    """Smallest w making the flip ansatz non-negative on all mixtures of unitaries."""
    s = np.asarray(singular_values, dtype=float)
    if d is not None and len(s) != d:
        raise ValueError(f"expected {d} singular values, got {len(s)}")
    if np.any(s < 0) or np.any(np.diff(s) > 0):
        raise ValueError("singular values must be non-negative and non-increasing")
    d = len(s)
    total = 2.0 * float(np.sum(s[0 : d - 1 : 2] * s[1:d:2]))
    if d % 2:
        total -= float(s[-1] ** 2)
    return total / d


def flip_witness(b) -> Witness:
    b = np.asarray(b, dtype=complex)
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise ValueError("B must be square")
    d = b.shape[0]
    w = tight_constant(singular_values(b))
    lb = np.kron(np.eye(d), b)
    m = lb @ flip_operator(d) @ lb.conj().T + w * np.eye(d * d)
    return Witness(d, b, w, 0.5 * (m + m.conj().T))


def evaluate(wit: Witness, rho) -> float:
    """tr[W rho]; a negative value certifies that rho is not a mixture of unitaries."""
    m = rho.rho if isinstance(rho, ChoiState) else np.asarray(rho)
    if m.shape != wit.matrix.shape:
        raise ValueError(f"witness is {wit.matrix.shape}, state is {m.shape}")
    return float(np.trace(wit.matrix @ m).real)


def min_tr_b_ubar_oracle(b, trials: int = 50, seed: int = 0) -> float:
    """Numerical min over unitaries of tr[B^dag U B^T conj(U)] / d.

    Multi-start local descent, so the result can only sit above the true minimum.
    """
    return manifold_minimize(tr_b_ubar(b), restarts=trials, seed=seed).value
