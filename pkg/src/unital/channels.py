"""Channel representations, conversions and the two constructive representations
of unital channels (Hilbert-Schmidt contractions and affine unitary combinations).

Choi convention: rho_T = (id (x) T)(|Omega><Omega|), so the *second* tensor
factor is the channel output. Superoperators act on row-major vectorized
operators, vec(A X B) = (A (x) B^T) vec(X).
"""
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    haar_unitary,
    is_psd,
    is_unitary,
    partial_trace,
    svd,
)


@dataclass(frozen=True)
class KrausChannel:
    d: int
    kraus: tuple

    def __post_init__(self):
        ops = tuple(np.asarray(a, dtype=complex) for a in self.kraus)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        for a in ops:
            if a.shape != (self.d, self.d):
                raise ValueError(f"Kraus operator shape {a.shape} does not match d={self.d}")
        object.__setattr__(self, "kraus", ops)

    def __call__(self, rho):
        return sum(a @ rho @ a.conj().T for a in self.kraus)

    def compose(self, other: "KrausChannel") -> "KrausChannel":
        """self after other."""
        return KrausChannel(self.d, tuple(a @ b for a in self.kraus for b in other.kraus))


@dataclass(frozen=True)
class ChoiState:
    d: int
    rho: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=complex)
        if rho.shape != (self.d**2, self.d**2):
            raise ValueError(f"Choi matrix must be {self.d**2}x{self.d**2}, got {rho.shape}")
        object.__setattr__(self, "rho", rho)

    @classmethod
    def from_matrix(cls, rho) -> "ChoiState":
        rho = np.asarray(rho)
        d = int(round(np.sqrt(rho.shape[0])))
        if d * d != rho.shape[0]:
            raise ValueError(f"Choi matrix dimension {rho.shape[0]} is not a square")
        return cls(d, rho)


@dataclass(frozen=True)
class MixtureOfUnitaries:
    weights: np.ndarray
    unitaries: tuple

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if np.any(w <= 0) or abs(w.sum() - 1) > DEFAULT_TOL:
            raise ValueError("weights must be positive and sum to one")
        if len(w) != len(self.unitaries):
            raise ValueError("one weight per unitary")
        for u in self.unitaries:
            if not is_unitary(u):
                raise ValueError("mixture component is not unitary")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "unitaries", tuple(np.asarray(u, dtype=complex) for u in self.unitaries))

    def to_kraus(self) -> KrausChannel:
        d = self.unitaries[0].shape[0]
        return KrausChannel(d, tuple(np.sqrt(p) * u for p, u in zip(self.weights, self.unitaries)))


@dataclass(frozen=True)
class AffineUnitaryCombo:
    """T = sum_i lambda_i U_i . U_i^dagger with real lambdas summing to one."""

    coefficients: np.ndarray
    unitaries: tuple
    residual: float = field(default=0.0)

    def superoperator(self) -> np.ndarray:
        return sum(c * unitary_superoperator(u) for c, u in zip(self.coefficients, self.unitaries))


# -- standard channels -------------------------------------------------------


def identity_channel(d: int) -> KrausChannel:
    return KrausChannel(d, (np.eye(d),))


def unitary_channel(u) -> KrausChannel:
    u = np.asarray(u)
    return KrausChannel(u.shape[0], (u,))


def werner_holevo_channel(d: int) -> KrausChannel:
    """T(rho) = (tr[rho] 1 - rho^T) / (d - 1)."""
    if d < 2:
        raise ValueError("Werner-Holevo channel needs d >= 2")
    ops = []
    for j in range(d):
        for k in range(j + 1, d):
            a = np.zeros((d, d))
            a[j, k], a[k, j] = 1.0, -1.0
            ops.append(a / np.sqrt(d - 1))
    return KrausChannel(d, tuple(ops))


def depolarizing_channel(d: int) -> KrausChannel:
    """Completely depolarizing channel T(rho) = tr[rho] 1/d."""
    ops = []
    for i in range(d):
        for j in range(d):
            a = np.zeros((d, d))
            a[i, j] = 1.0 / np.sqrt(d)
            ops.append(a)
    return KrausChannel(d, tuple(ops))


def reset_channel(d: int) -> KrausChannel:
    """T(rho) = tr[rho] |0><0|: CPTP but not unital."""
    ops = []
    for j in range(d):
        a = np.zeros((d, d))
        a[0, j] = 1.0
        ops.append(a)
    return KrausChannel(d, tuple(ops))


def random_mixture_of_unitaries(d: int, n: int, rng: np.random.Generator) -> MixtureOfUnitaries:
    w = rng.dirichlet(np.ones(n))
    return MixtureOfUnitaries(w, tuple(haar_unitary(d, rng) for _ in range(n)))


def random_unital_channel(d: int, rng: np.random.Generator, n_unitaries: int = 3) -> KrausChannel:
    """A generic unital channel, generally outside the mixtures of unitaries for d >= 3.

    Mixes a randomly rotated Werner-Holevo channel with a random mixture of
    unitary conjugations.
    """
    p = rng.uniform(0.2, 0.9)
    wh = werner_holevo_channel(d)
    rotated = unitary_channel(haar_unitary(d, rng)).compose(wh).compose(unitary_channel(haar_unitary(d, rng)))
    mix = random_mixture_of_unitaries(d, n_unitaries, rng).to_kraus()
    ops = [np.sqrt(p) * a for a in rotated.kraus] + [np.sqrt(1 - p) * a for a in mix.kraus]
    return KrausChannel(d, tuple(ops))


# -- representations ---------------------------------------------------------


def kraus_to_choi(ch: KrausChannel, tol=DEFAULT_TOL) -> ChoiState:
    if not is_tp(ch, tol):
        warnings.warn("channel is not trace-preserving", RuntimeWarning, stacklevel=2)
    d = ch.d
    # (1 (x) A)|Omega> has components A[i, j] / sqrt(d) at index j*d + i
    vecs = np.stack([a.T.reshape(d * d) for a in ch.kraus]) / np.sqrt(d)
    rho = vecs.T @ vecs.conj()
    return ChoiState(d, rho)


def choi_to_kraus(state: ChoiState, rank_tol: float = 1e-10, tol=DEFAULT_TOL) -> KrausChannel:
    rho = 0.5 * (state.rho + state.rho.conj().T)
    evals, evecs = np.linalg.eigh(rho)
    if evals.min() < -tol:
        raise ValueError(f"Choi matrix has negative eigenvalue {evals.min():.3e}")
    d = state.d
    keep = evals > rank_tol
    ops = tuple(
        np.sqrt(d * lam) * v.reshape(d, d).T for lam, v in zip(evals[keep][::-1], evecs[:, keep].T[::-1])
    )
    return KrausChannel(d, ops)


def superoperator(ch: KrausChannel) -> np.ndarray:
    return sum(np.kron(a, a.conj()) for a in ch.kraus)


def unitary_superoperator(u) -> np.ndarray:
    u = np.asarray(u)
    return np.kron(u, u.conj())


def _as_choi(obj) -> ChoiState:
    if isinstance(obj, ChoiState):
        return obj
    if isinstance(obj, KrausChannel):
        return kraus_to_choi(obj, tol=np.inf)
    raise TypeError(f"expected KrausChannel or ChoiState, got {type(obj).__name__}")


def is_tp(obj, tol=DEFAULT_TOL) -> bool:
    if isinstance(obj, KrausChannel):
        s = sum(a.conj().T @ a for a in obj.kraus)
        return bool(np.allclose(s, np.eye(obj.d), rtol=0, atol=tol))
    st = _as_choi(obj)
    return bool(np.allclose(partial_trace(st.rho, st.d, st.d, 2), np.eye(st.d) / st.d, rtol=0, atol=tol))


def is_unital(obj, tol=DEFAULT_TOL) -> bool:
    """Unital in the doubly-stochastic sense: trace-preserving and T(1) = 1."""
    if isinstance(obj, KrausChannel):
        s = sum(a @ a.conj().T for a in obj.kraus)
        return is_tp(obj, tol) and bool(np.allclose(s, np.eye(obj.d), rtol=0, atol=tol))
    st = _as_choi(obj)
    return is_tp(st, tol) and bool(
        np.allclose(partial_trace(st.rho, st.d, st.d, 1), np.eye(st.d) / st.d, rtol=0, atol=tol)
    )


def is_cp(obj, tol=DEFAULT_TOL) -> bool:
    if isinstance(obj, KrausChannel):
        return True
    return is_psd(_as_choi(obj).rho, tol)


def pauli_basis(d: int) -> list:
    """Embedded Pauli matrices: sigma_x^{jk}, sigma_y^{jk} (j < k) and sigma_z^j.

    Together they form a (non-orthogonal) basis of the traceless Hermitian d x d matrices.
    """
    basis = []
    for j in range(d):
        for k in range(j + 1, d):
            x = np.zeros((d, d), dtype=complex)
            x[j, k] = x[k, j] = 1
            basis.append(x)
    for j in range(d):
        for k in range(j + 1, d):
            y = np.zeros((d, d), dtype=complex)
            y[j, k], y[k, j] = -1j, 1j
            basis.append(y)
    for j in range(d - 1):
        z = np.zeros((d, d), dtype=complex)
        z[j, j], z[j + 1, j + 1] = 1, -1
        basis.append(z)
    return basis


# -- constructive representations -------------------------------------------


def hs_contraction_decomposition(t, tol=DEFAULT_TOL):
    """Write a contraction t as the average of two unitaries W+ and W-.

    With t = U D V^dagger, W+- = U (D +- i sqrt(1 - D^2)) V^dagger. Returns
    ``(weights, (w_plus, w_minus))`` with weights (1/2, 1/2).
    """
    res = svd(t)
    if res.sigma.max(initial=0.0) > 1 + tol:
        raise ValueError(f"not a contraction: operator norm {res.sigma.max():.12g}")
    dd = np.clip(res.sigma, 0.0, 1.0)
    comp = np.sqrt(1.0 - dd**2)
    vh = res.v.conj().T
    w_plus = (res.u * (dd + 1j * comp)) @ vh
    w_minus = (res.u * (dd - 1j * comp)) @ vh
    return np.array([0.5, 0.5]), (w_plus, w_minus)


def affine_unitary_decomposition(
    ch: KrausChannel,
    generator_count: int | None = None,
    seed: int = 0,
    generators: Sequence[np.ndarray] | None = None,
    max_retries: int = 5,
    residual_tol: float = 1e-8,
) -> AffineUnitaryCombo:
    """Affine combination of unitary conjugations reproducing a unital channel.

    The identity conjugation is always generator 0 and absorbs the affine
    constraint: T = id + sum_{i>0} lambda_i (U_i . U_i^dagger - id), so the
    coefficients sum to one by construction. Haar-random conjugations
    generically span every linear map on the traceless Hermitian matrices;
    should that ever fail, the explicit spanning family built from
    block-diagonal unitaries diag(1_2, -1), diag(sigma_y, 1), diag(sigma_z, 1)
    and basis permutations is the documented fallback.
    """
    if not is_unital(ch):
        raise ValueError("affine decomposition requires a unital channel")
    d = ch.d
    target = superoperator(ch)
    eye = np.eye(d * d)
    span_dim = (d * d - 1) ** 2
    rng = np.random.default_rng(seed)
    if generator_count is None:
        generator_count = span_dim + 2
    for _ in range(max_retries):
        if generators is not None:
            us = [np.asarray(u, dtype=complex) for u in generators]
        else:
            us = [haar_unitary(d, rng) for _ in range(generator_count)]
        cols = np.stack([(unitary_superoperator(u) - eye).ravel() for u in us], axis=1)
        a = np.vstack([cols.real, cols.imag])
        b = np.concatenate([(target - eye).ravel().real, (target - eye).ravel().imag])
        lam, _, rank, _ = np.linalg.lstsq(a, b, rcond=None)
        if generators is None and rank < span_dim:
            continue
        coeffs = np.concatenate([[1.0 - lam.sum()], lam])
        unitaries = (np.eye(d, dtype=complex), *us)
        combo = AffineUnitaryCombo(coeffs, unitaries)
        residual = float(np.abs(combo.superoperator() - target).max())
        if residual < residual_tol:
            return AffineUnitaryCombo(coeffs, unitaries, residual)
        if generators is not None:
            break
    raise ValueError("could not find a spanning family of unitary conjugations")
