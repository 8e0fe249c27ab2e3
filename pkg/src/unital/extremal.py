"""Extremality of channels within all channels and within unital channels."""
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .channels import ChoiState, KrausChannel, choi_to_kraus, kraus_to_choi


@dataclass(frozen=True)
class ExtremalityReport:
    n_kraus: int
    rank_full: int
    rank_unital: int
    extremal_in_all: bool
    extremal_in_unital: bool
    min_gram_eig_full: float
    min_gram_eig_unital: float

    def to_dict(self) -> dict:
        return {
            "n_kraus": self.n_kraus,
            "rank_full": self.rank_full,
            "rank_unital": self.rank_unital,
            "extremal_in_all": self.extremal_in_all,
            "extremal_in_unital": self.extremal_in_unital,
            "min_gram_eig_full": self.min_gram_eig_full,
            "min_gram_eig_unital": self.min_gram_eig_unital,
        }


def _gram_rank(vectors: np.ndarray, tol: float):
    gram = vectors @ vectors.conj().T
    evals = np.linalg.eigvalsh(0.5 * (gram + gram.conj().T))
    top = evals.max(initial=0.0)
    if top <= 0:
        return 0, 0.0
    return int(np.sum(evals > tol * top)), float(evals.min())


def extremality_test(ch: KrausChannel, tol: float = 1e-8, reduce: bool = False) -> ExtremalityReport:
    """Rank tests on {A_k^dag A_l} and {A_k^dag A_l (+) A_l A_k^dag}.

    The Kraus operators must be linearly independent; pass ``reduce=True`` to
    replace a redundant set by the minimal one from the Choi eigendecomposition.
    """
    kraus = np.stack(ch.kraus)
    n = len(kraus)
    k_rank, _ = _gram_rank(kraus.reshape(n, -1), tol)
    if k_rank < n:
        if not reduce:
            raise ValueError(f"Kraus operators are linearly dependent ({k_rank} of {n} independent)")
        ch = choi_to_kraus(kraus_to_choi(ch))
        kraus = np.stack(ch.kraus)
        n = len(kraus)

    kd = kraus.conj().transpose(0, 2, 1)
    left = np.einsum("kab,lbc->klac", kd, kraus).reshape(n * n, -1)  # A_k^dag A_l
    right = np.einsum("lab,kbc->klac", kraus, kd).reshape(n * n, -1)  # A_l A_k^dag
    rank_full, min_full = _gram_rank(left, tol)
    rank_unital, min_unital = _gram_rank(np.hstack([left, right]), tol)
    return ExtremalityReport(
        n_kraus=n,
        rank_full=rank_full,
        rank_unital=rank_unital,
        extremal_in_all=rank_full == n * n,
        extremal_in_unital=rank_unital == n * n,
        min_gram_eig_full=min_full,
        min_gram_eig_unital=min_unital,
    )


# -- a unital-extremal channel that is not extremal among all channels --------

_ROOT_SPECS = {
    # name: (coefficients, highest degree first; index among the sorted real roots)
    "mu1_squared_times_36": ([3.0, -66.0, 312.0, -356.0], 0),
    "mu2": ([2592.0, 432.0, 0.0, -1.0], 0),
    "mu4": ([18.0, 0.0, -6.0, 1.0], 1),
    "alpha": ([6561.0, -78003.0, 163107.0, -25957.0], 0),
}


def _real_root(coeffs, index: int) -> float:
    roots = np.roots(coeffs)
    real = np.sort(roots.real[np.abs(roots.imag) < 1e-8])
    guess = real[index]
    poly = np.poly1d(coeffs)
    gaps = np.diff(real)
    width = 0.25 * (gaps.min() if len(gaps) else 1.0)
    lo, hi = guess - width, guess + width
    return float(brentq(poly, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=200))


def example_mu() -> tuple:
    """(mu1, mu2, mu3, mu4) as the designated real roots of their cubics."""
    mu1 = np.sqrt(_real_root(*_ROOT_SPECS["mu1_squared_times_36"])) / 6.0
    mu2 = _real_root(*_ROOT_SPECS["mu2"])
    mu3 = 1.0 / 6.0
    mu4 = _real_root(*_ROOT_SPECS["mu4"])
    return mu1, mu2, mu3, mu4


def example_alpha() -> float:
    return _real_root(*_ROOT_SPECS["alpha"])


def example_x(mu=None) -> np.ndarray:
    m1, m2, m3, m4 = example_mu() if mu is None else mu
    i = 1j
    x = np.array(
        [
            [0.5, 0, -i * m1, i * m3, i * m4, 0],
            [0, 0.5, -i * m1, -i * m4, -(2 + i) * m3, 0],
            [i * m1, i * m1, 0.5, 0, 0, 2 * m2 + i * m3],
            [-i * m3, i * m4, 0, 0.5, 0, -i * m1],
            [-i * m4, (i - 2) * m3, 0, 0, 0.5, i * m1],
            [0, 0, 2 * m2 - i * m3, i * m1, -i * m1, 0.5],
        ],
        dtype=complex,
    )
    return x / 3.0


def example_psi() -> np.ndarray:
    """Columns psi_1..psi_6 spanning the complement of span{|kk>} in C^3 (x) C^3."""

    def ket(k, l):
        v = np.zeros(9, dtype=complex)
        v[3 * k + l] = 1.0
        return v

    pairs = [(0, 1), (0, 2), (1, 2)]
    sym = [(ket(a, b) + ket(b, a)) / np.sqrt(2) for a, b in pairs]
    anti = [(ket(a, b) - ket(b, a)) / (np.sqrt(2) * 1j) for a, b in pairs]
    return np.stack(sym + anti, axis=1)


def example_choi() -> ChoiState:
    psi = example_psi()
    return ChoiState(3, psi @ example_x() @ psi.conj().T)


def example_channel() -> KrausChannel:
    """The d=3 channel with four Kraus operators, extremal among unital channels only."""
    return choi_to_kraus(example_choi())
