"""Dense complex-matrix primitives.

All bipartite operations use the ordered product basis |i,k> = |i> (x) |k>,
i.e. row index ``i * d2 + k``.
"""
from dataclasses import dataclass

import numpy as np
import scipy.linalg

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class SvdResult:
    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.u * self.sigma) @ self.v.conj().T


@dataclass(frozen=True)
class TakagiResult:
    v: np.ndarray
    sigma: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.v * self.sigma) @ self.v.T


def _square(m, name="matrix"):
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    return m


def is_hermitian(m, tol=DEFAULT_TOL) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and np.allclose(m, m.conj().T, rtol=0, atol=tol)


def is_symmetric(m, tol=DEFAULT_TOL) -> bool:
    m = np.asarray(m)
    return m.ndim == 2 and m.shape[0] == m.shape[1] and np.allclose(m, m.T, rtol=0, atol=tol)


def is_unitary(m, tol=DEFAULT_TOL) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return np.allclose(m @ m.conj().T, np.eye(m.shape[0]), rtol=0, atol=tol)


def is_psd(m, tol=DEFAULT_TOL) -> bool:
    if not is_hermitian(m, tol):
        return False
    return np.linalg.eigvalsh(0.5 * (m + m.conj().T)).min() >= -tol


def kron(a, b) -> np.ndarray:
    return np.kron(np.asarray(a), np.asarray(b))


def _bipartite(m, d1, d2):
    m = np.asarray(m)
    n = d1 * d2
    if m.shape != (n, n):
        raise ValueError(f"expected a {n}x{n} matrix for dims ({d1}, {d2}), got {m.shape}")
    return m.reshape(d1, d2, d1, d2)


def partial_trace(m, d1: int, d2: int, subsystem: int) -> np.ndarray:
    """Trace out ``subsystem`` (1 or 2) of an operator on C^d1 (x) C^d2."""
    t = _bipartite(m, d1, d2)
    if subsystem == 1:
        return np.einsum("ikil->kl", t)
    if subsystem == 2:
        return np.einsum("ikjk->ij", t)
    raise ValueError("subsystem must be 1 or 2")


def partial_transpose(m, d1: int, d2: int, subsystem: int) -> np.ndarray:
    t = _bipartite(m, d1, d2)
    if subsystem == 1:
        t = t.transpose(2, 1, 0, 3)
    elif subsystem == 2:
        t = t.transpose(0, 3, 2, 1)
    else:
        raise ValueError("subsystem must be 1 or 2")
    return t.reshape(d1 * d2, d1 * d2)


def flip_operator(d: int) -> np.ndarray:
    """Swap |k,l> -> |l,k> on C^d (x) C^d."""
    if d < 1:
        raise ValueError("d must be >= 1")
    f = np.zeros((d, d, d, d))
    idx = np.arange(d)
    f[idx[:, None], idx[None, :], idx[None, :], idx[:, None]] = 1.0
    return f.reshape(d * d, d * d)


def omega_vector(d: int) -> np.ndarray:
    return np.eye(d).reshape(d * d) / np.sqrt(d)


def omega_projector(d: int) -> np.ndarray:
    """|Omega><Omega| for the maximally entangled vector (1/sqrt d) sum_j |j,j>."""
    w = omega_vector(d)
    return np.outer(w, w).astype(complex)


def svd(m) -> SvdResult:
    u, s, vh = np.linalg.svd(np.asarray(m))
    return SvdResult(u=u, sigma=s, v=vh.conj().T)


def singular_values(m) -> np.ndarray:
    return np.linalg.svd(np.asarray(m), compute_uv=False)


def takagi(a, tol=DEFAULT_TOL, cluster_tol=1e-8) -> TakagiResult:
    """Takagi factorization ``a = V diag(sigma) V^T`` of a complex-symmetric matrix.

    Starts from ``a = U S W^dagger``. Symmetry makes ``conj(W)`` another left
    singular basis, so inside each cluster of equal positive singular values
    ``conj(W_c) = U_c Q_c`` with ``Q_c`` symmetric unitary, and ``U_c sqrt(Q_c)``
    is a Takagi basis for that cluster. Columns belonging to zero singular
    values are taken from ``U`` directly.
    """
    a = _square(a)
    if not is_symmetric(a, tol):
        raise ValueError("takagi requires a complex-symmetric matrix")
    a = 0.5 * (a + a.T)
    u, s, wh = np.linalg.svd(a)
    w_conj = wh.T  # conj(W)
    n = a.shape[0]
    v = np.array(u, dtype=complex)
    scale = s[0] if n and s[0] > 0 else 1.0
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and s[start] - s[stop] <= cluster_tol * scale:
            stop += 1
        if s[start] > cluster_tol * scale:
            uc = u[:, start:stop]
            q = uc.conj().T @ w_conj[:, start:stop]
            v[:, start:stop] = uc @ _symmetric_unitary_sqrt(0.5 * (q + q.T))
        start = stop
    return TakagiResult(v=v, sigma=s)


def _symmetric_unitary_sqrt(q):
    # Re q and Im q are commuting real symmetric matrices, so q = O diag(l) O^T
    # with O real orthogonal; O diag(sqrt l) O^T is symmetric for any branch.
    if q.shape[0] == 1:
        return np.sqrt(q.astype(complex))
    mix = q.real + (1 / np.e) * q.imag
    _, o = np.linalg.eigh(mix)
    lam = o.T @ q @ o
    if np.abs(lam - np.diag(np.diag(lam))).max() > 1e-9:
        return scipy.linalg.sqrtm(q)
    return (o * np.sqrt(np.diag(lam))) @ o.T


def unitary_from_hermitian(x, tol=DEFAULT_TOL) -> np.ndarray:
    """exp(i x) for Hermitian x, via the eigendecomposition."""
    x = _square(x)
    if not is_hermitian(x, tol):
        raise ValueError("unitary_from_hermitian requires a Hermitian matrix")
    evals, evecs = np.linalg.eigh(0.5 * (x + x.conj().T))
    return (evecs * np.exp(1j * evals)) @ evecs.conj().T


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary: QR of a complex Ginibre matrix, R diagonal made positive."""
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return 0.5 * (z + z.conj().T)


def sym_part(u) -> np.ndarray:
    u = np.asarray(u)
    return 0.5 * (u + u.T)


def trace_norm(m) -> float:
    return float(singular_values(m).sum())
