"""Matrix optimization problems over the unitary group.

Closed forms for min tr[A conj(A)] at fixed singular values and for
max |tr U| at fixed tr[U conj(U)], and a first-order minimizer on U(n) used to
check them and to tabulate min tr[U conj(U)^{T2}].

The minimizer moves along U <- exp(-i eta Gamma) U where Gamma is the Hermitian
Riemannian gradient. For a real objective f with Wirtinger derivative
G = df/d conj(U) (so df = 2 Re tr[G^dag dU]), Gamma = i (M - M^dag) with
M = U G^dag.
"""
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import covariant
from .linalg import haar_unitary, partial_transpose, sym_part, trace_norm, unitary_from_hermitian

OBJECTIVES = ("tr-u-ubar-t2", "tr-usym-pt", "tr-a-abar")


@dataclass(frozen=True)
class OptimizeResult:
    value: float
    minimizer: np.ndarray
    restarts_used: int
    stationarity_residual: float
    grad_norm: float
    converged: bool
    restart_values: tuple = field(default=())

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "restarts": self.restarts_used,
            "residuals": {
                "stationarity": self.stationarity_residual,
                "grad_norm": self.grad_norm,
                "unitarity": float(np.abs(self.minimizer @ self.minimizer.conj().T - np.eye(len(self.minimizer))).max()),
            },
            "converged": self.converged,
        }


@dataclass(frozen=True)
class Objective:
    """Real objective on U(n): ``value_and_grad(U) -> (f, G)`` with G = df/d conj(U)."""

    name: str
    n: int
    value_and_grad: Callable
    scale: float = 1.0  # f = raw / scale; the stationarity residual is reported on raw


def tr_u_ubar_t2(d1: int, d2: int) -> Objective:
    """f(U) = tr[U conj(U)^{T2}] / (d1 d2) on U(d1 d2)."""
    n = d1 * d2

    def value_and_grad(u):
        ut1 = partial_transpose(u, d1, d2, 1)
        # tr[U conj(U^{T2})] = sum_ab U_ab conj(U^{T1})_ab since (U^{T2})^T = U^{T1}
        raw = np.sum(u * ut1.conj()).real
        return raw / n, ut1 / n

    return Objective("tr-u-ubar-t2", n, value_and_grad, float(n))


def tr_usym_pt(d1: int, d2: int) -> Objective:
    """f(U) = tr[U_s conj(U_s)^{T2}] / (d1 d2), U_s the symmetric part of U."""
    n = d1 * d2

    def value_and_grad(u):
        a = sym_part(u)
        at1 = partial_transpose(a, d1, d2, 1)
        raw = np.sum(a * at1.conj()).real
        return raw / n, sym_part(at1) / n

    return Objective("tr-usym-pt", n, value_and_grad, float(n))


def tr_b_ubar(b) -> Objective:
    """f(U) = tr[B^dag U B^T conj(U)] / d. With B = diag(sigma), U B ranges over
    every matrix with singular values sigma (up to the invariance A -> V A V^T)."""
    b = np.asarray(b, dtype=complex)
    d = b.shape[0]
    bh, bt, bc = b.conj().T, b.T, b.conj()

    def value_and_grad(u):
        raw = np.trace(bh @ u @ bt @ u.conj()).real
        return raw / d, (b @ u.T @ bc) / d

    return Objective("tr-a-abar", d, value_and_grad, float(d))


def make_objective(name: str, d: int, D: int | None = None, sigma=None) -> Objective:
    if name == "tr-u-ubar-t2":
        return tr_u_ubar_t2(d, 1 if D is None else D)
    if name == "tr-usym-pt":
        return tr_usym_pt(d, d if D is None else D)
    if name == "tr-a-abar":
        if sigma is None:
            raise ValueError("tr-a-abar needs sigma")
        return tr_b_ubar(np.diag(np.asarray(sigma, dtype=float)))
    raise ValueError(f"unknown objective {name!r}; choose from {OBJECTIVES}")


def riemannian_gradient(obj: Objective, u):
    f, g = obj.value_and_grad(u)
    m = u @ g.conj().T
    return f, 1j * (m - m.conj().T)


def descend(obj: Objective, u0, max_iter: int = 5000, grad_tol: float = 1e-8, step: float = 0.5):
    """Gradient descent on U(n) with Armijo backtracking.

    Returns ``(U, f, grad_norm, converged)``.
    """
    u = np.array(u0, dtype=complex)
    f, gam = riemannian_gradient(obj, u)
    gnorm = np.linalg.norm(gam)
    eta = step
    for it in range(max_iter):
        if gnorm < grad_tol:
            return u, f, gnorm, True
        while True:
            u_new = unitary_from_hermitian(-eta * gam, tol=np.inf) @ u
            f_new, gam_new = riemannian_gradient(obj, u_new)
            if f_new <= f - 1e-4 * eta * gnorm**2 or eta < 1e-14:
                break
            eta *= 0.5
        if f - f_new < 1e-16 and eta < 1e-14:
            break
        u, f, gam = u_new, f_new, gam_new
        gnorm = np.linalg.norm(gam)
        eta = min(eta * 2.0, 10.0)
        if it % 50 == 49:
            # re-project onto U(n) against round-off drift
            w, _, vh = np.linalg.svd(u)
            u = w @ vh
    return u, f, gnorm, gnorm < grad_tol


def manifold_minimize(
    objective: Objective,
    restarts: int = 50,
    seed: int = 0,
    max_iter: int = 5000,
    tol: float = 1e-8,
) -> OptimizeResult:
    """Best local minimum over ``restarts`` Haar-random starts (restart k seeded seed + k)."""
    best = None
    values = []
    for k in range(restarts):
        rng = np.random.default_rng(seed + k)
        u0 = haar_unitary(objective.n, rng)
        u, f, gnorm, conv = descend(objective, u0, max_iter=max_iter, grad_tol=tol)
        values.append(float(f))
        if best is None or f < best[1]:  # strict: ties keep the lowest restart index
            best = (u, f, gnorm, conv)
    u, f, gnorm, conv = best
    _, g = objective.value_and_grad(u)
    m = objective.scale * (u @ g.conj().T)
    return OptimizeResult(
        value=float(f),
        minimizer=u,
        restarts_used=restarts,
        stationarity_residual=float(np.linalg.norm(m - m.conj().T)),
        grad_norm=float(gnorm),
        converged=bool(conv),
        restart_values=tuple(values),
    )


# -- closed forms --------------------------------------------------------------


def _check_sorted(sigma):
    s = np.asarray(sigma, dtype=float)
    if np.any(s < 0) or np.any(np.diff(s) > 0):
        raise ValueError("singular values must be non-negative and non-increasing")
    return s


def min_tr_a_abar(sigma):
    """Minimum of tr[A conj(A)] over matrices with singular values ``sigma``.

    Returns ``(value, minimizer)``; the minimizer is block diagonal with blocks
    [[0, -s_{2i}], [s_{2i-1}, 0]] and a trailing s_d for odd d.
    """
    s = _check_sorted(sigma)
    d = len(s)
    value = -2.0 * float(np.sum(s[0 : d - 1 : 2] * s[1:d:2]))
    if d % 2:
        value += float(s[-1] ** 2)
    a = attainable_tr_a_abar(s, list(range(d)), d - d % 2, [1] * (d // 2))[1]
    return value, a


def attainable_tr_a_abar(sigma, tau, r: int, rho_signs):
    """Block construction realizing 2 sum (-1)^rho_i s_tau(2i-1) s_tau(2i) + sum_{i>r} s_tau(i)^2.

    ``tau`` is a 0-based permutation, ``rho_signs`` holds 0/1 exponents per block.
    Returns ``(value, matrix)``.
    """
    s = _check_sorted(sigma)
    d = len(s)
    tau = list(tau)
    if sorted(tau) != list(range(d)):
        raise ValueError("tau must be a permutation of range(d)")
    if r % 2 or r > d or r < 0:
        raise ValueError("r must be even and at most d")
    if len(rho_signs) != r // 2:
        raise ValueError("need one sign per 2x2 block")
    a = np.zeros((d, d), dtype=complex)
    value = 0.0
    for i, rho in enumerate(rho_signs):
        if rho not in (0, 1):
            raise ValueError("rho_signs entries must be 0 or 1")
        p, q = s[tau[2 * i]], s[tau[2 * i + 1]]
        sign = (-1.0) ** rho
        a[2 * i, 2 * i + 1] = sign * q
        a[2 * i + 1, 2 * i] = p
        value += 2 * sign * p * q
    for i in range(r, d):
        a[i, i] = s[tau[i]]
        value += s[tau[i]] ** 2
    return float(value), a


def max_abs_trace_given_x(x: float, d: int):
    """max |tr U| at tr[U conj(U)]/d = x (odd d); returns ``(value, U)``."""
    u = covariant.max_trace_unitary(x, d)
    return d * covariant.m_curve(x, d), u


def u2_symmetric_trace_norm_identity(u):
    """For U in U(2): (||U_s||_1, sqrt(tr[U conj(U)] + 2)); the two agree."""
    u = np.asarray(u)
    if u.shape != (2, 2):
        raise ValueError("expected a 2x2 unitary")
    if not np.allclose(u @ u.conj().T, np.eye(2), atol=1e-9):
        raise ValueError("matrix is not unitary")
    lhs = trace_norm(sym_part(u))
    rhs = np.sqrt(max(np.trace(u @ u.conj()).real + 2.0, 0.0))
    return lhs, float(rhs)
