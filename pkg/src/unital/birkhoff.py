"""Restoring membership in the mixtures of unitaries by tensoring.

Two routes for the covariant family at odd d:

* two copies T (x) T at d = 3, described by (<F>, <F12>) with
  F = (1 (x) flip + flip (x) 1)/2 and F12 = flip (x) flip;
* a completely depolarizing supplement on C^D, described by <Y> with
  Y = flip (x) 1, whose range over unitary channels is bounded below by
  quaternion certificates.
"""
from dataclasses import dataclass

import numpy as np

from .channels import ChoiState
from .covariant import covariant_family_state
from .linalg import flip_operator, is_hermitian, is_unitary, partial_transpose, sym_part
from .quaternion import ONE, ZERO, I, J, K, Quaternion, QuaternionMatrix, quatmat_embed

TOL = 1e-9


@dataclass(frozen=True)
class TwoCopyCoords:
    f: float  # <F>
    f12: float  # <F12>


def _matrix(rho):
    return rho.rho if isinstance(rho, ChoiState) else np.asarray(rho)


def _flip_value(m) -> float:
    d = int(round(np.sqrt(m.shape[0])))
    if d * d != m.shape[0]:
        raise ValueError(f"state of size {m.shape[0]} is not bipartite d x d")
    return float(np.trace(m @ flip_operator(d)).real)


def two_copy_coords_of_state(rho_a, rho_b) -> TwoCopyCoords:
    """Coordinates of the product Choi state rho_a (x) rho_b, computed factor-wise."""
    a, b = _matrix(rho_a), _matrix(rho_b)
    if a.shape != b.shape:
        raise ValueError(f"factor shapes differ: {a.shape} vs {b.shape}")
    fa, fb = _flip_value(a), _flip_value(b)
    return TwoCopyCoords(0.5 * (fa + fb), fa * fb)


def joint_choi(rho_a, rho_b) -> np.ndarray:
    """Choi state of T_a (x) T_b, ordered (in_a, in_b, out_a, out_b).

    Only used to cross-check the factor-wise route.
    """
    a, b = _matrix(rho_a), _matrix(rho_b)
    d = int(round(np.sqrt(a.shape[0])))
    t = np.kron(a, b).reshape([d] * 8)  # (ia, oa, ib, ob ; ia', oa', ib', ob')
    t = t.transpose(0, 2, 1, 3, 4, 6, 5, 7)
    return t.reshape(d**4, d**4)


def two_copy_coords_of_joint(rho, d: int) -> TwoCopyCoords:
    """Coordinates of a Choi state of a channel on C^d (x) C^d, ordered (in_a, in_b, out_a, out_b)."""
    m = _matrix(rho)
    if m.shape != (d**4, d**4):
        raise ValueError(f"expected a {d**4}x{d**4} state, got {m.shape}")
    t = m.reshape([d] * 8)
    # <flip on pair a> swaps in_a with out_a on the ket side
    fa = np.einsum("abcdcbad->", t).real
    fb = np.einsum("abcdadcb->", t).real
    f12 = np.einsum("abcdcdab->", t).real
    return TwoCopyCoords(float(0.5 * (fa + fb)), float(f12))


def two_copy_coords_of_unitary(u) -> TwoCopyCoords:
    """(tr[U_s conj(U_s)^{T2}], tr[U conj(U)]) / d^2 for a unitary U on C^d (x) C^d."""
    u = np.asarray(u, dtype=complex)
    n = u.shape[0]
    d = int(round(np.sqrt(n)))
    if d * d != n or not is_unitary(u, 1e-8):
        raise ValueError("expected a unitary on C^d (x) C^d")
    us = sym_part(u)
    f = np.sum(us * partial_transpose(us, d, d, 1).conj()).real / n
    f12 = np.trace(u @ u.conj()).real / n
    return TwoCopyCoords(float(f), float(f12))


# -- the curve of extreme points at d = 3 --------------------------------------


def theta_curve(theta: float) -> TwoCopyCoords:
    if not (-TOL <= theta <= np.pi / 2 + TOL):
        raise ValueError(f"theta={theta} outside [0, pi/2]")
    c = np.cos(theta)
    return TwoCopyCoords((3 - 8 / 3 * (c + 1) ** 2) / 9, (16 * c * c - 7) / 9)


def _theta_v() -> np.ndarray:
    r2, r3, r6 = np.sqrt(2), np.sqrt(3), np.sqrt(6)
    i = 1j
    entries = {
        0: {1: i / r2, 2: -i / (2 * r6), 4: -i / (2 * r2), 8: 1 / r3},
        1: {0: i / r2, 2: -np.sqrt(3 / 8), 4: 1 / (2 * r2)},
        2: {5: 1 / r2, 7: i / r2},
        3: {0: i / r2, 2: np.sqrt(3 / 8), 4: -1 / (2 * r2)},
        4: {2: i / r6, 4: i / r2, 8: 1 / r3},
        5: {3: 1 / r2, 6: i / r2},
        6: {5: -1 / r2, 7: i / r2},
        7: {3: -1 / r2, 6: i / r2},
        8: {1: -i / r2, 2: -i / (2 * r6), 4: -i / (2 * r2), 8: 1 / r3},
    }
    v = np.zeros((9, 9), dtype=complex)
    for r, row in entries.items():
        for c, val in row.items():
            v[r, c] = val
    return v


THETA_V = _theta_v()

# 27 G, row by row
_G_TIMES_27 = np.array(
    [
        [3 / 2, 0, -11 / 8, 0, -9 / 8, 0, 0, 0, -1],
        [0, 3 / 2, 1 / 8, 0, 3 / 8, -3 / 2, 0, -3 / 2, -1],
        [-11 / 8, 1 / 8, 3 / 2, -1 / 4, -1, 1 / 8, -1 / 4, 1 / 8, -1],
        [0, 0, -1 / 4, 3 / 2, -3 / 4, 0, -3 / 2, 0, -1],
        [-9 / 8, 3 / 8, -1, -3 / 4, 3 / 2, 3 / 8, -3 / 4, 3 / 8, -1],
        [0, -3 / 2, 1 / 8, 0, 3 / 8, 3 / 2, 0, -3 / 2, -1],
        [0, 0, -1 / 4, -3 / 2, -3 / 4, 0, 3 / 2, 0, -1],
        [0, -3 / 2, 1 / 8, 0, 3 / 8, -3 / 2, 0, 3 / 2, -1],
        [-1, -1, -1, -1, -1, -1, -1, -1, 1],
    ]
)
THETA_G = _G_TIMES_27 / 27


def theta_rotation(theta: float) -> np.ndarray:
    """Four copies of the 2x2 rotation by theta on the diagonal, then a trailing 1."""
    c, s = np.cos(theta), np.sin(theta)
    dm = np.eye(9, dtype=complex)
    for k in range(0, 8, 2):
        dm[k : k + 2, k : k + 2] = [[c, -s], [s, c]]
    return dm


def theta_construction(theta: float) -> np.ndarray:
    """U = V D(theta) V^T on C^3 (x) C^3."""
    return THETA_V @ theta_rotation(theta) @ THETA_V.T


def theta_sigma(theta: float) -> np.ndarray:
    """Diagonal of the symmetric part of D(theta)."""
    return np.array([np.cos(theta)] * 8 + [1.0])


def gram_G(v, d1: int, d2: int) -> np.ndarray:
    """g_ij = tr[s_ij^2] / (d1 d2) with s_ij[k, l] = <x_ik, x_jl>, x_ik the k-th block of column i."""
    v = np.asarray(v, dtype=complex)
    n = d1 * d2
    if v.shape != (n, n) or not is_unitary(v, 1e-8):
        raise ValueError("gram_G needs a unitary of size d1 d2")
    x = v.T.reshape(n, d1, d2)  # x[i, k] = k-th block of column i
    s = np.einsum("ikm,jlm->ijkl", x.conj(), x)
    return np.einsum("ijkl,ijlk->ij", s, s) / n


def overlap_traces(v, d1: int, d2: int) -> np.ndarray:
    """(tr s_ij)_ij; equals the identity when v is unitary."""
    v = np.asarray(v, dtype=complex)
    n = d1 * d2
    x = v.T.reshape(n, d1, d2)
    return np.einsum("ikm,jkm->ij", x.conj(), x)


def epsilon_star() -> float:
    """Largest epsilon for which two copies of the d = 3 family provably return to the mixtures."""
    return float(2 / 3 * (4 - 3 * np.sqrt(2) - np.sqrt(3) + np.sqrt(6)))


def _curve_f(f12: float) -> float:
    c = np.sqrt(max(9 * f12 + 7, 0.0)) / 4
    return (3 - 8 / 3 * (c + 1) ** 2) / 9


_TOP = (1.0, 1.0)
_BOTTOM = (1 / 9, -7 / 9)


def two_copy_membership(c: TwoCopyCoords, tol: float = TOL) -> bool:
    """Is the point in the convex hull of the theta-curve and the vertices (1, 1), (1/9, -7/9)?

    The curve is convex in f12, so the hull is cut out by the curve, the
    horizontal lines f12 = 1 and f12 = -7/9 and the segment joining the two vertices.
    """
    f, y = c.f, c.f12
    if y < -7 / 9 - tol or y > 1 + tol:
        return False
    if f < _curve_f(min(max(y, -7 / 9), 1.0)) - tol:
        return False
    (x1, y1), (x2, y2) = _BOTTOM, _TOP
    # left of the upward segment from (1/9, -7/9) to (1, 1)
    cross = (x2 - x1) * (y - y1) - (y2 - y1) * (f - x1)
    return bool(cross >= -tol)


def family_two_copy_coords(epsilon: float, d: int = 3) -> TwoCopyCoords:
    """(x, x^2) with x = <flip> of the covariant family at epsilon."""
    c = covariant_family_state(d, epsilon).coords
    return TwoCopyCoords(c.x, c.x**2)


def rho_m(d: int = 3) -> np.ndarray:
    """Joint Choi state (rho_- (x) rho_+ + rho_+ (x) rho_-) / 2 in (in_a, in_b, out_a, out_b) order."""
    f = flip_operator(d)
    eye = np.eye(d * d)
    rm = (eye - f) / (d * (d - 1))
    rp = (eye + f) / (d * (d + 1))
    return 0.5 * (joint_choi(rm, rp) + joint_choi(rp, rm))


# -- depolarizing supplement --------------------------------------------------


def y_expectation(u, d: int, D: int) -> float:
    """<Y> of the unitary channel U on C^d (x) C^D: tr[U conj(U)^{T2}] / (d D)."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (d * D, d * D):
        raise ValueError(f"expected a {d * D}x{d * D} matrix, got {u.shape}")
    if not is_unitary(u, 1e-8):
        raise ValueError("y_expectation needs a unitary")
    val = np.sum(u * partial_transpose(u, d, D, 1).conj()).real
    return float(val / (d * D))


def _q(x0=0.0, x1=0.0, x2=0.0, x3=0.0):
    return Quaternion(x0, x1, x2, x3)


def certificate_matrix(d: int) -> QuaternionMatrix:
    """Hermitian quaternion A with A^2 + 2A = (d^2 - 1) 1."""
    if d == 3:
        rows = [[ZERO, -I, J], [I, ZERO, -K], [-J, K, ZERO]]
        return QuaternionMatrix.from_rows([[2 * q for q in r] for r in rows])
    if d == 5:
        s = np.sqrt(12)
        rows = [
            [ZERO, _q(x1=-2), _q(x2=-s), _q(x3=2), _q(x2=-2)],
            [_q(x1=2), ZERO, ZERO, _q(x2=-2), _q(x3=4)],
            [_q(x2=s), ZERO, ZERO, _q(x1=-s), ZERO],
            [_q(x3=-2), _q(x2=2), _q(x1=s), ZERO, _q(x1=-2)],
            [_q(x2=2), _q(x3=-4), ZERO, _q(x1=2), ZERO],
        ]
        return QuaternionMatrix.from_rows(rows)
    raise ValueError(f"certificates are known for d = 3 and d = 5 only, got {d}")


@dataclass(frozen=True)
class QuaternionCertificate:
    d: int
    a: np.ndarray  # embedded A
    u: np.ndarray  # (1 + A) / d
    y: float
    hermitian: bool
    unitary: bool
    polynomial_residual: float

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "y": self.y,
            "target": -1 + 2 / self.d**2,
            "hermitian": self.hermitian,
            "unitary": self.unitary,
            "polynomial_residual": self.polynomial_residual,
        }


def quaternion_certificate(d: int, tol: float = 1e-10) -> QuaternionCertificate:
    a = quatmat_embed(certificate_matrix(d))
    eye = np.eye(2 * d)
    u = (eye + a) / d
    poly = a @ a + 2 * a - (d * d - 1) * eye
    return QuaternionCertificate(
        d=d,
        a=a,
        u=u,
        y=y_expectation(u, d, 2),
        hermitian=is_hermitian(u, tol),
        unitary=is_unitary(u, tol),
        polynomial_residual=float(np.abs(poly).max()),
    )


def certified_lower_bound(d: int, D: int) -> tuple:
    """Best <Y> over unitaries that is backed by an explicit unitary here.

    Returns ``(bound, unitary)``; for odd d without a quaternion certificate it
    falls back to a product unitary attaining -1 + 2/d.
    """
    if d < 1 or D < 1:
        raise ValueError("dimensions must be positive")
    if d % 2 == 0:
        # antisymmetric real blocks: U conj(U) = -1
        blk = np.array([[0.0, -1.0], [1.0, 0.0]])
        u1 = np.kron(np.eye(d // 2), blk)
        return -1.0, np.kron(u1, np.eye(D)).astype(complex)
    if D % 2 == 0 and d in (3, 5):
        cert = quaternion_certificate(d)
        # U (x) 1 on C^d (x) C^2 (x) C^{D/2} keeps <Y>
        return -1 + 2 / d**2, np.kron(cert.u, np.eye(D // 2))
    from .covariant import odd_vertex_unitaries

    u1 = odd_vertex_unitaries(d)[0]
    return -1 + 2 / d, np.kron(u1, np.eye(D)).astype(complex)


def depolarizing_verdict(d: int, D: int, epsilon: float) -> dict:
    """<Y> of T (x) (depolarizing on C^D) for the covariant family and whether it is certified inside."""
    state = covariant_family_state(d, epsilon)
    y = state.coords.x
    bound, _ = certified_lower_bound(d, D)
    return {
        "y": float(y),
        "single_copy_bound": -1 + 2 / d,
        "single_copy_in_U": bool(y >= -1 + 2 / d - TOL),
        "certified_bound": float(bound),
        "certified_in_U": bool(y >= bound - TOL),
    }
