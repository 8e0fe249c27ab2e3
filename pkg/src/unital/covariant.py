"""O(d)-covariant unital channels.

The commutant of {O (x) O} is spanned by 1, the flip F and Fhat = d |Omega><Omega|.
Covariant states are mixtures q0 rho0 + q1 rho1 + q2 rho2 of the normalized minimal
projections and are fixed by the coordinates (<F>, <Fhat>).
"""
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .channels import ChoiState
from .linalg import flip_operator, is_unitary, omega_projector

TOL = 1e-9


@dataclass(frozen=True)
class CovariantCoords:
    x: float  # <F>
    y: float  # <Fhat>


@dataclass(frozen=True)
class CovariantState:
    d: int
    q0: float
    q1: float
    q2: float

    @property
    def coords(self) -> CovariantCoords:
        return CovariantCoords(self.q0 - self.q1 + self.q2, self.d * self.q0)

    def to_choi(self) -> ChoiState:
        r0, r1, r2 = normalized_projections(self.d)
        return ChoiState(self.d, self.q0 * r0 + self.q1 * r1 + self.q2 * r2)

    def is_state(self, tol=TOL) -> bool:
        q = np.array([self.q0, self.q1, self.q2])
        return bool(np.all(q >= -tol) and abs(q.sum() - 1) <= tol)


def projections(d: int):
    """Minimal projections P0 = |Omega><Omega|, P1 = (1 - F)/2, P2 = (1 + F)/2 - P0."""
    f = flip_operator(d)
    p0 = omega_projector(d)
    eye = np.eye(d * d)
    return p0, 0.5 * (eye - f), 0.5 * (eye + f) - p0


def normalized_projections(d: int):
    return tuple(p / np.trace(p).real for p in projections(d))


def rho_minus(d: int) -> np.ndarray:
    """Normalized antisymmetric projector (Werner-Holevo channel)."""
    f = flip_operator(d)
    return (np.eye(d * d) - f) / (d * (d - 1))


def rho_plus(d: int) -> np.ndarray:
    f = flip_operator(d)
    return (np.eye(d * d) + f) / (d * (d + 1))


def _matrix(rho):
    return rho.rho if isinstance(rho, ChoiState) else np.asarray(rho)


def twirl(rho) -> CovariantState:
    """Project a Choi state onto the O(d) commutant; q_i = tr[rho P_i]."""
    m = _matrix(rho)
    d = int(round(np.sqrt(m.shape[0])))
    q = [np.trace(m @ p).real for p in projections(d)]
    return CovariantState(d, *q)


def coords_of_state(rho) -> CovariantCoords:
    m = _matrix(rho)
    d = int(round(np.sqrt(m.shape[0])))
    return CovariantCoords(
        np.trace(m @ flip_operator(d)).real,
        d * np.trace(m @ omega_projector(d)).real,
    )


def state_from_coords(c: CovariantCoords, d: int) -> CovariantState:
    q0 = c.y / d
    return CovariantState(d, q0, (1 - c.x) / 2, (1 + c.x) / 2 - q0)


def coords_of_unitary(u) -> CovariantCoords:
    """Coordinates of the unitary channel U: (tr[U conj(U)]/d, |tr U|^2/d)."""
    u = np.asarray(u)
    if not is_unitary(u, 1e-8):
        raise ValueError("coords_of_unitary requires a unitary matrix")
    d = u.shape[0]
    return CovariantCoords(np.trace(u @ u.conj()).real / d, abs(np.trace(u)) ** 2 / d)


# -- the mixtures of unitaries inside the commutant ---------------------------


def _check_odd(d):
    if d < 3 or d % 2 == 0:
        raise ValueError(f"d must be odd and >= 3, got {d}")


def _check_x(x, d):
    lo = -1 + 2 / d
    if not (lo - TOL <= x <= 1 + TOL):
        raise ValueError(f"x={x} outside [{lo}, 1]")
    return min(max(x, lo), 1.0)


def m_curve(x: float, d: int) -> float:
    """Largest |tr U|/d over unitaries with tr[U conj(U)]/d = x (odd d)."""
    _check_odd(d)
    x = _check_x(x, d)
    return float(np.sqrt(0.5 * (1 - 1 / d) * (1 - 2 / d + x)) + 1 / d)


def max_trace_unitary(x: float, d: int) -> np.ndarray:
    """diag(R, ..., R, 1) with R = [[a, b], [-b, a]] attaining m(x)."""
    _check_odd(d)
    x = _check_x(x, d)
    a = d / (d - 1) * np.sqrt(0.5 * (1 - 1 / d) * (1 - 2 / d + x))
    a = min(a, 1.0)
    b = np.sqrt(1 - a * a)
    u = np.eye(d, dtype=complex)
    for k in range(0, d - 1, 2):
        u[k : k + 2, k : k + 2] = [[a, b], [-b, a]]
    return u


_SIGMA_Y = np.array([[0, -1j], [1j, 0]])
_SIGMA_Z = np.diag([1.0, -1.0]).astype(complex)


def _block_diag(blocks, d):
    u = np.zeros((d, d), dtype=complex)
    k = 0
    for b in blocks:
        n = b.shape[0]
        u[k : k + n, k : k + n] = b
        k += n
    assert k == d
    return u


def even_vertex_unitaries(d: int):
    """Unitaries whose channels hit the vertices (1, d), (-1, 0), (1, 0) for even d."""
    if d % 2:
        raise ValueError("d must be even")
    return (
        np.eye(d, dtype=complex),
        _block_diag([_SIGMA_Y] * (d // 2), d),
        _block_diag([_SIGMA_Z] * (d // 2), d),
    )


def odd_vertex_unitaries(d: int):
    """Unitaries hitting (-1 + 2/d, 0) and (1, 0) for odd d >= 3."""
    _check_odd(d)
    q0 = 0.5 * np.array([[0, 1 - 1j, -1 - 1j], [-1 + 1j, -1j, 1], [1 + 1j, 1, 1j]])
    phi = np.exp(2j * np.pi / 3)
    n = (d - 3) // 2
    left = _block_diag([_SIGMA_Y] * n + [q0], d)
    right = _block_diag([_SIGMA_Z] * n + [np.diag([phi, phi**2, 1])], d)
    return left, right


def membership_in_U(c: CovariantCoords, d: int, tol: float = TOL) -> bool:
    """Is the covariant point a mixture of unitary channels?"""
    x, y = c.x, c.y
    if d % 2 == 0:
        return bool(y >= -tol and x <= 1 + tol and y <= d * (x + 1) / 2 + tol)
    _check_odd(d)
    lo = -1 + 2 / d
    if not (lo - tol <= x <= 1 + tol and y >= -tol):
        return False
    xc = min(max(x, lo), 1.0)
    return bool(y <= d * m_curve(xc, d) ** 2 + tol)


def boundary_points(d: int, n_points: int = 2000) -> np.ndarray:
    """Extreme points of the unitary-mixture region for odd d, the curve sampled densely
    near its vertical tangent at x = -1 + 2/d."""
    _check_odd(d)
    lo = -1 + 2 / d
    t = np.linspace(0.0, 1.0, n_points)
    xs = lo + (1 - lo) * t**2
    ys = np.array([d * m_curve(x, d) ** 2 for x in xs])
    curve = np.column_stack([xs, ys])
    return np.vstack([[[lo, 0.0], [1.0, 0.0]], curve])


def negativity(state: CovariantState, tol: float = TOL) -> float:
    """Closed-form negativity of an O(d)-covariant unital channel.

    Zero for even d, where every covariant state is a mixture of unitaries.
    """
    d = state.d
    if not state.is_state(tol):
        raise ValueError("weights do not describe a covariant state")
    if d % 2 == 0:
        return 0.0
    _check_odd(d)
    if membership_in_U(state.coords, d, tol):
        return 0.0
    q0, q1 = state.q0, state.q1
    if q1 <= tol:
        raise ValueError("state outside the unitary mixtures must have q1 > 0")
    q = q0 / q1
    if q > 1 / (d * (d - 1)):
        root = np.sqrt(q * q + (d - 2) / (d - 1) * q)
        val = (d - 1 + (d + 2 / (d - 2)) * q - 2 * (d - 1) / (d - 2) * root) * q1 / (d - 2) - 1
    else:
        val = d / (d - 1) * q1 - 1
    return float(max(val, 0.0))


def negativity_lp(state: CovariantState, n_points: int = 2000) -> float:
    """Negativity as a linear program over a discretized boundary (oracle).

    Minimizes alpha_n subject to rho = alpha_p sigma_p - alpha_n sigma_n with
    sigma_p, sigma_n mixtures of the sampled extreme points.
    """
    pts = boundary_points(state.d, n_points)
    k = len(pts)
    c = state.coords
    a_eq = np.vstack(
        [
            np.concatenate([pts[:, 0], -pts[:, 0]]),
            np.concatenate([pts[:, 1], -pts[:, 1]]),
            np.concatenate([np.ones(k), -np.ones(k)]),
        ]
    )
    b_eq = np.array([c.x, c.y, 1.0])
    cost = np.concatenate([np.zeros(k), np.ones(k)])
    res = linprog(cost, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if not res.success:
        raise RuntimeError(f"negativity LP failed: {res.message}")
    return float(res.fun)


# -- the family (1 + delta)/d tr[rho] 1 - delta rho^T ------------------------------


def epsilon_from_delta(delta: float, d: int) -> float:
    return (d - 1) * (delta * (d + 1) - 1) / d


def delta_from_epsilon(eps: float, d: int) -> float:
    return (eps * d / (d - 1) + 1) / (d + 1)


def covariant_family_state(d: int, epsilon: float) -> CovariantState:
    """(1 - 1/d + eps/2) rho_- + (1/d - eps/2) rho_+ as commutant weights."""
    _check_odd(d)
    if not (-1e-12 <= epsilon <= 2 / d + 1e-12):
        raise ValueError(f"epsilon={epsilon} outside [0, {2 / d}]")
    w_minus = 1 - 1 / d + epsilon / 2
    w_plus = 1 / d - epsilon / 2
    share0 = 2 / (d * (d + 1))  # weight of rho0 inside rho_+
    return CovariantState(d, w_plus * share0, w_minus, w_plus * (1 - share0))


def covariant_family(d: int, epsilon: float) -> ChoiState:
    _check_odd(d)
    if not (-1e-12 <= epsilon <= 2 / d + 1e-12):
        raise ValueError(f"epsilon={epsilon} outside [0, {2 / d}]")
    rho = (1 - 1 / d + epsilon / 2) * rho_minus(d) + (1 / d - epsilon / 2) * rho_plus(d)
    return ChoiState(d, rho)


def covariant_family_delta(d: int, delta: float) -> ChoiState:
    """Choi state of T(rho) = (1 + delta)/d tr[rho] 1 - delta rho^T."""
    eye = np.eye(d * d)
    return ChoiState(d, (1 + delta) / d**2 * eye - delta / d * flip_operator(d))
