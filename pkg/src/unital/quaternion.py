"""Quaternions and quaternion matrices through their 2x2 complex embedding.

q = x0 + x1 i + x2 j + x3 k  ->  [[x0 + i x1, x2 + i x3], [-x2 + i x3, x0 - i x1]]

A d x d quaternion matrix embeds into C^d (x) C^2, entry (a, b) filling the
2x2 block at rows 2a, 2a+1 and columns 2b, 2b+1.
"""
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Quaternion:
    x0: float = 0.0
    x1: float = 0.0
    x2: float = 0.0
    x3: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.x0, self.x1, self.x2, self.x3], dtype=float)

    def __add__(self, other):
        return Quaternion(*(self.as_array() + other.as_array()))

    def __neg__(self):
        return Quaternion(*(-self.as_array()))

    def __mul__(self, other):
        if not isinstance(other, Quaternion):
            return Quaternion(*(self.as_array() * float(other)))
        a0, a1, a2, a3 = self.as_array()
        b0, b1, b2, b3 = other.as_array()
        return Quaternion(
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        )

    __rmul__ = __mul__  # only reached for scalars, which commute

    def conj(self):
        return Quaternion(self.x0, -self.x1, -self.x2, -self.x3)

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)
ZERO = Quaternion()


def quaternion_embed(q: Quaternion) -> np.ndarray:
    x0, x1, x2, x3 = q.as_array()
    return np.array([[x0 + 1j * x1, x2 + 1j * x3], [-x2 + 1j * x3, x0 - 1j * x1]])


@dataclass(frozen=True)
class QuaternionMatrix:
    entries: tuple  # d rows of d Quaternions

    @property
    def d(self) -> int:
        return len(self.entries)

    @classmethod
    def from_rows(cls, rows):
        rows = tuple(tuple(r) for r in rows)
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("quaternion matrix must be square")
        return cls(rows)

    def __matmul__(self, other):
        d = self.d
        out = [[ZERO] * d for _ in range(d)]
        for a in range(d):
            for b in range(d):
                acc = ZERO
                for c in range(d):
                    acc = acc + self.entries[a][c] * other.entries[c][b]
                out[a][b] = acc
        return QuaternionMatrix.from_rows(out)

    def conj(self):
        """Entry-wise quaternion conjugate (no transpose)."""
        return QuaternionMatrix.from_rows([[q.conj() for q in r] for r in self.entries])

    def adjoint(self):
        d = self.d
        return QuaternionMatrix.from_rows([[self.entries[b][a].conj() for b in range(d)] for a in range(d)])


def quatmat_embed(a: QuaternionMatrix) -> np.ndarray:
    d = a.d
    m = np.zeros((2 * d, 2 * d), dtype=complex)
    for r in range(d):
        for c in range(d):
            m[2 * r : 2 * r + 2, 2 * c : 2 * c + 2] = quaternion_embed(a.entries[r][c])
    return m
