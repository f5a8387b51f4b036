"""Finite symmetric tridiagonal matrices and their polynomial recurrences.

A matrix is stored by its diagonal ``v`` (length N) and positive
off-diagonal ``c`` (length N-1).  The three-term recurrence additionally
uses a closing coefficient for the final step, fixed as the reciprocal of
the product of the stored off-diagonals.  With that normalization the last
first-kind polynomial is exactly the monic characteristic polynomial, and
the last second-kind polynomial is the monic characteristic polynomial of
the matrix with its first row and column removed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidData


def _readonly(a) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class JacobiMatrix:
    """Symmetric tridiagonal matrix with strictly positive off-diagonal."""

    v: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "v", _readonly(self.v))
        object.__setattr__(self, "c", _readonly(self.c))
        if self.v.ndim != 1 or self.v.size < 1:
            raise InvalidData("diagonal must be a nonempty 1-d array")
        if self.c.shape != (self.v.size - 1,):
            raise InvalidData("off-diagonal must have length N-1")
        if not np.all(np.isfinite(self.v)) or not np.all(np.isfinite(self.c)):
            raise InvalidData("matrix entries must be finite")
        if self.c.size and not np.all(self.c > 0.0):
            raise InvalidData("off-diagonal entries must be positive")

    @property
    def n(self) -> int:
        return self.v.size

    @property
    def closing_c(self) -> float:
        """Coefficient closing the recurrence; never stored as a matrix entry."""
        return float(1.0 / np.prod(self.c)) if self.c.size else 1.0

    def as_dense(self) -> np.ndarray:
        m = np.diag(self.v)
        if self.c.size:
            m += np.diag(self.c, 1) + np.diag(self.c, -1)
        return m

    def matvec(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = self.v * x
        if self.c.size:
            y[:-1] += self.c * x[1:]
            y[1:] += self.c * x[:-1]
        return y


@dataclass(frozen=True, eq=False)
class PolySequence:
    """Values of the recurrence polynomials of one kind at a fixed argument,
    indexed 0..N (the final entry uses the closing coefficient)."""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _readonly(self.values))

    def __len__(self) -> int:
        return self.values.size

    def __getitem__(self, idx):
        return self.values[idx]


def _recurrence_table(m: JacobiMatrix, lam, first_kind: bool) -> np.ndarray:
    """Table of polynomial values, shape (N+1,) + shape(lam).

    First kind starts (1, ...), second kind starts (0, 1/c_0, ...); both obey
    c_{n-1} y_{n-1} + v_n y_n + c_n y_{n+1} = lam * y_n with the closing
    coefficient supplying c_{N-1}.
    """
    lam = np.asarray(lam, dtype=float)
    n = m.n
    out = np.zeros((n + 1,) + lam.shape)
    c = np.concatenate((m.c, [m.closing_c]))
    if first_kind:
        out[0] = 1.0
        out[1] = (lam - m.v[0]) / c[0]
        start = 1
    else:
        if n == 1:
            out[1] = 1.0 / c[0]
            return out
        out[1] = 1.0 / c[0]
        start = 1
    for k in range(start, n):
        out[k + 1] = ((lam - m.v[k]) * out[k] - c[k - 1] * out[k - 1]) / c[k]
    return out


def _recurrence_with_derivative(m: JacobiMatrix, lam, first_kind: bool):
    """Last table row and its derivative in the spectral argument."""
    lam = np.asarray(lam, dtype=float)
    n = m.n
    c = np.concatenate((m.c, [m.closing_c]))
    prev = np.ones_like(lam) if first_kind else np.zeros_like(lam)
    dprev = np.zeros_like(lam)
    cur = (lam - m.v[0]) / c[0] if first_kind else np.full_like(lam, 1.0 / c[0])
    dcur = np.full_like(lam, 1.0 / c[0]) if first_kind else np.zeros_like(lam)
    for k in range(1, n):
        nxt = ((lam - m.v[k]) * cur - c[k - 1] * prev) / c[k]
        dnxt = ((lam - m.v[k]) * dcur + cur - c[k - 1] * dprev) / c[k]
        prev, cur, dprev, dcur = cur, nxt, dcur, dnxt
    return cur, dcur


def eval_P(m: JacobiMatrix, lam: float) -> PolySequence:
    """First-kind polynomial values P_0..P_N at ``lam``.

    P_N is the monic characteristic polynomial of the matrix.
    """
    return PolySequence(_recurrence_table(m, float(lam), first_kind=True))


def eval_Q(m: JacobiMatrix, lam: float) -> PolySequence:
    """Second-kind polynomial values Q_0..Q_N at ``lam``.

    The sequence starts Q_0 = 0, Q_1 = 1/c_0 and obeys the recurrence from
    the second row on; Q_N is the monic characteristic polynomial of the
    matrix truncated past its first row and column.
    """
    return PolySequence(_recurrence_table(m, float(lam), first_kind=False))


def truncate(m: JacobiMatrix, k: int, p: int) -> JacobiMatrix:
    """Principal block on rows/columns k..p inclusive."""
    if not (0 <= k <= p < m.n):
        raise IndexError("truncation window out of range")
    return JacobiMatrix(m.v[k : p + 1], m.c[k:p])


def moments(m: JacobiMatrix, k_max: int) -> np.ndarray:
    """Moments of the spectral measure at the first coordinate vector:
    entry k is the (0, 0) element of the k-th matrix power, k = 0..k_max."""
    if k_max < 0:
        raise InvalidData("moment order must be nonnegative")
    u = np.zeros(m.n)
    u[0] = 1.0
    out = np.empty(k_max + 1)
    out[0] = 1.0
    for k in range(1, k_max + 1):
        u = m.matvec(u)
        out[k] = u[0]
    return out
