"""Direct spectral transform of a finite Jacobi matrix.

Eigenvalues come from Sturm-count bisection (inertia counts of the shifted
LDL^T factorization), refined by a few Newton steps on the monic
characteristic polynomial; weights are reciprocal sums of squared
first-kind polynomial values.  The matrix with its first row and column
removed supplies the divisor, whose points interlace the eigenvalues.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import jacobi_core
from ._poly import offspectrum_samples
from .errors import ConvergenceFailure, InvalidData, OnSpectrum
from .jacobi_core import JacobiMatrix, eval_P, eval_Q, truncate
from .rational_weyl import Divisor, RationalHerglotz, evaluate


def _readonly(a) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class SpectralData:
    """Simple eigenvalues with positive weights summing to one.

    ``conditioning`` is set when some spectral gap is below 1e-10, warning
    that derived quantities (divisor, angles) lose accuracy.
    """

    lambdas: np.ndarray
    rhos: np.ndarray
    conditioning: bool = field(default=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "lambdas", _readonly(self.lambdas))
        object.__setattr__(self, "rhos", _readonly(self.rhos))
        lam, rho = self.lambdas, self.rhos
        if lam.ndim != 1 or lam.size < 1 or rho.shape != lam.shape:
            raise InvalidData("need matching 1-d eigenvalue and weight arrays")
        if not (np.all(np.isfinite(lam)) and np.all(np.isfinite(rho))):
            raise InvalidData("spectral data must be finite")
        if lam.size > 1 and not np.all(np.diff(lam) > 0.0):
            raise InvalidData("eigenvalues must be strictly increasing")
        if not np.all(rho > 0.0):
            raise InvalidData("weights must be positive")
        if abs(float(np.sum(rho)) - 1.0) > 1e-8:
            raise InvalidData("weights must sum to one")

    @property
    def n(self) -> int:
        return self.lambdas.size


def _count_below(m: JacobiMatrix, x: np.ndarray) -> np.ndarray:
    """Number of eigenvalues strictly below each entry of x (Sturm count)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    c2 = m.c**2
    scale = float(c2.max()) if c2.size else 1.0
    pivmin = (np.finfo(float).tiny / np.finfo(float).eps) * max(1.0, scale)
    d = m.v[0] - x
    d = np.where(np.abs(d) < pivmin, -pivmin, d)
    cnt = (d < 0).astype(np.int64)
    for k in range(1, m.n):
        d = (m.v[k] - x) - c2[k - 1] / d
        d = np.where(np.abs(d) < pivmin, -pivmin, d)
        cnt += d < 0
    return cnt


def eigen(m: JacobiMatrix) -> SpectralData:
    """Full spectral data of the matrix.

    Bisection keeps per-root brackets certified by the Sturm count until
    they shrink to 1e-14 * max(1, |lambda|); Newton steps on the monic
    characteristic polynomial then polish to full precision.
    """
    n = m.n
    if n == 1:
        return SpectralData(np.array([m.v[0]]), np.array([1.0]))
    reach = np.zeros(n)
    reach[:-1] += m.c
    reach[1:] += m.c
    lo0 = float(np.min(m.v - reach))
    hi0 = float(np.max(m.v + reach))
    pad = 1e-6 * max(1.0, hi0 - lo0)
    lo0, hi0 = lo0 - pad, hi0 + pad
    lo = np.full(n, lo0)
    hi = np.full(n, hi0)
    want = np.arange(1, n + 1)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        done = (hi - lo) <= 1e-14 * np.maximum(1.0, np.abs(mid))
        if np.all(done):
            break
        cnt = _count_below(m, mid)
        upper = cnt >= want
        hi = np.where(upper & ~done, mid, hi)
        lo = np.where(~upper & ~done, mid, lo)
    else:
        raise ConvergenceFailure("eigenvalue bisection hit the iteration cap")
    lam = 0.5 * (lo + hi)
    width = hi - lo
    for _ in range(4):
        pn, dpn = jacobi_core._recurrence_with_derivative(m, lam, first_kind=True)
        safe = dpn != 0.0
        lam = lam - np.where(safe, pn / np.where(safe, dpn, 1.0), 0.0)
        lam = np.clip(lam, lo - width, hi + width)
    table = jacobi_core._recurrence_table(m, lam, first_kind=True)
    rho = 1.0 / (table[:n] ** 2).sum(axis=0)
    # The weights satisfy sum rho = 1 identically; project the rounding
    # drift of the recurrence sums back onto that constraint.
    rho = rho / float(np.sum(rho))
    flag = bool(np.min(np.diff(lam)) < 1e-10)
    return SpectralData(lam, rho, conditioning=flag)


def divisor(m: JacobiMatrix) -> Divisor:
    """Eigenvalues of the matrix truncated past its first row and column."""
    if m.n < 2:
        raise InvalidData("divisor needs at least a 2x2 matrix")
    return Divisor(eigen(truncate(m, 1, m.n - 1)).lambdas)


def weyl(m: JacobiMatrix) -> RationalHerglotz:
    """Weyl function: the (0, 0) resolvent entry as a pole sum."""
    sd = eigen(m)
    return RationalHerglotz(sd.lambdas, sd.rhos)


def weyl_from_spectral(sd: SpectralData) -> RationalHerglotz:
    return RationalHerglotz(sd.lambdas, sd.rhos)


def spectral_from_weyl(w: RationalHerglotz) -> SpectralData:
    if not w.normalized:
        raise InvalidData("spectral data requires unit total residue")
    return SpectralData(w.poles, w.residues)


def weyl_solution_residual(m: JacobiMatrix, lam: float) -> float:
    """Max-norm residual of (L - lam) u = e_0 for the Weyl solution
    u_n = Q_n + w(lam) P_n, built purely from recurrences and the pole sum."""
    lam = float(lam)
    w = weyl(m)
    if np.min(np.abs(lam - w.poles)) < 1e-12:
        raise OnSpectrum("the Weyl solution has a pole on the spectrum")
    wv = evaluate(w, lam)
    p = eval_P(m, lam).values
    q = eval_Q(m, lam).values
    u = q[: m.n] + wv * p[: m.n]
    r = m.matvec(u) - lam * u
    r[0] -= 1.0
    return float(np.max(np.abs(r)))


def gluing_check(m: JacobiMatrix) -> float:
    """Consistency of the pole sum with the recurrence polynomials.

    At each eigenvalue the rescaled Weyl solution (Q_n + w P_n) / w reduces
    to Q_n * (1/w) + P_n with 1/w = 0 there, and must reproduce P_n; off the
    spectrum the defining identity Q_N + w P_N = 0 is sampled at 16 points,
    with the deviation taken relative to the larger participating term (the
    recurrence values grow rapidly off the spectrum, so an absolute deviation
    would only measure their float64 magnitude).  Returns the worst deviation
    over both checks; 0.0 for a 1x1 matrix.
    """
    if m.n == 1:
        return 0.0
    w = weyl(m)
    n = m.n
    table_p = jacobi_core._recurrence_table(m, w.poles, first_kind=True)
    table_q = jacobi_core._recurrence_table(m, w.poles, first_kind=False)
    inv_w_at_pole = 0.0
    glued = table_q[:n] * inv_w_at_pole + table_p[:n]
    resid = float(np.max(np.abs(glued - table_p[:n])))
    pts = offspectrum_samples(w.poles, 16)
    wv = (w.residues[None, :] / (w.poles[None, :] - pts[:, None])).sum(axis=1)
    pn = jacobi_core._recurrence_table(m, pts, first_kind=True)[n]
    qn = jacobi_core._recurrence_table(m, pts, first_kind=False)[n]
    scale = np.maximum(1.0, np.maximum(np.abs(qn), np.abs(wv * pn)))
    resid = max(resid, float(np.max(np.abs(qn + wv * pn) / scale)))
    return resid
