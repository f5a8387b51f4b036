"""Rational Herglotz functions in three interchangeable representations.

A function here is a finite sum of simple poles on the real line with
positive residues.  It can equally be written as a quotient -q(z)/p(z) of
real polynomials with interlacing roots, or through the exponential of a
spectral-shift integral once the leftmost pole is moved to the origin.
This module converts between the representations and evaluates the moment
(trace) sums in all of them; agreement of the routes is a core consistency
check used by the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext

import numpy as np
from numpy.polynomial import polynomial as npoly

from . import _poly
from .errors import AtPole, InvalidData, NotHerglotz, TodaError

_NORMALIZATION_TOL = 1e-12

# Working precision for the decimal coefficient payload of PolyQuotient.
_DEC_DIGITS = 50


def _readonly(a) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class Divisor:
    """Strictly increasing zero locations of a rational Herglotz function."""

    gammas: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "gammas", _readonly(self.gammas))
        g = self.gammas
        if g.ndim != 1 or not np.all(np.isfinite(g)):
            raise InvalidData("divisor must be a finite 1-d array")
        if g.size > 1 and not np.all(np.diff(g) > 0.0):
            raise InvalidData("divisor points must be strictly increasing")

    @property
    def n(self) -> int:
        return self.gammas.size


@dataclass(frozen=True, eq=False)
class RationalHerglotz:
    """Sum of simple real poles with positive residues."""

    poles: np.ndarray
    residues: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "poles", _readonly(self.poles))
        object.__setattr__(self, "residues", _readonly(self.residues))
        if self.poles.ndim != 1 or self.poles.size < 1:
            raise InvalidData("pole list must be a nonempty 1-d array")
        if self.residues.shape != self.poles.shape:
            raise InvalidData("residue list must match pole list")
        if not (np.all(np.isfinite(self.poles)) and np.all(np.isfinite(self.residues))):
            raise InvalidData("poles and residues must be finite")
        if self.poles.size > 1 and not np.all(np.diff(self.poles) > 0.0):
            raise InvalidData("poles must be strictly increasing")
        if not np.all(self.residues > 0.0):
            raise NotHerglotz("all residues must be positive")

    @property
    def n(self) -> int:
        return self.poles.size

    @property
    def normalized(self) -> bool:
        """True when the residues sum to one, so the function is a Stieltjes
        transform of a probability measure."""
        return bool(abs(float(np.sum(self.residues)) - 1.0) <= _NORMALIZATION_TOL)


@dataclass(frozen=True, eq=False)
class PolyQuotient:
    """Coefficients (constant term first) of the quotient form -q/p.

    ``p`` is monic of degree N, ``q`` has degree N-1.  When built by
    :func:`to_quotient` the instance also carries values of both polynomials
    on a Chebyshev grid plus fixed-precision decimal coefficients
    (``p_dec``/``q_dec``, 50 digits); downstream consumers prefer those,
    since float64 monomial coefficients cannot represent the contribution
    of a very small residue to better than absolute rounding error.
    """

    p: np.ndarray
    q: np.ndarray
    nodes: np.ndarray | None = None
    p_nodes: np.ndarray | None = None
    q_nodes: np.ndarray | None = None
    p_dec: tuple | None = None
    q_dec: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "p", _readonly(self.p))
        object.__setattr__(self, "q", _readonly(self.q))
        if self.p.ndim != 1 or self.q.ndim != 1 or self.p.size != self.q.size + 1:
            raise InvalidData("need deg p = deg q + 1 = N")
        if self.p.size < 2:
            raise InvalidData("quotient needs at least one pole")
        if not (np.all(np.isfinite(self.p)) and np.all(np.isfinite(self.q))):
            raise InvalidData("coefficients must be finite")
        if abs(self.p[-1] - 1.0) > 1e-8:
            raise InvalidData("p must be monic")
        if self.q[-1] == 0.0:
            raise InvalidData("q must have exact degree N-1")
        for name in ("nodes", "p_nodes", "q_nodes"):
            val = getattr(self, name)
            if val is not None:
                object.__setattr__(self, name, _readonly(val))

    @property
    def n(self) -> int:
        return self.q.size


@dataclass(frozen=True, eq=False)
class KreinData:
    """Shifted spectrum, divisor and the moments of the spectral-shift
    integrand; ``shift`` records how far the original poles were moved so
    that the leftmost one sits at the origin."""

    lambdas0: np.ndarray
    gammas: np.ndarray
    f: np.ndarray
    shift: float

    def __post_init__(self):
        object.__setattr__(self, "lambdas0", _readonly(self.lambdas0))
        object.__setattr__(self, "gammas", _readonly(self.gammas))
        object.__setattr__(self, "f", _readonly(self.f))
        if self.lambdas0.size < 1 or self.lambdas0[0] != 0.0:
            raise InvalidData("shifted spectrum must start at zero")
        if self.gammas.shape != (self.lambdas0.size - 1,):
            raise InvalidData("divisor must have one point per spectral gap")


def evaluate(w: RationalHerglotz, z) -> complex | float:
    """Value of the pole sum at ``z``; refuses points within 1e-14 of a pole."""
    zc = complex(z)
    if np.min(np.abs(zc - w.poles)) < 1e-14:
        raise AtPole("evaluation point coincides with a pole")
    val = np.sum(w.residues / (w.poles - zc))
    if isinstance(z, complex):
        return complex(val)
    return float(val.real)


def _values(w: RationalHerglotz, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return (w.residues[None, :] / (w.poles[None, :] - x[..., None])).sum(axis=-1)


def zeros(w: RationalHerglotz) -> Divisor:
    """The N-1 real zeros, one in each gap between consecutive poles.

    The function increases from -inf to +inf across every gap, so bisection
    on the gap always succeeds; when a residue is so small that the zero is
    not resolvable away from its pole in double precision, the pole-side gap
    endpoint is returned.
    """
    lam, rho = w.poles, w.residues
    if w.n == 1:
        return Divisor(np.empty(0))
    gaps = np.diff(lam)
    eps_edge = 8 * np.finfo(float).eps * np.maximum(1.0, np.abs(lam))
    lo = lam[:-1] + np.maximum(1e-13 * gaps, eps_edge[:-1])
    hi = lam[1:] - np.maximum(1e-13 * gaps, eps_edge[1:])
    flo = _values(w, lo)
    fhi = _values(w, hi)
    # Degenerate sides: the zero hugs the pole closer than the edge offset.
    left_stuck = flo >= 0.0
    right_stuck = fhi <= 0.0
    out = np.where(left_stuck, lo, np.where(right_stuck, hi, 0.0))
    todo = ~(left_stuck | right_stuck)
    if np.any(todo):
        roots = _poly.bisect_roots(lambda x: _values(w, x), lo[todo], hi[todo])
        roots = _poly.newton_polish(
            lambda x: _values(w, x),
            lambda x: (rho[None, :] / (lam[None, :] - x[..., None]) ** 2).sum(axis=-1),
            roots,
            steps=3,
            max_move=0.25 * gaps[todo],
        )
        out[todo] = roots
    return Divisor(out)


def _dec_quotient(lam: np.ndarray, rho: np.ndarray):
    """Decimal coefficients of p = prod (x - lam_k) and q = sum_k rho_k p/(x - lam_k).

    Float64 inputs convert to decimal exactly; the expansion keeps every
    residue's contribution at full relative accuracy, which float64
    coefficients cannot (a weight near 1e-16 drowns in the rounding of the
    other terms).  Each cofactor p/(x - lam_k) comes from synthetic division.
    """
    n = lam.size
    with localcontext() as ctx:
        ctx.prec = _DEC_DIGITS
        p = [Decimal(1)]
        for x in lam.tolist():
            dx = Decimal(x)
            nxt = [Decimal(0)] * (len(p) + 1)
            for i, pi in enumerate(p):
                nxt[i] -= dx * pi
                nxt[i + 1] += pi
            p = nxt
        q = [Decimal(0)] * n
        for k in range(n):
            dx = Decimal(lam[k])
            b = [Decimal(0)] * n
            b[n - 1] = p[n]
            for i in range(n - 1, 0, -1):
                b[i - 1] = p[i] + dx * b[i]
            weight = Decimal(rho[k])
            for i in range(n):
                q[i] += weight * b[i]
    return tuple(p), tuple(q)


def to_quotient(w: RationalHerglotz) -> PolyQuotient:
    """Quotient form: p monic with roots at the poles, q the unique
    polynomial of degree N-1 with q(pole_k) = p'(pole_k) * residue_k."""
    lam, rho = w.poles, w.residues
    n = w.n
    p = npoly.polyfromroots(lam)
    q = np.zeros(n)
    for k in range(n):
        q += rho[k] * npoly.polyfromroots(np.delete(lam, k))
    span = max(lam[-1] - lam[0], 1.0)
    nodes = _poly.cheb_nodes(n + 1, lam[0] - 0.05 * span, lam[-1] + 0.05 * span)
    p_nodes = np.prod(nodes[:, None] - lam[None, :], axis=1)
    q_nodes = np.zeros(n + 1)
    for k in range(n):
        q_nodes += rho[k] * np.prod(nodes[:, None] - np.delete(lam, k)[None, :], axis=1)
    p_dec, q_dec = _dec_quotient(lam, rho)
    return PolyQuotient(
        p=p,
        q=q,
        nodes=nodes,
        p_nodes=p_nodes,
        q_nodes=q_nodes,
        p_dec=p_dec,
        q_dec=q_dec,
    )


def from_quotient(pq: PolyQuotient) -> RationalHerglotz:
    """Recover poles and residues from the quotient form.

    Residues are q(root)/p'(root) with p' in product form; any nonpositive
    residue means the quotient is not a positive pole sum.
    """
    try:
        roots = _poly.real_simple_roots(np.asarray(pq.p, dtype=float))
    except InvalidData as exc:
        raise NotHerglotz("denominator does not have real simple roots") from exc
    if roots.size > 1 and np.min(np.diff(roots)) <= 0.0:
        raise NotHerglotz("denominator roots are not separated")
    dp = np.array([np.prod(roots[k] - np.delete(roots, k)) for k in range(roots.size)])
    rho = npoly.polyval(roots, pq.q) / dp
    if not np.all(rho > 0.0):
        raise NotHerglotz("quotient has a nonpositive residue")
    return RationalHerglotz(roots, rho)


def exp_representation_residual(w: RationalHerglotz, n_points: int = 32) -> float:
    """Max deviation of w from its exponential (shift-function) form.

    After moving the leftmost pole to the origin, the function equals
    -(1/z) times the product of (gamma_s - z)/(lambda_s - z) over the gaps.
    Sampled at off-spectrum points.
    """
    shift = w.poles[0]
    lam0 = w.poles - shift
    gam0 = zeros(w).gammas - shift
    avoid = np.concatenate((lam0, gam0)) if gam0.size else lam0
    pts = _poly.offspectrum_samples(avoid, n_points)
    wv = (w.residues[None, :] / (lam0[None, :] - pts[:, None])).sum(axis=1)
    if gam0.size:
        prod = np.prod(
            (gam0[None, :] - pts[:, None]) / (lam0[None, 1:] - pts[:, None]), axis=1
        )
    else:
        prod = np.ones_like(pts)
    return float(np.max(np.abs(wv + prod / pts)))


def krein(w: RationalHerglotz, n_moments: int = 4) -> KreinData:
    """Spectral-shift data of a normalized pole sum.

    Entry k of ``f`` is the integral of z^k over the union of gap intervals
    [lambda_s, gamma_s] (shifted spectrum), i.e. the k-th moment of the
    shift function.  The exponential representation is verified on sample
    points before returning.
    """
    if not w.normalized:
        raise InvalidData("exponential representation requires unit total residue")
    shift = float(w.poles[0])
    lam0 = w.poles - shift
    lam0[0] = 0.0
    gam0 = zeros(w).gammas - shift
    k = np.arange(1, n_moments + 1, dtype=float)
    if gam0.size:
        f = (np.sum(gam0[None, :] ** k[:, None], axis=1) - np.sum(lam0[None, 1:] ** k[:, None], axis=1)) / k
    else:
        f = np.zeros(n_moments)
    resid = exp_representation_residual(w)
    if resid > 1e-8:
        raise TodaError("exponential representation failed self-check: %.3e" % resid)
    return KreinData(lambdas0=lam0, gammas=gam0, f=f, shift=shift)


def trace_moments(w: RationalHerglotz, n_max: int) -> np.ndarray:
    """Power sums s_n = sum_k residue_k * pole_k^n for n = 0..n_max."""
    n = np.arange(n_max + 1)
    return (w.residues[None, :] * w.poles[None, :] ** n[:, None]).sum(axis=1)


def trace_via_delta(kd: KreinData, n_max: int) -> np.ndarray:
    """Power sums of the shifted spectrum from the gap data alone.

    Each gap contributes a one-sided series with coefficients 1 and
    lambda^(p-1) (lambda - gamma); the power sums are the coefficients of the
    product of those series.  The order is capped: the convolution count and
    conditioning both grow with n.
    """
    if n_max > 12:
        raise InvalidData("series order capped at 12")
    lam = kd.lambdas0[1:]
    gam = kd.gammas
    conv = np.zeros(n_max + 1)
    conv[0] = 1.0
    p = np.arange(1, n_max + 1, dtype=float)
    for s in range(lam.size):
        factor = np.empty(n_max + 1)
        factor[0] = 1.0
        factor[1:] = lam[s] ** (p - 1) * (lam[s] - gam[s])
        conv = np.convolve(conv, factor)[: n_max + 1]
    return conv


def trace_via_krein(kd: KreinData) -> np.ndarray:
    """First four power sums of the shifted spectrum from the shift moments."""
    if kd.f.size < 3:
        raise InvalidData("need the first three shift moments")
    f0, f1, f2 = kd.f[0], kd.f[1], kd.f[2]
    return np.array([1.0, -f0, f0**2 / 2.0 - f1, f0 * f1 - f2 - f0**3 / 6.0])
