"""Quadratic Poisson structures on rational pole sums.

The bracket of two evaluations of the function at distinct points is a
quadratic expression in the two values; in pole-residue coordinates this
becomes an explicit antisymmetric tensor, in either the full chart or the
chart restricted to unit total residue.  This module builds those tensors
together with their analytic partial derivatives (for Jacobi-identity
checks), contracts observables against them, performs the constrained
reduction from the full chart to the restricted one, and packages the
coordinate-bracket verifications used by the acceptance suite.

Report generators are pure functions of their inputs and may be fanned out
over sample points concurrently.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    AtPole,
    CoincidentArguments,
    ConstraintDegenerate,
    GradientFailure,
    InvalidData,
)
from .rational_weyl import RationalHerglotz, evaluate, zeros

CHART_UNRESTRICTED = "unrestricted"
CHART_RESTRICTED = "restricted"


def _readonly(a) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class ChartPoint:
    """A point in pole-residue coordinates, tagged with its chart.

    Restricted points must have residues summing to one.  Points with a
    residue below 1e-8 sit near the chart boundary; brackets still evaluate
    there but emit a warning.
    """

    lambdas: np.ndarray
    rhos: np.ndarray
    chart: str = CHART_RESTRICTED

    def __post_init__(self):
        object.__setattr__(self, "lambdas", _readonly(self.lambdas))
        object.__setattr__(self, "rhos", _readonly(self.rhos))
        if self.chart not in (CHART_UNRESTRICTED, CHART_RESTRICTED):
            raise InvalidData("unknown chart %r" % (self.chart,))
        lam, rho = self.lambdas, self.rhos
        if lam.ndim != 1 or lam.size < 1 or rho.shape != lam.shape:
            raise InvalidData("need matching pole and residue arrays")
        if lam.size > 1 and not np.all(np.diff(lam) > 0.0):
            raise InvalidData("poles must be strictly increasing")
        if not np.all(rho > 0.0):
            raise InvalidData("residues must be positive")
        if self.chart == CHART_RESTRICTED and abs(float(np.sum(rho)) - 1.0) > 1e-8:
            raise InvalidData("restricted chart requires unit total residue")

    @property
    def n(self) -> int:
        return self.lambdas.size

    @property
    def near_boundary(self) -> bool:
        return bool(np.min(self.rhos) < 1e-8)


@dataclass(frozen=True, eq=False)
class PoissonTensor:
    """Antisymmetric bracket matrix in coordinates (rho_0..rho_{N-1},
    lambda_0..lambda_{N-1})."""

    j: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "j", _readonly(self.j))
        m = self.j
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
            raise InvalidData("tensor must be square of even dimension")
        if not np.array_equal(m, -m.T):
            raise InvalidData("tensor must be exactly antisymmetric")


@dataclass(frozen=True)
class Observable:
    """Scalar function of a chart point with an optional analytic gradient.

    ``fn(lambdas, rhos)`` returns the value; ``grad(lambdas, rhos)`` returns
    the derivative vector ordered (d/drho, d/dlambda).  Functions must
    accept raw arrays because finite differencing steps off the restricted
    submanifold.
    """

    fn: Callable[[np.ndarray, np.ndarray], float]
    grad: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None
    name: str = ""

    def value(self, pt: ChartPoint) -> float:
        return float(self.fn(pt.lambdas, pt.rhos))


def _inverse_gaps(lam: np.ndarray) -> np.ndarray:
    """Matrix inv[k, n] = 1/(lam_n - lam_k) with zero diagonal."""
    n = lam.size
    d = lam[None, :] - lam[:, None]
    np.fill_diagonal(d, 1.0)
    inv = 1.0 / d
    np.fill_diagonal(inv, 0.0)
    return inv


def tensor_at(pt: ChartPoint) -> PoissonTensor:
    """Bracket tensor of the chart at the given point."""
    lam, rho = pt.lambdas, pt.rhos
    n = pt.n
    inv = _inverse_gaps(lam)
    rr = np.outer(rho, rho)
    a = 2.0 * rr * inv
    if pt.chart == CHART_RESTRICTED:
        s = (rho[None, :] * inv).sum(axis=1)
        a = a + 2.0 * rr * (s[None, :] - s[:, None])
        np.fill_diagonal(a, 0.0)
        b = np.diag(rho) - rr
    else:
        b = np.diag(rho)
    j = np.zeros((2 * n, 2 * n))
    j[:n, :n] = a
    j[:n, n:] = b
    j[n:, :n] = -b.T
    j = 0.5 * (j - j.T)  # exact antisymmetry down to signed zeros
    return PoissonTensor(j)


def _tensor_partials(pt: ChartPoint) -> np.ndarray:
    """Analytic partials dJ[l, i, j] = d J_ij / d x_l, x = (rho, lambda)."""
    lam, rho = pt.lambdas, pt.rhos
    n = pt.n
    inv = _inverse_gaps(lam)
    inv2 = inv * inv
    restricted = pt.chart == CHART_RESTRICTED
    dj = np.zeros((2 * n, 2 * n, 2 * n))
    if restricted:
        s = (rho[None, :] * inv).sum(axis=1)
        # dS[k, m] wrt rho_m and lambda_m
        ds_rho = inv.copy()  # dS_k/drho_m = 1/(lam_m - lam_k), zero at m = k
        ds_lam = -rho[None, :] * inv2
        np.fill_diagonal(ds_lam, (rho[None, :] * inv2).sum(axis=1))
    for m in range(n):
        # partials of the rho-rho block
        da = np.zeros((n, n))
        for k in range(n):
            for q in range(n):
                if k == q:
                    continue
                base = inv[k, q]
                if restricted:
                    base = base + (s[q] - s[k])
                term = 0.0
                if m == k:
                    term += 2.0 * rho[q] * base
                if m == q:
                    term += 2.0 * rho[k] * base
                if restricted:
                    term += 2.0 * rho[k] * rho[q] * (ds_rho[q, m] - ds_rho[k, m])
                da[k, q] = term
        dj[m, :n, :n] = da
        # partials of the rho-lambda block
        db = np.zeros((n, n))
        db[m, m] = 1.0
        if restricted:
            db[m, :] -= rho
            db[:, m] -= rho
        dj[m, :n, n:] = db
        dj[m, n:, :n] = -db.T
    for m in range(n):
        da = np.zeros((n, n))
        for k in range(n):
            for q in range(n):
                if k == q:
                    continue
                dbase = ((m == k) - (m == q)) * inv2[k, q]
                if restricted:
                    dbase = dbase + (ds_lam[q, m] - ds_lam[k, m])
                da[k, q] = 2.0 * rho[k] * rho[q] * dbase
        dj[n + m, :n, :n] = da
    return dj


def jacobi_residual(pt: ChartPoint) -> float:
    """Max cyclic-sum residual of the Jacobi identity with analytic partials."""
    j = tensor_at(pt).j
    dj = _tensor_partials(pt)
    t = (
        np.einsum("il,ljk->ijk", j, dj)
        + np.einsum("jl,lki->ijk", j, dj)
        + np.einsum("kl,lij->ijk", j, dj)
    )
    return float(np.max(np.abs(t)))


def antisymmetry_residual(pt: ChartPoint) -> float:
    """Exactly zero by construction; kept as an explicit health check."""
    j = tensor_at(pt).j
    return float(np.max(np.abs(j + j.T)))


def _fd_jacobian(
    vfn: Callable[[np.ndarray, np.ndarray], np.ndarray],
    lam: np.ndarray,
    rho: np.ndarray,
    *,
    rel_step: float = 1e-6,
) -> np.ndarray:
    """Richardson-extrapolated central differences with a two-step
    consistency guard on every component."""
    x0 = np.concatenate((rho, lam))
    f0 = np.atleast_1d(np.asarray(vfn(lam, rho), dtype=float))
    floor = 1e-7 * max(1.0, float(np.max(np.abs(f0))))
    n = lam.size
    jac = np.empty((f0.size, 2 * n))

    def call(x: np.ndarray) -> np.ndarray:
        return np.atleast_1d(np.asarray(vfn(x[n:], x[:n]), dtype=float))

    for i in range(2 * n):
        h = rel_step * max(1.0, abs(x0[i]))
        xp, xm = x0.copy(), x0.copy()
        xp[i] += h
        xm[i] -= h
        d1 = (call(xp) - call(xm)) / (2.0 * h)
        xp, xm = x0.copy(), x0.copy()
        xp[i] += 0.5 * h
        xm[i] -= 0.5 * h
        d2 = (call(xp) - call(xm)) / h
        diff = np.abs(d1 - d2)
        scale = np.maximum(np.abs(d1), np.abs(d2))
        bad = (diff > 0.1 * scale) & (diff > floor)
        if np.any(bad):
            raise GradientFailure(
                "finite-difference estimates disagree for component %d" % i
            )
        jac[:, i] = (4.0 * d2 - d1) / 3.0
    return jac


def gradient(obs: Observable, pt: ChartPoint) -> np.ndarray:
    """Gradient of an observable at a point, analytic when available."""
    if obs.grad is not None:
        g = np.asarray(obs.grad(pt.lambdas, pt.rhos), dtype=float)
        if g.shape != (2 * pt.n,):
            raise InvalidData("gradient must have length 2N")
        return g
    return _fd_jacobian(obs.fn, pt.lambdas, pt.rhos)[0]


def bracket(f: Observable, g: Observable, pt: ChartPoint) -> float:
    """Poisson bracket {f, g} at the point, via the chart tensor."""
    if pt.near_boundary:
        warnings.warn(
            "bracket evaluated near a chart boundary (tiny residue)",
            RuntimeWarning,
            stacklevel=2,
        )
    j = tensor_at(pt).j
    return float(gradient(f, pt) @ j @ gradient(g, pt))


def ah_formula(w: RationalHerglotz, lam: float, mu: float, restricted: bool = False) -> float:
    """Two-point bracket of function values, in closed form.

    Unrestricted: (w(lam) - w(mu))^2 / (lam - mu).  Restricted to unit total
    residue the constrained correction subtracts the product of the values:
    (w(lam) - w(mu)) * ((w(lam) - w(mu))/(lam - mu) - w(lam) w(mu)).
    """
    lam = float(lam)
    mu = float(mu)
    if abs(lam - mu) < 1e-6:
        raise CoincidentArguments("bracket arguments closer than 1e-6")
    wl = evaluate(w, lam)
    wm = evaluate(w, mu)
    d = wl - wm
    if restricted:
        return float(d * (d / (lam - mu) - wl * wm))
    return float(d * d / (lam - mu))


def ah_formula_xi(w: RationalHerglotz, lam: float, mu: float) -> float:
    """Restricted two-point bracket computed in exponent form.

    The function values are rebuilt from the divisor through the signed gap
    product (the exponential representation route, anchored at the lowest
    pole) instead of the pole sum, and combined as
    (w(lam)-w(mu))^2/((lam-mu) w(lam) w(mu)) - w(lam) + w(mu),
    which is the bracket of the log-exponents; multiplied by
    w(lam)*w(mu) it must agree with the restricted closed form.
    """
    lam = float(lam)
    mu = float(mu)
    if abs(lam - mu) < 1e-6:
        raise CoincidentArguments("bracket arguments closer than 1e-6")
    if not w.normalized:
        raise InvalidData("exponent form requires unit total residue")
    shift = float(w.poles[0])
    poles0 = w.poles - shift
    gam0 = zeros(w).gammas - shift

    def value(x: float) -> float:
        if np.min(np.abs(np.concatenate((poles0, gam0)) - x)) < 1e-14:
            raise AtPole("evaluation point coincides with a pole or zero")
        return float(-np.prod(gam0 - x) / np.prod(poles0[1:] - x) / x)

    wl = value(lam - shift)
    wm = value(mu - shift)
    d = wl - wm
    return float(d * d / ((lam - mu) * wl * wm) - wl + wm)


def weyl_value(x: float) -> Observable:
    """Observable: value of the pole sum at a fixed off-spectrum point."""
    x = float(x)

    def fn(lam: np.ndarray, rho: np.ndarray) -> float:
        return float(np.sum(rho / (lam - x)))

    def grad(lam: np.ndarray, rho: np.ndarray) -> np.ndarray:
        return np.concatenate((1.0 / (lam - x), -rho / (lam - x) ** 2))

    return Observable(fn, grad, name="w(%g)" % x)


def verify_formula_vs_tensor(pt: ChartPoint, lam: float, mu: float) -> float:
    """Relative gap between the closed-form two-point bracket and the tensor
    contraction of the two evaluation observables."""
    w = RationalHerglotz(pt.lambdas, pt.rhos)
    formula = ah_formula(w, lam, mu, restricted=pt.chart == CHART_RESTRICTED)
    tens = bracket(weyl_value(lam), weyl_value(mu), pt)
    return abs(formula - tens) / max(1.0, abs(formula))


def _total_residue() -> Observable:
    return Observable(
        lambda lam, rho: float(np.sum(rho)),
        lambda lam, rho: np.concatenate((np.ones(lam.size), np.zeros(lam.size))),
        name="q0",
    )


def _log_total_residue() -> Observable:
    return Observable(
        lambda lam, rho: float(np.log(np.sum(rho))),
        lambda lam, rho: np.concatenate(
            (np.full(lam.size, 1.0 / float(np.sum(rho))), np.zeros(lam.size))
        ),
        name="log q0",
    )


def _minus_spectral_sum() -> Observable:
    return Observable(
        lambda lam, rho: -float(np.sum(lam)),
        lambda lam, rho: np.concatenate((np.zeros(lam.size), -np.ones(lam.size))),
        name="p0",
    )


def dirac_reduce(pt: ChartPoint, f: Observable, g: Observable) -> float:
    """Constrained bracket on the full chart.

    Uses the top coefficients of the quotient form as the constraint pair:
    the total residue (whose log is the first constraint) and minus the
    spectral sum.  Their pairing is constant, but it is checked anyway; on
    the unit-residue slice the result equals the restricted-chart bracket.
    """
    if pt.chart != CHART_UNRESTRICTED:
        raise InvalidData("reduction starts from the unrestricted chart")
    q0 = _total_residue()
    logq0 = _log_total_residue()
    p0 = _minus_spectral_sum()
    pairing = bracket(p0, logq0, pt)
    if abs(pairing) < 1e-8:
        raise ConstraintDegenerate("constraint pairing vanished")
    return (
        bracket(f, g, pt)
        + bracket(logq0, g, pt) * bracket(f, p0, pt)
        - bracket(p0, g, pt) * bracket(f, logq0, pt)
    )


def _divisor_vector(lam: np.ndarray, rho: np.ndarray) -> np.ndarray:
    return zeros(RationalHerglotz(lam, rho)).gammas


def _theta_vector(lam: np.ndarray, rho: np.ndarray) -> np.ndarray:
    diff = np.abs(lam[:, None] - lam[None, :])
    np.fill_diagonal(diff, 1.0)
    logs = np.log(rho) + np.log(diff).sum(axis=1)
    return logs[1:] - logs[0]


def _pi_vector(lam: np.ndarray, rho: np.ndarray) -> np.ndarray:
    gam = _divisor_vector(lam, rho)
    return np.log(np.abs(gam[:, None] - lam[None, :])).sum(axis=1)


def _theta_prime_vector(lam: np.ndarray, rho: np.ndarray) -> np.ndarray:
    shift = lam[0]
    lam0 = lam - shift
    gam0 = _divisor_vector(lam, rho) - shift
    xi0 = float(np.sum(np.log(gam0) - np.log(lam0[1:])))
    n = lam.size
    out = np.empty(n - 1)
    for k in range(1, n):
        gam_part = float(np.sum(np.log(np.abs(gam0 - lam0[k]))))
        lam_part = float(np.sum(np.log(np.abs(np.delete(lam0[1:], k - 1) - lam0[k]))))
        out[k - 1] = gam_part - lam_part - xi0 - np.log(lam0[k])
    return out


def _pair(ja: np.ndarray, j: np.ndarray, jb: np.ndarray) -> np.ndarray:
    return ja @ j @ jb.T


def canonical_report(pt: ChartPoint) -> dict[str, float]:
    """Residuals of the canonical relations in the restricted chart.

    Checks, with delta the Kronecker symbol: angle/pole brackets equal
    delta_k^n - delta_0^n, angles commute, quasimomentum/divisor brackets are
    the identity, divisor points and quasimomenta separately commute, the
    exponential-representation angles pair with the non-anchor poles as the
    identity, and the spectral-sum Casimir commutes with every family.
    """
    if pt.chart != CHART_RESTRICTED:
        raise InvalidData("canonical relations live on the restricted chart")
    if pt.n < 2:
        raise InvalidData("needs at least two poles")
    n = pt.n
    lam, rho = pt.lambdas, pt.rhos
    j = tensor_at(pt).j
    j_theta = _fd_jacobian(_theta_vector, lam, rho)
    j_gamma = _fd_jacobian(_divisor_vector, lam, rho)
    j_pi = _fd_jacobian(_pi_vector, lam, rho)
    j_thp = _fd_jacobian(_theta_prime_vector, lam, rho)
    j_lam = np.hstack((np.zeros((n, n)), np.eye(n)))
    j_rho = np.hstack((np.eye(n), np.zeros((n, n))))
    j_cas = np.concatenate((np.zeros(n), np.ones(n)))[None, :]
    expect_tl = np.zeros((n - 1, n))
    for k in range(1, n):
        expect_tl[k - 1, k] = 1.0
        expect_tl[k - 1, 0] -= 1.0
    eye = np.eye(n - 1)
    report = {
        "theta_lambda": float(np.max(np.abs(_pair(j_theta, j, j_lam) - expect_tl))),
        "theta_theta": float(np.max(np.abs(_pair(j_theta, j, j_theta)))),
        "pi_gamma": float(np.max(np.abs(_pair(j_pi, j, j_gamma) - eye))),
        "gamma_gamma": float(np.max(np.abs(_pair(j_gamma, j, j_gamma)))),
        "pi_pi": float(np.max(np.abs(_pair(j_pi, j, j_pi)))),
        "thetaprime_lambda": float(
            np.max(np.abs(_pair(j_thp, j, j_lam)[:, 1:] - eye))
        ),
        "casimir_theta": float(np.max(np.abs(_pair(j_cas, j, j_theta)))),
        "casimir_gamma": float(np.max(np.abs(_pair(j_cas, j, j_gamma)))),
        "casimir_pi": float(np.max(np.abs(_pair(j_cas, j, j_pi)))),
        "casimir_rho": float(np.max(np.abs(_pair(j_cas, j, j_rho)))),
    }
    return report


def _dual_residue_vector(lam: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Residues of the negative reciprocal pole sum at the divisor points."""
    gam = _divisor_vector(lam, rho)
    q0 = float(np.sum(rho))
    out = np.empty(gam.size)
    for k in range(gam.size):
        num = np.prod(gam[k] - lam)
        den = q0 * np.prod(gam[k] - np.delete(gam, k)) if gam.size > 1 else q0
        out[k] = -num / den
    return out


def dual_identities(pt: ChartPoint) -> dict[str, float]:
    """Bracket identities for the dual data (divisor-side residues, the top
    quotient coefficients) on the unrestricted chart; residuals are scaled
    by max(1, |expected|)."""
    if pt.chart != CHART_UNRESTRICTED:
        raise InvalidData("dual identities live on the unrestricted chart")
    if pt.n < 2:
        raise InvalidData("needs at least two poles")
    n = pt.n
    lam, rho = pt.lambdas, pt.rhos
    j = tensor_at(pt).j
    gam = _divisor_vector(lam, rho)
    rhop = _dual_residue_vector(lam, rho)
    q0_val = float(np.sum(rho))
    j_gamma = _fd_jacobian(_divisor_vector, lam, rho)
    j_rhop = _fd_jacobian(_dual_residue_vector, lam, rho)
    q0 = _total_residue()
    p0 = _minus_spectral_sum()
    j_q0 = np.asarray(q0.grad(lam, rho))[None, :]
    j_p0 = np.asarray(p0.grad(lam, rho))[None, :]

    def rel(x: np.ndarray, expected: np.ndarray) -> float:
        return float(np.max(np.abs(x - expected) / np.maximum(1.0, np.abs(expected))))

    inv = _inverse_gaps(gam)
    expect_rr = 2.0 * np.outer(rhop, rhop) * inv
    report = {
        "rhoprime_gamma": rel(_pair(j_rhop, j, j_gamma), np.diag(rhop)),
        "rhoprime_rhoprime": rel(_pair(j_rhop, j, j_rhop), expect_rr),
        "gamma_gamma": rel(_pair(j_gamma, j, j_gamma), np.zeros((n - 1, n - 1))),
        "q0_gamma": rel(_pair(j_q0, j, j_gamma), np.zeros((1, n - 1))),
        "q0_rhoprime": rel(_pair(j_q0, j, j_rhop), np.zeros((1, n - 1))),
        "rhoprime_p0": rel(_pair(j_rhop, j, j_p0), rhop[:, None]),
        "p0_gamma": rel(_pair(j_p0, j, j_gamma), np.zeros((1, n - 1))),
        "p0_q0": rel(_pair(j_p0, j, j_q0), np.array([[q0_val]])),
    }
    return report


def entry_bracket_residual(pt: ChartPoint) -> float:
    """Residual of the leading matrix-entry bracket {c_0, v_0} = -c_0 / 2,
    with v_0 and c_0 expressed through the first two moments."""
    if pt.chart != CHART_RESTRICTED:
        raise InvalidData("matrix-entry brackets live on the restricted chart")

    def s1(lam, rho):
        return float(np.sum(rho * lam))

    def s1_grad(lam, rho):
        return np.concatenate((lam, rho))

    def c0(lam, rho):
        m1 = float(np.sum(rho * lam))
        var = float(np.sum(rho * lam**2)) - m1 * m1
        return float(np.sqrt(var))

    def c0_grad(lam, rho):
        m1 = float(np.sum(rho * lam))
        root = c0(lam, rho)
        dvar = np.concatenate((lam**2 - 2 * m1 * lam, 2 * rho * (lam - m1)))
        return dvar / (2.0 * root)

    v0_obs = Observable(s1, s1_grad, name="v0")
    c0_obs = Observable(c0, c0_grad, name="c0")
    lhs = bracket(c0_obs, v0_obs, pt)
    rhs = -0.5 * c0_obs.value(pt)
    return abs(lhs - rhs)
