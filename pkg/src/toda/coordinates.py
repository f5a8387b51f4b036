"""Canonical coordinate charts on the manifold of normalized pole sums.

Two charts are provided: logarithmic angles paired with the poles, and
logarithmic quasimomenta paired with the divisor (the zeros), with the pole
sum itself recoverable from either side.  Sign bookkeeping matters
throughout: the interlacing of poles and zeros makes every quantity under a
logarithm positive once the alternating parity factors are combined, and
the code asserts that instead of assuming it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _poly
from .errors import (
    ConvergenceFailure,
    InterlacingViolated,
    InvalidData,
    NoHerglotzSolution,
    Overflow,
    TodaError,
)
from .rational_weyl import Divisor, RationalHerglotz, zeros


def _readonly(a) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class ActionAngle:
    """Poles plus logarithmic angle variables (one per non-anchor pole)."""

    lambdas: np.ndarray
    thetas: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lambdas", _readonly(self.lambdas))
        object.__setattr__(self, "thetas", _readonly(self.thetas))
        if self.lambdas.ndim != 1 or self.lambdas.size < 1:
            raise InvalidData("need at least one pole")
        if self.lambdas.size > 1 and not np.all(np.diff(self.lambdas) > 0.0):
            raise InvalidData("poles must be strictly increasing")
        if self.thetas.shape != (self.lambdas.size - 1,):
            raise InvalidData("need one angle per non-anchor pole")
        if not (np.all(np.isfinite(self.lambdas)) and np.all(np.isfinite(self.thetas))):
            raise InvalidData("chart values must be finite")

    @property
    def n(self) -> int:
        return self.lambdas.size


@dataclass(frozen=True, eq=False)
class DivisorQuasimomentum:
    """Divisor points with logarithmic quasimomenta and the spectral sum
    (a Casimir) that pins down the complementary direction."""

    gammas: np.ndarray
    pis: np.ndarray
    casimir: float

    def __post_init__(self):
        object.__setattr__(self, "gammas", _readonly(self.gammas))
        object.__setattr__(self, "pis", _readonly(self.pis))
        object.__setattr__(self, "casimir", float(self.casimir))
        if self.gammas.ndim != 1 or self.gammas.size < 1:
            raise InvalidData("need at least one divisor point")
        if self.gammas.size > 1 and not np.all(np.diff(self.gammas) > 0.0):
            raise InvalidData("divisor points must be strictly increasing")
        if self.pis.shape != self.gammas.shape:
            raise InvalidData("need one quasimomentum per divisor point")
        if not (
            np.all(np.isfinite(self.gammas))
            and np.all(np.isfinite(self.pis))
            and np.isfinite(self.casimir)
        ):
            raise InvalidData("chart values must be finite")

    @property
    def n(self) -> int:
        return self.gammas.size + 1


def _log_abs_dp(lam: np.ndarray) -> np.ndarray:
    """log |prod_{j != k} (lam_k - lam_j)| for every k."""
    diff = np.abs(lam[:, None] - lam[None, :])
    np.fill_diagonal(diff, 1.0)
    return np.log(diff).sum(axis=1)


def theta_from(w: RationalHerglotz) -> ActionAngle:
    """Angle variables of a normalized pole sum.

    theta_k compares the numerator values at pole k and at the anchor pole;
    in terms of the data this is log of (rho_k |p'_k|) / (rho_0 |p'_0|),
    which is positive for every pole sum, so the chart is total.
    """
    if not w.normalized:
        raise InvalidData("angles are defined for unit total residue")
    lam = w.poles
    logs = np.log(w.residues) + _log_abs_dp(lam)
    return ActionAngle(lam, logs[1:] - logs[0])


def w_from_theta(lambdas: np.ndarray, thetas: np.ndarray) -> RationalHerglotz:
    """Inverse of :func:`theta_from` for the given poles.

    The residue ratios fixed by the angles leave a single overall scale,
    pinned by the unit-sum normalization; evaluated in log space so that
    angles of order +-50 stay inside double range.
    """
    lam = np.asarray(lambdas, dtype=float)
    th = np.asarray(thetas, dtype=float)
    if lam.ndim != 1 or th.shape != (lam.size - 1,):
        raise InvalidData("need one angle per non-anchor pole")
    logdp = _log_abs_dp(lam)
    scaled = np.concatenate(([0.0], th + logdp[0] - logdp[1:]))
    scaled -= scaled.max()
    weights = np.exp(scaled)
    return RationalHerglotz(lam, weights / weights.sum())


def w_from_gamma(lambdas: np.ndarray, gammas: np.ndarray) -> RationalHerglotz:
    """Pole sum with prescribed poles and zeros.

    Residues are q(pole_k)/p'(pole_k) with both polynomials in product form,
    evaluated as paired quotients to keep magnitudes balanced.  The unit sum
    of the residues is an identity of the construction, not a rescaling.
    """
    lam = np.asarray(lambdas, dtype=float)
    gam = np.asarray(gammas, dtype=float)
    if lam.ndim != 1 or gam.shape != (lam.size - 1,):
        raise InvalidData("need one divisor point per spectral gap")
    if not (np.all(lam[:-1] < gam) and np.all(gam < lam[1:])):
        raise InterlacingViolated("divisor must interlace the poles")
    n = lam.size
    rho = np.empty(n)
    for k in range(n):
        others = np.delete(lam, k)
        rho[k] = np.prod((lam[k] - gam) / (lam[k] - others))
    if not np.all(rho > 0.0):
        raise InterlacingViolated("interlacing failed to produce positive residues")
    return RationalHerglotz(lam, rho)


def pi_from(w: RationalHerglotz) -> DivisorQuasimomentum:
    """Quasimomenta: log of the alternating-sign values of the monic pole
    polynomial at the divisor points, plus the spectral-sum Casimir."""
    if not w.normalized:
        raise InvalidData("quasimomenta are defined for unit total residue")
    if w.n < 2:
        raise InvalidData("the divisor chart needs at least two poles")
    lam = w.poles
    gam = zeros(w).gammas
    # (-1)^(N+k) p(gamma_k) > 0: gamma_k has N-k poles above it, and the
    # parity prefactor cancels the resulting sign exactly.
    pis = np.log(np.abs(gam[:, None] - lam[None, :])).sum(axis=1)
    return DivisorQuasimomentum(gam, pis, float(np.sum(lam)))


def _divisor_poly_evaluator(dq: DivisorQuasimomentum):
    """Callable evaluating the monic pole polynomial determined by the chart.

    Writing p = (z + alpha) * Omega(z) + I(z) with Omega the monic divisor
    polynomial and I the interpolant of the prescribed alternating values on
    the divisor, the two coefficient conditions (monic, spectral sum) fix
    alpha in closed form and no linear system is needed.
    """
    gam = dq.gammas
    n = dq.n
    k = np.arange(1, n)
    signs = np.where((n + k) % 2 == 0, 1.0, -1.0)
    if np.max(np.abs(dq.pis)) > 700.0:
        raise Overflow("quasimomentum exponent out of double range")
    vals = signs * np.exp(dq.pis)
    alpha = float(np.sum(gam)) - dq.casimir
    if gam.size == 1:
        weights = np.array([1.0])
    else:
        weights = _poly.bary_weights(gam)

    def evaluate(x: np.ndarray) -> np.ndarray:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        omega = np.prod(x[:, None] - gam[None, :], axis=1)
        interp = _poly.bary_eval(gam, vals, weights, x)
        return (x + alpha) * omega + interp

    return evaluate, vals


def w_from_divisor(dq: DivisorQuasimomentum) -> RationalHerglotz:
    """Pole sum with the prescribed divisor, quasimomenta and spectral sum.

    The alternating signs of the prescribed polynomial values force one sign
    change per gap and one beyond each end, so the pole polynomial always
    has a full set of real roots interlacing the divisor; they are found by
    bracketed bisection on the closed-form evaluator.
    """
    gam = dq.gammas
    n = dq.n
    evaluate, vals = _divisor_poly_evaluator(dq)
    span = max(gam[-1] - gam[0], 1.0)
    step = span
    left = gam[0] - step
    for _ in range(200):
        if np.sign(evaluate(left)[0]) * np.sign(vals[0]) < 0:
            break
        step *= 2.0
        left = gam[0] - step
        if not np.isfinite(left):
            raise NoHerglotzSolution("no pole below the divisor")
    else:
        raise NoHerglotzSolution("no pole below the divisor")
    step = span
    right = gam[-1] + step
    for _ in range(200):
        if evaluate(right)[0] > 0.0:
            break
        step *= 2.0
        right = gam[-1] + step
        if not np.isfinite(right):
            raise NoHerglotzSolution("no pole above the divisor")
    else:
        raise NoHerglotzSolution("no pole above the divisor")
    lo = np.concatenate(([left], gam))
    hi = np.concatenate((gam, [right]))
    try:
        lam = _poly.bisect_roots(lambda x: evaluate(x), lo, hi)
    except InvalidData as exc:
        raise NoHerglotzSolution("pole brackets lost their sign changes") from exc
    if not (np.all(lam[:-1] < gam) and np.all(gam < lam[1:])):
        raise NoHerglotzSolution("recovered poles do not interlace the divisor")
    if abs(float(np.sum(lam)) - dq.casimir) > 1e-6 * max(1.0, abs(dq.casimir)):
        raise TodaError("spectral sum drifted during divisor inversion")
    return w_from_gamma(lam, gam)


def theta_prime(w: RationalHerglotz) -> np.ndarray:
    """Exponential-representation angles, evaluated in the real convention.

    After shifting the anchor pole to the origin, each angle is the finite
    part of the shift-integral at its pole; all alternating parity factors
    combine to +1 so only logarithms of absolute values appear.  The fixed
    offset between these angles and the plain angles (a function of the
    poles alone) is verified before returning.
    """
    if not w.normalized:
        raise InvalidData("angles are defined for unit total residue")
    n = w.n
    if n == 1:
        return np.empty(0)
    shift = w.poles[0]
    lam = w.poles - shift
    gam = zeros(w).gammas - shift
    xi0 = float(np.sum(np.log(gam) - np.log(lam[1:])))
    out = np.empty(n - 1)
    for k in range(1, n):
        gam_part = float(np.sum(np.log(np.abs(gam - lam[k]))))
        lam_part = float(np.sum(np.log(np.abs(np.delete(lam[1:], k - 1) - lam[k]))))
        out[k - 1] = gam_part - lam_part - xi0 - np.log(lam[k])
    theta = theta_from(w).thetas
    for k in range(1, n):
        others = np.delete(lam[1:], k - 1)
        offset = float(np.sum(np.log(np.abs((others - lam[k]) / others))))
        if abs(theta[k - 1] - out[k - 1] - offset) > 1e-7 * max(1.0, abs(theta[k - 1])):
            raise TodaError("angle conventions disagree beyond tolerance")
    return out


def abel_period_check(lambdas: np.ndarray, k: int, p: int) -> complex:
    """Contour period of the k-th normalized pole differential around pole p.

    The differential (1/(z - lambda_k) - 1/(z - lambda_0)) dz is integrated
    over a circle of half the minimal gap radius centered at pole p with the
    256-node trapezoid rule, which is exact to machine precision here; the
    result should be 2 pi i (delta_kp - delta_0p).
    """
    lam = np.asarray(lambdas, dtype=float)
    if lam.size < 2 or not np.all(np.diff(lam) > 0.0):
        raise InvalidData("need at least two increasing poles")
    if not (1 <= k < lam.size) or not (0 <= p < lam.size):
        raise InvalidData("differential or contour index out of range")
    radius = 0.5 * float(np.min(np.abs(np.delete(lam, p) - lam[p])))
    t = 2.0 * np.pi * np.arange(256) / 256.0
    z = lam[p] + radius * np.exp(1j * t)
    dz = 1j * radius * np.exp(1j * t)
    f = 1.0 / (z - lam[k]) - 1.0 / (z - lam[0])
    return complex(np.sum(f * dz) * (2.0 * np.pi / 256.0))
