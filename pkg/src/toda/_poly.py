"""Polynomial plumbing shared by the transform layers.

Coefficient arrays are ordered constant term first.  Root finding never goes
through a companion matrix: every root comes out of a certified sign-change
bracket refined by bisection, optionally polished with Newton steps.
"""

from __future__ import annotations

from typing import Callable

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import ConvergenceFailure, InvalidData


def bisect_roots(
    f: Callable[[np.ndarray], np.ndarray],
    lo: np.ndarray,
    hi: np.ndarray,
    *,
    rtol: float = 1e-15,
    max_iter: int = 200,
) -> np.ndarray:
    """Refine one root per bracket [lo_i, hi_i] by bisection.

    Each bracket must carry a sign change of ``f``.  Zero function values are
    pushed to the upper half so the loop keeps shrinking.
    """
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    flo = np.asarray(f(lo), dtype=float)
    fhi = np.asarray(f(hi), dtype=float)
    if np.any(np.sign(flo) * np.sign(fhi) > 0):
        raise InvalidData("bracket does not straddle a sign change")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if np.all(hi - lo <= rtol * np.maximum(1.0, np.abs(mid))):
            break
        fm = np.asarray(f(mid), dtype=float)
        same = np.sign(fm) == np.sign(flo)
        lo = np.where(same, mid, lo)
        flo = np.where(same, fm, flo)
        hi = np.where(same, hi, mid)
    else:
        raise ConvergenceFailure("bisection did not reach tolerance")
    return 0.5 * (lo + hi)


def newton_polish(
    f: Callable[[np.ndarray], np.ndarray],
    df: Callable[[np.ndarray], np.ndarray],
    x: np.ndarray,
    *,
    steps: int = 3,
    max_move: np.ndarray | float | None = None,
) -> np.ndarray:
    """A few guarded Newton steps from already-accurate starting points."""
    x = np.array(x, dtype=float)
    for _ in range(steps):
        fx = np.asarray(f(x), dtype=float)
        dfx = np.asarray(df(x), dtype=float)
        safe = dfx != 0.0
        step = np.where(safe, fx / np.where(safe, dfx, 1.0), 0.0)
        if max_move is not None:
            step = np.clip(step, -max_move, max_move)
        x = x - step
    return x


def real_simple_roots(coef: np.ndarray, *, polish: int = 3) -> np.ndarray:
    """All roots of a polynomial expected to have real simple roots only.

    Recursively locates the critical points (roots of the derivative), which
    split the line into monotone pieces; each piece is then checked for a
    sign change and bisected.  Raises ``InvalidData`` when the polynomial
    cannot have the full count of real simple roots.
    """
    c = np.asarray(coef, dtype=float)
    if c.size == 0 or c[-1] == 0.0:
        raise InvalidData("leading coefficient must be nonzero")
    deg = c.size - 1
    if deg == 0:
        return np.empty(0)
    if deg == 1:
        return np.array([-c[0] / c[1]])
    crit = np.sort(real_simple_roots(npoly.polyder(c), polish=0))
    bound = 1.0 + np.max(np.abs(c[:-1])) / abs(c[-1])
    bound = max(bound, np.max(np.abs(crit)) * 1.5 + 1.0)
    edges = np.concatenate(([-bound], crit, [bound]))
    vals = npoly.polyval(edges, c)
    change = np.sign(vals[:-1]) * np.sign(vals[1:]) < 0
    if int(np.count_nonzero(change)) != deg:
        raise InvalidData("polynomial does not have %d real simple roots" % deg)
    roots = bisect_roots(lambda x: npoly.polyval(x, c), edges[:-1][change], edges[1:][change])
    if polish > 0:
        dc = npoly.polyder(c)
        gap = np.min(np.diff(roots)) if roots.size > 1 else np.inf
        roots = newton_polish(
            lambda x: npoly.polyval(x, c),
            lambda x: npoly.polyval(x, dc),
            roots,
            steps=polish,
            max_move=0.25 * gap if np.isfinite(gap) else None,
        )
    return np.sort(roots)


def cheb_nodes(n: int, lo: float, hi: float) -> np.ndarray:
    """``n`` Chebyshev points of the first kind on [lo, hi], ascending."""
    i = np.arange(n)
    x = np.cos(np.pi * (2 * i + 1) / (2 * n))
    return np.sort(0.5 * (lo + hi) + 0.5 * (hi - lo) * x)


def bary_weights(nodes: np.ndarray) -> np.ndarray:
    """Barycentric weights, rescaled by the interval capacity for range safety."""
    x = np.asarray(nodes, dtype=float)
    n = x.size
    scale = 4.0 / max(x.max() - x.min(), np.finfo(float).tiny)
    w = np.ones(n)
    for i in range(n):
        w[i] = 1.0 / np.prod(scale * (x[i] - np.delete(x, i)))
    return w


def bary_eval(nodes: np.ndarray, values: np.ndarray, weights: np.ndarray, x) -> np.ndarray:
    """Second-form barycentric interpolation, exact at the nodes."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    diff = x[:, None] - nodes[None, :]
    hit = np.isclose(diff, 0.0, rtol=0.0, atol=0.0)
    diff_safe = np.where(hit, 1.0, diff)
    ratio = weights[None, :] / diff_safe
    out = (ratio @ values) / ratio.sum(axis=1)
    exact = hit.any(axis=1)
    if np.any(exact):
        idx = hit.argmax(axis=1)
        out = np.where(exact, values[idx], out)
    return out


def leading_coeff(nodes: np.ndarray, values: np.ndarray) -> float:
    """Highest divided difference: the leading coefficient of the degree
    ``len(nodes) - 1`` interpolant.  Uses unscaled weights, so keep the node
    count modest."""
    x = np.asarray(nodes, dtype=float)
    out = 0.0
    for i in range(x.size):
        out += values[i] / np.prod(x[i] - np.delete(x, i))
    return float(out)


def offspectrum_samples(avoid: np.ndarray, n: int, *, pad: float = 0.37, clearance: float = 0.02) -> np.ndarray:
    """Deterministic real sample points staying clear of the ``avoid`` set."""
    avoid = np.sort(np.asarray(avoid, dtype=float))
    span = max(avoid[-1] - avoid[0], 1.0)
    pts = np.linspace(avoid[0] - pad * span, avoid[-1] + pad * span, n)
    floor = clearance * span
    step = 0.61 * floor
    for i in range(pts.size):
        guard = 0
        while np.min(np.abs(pts[i] - avoid)) < floor:
            pts[i] += step
            guard += 1
            if guard > 200:
                raise ConvergenceFailure("could not place sample away from the spectrum")
    return pts
