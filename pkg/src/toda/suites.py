"""Named verification suites: each runs a batch of identity checks on
seeded random instances and returns (residuals, thresholds) keyed by check
name.  A check passes when its residual does not exceed its threshold.

The suites mirror the package's invariants: reconstruction roundtrips,
trace-formula agreement, bracket closed forms against the tensor route,
canonical coordinate relations, the dual-data identities, and the flow
cross-validations.  Checks are independent and could run concurrently;
they are kept sequential here for deterministic accumulation.
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial import polynomial as npoly

from ._poly import offspectrum_samples
from .coordinates import (
    abel_period_check,
    pi_from,
    theta_from,
    w_from_divisor,
    w_from_gamma,
    w_from_theta,
)
from .errors import InvalidData
from .flows import flow_H, flow_T, lax_integrate, theta_flow
from .jacobi_core import JacobiMatrix, moments
from .poisson import (
    CHART_RESTRICTED,
    CHART_UNRESTRICTED,
    ChartPoint,
    ah_formula,
    ah_formula_xi,
    antisymmetry_residual,
    bracket,
    canonical_report,
    dirac_reduce,
    dual_identities,
    entry_bracket_residual,
    jacobi_residual,
    verify_formula_vs_tensor,
    weyl_value,
)
from .rational_weyl import (
    RationalHerglotz,
    evaluate,
    exp_representation_residual,
    krein,
    to_quotient,
    trace_via_delta,
    trace_via_krein,
    zeros,
)
from .spectral_direct import eigen, gluing_check, spectral_from_weyl, weyl, weyl_solution_residual
from .spectral_inverse import lanczos_reconstruct, stieltjes_reconstruct

SUITE_NAMES = ("roundtrip", "traces", "brackets", "canonical", "dual", "flows")

_E1 = JacobiMatrix([1.0, 1.0], [1.0])


def random_jacobi(rng: np.random.Generator, n: int) -> JacobiMatrix:
    """The documented random instance family: diagonal uniform in [-1, 1],
    off-diagonal uniform in [0.1, 2]."""
    if n < 1:
        raise InvalidData("matrix size must be positive")
    v = rng.uniform(-1.0, 1.0, n)
    c = rng.uniform(0.1, 2.0, max(n - 1, 0))
    return JacobiMatrix(v, c)


def random_chart_point(
    rng: np.random.Generator, n: int, chart: str = CHART_RESTRICTED
) -> ChartPoint:
    """Well-separated poles (gap at least 0.15) with residues drawn from
    [0.2, 2], normalized only in the restricted chart."""
    lam = np.cumsum(rng.uniform(0.15, 1.0, n)) + rng.uniform(-1.0, 1.0)
    rho = rng.uniform(0.2, 2.0, n)
    if chart == CHART_RESTRICTED:
        rho = rho / rho.sum()
    return ChartPoint(lam, rho, chart)


def random_interlacing(rng: np.random.Generator, lambdas: np.ndarray) -> np.ndarray:
    """A divisor drawn uniformly inside the open interlacing cells (kept off
    the cell walls by a 10% margin)."""
    lam = np.asarray(lambdas, dtype=float)
    u = rng.uniform(0.1, 0.9, lam.size - 1)
    return lam[:-1] + u * np.diff(lam)


def _matrix_distance(a: JacobiMatrix, b: JacobiMatrix) -> float:
    return max(
        float(np.max(np.abs(a.v - b.v))),
        float(np.max(np.abs(a.c - b.c))) if a.c.size else 0.0,
    )


def _merge(acc: dict[str, float], name: str, value: float) -> None:
    acc[name] = max(acc.get(name, 0.0), float(value))


def suite_roundtrip(seed: int = 7, n: int = 4) -> tuple[dict[str, float], dict[str, float]]:
    """Reconstruction roundtrips, normalization, interlacing, and the
    partition-of-unity identity for the quotient numerator."""
    rng = np.random.default_rng(seed)
    res: dict[str, float] = {}
    sizes = sorted({2, 3, max(2, n)})
    for size in sizes:
        for _ in range(4):
            m = random_jacobi(rng, size)
            sd = eigen(m)
            w = weyl(m)
            m_cf = stieltjes_reconstruct(to_quotient(w))
            m_lz = lanczos_reconstruct(sd)
            _merge(res, "stieltjes_roundtrip", _matrix_distance(m, m_cf))
            _merge(res, "lanczos_roundtrip", _matrix_distance(m, m_lz))
            _merge(res, "methods_agree", _matrix_distance(m_cf, m_lz))
            _merge(res, "residue_normalization", abs(float(np.sum(sd.rhos)) - 1.0))
            if size > 1:
                gam = zeros(w).gammas
                viol = max(
                    float(np.max(sd.lambdas[:-1] - gam)),
                    float(np.max(gam - sd.lambdas[1:])),
                )
                _merge(res, "interlacing", max(0.0, viol))
                pq = to_quotient(w)
                dp = npoly.polyder(pq.p)
                unity = np.sum(
                    npoly.polyval(sd.lambdas, pq.q) / npoly.polyval(sd.lambdas, dp)
                )
                _merge(res, "partition_of_unity", abs(float(unity) - 1.0))
            _merge(res, "weyl_solution", weyl_solution_residual(m, _offpoint(sd.lambdas)))
            _merge(res, "gluing", gluing_check(m))
    thr = {
        "stieltjes_roundtrip": 1e-8,
        "lanczos_roundtrip": 1e-8,
        "methods_agree": 1e-8,
        "residue_normalization": 1e-12,
        "interlacing": 0.0,
        "partition_of_unity": 1e-10,
        "weyl_solution": 1e-9,
        "gluing": 1e-9,
    }
    return res, thr


def _offpoint(lambdas: np.ndarray) -> float:
    return float(offspectrum_samples(lambdas, 3)[1])


def suite_traces(seed: int = 7, n: int = 4) -> tuple[dict[str, float], dict[str, float]]:
    """Three-way agreement of the spectral power sums and the leading
    matrix-entry identities, plus the exponential-representation residual."""
    rng = np.random.default_rng(seed)
    res: dict[str, float] = {}
    for size in sorted({2, 3, max(2, n)}):
        for _ in range(4):
            m = random_jacobi(rng, size)
            w = weyl(m)
            shift = float(w.poles[0])
            kd = krein(w)
            s_delta = trace_via_delta(kd, 3)
            s_krein = trace_via_krein(kd)
            m_shifted = JacobiMatrix(m.v - shift, m.c)
            s_direct = moments(m_shifted, 3)
            _merge(res, "delta_vs_direct", float(np.max(np.abs(s_delta - s_direct))))
            _merge(res, "krein_vs_direct", float(np.max(np.abs(s_krein - s_direct))))
            mom = moments(m, 2)
            _merge(res, "first_moment_is_v0", abs(float(mom[1]) - float(m.v[0])))
            c0sq = float(m.c[0]) ** 2 if m.c.size else 0.0
            _merge(
                res,
                "second_moment_entries",
                abs(float(mom[2]) - (float(m.v[0]) ** 2 + c0sq)),
            )
            _merge(res, "exp_representation", exp_representation_residual(w))
    w1 = weyl(_E1)
    kd1 = krein(w1)
    target = np.array([1.0, 1.0, 2.0, 4.0])
    spot = max(
        float(np.max(np.abs(trace_via_delta(kd1, 3) - target))),
        float(np.max(np.abs(trace_via_krein(kd1) - target))),
        float(np.max(np.abs(moments(_E1, 3) - target))),
    )
    res["e1_spot"] = spot
    thr = {
        "delta_vs_direct": 1e-10,
        "krein_vs_direct": 1e-10,
        "first_moment_is_v0": 1e-10,
        "second_moment_entries": 1e-10,
        "exp_representation": 1e-10,
        "e1_spot": 1e-12,
    }
    return res, thr


def suite_brackets(seed: int = 7, n: int = 4) -> tuple[dict[str, float], dict[str, float]]:
    """Closed-form two-point brackets against the tensor route, tensor
    health, the constrained reduction, and the leading-entry bracket."""
    rng = np.random.default_rng(seed)
    res: dict[str, float] = {}
    size = min(max(2, n), 6)
    for chart in (CHART_RESTRICTED, CHART_UNRESTRICTED):
        pt = random_chart_point(rng, size, chart)
        pts = offspectrum_samples(pt.lambdas, 4)
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                _merge(
                    res,
                    "formula_vs_tensor",
                    verify_formula_vs_tensor(pt, float(pts[i]), float(pts[j])),
                )
        _merge(res, "jacobi_identity", jacobi_residual(pt))
        _merge(res, "antisymmetry", antisymmetry_residual(pt))
    # Constrained reduction: a unit-total-residue point seen from the full
    # chart must reproduce the restricted tensor's brackets.
    pt_r = random_chart_point(rng, size, CHART_RESTRICTED)
    pt_u = ChartPoint(pt_r.lambdas, pt_r.rhos, CHART_UNRESTRICTED)
    pts = offspectrum_samples(pt_r.lambdas, 3)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            f, g = weyl_value(float(pts[i])), weyl_value(float(pts[j]))
            _merge(
                res,
                "dirac_vs_restricted",
                abs(dirac_reduce(pt_u, f, g) - bracket(f, g, pt_r)),
            )
    # Exponent-form bracket against the pole-sum closed form.
    w = RationalHerglotz(pt_r.lambdas, pt_r.rhos)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            lamx, mux = float(pts[i]), float(pts[j])
            wl, wm = evaluate(w, lamx), evaluate(w, mux)
            xi = ah_formula_xi(w, lamx, mux) * wl * wm
            _merge(
                res,
                "exponent_form",
                abs(xi - ah_formula(w, lamx, mux, restricted=True))
                / max(1.0, abs(xi)),
            )
    _merge(res, "entry_bracket", entry_bracket_residual(pt_r))
    # Fixed two-pole spot value: poles (0, 2) with equal residues, bracket of
    # the values at -1 and 3 equals 4/27 restricted and -4/9 unrestricted.
    w1 = weyl(_E1)
    res["e1_spot_restricted"] = abs(ah_formula(w1, -1.0, 3.0, restricted=True) - 4.0 / 27.0)
    res["e1_spot_unrestricted"] = abs(ah_formula(w1, -1.0, 3.0) + 4.0 / 9.0)
    pt1 = ChartPoint(w1.poles, w1.residues, CHART_RESTRICTED)
    res["e1_spot_tensor"] = abs(
        bracket(weyl_value(-1.0), weyl_value(3.0), pt1) - 4.0 / 27.0
    )
    thr = {
        "formula_vs_tensor": 1e-6,
        "jacobi_identity": 1e-10,
        "antisymmetry": 0.0,
        "dirac_vs_restricted": 1e-6,
        "exponent_form": 1e-8,
        "entry_bracket": 1e-6,
        "e1_spot_restricted": 1e-8,
        "e1_spot_unrestricted": 1e-8,
        "e1_spot_tensor": 1e-8,
    }
    return res, thr


def suite_canonical(seed: int = 7, n: int = 4) -> tuple[dict[str, float], dict[str, float]]:
    """Canonical relations in both charts, chart totality roundtrips, and
    the normalized contour periods."""
    rng = np.random.default_rng(seed)
    res: dict[str, float] = {}
    size = min(max(2, n), 6)
    pt = random_chart_point(rng, size, CHART_RESTRICTED)
    for name, value in canonical_report(pt).items():
        res[name] = float(value)
    # Totality of the angle chart: angles of order +-50 still invert.
    lam = np.sort(rng.uniform(-2.0, 2.0, size))
    while np.min(np.diff(lam)) < 0.15:
        lam = np.sort(rng.uniform(-2.0, 2.0, size))
    th = rng.uniform(-50.0, 50.0, size - 1)
    w = w_from_theta(lam, th)
    back = theta_from(w)
    res["theta_totality"] = float(np.max(np.abs(back.thetas - th)))
    # Divisor chart roundtrips.
    gam = random_interlacing(rng, lam)
    wg = w_from_gamma(lam, gam)
    res["gamma_roundtrip"] = float(np.max(np.abs(zeros(wg).gammas - gam)))
    dq = pi_from(wg)
    wd = w_from_divisor(dq)
    res["divisor_roundtrip"] = max(
        float(np.max(np.abs(wd.poles - wg.poles))),
        float(np.max(np.abs(wd.residues - wg.residues))),
    )
    # Normalized second-kind periods around each pole.
    worst = 0.0
    for k in range(1, size):
        for p in range(size):
            expected = 2.0j * np.pi * ((1.0 if k == p else 0.0) - (1.0 if p == 0 else 0.0))
            worst = max(worst, abs(abel_period_check(lam, k, p) - expected))
    res["abel_periods"] = worst
    thr = {name: 1e-6 for name in canonical_report(pt)}
    thr.update(
        {
            "theta_totality": 1e-9,
            "gamma_roundtrip": 1e-9,
            "divisor_roundtrip": 1e-9,
            "abel_periods": 1e-10,
        }
    )
    return res, thr


def suite_dual(seed: int = 7, n: int = 4) -> tuple[dict[str, float], dict[str, float]]:
    """Bracket identities of the dual (divisor-side) data."""
    rng = np.random.default_rng(seed)
    res: dict[str, float] = {}
    size = min(max(2, n), 4)
    for _ in range(2):
        pt = random_chart_point(rng, size, CHART_UNRESTRICTED)
        for name, value in dual_identities(pt).items():
            _merge(res, name, value)
    thr = {name: 1e-5 for name in res}
    return res, thr


def suite_flows(seed: int = 7, n: int = 4) -> tuple[dict[str, float], dict[str, float]]:
    """Flow linearizations, closed forms, commutativity, and the matrix
    integration cross-check."""
    rng = np.random.default_rng(seed)
    res: dict[str, float] = {}
    size = min(max(2, n), 6)
    m = random_jacobi(rng, size)
    w = weyl(m)
    t = 0.35
    # Spectral-side evolution mapped back to a matrix vs direct integration.
    w_t = flow_H(w, 2, t)
    m_spectral = lanczos_reconstruct(spectral_from_weyl(w_t))
    m_lax, drift = lax_integrate(m, t, 1e-3)
    res["hflow_vs_lax"] = _matrix_distance(m_spectral, m_lax)
    res["lax_drift"] = drift
    res["isospectral"] = float(
        np.max(np.abs(eigen(m_lax).lambdas - eigen(m).lambdas))
    )
    # Commutativity of two hierarchy members.
    ja, jb = (2, 3) if size >= 3 else (1, 2)
    s = 0.4
    ab = flow_H(flow_H(w, ja, s), jb, t)
    ba = flow_H(flow_H(w, jb, t), ja, s)
    res["commutativity"] = float(np.max(np.abs(ab.residues - ba.residues)))
    # Angle linearization across all members.
    th0 = theta_from(w).thetas
    lin = 0.0
    for j in range(1, size + 1):
        w_j = flow_H(w, j, 2.5)
        lin = max(
            lin,
            float(
                np.max(
                    np.abs(
                        theta_from(w_j).thetas
                        - theta_flow(th0, w.poles, j, 2.5)
                    )
                )
            ),
        )
    res["theta_linearization"] = lin
    # Quasimomentum translation is definitional: bitwise-exact against the
    # same expression evaluated in place.
    dq = pi_from(w)
    dq_t = flow_T(dq, 1, 0.8)
    res["pi_linearization"] = float(
        np.max(np.abs(dq_t.pis - (dq.pis + 0.8 * dq.gammas ** 0)))
    )
    res["tflow_fixes_divisor"] = float(np.max(np.abs(dq_t.gammas - dq.gammas)))
    # Two-pole closed forms: residue and angle growth under the quadratic
    # flow, and the off-diagonal exponential under the first transversal flow.
    w1 = weyl(_E1)
    t1 = 0.7
    w1t = flow_H(w1, 2, t1)
    res["e1_residue_closed_form"] = abs(
        float(w1t.residues[1]) - np.exp(2 * t1) / (1.0 + np.exp(2 * t1))
    )
    res["e1_theta_closed_form"] = abs(float(theta_from(w1t).thetas[0]) - 2 * t1)
    dq1 = pi_from(w1)
    dq1t = flow_T(dq1, 1, t1)
    m1t = lanczos_reconstruct(spectral_from_weyl(w_from_divisor(dq1t)))
    res["e1_tflow_closed_form"] = max(
        float(np.max(np.abs(m1t.v - 1.0))),
        abs(float(m1t.c[0]) - np.exp(t1 / 2.0)),
    )
    thr = {
        "hflow_vs_lax": 1e-6,
        "lax_drift": 1e-8,
        "isospectral": 1e-8,
        "commutativity": 1e-9,
        "theta_linearization": 1e-8,
        "pi_linearization": 0.0,
        "tflow_fixes_divisor": 0.0,
        "e1_residue_closed_form": 1e-9,
        "e1_theta_closed_form": 1e-9,
        "e1_tflow_closed_form": 1e-9,
    }
    return res, thr


_SUITES = {
    "roundtrip": suite_roundtrip,
    "traces": suite_traces,
    "brackets": suite_brackets,
    "canonical": suite_canonical,
    "dual": suite_dual,
    "flows": suite_flows,
}


def run_suite(name: str, seed: int = 7, n: int = 4) -> tuple[dict[str, float], dict[str, float]]:
    """Run one named suite; raises InvalidData for unknown names."""
    if name not in _SUITES:
        raise InvalidData("unknown suite %r" % (name,))
    return _SUITES[name](seed, n)


def run_suites(names, seed: int = 7, n: int = 4) -> tuple[dict[str, float], dict[str, float]]:
    """Run several suites, prefixing each check with its suite name."""
    res: dict[str, float] = {}
    thr: dict[str, float] = {}
    for name in names:
        r, t = run_suite(name, seed, n)
        for key, value in r.items():
            res["%s.%s" % (name, key)] = value
        for key, value in t.items():
            thr["%s.%s" % (name, key)] = value
    return res, thr
