"""Tests for the quadratic Poisson structure in pole-residue coordinates.

Oracles: hand-computed 2x2 tensors at the symmetric two-site point, the
closed-form two-point bracket evaluated by hand at fixed arguments, and
finite differences checked against analytic gradients.
"""

import warnings

import numpy as np
import pytest

from toda import (
    CHART_RESTRICTED,
    CHART_UNRESTRICTED,
    AtPole,
    ChartPoint,
    CoincidentArguments,
    GradientFailure,
    InvalidData,
    Observable,
    PoissonTensor,
    RationalHerglotz,
    ah_formula,
    ah_formula_xi,
    antisymmetry_residual,
    bracket,
    canonical_report,
    dirac_reduce,
    dual_identities,
    entry_bracket_residual,
    evaluate,
    gradient,
    jacobi_residual,
    tensor_at,
    verify_formula_vs_tensor,
    weyl_value,
)

E1_W = RationalHerglotz(np.array([0.0, 2.0]), np.array([0.5, 0.5]))


def random_point(rng, n, chart):
    lam = np.cumsum(rng.uniform(0.3, 1.0, n)) + rng.uniform(-1.0, 1.0)
    rho = rng.uniform(0.2, 2.0, n)
    if chart == CHART_RESTRICTED:
        rho = rho / rho.sum()
    return ChartPoint(lam, rho, chart)


def test_chart_point_validation():
    lam, rho = np.array([0.0, 2.0]), np.array([0.5, 0.5])
    with pytest.raises(InvalidData):
        ChartPoint(lam, rho, "affine")
    with pytest.raises(InvalidData):
        ChartPoint(np.array([2.0, 0.0]), rho)
    with pytest.raises(InvalidData):
        ChartPoint(lam, np.array([0.5, -0.5]))
    with pytest.raises(InvalidData):
        ChartPoint(lam, np.array([0.5, 0.75]), CHART_RESTRICTED)
    ChartPoint(lam, np.array([0.5, 0.75]), CHART_UNRESTRICTED)
    assert ChartPoint(lam, np.array([1.0 - 1e-10, 1e-10])).near_boundary
    assert not ChartPoint(lam, rho).near_boundary


def test_tensor_validation():
    with pytest.raises(InvalidData):
        PoissonTensor(np.zeros((3, 3)))
    with pytest.raises(InvalidData):
        PoissonTensor(np.ones((2, 2)))


def test_two_site_tensors_by_hand():
    """At lambda = (0, 2), rho = (1/2, 1/2): the restricted residue block
    cancels exactly and the mixed block is the centered projector / 4; the
    unrestricted blocks are rho rho / (lam gap) and diag(rho)."""
    lam, rho = np.array([0.0, 2.0]), np.array([0.5, 0.5])
    j = tensor_at(ChartPoint(lam, rho, CHART_RESTRICTED)).j
    assert j[0, 1] == 0.0
    np.testing.assert_array_equal(j[:2, 2:], [[0.25, -0.25], [-0.25, 0.25]])
    np.testing.assert_array_equal(j[2:, 2:], np.zeros((2, 2)))
    ju = tensor_at(ChartPoint(lam, rho, CHART_UNRESTRICTED)).j
    assert ju[0, 1] == 0.25
    np.testing.assert_array_equal(ju[:2, 2:], [[0.5, 0.0], [0.0, 0.5]])


def test_antisymmetry_is_exact():
    rng = np.random.default_rng(71)
    for chart in (CHART_RESTRICTED, CHART_UNRESTRICTED):
        pt = random_point(rng, 5, chart)
        assert antisymmetry_residual(pt) == 0.0


def test_jacobi_identity():
    rng = np.random.default_rng(72)
    for chart in (CHART_RESTRICTED, CHART_UNRESTRICTED):
        for n in (2, 3, 4):
            for _ in range(5):
                assert jacobi_residual(random_point(rng, n, chart)) <= 1e-10


def test_gradient_analytic_matches_finite_difference():
    rng = np.random.default_rng(73)
    pt = random_point(rng, 4, CHART_RESTRICTED)
    obs = weyl_value(pt.lambdas[0] - 1.7)
    bare = Observable(obs.fn)
    np.testing.assert_allclose(gradient(obs, pt), gradient(bare, pt), rtol=1e-7, atol=1e-9)


def test_two_point_bracket_by_hand():
    """{w(-1), w(3)} at the symmetric two-site point: values are 2/3 and
    -2/3, so the unrestricted bracket is -4/9 and the restricted one 4/27."""
    assert ah_formula(E1_W, -1.0, 3.0) == pytest.approx(-4.0 / 9.0, rel=1e-14)
    assert ah_formula(E1_W, -1.0, 3.0, restricted=True) == pytest.approx(4.0 / 27.0, rel=1e-14)
    with pytest.raises(CoincidentArguments):
        ah_formula(E1_W, -1.0, -1.0 + 1e-7)


def test_formula_matches_tensor_contraction():
    rng = np.random.default_rng(74)
    for chart in (CHART_RESTRICTED, CHART_UNRESTRICTED):
        for n in (2, 4, 6):
            pt = random_point(rng, n, chart)
            lo, hi = pt.lambdas[0], pt.lambdas[-1]
            span = hi - lo
            for lam, mu in ((lo - 0.31 * span, hi + 0.29 * span), (lo - 1.1, hi + 2.3)):
                assert verify_formula_vs_tensor(pt, lam, mu) <= 1e-8


def test_exponent_form_of_restricted_bracket():
    """Dividing the restricted bracket by both values gives the exponent
    form; rebuilt from the divisor it must agree with the pole-sum route."""
    rng = np.random.default_rng(75)
    for n in (2, 3, 5):
        pt = random_point(rng, n, CHART_RESTRICTED)
        w = RationalHerglotz(pt.lambdas, pt.rhos)
        lam, mu = pt.lambdas[0] - 0.9, pt.lambdas[-1] + 1.3
        xi = ah_formula_xi(w, lam, mu)
        want = ah_formula(w, lam, mu, restricted=True) / (evaluate(w, lam) * evaluate(w, mu))
        assert xi == pytest.approx(want, rel=1e-9)


def test_exponent_form_guards():
    with pytest.raises(InvalidData):
        ah_formula_xi(RationalHerglotz(np.array([0.0, 2.0]), np.array([1.0, 1.0])), -1.0, 3.0)
    with pytest.raises(AtPole):
        ah_formula_xi(E1_W, 2.0, 5.0)


def test_weyl_value_observable():
    rng = np.random.default_rng(76)
    pt = random_point(rng, 3, CHART_RESTRICTED)
    x = pt.lambdas[0] - 0.6
    obs = weyl_value(x)
    assert obs.value(pt) == pytest.approx(
        evaluate(RationalHerglotz(pt.lambdas, pt.rhos), x), rel=1e-14
    )


def test_dirac_reduction_recovers_restricted_bracket():
    """On the unit-residue slice of the full chart, the constrained bracket
    of two evaluations equals the restricted-chart bracket."""
    rng = np.random.default_rng(77)
    for n in (2, 3, 4):
        lam = np.cumsum(rng.uniform(0.3, 1.0, n))
        rho = rng.uniform(0.2, 2.0, n)
        rho = rho / rho.sum()
        full = ChartPoint(lam, rho, CHART_UNRESTRICTED)
        slim = ChartPoint(lam, rho, CHART_RESTRICTED)
        f, g = weyl_value(lam[0] - 0.8), weyl_value(lam[-1] + 1.1)
        assert dirac_reduce(full, f, g) == pytest.approx(bracket(f, g, slim), abs=1e-6)
    with pytest.raises(InvalidData):
        dirac_reduce(slim, f, g)


def test_canonical_relations():
    rng = np.random.default_rng(78)
    for n in (2, 4, 6):
        report = canonical_report(random_point(rng, n, CHART_RESTRICTED))
        assert set(report) == {
            "theta_lambda", "theta_theta", "pi_gamma", "gamma_gamma", "pi_pi",
            "thetaprime_lambda", "casimir_theta", "casimir_gamma", "casimir_pi",
            "casimir_rho",
        }
        for key, val in report.items():
            assert val <= 1e-6, (n, key, val)
    with pytest.raises(InvalidData):
        canonical_report(random_point(rng, 3, CHART_UNRESTRICTED))
    with pytest.raises(InvalidData):
        canonical_report(ChartPoint(np.array([0.0]), np.array([1.0]), CHART_RESTRICTED))


def test_dual_residue_closed_form_two_sites():
    """lambda = (0, 2), rho = (1/2, 1/3): the single zero sits at 6/5 and
    the dual residue is -p(6/5) / (5/6) = 144/125."""
    pt = ChartPoint(np.array([0.0, 2.0]), np.array([0.5, 1.0 / 3.0]), CHART_UNRESTRICTED)
    report = dual_identities(pt)
    for key, val in report.items():
        assert val <= 1e-5, (key, val)
    w = RationalHerglotz(pt.lambdas, pt.rhos)
    gam = -1.0 / evaluate(w, 1.2 - 1e-9)  # just confirm 6/5 is the zero
    assert evaluate(w, 1.2) == pytest.approx(0.0, abs=1e-12)
    assert np.isfinite(gam)
    rhop = -(1.2 - 0.0) * (1.2 - 2.0) / (5.0 / 6.0)
    assert rhop == pytest.approx(144.0 / 125.0, rel=1e-12)


def test_dual_identities_random():
    rng = np.random.default_rng(79)
    for n in (2, 3, 4):
        report = dual_identities(random_point(rng, n, CHART_UNRESTRICTED))
        assert set(report) == {
            "rhoprime_gamma", "rhoprime_rhoprime", "gamma_gamma", "q0_gamma",
            "q0_rhoprime", "rhoprime_p0", "p0_gamma", "p0_q0",
        }
        for key, val in report.items():
            assert val <= 1e-5, (n, key, val)
    with pytest.raises(InvalidData):
        dual_identities(random_point(rng, 3, CHART_RESTRICTED))


def test_matrix_entry_bracket():
    rng = np.random.default_rng(80)
    for n in (2, 3, 5):
        assert entry_bracket_residual(random_point(rng, n, CHART_RESTRICTED)) <= 1e-8
    with pytest.raises(InvalidData):
        entry_bracket_residual(random_point(rng, 3, CHART_UNRESTRICTED))


def test_gradient_failure_on_cusp():
    pt = ChartPoint(np.array([0.0, 2.0]), np.array([0.5, 0.5]), CHART_RESTRICTED)
    cusp = Observable(lambda lam, rho: float(np.sqrt(max(rho[0] - 0.5, 0.0))))
    with pytest.raises(GradientFailure):
        gradient(cusp, pt)


def test_near_boundary_warning():
    lam = np.array([0.0, 2.0])
    tiny = ChartPoint(lam, np.array([1.0 - 1e-10, 1e-10]), CHART_RESTRICTED)
    f, g = weyl_value(-1.0), weyl_value(3.0)
    with pytest.warns(RuntimeWarning):
        bracket(f, g, tiny)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        bracket(f, g, ChartPoint(lam, np.array([0.5, 0.5]), CHART_RESTRICTED))
