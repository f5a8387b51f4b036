"""Spectral theory of finite Jacobi matrices and the open Toda lattice.

The package provides the direct and inverse spectral transforms through
the Weyl function (pole-residue, quotient, and exponential forms), the
quadratic Poisson structure on those functions with two canonical
coordinate charts, and the tangent/transversal flows of the hierarchy,
each identity shipped as an executable check.
"""

from .coordinates import (
    ActionAngle,
    DivisorQuasimomentum,
    abel_period_check,
    pi_from,
    theta_from,
    theta_prime,
    w_from_divisor,
    w_from_gamma,
    w_from_theta,
)
from .errors import (
    AtPole,
    Breakdown,
    CoincidentArguments,
    ConstraintDegenerate,
    ConvergenceFailure,
    GradientFailure,
    InterlacingViolated,
    InvalidData,
    NoHerglotzSolution,
    NotHerglotz,
    NotHerglotzInput,
    OnSpectrum,
    Overflow,
    StepTooLarge,
    TodaError,
)
from .flows import (
    HFLOW_LAX_TIME_SIGN,
    FlowSpec,
    flaschka,
    flow_H,
    flow_T,
    lax_integrate,
    theta_flow,
)
from .jacobi_core import JacobiMatrix, PolySequence, eval_P, eval_Q, moments, truncate
from .poisson import (
    CHART_RESTRICTED,
    CHART_UNRESTRICTED,
    ChartPoint,
    Observable,
    PoissonTensor,
    ah_formula,
    ah_formula_xi,
    antisymmetry_residual,
    bracket,
    canonical_report,
    dirac_reduce,
    dual_identities,
    entry_bracket_residual,
    gradient,
    jacobi_residual,
    tensor_at,
    verify_formula_vs_tensor,
    weyl_value,
)
from .rational_weyl import (
    Divisor,
    KreinData,
    PolyQuotient,
    RationalHerglotz,
    evaluate,
    exp_representation_residual,
    from_quotient,
    krein,
    to_quotient,
    trace_moments,
    trace_via_delta,
    trace_via_krein,
    zeros,
)
from .serialize import detect, dumps, from_dict, loads, to_dict
from .spectral_direct import (
    SpectralData,
    divisor,
    eigen,
    gluing_check,
    spectral_from_weyl,
    weyl,
    weyl_from_spectral,
    weyl_solution_residual,
)
from .spectral_inverse import lanczos_reconstruct, roundtrip_error, stieltjes_reconstruct
from .suites import (
    SUITE_NAMES,
    random_chart_point,
    random_interlacing,
    random_jacobi,
    run_suite,
    run_suites,
)

__version__ = "0.1.0"

__all__ = [
    "ActionAngle",
    "AtPole",
    "Breakdown",
    "CHART_RESTRICTED",
    "CHART_UNRESTRICTED",
    "ChartPoint",
    "CoincidentArguments",
    "ConstraintDegenerate",
    "ConvergenceFailure",
    "Divisor",
    "DivisorQuasimomentum",
    "FlowSpec",
    "GradientFailure",
    "HFLOW_LAX_TIME_SIGN",
    "InterlacingViolated",
    "InvalidData",
    "JacobiMatrix",
    "KreinData",
    "NoHerglotzSolution",
    "NotHerglotz",
    "NotHerglotzInput",
    "Observable",
    "OnSpectrum",
    "Overflow",
    "PoissonTensor",
    "PolyQuotient",
    "PolySequence",
    "RationalHerglotz",
    "SUITE_NAMES",
    "SpectralData",
    "StepTooLarge",
    "TodaError",
    "abel_period_check",
    "ah_formula",
    "ah_formula_xi",
    "antisymmetry_residual",
    "bracket",
    "canonical_report",
    "detect",
    "dirac_reduce",
    "divisor",
    "dual_identities",
    "dumps",
    "eigen",
    "entry_bracket_residual",
    "eval_P",
    "eval_Q",
    "evaluate",
    "exp_representation_residual",
    "flaschka",
    "flow_H",
    "flow_T",
    "from_dict",
    "from_quotient",
    "gluing_check",
    "gradient",
    "jacobi_residual",
    "krein",
    "lanczos_reconstruct",
    "lax_integrate",
    "loads",
    "moments",
    "pi_from",
    "random_chart_point",
    "random_interlacing",
    "random_jacobi",
    "roundtrip_error",
    "run_suite",
    "run_suites",
    "spectral_from_weyl",
    "stieltjes_reconstruct",
    "tensor_at",
    "theta_flow",
    "theta_from",
    "theta_prime",
    "to_dict",
    "to_quotient",
    "trace_moments",
    "trace_via_delta",
    "trace_via_krein",
    "truncate",
    "verify_formula_vs_tensor",
    "w_from_divisor",
    "w_from_gamma",
    "w_from_theta",
    "weyl",
    "weyl_from_spectral",
    "weyl_solution_residual",
    "weyl_value",
    "zeros",
]
