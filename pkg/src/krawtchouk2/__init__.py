"""Exact-arithmetic two-variable Krawtchouk polynomials.

The family P[m1,m2](x1,x2) lives on the triangular grid {x1 + x2 <= N}, is
orthogonal there with respect to a trinomial law when three bilinear
parameter conditions hold, satisfies a five-term recurrence in the spectral
labels, and diagonalizes a cumulative-Bernoulli transition kernel.  All of
that is computed and machine-verified in exact rational arithmetic, with
floating point confined to spectra and quadrature behind an explicit
tolerance policy.
"""

from .scalar import (
    DEFAULT_POLICY,
    FloatPolicy,
    Rational,
    as_rational,
    format_rational,
    from_float,
    parse_rational,
    to_float,
)
from .combinatorics import (
    TriangularGrid,
    binomial_pmf,
    factorial,
    multinomial,
    pochhammer,
    trinomial_pmf,
)
from .hyper import (
    F12Arguments,
    PolynomialTable,
    appell_f1_integral,
    appell_f1_series,
    appell_f1_terms,
    complementary_pair,
    complementary_pair_2f1,
    f12_integral_check,
    f12_series,
    gauss_2f1_terminating,
    krawtchouk_partials,
    krawtchouk_value,
    pfaff_pair,
)
from .params import (
    ParameterSet,
    PQuadruple,
    check_conditions_1_10,
    check_cone_2_7,
    complete_orthogonal_family,
    dual_residuals,
    dual_weights,
    from_p,
    parameter_set_from_uv,
    solve_eta_from_uv,
)
from .ortho import (
    GramMatrix,
    dual_gram,
    generating_check,
    gram,
    gram_float,
    inner_product,
    norm_closed_form,
    norm_product_form,
)
from .recurrence import (
    GridReport,
    RecurrenceCoefficients,
    apply_recurrence,
    coefficient_residuals,
    coefficients,
    cross_coefficient_residuals,
    verify_euler_identity_grid,
    verify_recurrence_grid,
    weighted_euler_residual,
)
from .kernel import (
    Calibration,
    KernelMatrix,
    KernelParameters,
    build_kernel,
    calibrate,
    eigenfunction_ratio_test,
    family_from_kernel,
    fit_eta,
    search_calibrated_kernels,
    slot_matrix,
    slot_spectrum,
    slot_stationary,
    spectrum_float,
    stationary_distribution,
    stationary_distribution_float,
)
from . import errors

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
