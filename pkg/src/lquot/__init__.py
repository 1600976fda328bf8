"""lquot: exact and numeric identities for logarithmic derivatives of L-functions.

The submodules are

``precision``      arbitrary-precision scalars and constants
``polygamma``      Gamma, log-Gamma and polygamma functions
``symbolic``       exact linear combinations of constants and rank tests
``families``       family data and closed-form right-hand sides
``afe``            approximate functional equation and numerical identity checks
``certificates``   non-vanishing and rank certificates
"""

__version__ = "0.1.0"

from .errors import (
    DomainError,
    FormatError,
    HypothesisError,
    LQuotError,
    NonFiniteError,
    OutOfProvenRangeError,
    PoleError,
    PropertyAError,
    TruncationError,
    UnsupportedFamilyError,
    ZeroValueError,
)
from .precision import BigComplex, Precision
from .polygamma import digamma, gamma, loggamma, polygamma
from .symbolic import (
    ConstExpr,
    ConstSymbol,
    IntegerSet,
    exact_rank,
    parse_expr,
    property_a_check,
    psi_expr,
    psik2_expand,
    r_rational,
    rank_lower_bound,
    reduce_polygamma,
)
from .families import (
    CriticalPoint,
    Family,
    FamilyDatum,
    closed_form_higher,
    closed_form_higher_exact,
    closed_form_sum,
    closed_form_sum_exact,
    quotient_derivative_convert,
)
from .afe import (
    AFEConfig,
    CoefficientSeries,
    IdentityReport,
    afe_l,
    complete_l,
    delta_series,
    direct_l,
    log_derivative,
    read_coefficients,
    ramanujan_tau,
    real_character_series,
    twist,
    verify_identity,
    write_coefficients,
)
from .certificates import (
    Certificate,
    Claim,
    Verdict,
    certify_gld,
    certify_halfint_central,
    certify_hilbert,
    certify_modular,
    certify_siegel,
    rank_certificate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
