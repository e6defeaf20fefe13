"""Strictly consistent scoring functions, identification functions and a verification lab.

Typical use::

    from elicitlab import Normal, VaRES, VarEsScore, minimize_expected_score

    d = Normal(0.0, 1.0)
    res = minimize_expected_score(VarEsScore(0.05), d)
    res.argmin, VaRES(0.05).eval(d)
"""

__version__ = "0.1.0"

from .dist import Distribution, Exponential, Lognormal, Mixture, Normal, Shifted, StudentT, TwoPoint, Uniform, mix
from .errors import BoundaryError, DomainError, ElicitError, MomentError, NonUniqueQuantileError, ParseError, PrecisionError, ShapeError
from .functionals import (
    Expectile,
    ExpectedShortfall,
    ExpectileVector,
    Mean,
    MeanVariance,
    MomentK,
    Quantile,
    QuantileVector,
    RatioOfExpectations,
    SpectralMeasure,
    SpectralWithQuantiles,
    Stacked,
    VaRES,
    Variance,
    decompose_spectral_with_unit_mass,
    eval_functional,
    expected_shortfall,
    expectile,
    stack,
    value_at_risk,
)
from .ident import (
    ExpectileIdent,
    MeanVarianceIdent,
    QuantileIdent,
    RatioIdent,
    SpectralIdent,
    StackedIdent,
    VarEsIdent,
    check_orientation,
    expected_ident,
    ident_for,
    identify,
)
from .lab import (
    QuadratureConfig,
    Tolerances,
    VerificationReport,
    consistency_certificate,
    es_levelset_search,
    expected_score,
    levelset_probe,
    minimize_expected_score,
    osband_recover_h,
    run_matrix,
    second_order_symmetry_check,
)
from .parsing import parse_distribution, parse_functional, parse_ident, parse_score, parse_shape
from .scores import (
    AcerbiSzekelyW,
    ActionDomain,
    BregmanMean,
    BregmanRatio,
    ExpectileSquare,
    MeanVarianceRevealed,
    NumericOneDim,
    QuantilePinball,
    Rescaled,
    SpectralScore,
    SumScore,
    VarEsScore,
    build_numeric_onedim,
    score,
    sum_score,
)
from .shapes import ShapeFunction, shape


__all__ = [
    "__version__",
    "Distribution",
    "Exponential",
    "Lognormal",
    "Mixture",
    "Normal",
    "Shifted",
    "StudentT",
    "TwoPoint",
    "Uniform",
    "mix",
    "BoundaryError",
    "DomainError",
    "ElicitError",
    "MomentError",
    "NonUniqueQuantileError",
    "ParseError",
    "PrecisionError",
    "ShapeError",
    "Expectile",
    "ExpectedShortfall",
    "ExpectileVector",
    "Mean",
    "MeanVariance",
    "MomentK",
    "Quantile",
    "QuantileVector",
    "RatioOfExpectations",
    "SpectralMeasure",
    "SpectralWithQuantiles",
    "Stacked",
    "VaRES",
    "Variance",
    "decompose_spectral_with_unit_mass",
    "eval_functional",
    "expected_shortfall",
    "expectile",
    "stack",
    "value_at_risk",
    "ExpectileIdent",
    "MeanVarianceIdent",
    "QuantileIdent",
    "RatioIdent",
    "SpectralIdent",
    "StackedIdent",
    "VarEsIdent",
    "check_orientation",
    "expected_ident",
    "ident_for",
    "identify",
    "QuadratureConfig",
    "Tolerances",
    "VerificationReport",
    "consistency_certificate",
    "es_levelset_search",
    "expected_score",
    "levelset_probe",
    "minimize_expected_score",
    "osband_recover_h",
    "run_matrix",
    "second_order_symmetry_check",
    "parse_distribution",
    "parse_functional",
    "parse_ident",
    "parse_score",
    "parse_shape",
    "AcerbiSzekelyW",
    "ActionDomain",
    "BregmanMean",
    "BregmanRatio",
    "ExpectileSquare",
    "MeanVarianceRevealed",
    "NumericOneDim",
    "QuantilePinball",
    "Rescaled",
    "SpectralScore",
    "SumScore",
    "VarEsScore",
    "build_numeric_onedim",
    "score",
    "sum_score",
    "ShapeFunction",
    "shape",
]
