"""Bounds on time-sampled squeezing, an OPA variance model, and a
meta-analysis pipeline for published squeezing records."""

from .windows import (
    QuadratureConfig,
    QuadratureError,
    SamplingWindow,
    SpectrumMethod,
    SqrtWindowSpectrum,
    WindowKind,
    evaluate_window,
    gaussian_window,
    lorentzian_sq_window,
    spectrum,
    sqrt_ft_squared,
    square_window,
    trapezoid_window,
)
from .qi_bound import (
    BoundResult,
    ConsistencyError,
    Evaluation,
    QiCurve,
    SpectralFunction,
    SpectralShape,
    Variant,
    casimir_density,
    closed_form_gaussian,
    closed_form_lorentzian_sq,
    curve_csv,
    curve_value,
    ford_bound,
    numeric_bound,
    numeric_bound_detail,
    parse_curve_id,
    phase_argument,
    sample_curve,
)
from .opa import (
    NoSqueezingError,
    OpaParams,
    SqueezingPoint,
    effective_ft,
    extremal_product,
    extremes,
    ideal_bound,
    ideal_ft,
    s_minus,
    s_plus,
    squeezed_fraction,
    variance,
)
from .meta import (
    AnalysisReport,
    DatasetError,
    FitError,
    FtMethod,
    RecordFlag,
    ScaleFit,
    SqueezingRecord,
    classify,
    fit_scale,
    ft_from_extremes,
    load_records,
    reconcile_ft,
)
from .units import C_LIGHT, HBAR, from_db, to_db

__version__ = "0.1.0"
