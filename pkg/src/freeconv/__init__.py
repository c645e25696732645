"""Free additive and multiplicative convolution of compactly supported
probability measures, computed through contour-integral quadrature of their
Cauchy/T-transforms and series-based density recovery."""

from .conformal import (
    UnitGrid,
    joukowski,
    joukowski_deriv,
    joukowski_inv,
    unit_grid,
    winding_number,
)
from .contour import (
    BoundaryTable,
    ConvolutionContour,
    build_boundary_table,
    convolution_transform_on_point,
    g_additive,
    g_additive_deriv,
    r_transform,
    s_transform,
    t_inverse,
    t_multiplicative,
    t_multiplicative_deriv,
)
from .convolve import (
    ContourConfig,
    ConvolutionResult,
    SupportResult,
    additive_convolve,
    choose_inner_radius,
    find_image_radius,
    find_support_additive,
    find_support_multiplicative,
    multiplicative_convolve,
)
from .errors import (
    BranchCutError,
    ContourTooSmallError,
    DegenerateDerivativeError,
    FreeConvError,
    FreeConvWarning,
    InvalidContourError,
    InvalidMeasureError,
    InvalidParameterError,
    InvalidSupportError,
    OutOfDiskError,
    OutsideContourError,
    PoleError,
)
from .measures import (
    MeasureSpec,
    RegularityClass,
    SupportInterval,
    make_atomic,
    make_custom,
    make_marchenko_pastur,
    make_semicircle,
    make_uniform,
    moment,
    parse_measure_spec,
)
from .recovery import (
    CoefficientVector,
    coefficients_from_circle,
    density_from_coefficients,
    series_moments,
)
from .spectra import (
    EmpiricalSpectrum,
    free_combine_spectra,
    ks_distance,
    sample_matrix_spectrum,
)
from .transforms import (
    TransformKind,
    eval_script_transform,
    eval_transform,
    verify_exponential_convergence,
)

__version__ = "0.1.0"
