"""Measures, convolutions and Levy-Khintchine machinery on the bi-torus.

The package covers:

* atomic measures on the circle, the plane and the bi-torus, with classical
  and special-case bi-free multiplicative convolutions (:mod:`bitorus.measures`);
* truncated power series in one and two variables, the Sigma-transform and
  the generating series attached to a Levy triplet (:mod:`bitorus.series`);
* additive and multiplicative Levy triplets, their characteristic functions
  and the torus wrap between them (:mod:`bitorus.levy`);
* triangular arrays, row centering, limit diagnostics and the Gaussian and
  Poisson builtin arrays (:mod:`bitorus.limits`);
* classification of idempotent moment patterns (:mod:`bitorus.idempotents`);
* uniqueness of Levy measures for symmetric atom pairs and triplet
  equivalence testing (:mod:`bitorus.uniqueness`);
* JSON (de)serialization (:mod:`bitorus.serialize`) and a CLI
  (:mod:`bitorus.cli`, installed as ``bitorus``).

Set the environment variable ``BITORUS_NO_NUMBA=1`` before import to force
the pure-NumPy fallback kernels.
"""

from ._kernels import BACKEND
from .idempotents import (
    ExceptionClass,
    IdempotentKind,
    classify_id_exception,
    classify_idempotent,
    has_P_factor,
    id_moment_check,
    in_P_times,
)
from .levy import (
    AddLevyTriplet,
    GammaDomainElement,
    HaarKernelDensity,
    MulLevyTriplet,
    TripletLaw,
    add_lk_char,
    add_lk_exponent,
    diagram_check,
    gamma_map,
    kappa_triplet,
    levy_jump_integral,
    mul_lk_char,
    mul_lk_exponent,
    triplet_convolve,
    wrap_triplet,
)
from .limits import (
    IIDTriangularArray,
    Row,
    TriangularArray,
    center_row,
    classical_product_char,
    condition_report,
    flip_array,
    gaussian_array,
    gaussian_planar_array,
    iid_array,
    limit_check,
    perturb_array,
    poisson_array,
    poisson_planar_array,
    re_im_bound_check,
    wrap_array,
)
from .measures import (
    Atomic,
    AtomicTorusMeasure,
    BiHaarP,
    BiHaarPStar,
    CircConv,
    DimensionMismatch,
    Dirac,
    Flip,
    Haar,
    Kappa,
    MomentMeasure,
    PlanarAtomicMeasure,
    Product,
    Rotate,
    UnsupportedOperation,
    bifree_convolve_special,
    canonicalize_angle,
    circ_convolve,
    flip_star,
    kappa_moment,
    rotate,
    wrap_pushforward,
)
from .series import (
    TruncSeries1,
    TruncSeries2,
    compose,
    free_mul_convolve,
    moments_from_sigma,
    revert,
    sigma_from_moments,
    u_series,
)
from .serialize import (
    SchemaError,
    add_triplet_from_json,
    add_triplet_to_json,
    measure_from_json,
    measure_to_json,
    moment_measure_from_json,
    triplet_from_json,
    triplet_to_json,
)
from .uniqueness import (
    AtomPair,
    SymmetricAtomPairMeasure,
    UniquenessVerdict,
    alt_compensator_demo,
    det_identity_check,
    l_unique_decide,
    levy_class_enumerate,
    strict_unique_check,
    triplet_equiv,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "__version__",
    # measures
    "AtomicTorusMeasure",
    "PlanarAtomicMeasure",
    "MomentMeasure",
    "Atomic",
    "Dirac",
    "Haar",
    "BiHaarP",
    "BiHaarPStar",
    "Kappa",
    "Product",
    "Rotate",
    "Flip",
    "CircConv",
    "canonicalize_angle",
    "kappa_moment",
    "circ_convolve",
    "bifree_convolve_special",
    "rotate",
    "flip_star",
    "wrap_pushforward",
    "UnsupportedOperation",
    "DimensionMismatch",
    # series
    "TruncSeries1",
    "TruncSeries2",
    "compose",
    "revert",
    "sigma_from_moments",
    "moments_from_sigma",
    "free_mul_convolve",
    "u_series",
    # levy
    "MulLevyTriplet",
    "AddLevyTriplet",
    "HaarKernelDensity",
    "TripletLaw",
    "GammaDomainElement",
    "levy_jump_integral",
    "mul_lk_exponent",
    "mul_lk_char",
    "add_lk_exponent",
    "add_lk_char",
    "wrap_triplet",
    "triplet_convolve",
    "kappa_triplet",
    "gamma_map",
    "diagram_check",
    # limits
    "Row",
    "TriangularArray",
    "IIDTriangularArray",
    "iid_array",
    "center_row",
    "condition_report",
    "classical_product_char",
    "limit_check",
    "perturb_array",
    "flip_array",
    "wrap_array",
    "re_im_bound_check",
    "gaussian_array",
    "gaussian_planar_array",
    "poisson_array",
    "poisson_planar_array",
    # idempotents
    "IdempotentKind",
    "ExceptionClass",
    "classify_idempotent",
    "has_P_factor",
    "in_P_times",
    "id_moment_check",
    "classify_id_exception",
    # uniqueness
    "AtomPair",
    "SymmetricAtomPairMeasure",
    "UniquenessVerdict",
    "l_unique_decide",
    "levy_class_enumerate",
    "triplet_equiv",
    "strict_unique_check",
    "det_identity_check",
    "alt_compensator_demo",
    # serialize
    "SchemaError",
    "measure_to_json",
    "measure_from_json",
    "moment_measure_from_json",
    "triplet_to_json",
    "triplet_from_json",
    "add_triplet_to_json",
    "add_triplet_from_json",
]
