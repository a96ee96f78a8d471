"""qnlab: a numerical laboratory for quasi-norm calculus on finite
atom-weighted measure spaces.

Everything is exact finite arithmetic where a closed form exists and an
honestly tagged bound (EXACT / UPPER / LOWER) where only a search is
available; every search returns the witness that achieves its bound.
"""
from .bounds import BoundResult, Tag
from .convexity import (
    Decomposition,
    LConvexityWitness,
    MiiReport,
    MiiSweepReport,
    aoki_exponent,
    l_convexity_probe,
    lattice_constant_probe,
    leveling_constant_probe,
    mii_check,
    mii_sweep,
    p_envelope,
)
from .errors import DegenerateCubeError, GaugeDefinitionError, InputError
from .galb_tensor import (
    GalbWitness,
    GalbsReport,
    TensorRep,
    galb_gauge_estimate,
    galbs_check,
    i_map,
    i_map_termwise,
    j_map,
    profile_value,
    tensor_from_terms,
    tensor_norm_estimate,
)
from .gauges import (
    Convexified,
    Gauge,
    Intersect,
    Lp,
    Orlicz,
    OrliczFunction,
    WeakL1,
    builtin_phi,
    concavity_modulus_probe,
    convexify,
    dual_gauge,
    eval_gauge,
    eval_vector_gauge,
    gauge_values_rows,
    intersect_eval,
    loglog_phi,
    luxemburg,
    power_phi,
    rational_phi,
)
from .integration import (
    CounterexampleReport,
    IndependenceReport,
    SeriesIntegral,
    SimpleFunction,
    integrate_series,
    integrate_simple,
    representation_independence_check,
    rolewicz_counterexample,
    simple_to_tensor,
)
from .maximal import (
    CubeSpec,
    DifferentiationReport,
    DominationReport,
    GridSpace,
    Weak11Report,
    cube_average,
    default_scales,
    differentiation_report,
    hl_maximal,
    series_domination_report,
    vector_maximal,
    weak11_constant,
)
from .measure import (
    MeasureSpace,
    Partition,
    ProductSpace,
    ScalarField,
    VectorField,
    conditional_expectation,
    counting_space,
    decreasing_rearrangement,
    distribution_mass,
    integral,
    product_space,
    restrict,
    trivial_partition,
    uniform_probability_space,
    weak_l1_value,
)
from .spaces import QuasiNormedSpace, lq_space, weak_l1_space, weak_l1_vector_norm

__all__ = [
    "BoundResult",
    "Tag",
    "Decomposition",
    "LConvexityWitness",
    "MiiReport",
    "MiiSweepReport",
    "aoki_exponent",
    "l_convexity_probe",
    "lattice_constant_probe",
    "leveling_constant_probe",
    "mii_check",
    "mii_sweep",
    "p_envelope",
    "DegenerateCubeError",
    "GaugeDefinitionError",
    "InputError",
    "GalbWitness",
    "GalbsReport",
    "TensorRep",
    "galb_gauge_estimate",
    "galbs_check",
    "i_map",
    "i_map_termwise",
    "j_map",
    "profile_value",
    "tensor_from_terms",
    "tensor_norm_estimate",
    "Convexified",
    "Gauge",
    "Intersect",
    "Lp",
    "Orlicz",
    "OrliczFunction",
    "WeakL1",
    "builtin_phi",
    "concavity_modulus_probe",
    "convexify",
    "dual_gauge",
    "eval_gauge",
    "eval_vector_gauge",
    "gauge_values_rows",
    "intersect_eval",
    "loglog_phi",
    "luxemburg",
    "power_phi",
    "rational_phi",
    "CounterexampleReport",
    "IndependenceReport",
    "SeriesIntegral",
    "SimpleFunction",
    "integrate_series",
    "integrate_simple",
    "representation_independence_check",
    "rolewicz_counterexample",
    "simple_to_tensor",
    "CubeSpec",
    "DifferentiationReport",
    "DominationReport",
    "GridSpace",
    "Weak11Report",
    "cube_average",
    "default_scales",
    "differentiation_report",
    "hl_maximal",
    "series_domination_report",
    "vector_maximal",
    "weak11_constant",
    "MeasureSpace",
    "Partition",
    "ProductSpace",
    "ScalarField",
    "VectorField",
    "conditional_expectation",
    "counting_space",
    "decreasing_rearrangement",
    "distribution_mass",
    "integral",
    "product_space",
    "restrict",
    "trivial_partition",
    "uniform_probability_space",
    "weak_l1_value",
    "QuasiNormedSpace",
    "lq_space",
    "weak_l1_space",
    "weak_l1_vector_norm",
]
