"""Toeplitz quantization on the complex quantum plane."""

from .scalars import EXACT, FLOAT, BackendMismatch, GaussianRational
from .qalgebra import Element, Monomial, QMismatch, mul, star, star_antihom_probe, theta, thetabar
from .weights import (
    PositivityError,
    WeightError,
    WeightRangeError,
    WeightSequence,
    ccr_weights,
    constant_weights,
    deformed_factorial,
    deformed_int,
    factorial_weights,
    parse_weight_spec,
    table_weights,
    w_int,
)
from .pairing import (
    DefinitenessReport,
    DegeneracyReport,
    ScanResult,
    definiteness_probe,
    epsilon,
    gram,
    inner,
    nondegeneracy_scan,
    sector_of,
)
from .bargmann import FockVector, embed, phi, project_K
from .toeplitz import (
    DimensionMismatch,
    TruncatedOperator,
    adjoint,
    apply,
    ccr_residual,
    compactness_probe,
    compose,
    norm_bound_monomial,
    q_commutator,
    toeplitz_monomial,
)
from .textio import ParseError, element_from_json, element_to_json, parse_element

__version__ = "0.1.0"
