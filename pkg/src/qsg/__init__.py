"""Chart-level tensor calculus with exact polynomial jets, conjugate
connection transforms, and residual-based verification of the coupling
identities between torsion-bearing connections, almost complex structures,
and Hermitian or Norden metrics."""

__version__ = "0.1.0"

from .fields import ChartDomain, Jet1, PolyExpr, PolyTensorField, eval_jet, field_arith
from .calculus import (
    Connection,
    PolyConnection,
    LeviCivitaConnection,
    DerivedTensorField,
    covariant_derivative,
    exterior_d2,
    invert_bilinear,
    levi_civita,
    lie_bracket,
    torsion,
)
from .structures import AlmostComplexStructure, MetricField, fundamental_two_form, twin_metric
from .connections import average_connection, conjugate_by_bilinear, conjugate_by_J, klein_table
from .model import ChartModel, flat_hermitian_model, flat_norden_model
from .predicates import CheckReport, check
from .generate import GenSpec, SynthesisResult, synthesize_connection
from .propositions import SuiteReport, run_full_suite

__all__ = [
    "ChartDomain",
    "Jet1",
    "PolyExpr",
    "PolyTensorField",
    "eval_jet",
    "field_arith",
    "Connection",
    "PolyConnection",
    "LeviCivitaConnection",
    "DerivedTensorField",
    "covariant_derivative",
    "exterior_d2",
    "invert_bilinear",
    "levi_civita",
    "lie_bracket",
    "torsion",
    "AlmostComplexStructure",
    "MetricField",
    "fundamental_two_form",
    "twin_metric",
    "average_connection",
    "conjugate_by_bilinear",
    "conjugate_by_J",
    "klein_table",
    "ChartModel",
    "flat_hermitian_model",
    "flat_norden_model",
    "CheckReport",
    "check",
    "GenSpec",
    "SynthesisResult",
    "synthesize_connection",
    "SuiteReport",
    "run_full_suite",
]
