"""Exact p-adic slopes of Hecke eigenvalues on Gamma_0 levels.

Two independent engines compute det(1 - T_p X) on S_k(Gamma_0(M)): a
weight-k modular symbols presentation restricted to the cuspidal plus
subspace, and the Eichler-Selberg trace formula fed through Newton's
identities.  On top of them sit Newton polygon slope extraction,
low-weight regularity verdicts, the level-raising slope assembly, and
bounded searches for fractional slopes strictly between 0 and 1.
"""

from .cache import (CacheRecord, CharpolyCache, activate, cache_roundtrip,
                    operator_label)
from .dimensions import (DimensionProfile, dim_cuspforms, dim_new_at_p,
                         dimension_profile, genus)
from .errors import ConsistencyError, TraceBudgetExceeded
from .exact import (INFINITY, IntPolynomial, NewtonPolygon, SlopeMultiset,
                    inverse_charpoly, newton_slopes, valuation)
from .modsym import charpoly_cuspidal, hecke_on_cuspidal, plus_quotient
from .slopes import (HeckeContext, P2Report, RegularityVerdict, UpSlopeAssembly,
                     Witness, WitnessReport, classicality_filter,
                     default_witness_bound, find_fractional_witness, is_regular,
                     minimal_witness_report, p2_refinement_check,
                     refinement_pair, regularity_weight_range, tp_slopes,
                     up_assembly, up_slopes_direct, weight_sequence)
from .survey import (CSV_HEADER, ReportRow, SurveyConfig, SurveyResult,
                     compute_pair, render_report, run_survey)
from .traceforms import (ClassNumberTable, charpoly_from_traces, default_table,
                         hurwitz_class_number, trace_feasible, trace_tn)

__version__ = "0.1.0"

__all__ = [
    "CacheRecord", "CharpolyCache", "activate", "cache_roundtrip", "operator_label",
    "DimensionProfile", "dim_cuspforms", "dim_new_at_p", "dimension_profile", "genus",
    "ConsistencyError", "TraceBudgetExceeded",
    "INFINITY", "IntPolynomial", "NewtonPolygon", "SlopeMultiset",
    "inverse_charpoly", "newton_slopes", "valuation",
    "charpoly_cuspidal", "hecke_on_cuspidal", "plus_quotient",
    "HeckeContext", "P2Report", "RegularityVerdict", "UpSlopeAssembly",
    "Witness", "WitnessReport", "classicality_filter", "default_witness_bound",
    "find_fractional_witness", "is_regular", "minimal_witness_report",
    "p2_refinement_check", "refinement_pair", "regularity_weight_range",
    "tp_slopes", "up_assembly", "up_slopes_direct", "weight_sequence",
    "CSV_HEADER", "ReportRow", "SurveyConfig", "SurveyResult",
    "compute_pair", "render_report", "run_survey",
    "ClassNumberTable", "charpoly_from_traces", "default_table",
    "hurwitz_class_number", "trace_feasible", "trace_tn",
    "__version__",
]
