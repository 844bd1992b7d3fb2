"""Exact-arithmetic toolkit for three-fold divisorial contraction data:
graded dimension counting, weighted-order analysis of polynomial germs,
and toric verification of weighted blow-ups of cyclic quotient germs."""

from .blowup import (BlowupReport, ChartFinding, CIGerm, DimensionError,
                     analyze_blowup, chart_singularities, discrepancy,
                     e_cubed, equation_orders, model_germ,
                     verify_blowup_profile)
from .dimensions import (CorrectionProfile, DimensionTable, InconsistencyError,
                         LatticePoint, WellDefinednessError,
                         check_decomposition, correction_profile,
                         degree_points, graded_dimension, solve_correction)
from .linalg import determinant, smith_normal_form
from .models import (CD2Model, CheckResult, NormalFormResult, ValidationReport,
                     blowup_vector, check_required_monomials, classify_normal_form,
                     eliminate_x5, generate_model, model_equations,
                     model_weights, required_monomials, validate_model)
from .polynomials import (GroupAction, INFINITE_ORDER, SparsePoly,
                          detect_square_form, homogeneous_part,
                          is_semi_invariant, low_part_ratio, poly_from_dict,
                          poly_to_dict, polynomial_sqrt, substitute,
                          truncate_gt, truncate_le, weighted_order)
from .quotients import (ChartGroup, ChartGroupFactor, ChartReport, LatticeError,
                        QuotientType, blowup_charts, effective_factors,
                        reid_tai_is_canonical, reid_tai_is_terminal)

__version__ = "0.1.0"
