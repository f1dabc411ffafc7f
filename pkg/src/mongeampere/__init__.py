"""Exact symbolic toolkit for symplectic Monge-Ampere equations.

Differential forms on T*R^n with rational polynomial coefficients, the
invariants of constant-coefficient forms, the operator/form dictionary for
Monge-Ampere equations and the generalized complex structures of 2D
equations of divergent type.
"""

from .errors import DomainError, ParseError
from .polynomial import Poly
from .exterior import (Endo, Form, PolyVectorField, SymplecticContext, a_iso, contract, divide_by_omega,
                       ext_d, homotopy_potential, is_primitive, lepage_decompose, lie_action,
                       pullback_linear, symplectic_context, wedge)
from .dsl import format_form, parse_form, parse_point, parse_poly
from .invariants import (SquareRoot, QuarticInvariant, SurdForm, dual_form, hitchin_pfaffian,
                         hitchin_tensor, lr_metric, nijenhuis_endo, perfect_square_root,
                         pfaffian2, phi_bracket, q_invariant, scalar_invariants)
from .linalg import SignatureResult, signature_exact
from .mae import (HessSymbol, LinearizationResult, Orbit2D, Orbit3D, Report4D, classify,
                  divergent_type, ellipticity_class, form_from_symbol, generating_check,
                  linearize, linearize_via_dual, mae_apply, mae_symbol, parse_symbol)
from .gcs import (GCStructure, GenSection, SampledSurface, courant_bracket,
                  gcs_from_hitchin_pair, gcs_integrability_residual, generalized_solution_check,
                  pairing)

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "ParseError",
    "Poly",
    "Endo",
    "Form",
    "PolyVectorField",
    "SymplecticContext",
    "a_iso",
    "contract",
    "divide_by_omega",
    "ext_d",
    "homotopy_potential",
    "is_primitive",
    "lepage_decompose",
    "lie_action",
    "pullback_linear",
    "symplectic_context",
    "wedge",
    "format_form",
    "parse_form",
    "parse_point",
    "parse_poly",
    "SquareRoot",
    "QuarticInvariant",
    "SurdForm",
    "dual_form",
    "hitchin_pfaffian",
    "hitchin_tensor",
    "lr_metric",
    "nijenhuis_endo",
    "perfect_square_root",
    "pfaffian2",
    "phi_bracket",
    "q_invariant",
    "scalar_invariants",
    "SignatureResult",
    "signature_exact",
    "HessSymbol",
    "LinearizationResult",
    "Orbit2D",
    "Orbit3D",
    "Report4D",
    "classify",
    "divergent_type",
    "ellipticity_class",
    "form_from_symbol",
    "generating_check",
    "linearize",
    "linearize_via_dual",
    "mae_apply",
    "mae_symbol",
    "parse_symbol",
    "GCStructure",
    "GenSection",
    "SampledSurface",
    "courant_bracket",
    "gcs_from_hitchin_pair",
    "gcs_integrability_residual",
    "generalized_solution_check",
    "pairing",
    "__version__",
]
