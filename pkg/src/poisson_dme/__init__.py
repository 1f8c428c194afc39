"""Exact Poisson algebra toolkit: brackets, Groebner bases, D-varieties,
Hopf checks and Dixmier-Moeglin probes over the rationals."""

from .exactpoly import Derivation, Poly, RingSpec, partial_derivative, substitute
from .parsing import ParseError, parse_poly
from .groebner import (GREVLEX, LEX, Ideal, MonomialOrder, ResourceError, eliminate, groebner_basis,
                       ideal_member, intersect, normal_form, radical_member, saturate, step_budget,
                       syzygies)
from .poisson import (CheckResult, LieData, PoissonStructure, bracket, check_jacobi,
                      from_lie_algebra, generator_hamiltonians, hamiltonian, is_poisson_ideal,
                      poisson_center_upto, tensor_bracket)
from .dvariety import DVariety, d_closure, d_core, full_prolongation, prolongation_ideal, validate_dvariety
from .hopf import (HopfSignature, coproduct, forcom_image_kernel, forcom_map, is_differential_hopf,
                   is_poisson_hopf, prop_key_derivations, span_certificate)
from .schema import AlgebraSpec, SpecError, parse_algebra_spec
from .dme import DMEConfig, dme_report

__version__ = "0.1.0"
