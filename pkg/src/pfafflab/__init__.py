"""Exact Pfaffian laboratory for multiple skew-orthogonal polynomials.

Constructs skew-orthogonal linear forms from moment data via Pfaffians and
verifies the orthogonality relations, derivative relations, recurrences,
tau-function expansions, and bilinear lattice equations they satisfy, all as
identically-zero residuals in exact rational or polynomial arithmetic.
"""

from .exactalg import GeneratorRegistry, GeneratorRule, Rational, RingElem, extend_derivation
from .errors import (BoundExceeded, ConfigError, DegenerateInstance, EvenParity,
                     InvalidSpec, MissingRule, NotNormal, OddParity, OddSize,
                     PfafflabError, SizeLimit, UnknownEquation)
from .moments import (InstanceSpec, MomentAlgebra, MomentKey, concrete_random_instance,
                      generic_instance, make_instance, s, t)
from .msop import (LinearForm, derive_form, forms_proportional, linear_form_R,
                   linear_form_Rtilde, monomial_form, msop_via_linsolve, skew_pair,
                   sop_reduce, verify_derivative_relation, verify_recurrence,
                   verify_skew_orthogonality)
from .pfaffian import (FormalSymbolSet, SkewMatrix, determinant, pfaffian,
                       pfaffian_expansion, pfaffian_matchings_oracle,
                       verify_pfaffian_identity)
from .hierarchy import (apply_schur_derivation, cauchy_series, hirota_eval, schur_p,
                        verify_equation, verify_miwa_minor)
from .report import VerificationReport

__version__ = "0.1.0"
