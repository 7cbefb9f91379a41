"""Multi-parameter Littlewood-Paley square functions on tori and Euclidean spaces.

Trigonometric polynomials, dyadic multipliers, Orlicz and weak-type norms,
Hardy-space tools, extremal kernel families and desk-scale rate experiments.
"""

from .euclid import (BandlimitedFn, ConeParams, box_lp_norm, euclid_square_function,
                     nontangential_max, poisson_extension, poisson_kernel, rough_project)
from .experiments import (ConfigError, ExperimentConfig, NumericalError, RateRow, RateTable,
                          emit_report, envelope_check, fit_exponent, load_report,
                          rate_experiment, weak_type_experiment, zygmund_experiment)
from .hardy import (KxSplit, analytic_projection, conjugate_function, h1_norm, kx_split,
                    outer_function)
from .kernels import (FamilySpec, diag_embed, dirichlet_block, family_poly, fejer,
                      pichorides_fn, vallee_poussin)
from .multipliers import (AxisSymbol, MultiplierSpec, SignPattern, apply_tensor_multiplier,
                          block_index, block_range, delta_project, marcinkiewicz_constant,
                          sign_symbol, square_function)
from .orlicz import OrliczParams, khintchine_ratio, orlicz_norm, weak_quasinorm
from .spectral import (AliasingError, GridFunction, TrigPoly, analyze, lp_norm, synthesize,
                       tensor_product)

__version__ = "0.1.0"
