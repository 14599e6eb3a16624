"""piseries: exact and high-precision verification of two-variable
Ramanujan-type 1/pi series built from Apery-like sequences, bimodular
forms, and CM points.

The package has three layers:

* exact combinatorics and formal power series (`sequences`,
  `powerseries`, `qseries`): recurrences, binomial identities, the
  two-variable product identity, five PDE systems, Brafman's formula,
  all checked coefficientwise over Q;
* arbitrary-precision modular evaluation (`bigfloat`, `modular`,
  `cmpoints`, `cmconstants`): eta products and theta/Eisenstein values,
  CM points as binary quadratic forms with exact congruence-group
  equivalence, Atkin-Lehner actions, and the analytic constants that
  turn a CM pair into a 1/pi series;
* the verification harness (`tables`, `verify`, `cli`): packaged data
  tables, series evaluation with certified tails, row verification
  against C/pi, and re-derivation of each row's constants from its CM
  pair.
"""

from .cases import SeriesCase, sporadic_case, hyper_case, case_from_tag, ALL_CASES
from .sequences import apery_seq, apery_closed, tn, legendre, double_coeff
from .powerseries import (BiSeries, series_F, substitute_xy, wz_check,
                          pde_residual, pde_systems, brafman_check)
from .bigfloat import pi_const, recognize_rational
from .constexpr import parse_const, eval_const
from .qseries import QSeries, case_tfg, tfg_identity_defect
from .modular import (eta, eta_multiplier, gen_eta, theta_eisenstein,
                      bimodular_xyF, check_transform, section3_identity)
from .cmpoints import (QuadForm, class_forms, class_number, cm_points,
                       atkin_lehner, classify_orbit, tau_alpha, find_cm_pair,
                       ogg_count)
from .cmconstants import (lemma_pi_residual, delta, theta_partials,
                          case_at_cm, theorem_constants)
from .tables import TableRow, parse_tables, load_builtin, load_path
from .verify import (eval_series, verify_row, verify_all, rederive_row,
                     VerifyReport)

__version__ = "0.1.0"
