"""Resolvent-norm level sets of weighted shifts under non-Euclidean norms.

Submodules
----------
absolute_norms
    psi generators of absolute normalized norms on pairs, their duals.
vector_norms
    l_p, star and psi-sum norms on windows of bilateral sequences.
shift_operators
    Closed-form resolvents of two weighted bilateral shifts.
opnorm
    Operator-norm lower bounds with witnesses, plus a brute-force oracle.
pseudospectra
    Grid scans, flatness reports and level-set classification.
convexity_probe
    Searches against complex strict and uniform convexity.
semigroup_ineq
    Kallman-Rota type checks for matrix semigroup generators.
cli
    The ``levelsets`` command.
"""

from .absolute_norms import (
    PsiAnalysis,
    PsiFunction,
    builtin_psis,
    maximize_linear_over_psi,
    norm_psi_pair,
    psi_analyze,
    psi_dual,
    psi_eval,
    psi_max,
    psi_one,
    psi_p,
    psi_pwl,
    read_psi_csv,
    write_psi_csv,
)
from .convexity_probe import ConvexityWitness, csc_witness_search, cuc_modulus_estimate, disc_sup
from .errors import DomainError, PreconditionError, ValidationError
from .opnorm import NormEstimate, opnorm_general, opnorm_l2, oracle_opnorm
from .pseudospectra import (
    FlatnessReport,
    PseudoGrid,
    Region,
    classify_levelset,
    flatness_report,
    grid_points,
    read_grid_csv,
    scan_grid,
    write_grid_csv,
)
from .semigroup_ineq import (
    GeneratorCase,
    check_eps_bound,
    check_kallman_rota,
    check_rota_ratio,
    make_case,
    random_contraction_generator,
    semigroup_bound,
)
from .shift_operators import (
    ResolventMatrix,
    ShiftSpec,
    apply_resolvent,
    beta_weights,
    resolvent_matrix,
    truncation_bound,
)
from .vector_norms import (
    IndexedVector,
    Lp,
    PsiSum,
    Star,
    ThetaSplit,
    eval_norm,
    theta_split,
    window_labels,
)

__version__ = "0.1.0"
