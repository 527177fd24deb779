"""kappa-forge: exact top intersection numbers of psi- and kappa-classes on
moduli spaces of stable curves, computed from Virasoro-type constraints with
independent combinatorial cross-checks."""

from .algebra import (
    ExactRational,
    ExpPoly,
    GradedPoly,
    P_VARS,
    S_VARS,
    T_VARS,
    X_VARS,
    coeff,
    exp_truncated,
    make_mono,
    odd_double_factorial,
    poly_mul,
    poly_partial,
    rational_from_str,
    rational_to_str,
)
from .genfun import (
    ZSeries,
    bell_coeff_series,
    bell_poly,
    faa_di_bruno_check,
    q_series,
    schur_poly,
    schur_seq,
    substitute_series,
)
from .kappa import KappaEngine, KappaKey, build_Lhat, kappa_number
from .oracle import (
    fork_expansion_check,
    iter_set_partitions,
    kappa_via_partitions,
    kappa_via_substitution,
    omega_expected_from_kappa,
    omega_via_fork,
)
from .psi import PsiEngine, PsiKey, build_L, psi_number
from .records import CACHE_HEADER, ResultRecord, read_cache, write_cache
from .solver import (
    AnnihilationReport,
    DiffOperator,
    LinearRelation,
    NumberTable,
    OperatorTerm,
    Potential,
    apply_operator,
    check_annihilation,
    constraint_at,
    solve,
)

__version__ = "0.1.0"

__all__ = [
    "AnnihilationReport",
    "CACHE_HEADER",
    "DiffOperator",
    "ExactRational",
    "ExpPoly",
    "GradedPoly",
    "KappaEngine",
    "KappaKey",
    "LinearRelation",
    "NumberTable",
    "OperatorTerm",
    "P_VARS",
    "Potential",
    "PsiEngine",
    "PsiKey",
    "ResultRecord",
    "S_VARS",
    "T_VARS",
    "X_VARS",
    "ZSeries",
    "apply_operator",
    "bell_coeff_series",
    "bell_poly",
    "build_L",
    "build_Lhat",
    "check_annihilation",
    "coeff",
    "constraint_at",
    "exp_truncated",
    "faa_di_bruno_check",
    "fork_expansion_check",
    "iter_set_partitions",
    "kappa_number",
    "kappa_via_partitions",
    "kappa_via_substitution",
    "make_mono",
    "odd_double_factorial",
    "omega_expected_from_kappa",
    "omega_via_fork",
    "poly_mul",
    "poly_partial",
    "psi_number",
    "q_series",
    "rational_from_str",
    "rational_to_str",
    "read_cache",
    "schur_poly",
    "schur_seq",
    "solve",
    "substitute_series",
    "write_cache",
]
