"""Exact-arithmetic simulation of variable-processor cup games.

Engines for the standard, negative-fill, and resource-augmented games, the
stone and checkpoint variants, the constructive filler strategies behind the
time-vs-backlog trade-off, and the order-theoretic transfer machinery that
relates them.
"""

from .core import (
    CupGameError,
    CupState,
    EmptierMove,
    FillerMove,
    GameTrace,
    GameVariant,
    InvalidMoveError,
    NEGATIVE_FILL,
    Rational,
    RecordLevel,
    RoundRecord,
    STANDARD,
    VariantKind,
    apply_emptier_move,
    apply_filler_move,
    augmented,
    backlog,
    cup_state,
    normalize_filler_move,
    play_round,
    run_game,
    validate_filler_move,
    zeros,
)
from .emptiers import (
    GreedyEmptier,
    OracleConfig,
    ProportionalEmptier,
    TieKind,
    TiePolicy,
    greedy_empty,
    opt_oracle,
    proportional_emptier_round,
    proportional_sample,
    wlog_transform,
)
from .fillers import (
    AdvancedFiller,
    ChangeLimitedFiller,
    InfeasiblePlanError,
    MainFiller,
    MainFillerPlan,
    RandomFiller,
    WarmupFiller,
    flat_split_move,
    force_upward,
    hold_state_move,
    make_plan,
    warmup_move,
)
from .order import (
    Perturbation,
    apply_perturbation,
    dominates,
    majorization_transfer,
    majorizes,
    negate_round,
    negate_state,
    perturbation_chain,
    stone_cover_move,
    stone_transfer,
    transfer_emptier_move,
    transfer_filler_move,
    weakly_monopolizes,
)
from .stonegame import (
    StoneMove,
    StoneState,
    apply_stone_move,
    bound_b_of_t,
    bound_t_of_b,
    enumerate_valid_moves,
    f_al,
    level_report,
    no_gaps_check,
    phi,
    phi_a,
    psi,
    psi_a,
    stone_state,
    stone_zeros,
)

__version__ = "0.1.0"
