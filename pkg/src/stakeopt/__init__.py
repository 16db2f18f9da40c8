"""Exact analysis and deadline optimization of integer-stake gambling strategies.

Core surfaces:

  * exact        rationals, polynomials over Q, rational functions, series
  * game         GameSpec, Strategy, the named strategy families, closed forms
  * chain        exact absorbing-chain analysis (win prob, durations, PGFs)
  * horizon      finite-horizon DP for the deadline-optimal stake
  * search       (f, c) grid searches under deadline / risk constraints
  * simulate     seeded Monte-Carlo play
  * cli, service command line and HTTP front ends
"""

from .chain import (
    ChainReport,
    analyze,
    duration_pgf,
    duration_pgf_win,
    expected_duration,
    expected_duration_given_win,
    win_prob,
)
from .errors import DomainError, SingularSystemError, StakeoptError
from .exact import (
    DECIMAL,
    EXACT,
    Polynomial,
    Rational,
    RationalFunction,
    format_rational,
    parse_rational,
    rational,
    ratfun_normalize,
    series_coefficients,
    to_decimal,
)
from .game import (
    GameSpec,
    Strategy,
    bold,
    breiman_kelly,
    kelly,
    load_strategy,
    timid,
    timid_expected_time,
    timid_win_prob,
    validate_strategy,
)
from .horizon import (
    HorizonTable,
    best_stake,
    best_strat_story,
    build_table,
    horizon_win_prob,
)
from .search import SearchResult, best_bk, kelly_contest
from .simulate import (
    BatchSummary,
    Trajectory,
    fixed_policy,
    monte_carlo,
    optimal_policy,
    simulate_game,
)

__version__ = "0.1.0"
