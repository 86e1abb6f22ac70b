"""branchlab: executable decision theory for branching-measurement scenarios.

Core pieces: labeled quantum states with exact-rational or float kernels,
measurement-induced branching with payoff tags and result erasure, pluggable
credence rules and their consistency guards, Dutch-book coherence
certificates, self-locating posteriors for the sleeper experiments, and
Bayesian updating policies for branching vs one-world hypotheses - all glued
together by a scenario-driven CLI.
"""

__version__ = "0.1.0"

from .errors import (
    BranchlabError,
    ConfigError,
    DomainError,
    HereticNotApplicable,
    ImpossibleEvidence,
    InvalidCredence,
    SingularMapError,
    SupportViolation,
)
from .states import (
    ERASED,
    Branch,
    GlobalState,
    OutcomePartition,
    StateMap,
    StateVector,
    apply_map,
    born_weights,
    branch,
    erase,
    global_equal,
    state_equal,
)
from .credence import (
    ORTHODOX,
    CredenceAssignment,
    CredenceRule,
    Custom,
    ExtremalityViolation,
    Heretic,
    Orthodox,
    OutcomeEgalitarian,
    assign,
    eigenstate_probes,
    evaluate_act,
    extremality_preserved,
    heretic_applicable,
    support_consistent,
)
from .games import (
    Game,
    OutcomeCollapseReport,
    PreferenceVerdict,
    SsriVerdict,
    compare,
    play,
    reward_game,
    ssri_outcome_collapse,
    ssri_verdict,
)
from .coherence import (
    Bet,
    Book,
    CoherenceCertificate,
    check_coherence,
    search_book,
)
from .selflocation import (
    AWAKE,
    CLASSICAL,
    HALFER,
    QUANTUM_EVERETT,
    THIRDER,
    BeautyScenario,
    CenteredWorld,
    day_likelihoods,
    enumerate_centered_worlds,
    make_days,
    posterior,
    posterior_odds,
)
from .confirmation import (
    BRANCHING,
    NAIVE,
    ONE_WORLD,
    STANDARD,
    TOTAL_EVIDENCE,
    Hypothesis,
    OneWorldRun,
    Posterior,
    likelihood,
    one_world_run,
    run_sequence,
    update,
)
from .scenarios import (
    Report,
    Scenario,
    bundled_scenario_names,
    list_scenarios,
    load_bundled,
    load_scenario,
    run_scenario,
    scenario_games,
    validate_scenario,
)
