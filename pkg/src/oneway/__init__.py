"""Two-player one-way games: equilibria, inefficiency metrics and bargaining.

Player A's payoff depends only on her own action and private type; player B's
depends on both actions and his own type. The package computes no-payment
equilibrium play and its price of anarchy, single-offer and scheduled
multi-offer bargaining with their guarantees, and the bilateral-trade
feasibility analysis that motivates one-sided mechanisms, plus the worked
continuous examples in closed form and by simulation.
"""

from .analytics import (
    ContinuousSpec,
    CurvePoint,
    MCResult,
    SingleOfferScenario,
    acceptance_prob_example2,
    aggregate_accounting_welfare,
    discretize,
    example1b,
    example1b_no_payment_poa,
    example1b_scenario,
    example2,
    example2_poa_max,
    expected_max_uniform,
    mc_single_offer,
    power_scenario,
    scenario_game,
)
from .bilateral import (
    BilateralTradeInstance,
    DirectMechanism,
    FeasibilityResult,
    OneWayMechanism,
    PropertyReport,
    RefinementRow,
    SubsidyResult,
    certificate_is_valid,
    check_one_way_properties,
    check_properties,
    efficient_allocation,
    feasibility_lp,
    mechanism_to_one_way,
    min_subsidy,
    refinement_sweep,
    to_one_way,
    uniform_grid_instance,
)
from .equilibrium import (
    NashOutcome,
    PoAReport,
    joint_max_strategy,
    nash_action_A,
    nash_action_B,
    nash_outcome,
    poa_metrics,
    poa_of_type,
    poa_report_rows,
)
from .game import (
    OneWayGame,
    StrategyProfile,
    TypeProfile,
    best_response_B,
    make_game,
    optimal_welfare,
    social_welfare,
    validate,
)
from .generate import random_game, random_suite
from .io import (
    InstanceFormatError,
    config_hash,
    game_to_dict,
    load_bilateral,
    load_game,
    load_schedule_file,
    save_game,
)
from .multi_offer import (
    MultiOfferEvaluation,
    MultiOfferOutcome,
    Schedule,
    ScheduleOptimum,
    SimulationResult,
    Z99,
    acceptance_step,
    equivalence_gap,
    expected_outcome,
    expected_utility_B,
    optimize_schedule,
    reach_probs,
    run_multi_offer,
    s_values,
    schedule_errors,
    simulate_schedule,
)
from .single_offer import (
    Offer,
    OfferEvaluation,
    OfferSearchResult,
    OutsideOption,
    SimplifiedReport,
    SingleOfferOutcome,
    accept_reject_poa,
    acceptance_prob,
    bayes_poa_bound,
    corollary_bound,
    delta_a,
    delta_b,
    evaluate_offer,
    gamma_candidates,
    optimal_offer,
    outside_option,
    restricted_types,
    run_single_offer,
    simplified_offer,
    simplified_strategy_report,
    theorem_bound,
)

__version__ = "0.1.0"

__all__ = [
    "BilateralTradeInstance",
    "ContinuousSpec",
    "CurvePoint",
    "DirectMechanism",
    "FeasibilityResult",
    "InstanceFormatError",
    "MCResult",
    "MultiOfferEvaluation",
    "MultiOfferOutcome",
    "NashOutcome",
    "Offer",
    "OfferEvaluation",
    "OfferSearchResult",
    "OneWayGame",
    "OneWayMechanism",
    "OutsideOption",
    "PoAReport",
    "PropertyReport",
    "RefinementRow",
    "Schedule",
    "ScheduleOptimum",
    "SimplifiedReport",
    "SimulationResult",
    "SingleOfferOutcome",
    "SingleOfferScenario",
    "StrategyProfile",
    "SubsidyResult",
    "TypeProfile",
    "Z99",
    "accept_reject_poa",
    "acceptance_prob",
    "acceptance_prob_example2",
    "acceptance_step",
    "aggregate_accounting_welfare",
    "bayes_poa_bound",
    "best_response_B",
    "certificate_is_valid",
    "check_one_way_properties",
    "check_properties",
    "config_hash",
    "corollary_bound",
    "delta_a",
    "delta_b",
    "discretize",
    "efficient_allocation",
    "equivalence_gap",
    "evaluate_offer",
    "example1b",
    "example1b_no_payment_poa",
    "example1b_scenario",
    "example2",
    "example2_poa_max",
    "expected_max_uniform",
    "expected_outcome",
    "expected_utility_B",
    "feasibility_lp",
    "game_to_dict",
    "gamma_candidates",
    "joint_max_strategy",
    "load_bilateral",
    "load_game",
    "load_schedule_file",
    "make_game",
    "mc_single_offer",
    "mechanism_to_one_way",
    "min_subsidy",
    "nash_action_A",
    "nash_action_B",
    "nash_outcome",
    "optimal_offer",
    "optimal_welfare",
    "optimize_schedule",
    "outside_option",
    "poa_metrics",
    "poa_of_type",
    "poa_report_rows",
    "power_scenario",
    "random_game",
    "random_suite",
    "reach_probs",
    "refinement_sweep",
    "restricted_types",
    "run_multi_offer",
    "run_single_offer",
    "s_values",
    "save_game",
    "scenario_game",
    "schedule_errors",
    "simplified_offer",
    "simplified_strategy_report",
    "simulate_schedule",
    "social_welfare",
    "theorem_bound",
    "to_one_way",
    "uniform_grid_instance",
    "validate",
]
