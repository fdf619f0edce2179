"""No-payment equilibrium play and price-of-anarchy metrics.

Without transfers, player A simply maximizes her own payoff type by type.
Player B, whose payoff depends on A's action, best-responds in expectation
against A's equilibrium map. The inefficiency of that outcome is measured by
the price of anarchy (PoA): optimal welfare over equilibrium welfare.

Two aggregate metrics appear in reports and both are always labeled:

* ``bayes_nash_poa``: the expectation over type profiles of the per-profile
  welfare ratio (expectation of ratios).
* ``welfare_ratio_poa``: expected optimal welfare over expected equilibrium
  welfare (ratio of expectations).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .game import (
    OneWayGame,
    StrategyProfile,
    TypeProfile,
    best_response_B,
    optimal_welfare,
    social_welfare,
)


def nash_action_A(game: OneWayGame, type_a: str) -> str:
    """A's equilibrium action: her own argmax, lowest index on ties."""
    row = game.payoff_a[game.type_a_index(type_a), :]
    return game.actions_a[int(np.argmax(row))]


def nash_action_B(game: OneWayGame, type_b: str) -> str:
    """B's best reply, in prior expectation, to A's equilibrium map."""
    itb = game.type_b_index(type_b)
    a_idx = np.argmax(game.payoff_a, axis=1)  # A's action per type, ties to low index
    # expected payoff of each B action against the induced action distribution
    expected = game.prior_a @ game.payoff_b[itb, a_idx, :]
    return game.actions_b[int(np.argmax(expected))]


@dataclass(frozen=True)
class NashOutcome:
    """Equilibrium maps for both players plus expected equilibrium welfare."""

    action_a: dict[str, str]
    action_b: dict[str, str]
    expected_welfare: float


def nash_outcome(game: OneWayGame) -> NashOutcome:
    action_a = {t: nash_action_A(game, t) for t in game.types_a}
    action_b = {t: nash_action_B(game, t) for t in game.types_b}
    total = 0.0
    for ta, fa in zip(game.types_a, game.prior_a):
        for tb, fb in zip(game.types_b, game.prior_b):
            w = social_welfare(game, (action_a[ta], action_b[tb]), (ta, tb))
            total += float(fa) * float(fb) * w
    return NashOutcome(action_a=action_a, action_b=action_b, expected_welfare=total)


def poa_of_type(game: OneWayGame, types: TypeProfile | tuple[str, str]) -> float:
    """Per-profile price of anarchy: optimal welfare / equilibrium welfare.

    Zero equilibrium welfare with a positive optimum is reported as ``inf``;
    zero over zero is 1 (nothing is lost where nothing is attainable).
    """
    ta, tb = types
    _, opt = optimal_welfare(game, (ta, tb))
    eq = social_welfare(game, (nash_action_A(game, ta), nash_action_B(game, tb)), (ta, tb))
    if eq == 0.0:
        return 1.0 if opt == 0.0 else float("inf")
    return opt / eq


@dataclass(frozen=True)
class PoAReport:
    """Per-profile PoA with Prop-style bounds and both aggregate metrics."""

    per_type_poa: dict[TypeProfile, float]
    bayes_nash_poa: float
    welfare_ratio_poa: float
    prop1_lower: dict[TypeProfile, float]
    prop1_upper: dict[TypeProfile, float]
    infinite_profiles: tuple[TypeProfile, ...] = field(default=())


def poa_metrics(game: OneWayGame) -> PoAReport:
    """Exhaustive PoA sweep over type profiles.

    The per-profile lower bound is max_s u_B / (max_s u_A + u_B at equilibrium)
    and the upper bound is (max_s u_A + max_s u_B) / max_s u_A. Zero-probability
    profiles appear in the maps but are excluded from the expectations.
    """
    out = nash_outcome(game)
    per: dict[TypeProfile, float] = {}
    lower: dict[TypeProfile, float] = {}
    upper: dict[TypeProfile, float] = {}
    infinite: list[TypeProfile] = []
    expectation = 0.0
    opt_mean = 0.0
    for ita, ta in enumerate(game.types_a):
        fa = float(game.prior_a[ita])
        ua_best = float(np.max(game.payoff_a[ita]))
        for itb, tb in enumerate(game.types_b):
            fb = float(game.prior_b[itb])
            key = TypeProfile(ta, tb)
            profile = StrategyProfile(out.action_a[ta], out.action_b[tb])
            eq_w = social_welfare(game, profile, key)
            _, opt_w = optimal_welfare(game, key)
            ub_best = float(np.max(game.payoff_b[itb]))
            per[key] = 1.0 if (eq_w == 0.0 and opt_w == 0.0) else (
                float("inf") if eq_w == 0.0 else opt_w / eq_w
            )
            lower[key] = float("inf") if eq_w == 0.0 else ub_best / eq_w
            upper[key] = float("inf") if ua_best == 0.0 else (ua_best + ub_best) / ua_best
            if not np.isfinite(per[key]):
                infinite.append(key)
            if fa * fb > 0.0:
                expectation += fa * fb * per[key]
                opt_mean += fa * fb * opt_w
    ratio = (
        1.0
        if (opt_mean == 0.0 and out.expected_welfare == 0.0)
        else (float("inf") if out.expected_welfare == 0.0 else opt_mean / out.expected_welfare)
    )
    return PoAReport(
        per_type_poa=per,
        bayes_nash_poa=float(expectation),
        welfare_ratio_poa=float(ratio),
        prop1_lower=lower,
        prop1_upper=upper,
        infinite_profiles=tuple(infinite),
    )


def joint_max_strategy(game: OneWayGame, types: TypeProfile | tuple[str, str]) -> StrategyProfile:
    """Profile maximizing max(u_A, u_B), a two-approximation of optimal welfare.

    When A's side attains the larger maximum, B's coordinate is completed with
    her best response so the profile never wastes B's payoff.
    """
    ta, tb = types
    ita = game.type_a_index(ta)
    itb = game.type_b_index(tb)
    ua_best = float(np.max(game.payoff_a[ita]))
    ub_best = float(np.max(game.payoff_b[itb]))
    if ua_best >= ub_best:
        sa = game.actions_a[int(np.argmax(game.payoff_a[ita]))]
        return StrategyProfile(sa, best_response_B(game, sa, tb))
    flat = int(np.argmax(game.payoff_b[itb]))
    ia, ib = divmod(flat, len(game.actions_b))
    return StrategyProfile(game.actions_a[ia], game.actions_b[ib])


def poa_report_rows(game: OneWayGame, report: PoAReport) -> tuple[list[str], list[list]]:
    """Flatten a report for CSV output; two labeled summary rows at the end."""
    columns = ["type_A", "type_B", "poa", "prop1_lower", "prop1_upper"]
    rows: list[list] = []
    for ta in game.types_a:
        for tb in game.types_b:
            key = TypeProfile(ta, tb)
            rows.append([ta, tb, report.per_type_poa[key], report.prop1_lower[key], report.prop1_upper[key]])
    rows.append(["bayes_nash_poa", "", report.bayes_nash_poa, "", ""])
    rows.append(["welfare_ratio_poa", "", report.welfare_ratio_poa, "", ""])
    return columns, rows
