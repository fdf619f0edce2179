"""Single-offer bargaining: B proposes an action and a revenue share.

B publishes an offer (s_A, gamma): if A plays s_A, B pays A a gamma fraction
of B's gain over her fallback. The fallback is what B can secure by replying
optimally to the equilibrium play of the types that would ever decline, so
the offer is evaluated against a rational threat point rather than a fixed
one. A accepts exactly when the shared gain covers her own sacrifice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .game import OneWayGame, StrategyProfile, best_response_B, optimal_welfare

VALUE_TOL = 1e-9


class Offer(NamedTuple):
    action_a: str
    gamma: float


@dataclass(frozen=True)
class OutsideOption:
    """B's fallback reply and its expected value if the offer is declined.

    The fallback conditions on rejection: only types of A for which the
    offered action is not already a selfish optimum would decline, so B
    best-responds to their equilibrium play under the renormalized prior.
    When that event has zero probability the fallback degenerates to the
    best reply against the offered action itself.
    """

    action_b: str
    payoff: float
    restricted_types: tuple[str, ...]
    restricted_mass: float


@dataclass(frozen=True)
class OfferEvaluation:
    offer: Offer
    type_b: str
    acceptance_prob: float
    delta_b: float
    outside: OutsideOption
    expected_u_a: float
    expected_u_b: float
    expected_sw: float
    accepting_types: tuple[str, ...]


@dataclass(frozen=True)
class OfferSearchResult:
    """An offer plus its evaluation.

    ``null_offer`` marks the degenerate case where no action of A improves
    on B's fallback; the returned evaluation then describes equilibrium play
    rather than a transaction anyone would enter.
    """

    offer: Offer
    evaluation: OfferEvaluation
    null_offer: bool = False


@dataclass(frozen=True)
class SingleOfferOutcome:
    accepted: bool
    profile: StrategyProfile
    transfer: float
    payoff_a: float
    payoff_b: float
    welfare: float


def restricted_types(game: OneWayGame, action_a: str) -> tuple[str, ...]:
    """Types of A for which ``action_a`` is not among her selfish optima."""
    ia = game.action_a_index(action_a)
    best = np.max(game.payoff_a, axis=1)
    return tuple(
        t for i, t in enumerate(game.types_a) if game.payoff_a[i, ia] != best[i]
    )


def delta_a(game: OneWayGame, action_a: str) -> np.ndarray:
    """A's sacrifice for playing ``action_a``, per type (aligned with types_a)."""
    ia = game.action_a_index(action_a)
    return np.max(game.payoff_a, axis=1) - game.payoff_a[:, ia]


def outside_option(game: OneWayGame, action_a: str, type_b: str) -> OutsideOption:
    restricted = restricted_types(game, action_a)
    idx = [game.type_a_index(t) for t in restricted]
    mass = float(np.sum(game.prior_a[idx])) if idx else 0.0
    itb = game.type_b_index(type_b)
    if not idx or mass <= 0.0:
        ab = best_response_B(game, action_a, type_b)
        return OutsideOption(ab, float(game.u_b((action_a, ab), type_b)), restricted, mass)
    weights = game.prior_a[idx] / mass
    nash_actions = np.argmax(game.payoff_a, axis=1)
    vals = weights @ game.payoff_b[itb, nash_actions[idx], :]
    ib = int(np.argmax(vals))
    return OutsideOption(game.actions_b[ib], float(vals[ib]), restricted, mass)


def delta_b(game: OneWayGame, action_a: str, type_b: str) -> float:
    """B's gain from the offered action over her fallback (may be negative)."""
    br = best_response_B(game, action_a, type_b)
    return float(game.u_b((action_a, br), type_b)) - outside_option(game, action_a, type_b).payoff


def acceptance_prob(game: OneWayGame, offer: Offer, type_b: str) -> float:
    """Prior mass of A types accepting: sacrifice at most gamma * gain."""
    db = delta_b(game, offer.action_a, type_b)
    da = delta_a(game, offer.action_a)
    return float(np.sum(game.prior_a[da <= offer.gamma * db]))


def _minimal_share(da: float, db: float) -> float:
    """Smallest float g with da <= g * db, starting from the exact ratio.

    The plain quotient da / db can land one ulp to either side of the set
    {g : da <= g * db}, which would make an offer built from it silently miss
    (or overpay) the type it is meant to capture. A couple of nextafter steps
    settle it on the boundary.
    """
    g = da / db
    if g < 0.0:
        g = 0.0
    while g * db < da:
        g = math.nextafter(g, math.inf)
    while g > 0.0:
        lower = math.nextafter(g, -math.inf)
        if lower < 0.0 or lower * db < da:
            break
        g = lower
    return g


def gamma_candidates(game: OneWayGame, action_a: str, type_b: str) -> list[float]:
    """Shares worth considering: 0 plus every type's break-even share in [0, 1].

    B's expected utility is piecewise linear in gamma with kinks exactly where
    some type becomes indifferent, so the maximum is attained on this grid.
    Each candidate is the smallest representable share that the indifferent
    type actually accepts under the ``da <= gamma * db`` rule.
    """
    cands = {0.0}
    db = delta_b(game, action_a, type_b)
    if db > 0.0:
        for v in delta_a(game, action_a):
            r = _minimal_share(float(v), db)
            if 0.0 <= r <= 1.0:
                cands.add(r)
    return sorted(cands)


def evaluate_offer(game: OneWayGame, offer: Offer, type_b: str) -> OfferEvaluation:
    """Expected utilities and welfare of an offer, exact per-type accounting.

    B's utility uses her planning view: the fallback value on rejection plus
    the retained share of the gain on acceptance. A's utility and welfare
    are computed per type from realized play (accept: the offered profile
    with the transfer; reject: A's selfish action against B's fallback reply).
    """
    action, gamma = offer
    out = outside_option(game, action, type_b)
    br = best_response_B(game, action, type_b)
    ub_accept = float(game.u_b((action, br), type_b))
    db = ub_accept - out.payoff
    da = delta_a(game, action)
    accept_mask = da <= gamma * db
    p = float(np.sum(game.prior_a[accept_mask]))
    e_ub = out.payoff + p * (1.0 - gamma) * db
    ia = game.action_a_index(action)
    nash_idx = np.argmax(game.payoff_a, axis=1)
    e_ua = 0.0
    e_sw = 0.0
    for i in range(len(game.types_a)):
        f = float(game.prior_a[i])
        if accept_mask[i]:
            ua = float(game.payoff_a[i, ia])
            e_ua += f * (ua + gamma * db)
            e_sw += f * (ua + ub_accept)
        else:
            ua = float(np.max(game.payoff_a[i]))
            e_ua += f * ua
            e_sw += f * (ua + float(game.u_b((game.actions_a[int(nash_idx[i])], out.action_b), type_b)))
    return OfferEvaluation(
        offer=offer,
        type_b=type_b,
        acceptance_prob=p,
        delta_b=db,
        outside=out,
        expected_u_a=e_ua,
        expected_u_b=float(e_ub),
        expected_sw=e_sw,
        accepting_types=tuple(t for i, t in enumerate(game.types_a) if accept_mask[i]),
    )


def _nash_evaluation(game: OneWayGame, offer: Offer, type_b: str) -> OfferEvaluation:
    """Evaluation describing plain equilibrium play, used for null offers."""
    from .equilibrium import nash_action_B

    out = outside_option(game, offer.action_a, type_b)
    db = delta_b(game, offer.action_a, type_b)
    da = delta_a(game, offer.action_a)
    accept_mask = da <= 0.0 * db if db <= 0.0 else da <= offer.gamma * db
    itb = game.type_b_index(type_b)
    nash_idx = np.argmax(game.payoff_a, axis=1)
    ib = game.action_b_index(nash_action_B(game, type_b))
    e_ub = float(game.prior_a @ game.payoff_b[itb, nash_idx, ib])
    e_ua = float(game.prior_a @ np.max(game.payoff_a, axis=1))
    return OfferEvaluation(
        offer=offer,
        type_b=type_b,
        acceptance_prob=float(np.sum(game.prior_a[accept_mask])),
        delta_b=db,
        outside=out,
        expected_u_a=e_ua,
        expected_u_b=e_ub,
        expected_sw=e_ua + e_ub,
        accepting_types=tuple(t for i, t in enumerate(game.types_a) if accept_mask[i]),
    )


def optimal_offer(game: OneWayGame, type_b: str) -> OfferSearchResult:
    """B's utility-maximizing offer for her type.

    Searches every action with a strictly positive gain and every candidate
    share. Near-ties (within 1e-9 of the best value) resolve to the smaller
    gamma and then the lower action index, which keeps results stable under
    payoff jitter. If no action has positive gain the result is a null offer
    at gamma 0, evaluated as equilibrium play.
    """
    scored: list[tuple[float, float, int, OfferEvaluation]] = []
    for ia, action in enumerate(game.actions_a):
        if delta_b(game, action, type_b) <= 0.0:
            continue
        for g in gamma_candidates(game, action, type_b):
            ev = evaluate_offer(game, Offer(action, g), type_b)
            scored.append((ev.expected_u_b, g, ia, ev))
    if not scored:
        dbs = np.asarray([delta_b(game, a, type_b) for a in game.actions_a])
        offer = Offer(game.actions_a[int(np.argmax(dbs))], 0.0)
        return OfferSearchResult(offer, _nash_evaluation(game, offer, type_b), null_offer=True)
    best = max(s[0] for s in scored)
    cluster = [s for s in scored if s[0] >= best - VALUE_TOL]
    cluster.sort(key=lambda s: (s[1], s[2]))
    _, g, ia, ev = cluster[0]
    return OfferSearchResult(Offer(game.actions_a[ia], g), ev, null_offer=False)


def simplified_offer(game: OneWayGame, type_b: str) -> OfferSearchResult:
    """Welfare-oriented recipe: fix the action B likes best, then pick the
    share maximizing acceptance_prob * (1 - gamma). Ties go to the smaller
    share; a non-positive gain forces gamma 0."""
    vals = np.asarray(
        [float(game.u_b((a, best_response_B(game, a, type_b)), type_b)) for a in game.actions_a]
    )
    action = game.actions_a[int(np.argmax(vals))]
    db = delta_b(game, action, type_b)
    gamma = 0.0
    if db > 0.0:
        best_v = -math.inf
        for g in gamma_candidates(game, action, type_b):
            v = acceptance_prob(game, Offer(action, g), type_b) * (1.0 - g)
            if v > best_v:
                best_v, gamma = v, g
    offer = Offer(action, gamma)
    return OfferSearchResult(offer, evaluate_offer(game, offer, type_b), null_offer=False)


def run_single_offer(
    game: OneWayGame, offer: Offer, type_a: str, type_b: str
) -> SingleOfferOutcome:
    """Resolve one interaction deterministically (ties accept)."""
    action, gamma = offer
    out = outside_option(game, action, type_b)
    br = best_response_B(game, action, type_b)
    db = float(game.u_b((action, br), type_b)) - out.payoff
    ita = game.type_a_index(type_a)
    da = float(np.max(game.payoff_a[ita]) - game.payoff_a[ita, game.action_a_index(action)])
    if da <= gamma * db:
        profile = StrategyProfile(action, br)
        transfer = gamma * db
        pa = float(game.payoff_a[ita, game.action_a_index(action)]) + transfer
        pb = float(game.u_b(profile, type_b)) - transfer
        return SingleOfferOutcome(True, profile, transfer, pa, pb, pa + pb)
    nash_a = game.actions_a[int(np.argmax(game.payoff_a[ita]))]
    profile = StrategyProfile(nash_a, out.action_b)
    pa = float(np.max(game.payoff_a[ita]))
    pb = float(game.u_b(profile, type_b))
    return SingleOfferOutcome(False, profile, 0.0, pa, pb, pa + pb)


def accept_reject_poa(gamma: float) -> tuple[float, float]:
    """Worst-case welfare ratios of the two outcomes of a gamma-share offer.

    Acceptance loses at most a factor 1 + gamma, rejection at most 1 + 1/gamma
    (infinite at gamma 0, where rejection carries no guarantee).
    """
    reject = math.inf if gamma == 0.0 else 1.0 + 1.0 / gamma
    return (1.0 + gamma, reject)


def theorem_bound(gamma: float, acceptance: float) -> float:
    """Guaranteed expected-PoA bound ((gamma+1)/gamma) * (1 - P(1-gamma))."""
    if gamma == 0.0:
        return math.inf
    return ((gamma + 1.0) / gamma) * (1.0 - acceptance * (1.0 - gamma))


def bayes_poa_bound(game: OneWayGame, type_b: str) -> float:
    """Expected-PoA guarantee delivered by the simplified offer for a type."""
    res = simplified_offer(game, type_b)
    if res.offer.gamma == 0.0:
        return math.inf
    return theorem_bound(res.offer.gamma, res.evaluation.acceptance_prob)


def corollary_bound(beta: float) -> tuple[float, float]:
    """Closed-form share and expected-PoA bound for power-law sacrifices.

    With acceptance probability (gamma)^beta the tuned share is beta/(beta+1)
    and the guarantee is (2 + 1/beta) * (1 - beta^beta / (beta+1)^(beta+1)).
    """
    if beta <= 0.0:
        raise ValueError("beta must be positive")
    gamma_star = beta / (beta + 1.0)
    bound = (2.0 + 1.0 / beta) * (1.0 - beta**beta / (beta + 1.0) ** (beta + 1.0))
    return (gamma_star, bound)


@dataclass(frozen=True)
class OutcomeRecord:
    """One A-type's outcome under the simplified offer, planning view.

    Rejection values B's side at the fallback payoff (what B counts on when
    committing to the offer); the per-outcome bound is then a theorem.
    """

    type_a: str
    accepted: bool
    welfare: float
    optimal: float
    poa: float
    branch_bound: float


@dataclass(frozen=True)
class SimplifiedReport:
    type_b: str
    offer: Offer
    acceptance_prob: float
    records: tuple[OutcomeRecord, ...]
    expected_poa: float
    poa_bound: float


def simplified_strategy_report(game: OneWayGame) -> dict[str, SimplifiedReport]:
    """Per-B-type audit of the simplified offer against its guarantees."""
    reports: dict[str, SimplifiedReport] = {}
    for tb in game.types_b:
        res = simplified_offer(game, tb)
        action, gamma = res.offer
        ev = res.evaluation
        accept_bound, reject_bound = accept_reject_poa(gamma)
        br = best_response_B(game, action, tb)
        ub_accept = float(game.u_b((action, br), tb))
        db = ev.delta_b
        ia = game.action_a_index(action)
        records = []
        expected = 0.0
        for i, ta in enumerate(game.types_a):
            f = float(game.prior_a[i])
            da = float(np.max(game.payoff_a[i]) - game.payoff_a[i, ia])
            accepted = da <= gamma * db
            if accepted:
                w = float(game.payoff_a[i, ia]) + ub_accept
                bound = accept_bound
            else:
                w = float(np.max(game.payoff_a[i])) + ev.outside.payoff
                bound = reject_bound
            opt = optimal_welfare(game, (ta, tb))[1]
            if w == 0.0:
                poa = 1.0 if opt == 0.0 else math.inf
            else:
                poa = opt / w
            records.append(OutcomeRecord(ta, accepted, w, opt, poa, bound))
            if f > 0.0:
                expected += f * poa
        bound_total = math.inf if gamma == 0.0 else theorem_bound(gamma, ev.acceptance_prob)
        reports[tb] = SimplifiedReport(
            type_b=tb,
            offer=res.offer,
            acceptance_prob=ev.acceptance_prob,
            records=tuple(records),
            expected_poa=float(expected),
            poa_bound=bound_total,
        )
    return reports
