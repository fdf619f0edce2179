"""Multi-offer bargaining: a posted schedule of rising shares.

B commits to a sequence of shares gamma_1 < ... < gamma_n for one action,
together with continuation probabilities: after a rejection at step i the
process moves on to step i+1 with probability p_{i+1}, otherwise it ends and
both sides fall back to no-deal play. The risk of the process ending is what
disciplines A: her effective threshold at step i is the schedule value

    S_i = (gamma_i - p_{i+1} gamma_{i+1}) / (1 - p_{i+1})      (S_n = gamma_n)

and a rational A accepts at the first step whose S_i covers her sacrifice
ratio. Every schedule's value to B is a convex combination of single-offer
values, so the best schedule recovers exactly the best single offer; the
functions here make both the equivalence and the simulation checkable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import streams
from .game import OneWayGame, StrategyProfile, best_response_B
from .single_offer import (
    Offer,
    delta_a,
    gamma_candidates,
    optimal_offer,
    outside_option,
)

# 99.5th percentile of the standard normal: half-width multiplier for a
# two-sided 99 percent confidence interval.
Z99 = 2.5758293035489004


def schedule_errors(action_a: str, gammas: tuple[float, ...], probs: tuple[float, ...]) -> list[str]:
    errors: list[str] = []
    n = len(gammas)
    if n == 0:
        errors.append("schedule needs at least one step")
        return errors
    if len(probs) != n:
        errors.append(f"probs has length {len(probs)}, expected {n}")
        return errors
    for i, g in enumerate(gammas):
        if not math.isfinite(g) or not 0.0 <= g <= 1.0:
            errors.append(f"gamma[{i}] = {g!r} is outside [0, 1]")
    for i in range(1, n):
        if not gammas[i] > gammas[i - 1]:
            errors.append(f"gammas must be strictly increasing (step {i})")
    if probs[0] != 1.0:
        errors.append(f"probs[0] = {probs[0]!r}, the first offer must be certain (1.0)")
    for i, p in enumerate(probs):
        if not math.isfinite(p) or not 0.0 <= p <= 1.0:
            errors.append(f"probs[{i}] = {p!r} is outside [0, 1]")
    for i in range(1, n):
        if probs[i] == 1.0:
            errors.append(
                f"probs[{i}] = 1.0 makes continuation certain and step {i} meaningless"
            )
    return errors


@dataclass(frozen=True)
class Schedule:
    """A committed offer schedule for one action of A."""

    action_a: str
    gammas: tuple[float, ...]
    probs: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "gammas", tuple(float(g) for g in self.gammas))
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))
        errors = schedule_errors(self.action_a, self.gammas, self.probs)
        if errors:
            raise ValueError("; ".join(errors))

    @property
    def n(self) -> int:
        return len(self.gammas)


def s_values(schedule: Schedule) -> tuple[float, ...]:
    """Effective thresholds (S_0, S_1, ..., S_n) with S_0 = 0 by convention.

    Interior steps discount the next offer by its continuation probability;
    the last step has nothing after it, so S_n is gamma_n itself. Interior
    values can be negative when the next offer is attractive enough, which
    simply means nobody accepts early.
    """
    g, p = schedule.gammas, schedule.probs
    n = schedule.n
    out = [0.0]
    for i in range(1, n):
        out.append((g[i - 1] - p[i] * g[i]) / (1.0 - p[i]))
    out.append(g[n - 1])
    return tuple(out)


def reach_probs(schedule: Schedule) -> tuple[float, ...]:
    """R_i: probability step i is reached at all (R_1 = 1)."""
    out = []
    acc = 1.0
    for p in schedule.probs:
        acc *= p
        out.append(acc)
    return tuple(out)


def acceptance_step(
    game: OneWayGame, schedule: Schedule, type_a: str, type_b: str
) -> int | None:
    """First step (1-indexed) whose threshold covers A's sacrifice, else None."""
    from .single_offer import delta_b as _delta_b

    db = _delta_b(game, schedule.action_a, type_b)
    ita = game.type_a_index(type_a)
    da = float(
        np.max(game.payoff_a[ita]) - game.payoff_a[ita, game.action_a_index(schedule.action_a)]
    )
    s = s_values(schedule)
    for i in range(1, schedule.n + 1):
        if da <= s[i] * db:
            return i
    return None


def expected_utility_B(game: OneWayGame, schedule: Schedule, type_b: str) -> float:
    """B's planning-view expected utility of committing to the schedule.

    Each type of A contributes the fallback value plus, if she accepts at
    step i, the retained share of the gain weighted by the probability the
    process survives to step i. Types that never accept contribute the
    fallback value alone.
    """
    from .single_offer import delta_b as _delta_b

    out = outside_option(game, schedule.action_a, type_b)
    db = _delta_b(game, schedule.action_a, type_b)
    da = delta_a(game, schedule.action_a)
    s = s_values(schedule)
    reach = reach_probs(schedule)
    total = 0.0
    for i in range(len(game.types_a)):
        f = float(game.prior_a[i])
        contrib = out.payoff
        for step in range(1, schedule.n + 1):
            if float(da[i]) <= s[step] * db:
                contrib += reach[step - 1] * (1.0 - schedule.gammas[step - 1]) * db
                break
        total += f * contrib
    return total


@dataclass(frozen=True)
class MultiOfferEvaluation:
    """Realized-payoff expectations of a schedule (not B's planning view)."""

    schedule: Schedule
    type_b: str
    expected_u_a: float
    expected_u_b: float
    expected_sw: float
    acceptance_prob: float
    step_of_type: dict[str, int | None]


def expected_outcome(game: OneWayGame, schedule: Schedule, type_b: str) -> MultiOfferEvaluation:
    """Exact expected realized payoffs under the schedule.

    Differs from expected_utility_B on the rejection branch: here B's payoff
    is what she actually earns replying to A's selfish play, not the fallback
    value she planned around. Both are reported so simulations can be checked
    against the estimand they actually sample.
    """
    from .single_offer import delta_b as _delta_b

    out = outside_option(game, schedule.action_a, type_b)
    db = _delta_b(game, schedule.action_a, type_b)
    da = delta_a(game, schedule.action_a)
    s = s_values(schedule)
    reach = reach_probs(schedule)
    br = best_response_B(game, schedule.action_a, type_b)
    ub_accept = float(game.u_b((schedule.action_a, br), type_b))
    ia = game.action_a_index(schedule.action_a)
    nash_idx = np.argmax(game.payoff_a, axis=1)
    e_ua = e_ub = e_sw = 0.0
    p_accept = 0.0
    steps: dict[str, int | None] = {}
    for i, ta in enumerate(game.types_a):
        f = float(game.prior_a[i])
        step = None
        for k in range(1, schedule.n + 1):
            if float(da[i]) <= s[k] * db:
                step = k
                break
        steps[ta] = step
        ua_nash = float(np.max(game.payoff_a[i]))
        ub_reject = float(game.u_b((game.actions_a[int(nash_idx[i])], out.action_b), type_b))
        if step is None:
            e_ua += f * ua_nash
            e_ub += f * ub_reject
            e_sw += f * (ua_nash + ub_reject)
            continue
        r = reach[step - 1]
        transfer = schedule.gammas[step - 1] * db
        ua_accept = float(game.payoff_a[i, ia])
        p_accept += f * r
        e_ua += f * (r * (ua_accept + transfer) + (1.0 - r) * ua_nash)
        e_ub += f * (r * (ub_accept - transfer) + (1.0 - r) * ub_reject)
        e_sw += f * (r * (ua_accept + ub_accept) + (1.0 - r) * (ua_nash + ub_reject))
    return MultiOfferEvaluation(
        schedule=schedule,
        type_b=type_b,
        expected_u_a=e_ua,
        expected_u_b=e_ub,
        expected_sw=e_sw,
        acceptance_prob=p_accept,
        step_of_type=steps,
    )


@dataclass(frozen=True)
class MultiOfferOutcome:
    accepted: bool
    step: int | None
    profile: StrategyProfile
    transfer: float
    payoff_a: float
    payoff_b: float
    welfare: float


def run_multi_offer(
    game: OneWayGame,
    schedule: Schedule,
    type_a: str,
    type_b: str,
    seed: int,
    stream_index: int = 0,
) -> MultiOfferOutcome:
    """Play one schedule to completion; only continuation lotteries are random."""
    from .single_offer import delta_b as _delta_b

    rng = streams.stream(seed, stream_index)
    out = outside_option(game, schedule.action_a, type_b)
    db = _delta_b(game, schedule.action_a, type_b)
    ita = game.type_a_index(type_a)
    ia = game.action_a_index(schedule.action_a)
    da = float(np.max(game.payoff_a[ita]) - game.payoff_a[ita, ia])
    s = s_values(schedule)
    for i in range(1, schedule.n + 1):
        if da <= s[i] * db:
            br = best_response_B(game, schedule.action_a, type_b)
            profile = StrategyProfile(schedule.action_a, br)
            transfer = schedule.gammas[i - 1] * db
            pa = float(game.payoff_a[ita, ia]) + transfer
            pb = float(game.u_b(profile, type_b)) - transfer
            return MultiOfferOutcome(True, i, profile, transfer, pa, pb, pa + pb)
        if i < schedule.n and not rng.uniform() < schedule.probs[i]:
            break
    nash_a = game.actions_a[int(np.argmax(game.payoff_a[ita]))]
    profile = StrategyProfile(nash_a, out.action_b)
    pa = float(np.max(game.payoff_a[ita]))
    pb = float(game.u_b(profile, type_b))
    return MultiOfferOutcome(False, None, profile, 0.0, pa, pb, pa + pb)


@dataclass(frozen=True)
class SimulationResult:
    samples: int
    acceptance_rate: float
    mean_u_a: float
    mean_u_b: float
    mean_sw: float
    mean_u_b_planning: float
    ci_u_a: float
    ci_u_b: float
    ci_sw: float
    ci_u_b_planning: float


def simulate_schedule(
    game: OneWayGame, schedule: Schedule, type_b: str, samples: int, seed: int
) -> SimulationResult:
    """Monte Carlo check of a schedule, vectorized in fixed-size batches.

    Reports realized means (matching expected_outcome) and the planning-view
    mean for B, where a failed process is booked at the fallback value
    (matching expected_utility_B). Batches use counter-based streams keyed by
    (seed, batch index), so results are independent of batching and threads.
    """
    from .single_offer import delta_b as _delta_b

    if samples <= 0:
        raise ValueError("samples must be positive")
    out = outside_option(game, schedule.action_a, type_b)
    db = _delta_b(game, schedule.action_a, type_b)
    da = delta_a(game, schedule.action_a)
    s = s_values(schedule)
    reach = reach_probs(schedule)
    br = best_response_B(game, schedule.action_a, type_b)
    ub_accept = float(game.u_b((schedule.action_a, br), type_b))
    ia = game.action_a_index(schedule.action_a)
    nash_idx = np.argmax(game.payoff_a, axis=1)
    n_types = len(game.types_a)

    # per-type constants
    step_of_type = np.zeros(n_types, dtype=np.int64)  # 0 means never accepts
    reach_of_type = np.zeros(n_types)
    transfer_of_type = np.zeros(n_types)
    for i in range(n_types):
        for k in range(1, schedule.n + 1):
            if float(da[i]) <= s[k] * db:
                step_of_type[i] = k
                reach_of_type[i] = reach[k - 1]
                transfer_of_type[i] = schedule.gammas[k - 1] * db
                break
    ua_nash = np.max(game.payoff_a, axis=1)
    ua_accept = game.payoff_a[:, ia]
    itb = game.type_b_index(type_b)
    ub_reject = game.payoff_b[itb, nash_idx, game.action_b_index(out.action_b)]
    cdf = np.cumsum(game.prior_a)

    sums = np.zeros(4)  # u_a, u_b, sw, u_b planning view
    sq = np.zeros(4)
    accepted_total = 0
    for index, size in enumerate(streams.batch_sizes(samples)):
        rng = streams.stream(seed, index)
        u_type = rng.uniform(size=size)
        u_cont = rng.uniform(size=size)
        types = np.searchsorted(cdf, u_type, side="right")
        np.clip(types, 0, n_types - 1, out=types)
        accept = (step_of_type[types] > 0) & (u_cont < reach_of_type[types])
        t = transfer_of_type[types]
        pa = np.where(accept, ua_accept[types] + t, ua_nash[types])
        pb = np.where(accept, ub_accept - t, ub_reject[types])
        pb_plan = np.where(accept, ub_accept - t, out.payoff)
        sw = pa + pb
        accepted_total += int(np.count_nonzero(accept))
        for j, arr in enumerate((pa, pb, sw, pb_plan)):
            sums[j] += float(np.sum(arr))
            sq[j] += float(np.sum(arr * arr))
    means = sums / samples
    var = np.maximum(sq / samples - means**2, 0.0)
    ci = Z99 * np.sqrt(var / samples)
    return SimulationResult(
        samples=samples,
        acceptance_rate=accepted_total / samples,
        mean_u_a=float(means[0]),
        mean_u_b=float(means[1]),
        mean_sw=float(means[2]),
        mean_u_b_planning=float(means[3]),
        ci_u_a=float(ci[0]),
        ci_u_b=float(ci[1]),
        ci_sw=float(ci[2]),
        ci_u_b_planning=float(ci[3]),
    )


@dataclass(frozen=True)
class ScheduleOptimum:
    schedule: Schedule
    value: float
    single_offer: Offer
    single_offer_value: float
    null_offer: bool
    certified: bool
    certification_slack: float
    outcome: MultiOfferEvaluation


def _padded_gammas(x: float, n: int) -> tuple[float, ...]:
    """Strictly increasing gammas in [0, 1] starting at x."""
    pad = (1.0 - x) / n
    out = [x]
    for j in range(1, n):
        nxt = x + j * pad
        if nxt <= out[-1]:
            nxt = np.nextafter(out[-1], 1.0)
        out.append(min(nxt, 1.0))
    return tuple(out)


def optimize_schedule(game: OneWayGame, type_b: str, n: int) -> ScheduleOptimum:
    """Best n-step schedule for B, with a local certification sweep.

    Any schedule's value is the fallback plus a convex combination over steps
    of single-offer gains, so the optimum front-loads everything: step one
    carries the best single-offer share and the continuation probabilities
    are zero. The remaining gammas are increasing padding that never plays.
    The certificate re-evaluates neighboring schedules (each gamma moved to
    the adjacent break-even thresholds, each continuation probability nudged
    by 0.01) and records the best improvement found, which should be none.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    res = optimal_offer(game, type_b)
    x = res.offer.gamma
    action = res.offer.action_a
    probs = (1.0,) + (0.0,) * (n - 1)
    schedule = Schedule(action, _padded_gammas(x, n), probs)
    value = expected_utility_B(game, schedule, type_b)

    # certification sweep
    thresholds = gamma_candidates(game, action, type_b)
    slack = -math.inf
    candidates: list[Schedule] = []
    for i in range(n):
        g = schedule.gammas[i]
        below = [t for t in thresholds if t < g]
        above = [t for t in thresholds if t > g]
        for t in ([max(below)] if below else []) + ([min(above)] if above else []):
            new_g = list(schedule.gammas)
            new_g[i] = t
            if all(new_g[k] < new_g[k + 1] for k in range(n - 1)):
                candidates.append(Schedule(action, tuple(new_g), probs))
    for j in range(1, n):
        for dp in (-0.01, 0.01):
            new_p = list(probs)
            new_p[j] = min(max(new_p[j] + dp, 0.0), 0.99)
            if new_p[j] != probs[j]:
                candidates.append(Schedule(action, schedule.gammas, tuple(new_p)))
    for cand in candidates:
        slack = max(slack, expected_utility_B(game, cand, type_b) - value)
    if not candidates:
        slack = 0.0
    return ScheduleOptimum(
        schedule=schedule,
        value=value,
        single_offer=res.offer,
        single_offer_value=res.evaluation.expected_u_b,
        null_offer=res.null_offer,
        certified=slack <= 1e-9,
        certification_slack=slack,
        outcome=expected_outcome(game, schedule, type_b),
    )


def equivalence_gap(game: OneWayGame, type_b: str, n: int) -> float:
    """|value of the best n-step schedule - value of the best single offer|."""
    opt = optimize_schedule(game, type_b, n)
    return abs(opt.value - opt.single_offer_value)
