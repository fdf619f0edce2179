"""Bilateral trade on discrete value grids, and its one-way embedding.

A seller holds a good worth v1 to her; a buyer values it at v2. Both values
are private, drawn from independent discrete priors. Efficiency demands trade
exactly when the buyer's value is higher. The functions here ask whether any
direct mechanism can be simultaneously efficient, budget-balanced, Bayes-Nash
incentive compatible and interim individually rational on a given grid, by
solving a linear program over interim transfers. Infeasibility comes with a
Farkas certificate that is re-verified arithmetically, and a companion LP
reports the smallest pointwise subsidy that restores feasibility.

The same trade problem embeds into a one-way game (the seller's payoff does
not depend on the buyer's single dummy action), and the property checks can
be run on either representation; they agree verdict for verdict.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linprog

from . import streams
from .game import OneWayGame, StrategyProfile, make_game, optimal_welfare, social_welfare

PROB_TOL = 1e-12
MARGIN_TOL = 1e-7
CERT_TOL = 1e-7
MARGIN_CAP = 1e9


def _canonical_side(values: Sequence[float], probs: Sequence[float], side: str):
    vals = [float(v) for v in values]
    ps = [float(p) for p in probs]
    if len(vals) != len(ps) or not vals:
        raise ValueError(f"{side}: values and probs must be equal-length and non-empty")
    for v in vals:
        if not math.isfinite(v) or v < 0.0:
            raise ValueError(f"{side}: values must be finite and non-negative, got {v!r}")
    for p in ps:
        if not math.isfinite(p) or p < 0.0:
            raise ValueError(f"{side}: probabilities must be finite and non-negative, got {p!r}")
    if abs(sum(ps) - 1.0) > PROB_TOL:
        raise ValueError(f"{side}: probabilities sum to {sum(ps)!r}, expected 1")
    order = sorted(range(len(vals)), key=lambda i: vals[i])
    return tuple(vals[i] for i in order), tuple(ps[i] for i in order)


@dataclass(frozen=True)
class BilateralTradeInstance:
    """Discrete seller/buyer value grids. Stored sorted by value, so two
    inputs differing only in type labels produce identical instances."""

    seller_values: tuple[float, ...]
    seller_probs: tuple[float, ...]
    buyer_values: tuple[float, ...]
    buyer_probs: tuple[float, ...]

    def __init__(self, seller_values, seller_probs, buyer_values, buyer_probs):
        sv, sp = _canonical_side(seller_values, seller_probs, "seller")
        bv, bp = _canonical_side(buyer_values, buyer_probs, "buyer")
        object.__setattr__(self, "seller_values", sv)
        object.__setattr__(self, "seller_probs", sp)
        object.__setattr__(self, "buyer_values", bv)
        object.__setattr__(self, "buyer_probs", bp)


def uniform_grid_instance(k: int, low: float = 0.0, high: float = 1.0) -> BilateralTradeInstance:
    """Both values uniform on [low, high], discretized to k quantile midpoints."""
    if k < 1:
        raise ValueError("k must be at least 1")
    vals = tuple(low + (high - low) * (i + 0.5) / k for i in range(k))
    probs = (1.0 / k,) * k
    return BilateralTradeInstance(vals, probs, vals, probs)


def efficient_allocation(instance: BilateralTradeInstance) -> np.ndarray:
    """Trade indicator sigma[i, j]: 1 exactly when the buyer values it more."""
    sv = np.asarray(instance.seller_values)
    bv = np.asarray(instance.buyer_values)
    return (sv[:, None] < bv[None, :]).astype(np.float64)


@dataclass(frozen=True)
class DirectMechanism:
    """Allocation plus transfers paid TO each agent, indexed [seller, buyer]."""

    allocation: np.ndarray
    t_seller: np.ndarray
    t_buyer: np.ndarray


def to_one_way(instance: BilateralTradeInstance) -> OneWayGame:
    """Embed trade as a one-way game: the seller keeps or hands over the good.

    The buyer has a single dummy reply, making the seller's payoff trivially
    independent of it. Keeping pays the seller her value; handing over pays
    the buyer his.
    """
    ns = len(instance.seller_values)
    nb = len(instance.buyer_values)
    payoff_a = [[v, 0.0] for v in instance.seller_values]
    payoff_b = [[[0.0], [v]] for v in instance.buyer_values]
    return make_game(
        actions_a=["keep", "transfer"],
        actions_b=["none"],
        types_a=[(f"s{i + 1}", instance.seller_probs[i]) for i in range(ns)],
        types_b=[(f"b{j + 1}", instance.buyer_probs[j]) for j in range(nb)],
        payoff_a=payoff_a,
        payoff_b=payoff_b,
    )


@dataclass(frozen=True)
class OneWayMechanism:
    """A direct mechanism stated on the one-way representation."""

    profile: dict[tuple[str, str], StrategyProfile]
    payment_a: dict[tuple[str, str], float]
    payment_b: dict[tuple[str, str], float]


def mechanism_to_one_way(
    instance: BilateralTradeInstance, mech: DirectMechanism
) -> tuple[OneWayGame, OneWayMechanism]:
    game = to_one_way(instance)
    profile: dict[tuple[str, str], StrategyProfile] = {}
    pay_a: dict[tuple[str, str], float] = {}
    pay_b: dict[tuple[str, str], float] = {}
    for i, ta in enumerate(game.types_a):
        for j, tb in enumerate(game.types_b):
            traded = mech.allocation[i, j] > 0.5
            profile[(ta, tb)] = StrategyProfile("transfer" if traded else "keep", "none")
            pay_a[(ta, tb)] = float(mech.t_seller[i, j])
            pay_b[(ta, tb)] = float(mech.t_buyer[i, j])
    return game, OneWayMechanism(profile, pay_a, pay_b)


@dataclass(frozen=True)
class PropertyReport:
    efficient: bool
    budget_balanced: bool
    incentive_compatible: bool
    individually_rational: bool
    witnesses: tuple[str, ...]

    @property
    def all_hold(self) -> bool:
        return (
            self.efficient
            and self.budget_balanced
            and self.incentive_compatible
            and self.individually_rational
        )


def check_properties(
    instance: BilateralTradeInstance, mech: DirectMechanism, tol: float = 1e-9
) -> PropertyReport:
    """Audit a trade mechanism: efficiency, budget balance, Bayes-Nash
    incentive compatibility and interim individual rationality.

    Near-ties in values (within tol) leave the allocation free. Witness
    strings pinpoint the first few violations of each property.
    """
    sv = np.asarray(instance.seller_values)
    bv = np.asarray(instance.buyer_values)
    f1 = np.asarray(instance.seller_probs)
    f2 = np.asarray(instance.buyer_probs)
    sigma = np.asarray(mech.allocation, dtype=np.float64)
    ts = np.asarray(mech.t_seller, dtype=np.float64)
    tb = np.asarray(mech.t_buyer, dtype=np.float64)
    witnesses: list[str] = []

    efficient = True
    for i in range(len(sv)):
        for j in range(len(bv)):
            if sv[i] < bv[j] - tol and sigma[i, j] < 0.5:
                efficient = False
                witnesses.append(f"no trade at seller {sv[i]!r} < buyer {bv[j]!r}")
            elif sv[i] > bv[j] + tol and sigma[i, j] > 0.5:
                efficient = False
                witnesses.append(f"trade at seller {sv[i]!r} > buyer {bv[j]!r}")

    worst_bb = float(np.max(np.abs(ts + tb)))
    budget_balanced = worst_bb <= tol
    if not budget_balanced:
        witnesses.append(f"transfers sum to {worst_bb!r} somewhere, expected 0")

    # interim quantities. Seller keeps with prob K, is paid X_s; buyer gets
    # the good with prob G, is paid X_b (usually negative).
    keep = 1.0 - sigma
    K = keep @ f2
    X_s = ts @ f2
    G = f1 @ sigma
    X_b = f1 @ tb

    ic = True
    for i in range(len(sv)):
        truthful = sv[i] * K[i] + X_s[i]
        for k in range(len(sv)):
            gain = (sv[i] * K[k] + X_s[k]) - truthful
            if gain > tol:
                ic = False
                witnesses.append(f"seller {sv[i]!r} gains {gain!r} reporting {sv[k]!r}")
    for j in range(len(bv)):
        truthful = bv[j] * G[j] + X_b[j]
        for k in range(len(bv)):
            gain = (bv[j] * G[k] + X_b[k]) - truthful
            if gain > tol:
                ic = False
                witnesses.append(f"buyer {bv[j]!r} gains {gain!r} reporting {bv[k]!r}")

    ir = True
    for i in range(len(sv)):
        slack = (sv[i] * K[i] + X_s[i]) - sv[i]
        if slack < -tol:
            ir = False
            witnesses.append(f"seller {sv[i]!r} is {-slack!r} below her walk-away value")
    for j in range(len(bv)):
        slack = bv[j] * G[j] + X_b[j]
        if slack < -tol:
            ir = False
            witnesses.append(f"buyer {bv[j]!r} is {-slack!r} below zero")

    return PropertyReport(efficient, budget_balanced, ic, ir, tuple(witnesses))


def check_one_way_properties(
    game: OneWayGame, mech: OneWayMechanism, tol: float = 1e-9
) -> PropertyReport:
    """The same audit stated on a one-way game.

    Reservation utilities come from no-mechanism play: A falls back to her
    selfish optimum, B to her expected payoff against A's equilibrium map.
    """
    from .equilibrium import nash_action_A, nash_action_B

    witnesses: list[str] = []
    efficient = True
    worst_bb = 0.0
    for ta in game.types_a:
        for tb in game.types_b:
            prof = mech.profile[(ta, tb)]
            w = social_welfare(game, prof, (ta, tb))
            _, opt = optimal_welfare(game, (ta, tb))
            if w < opt - tol:
                efficient = False
                witnesses.append(f"profile at ({ta}, {tb}) yields {w!r} < optimum {opt!r}")
            bb = abs(mech.payment_a[(ta, tb)] + mech.payment_b[(ta, tb)])
            worst_bb = max(worst_bb, bb)
    budget_balanced = worst_bb <= tol
    if not budget_balanced:
        witnesses.append(f"payments sum to {worst_bb!r} somewhere, expected 0")

    ic = True
    for ta in game.types_a:
        def util_a(report: str, true: str = ta) -> float:
            total = 0.0
            for jtb, tb in enumerate(game.types_b):
                prof = mech.profile[(report, tb)]
                total += float(game.prior_b[jtb]) * (
                    game.u_a(prof.action_a, true) + mech.payment_a[(report, tb)]
                )
            return total

        truthful = util_a(ta)
        for other in game.types_a:
            gain = util_a(other) - truthful
            if gain > tol:
                ic = False
                witnesses.append(f"A type {ta} gains {gain!r} reporting {other}")
    for tb in game.types_b:
        def util_b(report: str, true: str = tb) -> float:
            total = 0.0
            for ita, ta in enumerate(game.types_a):
                prof = mech.profile[(ta, report)]
                total += float(game.prior_a[ita]) * (
                    game.u_b(prof, true) + mech.payment_b[(ta, report)]
                )
            return total

        truthful = util_b(tb)
        for other in game.types_b:
            gain = util_b(other) - truthful
            if gain > tol:
                ic = False
                witnesses.append(f"B type {tb} gains {gain!r} reporting {other}")

    ir = True
    nash_a = {ta: nash_action_A(game, ta) for ta in game.types_a}
    for ita, ta in enumerate(game.types_a):
        truthful = 0.0
        for jtb, tb in enumerate(game.types_b):
            prof = mech.profile[(ta, tb)]
            truthful += float(game.prior_b[jtb]) * (
                game.u_a(prof.action_a, ta) + mech.payment_a[(ta, tb)]
            )
        reservation = game.u_a(nash_a[ta], ta)
        if truthful < reservation - tol:
            ir = False
            witnesses.append(f"A type {ta} gets {truthful!r} < walk-away {reservation!r}")
    for jtb, tb in enumerate(game.types_b):
        truthful = 0.0
        reservation = 0.0
        sb = nash_action_B(game, tb)
        for ita, ta in enumerate(game.types_a):
            prof = mech.profile[(ta, tb)]
            fa = float(game.prior_a[ita])
            truthful += fa * (game.u_b(prof, tb) + mech.payment_b[(ta, tb)])
            reservation += fa * game.u_b((nash_a[ta], sb), tb)
        if truthful < reservation - tol:
            ir = False
            witnesses.append(f"B type {tb} gets {truthful!r} < walk-away {reservation!r}")

    return PropertyReport(efficient, budget_balanced, ic, ir, tuple(witnesses))


def _constraint_system(
    instance: BilateralTradeInstance, include_ir: bool = True
) -> tuple[np.ndarray, np.ndarray]:
    """Rows (A, b) of A x <= b over x = seller transfers, with budget balance
    substituted (the buyer pays exactly what the seller receives)."""
    sv = np.asarray(instance.seller_values)
    bv = np.asarray(instance.buyer_values)
    f1 = np.asarray(instance.seller_probs)
    f2 = np.asarray(instance.buyer_probs)
    ns, nb = len(sv), len(bv)
    sigma = efficient_allocation(instance)
    K = (1.0 - sigma) @ f2
    G = f1 @ sigma
    nvar = ns * nb

    def var(i: int, j: int) -> int:
        return i * nb + j

    rows: list[np.ndarray] = []
    rhs: list[float] = []
    for i in range(ns):
        for k in range(ns):
            if i == k:
                continue
            row = np.zeros(nvar)
            for j in range(nb):
                row[var(k, j)] += f2[j]
                row[var(i, j)] -= f2[j]
            rows.append(row)
            rhs.append(float(sv[i] * (K[i] - K[k])))
    for j in range(nb):
        for k in range(nb):
            if j == k:
                continue
            row = np.zeros(nvar)
            for i in range(ns):
                row[var(i, j)] += f1[i]
                row[var(i, k)] -= f1[i]
            rows.append(row)
            rhs.append(float(bv[j] * (G[j] - G[k])))
    if include_ir:
        for i in range(ns):
            row = np.zeros(nvar)
            for j in range(nb):
                row[var(i, j)] -= f2[j]
            rows.append(row)
            rhs.append(float(sv[i] * (K[i] - 1.0)))
        for j in range(nb):
            row = np.zeros(nvar)
            for i in range(ns):
                row[var(i, j)] += f1[i]
            rows.append(row)
            rhs.append(float(bv[j] * G[j]))
    if not rows:
        return np.zeros((0, nvar)), np.zeros(0)
    return np.asarray(rows), np.asarray(rhs)


@dataclass(frozen=True)
class FeasibilityResult:
    verdict: str  # "feasible" | "marginal" | "infeasible"
    margin: float
    constraints: int
    mechanism: DirectMechanism | None
    certificate: np.ndarray | None
    certificate_residual: float | None
    certificate_value: float | None


def feasibility_lp(instance: BilateralTradeInstance, include_ir: bool = True) -> FeasibilityResult:
    """Decide whether an efficient, balanced, IC and IR mechanism exists.

    Maximizes the common slack margin of all constraints. A margin above
    1e-7 is feasible and the maximizing transfers are returned as a concrete
    mechanism; below -1e-7 is infeasible and a Farkas certificate (y >= 0,
    A'y = 0, b'y < 0) is computed and re-verified with plain arithmetic;
    in between the verdict is "marginal" and deliberately unsigned.
    """
    A, b = _constraint_system(instance, include_ir=include_ir)
    nrows, nvar = A.shape
    A_margin = np.hstack([A, np.ones((nrows, 1))])
    c = np.zeros(nvar + 1)
    c[-1] = -1.0
    bounds = [(None, None)] * nvar + [(None, MARGIN_CAP)]
    res = linprog(c, A_ub=A_margin, b_ub=b, bounds=bounds, method="highs")
    if res.status != 0:
        raise RuntimeError(f"margin LP failed: {res.message}")
    margin = float(res.x[-1])
    sigma = efficient_allocation(instance)
    if margin > MARGIN_TOL:
        x = res.x[:nvar].reshape(len(instance.seller_values), len(instance.buyer_values))
        mech = DirectMechanism(allocation=sigma, t_seller=x, t_buyer=-x)
        return FeasibilityResult("feasible", margin, nrows, mech, None, None, None)
    if margin >= -MARGIN_TOL:
        x = res.x[:nvar].reshape(len(instance.seller_values), len(instance.buyer_values))
        mech = DirectMechanism(allocation=sigma, t_seller=x, t_buyer=-x)
        return FeasibilityResult("marginal", margin, nrows, mech, None, None, None)
    far = linprog(b, A_eq=A.T, b_eq=np.zeros(nvar), bounds=[(0.0, 1.0)] * nrows, method="highs")
    if far.status != 0:
        raise RuntimeError(f"certificate LP failed: {far.message}")
    y = np.asarray(far.x)
    scale = float(np.max(np.abs(y)))
    if scale > 0.0:
        y = y / scale
    residual = float(np.max(np.abs(A.T @ y)))
    value = float(b @ y)
    return FeasibilityResult("infeasible", margin, nrows, None, y, residual, value)


def certificate_is_valid(result: FeasibilityResult, tol: float = CERT_TOL) -> bool:
    """Arithmetic re-check of a Farkas certificate, independent of the solver."""
    if result.certificate is None:
        return False
    y = result.certificate
    return bool(
        np.all(y >= 0.0)
        and result.certificate_residual is not None
        and result.certificate_residual <= tol
        and result.certificate_value is not None
        and result.certificate_value < 0.0
    )


@dataclass(frozen=True)
class SubsidyResult:
    subsidy: float
    raw_min_deficit: float
    mechanism: DirectMechanism


def min_subsidy(instance: BilateralTradeInstance) -> SubsidyResult:
    """Smallest pointwise budget deficit making an efficient IC + IR mechanism
    possible. Budget balance is relaxed to t_seller + t_buyer <= d everywhere;
    a feasible instance yields d <= 0 and the reported subsidy clamps at 0.
    """
    sv = np.asarray(instance.seller_values)
    bv = np.asarray(instance.buyer_values)
    f1 = np.asarray(instance.seller_probs)
    f2 = np.asarray(instance.buyer_probs)
    ns, nb = len(sv), len(bv)
    sigma = efficient_allocation(instance)
    K = (1.0 - sigma) @ f2
    G = f1 @ sigma
    nv = ns * nb

    def vs(i: int, j: int) -> int:
        return i * nb + j

    def vb(i: int, j: int) -> int:
        return nv + i * nb + j

    d_col = 2 * nv
    rows: list[np.ndarray] = []
    rhs: list[float] = []
    for i in range(ns):
        for k in range(ns):
            if i == k:
                continue
            row = np.zeros(2 * nv + 1)
            for j in range(nb):
                row[vs(k, j)] += f2[j]
                row[vs(i, j)] -= f2[j]
            rows.append(row)
            rhs.append(float(sv[i] * (K[i] - K[k])))
    for j in range(nb):
        for k in range(nb):
            if j == k:
                continue
            row = np.zeros(2 * nv + 1)
            for i in range(ns):
                row[vb(i, k)] += f1[i]
                row[vb(i, j)] -= f1[i]
            rows.append(row)
            rhs.append(float(bv[j] * (G[j] - G[k])))
    for i in range(ns):
        row = np.zeros(2 * nv + 1)
        for j in range(nb):
            row[vs(i, j)] -= f2[j]
        rows.append(row)
        rhs.append(float(sv[i] * (K[i] - 1.0)))
    for j in range(nb):
        row = np.zeros(2 * nv + 1)
        for i in range(ns):
            row[vb(i, j)] -= f1[i]
        rows.append(row)
        rhs.append(float(bv[j] * G[j]))
    for i in range(ns):
        for j in range(nb):
            row = np.zeros(2 * nv + 1)
            row[vs(i, j)] = 1.0
            row[vb(i, j)] = 1.0
            row[d_col] = -1.0
            rows.append(row)
            rhs.append(0.0)
    c = np.zeros(2 * nv + 1)
    c[d_col] = 1.0
    res = linprog(
        c,
        A_ub=np.asarray(rows),
        b_ub=np.asarray(rhs),
        bounds=[(None, None)] * (2 * nv + 1),
        method="highs",
    )
    if res.status != 0:
        raise RuntimeError(f"subsidy LP failed: {res.message}")
    d_star = float(res.x[d_col])
    t_s = res.x[:nv].reshape(ns, nb)
    t_b = res.x[nv : 2 * nv].reshape(ns, nb)
    mech = DirectMechanism(allocation=sigma, t_seller=t_s, t_buyer=t_b)
    return SubsidyResult(subsidy=max(0.0, d_star), raw_min_deficit=d_star, mechanism=mech)


@dataclass(frozen=True)
class RefinementRow:
    k: int
    verdict: str
    margin: float
    subsidy: float
    certificate_ok: bool | None
    certificate_residual: float | None


def refinement_sweep(
    ks: Iterable[int], low: float = 0.0, high: float = 1.0, workers: int | None = None
) -> list[RefinementRow]:
    """Feasibility and minimum subsidy across grid refinements of the same
    continuous trade problem (both values uniform on [low, high]).

    Rows come back ordered by k regardless of worker scheduling. The trend
    is for the caller to inspect; nothing about monotonicity is assumed here.
    """
    ks = list(ks)

    def solve(k: int) -> RefinementRow:
        inst = uniform_grid_instance(k, low, high)
        feas = feasibility_lp(inst)
        sub = min_subsidy(inst)
        cert_ok = certificate_is_valid(feas) if feas.verdict == "infeasible" else None
        return RefinementRow(
            k=k,
            verdict=feas.verdict,
            margin=feas.margin,
            subsidy=sub.subsidy,
            certificate_ok=cert_ok,
            certificate_residual=feas.certificate_residual,
        )

    count = workers if workers is not None else streams.worker_count()
    if count <= 1 or len(ks) <= 1:
        return [solve(k) for k in ks]
    with ThreadPoolExecutor(max_workers=count) as pool:
        return list(pool.map(solve, ks))
