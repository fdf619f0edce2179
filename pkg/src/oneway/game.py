"""Core types and primitives for two-player one-way games.

A one-way game has two players, A and B, each with a finite action set and a
finite private type set. Types are independent draws from commonly known
priors. Player A's payoff depends only on her own action and type; player B's
payoff depends on the full action profile and on B's type. All payoffs are
non-negative amounts of money (quasi-linear utilities).

All public functions take and return string identifiers. Index arithmetic is
an internal detail, and ties are always broken toward the lowest index, which
makes every operation in the package deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

# Priors must sum to one within this absolute tolerance.
PRIOR_TOL = 1e-12


class StrategyProfile(NamedTuple):
    action_a: str
    action_b: str


class TypeProfile(NamedTuple):
    type_a: str
    type_b: str


@dataclass(frozen=True, eq=False)
class OneWayGame:
    """Immutable one-way game on dense payoff tables.

    ``payoff_a`` has shape ``(len(types_a), len(actions_a))``: A's payoff never
    depends on B's action. ``payoff_b`` has shape
    ``(len(types_b), len(actions_a), len(actions_b))``.
    """

    actions_a: tuple[str, ...]
    actions_b: tuple[str, ...]
    types_a: tuple[str, ...]
    types_b: tuple[str, ...]
    prior_a: np.ndarray
    prior_b: np.ndarray
    payoff_a: np.ndarray
    payoff_b: np.ndarray

    def __post_init__(self) -> None:
        for name in ("actions_a", "actions_b", "types_a", "types_b"):
            object.__setattr__(self, name, tuple(str(x) for x in getattr(self, name)))
        for name in ("prior_a", "prior_b", "payoff_a", "payoff_b"):
            arr = np.array(getattr(self, name), dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    # -- identifier lookups ------------------------------------------------

    @cached_property
    def _ia(self) -> dict[str, int]:
        return {a: i for i, a in enumerate(self.actions_a)}

    @cached_property
    def _ib(self) -> dict[str, int]:
        return {b: i for i, b in enumerate(self.actions_b)}

    @cached_property
    def _ita(self) -> dict[str, int]:
        return {t: i for i, t in enumerate(self.types_a)}

    @cached_property
    def _itb(self) -> dict[str, int]:
        return {t: i for i, t in enumerate(self.types_b)}

    def action_a_index(self, action: str) -> int:
        try:
            return self._ia[action]
        except KeyError:
            raise KeyError(f"unknown A action {action!r}") from None

    def action_b_index(self, action: str) -> int:
        try:
            return self._ib[action]
        except KeyError:
            raise KeyError(f"unknown B action {action!r}") from None

    def type_a_index(self, t: str) -> int:
        try:
            return self._ita[t]
        except KeyError:
            raise KeyError(f"unknown A type {t!r}") from None

    def type_b_index(self, t: str) -> int:
        try:
            return self._itb[t]
        except KeyError:
            raise KeyError(f"unknown B type {t!r}") from None

    # -- payoff lookups ----------------------------------------------------

    def u_a(self, action_a: str, type_a: str) -> float:
        return float(self.payoff_a[self.type_a_index(type_a), self.action_a_index(action_a)])

    def u_b(self, profile: StrategyProfile | tuple[str, str], type_b: str) -> float:
        sa, sb = profile
        return float(
            self.payoff_b[
                self.type_b_index(type_b),
                self.action_a_index(sa),
                self.action_b_index(sb),
            ]
        )


def make_game(
    actions_a: Sequence[str],
    actions_b: Sequence[str],
    types_a: Iterable[tuple[str, float]],
    types_b: Iterable[tuple[str, float]],
    payoff_a: Sequence[Sequence[float]],
    payoff_b: Sequence[Sequence[Sequence[float]]],
) -> OneWayGame:
    """Build a game from ``(type id, prior)`` pairs and nested payoff lists.

    ``payoff_a[i][j]`` is A's payoff for type i playing action j;
    ``payoff_b[k][j][m]`` is B's payoff for B type k at profile (j, m).
    Raises ValueError if the resulting game fails :func:`validate`.
    """
    ta = list(types_a)
    tb = list(types_b)
    game = OneWayGame(
        actions_a=tuple(actions_a),
        actions_b=tuple(actions_b),
        types_a=tuple(t for t, _ in ta),
        types_b=tuple(t for t, _ in tb),
        prior_a=np.array([p for _, p in ta], dtype=np.float64),
        prior_b=np.array([p for _, p in tb], dtype=np.float64),
        payoff_a=np.array(payoff_a, dtype=np.float64),
        payoff_b=np.array(payoff_b, dtype=np.float64),
    )
    errors = validate(game)
    if errors:
        raise ValueError("; ".join(errors))
    return game


def validate(game: OneWayGame) -> list[str]:
    """Return a list of human-readable problems; empty means the game is valid."""
    errors: list[str] = []
    for label, ids in (
        ("actions_a", game.actions_a),
        ("actions_b", game.actions_b),
        ("types_a", game.types_a),
        ("types_b", game.types_b),
    ):
        if len(ids) == 0:
            errors.append(f"{label} is empty")
        if len(set(ids)) != len(ids):
            errors.append(f"{label} contains duplicate identifiers")

    for label, prior, n in (
        ("prior_a", game.prior_a, len(game.types_a)),
        ("prior_b", game.prior_b, len(game.types_b)),
    ):
        if prior.shape != (n,):
            errors.append(f"{label} has shape {prior.shape}, expected ({n},)")
            continue
        if np.any(~np.isfinite(prior)) or np.any(prior < 0):
            errors.append(f"{label} has negative or non-finite entries")
        elif n > 0 and abs(float(prior.sum()) - 1.0) > PRIOR_TOL:
            errors.append(f"{label} sums to {float(prior.sum())!r}, expected 1 within {PRIOR_TOL}")

    shape_a = (len(game.types_a), len(game.actions_a))
    if game.payoff_a.shape != shape_a:
        errors.append(f"payoff_a has shape {game.payoff_a.shape}, expected {shape_a}")
    shape_b = (len(game.types_b), len(game.actions_a), len(game.actions_b))
    if game.payoff_b.shape != shape_b:
        errors.append(f"payoff_b has shape {game.payoff_b.shape}, expected {shape_b}")

    for label, table in (("payoff_a", game.payoff_a), ("payoff_b", game.payoff_b)):
        if table.size and np.any(~np.isfinite(table)):
            errors.append(f"{label} has non-finite entries")
        elif table.size and np.any(table < 0):
            errors.append(f"{label} has negative entries; payoffs are non-negative money")
    return errors


def best_response_B(game: OneWayGame, action_a: str, type_b: str) -> str:
    """B's payoff-maximizing reply to ``action_a``, lowest index on ties."""
    row = game.payoff_b[game.type_b_index(type_b), game.action_a_index(action_a), :]
    return game.actions_b[int(np.argmax(row))]


def social_welfare(
    game: OneWayGame, profile: StrategyProfile | tuple[str, str], types: TypeProfile | tuple[str, str]
) -> float:
    """Sum of both players' payoffs at a pure profile; transfers never enter."""
    sa, sb = profile
    ta, tb = types
    return float(game.u_a(sa, ta) + game.u_b((sa, sb), tb))


def optimal_welfare(
    game: OneWayGame, types: TypeProfile | tuple[str, str]
) -> tuple[StrategyProfile, float]:
    """Welfare-maximizing profile for a realized type pair.

    Ties broken toward the lowest (A action, B action) index pair.
    """
    ta, tb = types
    grid = game.payoff_a[game.type_a_index(ta), :, None] + game.payoff_b[game.type_b_index(tb)]
    flat = int(np.argmax(grid))
    ia, ib = divmod(flat, grid.shape[1])
    return StrategyProfile(game.actions_a[ia], game.actions_b[ib]), float(grid[ia, ib])
