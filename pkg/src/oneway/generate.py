"""Seeded random instance generation."""

from __future__ import annotations

import numpy as np

from . import streams
from .game import OneWayGame, make_game


def _game_from_rng(
    rng: np.random.Generator,
    n_actions_a: int,
    n_actions_b: int,
    n_types_a: int,
    n_types_b: int,
    a_scale: float,
    b_scale: float,
) -> OneWayGame:
    for name, n in (
        ("n_actions_a", n_actions_a),
        ("n_actions_b", n_actions_b),
        ("n_types_a", n_types_a),
        ("n_types_b", n_types_b),
    ):
        if n < 1:
            raise ValueError(f"{name} must be at least 1")
    if a_scale <= 0.0 or b_scale <= 0.0:
        raise ValueError("scales must be positive")
    payoff_a = rng.uniform(0.0, a_scale, size=(n_types_a, n_actions_a))
    payoff_b = rng.uniform(0.0, b_scale, size=(n_types_b, n_actions_a, n_actions_b))
    return make_game(
        actions_a=[f"a{i + 1}" for i in range(n_actions_a)],
        actions_b=[f"b{i + 1}" for i in range(n_actions_b)],
        types_a=[(f"t{i + 1}", 1.0 / n_types_a) for i in range(n_types_a)],
        types_b=[(f"u{i + 1}", 1.0 / n_types_b) for i in range(n_types_b)],
        payoff_a=payoff_a,
        payoff_b=payoff_b,
    )


def random_game(
    seed: int,
    n_actions_a: int = 3,
    n_actions_b: int = 2,
    n_types_a: int = 3,
    n_types_b: int = 2,
    a_scale: float = 10.0,
    b_scale: float = 10.0,
    stream_index: int = 0,
) -> OneWayGame:
    """One game with uniform random payoffs and equal-weight priors."""
    rng = streams.stream(seed, stream_index)
    return _game_from_rng(rng, n_actions_a, n_actions_b, n_types_a, n_types_b, a_scale, b_scale)


def random_suite(
    count: int,
    seed: int,
    max_actions_a: int = 6,
    max_actions_b: int = 4,
    max_types_a: int = 6,
    max_types_b: int = 4,
    a_scale: float = 10.0,
    b_scale: float = 10.0,
) -> list[OneWayGame]:
    """A reproducible batch of games with sizes drawn per instance.

    Instance i uses the counter-based stream (seed, i), so the suite is
    stable under reordering and extending the count only appends.
    """
    games = []
    for i in range(count):
        rng = streams.stream(seed, i)
        n_aa = int(rng.integers(2, max_actions_a + 1))
        n_ab = int(rng.integers(1, max_actions_b + 1))
        n_ta = int(rng.integers(1, max_types_a + 1))
        n_tb = int(rng.integers(1, max_types_b + 1))
        games.append(_game_from_rng(rng, n_aa, n_ab, n_ta, n_tb, a_scale, b_scale))
    return games
