import pytest

import oneway as ow


@pytest.fixture
def g1():
    """Two A actions, one B action, two equally likely A types.

    Type t1 prefers a1 (2 vs 1), type t2 prefers a2 (1 vs 0). B only cares
    about A's action: 4 if a1 is played, 0 if a2. Everything about this game
    is small enough to work out by hand, which the fixed expectations in the
    tests do.
    """
    return ow.make_game(
        actions_a=["a1", "a2"],
        actions_b=["b1"],
        types_a=[("t1", 0.5), ("t2", 0.5)],
        types_b=[("u1", 1.0)],
        payoff_a=[[2.0, 1.0], [0.0, 1.0]],
        payoff_b=[[[4.0], [0.0]]],
    )


@pytest.fixture
def g2():
    """Same as g1 plus a second B action that pays 5 against a1."""
    return ow.make_game(
        actions_a=["a1", "a2"],
        actions_b=["b1", "b2"],
        types_a=[("t1", 0.5), ("t2", 0.5)],
        types_b=[("u1", 1.0)],
        payoff_a=[[2.0, 1.0], [0.0, 1.0]],
        payoff_b=[[[4.0, 5.0], [0.0, 0.0]]],
    )
