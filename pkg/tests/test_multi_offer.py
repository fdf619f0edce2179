import math

import numpy as np
import pytest

import oneway as ow


def sched(gammas, probs, action="a1"):
    return ow.Schedule(action, tuple(gammas), tuple(probs))


def test_schedule_validation():
    sched([0.2, 0.5], [1.0, 0.5])  # fine
    with pytest.raises(ValueError, match="first offer must be certain"):
        sched([0.2, 0.5], [0.9, 0.5])
    with pytest.raises(ValueError, match="strictly increasing"):
        sched([0.5, 0.5], [1.0, 0.5])
    with pytest.raises(ValueError, match="outside \\[0, 1\\]"):
        sched([0.2, 1.5], [1.0, 0.5])
    with pytest.raises(ValueError, match="meaningless"):
        sched([0.2, 0.5], [1.0, 1.0])
    with pytest.raises(ValueError, match="expected 2"):
        sched([0.2, 0.5], [1.0])
    with pytest.raises(ValueError, match="at least one step"):
        sched([], [])


def test_s_values():
    s = ow.s_values(sched([0.3, 0.5], [1.0, 0.5]))
    assert s[0] == 0.0
    assert s[1] == pytest.approx(0.1, abs=1e-12)
    assert s[2] == 0.5
    # an attractive second offer pushes the first threshold negative
    s2 = ow.s_values(sched([0.2, 0.5], [1.0, 0.5]))
    assert s2[1] < 0.0
    # one step: thresholds collapse to (0, gamma)
    assert ow.s_values(sched([0.4], [1.0])) == (0.0, 0.4)


def test_reach_probs():
    assert ow.reach_probs(sched([0.3, 0.5], [1.0, 0.5])) == (1.0, 0.5)
    assert ow.reach_probs(sched([0.1, 0.2, 0.5], [1.0, 0.5, 0.2])) == (1.0, 0.5, 0.1)


def test_acceptance_step_g1(g1):
    s = sched([0.3, 0.5], [1.0, 0.5])
    assert ow.acceptance_step(g1, s, "t1", "u1") == 1
    assert ow.acceptance_step(g1, s, "t2", "u1") == 2
    # negative interior threshold delays even a zero-sacrifice type
    assert ow.acceptance_step(g1, sched([0.2, 0.5], [1.0, 0.5]), "t1", "u1") == 2
    # threshold too low for t2 altogether
    assert ow.acceptance_step(g1, sched([0.1], [1.0]), "t2", "u1") is None


def test_expected_utility_b_g1(g1):
    s = sched([0.3, 0.5], [1.0, 0.5])
    v = ow.expected_utility_B(g1, s, "u1")
    # t1 accepts at step 1 (share .3), t2 at step 2 (reached w.p. .5, share .5)
    assert v == 0.5 * (0.0 + 1.0 * (1.0 - 0.3) * 4.0) + 0.5 * (0.0 + 0.5 * (1.0 - 0.5) * 4.0)
    assert v == 1.9


def test_one_step_schedule_equals_single_offer(g1):
    v = ow.expected_utility_B(g1, sched([0.25], [1.0]), "u1")
    assert v == ow.evaluate_offer(g1, ow.Offer("a1", 0.25), "u1").expected_u_b
    assert v == 3.0


def test_expected_outcome_g1(g1):
    out = ow.expected_outcome(g1, sched([0.3, 0.5], [1.0, 0.5]), "u1")
    assert out.step_of_type == {"t1": 1, "t2": 2}
    assert out.acceptance_prob == 0.75
    assert out.expected_u_a == 2.35
    assert out.expected_u_b == 1.9
    assert out.expected_sw == 4.25


def test_run_multi_offer_paths(g1):
    s = sched([0.3, 0.5], [1.0, 0.5])
    # t1 accepts immediately, no lottery involved
    out = ow.run_multi_offer(g1, s, "t1", "u1", seed=0)
    assert out.accepted and out.step == 1
    assert out.transfer == pytest.approx(0.3 * 4.0)
    assert out.payoff_a + out.payoff_b == out.welfare
    # t2 needs the continuation lottery; same seed, same outcome
    first = ow.run_multi_offer(g1, s, "t2", "u1", seed=5)
    again = ow.run_multi_offer(g1, s, "t2", "u1", seed=5)
    assert first == again
    accepted = 0
    for seed in range(300):
        r = ow.run_multi_offer(g1, s, "t2", "u1", seed=seed)
        assert r.payoff_a + r.payoff_b == r.welfare
        if r.accepted:
            assert r.step == 2
            assert r.transfer == 2.0
            accepted += 1
        else:
            assert r.profile == ow.StrategyProfile("a2", "b1")
    # lottery continues w.p. 1/2; 300 tries stay well inside 4 sigma
    assert abs(accepted / 300 - 0.5) < 0.12


def test_simulate_schedule_matches_exact_values(g1):
    s = sched([0.3, 0.5], [1.0, 0.5])
    sim = ow.simulate_schedule(g1, s, "u1", samples=60_000, seed=9)
    exact = ow.expected_outcome(g1, s, "u1")
    assert abs(sim.acceptance_rate - exact.acceptance_prob) < 0.01
    assert abs(sim.mean_u_a - exact.expected_u_a) <= 5 * sim.ci_u_a
    assert abs(sim.mean_u_b - exact.expected_u_b) <= 5 * sim.ci_u_b
    assert abs(sim.mean_sw - exact.expected_sw) <= 5 * sim.ci_sw
    planning = ow.expected_utility_B(g1, s, "u1")
    assert abs(sim.mean_u_b_planning - planning) <= 5 * sim.ci_u_b_planning
    assert sim.ci_sw > 0.0


def test_simulate_schedule_deterministic(g1):
    s = sched([0.3, 0.5], [1.0, 0.5])
    a = ow.simulate_schedule(g1, s, "u1", samples=70_000, seed=4)
    b = ow.simulate_schedule(g1, s, "u1", samples=70_000, seed=4)
    assert a == b
    c = ow.simulate_schedule(g1, s, "u1", samples=70_000, seed=5)
    assert c.mean_sw != a.mean_sw
    with pytest.raises(ValueError):
        ow.simulate_schedule(g1, s, "u1", samples=0, seed=1)


def test_optimize_schedule_g1(g1):
    opt = ow.optimize_schedule(g1, "u1", 2)
    assert opt.schedule.gammas == (0.25, 0.625)
    assert opt.schedule.probs == (1.0, 0.0)
    assert opt.value == 3.0
    assert opt.single_offer == ow.Offer("a1", 0.25)
    assert opt.single_offer_value == 3.0
    assert not opt.null_offer
    assert opt.certified
    assert opt.certification_slack <= 1e-9
    assert opt.outcome.acceptance_prob == 1.0
    with pytest.raises(ValueError):
        ow.optimize_schedule(g1, "u1", 0)


def test_equivalence_gap_fixtures(g1, g2):
    assert ow.equivalence_gap(g1, "u1", 2) == 0.0
    assert ow.equivalence_gap(g1, "u1", 3) == 0.0
    assert ow.equivalence_gap(g2, "u1", 2) == 0.0


def test_schedule_value_never_beats_single_offer():
    # a schedule on an action is a lottery over single offers on that action,
    # so its value cannot exceed the best single-offer value there
    rng = np.random.default_rng(0)
    for seed in range(12):
        game = ow.random_game(seed=seed)
        for tb in game.types_b:
            for action in game.actions_a:
                shares = ow.gamma_candidates(game, action, tb) + [1.0]
                target = max(
                    ow.evaluate_offer(game, ow.Offer(action, g), tb).expected_u_b
                    for g in shares
                )
                for _ in range(8):
                    pair = np.sort(rng.uniform(0.0, 1.0, size=2))
                    if pair[1] <= pair[0]:
                        continue
                    p2 = float(rng.uniform(0.0, 0.99))
                    s = ow.Schedule(action, (float(pair[0]), float(pair[1])), (1.0, p2))
                    v = ow.expected_utility_B(game, s, tb)
                    assert v <= target + 1e-9


def test_optimize_schedule_certified_on_random_games():
    for seed in range(12):
        game = ow.random_game(seed=seed)
        for tb in game.types_b:
            for n in (2, 3):
                opt = ow.optimize_schedule(game, tb, n)
                assert opt.certified, (seed, tb, n, opt.certification_slack)
                assert abs(opt.value - opt.single_offer_value) <= 1e-9
                assert len(opt.schedule.gammas) == n
                g = opt.schedule.gammas
                assert all(g[i] < g[i + 1] for i in range(n - 1))


def test_z99_constant():
    assert ow.Z99 == 2.5758293035489004
    assert math.erf(ow.Z99 / math.sqrt(2.0)) == pytest.approx(0.99, abs=1e-12)
