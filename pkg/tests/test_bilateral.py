import numpy as np
import pytest

import oneway as ow


def test_instance_canonicalization():
    a = ow.BilateralTradeInstance([0.75, 0.25], [0.3, 0.7], [0.5], [1.0])
    b = ow.BilateralTradeInstance([0.25, 0.75], [0.7, 0.3], [0.5], [1.0])
    assert a == b
    assert a.seller_values == (0.25, 0.75)
    assert a.seller_probs == (0.7, 0.3)


def test_instance_validation():
    with pytest.raises(ValueError, match="seller"):
        ow.BilateralTradeInstance([], [], [0.5], [1.0])
    with pytest.raises(ValueError, match="probabilities sum"):
        ow.BilateralTradeInstance([0.5], [0.9], [0.5], [1.0])
    with pytest.raises(ValueError, match="non-negative"):
        ow.BilateralTradeInstance([-0.5], [1.0], [0.5], [1.0])
    with pytest.raises(ValueError, match="equal-length"):
        ow.BilateralTradeInstance([0.5, 0.6], [1.0], [0.5], [1.0])


def test_uniform_grid_instance():
    inst = ow.uniform_grid_instance(2)
    assert inst.seller_values == (0.25, 0.75)
    assert inst.seller_probs == (0.5, 0.5)
    assert inst.buyer_values == (0.25, 0.75)
    inst2 = ow.uniform_grid_instance(4, low=0.0, high=100.0)
    assert inst2.seller_values == (12.5, 37.5, 62.5, 87.5)
    with pytest.raises(ValueError):
        ow.uniform_grid_instance(0)


def test_efficient_allocation_strict():
    inst = ow.uniform_grid_instance(2)
    sigma = ow.efficient_allocation(inst)
    # trade only when the buyer strictly values it more; ties keep the good
    assert sigma.tolist() == [[0.0, 1.0], [0.0, 0.0]]


def test_single_pair_with_gains_is_feasible():
    inst = ow.BilateralTradeInstance([0.25], [1.0], [0.75], [1.0])
    res = ow.feasibility_lp(inst)
    assert res.verdict == "feasible"
    assert res.margin == pytest.approx(0.25, abs=1e-9)
    assert res.constraints == 2
    # the margin-maximizing price splits the surplus down the middle
    assert res.mechanism.t_seller[0, 0] == pytest.approx(0.5, abs=1e-9)
    assert ow.check_properties(inst, res.mechanism).all_hold


def test_single_pair_without_gains_is_marginal():
    rev = ow.BilateralTradeInstance([0.75], [1.0], [0.25], [1.0])
    assert ow.feasibility_lp(rev).verdict == "marginal"
    tie = ow.BilateralTradeInstance([0.5], [1.0], [0.5], [1.0])
    assert ow.feasibility_lp(tie).verdict == "marginal"


def test_two_point_grid_feasible():
    inst = ow.uniform_grid_instance(2)
    res = ow.feasibility_lp(inst)
    assert res.verdict == "feasible"
    assert res.margin == pytest.approx(1.0 / 24.0, abs=1e-9)
    assert ow.check_properties(inst, res.mechanism).all_hold
    assert ow.min_subsidy(inst).subsidy == 0.0


def test_six_point_grid_infeasible_with_certificate():
    inst = ow.uniform_grid_instance(6)
    res = ow.feasibility_lp(inst)
    assert res.verdict == "infeasible"
    assert res.margin < -1e-7
    assert res.mechanism is None
    assert ow.certificate_is_valid(res)
    assert res.certificate_residual <= 1e-7
    assert res.certificate_value < 0.0
    assert float(np.max(res.certificate)) == pytest.approx(1.0, abs=1e-12)
    sub = ow.min_subsidy(inst)
    assert sub.subsidy > 0.0
    assert sub.subsidy == pytest.approx(0.023148148148148, abs=1e-9)
    # the subsidized mechanism keeps every property except budget balance
    rep = ow.check_properties(inst, sub.mechanism)
    assert rep.efficient and rep.incentive_compatible and rep.individually_rational
    assert not rep.budget_balanced


def test_certificate_rejected_when_tampered():
    inst = ow.uniform_grid_instance(6)
    res = ow.feasibility_lp(inst)
    import dataclasses
    broken = dataclasses.replace(res, certificate_value=1.0)
    assert not ow.certificate_is_valid(broken)
    no_cert = dataclasses.replace(res, certificate=None)
    assert not ow.certificate_is_valid(no_cert)


def test_dropping_ir_restores_feasibility():
    inst = ow.uniform_grid_instance(10)
    assert ow.feasibility_lp(inst).verdict == "infeasible"
    res = ow.feasibility_lp(inst, include_ir=False)
    assert res.verdict == "feasible"
    assert res.margin == pytest.approx(0.005, abs=1e-9)
    rep = ow.check_properties(inst, res.mechanism)
    assert rep.efficient and rep.budget_balanced and rep.incentive_compatible
    assert not rep.individually_rational


def test_unconstrained_system_is_trivially_feasible():
    inst = ow.BilateralTradeInstance([0.25], [1.0], [0.75], [1.0])
    res = ow.feasibility_lp(inst, include_ir=False)
    assert res.verdict == "feasible"
    assert res.constraints == 0


def test_to_one_way_embedding():
    inst = ow.uniform_grid_instance(2)
    game = ow.to_one_way(inst)
    assert ow.validate(game) == []
    assert game.actions_a == ("keep", "transfer")
    assert game.actions_b == ("none",)
    assert game.u_a("keep", "s1") == 0.25
    assert game.u_a("transfer", "s2") == 0.0
    assert game.u_b(("transfer", "none"), "b2") == 0.75
    assert game.u_b(("keep", "none"), "b2") == 0.0
    # welfare structure: keep earns the seller value, trade the buyer value
    _, opt = ow.optimal_welfare(game, ("s1", "b2"))
    assert opt == 0.75


def _verdicts(rep):
    return (rep.efficient, rep.budget_balanced,
            rep.incentive_compatible, rep.individually_rational)


def _both_checks(inst, mech):
    direct = ow.check_properties(inst, mech)
    game, om = ow.mechanism_to_one_way(inst, mech)
    embedded = ow.check_one_way_properties(game, om)
    return direct, embedded


def test_representations_agree_verdict_for_verdict():
    inst = ow.uniform_grid_instance(3)
    base = ow.feasibility_lp(inst).mechanism
    variants = [base]
    # break budget balance on one cell
    variants.append(ow.DirectMechanism(
        base.allocation, base.t_seller + np.eye(3)[0][:, None] * 0.1, base.t_buyer))
    # shift the seller's transfers down uniformly: IC survives, IR does not
    variants.append(ow.DirectMechanism(base.allocation, base.t_seller - 0.5, base.t_buyer))
    # flip an efficient trade off
    flipped = base.allocation.copy()
    flipped[0, 2] = 0.0
    variants.append(ow.DirectMechanism(flipped, base.t_seller, base.t_buyer))
    # and the subsidized mechanism for an infeasible grid
    inst6 = ow.uniform_grid_instance(6)
    sub6 = ow.min_subsidy(inst6)
    for instance, mech in [(inst, v) for v in variants] + [(inst6, sub6.mechanism)]:
        direct, embedded = _both_checks(instance, mech)
        assert _verdicts(direct) == _verdicts(embedded), (
            direct.witnesses, embedded.witnesses)


def test_violation_witnesses_name_the_problem():
    inst = ow.uniform_grid_instance(3)
    base = ow.feasibility_lp(inst).mechanism
    bad = ow.DirectMechanism(base.allocation, base.t_seller - 0.5, base.t_buyer)
    rep = ow.check_properties(inst, bad)
    assert not rep.all_hold
    assert any("walk-away" in w for w in rep.witnesses)
    assert any("sum to" in w for w in rep.witnesses)


def test_refinement_sweep_structure():
    rows = ow.refinement_sweep(range(2, 8), workers=2)
    assert [r.k for r in rows] == [2, 3, 4, 5, 6, 7]
    for row in rows:
        assert row.verdict in ("feasible", "marginal", "infeasible")
        assert row.subsidy >= 0.0
        if row.verdict == "infeasible":
            assert row.certificate_ok
            assert row.certificate_residual <= 1e-7
            assert row.subsidy > 0.0
        if row.verdict == "feasible":
            assert row.subsidy <= 1e-9
    # worker count must not change results
    serial = ow.refinement_sweep(range(2, 8), workers=1)
    assert serial == rows


def test_one_way_reservation_values():
    # B's walk-away in the embedding is her payoff against equilibrium play,
    # which is zero because the seller keeps the good on her own
    inst = ow.uniform_grid_instance(2)
    game, om = ow.mechanism_to_one_way(inst, ow.feasibility_lp(inst).mechanism)
    rep = ow.check_one_way_properties(game, om)
    assert rep.all_hold
    assert ow.nash_action_A(game, "s1") == "keep"
    assert ow.nash_action_B(game, "b1") == "none"
