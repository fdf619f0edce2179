"""Command line entry point.

Every subcommand prints one deterministic report: a small comment header
(tool version, subcommand, seed, canonical config and its hash) followed by
CSV rows. Identical invocations produce identical bytes. Exit codes: 0 on
success, 1 when an input fails validation or a computation cannot proceed,
2 for usage errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import analytics, bilateral, equilibrium, io, multi_offer, single_offer
from .generate import random_game

SEED_DEFAULT = 42
SAMPLES_DEFAULT = 100_000
TOL_DEFAULT = 1e-9


def _frange(start: float, stop: float, step: float) -> list[float]:
    if step <= 0.0:
        raise ValueError("step must be positive")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(max(count, 0))]


def _emit(args: argparse.Namespace, subcommand: str, config: dict, columns, rows) -> None:
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            io.write_report(fh, subcommand, config, columns, rows)
    else:
        io.write_report(sys.stdout, subcommand, config, columns, rows)


def _types_b(game, requested: str | None) -> list[str]:
    if requested is None:
        return list(game.types_b)
    game.type_b_index(requested)  # raises KeyError on unknown ids
    return [requested]


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        io.load_game(args.instance)
    except io.InstanceFormatError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return 1
    print(f"ok: {args.instance}")
    return 0


def cmd_nash(args: argparse.Namespace) -> int:
    game = io.load_game(args.instance)
    out = equilibrium.nash_outcome(game)
    rows: list[list] = []
    for t in game.types_a:
        rows.append(["nash_A", t, out.action_a[t]])
    for t in game.types_b:
        rows.append(["nash_B", t, out.action_b[t]])
    rows.append(["expected_welfare", "", out.expected_welfare])
    config = {"instance": args.instance, "tolerance": TOL_DEFAULT}
    _emit(args, "nash", config, ["kind", "id", "value"], rows)
    return 0


def cmd_poa(args: argparse.Namespace) -> int:
    game = io.load_game(args.instance)
    report = equilibrium.poa_metrics(game)
    columns, rows = equilibrium.poa_report_rows(game, report)
    config = {"instance": args.instance, "tolerance": TOL_DEFAULT}
    _emit(args, "poa", config, columns, rows)
    return 0


def cmd_single_offer(args: argparse.Namespace) -> int:
    game = io.load_game(args.instance)
    pick = (
        single_offer.optimal_offer
        if args.offer_strategy == "optimal"
        else single_offer.simplified_offer
    )
    rows = []
    for tb in _types_b(game, args.type_b):
        res = pick(game, tb)
        ev = res.evaluation
        bound = ""
        if args.offer_strategy == "simplified":
            bound = single_offer.bayes_poa_bound(game, tb)
        rows.append(
            [
                tb,
                args.offer_strategy,
                res.offer.action_a,
                res.offer.gamma,
                ev.acceptance_prob,
                ev.delta_b,
                ev.outside.action_b,
                ev.outside.payoff,
                ev.expected_u_a,
                ev.expected_u_b,
                ev.expected_sw,
                res.null_offer,
                bound,
            ]
        )
    columns = [
        "type_B",
        "strategy",
        "action",
        "gamma",
        "acceptance_prob",
        "delta_B",
        "outside_action",
        "outside_payoff",
        "expected_u_A",
        "expected_u_B",
        "expected_welfare",
        "null_offer",
        "poa_bound",
    ]
    config = {
        "instance": args.instance,
        "strategy": args.offer_strategy,
        "type_b": args.type_b or "all",
        "tolerance": TOL_DEFAULT,
    }
    _emit(args, "single-offer", config, columns, rows)
    return 0


def cmd_multi_offer(args: argparse.Namespace) -> int:
    game = io.load_game(args.instance)
    types = _types_b(game, args.type_b)
    if args.optimize:
        columns = [
            "type_B",
            "n",
            "action",
            "gammas",
            "probs",
            "value",
            "single_offer_gamma",
            "single_offer_value",
            "gap",
            "null_offer",
            "certified",
            "certification_slack",
        ]
        rows = []
        for tb in types:
            opt = multi_offer.optimize_schedule(game, tb, args.n)
            rows.append(
                [
                    tb,
                    args.n,
                    opt.schedule.action_a,
                    "|".join(repr(g) for g in opt.schedule.gammas),
                    "|".join(repr(p) for p in opt.schedule.probs),
                    opt.value,
                    opt.single_offer.gamma,
                    opt.single_offer_value,
                    abs(opt.value - opt.single_offer_value),
                    opt.null_offer,
                    opt.certified,
                    opt.certification_slack,
                ]
            )
        config = {
            "instance": args.instance,
            "mode": "optimize",
            "n": args.n,
            "type_b": args.type_b or "all",
            "tolerance": TOL_DEFAULT,
        }
        _emit(args, "multi-offer", config, columns, rows)
        return 0
    action, gammas, probs = io.load_schedule_file(args.schedule)
    schedule = multi_offer.Schedule(action, gammas, probs)
    game.action_a_index(schedule.action_a)  # raises KeyError on unknown ids
    columns = [
        "type_B",
        "action",
        "n",
        "planning_value",
        "expected_u_A",
        "expected_u_B",
        "expected_welfare",
        "acceptance_prob",
    ]
    if args.samples > 0:
        columns += [
            "sim_planning_value",
            "sim_planning_ci99",
            "sim_welfare",
            "sim_welfare_ci99",
            "sim_acceptance",
        ]
    rows = []
    for tb in types:
        value = multi_offer.expected_utility_B(game, schedule, tb)
        outcome = multi_offer.expected_outcome(game, schedule, tb)
        row = [
            tb,
            schedule.action_a,
            schedule.n,
            value,
            outcome.expected_u_a,
            outcome.expected_u_b,
            outcome.expected_sw,
            outcome.acceptance_prob,
        ]
        if args.samples > 0:
            sim = multi_offer.simulate_schedule(game, schedule, tb, args.samples, args.seed)
            row += [
                sim.mean_u_b_planning,
                sim.ci_u_b_planning,
                sim.mean_sw,
                sim.ci_sw,
                sim.acceptance_rate,
            ]
        rows.append(row)
    config = {
        "instance": args.instance,
        "mode": "schedule",
        "schedule": args.schedule,
        "samples": args.samples,
        "seed": args.seed,
        "type_b": args.type_b or "all",
        "tolerance": TOL_DEFAULT,
    }
    _emit(args, "multi-offer", config, columns, rows)
    return 0


def _ms_columns() -> list[str]:
    return [
        "k",
        "verdict",
        "margin",
        "min_subsidy",
        "certificate_ok",
        "certificate_residual",
    ]


def cmd_ms_check(args: argparse.Namespace) -> int:
    if args.instance:
        inst = io.load_bilateral(args.instance)
        feas = bilateral.feasibility_lp(inst)
        sub = bilateral.min_subsidy(inst)
        cert_ok = (
            bilateral.certificate_is_valid(feas) if feas.verdict == "infeasible" else ""
        )
        rows = [
            [
                "",
                feas.verdict,
                feas.margin,
                sub.subsidy,
                cert_ok,
                feas.certificate_residual if feas.certificate_residual is not None else "",
            ]
        ]
        config = {"instance": args.instance, "tolerance": bilateral.MARGIN_TOL}
        _emit(args, "ms-check", config, _ms_columns(), rows)
        return 0
    ks = list(range(2, args.refine + 1))
    if not ks:
        print("error: --refine must be at least 2", file=sys.stderr)
        return 1
    rows = []
    for row in bilateral.refinement_sweep(ks):
        rows.append(
            [
                row.k,
                row.verdict,
                row.margin,
                row.subsidy,
                row.certificate_ok if row.certificate_ok is not None else "",
                row.certificate_residual if row.certificate_residual is not None else "",
            ]
        )
    config = {"refine": args.refine, "tolerance": bilateral.MARGIN_TOL}
    _emit(args, "ms-check", config, _ms_columns(), rows)
    return 0


def cmd_examples(args: argparse.Namespace) -> int:
    which = args.which
    if which == "1b":
        start = args.start if args.start is not None else 0.0
        stop = args.stop if args.stop is not None else 400.0
        step = args.step if args.step is not None else 1.0
        columns = ["x", "threshold", "expected_welfare", "optimal_welfare", "poa", "no_payment_poa"]
        if args.sweep:
            rows = []
            for x in _frange(start, stop, step):
                pt = analytics.example1b(x)
                rows.append(
                    [x, pt.threshold, pt.expected_welfare, pt.optimal_welfare, pt.poa,
                     analytics.example1b_no_payment_poa(x)]
                )
            config = {"which": "1b", "sweep": True, "from": start, "to": stop, "step": step}
            _emit(args, "examples", config, columns, rows)
            return 0
        pt = analytics.example1b(args.x)
        row = [args.x, pt.threshold, pt.expected_welfare, pt.optimal_welfare, pt.poa,
               analytics.example1b_no_payment_poa(args.x)]
        if args.mc_samples > 0:
            mc = analytics.mc_single_offer(
                analytics.example1b_scenario(args.x), args.mc_samples, args.seed, "aggregate"
            )
            columns = columns + ["mc_welfare", "mc_welfare_ci99", "mc_poa", "mc_acceptance"]
            row += [mc.mean_sw, mc.ci_sw, mc.poa_vs_ex_ante, mc.acceptance_rate]
        config = {
            "which": "1b", "sweep": False, "x": args.x,
            "mc_samples": args.mc_samples, "seed": args.seed,
        }
        _emit(args, "examples", config, columns, [row])
        return 0
    if which == "2":
        start = args.start if args.start is not None else 0.0
        stop = args.stop if args.stop is not None else 4.0
        step = args.step if args.step is not None else 0.01
        columns = ["mu1", "threshold", "expected_welfare", "optimal_welfare", "poa"]
        mu_star, poa_max = analytics.example2_poa_max()
        if args.sweep:
            rows = []
            for m in _frange(start, stop, step):
                pt = analytics.example2(m)
                rows.append([m, pt.threshold, pt.expected_welfare, pt.optimal_welfare, pt.poa])
            rows.append(["poa_max_closed_form", mu_star, "", "", poa_max])
            config = {"which": "2", "sweep": True, "from": start, "to": stop, "step": step}
            _emit(args, "examples", config, columns, rows)
            return 0
        pt = analytics.example2(args.mu1)
        rows = [
            [args.mu1, pt.threshold, pt.expected_welfare, pt.optimal_welfare, pt.poa],
            ["poa_max_closed_form", mu_star, "", "", poa_max],
        ]
        config = {"which": "2", "sweep": False, "mu1": args.mu1}
        _emit(args, "examples", config, columns, rows)
        return 0
    # corollary
    betas = [args.beta] if args.beta is not None else [0.25, 0.5, 0.75, 1.0]
    columns = ["beta", "gamma_star", "poa_bound"]
    if args.mc_samples > 0:
        columns += ["mc_mean_poa", "mc_poa_ci99", "mc_max_poa", "mc_acceptance"]
    rows = []
    for beta in betas:
        gamma_star, bound = single_offer.corollary_bound(beta)
        row = [beta, gamma_star, bound]
        if args.mc_samples > 0:
            mc = analytics.mc_single_offer(
                analytics.power_scenario(beta), args.mc_samples, args.seed, "exact"
            )
            row += [mc.mean_poa, mc.ci_poa, mc.max_poa, mc.acceptance_rate]
        rows.append(row)
    config = {
        "which": "corollary",
        "beta": args.beta if args.beta is not None else "defaults",
        "mc_samples": args.mc_samples,
        "seed": args.seed,
    }
    _emit(args, "examples", config, columns, rows)
    return 0


def cmd_gen(args: argparse.Namespace) -> int:
    game = random_game(
        seed=args.seed,
        n_actions_a=args.actions_a,
        n_actions_b=args.actions_b,
        n_types_a=args.types_a,
        n_types_b=args.types_b,
        a_scale=args.a_scale,
        b_scale=args.b_scale,
    )
    if args.out:
        io.save_game(game, args.out)
    else:
        print(json.dumps(io.game_to_dict(game), indent=2, sort_keys=True))
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    param = args.param
    if param == "x":
        start = args.start if args.start is not None else 0.0
        stop = args.stop if args.stop is not None else 400.0
        step = args.step if args.step is not None else 1.0
        columns = ["x", "threshold", "expected_welfare", "optimal_welfare", "poa"]
        rows = [
            [x, p.threshold, p.expected_welfare, p.optimal_welfare, p.poa]
            for x, p in ((x, analytics.example1b(x)) for x in _frange(start, stop, step))
        ]
    elif param == "mu1":
        start = args.start if args.start is not None else 0.0
        stop = args.stop if args.stop is not None else 4.0
        step = args.step if args.step is not None else 0.01
        columns = ["mu1", "threshold", "expected_welfare", "optimal_welfare", "poa"]
        rows = [
            [m, p.threshold, p.expected_welfare, p.optimal_welfare, p.poa]
            for m, p in ((m, analytics.example2(m)) for m in _frange(start, stop, step))
        ]
    elif param == "beta":
        start = args.start if args.start is not None else 0.1
        stop = args.stop if args.stop is not None else 2.0
        step = args.step if args.step is not None else 0.05
        columns = ["beta", "gamma_star", "poa_bound"]
        rows = []
        for b in _frange(start, stop, step):
            gamma_star, bound = single_offer.corollary_bound(b)
            rows.append([b, gamma_star, bound])
    else:  # grid
        stop = int(args.stop) if args.stop is not None else 20
        if stop < 2:
            print("error: grid sweep needs --to of at least 2", file=sys.stderr)
            return 1
        columns = _ms_columns()
        rows = []
        for row in bilateral.refinement_sweep(range(2, stop + 1)):
            rows.append(
                [
                    row.k,
                    row.verdict,
                    row.margin,
                    row.subsidy,
                    row.certificate_ok if row.certificate_ok is not None else "",
                    row.certificate_residual if row.certificate_residual is not None else "",
                ]
            )
        config = {"param": "grid", "to": stop, "tolerance": bilateral.MARGIN_TOL}
        _emit(args, "sweep", config, columns, rows)
        return 0
    config = {
        "param": param,
        "from": start,
        "to": stop,
        "step": step,
    }
    _emit(args, "sweep", config, columns, rows)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oneway",
        description="Analyze one-way games: equilibria, inefficiency, bargaining mechanisms.",
        epilog="Set ONEWAY_THREADS to cap worker threads for sweeps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check an instance file")
    p.add_argument("instance")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("nash", help="no-payment equilibrium play and welfare")
    p.add_argument("instance")
    p.add_argument("--out")
    p.set_defaults(func=cmd_nash)

    p = sub.add_parser("poa", help="price-of-anarchy metrics per type profile")
    p.add_argument("instance")
    p.add_argument("--out")
    p.set_defaults(func=cmd_poa)

    p = sub.add_parser("single-offer", help="compute single-offer strategies")
    p.add_argument("instance")
    p.add_argument("--type-b", default=None, help="restrict to one B type")
    p.add_argument(
        "--offer-strategy", choices=["optimal", "simplified"], default="optimal"
    )
    p.add_argument("--out")
    p.set_defaults(func=cmd_single_offer)

    p = sub.add_parser("multi-offer", help="optimize or evaluate offer schedules")
    p.add_argument("instance")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--optimize", action="store_true")
    group.add_argument("--schedule", metavar="FILE", default=None)
    p.add_argument("--n", type=int, default=2, help="steps for --optimize")
    p.add_argument("--type-b", default=None)
    p.add_argument("--samples", type=int, default=0, help="simulate with this many draws")
    p.add_argument("--seed", type=int, default=SEED_DEFAULT)
    p.add_argument("--out")
    p.set_defaults(func=cmd_multi_offer)

    p = sub.add_parser("ms-check", help="trade feasibility and minimum subsidy")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--instance", default=None, help="bilateral trade JSON file")
    group.add_argument("--refine", type=int, default=None, metavar="K", help="sweep grids 2..K")
    p.add_argument("--out")
    p.set_defaults(func=cmd_ms_check)

    p = sub.add_parser("examples", help="worked examples, closed forms and MC checks")
    p.add_argument("--which", choices=["1b", "2", "corollary"], required=True)
    p.add_argument("--sweep", action="store_true")
    p.add_argument("--x", type=float, default=100.0)
    p.add_argument("--mu1", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--from", dest="start", type=float, default=None)
    p.add_argument("--to", dest="stop", type=float, default=None)
    p.add_argument("--step", type=float, default=None)
    p.add_argument("--mc-samples", type=int, default=0)
    p.add_argument("--seed", type=int, default=SEED_DEFAULT)
    p.add_argument("--out")
    p.set_defaults(func=cmd_examples)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--seed", type=int, default=SEED_DEFAULT)
    p.add_argument("--actions-a", type=int, default=3)
    p.add_argument("--actions-b", type=int, default=2)
    p.add_argument("--types-a", type=int, default=3)
    p.add_argument("--types-b", type=int, default=2)
    p.add_argument("--a-scale", type=float, default=10.0)
    p.add_argument("--b-scale", type=float, default=10.0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("sweep", help="parameter sweeps as CSV")
    p.add_argument("--param", choices=["x", "mu1", "beta", "grid"], required=True)
    p.add_argument("--from", dest="start", type=float, default=None)
    p.add_argument("--to", dest="stop", type=float, default=None)
    p.add_argument("--step", type=float, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code is None:
            return 0
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except io.InstanceFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
