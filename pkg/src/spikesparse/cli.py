"""Command-line front end.

Subcommands: ``solve`` (one-off solve of an instance file or a synthetic
instance), ``fig2``/``fig3``/``phase`` (the scripted experiments) and
``oracle`` (exhaustive minimum-l1 reference on small instances).  Exit
status: 0 success, 1 solver/data error, 2 usage error.
"""

import argparse
import json
import sys

from . import io as ssio
from .errors import MalformedFile, SpikeSparseError
from .experiments import ExperimentConfig, run_fig2, run_fig3, run_phase
from .noise import make_noise_model
from .oracle import oracle_basis_pursuit, verify_lasso_kkt
from .problems import generate_instance
from .solvers import SOLVER_KINDS, SolverConfig, run

NOISE_FLAGS = {"none": None, "mult-white": "multiplicative_white",
               "add-white": "additive_white", "static": "static"}

_EXPERIMENT_CONFIG_KEYS = ("seed", "lam", "delta", "max_iters", "sample_every", "m", "n",
                           "nz", "solver", "noise_kind", "noise_level", "phase_n",
                           "realizations", "alphas", "betas", "out_dir")


def _parse_synthetic(text: str):
    try:
        m, n, nz = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected m,n,nz integers, got {text!r}")
    return m, n, nz


def _parse_float_list(text: str):
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated reals, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spikesparse",
                                     description="Sparse recovery with spiking-network solvers")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    solve = sub.add_parser("solve", help="solve one instance and write trace/solution files")
    solve.add_argument("--solver", choices=SOLVER_KINDS, required=True)
    source = solve.add_mutually_exclusive_group(required=True)
    source.add_argument("--instance", help="instance JSON file")
    source.add_argument("--synthetic", type=_parse_synthetic, metavar="M,N,NZ",
                        help="generate an instance of these dimensions")
    solve.add_argument("--lambda", dest="lam", type=float, default=10.0)
    solve.add_argument("--delta", type=float, default=1.0)
    solve.add_argument("--max-iters", type=int, default=10000)
    solve.add_argument("--tol", type=float, default=1e-8)
    solve.add_argument("--stall-window", type=int, default=10)
    solve.add_argument("--sample-every", type=int, default=10)
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--bcd-policy", choices=("cyclic", "random", "greedy"), default="cyclic")
    solve.add_argument("--bcd-seed", type=int, default=0)
    solve.add_argument("--noise", choices=sorted(NOISE_FLAGS), default="none")
    solve.add_argument("--noise-level", type=float, default=0.0)
    solve.add_argument("--noise-seed", type=int, default=0)
    solve.add_argument("--trace-out", default="trace.csv")
    solve.add_argument("--solution-out", default="solution.json")
    solve.add_argument("--events-out", help="spike-event log (event-driven solver only)")
    solve.set_defaults(func=_cmd_solve)

    for name in ("fig2", "fig3", "phase"):
        exp = sub.add_parser(name, help=f"run the {name} experiment")
        exp.add_argument("--config", help="JSON config file (flags override it)")
        exp.add_argument("--out-dir", required=True)
        exp.add_argument("--seed", type=int)
        exp.add_argument("--lambda", dest="lam", type=float)
        exp.add_argument("--delta", type=float)
        exp.add_argument("--max-iters", type=int)
        exp.add_argument("--sample-every", type=int)
        if name in ("fig2", "fig3"):
            exp.add_argument("--m", type=int)
            exp.add_argument("--n", type=int)
            exp.add_argument("--nz", type=int)
        if name in ("fig2", "phase"):
            exp.add_argument("--solver", choices=("hda", "hopping"))
        if name == "fig3":
            exp.add_argument("--noise-level", type=float)
        if name == "phase":
            exp.add_argument("--phase-n", type=int)
            exp.add_argument("--realizations", type=int)
            exp.add_argument("--alphas", type=_parse_float_list)
            exp.add_argument("--betas", type=_parse_float_list)
        exp.set_defaults(func=_cmd_experiment, experiment=name)

    oracle = sub.add_parser("oracle", help="exhaustive minimum-l1 reference (small instances)")
    oracle.add_argument("--instance", required=True, help="instance JSON file")
    oracle.add_argument("--lambda", dest="lam", type=float,
                        help="also report l1-penalized stationarity at this threshold")
    oracle.set_defaults(func=_cmd_oracle)

    return parser


def _cmd_solve(args) -> int:
    if args.instance is not None:
        instance = ssio.read_instance(args.instance)
    else:
        m, n, nz = args.synthetic
        instance = generate_instance(m, n, nz, seed=args.seed)

    cfg = SolverConfig(lam=args.lam, delta=args.delta, max_iters=args.max_iters,
                       tol=args.tol, stall_window=args.stall_window,
                       bcd_policy=args.bcd_policy, bcd_seed=args.bcd_seed)
    noise_kind = NOISE_FLAGS[args.noise]
    noise = None
    if noise_kind is not None:
        noise = make_noise_model(noise_kind, args.noise_level, args.noise_seed, m=instance.m)

    result = run(args.solver, instance, cfg=cfg, sample_every=args.sample_every, noise=noise)

    last = result.trace[-1]
    ssio.write_trace(args.trace_out, result.trace)
    ssio.write_solution(args.solution_out, result.u, cfg.lam, last.t, result.stop_reason,
                        last.rel_residual, last.l1, last.l0, instance.seed, args.solver)
    if args.events_out:
        if result.events is None:
            print("error: --events-out requires --solver hopping", file=sys.stderr)
            return 1
        ssio.write_events(args.events_out, result.events)
    print(f"{args.solver}: t={last.t:g} rel_residual={last.rel_residual:.3e} "
          f"l0={last.l0} stop={result.stop_reason} -> {args.solution_out}")
    return 0


def _cmd_experiment(args) -> int:
    values = {}
    if args.config:
        config = ssio._load_json(args.config)
        if not isinstance(config, dict):
            raise MalformedFile(args.config, "config must be a JSON object")
        for key, value in config.items():
            if key not in _EXPERIMENT_CONFIG_KEYS:
                raise MalformedFile(args.config, f"unknown config key {key!r}")
            values[key] = tuple(value) if key in ("alphas", "betas") else value
    for key in _EXPERIMENT_CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    values["out_dir"] = args.out_dir

    cfg = ExperimentConfig(experiment=args.experiment, **values)
    runner = {"fig2": run_fig2, "fig3": run_fig3, "phase": run_phase}[args.experiment]
    out = runner(cfg)
    if args.experiment == "phase":
        print(f"phase: {len(out.cells)} cells x {out.realizations} realizations "
              f"grand_mean_l1_diff={out.grand_mean_l1_diff():.3e} -> {args.out_dir}")
    else:
        last = out.trace[-1]
        print(f"{args.experiment}: t={last.t:g} rel_residual={last.rel_residual:.3e} "
              f"-> {args.out_dir}")
    return 0


def _cmd_oracle(args) -> int:
    instance = ssio.read_instance(args.instance)
    solution = oracle_basis_pursuit(instance.dictionary, instance.clean_signal)
    report = {
        "u_star": [float(x) for x in solution.u_star],
        "l1": solution.l1,
        "support": [int(i) for i in solution.support],
        "feasible": solution.feasible,
        "unique": solution.unique,
    }
    if args.lam is not None:
        kkt = verify_lasso_kkt(solution.u_star, instance.dictionary, instance.clean_signal, args.lam)
        report["kkt"] = {"ok": kkt.ok, "worst": kkt.worst, "worst_index": kkt.worst_index}
    print(json.dumps(report))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SpikeSparseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
