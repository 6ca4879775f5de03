"""Command-line interface: signal generation, measurement, graph checks,
recovery, and the benchmark runner."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import bench as bench_mod
from .baselines import IterativeOptions, fienup_recover, wirtinger_flow
from .ensembles import (
    add_noise,
    apply_intensity,
    build_complex_full,
    build_complex_stage2,
    build_gaussian,
    build_real_full,
    Ensemble,
    KIND_CUSTOM,
    load_ensemble,
    load_measurement_set,
    measurement_matrix,
    save_ensemble,
    save_measurement_set,
)
from .errors import CollinearAnchors, PhaseLocError
from .graphs import edge_list_text, graph_from_ensemble, is_lateration
from .recovery import (
    RecoveryOptions,
    detect_support,
    oracle_from_measurement_set,
    recover_complex,
)
from .signals import load_signal, random_signal, random_sparse_signal, save_signal


def _build_ensemble(kind: str, n: int, m: int | None, seed: int, x=None) -> Ensemble:
    if kind == "real-full":
        return build_real_full(n)
    if kind == "complex-full":
        return build_complex_full(n)
    if kind == "complex-sparse":
        if x is None:
            raise PhaseLocError("complex-sparse ensembles need the signal's support")
        support = detect_support(np.abs(x) ** 2, 0.0)
        stage2 = build_complex_stage2(n, support)
        coords = build_complex_full(n).vectors[:n]
        return Ensemble(coords + stage2.vectors, KIND_CUSTOM, n)
    if kind == "gaussian":
        if m is None:
            raise PhaseLocError("gaussian ensembles need --m")
        return build_gaussian(n, m, seed)
    raise PhaseLocError(f"unknown ensemble kind {kind!r}")


def cmd_gen_signal(args) -> int:
    if args.sparsity is None:
        x = random_signal(args.n, args.seed)
    else:
        x = random_sparse_signal(args.n, args.sparsity, args.seed)
    save_signal(args.out, x)
    print(f"wrote signal of length {args.n} to {args.out}")
    return 0


def cmd_ensemble(args) -> int:
    ens = _build_ensemble(args.kind, args.n, args.m, args.seed)
    save_ensemble(args.out, ens)
    print(f"wrote {args.kind} ensemble of size {len(ens)} to {args.out}")
    return 0


def cmd_measure(args) -> int:
    x = load_signal(args.signal)
    if args.ensemble:
        ens = load_ensemble(args.ensemble)
    else:
        ens = _build_ensemble(args.kind, x.size, args.m, args.ensemble_seed, x=x)
    mset = apply_intensity(ens, x)
    if args.sigma > 0:
        mset = add_noise(mset, args.sigma, args.noise_seed)
    save_measurement_set(args.out, mset)
    print(f"wrote {len(ens)} measurements (sigma={args.sigma}) to {args.out}")
    return 0


def cmd_graph(args) -> int:
    ens = load_ensemble(args.ensemble)
    graph = graph_from_ensemble(ens)
    print(f"graph: {graph.n_sensors + 1} vertices, {len(graph.edges)} edges")
    if args.edges_out:
        with open(args.edges_out, "w") as fh:
            fh.write(edge_list_text(graph))
        print(f"wrote {len(graph.edges)} edges to {args.edges_out}")
    if args.check_lateration is not None:
        seed_clique = None
        if args.seed_clique:
            seed_clique = [int(v) for v in args.seed_clique.split(",")]
        ok, ordering = is_lateration(graph, args.check_lateration, seed_clique)
        if ok:
            print(f"{args.check_lateration}-lateration: yes")
            print("ordering:", " ".join(map(str, ordering)))
            return 0
        print(f"{args.check_lateration}-lateration: no")
        return 1
    return 0


def cmd_recover(args) -> int:
    mset = load_measurement_set(args.measurements)
    if args.method == "ours":
        zero_tol = args.zero_tol
        if zero_tol is None:
            zero_tol = 3.0 * mset.sigma if mset.sigma > 0 else 0.0
        opts = RecoveryOptions(zero_tol=zero_tol)
        oracle = oracle_from_measurement_set(mset)
        xhat = recover_complex(oracle, mset.ensemble.n, opts)
    else:
        a_mat = measurement_matrix(mset.ensemble)
        opts = IterativeOptions(max_iters=args.max_iters, step_size=args.step,
                                tol=args.tol, seed=args.seed)
        solver = fienup_recover if args.method == "fienup" else wirtinger_flow
        result = solver(a_mat, mset.values, opts)
        xhat = result.xhat
        print(f"{args.method}: {result.iters_used} iterations, "
              f"residual {result.final_residual:.3e}, converged={result.converged}")
    save_signal(args.out, xhat)
    print(f"wrote recovered signal to {args.out}")
    return 0


def cmd_bench(args) -> int:
    methods = tuple(args.methods.split(","))
    if args.experiment == "success":
        n_grid = bench_mod.FULL_N_GRID if args.full else bench_mod.DESK_N_GRID
        sigma_grid = (0.0,)
        trials = args.trials if args.trials else (100 if args.full else 50)
        runner = bench_mod.run_success_experiment
    elif args.experiment == "noise":
        n_grid = [100]
        sigma_grid = bench_mod.FULL_SIGMA_GRID if args.full else bench_mod.DESK_SIGMA_GRID
        trials = args.trials if args.trials else (100 if args.full else 50)
        runner = bench_mod.run_noise_experiment
    else:
        n_grid = bench_mod.FULL_N_GRID if args.full else bench_mod.DESK_N_GRID
        sigma_grid = (0.0,)
        trials = args.trials if args.trials else 10
        runner = bench_mod.run_timing_experiment
    cfg = bench_mod.ExperimentConfig(n_grid=n_grid, sigma_grid=sigma_grid, trials=trials,
                                     methods=methods, base_seed=args.seed)
    records = runner(cfg)
    bench_mod.write_csv(records, args.out)
    print(f"wrote {len(records)} trial records to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="phaseloc",
                                     description="Phase retrieval via anchor-based localization")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-signal", help="draw a random signal and save it as JSON")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sparsity", type=int, default=None,
                   help="exact number of nonzero entries (dense if omitted)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_signal)

    p = sub.add_parser("ensemble", help="build a measurement ensemble and save it as JSON")
    p.add_argument("--kind", choices=["real-full", "complex-full", "gaussian"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=None, help="measurement count (gaussian only)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("measure", help="apply the intensity map to a signal")
    p.add_argument("--signal", required=True)
    p.add_argument("--ensemble", default=None, help="ensemble JSON file to use")
    p.add_argument("--kind", default="complex-full",
                   choices=["real-full", "complex-full", "complex-sparse", "gaussian"],
                   help="ensemble to build when --ensemble is not given")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--ensemble-seed", type=int, default=0)
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--noise-seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("graph", help="inspect the graph induced by an ensemble")
    p.add_argument("--ensemble", required=True)
    p.add_argument("--check-lateration", type=int, default=None, metavar="D")
    p.add_argument("--seed-clique", default=None, help="comma-separated vertex list")
    p.add_argument("--edges-out", default=None)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("recover", help="recover a signal from stored measurements")
    p.add_argument("--measurements", required=True)
    p.add_argument("--method", choices=["ours", "fienup", "wf"], default="ours")
    p.add_argument("--sparse", action="store_true",
                   help="measurement file holds only support-adapted vectors")
    p.add_argument("--zero-tol", type=float, default=None)
    p.add_argument("--max-iters", type=int, default=2500)
    p.add_argument("--step", type=float, default=0.5)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("bench", help="run a benchmark experiment and write a CSV")
    p.add_argument("experiment", choices=["success", "noise", "timing"])
    p.add_argument("--out", required=True)
    p.add_argument("--full", action="store_true", help="full grids instead of desk scale")
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--methods", default="ours,fienup,wf")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CollinearAnchors as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PhaseLocError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
