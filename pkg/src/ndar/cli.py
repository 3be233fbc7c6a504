"""Command-line entry points: instance generation, experiments, baselines, reports."""

from __future__ import annotations

import argparse
import sys

from .annealing import SaConfig, sa_solve
from .errors import ConfigError, ResourceLimitError
from .harness import (ExperimentConfig, load_instance, params_search, report,
                      resolve_threads, run_experiment)
from .ising import edge_density, gen_unweighted, gen_weighted_dense, maxcut_to_ising, write_instance

_RUN_EPILOG = """\
config file keys (flat `key = value` lines, `#` comments):
  instance.file              path to an edge-list file, or instead:
  instance.family            unweighted-sparse | weighted-dense
  instance.n                 node count (generated instances)
  instance.density           edge probability, unweighted-sparse only (default 0.3)
  instance.seed              generator seed (default 0)
  sampler.kind               qaoa | random-circuit | classical-bernoulli
  sampler.q                  bit-suppress probability (classical-bernoulli)
  sampler.depth              layers of the random circuit (default 2)
  sampler.fresh_circuit      redraw the random circuit each iteration (default false)
  sampler.gammas/betas       comma-separated QAOA angles; omit to grid-search
  sampler.grid_steps         grid resolution per axis (default 20)
  sampler.gamma_min/max      grid range for gamma (default -pi/2, pi/2)
  sampler.beta_min/max       grid range for beta (default -pi/4, pi/4)
  sampler.t_delay, sampler.t1   delay and relaxation times in us (default 0, 180)
  ndar.shots                 samples per iteration (default 1000)
  ndar.iters                 iterations per run (default 12)
  ndar.seed                  experiment seed (default 0)
  ndar.record_distributions  write first/last iteration histograms (default true)
  ndar.patience              optional early stop after this many stalled iterations
  sa.reads, sa.sweeps        annealing effort (defaults 100, 1000)
  sa.beta_min, sa.beta_max   schedule bounds (defaults 0.01, 10)
  sa.seed                    annealer seed (default: derived from ndar.seed)
  runs                       independent NDAR runs (default 10)
  output_dir                 where to write results (or pass --out)

output files:
  trajectory.csv   iter_index,mean_best_cut,sem_best_cut,mean_ratio,sem_ratio,mean_cumulative_ratio
  runs/run_XXX.csv iter_index,best_cut,best_energy,cumulative_best_cut,attractor_energy,best_hamming_weight
  cost_dist.csv    run_index,iter_index,energy,count     (first and last iteration)
  hamming_dist.csv run_index,iter_index,weight,count     (first and last iteration)
  meta.txt         instance, sampler, annealer, and reference-cut facts
"""


def _cmd_gen_instance(args) -> int:
    if args.family == "unweighted-sparse":
        g = gen_unweighted(args.n, args.density, args.seed)
    elif args.family == "weighted-dense":
        g = gen_weighted_dense(args.n, args.seed)
    else:
        raise ConfigError(f"unknown family {args.family!r}")
    write_instance(g, args.out)
    print(f"wrote {args.out}: n = {g.n}, edges = {len(g.edges)}, "
          f"density = {edge_density(g):.12g}")
    return 0


def _cmd_run(args) -> int:
    cfg = ExperimentConfig.from_file(args.config, seed_override=args.seed, out_override=args.out)
    threads = resolve_threads(args.threads)
    summary = run_experiment(cfg, threads=threads)
    print(report(summary["out_dir"], svg=args.svg))
    return 0


def _cmd_sa_baseline(args) -> int:
    cfg = ExperimentConfig.from_file(args.config, seed_override=args.seed)
    model = maxcut_to_ising(load_instance(cfg))
    sa_seed = cfg.sa_seed if cfg.sa_seed is not None else 0
    sa_cfg = SaConfig(cfg.sa_reads, cfg.sa_sweeps, cfg.sa_beta_min, cfg.sa_beta_max, sa_seed)
    _, energy_value = sa_solve(model, sa_cfg)
    print(f"n = {model.n}, reads = {sa_cfg.num_reads}, sweeps = {sa_cfg.sweeps_per_read}")
    print(f"E_SA cut = {-energy_value:.12g} (energy {energy_value:.12g})")
    return 0


def _cmd_params_search(args) -> int:
    cfg = ExperimentConfig.from_file(args.config, out_override=args.out)
    best, best_val, = params_search(cfg)
    print(f"best gamma = {best.gammas[0]:.12g}, beta = {best.betas[0]:.12g}, "
          f"expectation = {best_val:.12g}")
    return 0


def _cmd_report(args) -> int:
    print(report(args.run_dir, svg=args.svg))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ndar",
        description="Noise-directed adaptive remapping experiments on Ising/MaxCut instances.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-instance", help="generate a benchmark graph and write it to a file")
    p.add_argument("--family", required=True, choices=["unweighted-sparse", "weighted-dense"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--density", type=float, default=0.3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen_instance)

    p = sub.add_parser("run", help="run a configured experiment and write CSV outputs",
                       epilog=_RUN_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None, help="output directory (overrides output_dir)")
    p.add_argument("--seed", type=int, default=None, help="override ndar.seed")
    p.add_argument("--threads", type=int, default=None,
                   help="parallel runs (NDAR_THREADS env var wins)")
    p.add_argument("--svg", action="store_true", help="also emit SVG figures")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("sa-baseline", help="run only the simulated-annealing reference")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None, help="override ndar.seed")
    p.set_defaults(func=_cmd_sa_baseline)

    p = sub.add_parser("params-search", help="grid-search QAOA angles for an instance")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None, help="directory for landscape.csv")
    p.set_defaults(func=_cmd_params_search)

    p = sub.add_parser("report", help="summarize a finished run directory")
    p.add_argument("run_dir")
    p.add_argument("--svg", action="store_true", help="also emit SVG figures")
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
