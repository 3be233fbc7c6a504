"""Experiment orchestration: config files, multi-run aggregation, CSV and figure output."""

from __future__ import annotations

import concurrent.futures
import math
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import svgplot
from .annealing import SaConfig, sa_solve
from .circuits import DampingSpec, QaoaParams
from .engine import (KIND_CLASSICAL_BERNOULLI, KIND_QAOA, KIND_RANDOM_CIRCUIT,
                     NdarConfig, NdarResult, SamplerSpec, derive_seed, run_ndar)
from .errors import ConfigError
from .ising import (BRUTE_FORCE_CAP, MaxCutInstance, brute_force_best, edge_density,
                    gen_unweighted, gen_weighted_dense, maxcut_to_ising, read_instance)
from .simulator import qaoa_expectation

FAMILY_UNWEIGHTED = "unweighted-sparse"
FAMILY_WEIGHTED = "weighted-dense"

# harness-level seed streams, distinct from the engine's per-iteration tags
_STREAM_RUN = 10
_STREAM_SA = 11

_DEFAULT_GAMMA_RANGE = (-math.pi / 2.0, math.pi / 2.0)
_DEFAULT_BETA_RANGE = (-math.pi / 4.0, math.pi / 4.0)

_KNOWN_KEYS = {
    "instance.file", "instance.family", "instance.n", "instance.density", "instance.seed",
    "sampler.kind", "sampler.q", "sampler.depth", "sampler.fresh_circuit",
    "sampler.gammas", "sampler.betas", "sampler.grid_steps",
    "sampler.gamma_min", "sampler.gamma_max", "sampler.beta_min", "sampler.beta_max",
    "sampler.t_delay", "sampler.t1",
    "ndar.shots", "ndar.iters", "ndar.seed", "ndar.record_distributions", "ndar.patience",
    "sa.reads", "sa.sweeps", "sa.beta_min", "sa.beta_max", "sa.seed",
    "runs", "output_dir",
}


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def _parse_kv_file(path) -> dict[str, str]:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {path}")
    out: dict[str, str] = {}
    for lineno, raw in enumerate(p.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if key in out:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def _conv(kv, key, cast, default):
    if key not in kv:
        return default
    raw = kv[key]
    try:
        if cast is bool:
            low = raw.lower()
            if low not in ("true", "false"):
                raise ValueError
            return low == "true"
        if cast is tuple:
            return tuple(float(part) for part in raw.split(","))
        return cast(raw)
    except ValueError:
        raise ConfigError(f"config key {key!r}: cannot parse {raw!r} as {cast.__name__}") from None


@dataclass(frozen=True)
class ExperimentConfig:
    """Typed view of one experiment: instance source, sampler, loop and baseline settings."""

    instance_file: str | None = None
    family: str | None = None
    n: int | None = None
    density: float = 0.3
    instance_seed: int = 0
    sampler_kind: str = KIND_CLASSICAL_BERNOULLI
    q: float | None = None
    depth: int = 2
    fresh_circuit: bool = False
    gammas: tuple[float, ...] | None = None
    betas: tuple[float, ...] | None = None
    grid_steps: int = 20
    gamma_min: float = _DEFAULT_GAMMA_RANGE[0]
    gamma_max: float = _DEFAULT_GAMMA_RANGE[1]
    beta_min: float = _DEFAULT_BETA_RANGE[0]
    beta_max: float = _DEFAULT_BETA_RANGE[1]
    t_delay: float = 0.0
    t1: float = 180.0
    shots: int = 1000
    iters: int = 12
    seed: int = 0
    record_distributions: bool = True
    patience: int | None = None
    sa_reads: int = 100
    sa_sweeps: int = 1000
    sa_beta_min: float = 0.01
    sa_beta_max: float = 10.0
    sa_seed: int | None = None
    runs: int = 10
    output_dir: str | None = None

    def __post_init__(self):
        if (self.instance_file is None) == (self.family is None):
            raise ConfigError("set exactly one of instance.file or instance.family")
        if self.family is not None:
            if self.family not in (FAMILY_UNWEIGHTED, FAMILY_WEIGHTED):
                raise ConfigError(f"unknown instance family {self.family!r}")
            if self.n is None:
                raise ConfigError("generated instances need instance.n")
        if self.sampler_kind not in (KIND_QAOA, KIND_RANDOM_CIRCUIT, KIND_CLASSICAL_BERNOULLI):
            raise ConfigError(f"unknown sampler kind {self.sampler_kind!r}")
        if self.sampler_kind == KIND_CLASSICAL_BERNOULLI and self.q is None:
            raise ConfigError("classical-bernoulli sampler needs sampler.q")
        if (self.gammas is None) != (self.betas is None):
            raise ConfigError("set sampler.gammas and sampler.betas together")
        if self.runs < 1:
            raise ConfigError("runs must be >= 1")

    @classmethod
    def from_file(cls, path, seed_override: int | None = None,
                  out_override: str | None = None) -> "ExperimentConfig":
        kv = _parse_kv_file(path)
        cfg = cls(
            instance_file=kv.get("instance.file"),
            family=kv.get("instance.family"),
            n=_conv(kv, "instance.n", int, None),
            density=_conv(kv, "instance.density", float, 0.3),
            instance_seed=_conv(kv, "instance.seed", int, 0),
            sampler_kind=kv.get("sampler.kind", KIND_CLASSICAL_BERNOULLI),
            q=_conv(kv, "sampler.q", float, None),
            depth=_conv(kv, "sampler.depth", int, 2),
            fresh_circuit=_conv(kv, "sampler.fresh_circuit", bool, False),
            gammas=_conv(kv, "sampler.gammas", tuple, None),
            betas=_conv(kv, "sampler.betas", tuple, None),
            grid_steps=_conv(kv, "sampler.grid_steps", int, 20),
            gamma_min=_conv(kv, "sampler.gamma_min", float, _DEFAULT_GAMMA_RANGE[0]),
            gamma_max=_conv(kv, "sampler.gamma_max", float, _DEFAULT_GAMMA_RANGE[1]),
            beta_min=_conv(kv, "sampler.beta_min", float, _DEFAULT_BETA_RANGE[0]),
            beta_max=_conv(kv, "sampler.beta_max", float, _DEFAULT_BETA_RANGE[1]),
            t_delay=_conv(kv, "sampler.t_delay", float, 0.0),
            t1=_conv(kv, "sampler.t1", float, 180.0),
            shots=_conv(kv, "ndar.shots", int, 1000),
            iters=_conv(kv, "ndar.iters", int, 12),
            seed=seed_override if seed_override is not None else _conv(kv, "ndar.seed", int, 0),
            record_distributions=_conv(kv, "ndar.record_distributions", bool, True),
            patience=_conv(kv, "ndar.patience", int, None),
            sa_reads=_conv(kv, "sa.reads", int, 100),
            sa_sweeps=_conv(kv, "sa.sweeps", int, 1000),
            sa_beta_min=_conv(kv, "sa.beta_min", float, 0.01),
            sa_beta_max=_conv(kv, "sa.beta_max", float, 10.0),
            sa_seed=_conv(kv, "sa.seed", int, None),
            runs=_conv(kv, "runs", int, 10),
            output_dir=out_override if out_override is not None else kv.get("output_dir"),
        )
        return cfg


def load_instance(config: ExperimentConfig) -> MaxCutInstance:
    """Materialize the instance from a file or from the named generator family."""
    if config.instance_file is not None:
        return read_instance(config.instance_file)
    if config.family == FAMILY_UNWEIGHTED:
        return gen_unweighted(config.n, config.density, config.instance_seed)
    return gen_weighted_dense(config.n, config.instance_seed)


def build_sampler(config: ExperimentConfig, model) -> SamplerSpec:
    """Assemble the sampler; QAOA angles fall back to a grid search on the original model."""
    damping = DampingSpec(config.t_delay, config.t1)
    if config.sampler_kind == KIND_CLASSICAL_BERNOULLI:
        return SamplerSpec(KIND_CLASSICAL_BERNOULLI, q=config.q, damping=damping)
    if config.sampler_kind == KIND_RANDOM_CIRCUIT:
        return SamplerSpec(KIND_RANDOM_CIRCUIT, depth=config.depth, damping=damping,
                           fresh_circuit=config.fresh_circuit)
    if config.gammas is not None:
        params = QaoaParams(config.gammas, config.betas)
    else:
        params, _, _ = grid_search(model, config)
    return SamplerSpec(KIND_QAOA, params=params, damping=damping)


def grid_search(model, config: ExperimentConfig):
    """Scan the (gamma, beta) grid; returns (best params, best value, landscape rows)."""
    if config.grid_steps < 1:
        raise ConfigError("empty parameter grid: sampler.grid_steps must be >= 1")
    rows = []
    best_val = math.inf
    best = None
    for gamma in np.linspace(config.gamma_min, config.gamma_max, config.grid_steps):
        for beta in np.linspace(config.beta_min, config.beta_max, config.grid_steps):
            params = QaoaParams((float(gamma),), (float(beta),))
            val = qaoa_expectation(model, params)
            rows.append((float(gamma), float(beta), val))
            if val < best_val:
                best_val = val
                best = params
    return best, best_val, rows


@dataclass(frozen=True)
class AggregateRow:
    """Across-run statistics for one iteration; sem is sample std over sqrt(runs)."""

    iter_index: int
    mean_best_cut: float
    sem_best_cut: float
    mean_ratio: float
    sem_ratio: float
    mean_cumulative_ratio: float


def _sem(values: np.ndarray) -> float:
    if values.size < 2:
        return 0.0
    return float(values.std(ddof=1) / math.sqrt(values.size))


def aggregate(results: list[NdarResult], sa_cut: float) -> list[AggregateRow]:
    """Fold per-run traces into per-iteration rows; ratios divide by the reference cut."""
    if sa_cut == 0.0:
        raise ConfigError("reference cut is zero; ratios are undefined for this instance")
    iters = min(len(r.trace) for r in results)
    cuts = np.array([[r.trace[j].best_cut for j in range(iters)] for r in results])
    cum = np.maximum.accumulate(cuts, axis=1)
    rows = []
    for j in range(iters):
        rows.append(AggregateRow(
            iter_index=j,
            mean_best_cut=float(cuts[:, j].mean()),
            sem_best_cut=_sem(cuts[:, j]),
            mean_ratio=float((cuts[:, j] / sa_cut).mean()),
            sem_ratio=_sem(cuts[:, j] / sa_cut),
            mean_cumulative_ratio=float((cum[:, j] / sa_cut).mean()),
        ))
    return rows


def _write_lines(path, lines) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def run_experiment(config: ExperimentConfig, threads: int = 1, out_dir=None) -> dict:
    """Run the full experiment and write its output files; returns a summary dict.

    Output layout: trajectory.csv (one AggregateRow per iteration), runs/run_XXX.csv
    per-run traces, meta.txt (instance, sampler, and baseline facts), and when
    distribution recording is on, cost_dist.csv and hamming_dist.csv holding the
    first- and last-iteration histograms of every run. Files are byte-identical
    across re-executions and thread counts.
    """
    out = Path(out_dir if out_dir is not None else (config.output_dir or ""))
    if str(out) in ("", "."):
        raise ConfigError("no output directory: set output_dir or pass --out")
    graph = load_instance(config)
    model = maxcut_to_ising(graph)

    sa_seed = config.sa_seed if config.sa_seed is not None else derive_seed(config.seed, _STREAM_SA, 0)
    sa_cfg = SaConfig(config.sa_reads, config.sa_sweeps, config.sa_beta_min,
                      config.sa_beta_max, sa_seed)
    _, sa_energy = sa_solve(model, sa_cfg)
    sa_cut = -sa_energy

    bf_energy = None
    if model.n <= BRUTE_FORCE_CAP:
        _, bf_energy = brute_force_best(model)

    sampler = build_sampler(config, model)
    ndar_cfgs = [NdarConfig(config.shots, config.iters, derive_seed(config.seed, _STREAM_RUN, r),
                            config.record_distributions, config.patience)
                 for r in range(config.runs)]
    if threads > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda c: run_ndar(model, sampler, c), ndar_cfgs))
    else:
        results = [run_ndar(model, sampler, c) for c in ndar_cfgs]

    rows = aggregate(results, sa_cut)

    out.mkdir(parents=True, exist_ok=True)
    (out / "runs").mkdir(exist_ok=True)
    header = "iter_index,mean_best_cut,sem_best_cut,mean_ratio,sem_ratio,mean_cumulative_ratio"
    _write_lines(out / "trajectory.csv", [header] + [
        ",".join([str(r.iter_index)] + [_fmt(v) for v in (
            r.mean_best_cut, r.sem_best_cut, r.mean_ratio, r.sem_ratio, r.mean_cumulative_ratio)])
        for r in rows])

    for r, res in enumerate(results):
        lines = ["iter_index,best_cut,best_energy,cumulative_best_cut,attractor_energy,best_hamming_weight"]
        best_so_far = -math.inf
        for rec in res.trace:
            best_so_far = max(best_so_far, rec.best_cut)
            lines.append(",".join([
                str(rec.iter_index), _fmt(rec.best_cut), _fmt(rec.best_energy),
                _fmt(best_so_far), _fmt(rec.attractor_energy),
                str(int(rec.best_bits.sum()))]))
        _write_lines(out / "runs" / f"run_{r:03d}.csv", lines)

    if config.record_distributions:
        cost_lines = ["run_index,iter_index,energy,count"]
        ham_lines = ["run_index,iter_index,weight,count"]
        for r, res in enumerate(results):
            picks = [res.trace[0]] + ([res.trace[-1]] if len(res.trace) > 1 else [])
            for rec in picks:
                for e, c in rec.energy_histogram:
                    cost_lines.append(f"{r},{rec.iter_index},{_fmt(e)},{c}")
                for w, c in enumerate(rec.hamming_histogram):
                    if c:
                        ham_lines.append(f"{r},{rec.iter_index},{w},{c}")
        _write_lines(out / "cost_dist.csv", cost_lines)
        _write_lines(out / "hamming_dist.csv", ham_lines)

    meta = [
        ("instance", config.instance_file or config.family),
        ("n", graph.n),
        ("edges", len(graph.edges)),
        ("realized_density", edge_density(graph)),
        ("instance_seed", "-" if config.instance_file else config.instance_seed),
        ("experiment_seed", config.seed),
        ("runs", config.runs),
        ("shots", config.shots),
        ("iters", config.iters),
        ("sampler.kind", sampler.kind),
        ("sampler.q", "-" if sampler.q is None else sampler.q),
        ("sampler.depth", sampler.depth if sampler.kind == KIND_RANDOM_CIRCUIT else "-"),
        ("sampler.gammas", ",".join(_fmt(g) for g in sampler.params.gammas) if sampler.params else "-"),
        ("sampler.betas", ",".join(_fmt(b) for b in sampler.params.betas) if sampler.params else "-"),
        ("sampler.t_delay", sampler.damping.t_delay),
        ("sampler.t1", sampler.damping.t1),
        ("sampler.gamma_damp", sampler.damping.gamma_damp),
        ("sa.reads", sa_cfg.num_reads),
        ("sa.sweeps", sa_cfg.sweeps_per_read),
        ("sa.beta_min", sa_cfg.beta_min),
        ("sa.beta_max", sa_cfg.beta_max),
        ("sa.seed", sa_cfg.seed),
        ("e_sa_cut", sa_cut),
        ("e_sa_energy", sa_energy),
        ("brute_force_energy", "-" if bf_energy is None else bf_energy),
        ("brute_force_cut", "-" if bf_energy is None else -bf_energy),
    ]
    _write_lines(out / "meta.txt", [f"{k} = {_fmt(v)}" for k, v in meta])

    final = rows[-1]
    return {
        "out_dir": str(out),
        "n": graph.n,
        "e_sa_cut": sa_cut,
        "runs": config.runs,
        "final_mean_best_cut": final.mean_best_cut,
        "final_mean_ratio": final.mean_ratio,
        "final_sem_ratio": final.sem_ratio,
        "final_mean_cumulative_ratio": final.mean_cumulative_ratio,
    }


def _read_csv(path) -> tuple[list[str], list[list[str]]]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise ConfigError(f"empty CSV: {path}")
    header = lines[0].split(",")
    rows = [ln.split(",") for ln in lines[1:] if ln]
    for row in rows:
        if len(row) != len(header):
            raise ConfigError(f"corrupt CSV row in {path}: {row}")
    return header, rows


def report(run_dir, svg: bool = False) -> str:
    """Summarize a finished experiment directory; optionally emit SVG figures into it."""
    d = Path(run_dir)
    traj = d / "trajectory.csv"
    if not traj.is_file():
        listing = sorted(p.name for p in d.iterdir()) if d.is_dir() else "no such directory"
        raise ConfigError(f"missing trajectory.csv in {run_dir}; contents: {listing}")
    header, rows = _read_csv(traj)
    expected = ["iter_index", "mean_best_cut", "sem_best_cut", "mean_ratio", "sem_ratio",
                "mean_cumulative_ratio"]
    if header != expected or not rows:
        raise ConfigError(f"corrupt trajectory.csv in {run_dir}")
    data = {name: [float(row[k]) for row in rows] for k, name in enumerate(header)}
    meta: dict[str, str] = {}
    if (d / "meta.txt").is_file():
        for line in (d / "meta.txt").read_text(encoding="utf-8").splitlines():
            if " = " in line:
                key, val = line.split(" = ", 1)
                meta[key] = val
    runs = int(meta.get("runs", "0"))
    last = rows[-1]
    lines = [f"experiment: {d}"]
    if meta:
        lines.append(f"instance: {meta.get('instance')} (n = {meta.get('n')}, "
                     f"edges = {meta.get('edges')}), sampler: {meta.get('sampler.kind')}")
        lines.append(f"reference cut E_SA = {meta.get('e_sa_cut')}")
    suffix = " (single run, sem = 0)" if runs == 1 else ""
    lines.append(f"iterations: {len(rows)}, final mean best cut = {last[1]} (sem {last[2]})")
    lines.append(f"final mean ratio = {last[3]} +/- {last[4]}{suffix}")
    lines.append(f"final mean cumulative ratio = {last[5]}")
    if svg:
        series = [
            {"label": "per-iteration ratio", "xs": data["iter_index"], "ys": data["mean_ratio"],
             "yerr": data["sem_ratio"]},
            {"label": "cumulative ratio", "xs": data["iter_index"],
             "ys": data["mean_cumulative_ratio"]},
        ]
        svgplot.line_chart(d / "ratio_trajectory.svg", "best-found cut relative to E_SA",
                           "iteration", "ratio", series)
        lines.append(f"wrote {d / 'ratio_trajectory.svg'}")
        for stem, xname, title in (("cost_dist", "energy", "sampled energies, run 0"),
                                   ("hamming_dist", "weight", "sampled Hamming weights, run 0")):
            path = d / f"{stem}.csv"
            if not path.is_file():
                continue
            _, drows = _read_csv(path)
            groups = []
            for it in sorted({r[1] for r in drows if r[0] == "0"}, key=int):
                pts = [(float(r[2]), int(r[3])) for r in drows if r[0] == "0" and r[1] == it]
                groups.append({"label": f"iteration {it}", "centers": [p[0] for p in pts],
                               "counts": [p[1] for p in pts]})
            if groups:
                svgplot.histogram_chart(d / f"{stem}.svg", title, xname, "count", groups)
                lines.append(f"wrote {d / (stem + '.svg')}")
    return "\n".join(lines)


def params_search(config: ExperimentConfig, out_dir=None) -> tuple[QaoaParams, float]:
    """Grid-search QAOA angles for the configured instance; writes the landscape CSV."""
    model = maxcut_to_ising(load_instance(config))
    best, best_val, rows = grid_search(model, config)
    out = Path(out_dir if out_dir is not None else (config.output_dir or ""))
    if str(out) not in ("", "."):
        out.mkdir(parents=True, exist_ok=True)
        _write_lines(out / "landscape.csv", ["gamma,beta,expectation"] + [
            ",".join(_fmt(v) for v in row) for row in rows])
    return best, best_val


def resolve_threads(cli_threads: int | None) -> int:
    """Thread count: NDAR_THREADS env var wins over the CLI flag; default 1."""
    env = os.environ.get("NDAR_THREADS")
    if env is not None:
        try:
            value = int(env)
        except ValueError:
            raise ConfigError(f"NDAR_THREADS must be an integer, got {env!r}") from None
        if value < 1:
            raise ConfigError("NDAR_THREADS must be >= 1")
        return value
    if cli_threads is None:
        return 1
    if cli_threads < 1:
        raise ConfigError("--threads must be >= 1")
    return cli_threads
