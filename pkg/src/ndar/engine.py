"""The noise-directed adaptive remapping loop and its classical variant.

Each iteration draws shots from the current (gauge-transformed) model, picks the
lowest-energy sample, and remaps the model so that sample becomes the all-zeros
attractor of the next round. Under amplitude damping the sampler drifts toward
the attractor, so the remapping steers noise toward ever better solutions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuits import DampingSpec, QaoaParams, build_qaoa_circuit, build_random_circuit
from .ising import (IsingModel, apply_mask, compose_masks, energies, energy,
                    gauge_transform)
from .simulator import apply_decay, sample, simulate

KIND_QAOA = "qaoa"
KIND_RANDOM_CIRCUIT = "random-circuit"
KIND_CLASSICAL_BERNOULLI = "classical-bernoulli"
SAMPLER_KINDS = (KIND_QAOA, KIND_RANDOM_CIRCUIT, KIND_CLASSICAL_BERNOULLI)

# stream tags for per-purpose child seeds
_STREAM_SAMPLE = 0
_STREAM_DECAY = 1
_STREAM_CIRCUIT = 2


def derive_seed(master_seed: int, *path: int) -> int:
    """Deterministic child seed for a (master, path...) tuple; paths give independent streams."""
    ss = np.random.SeedSequence([int(master_seed), *(int(p) for p in path)])
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class SamplerSpec:
    """Sampling strategy for one NDAR run.

    kind selects among 'qaoa' (needs params), 'random-circuit' (uses depth, and
    fresh_circuit to redraw the circuit each iteration instead of reusing one),
    and 'classical-bernoulli' (needs q, the per-bit suppress probability).
    Circuit samplers pass their measurement outcomes through the damping channel;
    the classical sampler ignores `damping`.
    """

    kind: str
    params: QaoaParams | None = None
    depth: int = 2
    q: float | None = None
    damping: DampingSpec = DampingSpec(0.0, 180.0)
    fresh_circuit: bool = False

    def __post_init__(self):
        if self.kind not in SAMPLER_KINDS:
            raise ValueError(f"unknown sampler kind {self.kind!r}; expected one of {SAMPLER_KINDS}")
        if self.kind == KIND_QAOA and self.params is None:
            raise ValueError("qaoa sampler requires params")
        if self.kind == KIND_RANDOM_CIRCUIT and self.depth < 1:
            raise ValueError("random circuit depth must be >= 1")
        if self.kind == KIND_CLASSICAL_BERNOULLI:
            if self.q is None or not (0.0 <= float(self.q) <= 1.0):
                raise ValueError(f"classical sampler needs q in [0, 1], got {self.q}")
            object.__setattr__(self, "q", float(self.q))


@dataclass(frozen=True)
class NdarConfig:
    """Loop controls: shots per iteration, iteration count, seeding, bookkeeping."""

    shots: int
    max_iters: int
    master_seed: int = 0
    record_distributions: bool = False
    patience: int | None = None

    def __post_init__(self):
        if self.shots < 1:
            raise ValueError("shots must be >= 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.patience is not None and self.patience < 1:
            raise ValueError("patience must be >= 1 when set")


@dataclass(frozen=True)
class IterationRecord:
    """Outcome of one iteration, expressed in the frame that was sampled.

    best_energy is exactly energy(sampled model, best_bits); cumulative_mask is
    the XOR of all accepted bitstrings up to and including this iteration, which
    is also the best bitstring of this iteration written in the original frame.
    attractor_energy is the energy of all-zeros under the sampled model.
    """

    iter_index: int
    best_bits: np.ndarray
    best_energy: float
    best_cut: float
    cumulative_mask: np.ndarray
    attractor_energy: float
    energy_histogram: tuple[tuple[float, int], ...] | None = None
    hamming_histogram: tuple[int, ...] | None = None


@dataclass(frozen=True)
class NdarResult:
    """Full trace plus the overall best mapped back to the original frame."""

    trace: tuple[IterationRecord, ...]
    best_bits_original_frame: np.ndarray
    best_energy_overall: float
    final_mask: np.ndarray


def classical_bernoulli_sample(n: int, q: float, shots: int, seed: int) -> np.ndarray:
    """Shots x n random bits, each bit 0 with probability q and 1 otherwise."""
    if not (0.0 <= q <= 1.0):
        raise ValueError(f"q must lie in [0, 1], got {q}")
    if n < 1 or shots < 1:
        raise ValueError("n and shots must be >= 1")
    u = np.random.default_rng(seed).random((shots, n))
    return (u >= q).astype(np.uint8)


def map_to_original_frame(x, mask) -> np.ndarray:
    """Express a bitstring sampled in a gauge frame in the original frame (XOR the mask)."""
    return apply_mask(mask, x)


def _select_best(X: np.ndarray, E: np.ndarray) -> int:
    """Index of the minimum-energy row; ties prefer lower Hamming weight, then lexicographic."""
    cand = np.flatnonzero(E == E.min())
    if cand.size > 1:
        weights = X[cand].sum(axis=1)
        cand = cand[weights == weights.min()]
        if cand.size > 1:
            # lexsort keys: last key is primary, so feed bit 0 last
            order = np.lexsort(X[cand, ::-1].T)
            cand = cand[order[:1]]
    return int(cand[0])


def _draw_samples(model: IsingModel, sampler: SamplerSpec, config: NdarConfig,
                  iter_index: int, state_cache: dict) -> np.ndarray:
    seed_sample = derive_seed(config.master_seed, _STREAM_SAMPLE, iter_index)
    if sampler.kind == KIND_CLASSICAL_BERNOULLI:
        return classical_bernoulli_sample(model.n, sampler.q, config.shots, seed_sample)
    if sampler.kind == KIND_QAOA:
        state = simulate(build_qaoa_circuit(model, sampler.params))
    else:
        # the random circuit encodes no Hamiltonian, so its state is reusable
        key = iter_index if sampler.fresh_circuit else 0
        if key not in state_cache:
            circuit_seed = derive_seed(config.master_seed, _STREAM_CIRCUIT, key)
            state_cache.clear()
            state_cache[key] = simulate(build_random_circuit(model.n, sampler.depth, circuit_seed))
        state = state_cache[key]
    X = sample(state, config.shots, seed_sample)
    gamma = sampler.damping.gamma_damp
    if gamma > 0.0:
        X = apply_decay(X, gamma, derive_seed(config.master_seed, _STREAM_DECAY, iter_index))
    return X


def run_ndar(model0: IsingModel, sampler: SamplerSpec, config: NdarConfig) -> NdarResult:
    """Run the adaptive remapping loop and return the per-iteration trace.

    Per iteration: draw shots from the current model (QAOA rebuilds its cost
    layers from the current model with fixed angles; the random circuit is drawn
    once per run unless fresh_circuit is set), apply the damping channel for
    circuit samplers, pick the best sample, record it, then gauge-transform the
    model by that sample so it becomes the next all-zeros attractor. Stops early
    only when `patience` consecutive iterations fail to improve the overall best.
    """
    model = model0
    n = model0.n
    mask = np.zeros(n, dtype=np.uint8)
    zeros = np.zeros(n, dtype=np.uint8)
    state_cache: dict = {}
    records: list[IterationRecord] = []
    best_overall = np.inf
    best_original = zeros
    stall = 0
    for j in range(config.max_iters):
        X = _draw_samples(model, sampler, config, j, state_cache)
        E = energies(model, X)
        y_best = X[_select_best(X, E)].copy()
        # recompute through the scalar path so the stored value matches energy() exactly
        e_best = energy(model, y_best)
        new_mask = compose_masks(mask, y_best)
        energy_hist = None
        hamming_hist = None
        if config.record_distributions:
            vals, counts = np.unique(E, return_counts=True)
            energy_hist = tuple((float(v), int(c)) for v, c in zip(vals, counts))
            hamming_hist = tuple(int(c) for c in np.bincount(X.sum(axis=1), minlength=n + 1))
        records.append(IterationRecord(
            iter_index=j,
            best_bits=y_best,
            best_energy=e_best,
            best_cut=-e_best,
            cumulative_mask=new_mask,
            attractor_energy=energy(model, zeros),
            energy_histogram=energy_hist,
            hamming_histogram=hamming_hist,
        ))
        if e_best < best_overall:
            best_overall = e_best
            best_original = map_to_original_frame(y_best, mask)
            stall = 0
        else:
            stall += 1
        model = gauge_transform(model, y_best)
        mask = new_mask
        if config.patience is not None and stall >= config.patience:
            break
    return NdarResult(
        trace=tuple(records),
        best_bits_original_frame=best_original,
        best_energy_overall=float(best_overall),
        final_mask=mask,
    )
