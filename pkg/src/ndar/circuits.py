"""Gate-level circuit description plus QAOA and random-circuit builders."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ResourceLimitError
from .ising import IsingModel

DEFAULT_QUBIT_CAP = 22

ONE_QUBIT_GATES = ("H", "X", "Y", "Z", "S", "T", "RX", "RY", "RZ")
TWO_QUBIT_GATES = ("CX", "CZ", "RZZ")
ROTATION_GATES = frozenset({"RX", "RY", "RZ", "RZZ"})
GATE_KINDS = frozenset(ONE_QUBIT_GATES) | frozenset(TWO_QUBIT_GATES)

# the pool build_random_circuit draws from; RZZ is reserved for cost evolution
RANDOM_GATE_POOL = ("H", "X", "Y", "Z", "S", "T", "RX", "RY", "RZ", "CX", "CZ")


@dataclass(frozen=True)
class Gate:
    """One gate application: kind, target qubit indices, optional rotation angle.

    Angle conventions: RX(t) = exp(-i t X / 2), RY(t) = exp(-i t Y / 2),
    RZ(t) = exp(-i t Z / 2), RZZ(t) = exp(-i t Z(x)Z / 2).
    """

    kind: str
    targets: tuple[int, ...]
    theta: float | None = None

    def __post_init__(self):
        kind = str(self.kind).upper()
        if kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        targets = tuple(int(t) for t in self.targets)
        arity = 1 if kind in ONE_QUBIT_GATES else 2
        if len(targets) != arity:
            raise ValueError(f"{kind} takes {arity} target(s), got {targets}")
        if len(set(targets)) != len(targets):
            raise ValueError(f"{kind} targets must be distinct, got {targets}")
        if any(t < 0 for t in targets):
            raise ValueError(f"negative qubit index in {targets}")
        if kind in ROTATION_GATES:
            if self.theta is None or not math.isfinite(float(self.theta)):
                raise ValueError(f"{kind} requires a finite angle")
            object.__setattr__(self, "theta", float(self.theta))
        elif self.theta is not None:
            raise ValueError(f"{kind} takes no angle")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "targets", targets)


@dataclass(frozen=True)
class Circuit:
    """Ordered gate sequence on n qubits."""

    n: int
    gates: tuple[Gate, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("circuit needs n >= 1")
        gates = tuple(self.gates)
        for g in gates:
            if max(g.targets) >= self.n:
                raise ValueError(f"gate {g.kind}{g.targets} targets a qubit outside [0, {self.n})")
        object.__setattr__(self, "gates", gates)


@dataclass(frozen=True)
class QaoaParams:
    """Per-layer angles (gamma_l, beta_l); the layer count p is the shared length."""

    gammas: tuple[float, ...]
    betas: tuple[float, ...]

    def __post_init__(self):
        gs = tuple(float(g) for g in self.gammas)
        bs = tuple(float(b) for b in self.betas)
        if len(gs) != len(bs) or not gs:
            raise ValueError("gammas and betas must have equal nonzero length")
        if not all(map(math.isfinite, gs + bs)):
            raise ValueError("angles must be finite")
        object.__setattr__(self, "gammas", gs)
        object.__setattr__(self, "betas", bs)

    @property
    def p(self) -> int:
        return len(self.gammas)


@dataclass(frozen=True)
class DampingSpec:
    """Amplitude damping induced by a delay of t_delay before measurement.

    Both times are in microseconds; the decay probability follows the T1
    relaxation law gamma = 1 - exp(-t_delay / t1).
    """

    t_delay: float
    t1: float

    def __post_init__(self):
        td, t1 = float(self.t_delay), float(self.t1)
        if not (math.isfinite(td) and td >= 0.0):
            raise ValueError(f"t_delay must be finite and >= 0, got {self.t_delay}")
        if not (math.isfinite(t1) and t1 > 0.0):
            raise ValueError(f"t1 must be finite and > 0, got {self.t1}")
        object.__setattr__(self, "t_delay", td)
        object.__setattr__(self, "t1", t1)

    @property
    def gamma_damp(self) -> float:
        return damping_gamma(self)


def damping_gamma(spec: DampingSpec) -> float:
    """Decay probability of a 1-bit during the delay: 1 - exp(-t_delay / t1), in [0, 1]."""
    g = 1.0 - math.exp(-spec.t_delay / spec.t1)
    return min(1.0, max(0.0, g))


def build_qaoa_circuit(model: IsingModel, params: QaoaParams,
                       qubit_cap: int = DEFAULT_QUBIT_CAP) -> Circuit:
    """QAOA circuit for the model: Hadamard wall, then p alternating cost/mixer layers.

    The cost layer applies exp(+i gamma E(x)) as diagonal phases, which with
    RZ(t) = exp(-i t Z / 2) means RZ(-2 gamma h_i) and RZZ(-2 gamma J_ij); this
    orientation makes the single-spin expectation equal -sin(2 beta) sin(2 gamma).
    The mixer applies RX(2 beta) on every qubit.
    """
    if model.n > qubit_cap:
        raise ResourceLimitError(f"QAOA circuit needs n <= {qubit_cap}, got n = {model.n}")
    gates = [Gate("H", (q,)) for q in range(model.n)]
    for gamma, beta in zip(params.gammas, params.betas):
        for q, hq in enumerate(model.h):
            if hq != 0.0:
                gates.append(Gate("RZ", (q,), -2.0 * gamma * hq))
        for i, j, w in model.couplings:
            gates.append(Gate("RZZ", (i, j), -2.0 * gamma * w))
        for q in range(model.n):
            gates.append(Gate("RX", (q,), 2.0 * beta))
    return Circuit(model.n, tuple(gates))


def build_random_circuit(n: int, depth: int, seed: int) -> Circuit:
    """Random circuit of `depth` layers; every qubit receives a gate in each layer.

    A layer visits qubits in random order and assigns each a uniform draw from
    the gate pool; a two-qubit gate consumes the next unassigned qubit as its
    partner, and when no partner remains the draw falls back to the one-qubit
    pool. Rotation angles are uniform in [0, 2 pi). Deterministic given seed.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    rng = np.random.default_rng(seed)
    gates = []
    for _ in range(depth):
        pending = list(rng.permutation(n))
        while pending:
            q = int(pending.pop(0))
            kind = RANDOM_GATE_POOL[rng.integers(len(RANDOM_GATE_POOL))]
            if kind in TWO_QUBIT_GATES and not pending:
                kind = ONE_QUBIT_GATES[rng.integers(len(ONE_QUBIT_GATES))]
            if kind in TWO_QUBIT_GATES:
                partner = int(pending.pop(0))
                targets = (q, partner)
            else:
                targets = (q,)
            theta = float(rng.uniform(0.0, 2.0 * math.pi)) if kind in ROTATION_GATES else None
            gates.append(Gate(kind, targets, theta))
    return Circuit(n, tuple(gates))
