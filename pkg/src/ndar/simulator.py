"""Exact statevector simulation, Born sampling, and the amplitude-damping channel.

Statevector indexing is little-endian: the amplitude at flat index x describes
the bitstring whose bit i (qubit i) equals (x >> i) & 1.
"""

from __future__ import annotations

import math

import numpy as np

from .circuits import DEFAULT_QUBIT_CAP, Circuit, DampingSpec, QaoaParams, build_qaoa_circuit
from .errors import ResourceLimitError
from .ising import IsingModel, all_bitstrings, energies

DENSITY_MATRIX_CAP = 6

_SQ2 = 1.0 / math.sqrt(2.0)


def _one_qubit_matrix(kind: str, theta: float | None) -> np.ndarray:
    if kind == "H":
        return np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=np.complex128)
    if kind == "X":
        return np.array([[0, 1], [1, 0]], dtype=np.complex128)
    if kind == "Y":
        return np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
    if kind == "RX":
        c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)
    if kind == "RY":
        c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
        return np.array([[c, -s], [s, c]], dtype=np.complex128)
    raise ValueError(f"not a dense one-qubit gate: {kind}")


def _diag_phases(kind: str, theta: float | None) -> np.ndarray:
    if kind == "Z":
        return np.array([1.0, -1.0], dtype=np.complex128)
    if kind == "S":
        return np.array([1.0, 1j], dtype=np.complex128)
    if kind == "T":
        return np.array([1.0, np.exp(1j * math.pi / 4.0)], dtype=np.complex128)
    if kind == "RZ":
        return np.array([np.exp(-0.5j * theta), np.exp(0.5j * theta)], dtype=np.complex128)
    raise ValueError(f"not a diagonal one-qubit gate: {kind}")


def simulate(circuit: Circuit, qubit_cap: int = DEFAULT_QUBIT_CAP) -> np.ndarray:
    """Apply the circuit to |0...0> and return the 2^n statevector (complex128)."""
    n = circuit.n
    if n > qubit_cap:
        raise ResourceLimitError(f"statevector simulation capped at n <= {qubit_cap}, got {n}")
    psi = np.zeros((2,) * n, dtype=np.complex128)
    psi.flat[0] = 1.0
    for gate in circuit.gates:
        kind = gate.kind
        if kind in ("H", "X", "Y", "RX", "RY"):
            ax = n - 1 - gate.targets[0]
            u = _one_qubit_matrix(kind, gate.theta)
            psi = np.moveaxis(np.tensordot(u, psi, axes=([1], [ax])), 0, ax)
        elif kind in ("Z", "S", "T", "RZ"):
            ax = n - 1 - gate.targets[0]
            ph = _diag_phases(kind, gate.theta)
            shape = [1] * n
            shape[ax] = 2
            psi = psi * ph.reshape(shape)
        elif kind == "CX":
            ax_c, ax_t = (n - 1 - t for t in gate.targets)
            sl = [slice(None)] * n
            sl[ax_c] = 1
            sub = psi[tuple(sl)]
            # fixing the control axis drops it, shifting later axes down by one
            psi[tuple(sl)] = np.flip(sub, axis=ax_t - (1 if ax_c < ax_t else 0))
        elif kind == "CZ":
            ax_a, ax_b = (n - 1 - t for t in gate.targets)
            sl = [slice(None)] * n
            sl[ax_a] = 1
            sl[ax_b] = 1
            psi[tuple(sl)] = -psi[tuple(sl)]
        elif kind == "RZZ":
            ax_a, ax_b = (n - 1 - t for t in gate.targets)
            eq = np.exp(-0.5j * gate.theta)
            ne = np.exp(0.5j * gate.theta)
            ph = np.array([[eq, ne], [ne, eq]], dtype=np.complex128)
            shape = [1] * n
            shape[min(ax_a, ax_b)] = 2
            shape[max(ax_a, ax_b)] = 2
            # symmetric phase matrix, so axis ordering does not matter
            psi = psi * ph.reshape(shape)
        else:  # pragma: no cover - Gate validation rejects unknown kinds
            raise ValueError(f"unhandled gate kind {kind}")
    return psi.reshape(-1)


def sample(state: np.ndarray, shots: int, seed: int) -> np.ndarray:
    """Draw `shots` bitstrings from |amplitude|^2, returned as a (shots, n) uint8 matrix.

    Bit i of each row corresponds to qubit i.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    amps = np.asarray(state).reshape(-1)
    n = int(amps.size).bit_length() - 1
    if amps.size != (1 << n) or n < 1:
        raise ValueError(f"state length {amps.size} is not a power of two >= 2")
    p = np.abs(amps) ** 2
    p = p / p.sum()
    idx = np.random.default_rng(seed).choice(p.size, size=shots, p=p)
    return ((idx[:, None] >> np.arange(n)) & 1).astype(np.uint8)


def apply_decay(samples: np.ndarray, gamma: float, seed: int) -> np.ndarray:
    """Flip each 1-bit to 0 independently with probability gamma; 0-bits never change."""
    if not (0.0 <= gamma <= 1.0):
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    X = np.asarray(samples, dtype=np.uint8)
    flips = np.random.default_rng(seed).random(X.shape) < gamma
    return np.where((X == 1) & flips, 0, X).astype(np.uint8)


def density_matrix_reference(circuit: Circuit, gamma: float) -> np.ndarray:
    """Outcome distribution after per-qubit amplitude damping, via the density matrix.

    Kraus operators K0 = diag(1, sqrt(1-gamma)) and K1 = sqrt(gamma) |0><1| are
    applied to every qubit before a computational-basis measurement. Exact but
    O(4^n); intended as a small-n oracle for the classical bit-decay fast path.
    """
    if circuit.n > DENSITY_MATRIX_CAP:
        raise ResourceLimitError(
            f"density matrix reference capped at n <= {DENSITY_MATRIX_CAP}, got {circuit.n}")
    if not (0.0 <= gamma <= 1.0):
        raise ValueError(f"gamma must lie in [0, 1], got {gamma}")
    n = circuit.n
    psi = simulate(circuit)
    rho = np.outer(psi, psi.conj())
    k0 = np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - gamma)]], dtype=np.complex128)
    k1 = np.array([[0.0, math.sqrt(gamma)], [0.0, 0.0]], dtype=np.complex128)
    for q in range(n):
        a = _embed_one_qubit(k0, q, n)
        b = _embed_one_qubit(k1, q, n)
        rho = a @ rho @ a.conj().T + b @ rho @ b.conj().T
    return np.real(np.diag(rho)).copy()


def _embed_one_qubit(u: np.ndarray, q: int, n: int) -> np.ndarray:
    # little-endian: qubit 0 is the rightmost kron factor
    left = np.eye(1 << (n - 1 - q), dtype=np.complex128)
    right = np.eye(1 << q, dtype=np.complex128)
    return np.kron(left, np.kron(u, right))


def qaoa_expectation(model: IsingModel, params: QaoaParams,
                     qubit_cap: int = DEFAULT_QUBIT_CAP) -> float:
    """Exact mean energy of the QAOA output distribution (offset included)."""
    psi = simulate(build_qaoa_circuit(model, params, qubit_cap), qubit_cap)
    p = np.abs(psi) ** 2
    return float(p @ energies(model, all_bitstrings(model.n)))


def optimize_params(model: IsingModel,
                    gamma_range: tuple[float, float] = (-math.pi / 2.0, math.pi / 2.0),
                    beta_range: tuple[float, float] = (-math.pi / 4.0, math.pi / 4.0),
                    steps: int = 20,
                    qubit_cap: int = DEFAULT_QUBIT_CAP) -> QaoaParams:
    """Single-layer grid search minimizing qaoa_expectation over steps x steps points.

    Grid points are inclusive linspaces over the two ranges; ties keep the
    lexicographically smallest (gamma, beta), which the ascending scan with a
    strict comparison provides for free.
    """
    if steps < 1:
        raise ValueError("empty parameter grid: steps must be >= 1")
    best_val = math.inf
    best = None
    for gamma in np.linspace(gamma_range[0], gamma_range[1], steps):
        for beta in np.linspace(beta_range[0], beta_range[1], steps):
            params = QaoaParams((float(gamma),), (float(beta),))
            val = qaoa_expectation(model, params, qubit_cap)
            if val < best_val:
                best_val = val
                best = params
    return best
