"""Ising/MaxCut problem model: energies, gauge transforms, instance generators, exact oracles.

Conventions used throughout the package:

* a bitstring x is a numpy uint8 array of 0/1 values; spin i is s_i = 1 - 2 x_i
* model energy is offset + sum_i h_i s_i + sum_{i<j} J_ij s_i s_j
* cut values of MaxCut-derived models satisfy energy(x) == -cut_value(x) exactly
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .errors import ResourceLimitError

BRUTE_FORCE_CAP = 24

# chunk size for exhaustive scans; bounds peak memory at ~50 MB for n = 24
_ENUM_CHUNK = 1 << 18


def as_bits(x, n: int | None = None) -> np.ndarray:
    """Coerce a bitstring ("0110", list of ints, array) to a uint8 array of 0/1 values."""
    if isinstance(x, str):
        try:
            arr = np.array([int(c) for c in x], dtype=np.int64)
        except ValueError:
            raise ValueError(f"bitstring contains non-digit characters: {x!r}") from None
    else:
        arr = np.asarray(x)
        if arr.dtype == np.bool_:
            arr = arr.astype(np.int64)
    if arr.ndim != 1:
        raise ValueError(f"bitstring must be one-dimensional, got shape {arr.shape}")
    if not np.issubdtype(arr.dtype, np.integer):
        asint = arr.astype(np.int64)
        if not np.array_equal(asint, arr):
            raise ValueError("bitstring values must be integers")
        arr = asint
    if arr.size and not np.all((arr == 0) | (arr == 1)):
        raise ValueError("bitstring values must be 0 or 1")
    if n is not None and arr.size != n:
        raise ValueError(f"bitstring length {arr.size} does not match n = {n}")
    return arr.astype(np.uint8)


def bits_to_str(x) -> str:
    """Render a bitstring as a compact '0101...' string, bit 0 first."""
    return "".join("1" if b else "0" for b in as_bits(x))


def all_bitstrings(n: int) -> np.ndarray:
    """All 2^n bitstrings as a (2^n, n) uint8 matrix; row k holds the bits of index k.

    Index convention is little-endian: bit i of row k equals (k >> i) & 1.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > BRUTE_FORCE_CAP:
        raise ResourceLimitError(f"refusing to enumerate 2^{n} bitstrings (cap {BRUTE_FORCE_CAP})")
    idx = np.arange(1 << n, dtype=np.int64)
    return ((idx[:, None] >> np.arange(n)) & 1).astype(np.uint8)


def _canonical_triples(triples, n: int, what: str) -> tuple[tuple[int, int, float], ...]:
    """Validate (i, j, value) triples: indices in range, i < j, no duplicates, finite values."""
    out = []
    for t in triples:
        if len(t) != 3:
            raise ValueError(f"{what} entries must be (i, j, value) triples, got {t!r}")
        i, j, w = int(t[0]), int(t[1]), float(t[2])
        if i == j:
            raise ValueError(f"{what} ({i}, {j}) is a self-loop")
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"{what} ({i}, {j}) has an index outside [0, {n})")
        if i > j:
            raise ValueError(f"{what} ({i}, {j}) must be ordered i < j")
        if not np.isfinite(w):
            raise ValueError(f"{what} ({i}, {j}) has non-finite value {w}")
        out.append((i, j, w))
    if out:
        keys = np.array([i * n + j for i, j, _ in out], dtype=np.int64)
        if np.unique(keys).size != keys.size:
            raise ValueError(f"duplicate {what} pair")
    return tuple(out)


@dataclass(frozen=True)
class IsingModel:
    """Cost model offset + sum_i h[i] s_i + sum_{i<j} J_ij s_i s_j with s_i = 1 - 2 x_i.

    `couplings` holds (i, j, J_ij) triples with i < j; the constant offset is part of
    every energy so that MaxCut-derived models satisfy energy == -cut exactly.
    """

    n: int
    h: tuple[float, ...]
    couplings: tuple[tuple[int, int, float], ...]
    offset: float = 0.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        h = tuple(float(v) for v in self.h)
        if len(h) != self.n:
            raise ValueError(f"h has length {len(h)}, expected {self.n}")
        if h and not np.all(np.isfinite(h)):
            raise ValueError("h contains non-finite values")
        if not np.isfinite(self.offset):
            raise ValueError("offset must be finite")
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "offset", float(self.offset))
        object.__setattr__(self, "couplings", _canonical_triples(self.couplings, self.n, "coupling"))

    @functools.cached_property
    def _fields(self) -> np.ndarray:
        return np.array(self.h, dtype=np.float64)

    @functools.cached_property
    def _edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        if not self.couplings:
            z = np.zeros(0, dtype=np.int64)
            return z, z.copy(), np.zeros(0, dtype=np.float64)
        ci = np.array([c[0] for c in self.couplings], dtype=np.int64)
        cj = np.array([c[1] for c in self.couplings], dtype=np.int64)
        cw = np.array([c[2] for c in self.couplings], dtype=np.float64)
        return ci, cj, cw

    @functools.cached_property
    def coupling_matrix(self) -> np.ndarray:
        """Dense symmetric coupling matrix: J_ij at [i, j] and [j, i], zero diagonal."""
        ci, cj, cw = self._edge_arrays
        m = np.zeros((self.n, self.n), dtype=np.float64)
        m[ci, cj] = cw
        m[cj, ci] = cw
        return m


def energy(model: IsingModel, x) -> float:
    """Exact energy of bitstring x under the model (offset included)."""
    xb = as_bits(x, model.n)
    s = 1.0 - 2.0 * xb.astype(np.float64)
    ci, cj, cw = model._edge_arrays
    e = model.offset + float(model._fields @ s)
    if cw.size:
        e += float(cw @ (s[ci] * s[cj]))
    return e


def energies(model: IsingModel, xs) -> np.ndarray:
    """Energies of a batch of bitstrings given as a (shots, n) 0/1 matrix."""
    X = np.asarray(xs)
    if X.ndim != 2 or X.shape[1] != model.n:
        raise ValueError(f"expected a (shots, {model.n}) bit matrix, got shape {X.shape}")
    S = 1.0 - 2.0 * X.astype(np.float64)
    out = model.offset + S @ model._fields
    if model.couplings:
        out += 0.5 * np.einsum("ij,ij->i", S, S @ model.coupling_matrix)
    return out


def gauge_transform(model: IsingModel, y) -> IsingModel:
    """Remap the model by the bit-flip mask y: h_i -> (-1)^{y_i} h_i, J_ij -> (-1)^{y_i + y_j} J_ij.

    The offset is untouched and the energy spectrum is preserved; only sign flips
    occur, so the transform is exact in floating point.
    """
    yb = as_bits(y, model.n)
    sign = 1.0 - 2.0 * yb.astype(np.float64)
    new_h = (model._fields * sign).tolist()
    ci, cj, cw = model._edge_arrays
    new_w = cw * sign[ci] * sign[cj]
    new_couplings = tuple(zip(ci.tolist(), cj.tolist(), new_w.tolist()))
    return IsingModel(model.n, tuple(new_h), new_couplings, model.offset)


def apply_mask(y, x) -> np.ndarray:
    """XOR a bit-flip mask into a bitstring; involution: applying y twice is the identity."""
    yb = as_bits(y)
    xb = as_bits(x, yb.size)
    return np.bitwise_xor(yb, xb)


def compose_masks(a, b) -> np.ndarray:
    """Compose two bit-flip masks (XOR); associative, commutative, all-zeros identity."""
    ab = as_bits(a)
    bb = as_bits(b, ab.size)
    return np.bitwise_xor(ab, bb)


def hamming_weight(x) -> int:
    """Number of 1-bits."""
    return int(as_bits(x).sum())


@dataclass(frozen=True)
class MaxCutInstance:
    """Weighted graph for MaxCut: n nodes and (i, j, w_ij) edges with i < j."""

    n: int
    edges: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("MaxCut instance needs n >= 2")
        object.__setattr__(self, "edges", _canonical_triples(self.edges, self.n, "edge"))

    @functools.cached_property
    def _edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        if not self.edges:
            z = np.zeros(0, dtype=np.int64)
            return z, z.copy(), np.zeros(0, dtype=np.float64)
        ei = np.array([e[0] for e in self.edges], dtype=np.int64)
        ej = np.array([e[1] for e in self.edges], dtype=np.int64)
        ew = np.array([e[2] for e in self.edges], dtype=np.float64)
        return ei, ej, ew


def cut_value(g: MaxCutInstance, x) -> float:
    """Total weight of edges crossing the partition encoded by bitstring x."""
    xb = as_bits(x, g.n)
    ei, ej, ew = g._edge_arrays
    if not ew.size:
        return 0.0
    crossing = xb[ei] != xb[ej]
    return float(ew @ crossing.astype(np.float64))


def edge_density(g: MaxCutInstance) -> float:
    """|E| divided by the number of node pairs n(n-1)/2."""
    if g.n < 2:
        raise ValueError("edge density needs n >= 2")
    return len(g.edges) / (g.n * (g.n - 1) / 2)


def maxcut_to_ising(g: MaxCutInstance) -> IsingModel:
    """Encode MaxCut as an Ising model: h = 0, J_ij = w_ij / 2, offset = -(1/2) sum w.

    With this encoding energy(model, x) == -cut_value(g, x) for every x, so
    minimizing the energy maximizes the cut.
    """
    ei, ej, ew = g._edge_arrays
    couplings = tuple(zip(ei.tolist(), ej.tolist(), (ew / 2.0).tolist()))
    offset = -0.5 * float(ew.sum()) if ew.size else 0.0
    return IsingModel(g.n, (0.0,) * g.n, couplings, offset)


def gen_unweighted(n: int, d: float, seed: int) -> MaxCutInstance:
    """Random unweighted graph: each node pair is an edge of weight 1 with probability d."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if not (0.0 <= d <= 1.0):
        raise ValueError(f"edge density must lie in [0, 1], got {d}")
    iu, ju = np.triu_indices(n, k=1)
    keep = np.random.default_rng(seed).random(iu.size) < d
    edges = tuple((int(i), int(j), 1.0) for i, j in zip(iu[keep], ju[keep]))
    return MaxCutInstance(n, edges)


def gen_weighted_dense(n: int, seed: int) -> MaxCutInstance:
    """Complete graph with weights drawn uniformly from {-1, +1}."""
    if n < 2:
        raise ValueError("n must be >= 2")
    iu, ju = np.triu_indices(n, k=1)
    w = np.random.default_rng(seed).integers(0, 2, iu.size) * 2.0 - 1.0
    edges = tuple(zip(iu.tolist(), ju.tolist(), w.tolist()))
    return MaxCutInstance(n, edges)


def brute_force_best(model: IsingModel) -> tuple[np.ndarray, float]:
    """Global minimum-energy bitstring by exhaustive scan; ties break lexicographically.

    Lexicographic order treats bit 0 as the most significant position. Refuses n
    beyond the enumeration cap.
    """
    if model.n > BRUTE_FORCE_CAP:
        raise ResourceLimitError(f"brute force capped at n <= {BRUTE_FORCE_CAP}, got n = {model.n}")
    n = model.n
    total = 1 << n
    shifts = np.arange(n, dtype=np.int64)
    # key for lexicographic comparison: bit 0 weighted highest
    lexw = 1 << (n - 1 - shifts)
    best_e = np.inf
    best_key = None
    best_idx = 0
    for start in range(0, total, _ENUM_CHUNK):
        idx = np.arange(start, min(start + _ENUM_CHUNK, total), dtype=np.int64)
        X = ((idx[:, None] >> shifts) & 1).astype(np.uint8)
        E = energies(model, X)
        k = int(np.argmin(E))
        emin = E[k]
        if emin > best_e:
            continue
        cand = np.flatnonzero(E == emin)
        keys = (X[cand].astype(np.int64) * lexw).sum(axis=1)
        kk = int(np.argmin(keys))
        if emin < best_e or keys[kk] < best_key:
            best_e = emin
            best_key = int(keys[kk])
            best_idx = int(idx[cand[kk]])
    bits = ((np.int64(best_idx) >> shifts) & 1).astype(np.uint8)
    return bits, energy(model, bits)


def write_instance(g: MaxCutInstance, path) -> None:
    """Write a graph as text: one 'n m' header line, then 'i j w' per edge, sorted by (i, j)."""
    lines = [f"{g.n} {len(g.edges)}"]
    for i, j, w in sorted(g.edges):
        lines.append(f"{i} {j} {w:.12g}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_instance(path) -> MaxCutInstance:
    """Parse the edge-list text format; rejects self-loops, duplicates, and bad counts."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = [ln.strip() for ln in fh]
    rows = [ln for ln in raw if ln and not ln.startswith("#")]
    if not rows:
        raise ValueError(f"{path}: empty instance file")
    head = rows[0].split()
    if len(head) != 2:
        raise ValueError(f"{path}: header must be 'n m', got {rows[0]!r}")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise ValueError(f"{path}: header must hold two integers, got {rows[0]!r}") from None
    if len(rows) - 1 != m:
        raise ValueError(f"{path}: header promises {m} edges, file has {len(rows) - 1}")
    edges = []
    for lineno, ln in enumerate(rows[1:], start=2):
        parts = ln.split()
        if len(parts) != 3:
            raise ValueError(f"{path}:{lineno}: expected 'i j w', got {ln!r}")
        try:
            i, j, w = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError:
            raise ValueError(f"{path}:{lineno}: malformed edge {ln!r}") from None
        if i > j:
            i, j = j, i
        edges.append((i, j, w))
    try:
        return MaxCutInstance(n, tuple(edges))
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from None
