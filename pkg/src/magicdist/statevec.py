"""Pure states of qubit registers and single qudits, Haar sampling, Bloch frame.

Random sampling is built on the counter-based Philox4x64 bit generator keyed
by the pair (seed, stream_id): identical pairs reproduce identical sample
sequences bit for bit, distinct stream ids give independent streams, so a
parallel harness partitions stream ids instead of sharing generator state.
A Haar sample is a vector of 2d independent standard Gaussians assembled
into d complex entries and normalized; no fiducial state enters anywhere.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimensionMismatch, InvalidBlochVector, InvalidDimension

NORM_TOL = 1e-12
BLOCH_TOL = 1e-10


@dataclass(frozen=True)
class SeededRng:
    """Value object naming one reproducible random stream."""

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("seed", "stream_id"):
            v = getattr(self, name)
            if not 0 <= int(v) < 2**64:
                raise ValueError(f"{name} must be an unsigned 64-bit integer, got {v!r}")

    def generator(self) -> np.random.Generator:
        key = np.array([self.seed, self.stream_id], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, SeededRng):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"expected SeededRng or numpy Generator, got {type(rng).__name__}")


@dataclass(frozen=True)
class PureState:
    """Normalized amplitude vector with local-dimension metadata.

    ``len(amplitudes) == local_dim ** num_sites`` always holds; qudits
    (local_dim > 2) are restricted to a single site.
    """

    amplitudes: np.ndarray
    local_dim: int = 2
    num_sites: int = 1

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1).copy()
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        q, n = int(self.local_dim), int(self.num_sites)
        if q < 2 or n < 1:
            raise InvalidDimension(f"need local_dim >= 2 and num_sites >= 1, got q={q}, n={n}")
        if q > 2 and n != 1:
            raise InvalidDimension("qudit registers are limited to a single site")
        if amps.size != q**n:
            raise InvalidDimension(f"{amps.size} amplitudes cannot hold {n} sites of dimension {q}")
        norm2 = float(np.sum(amps.real**2 + amps.imag**2))
        if abs(norm2 - 1.0) > NORM_TOL:
            raise InvalidDimension(f"state not normalized: sum |a|^2 = {norm2!r}")

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def canonicalized(self) -> "PureState":
        """Fix the global phase: first non-negligible amplitude real positive."""
        amps = self.amplitudes
        idx = int(np.argmax(np.abs(amps) > 1e-14))
        pivot = amps[idx]
        phase = pivot / abs(pivot)
        return PureState(amps / phase, self.local_dim, self.num_sites)


@dataclass(frozen=True)
class BlochVector:
    n1: float
    n2: float
    n3: float

    def as_array(self) -> np.ndarray:
        return np.array([self.n1, self.n2, self.n3], dtype=float)

    def norm(self) -> float:
        return float(np.sqrt(self.n1**2 + self.n2**2 + self.n3**2))


def state_from_amplitudes(values, local_dim: int = 2) -> PureState:
    """Build a PureState, inferring the number of sites from the length."""
    amps = np.asarray(values, dtype=np.complex128).reshape(-1)
    q = int(local_dim)
    n = 1
    if q == 2:
        n = int(round(np.log2(amps.size)))
        if 2**n != amps.size:
            raise InvalidDimension(f"length {amps.size} is not a power of two")
    elif amps.size != q:
        raise InvalidDimension(f"single qudit of dimension {q} needs {q} amplitudes")
    return PureState(amps, q, n)


def haar_block(d: int, rng, count: int) -> np.ndarray:
    """Draw ``count`` Haar-random states as the rows of a (count, d) array.

    Row i is assembled from entries [2di, 2d(i+1)) of the stream, so the
    first row coincides with ``haar_sample`` on the same stream.
    """
    if d < 2:
        raise InvalidDimension(f"need d >= 2, got {d}")
    g = _as_generator(rng)
    raw = g.standard_normal((count, 2 * d))
    states = raw[:, :d] + 1j * raw[:, d:]
    norms = np.linalg.norm(states, axis=1, keepdims=True)
    # zero norm has probability zero; guard against pathological streams
    np.maximum(norms, 1e-300, out=norms)
    states /= norms
    return states


def haar_sample(d: int, rng, local_dim: int | None = None) -> PureState:
    """One state from the unitarily invariant measure on dimension d.

    ``local_dim`` defaults to 2 when d is a power of two (qubit register)
    and to d itself otherwise (single qudit).
    """
    if d < 2:
        raise InvalidDimension(f"need d >= 2, got {d}")
    amps = haar_block(d, rng, 1)[0]
    if local_dim is None:
        n = int(round(np.log2(d)))
        local_dim = 2 if 2**n == d else d
    if local_dim == 2:
        num_sites = int(round(np.log2(d)))
    else:
        if local_dim != d:
            raise InvalidDimension(f"local_dim {local_dim} incompatible with d={d}")
        num_sites = 1
    return PureState(amps, local_dim, num_sites)


def from_bloch(b: BlochVector) -> PureState:
    """Qubit state (1 + n.sigma)/2 with the canonical phase convention."""
    if abs(b.norm() - 1.0) > BLOCH_TOL:
        raise InvalidBlochVector(f"|n| = {b.norm()!r} is off the unit sphere")
    theta = np.arccos(np.clip(b.n3, -1.0, 1.0))
    phi = np.arctan2(b.n2, b.n1)
    amps = np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])
    return PureState(amps / np.linalg.norm(amps), 2, 1).canonicalized()


def to_bloch(s: PureState) -> BlochVector:
    """(<X>, <Y>, <Z>) of a single-qubit state."""
    if s.dim != 2:
        raise DimensionMismatch(f"to_bloch needs d=2, got d={s.dim}")
    a0, a1 = s.amplitudes
    z = np.conj(a0) * a1
    return BlochVector(2 * z.real, 2 * z.imag, float(abs(a0) ** 2 - abs(a1) ** 2))


def tensor(a: PureState, b: PureState) -> PureState:
    """Kronecker product; site 0 of ``a`` is the most significant digit."""
    if a.local_dim != b.local_dim:
        raise DimensionMismatch(f"mixed local dimensions {a.local_dim} and {b.local_dim}")
    if a.local_dim > 2:
        raise InvalidDimension("qudit registers are limited to a single site")
    return PureState(np.kron(a.amplitudes, b.amplitudes), a.local_dim, a.num_sites + b.num_sites)


_H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
_S = np.array([[1, 0], [0, 1j]], dtype=np.complex128)


def _phase_key(u: np.ndarray) -> bytes:
    flat = u.reshape(-1)
    pivot = flat[np.argmax(np.abs(flat) > 1e-6)]
    canon = np.round(u * (abs(pivot) / pivot), 9) + (0.0 + 0.0j)  # kill -0.0
    return canon.tobytes()


@lru_cache(maxsize=1)
def single_qubit_cliffords() -> tuple[np.ndarray, ...]:
    """All 24 single-qubit Cliffords modulo phase, in a fixed order.

    Enumeration: breadth-first products of the generators (H first, then S)
    starting from the identity, keeping the first representative of each
    phase-equivalence class in discovery order.
    """
    found = {}
    order = []
    frontier = [np.eye(2, dtype=np.complex128)]
    while frontier:
        nxt = []
        for u in frontier:
            key = _phase_key(u)
            if key in found:
                continue
            found[key] = u
            order.append(u)
            nxt.extend((_H @ u, _S @ u))
        frontier = nxt
    assert len(order) == 24
    for u in order:
        u.setflags(write=False)
    return tuple(order)


def random_single_qubit_clifford(rng) -> np.ndarray:
    """Uniform draw from the 24-element single-qubit Clifford group."""
    g = _as_generator(rng)
    return single_qubit_cliffords()[int(g.integers(24))]
