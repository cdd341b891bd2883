"""Pure multiqubit states and Pauli strings, evaluated matrix-free.

Basis convention (used everywhere, including file I/O and the state zoo):
qubit 1 is the most significant bit of the computational-basis index, i.e.
amplitude ``amps[i]`` belongs to the bitstring ``format(i, f"0{n}b")`` read
left to right as qubits 1..n.
"""

from __future__ import annotations

import math
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import CapabilityError, ContractViolation, InternalConsistencyError

DEFAULT_MAX_QUBITS = 12

# single-qubit Pauli matrices, indexed 0..3 = identity, x, y, z
PAULI_1Q = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=np.complex128,
)

_I_POWERS = np.array([1, 1j, -1, -1j], dtype=np.complex128)


def popcount(arr):
    """Vectorized population count for nonnegative integer arrays."""
    return np.bitwise_count(arr)


class PauliIndex:
    """A Pauli string as a multi-index over {0,1,2,3} (0 = identity)."""

    __slots__ = ("indices",)

    def __init__(self, indices: Iterable[int]):
        idx = tuple(int(v) for v in indices)
        if any(v not in (0, 1, 2, 3) for v in idx):
            raise ContractViolation(f"Pauli indices must lie in 0..3, got {idx}")
        self.indices = idx

    @property
    def n_qubits(self) -> int:
        return len(self.indices)

    @property
    def weight(self) -> int:
        """Number of non-identity factors."""
        return sum(1 for v in self.indices if v != 0)

    def matrix(self) -> np.ndarray:
        """Dense 2^n x 2^n matrix of the string (for small n only)."""
        out = np.array([[1.0 + 0j]])
        for v in self.indices:
            out = np.kron(out, PAULI_1Q[v])
        return out

    def __iter__(self):
        return iter(self.indices)

    def __eq__(self, other):
        return isinstance(other, PauliIndex) and self.indices == other.indices

    def __hash__(self):
        return hash(self.indices)

    def __repr__(self):
        return f"PauliIndex({''.join(map(str, self.indices))})"


def pauli_strings(n_qubits: int, weight: int | None = None) -> Iterator[PauliIndex]:
    """Iterate Pauli strings on n qubits, optionally restricted to one weight."""
    import itertools

    if weight is None:
        for combo in itertools.product(range(4), repeat=n_qubits):
            yield PauliIndex(combo)
        return
    if not 0 <= weight <= n_qubits:
        raise ContractViolation(f"weight {weight} out of range for {n_qubits} qubits")
    for positions in itertools.combinations(range(n_qubits), weight):
        for letters in itertools.product((1, 2, 3), repeat=weight):
            idx = [0] * n_qubits
            for pos, letter in zip(positions, letters):
                idx[pos] = letter
            yield PauliIndex(idx)


class PureState:
    """Normalized pure state of ``n_qubits`` qubits.

    Immutable after construction; the amplitude buffer is marked read-only.
    Norm deviations up to 1e-6 are repaired by renormalization, anything
    larger is rejected as a contract violation.
    """

    __slots__ = ("n_qubits", "amps")

    def __init__(self, n_qubits: int, amplitudes, max_qubits: int | None = None):
        cap = DEFAULT_MAX_QUBITS if max_qubits is None else max_qubits
        n_qubits = int(n_qubits)
        if n_qubits < 1:
            raise ContractViolation("need at least one qubit")
        if n_qubits > cap:
            raise CapabilityError(f"n_qubits={n_qubits} exceeds cap {cap}")
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1).copy()
        if amps.size != 2**n_qubits:
            raise ContractViolation(
                f"expected {2**n_qubits} amplitudes, got {amps.size}"
            )
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > 1e-6:
            raise ContractViolation(f"state norm {norm} deviates by more than 1e-6")
        amps /= norm
        amps.setflags(write=False)
        self.n_qubits = n_qubits
        self.amps = amps

    @property
    def dim(self) -> int:
        return self.amps.size

    def tensor(self, other: "PureState") -> "PureState":
        """Tensor product; ``self`` occupies the leading (most significant) qubits."""
        return PureState(self.n_qubits + other.n_qubits, np.kron(self.amps, other.amps))

    def density_matrix(self) -> np.ndarray:
        return np.outer(self.amps, self.amps.conj())

    def overlap(self, other: "PureState") -> complex:
        if other.n_qubits != self.n_qubits:
            raise ContractViolation("qubit count mismatch in overlap")
        return complex(np.vdot(self.amps, other.amps))

    def __repr__(self):
        return f"PureState(n_qubits={self.n_qubits})"


class ReducedState:
    """Reduced density matrix on a sorted subset of qubit labels (1-based)."""

    __slots__ = ("labels", "matrix")

    def __init__(self, labels: Sequence[int], matrix: np.ndarray, check: bool = True):
        self.labels = tuple(sorted(int(q) for q in labels))
        mat = np.asarray(matrix, dtype=np.complex128)
        k = len(self.labels)
        if mat.shape != (2**k, 2**k):
            raise ContractViolation(f"matrix shape {mat.shape} does not match |A|={k}")
        if check:
            if np.abs(mat - mat.conj().T).max() > 1e-12:
                raise InternalConsistencyError("reduced state is not Hermitian")
            if abs(np.trace(mat).real - 1.0) > 1e-12:
                raise InternalConsistencyError("reduced state trace differs from 1")
        mat.setflags(write=False)
        self.matrix = mat

    @property
    def n_qubits(self) -> int:
        return len(self.labels)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def validate_positive(self, tol: float = 1e-10) -> None:
        lo = float(self.eigenvalues().min())
        if lo < -tol:
            raise InternalConsistencyError(f"negative eigenvalue {lo} in reduced state")

    def __repr__(self):
        return f"ReducedState(labels={self.labels})"


def _masks(mu: PauliIndex, n: int) -> tuple[int, int, int]:
    """Bit masks (flip, yz, n_y) for matrix-free application of a Pauli string."""
    flip = yz = n_y = 0
    for q, letter in enumerate(mu.indices, start=1):
        bit = 1 << (n - q)
        if letter in (1, 2):
            flip |= bit
        if letter in (2, 3):
            yz |= bit
        if letter == 2:
            n_y += 1
    return flip, yz, n_y


def apply_pauli(state: PureState, mu: PauliIndex) -> np.ndarray:
    """Amplitudes of sigma_mu |psi>, computed by bit manipulation in O(2^n)."""
    n = state.n_qubits
    if mu.n_qubits != n:
        raise ContractViolation("Pauli string length does not match qubit count")
    flip, yz, n_y = _masks(mu, n)
    idx = np.arange(state.dim, dtype=np.uint32)
    signs = 1.0 - 2.0 * (popcount(idx & np.uint32(yz)) & 1)
    out = np.zeros(state.dim, dtype=np.complex128)
    out[idx ^ np.uint32(flip)] = _I_POWERS[n_y % 4] * signs * state.amps
    return out


def expect_pauli(state: PureState, mu: PauliIndex) -> float:
    """Expectation value <psi| sigma_mu |psi> as a real number in [-1, 1]."""
    n = state.n_qubits
    if mu.n_qubits != n:
        raise ContractViolation("Pauli string length does not match qubit count")
    flip, yz, n_y = _masks(mu, n)
    idx = np.arange(state.dim, dtype=np.uint32)
    signs = 1.0 - 2.0 * (popcount(idx & np.uint32(yz)) & 1)
    val = _I_POWERS[n_y % 4] * np.sum(
        state.amps[idx ^ np.uint32(flip)].conj() * signs * state.amps
    )
    if abs(val.imag) > 1e-9:
        raise InternalConsistencyError(
            f"Pauli expectation has imaginary residue {val.imag}"
        )
    return float(val.real)


def partial_trace(state: PureState, keep: Iterable[int]) -> ReducedState:
    """Reduced density matrix on the qubit labels in ``keep`` (1-based)."""
    keep = tuple(sorted(set(int(q) for q in keep)))
    n = state.n_qubits
    if not keep:
        raise ContractViolation("keep set must be nonempty")
    if any(q < 1 or q > n for q in keep):
        raise ContractViolation(f"keep labels {keep} outside 1..{n}")
    k = len(keep)
    keep_axes = [q - 1 for q in keep]
    rest_axes = [a for a in range(n) if a not in keep_axes]
    tens = state.amps.reshape((2,) * n)
    mat = np.transpose(tens, keep_axes + rest_axes).reshape(2**k, 2 ** (n - k))
    rho = mat @ mat.conj().T
    return ReducedState(keep, rho)


def time_reverse(state: PureState) -> PureState:
    """Spin-flipped conjugate sigma_y^{(x)n} |psi*>; orthogonal to psi for odd n."""
    n = state.n_qubits
    full = state.dim - 1
    idx = np.arange(state.dim, dtype=np.uint32)
    src = idx ^ np.uint32(full)
    signs = 1.0 - 2.0 * (popcount(src) & 1)
    amps = _I_POWERS[n % 4] * signs * state.amps[src].conj()
    return PureState(n, amps)


def conjugate_time_reverse_matrix(rho: np.ndarray) -> np.ndarray:
    """sigma_y^{(x)k} rho* sigma_y^{(x)k} for a dense 2^k x 2^k matrix."""
    dim = rho.shape[0]
    k = dim.bit_length() - 1
    if dim != 2**k:
        raise ContractViolation("matrix dimension is not a power of two")
    idx = np.arange(dim, dtype=np.uint32)
    rev = idx ^ np.uint32(dim - 1)
    signs = 1.0 - 2.0 * (popcount(idx) & 1)
    # element-wise: (Y rho* Y)[a,b] = phase(a) phase(b)* rho[~a,~b]*
    phase = signs  # i^k factors cancel between bra and ket
    return phase[:, None] * phase[None, :] * rho[np.ix_(rev, rev)].conj()


def haar_random_state(n_qubits: int, rng: np.random.Generator) -> PureState:
    """Haar-uniform pure state from normalized complex Gaussians."""
    vec = rng.standard_normal(2**n_qubits) + 1j * rng.standard_normal(2**n_qubits)
    return PureState(n_qubits, vec / np.linalg.norm(vec))


def basis_index(bits: str) -> int:
    """Computational-basis index of a bitstring written qubit 1 first."""
    return int(bits, 2)


def state_from_terms(n_qubits: int, terms: dict[str, complex]) -> PureState:
    """Build a state from {bitstring: amplitude}; normalizes the result."""
    amps = np.zeros(2**n_qubits, dtype=np.complex128)
    for bits, coeff in terms.items():
        if len(bits) != n_qubits:
            raise ContractViolation(f"bitstring {bits!r} has wrong length")
        amps[basis_index(bits)] += coeff
    norm = np.linalg.norm(amps)
    if norm == 0:
        raise ContractViolation("all amplitudes vanish")
    return PureState(n_qubits, amps / norm)
