"""Sector lengths, time-reversal overlap, reduced purity sums, linear entropy.

The sector length S_m of a state is the sum of squared expectation values of
all weight-m Pauli strings.  Two independent computation routes exist: direct
enumeration of the 4^n Pauli coefficients (``sector_lengths``) and the
reduced-purity route via subset purity sums (``sector_lengths_via_purities``);
the test suite holds them against each other.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np

from .errors import CapabilityError, ContractViolation, InternalConsistencyError
from .pauli import (
    PAULI_1Q,
    PureState,
    ReducedState,
    conjugate_time_reverse_matrix,
    partial_trace,
    time_reverse,
)

SECTOR_ENUMERATION_CAP = 8  # largest n for the direct 4^n route


@dataclass(frozen=True)
class SectorVector:
    """Sector lengths (S_0, ..., S_n) of an n-qubit state."""

    n_qubits: int
    values: tuple

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if len(vals) != self.n_qubits + 1:
            raise ContractViolation(
                f"need {self.n_qubits + 1} components, got {len(vals)}"
            )
        if abs(vals[0] - 1.0) > 1e-10:
            raise InternalConsistencyError(f"S_0 = {vals[0]} differs from 1")
        if min(vals) < -1e-10:
            raise InternalConsistencyError(f"negative sector length {min(vals)}")
        object.__setattr__(self, "values", vals)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, m):
        return self.values[m]

    def total(self) -> float:
        return float(sum(self.values))

    def alternating_sum(self) -> float:
        return float(sum((-1) ** m * v for m, v in enumerate(self.values)))

    def validate_pure(self, tol: float = 1e-8) -> None:
        """Checks the pure-state sum rule sum_m S_m = 2^n."""
        if abs(self.total() - 2**self.n_qubits) > tol:
            raise InternalConsistencyError(
                f"sector sum {self.total()} differs from 2^{self.n_qubits}"
            )

    def as_array(self) -> np.ndarray:
        return np.array(self.values)


# ---------------------------------------------------------------------------
# Pauli-coefficient transform
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def weight_tensor(n: int) -> np.ndarray:
    """Tensor of shape (4,)*n holding the weight of each Pauli multi-index."""
    nz = np.array([0, 1, 1, 1], dtype=np.int8)
    return reduce(np.add.outer, [nz] * n)


# Leg matrices for the pair-major fast transform: a density-matrix entry
# rho[i, j] becomes the pair digit p = 2 i + j on each qubit; contracting a
# leg with K yields Tr(rho sigma) digits, L undoes it.
_PAIR_K = PAULI_1Q.transpose(0, 2, 1).reshape(4, 4).copy()
_PAIR_L = PAULI_1Q.reshape(4, 4).T.copy()


@lru_cache(maxsize=None)
def _pair_perm(n: int) -> np.ndarray:
    """Flat index map between matrix order (i, j) and pair-major digits."""
    out = np.empty(4**n, dtype=np.intp)
    for pm in range(4**n):
        i = j = 0
        for q in range(n):
            p = (pm >> (2 * (n - 1 - q))) & 3
            i = (i << 1) | (p >> 1)
            j = (j << 1) | (p & 1)
        out[pm] = (i << n) | j
    return out


@lru_cache(maxsize=None)
def _leg_groups(n: int):
    """Kronecker powers of the leg matrices, in chunks of up to three legs."""

    def power(base, k):
        out = np.array([[1.0 + 0j]])
        for _ in range(k):
            out = np.kron(out, base)
        return out

    sizes = []
    left = n
    while left > 0:
        take = min(3, left)
        sizes.append(take)
        left -= take
    return tuple((power(_PAIR_K, s), power(_PAIR_L, s), 4**s) for s in sizes)


def _group_cycle(vec: np.ndarray, n: int, which: int) -> np.ndarray:
    a = vec
    for mats in _leg_groups(n):
        a = np.ascontiguousarray((mats[which] @ a.reshape(mats[2], -1)).T)
    return a.reshape(-1)


def pauli_coefficients_fast(rho: np.ndarray, n: int) -> np.ndarray:
    """Flat Pauli-coefficient vector (length 4^n), no residue checks."""
    pm = rho.reshape(-1)[_pair_perm(n)]
    return _group_cycle(pm, n, 0).real


def matrix_from_coefficients_fast(y_flat: np.ndarray, n: int) -> np.ndarray:
    """Dense matrix sum_mu y_mu sigma_mu from a flat coefficient vector."""
    pm = _group_cycle(y_flat.astype(np.complex128), n, 1)
    out = np.empty(4**n, dtype=np.complex128)
    out[_pair_perm(n)] = pm
    return out.reshape(2**n, 2**n)


def pauli_coefficients(rho: np.ndarray, n_qubits: int) -> np.ndarray:
    """All coefficients Tr(rho sigma_mu) as a real tensor of shape (4,)*n.

    Cost O(n 4^n); per-qubit contraction of the density matrix with the
    Pauli basis.
    """
    a = np.asarray(rho, dtype=np.complex128).reshape((2,) * (2 * n_qubits))
    for q in range(n_qubits):
        # Tr(sigma rho) = sum_{a,b} sigma[a,b] rho[b,a]: pair sigma axis "a"
        # with the column leg (always at position n after q contractions)
        # and sigma axis "b" with the row leg (position q).
        a = np.tensordot(PAULI_1Q, a, axes=([1, 2], [n_qubits, q]))
    # new Pauli axes were prepended each step: axes read (m_n, ..., m_1)
    x = np.transpose(a, tuple(reversed(range(n_qubits))))
    if np.abs(x.imag).max() > 1e-9:
        raise InternalConsistencyError("Pauli coefficients have imaginary residue")
    return x.real


def matrix_from_coefficients(y: np.ndarray, n_qubits: int) -> np.ndarray:
    """Dense matrix sum_mu y_mu sigma_mu from a coefficient tensor."""
    a = np.asarray(y, dtype=np.complex128).reshape((4,) * n_qubits)
    for q in range(n_qubits):
        # contract m_{q+1}; current position of m_{q+1} is 2*q
        a = np.tensordot(PAULI_1Q, a, axes=([0], [2 * q]))
    # axes now (a_n, b_n, a_{n-1}, b_{n-1}, ..., a_1, b_1)
    order = [2 * (n_qubits - 1 - q) for q in range(n_qubits)] + [
        2 * (n_qubits - 1 - q) + 1 for q in range(n_qubits)
    ]
    a = np.transpose(a, order)
    return a.reshape(2**n_qubits, 2**n_qubits)


def sector_lengths_of_matrix(rho: np.ndarray, n_qubits: int) -> np.ndarray:
    """Sector lengths (S_0..S_n) of an arbitrary density matrix, float array."""
    x = pauli_coefficients(rho, n_qubits)
    w = weight_tensor(n_qubits)
    return np.bincount(w.ravel(), weights=x.ravel() ** 2, minlength=n_qubits + 1)


def sector_lengths(state: PureState) -> SectorVector:
    """Sector lengths by full Pauli-string enumeration (n <= 8)."""
    n = state.n_qubits
    if n > SECTOR_ENUMERATION_CAP:
        raise CapabilityError(
            f"direct enumeration capped at n={SECTOR_ENUMERATION_CAP}; "
            "use sector_lengths_via_purities for larger systems"
        )
    vals = sector_lengths_of_matrix(state.density_matrix(), n)
    return SectorVector(n, tuple(vals))


def sector_lengths_brute(state: PureState) -> SectorVector:
    """Independent route: one expect_pauli call per string (slow, small n)."""
    from .pauli import expect_pauli, pauli_strings

    n = state.n_qubits
    vals = [0.0] * (n + 1)
    for m in range(n + 1):
        for mu in pauli_strings(n, m):
            vals[m] += expect_pauli(state, mu) ** 2
    return SectorVector(n, tuple(vals))


def subset_purity_sum(state: PureState, k: int) -> float:
    """sum over all k-subsets A of Tr(rho_A^2), by direct reduction."""
    n = state.n_qubits
    tens = state.amps.reshape((2,) * n)
    total = 0.0
    for subset in itertools.combinations(range(n), k):
        rest = [a for a in range(n) if a not in subset]
        mat = np.transpose(tens, list(subset) + rest).reshape(2**k, 2 ** (n - k))
        if k <= n - k:
            gram = mat @ mat.conj().T
        else:
            gram = mat.conj().T @ mat
        total += float(np.sum(np.abs(gram) ** 2))
    return total


def sector_lengths_via_purities(state: PureState) -> SectorVector:
    """Sector lengths recovered from subset purity sums.

    Inverts the triangular system
    sum_{A, |A|=k} Tr(rho_A^2) = 2^{-k} sum_{m<=k} C(n-m, k-m) S_m
    for k = 0..n; works to n = 12 where the 4^n enumeration does not.
    """
    n = state.n_qubits
    p = np.array([subset_purity_sum(state, k) for k in range(n + 1)])
    s = np.zeros(n + 1)
    for k in range(n + 1):
        acc = (2**k) * p[k]
        for m in range(k):
            acc -= math.comb(n - m, k - m) * s[m]
        s[k] = acc
    return SectorVector(n, tuple(s))


# ---------------------------------------------------------------------------
# Time-reversal overlap and derived functionals
# ---------------------------------------------------------------------------


def overlap_R(obj) -> float:
    """Overlap Tr(rho rho~) with the spin-flipped conjugate state.

    Accepts a PureState (|<psi|psi~>|^2) or a ReducedState / dense matrix
    (Tr(rho rho~) by sigma_y conjugation).
    """
    if isinstance(obj, PureState):
        val = abs(obj.overlap(time_reverse(obj))) ** 2
        return float(val)
    if isinstance(obj, ReducedState):
        rho = obj.matrix
    else:
        rho = np.asarray(obj, dtype=np.complex128)
    val = np.trace(rho @ conjugate_time_reverse_matrix(rho))
    if abs(val.imag) > 1e-9:
        raise InternalConsistencyError("overlap has imaginary residue")
    return float(val.real)


def overlap_R_from_sectors(sv: SectorVector) -> float:
    """Alternating sector sum 2^-n sum (-1)^m S_m; equals overlap_R."""
    return sv.alternating_sum() / 2**sv.n_qubits


def purity(obj) -> float:
    if isinstance(obj, PureState):
        return 1.0
    rho = obj.matrix if isinstance(obj, ReducedState) else np.asarray(obj)
    return float(np.sum(np.abs(rho) ** 2))


def reduced_purity_sum(state: PureState, k: int) -> tuple[float, float]:
    """(sum_A Tr(rho_A^2), sum_A R_{rho_A}) over all subsets of size k.

    Computed both by direct reduction and through the sector-length
    identities; the two must agree to 1e-8 or the call aborts.
    """
    n = state.n_qubits
    if not 1 <= k <= n - 1:
        raise ContractViolation(f"k={k} outside 1..{n - 1}")
    direct_p = 0.0
    direct_r = 0.0
    for subset in itertools.combinations(range(1, n + 1), k):
        red = partial_trace(state, subset)
        direct_p += purity(red)
        direct_r += overlap_R(red)
    sv = _sectors_any_n(state)
    via_p = sum(math.comb(n - m, k - m) * sv[m] for m in range(k + 1)) / 2**k
    via_r = (
        sum((-1) ** m * math.comb(n - m, k - m) * sv[m] for m in range(k + 1)) / 2**k
    )
    if abs(direct_p - via_p) > 1e-8 or abs(direct_r - via_r) > 1e-8:
        raise InternalConsistencyError(
            f"purity-sum routes disagree: direct ({direct_p}, {direct_r}) "
            f"vs sector identities ({via_p}, {via_r})"
        )
    return direct_p, direct_r


def _sectors_any_n(state: PureState) -> SectorVector:
    if state.n_qubits <= SECTOR_ENUMERATION_CAP:
        return sector_lengths(state)
    return sector_lengths_via_purities(state)


def linear_entropy_avg(state: PureState, k: int) -> float:
    """Average linear entanglement entropy over all k|(n-k) bipartitions.

    2 C(n,k) [1 - 2^-k sum_m C(k,m)/C(n,m) S_m]; agrees with the direct
    sum of 2(1 - Tr(rho_A^2)) over subsets.
    """
    n = state.n_qubits
    if not 1 <= k <= n - 1:
        raise ContractViolation(f"k={k} outside 1..{n - 1}")
    sv = _sectors_any_n(state)
    inner = sum(
        math.comb(k, m) / math.comb(n, m) * sv[m] for m in range(k + 1)
    )
    return 2 * math.comb(n, k) * (1 - inner / 2**k)


def purity_overlap_functional(state: PureState, subset) -> float:
    """Tr(rho_A^2) + R_{rho_A} for the qubit subset A.

    Bounded below by 2^-min(k, n-k) and above by 2 for even |A|, 1 for odd
    |A| (the time-reversal overlap of an odd-size marginal cannot exceed
    the mixedness it sits on).
    """
    labels = tuple(sorted(set(int(q) for q in subset)))
    n = state.n_qubits
    k = len(labels)
    if not 1 <= k <= n - 1:
        raise ContractViolation(f"|A|={k} outside 1..{n - 1}")
    red = partial_trace(state, labels)
    val = purity(red) + overlap_R(red)
    lo = 2.0 ** (-min(k, n - k)) - 1e-9
    hi = (3 + (-1) ** k) / 2 + 1e-9
    if not lo <= val <= hi:
        raise InternalConsistencyError(
            f"purity+overlap {val} outside [{lo}, {hi}] for |A|={k}"
        )
    return float(val)
