"""Kravchuk transforms, shadow enumerators, and Shor-Laflamme enumerators.

Normalization: A_m(M1, M2) = sum over weight-m strings of Tr(sigma M1) Tr(sigma M2)
with no global prefactor, so A_m(rho, rho) equals the sector length S_m exactly.
The literature differs by powers of 2^N here; this convention is the one under
which the MacWilliams duality below holds with the (x+3y)/2, (x-y)/2 substitution.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import (
    CapabilityError,
    ContractViolation,
    InternalConsistencyError,
)
from .pauli import PAULI_1Q, PureState, pauli_strings
from .sectors import (
    SectorVector,
    pauli_coefficients,
    sector_lengths_of_matrix,
    weight_tensor,
)


def kravchuk(g: int, m: int, n: int) -> int:
    """Quaternary Kravchuk polynomial K_g(m, n), exact integer."""
    if not (0 <= g <= n and 0 <= m <= n):
        raise ContractViolation(f"indices (g={g}, m={m}) outside 0..{n}")
    return sum(
        (-1) ** i * 3 ** (g - i) * math.comb(m, i) * math.comb(n - m, g - i)
        for i in range(g + 1)
    )


@lru_cache(maxsize=None)
def kravchuk_table(n: int) -> tuple:
    """Immutable (n+1)x(n+1) table K[g][m]; built once per n."""
    return tuple(
        tuple(kravchuk(g, m, n) for m in range(n + 1)) for g in range(n + 1)
    )


@dataclass(frozen=True)
class ShadowVector:
    """Shadow enumerators (S_0^(e), ..., S_n^(e)) of a sector vector."""

    n_qubits: int
    values: tuple

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, g):
        return self.values[g]

    def as_array(self) -> np.ndarray:
        return np.array(self.values)


def shadow_enumerators(sv: SectorVector) -> ShadowVector:
    """Signed Kravchuk transform 2^-n sum_m (-1)^m K_g(m,n) S_m, all g."""
    n = sv.n_qubits
    table = kravchuk_table(n)
    vals = tuple(
        sum((-1) ** m * table[g][m] * sv[m] for m in range(n + 1)) / 2**n
        for g in range(n + 1)
    )
    return ShadowVector(n, vals)


def sectors_from_shadows(sh: ShadowVector) -> SectorVector:
    """Inverse transform S_m = (-1)^m 2^-n sum_g K_m(g,n) S_g^(e)."""
    n = sh.n_qubits
    table = kravchuk_table(n)
    vals = tuple(
        (-1) ** m * sum(table[m][g] * sh[g] for g in range(n + 1)) / 2**n
        for m in range(n + 1)
    )
    return SectorVector(n, vals)


def shadow_coefficient_row(g: int, n: int):
    """Exact rational coefficients of S_g^(e) over (S_0..S_n)."""
    from fractions import Fraction

    table = kravchuk_table(n)
    return tuple(
        Fraction((-1) ** m * table[g][m], 2**n) for m in range(n + 1)
    )


# ---------------------------------------------------------------------------
# Shor-Laflamme enumerators for Hermitian pairs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EnumeratorPair:
    n_qubits: int
    A: tuple
    B: tuple
    C: tuple


def _check_hermitian(mat: np.ndarray, name: str):
    if np.abs(mat - mat.conj().T).max() > 1e-9:
        raise ContractViolation(f"{name} is not Hermitian")


def _poly_eval(coeffs, x: float, y: float, n: int) -> float:
    return sum(c * x ** (n - m) * y**m for m, c in enumerate(coeffs))


def shor_laflamme(m1: np.ndarray, m2: np.ndarray) -> EnumeratorPair:
    """Weight enumerators A_m, B_m and the shadow C_m of a Hermitian pair.

    A_m sums Tr(sigma M1) Tr(sigma M2) over weight-m strings, B_m sums
    Tr(sigma M1 sigma M2), and C_m = B_m(M1, M2~) with M2~ the spin-flipped
    conjugate.  The MacWilliams duality B(x,y) = A((x+3y)/2, (x-y)/2) is
    verified by point evaluation before returning.
    """
    m1 = np.asarray(m1, dtype=np.complex128)
    m2 = np.asarray(m2, dtype=np.complex128)
    dim = m1.shape[0]
    n = dim.bit_length() - 1
    if m1.shape != (dim, dim) or m2.shape != (dim, dim) or dim != 2**n:
        raise ContractViolation("inputs must be square with power-of-two size")
    if n > 6:
        raise CapabilityError("dense enumerator path capped at n = 6")
    _check_hermitian(m1, "M1")
    _check_hermitian(m2, "M2")

    x1 = pauli_coefficients(m1, n)
    x2 = pauli_coefficients(m2, n)
    w = weight_tensor(n).ravel()
    a = np.bincount(w, weights=(x1 * x2).ravel(), minlength=n + 1)

    b = np.zeros(n + 1)
    c = np.zeros(n + 1)
    from .pauli import conjugate_time_reverse_matrix

    m2_tilde = conjugate_time_reverse_matrix(m2)
    for mu in pauli_strings(n):
        sig = mu.matrix()
        val = np.trace(sig @ m1 @ sig @ m2)
        val_t = np.trace(sig @ m1 @ sig @ m2_tilde)
        if abs(val.imag) > 1e-9 or abs(val_t.imag) > 1e-9:
            raise InternalConsistencyError("enumerator trace has imaginary residue")
        b[mu.weight] += val.real
        c[mu.weight] += val_t.real

    for x, y in ((1.0, 0.0), (1.0, 1.0), (2.0, 1.0)):
        lhs = _poly_eval(b, x, y, n)
        rhs = _poly_eval(a, (x + 3 * y) / 2, (x - y) / 2, n)
        if abs(lhs - rhs) > 1e-8 * max(1.0, abs(lhs)):
            raise InternalConsistencyError(
                f"MacWilliams duality fails at ({x}, {y}): {lhs} vs {rhs}"
            )
    return EnumeratorPair(n, tuple(a), tuple(b), tuple(c))


# ---------------------------------------------------------------------------
# Double-copy representation
# ---------------------------------------------------------------------------


def _doubled_dim_guard(n: int):
    if n > 4:
        raise CapabilityError("double-copy dense path capped at n = 4")


def sector_operator(m: int, n: int) -> np.ndarray:
    """S_m-hat = sum over weight-m strings of sigma (x) sigma, dense 4^n x 4^n."""
    _doubled_dim_guard(n)
    dim = 4**n
    out = np.zeros((dim, dim), dtype=np.complex128)
    for mu in pauli_strings(n, m):
        sig = mu.matrix()
        out += np.kron(sig, sig)
    return out


def _pair_projectors() -> tuple[np.ndarray, np.ndarray]:
    """Triplet and singlet projectors on one doubled-qubit pair."""
    singlet = np.zeros((4, 4), dtype=np.complex128)
    v = np.array([0, 1, -1, 0], dtype=np.complex128) / math.sqrt(2)
    singlet = np.outer(v, v.conj())
    triplet = np.eye(4, dtype=np.complex128) - singlet
    return triplet, singlet


def _apply_pair_op(op4: np.ndarray, vec: np.ndarray, pair: int, n: int) -> np.ndarray:
    """Apply a two-qubit operator on doubled-copy legs (pair, n+pair)."""
    tens = vec.reshape((2,) * (2 * n))
    tens = np.tensordot(op4.reshape(2, 2, 2, 2), tens, axes=([2, 3], [pair, n + pair]))
    # output legs (a, b) sit in front; move them home
    tens = np.moveaxis(tens, [0, 1], [pair, n + pair])
    return tens.reshape(-1)


@lru_cache(maxsize=None)
def _pair_to_doubled_perm(n: int) -> np.ndarray:
    """Index map from pair-major ordering (a_i b_i grouped) to copy-major."""
    dim = 4**n
    perm = np.zeros(dim, dtype=np.intp)
    for j in range(dim):
        a = b = 0
        for i in range(n):
            pair = (j >> (2 * (n - 1 - i))) & 3
            a = (a << 1) | (pair >> 1)
            b = (b << 1) | (pair & 1)
        perm[j] = (a << n) | b
    return perm


def projector_q(g: int, n: int) -> np.ndarray:
    """Q_g-hat: sum over g-subsets of triplet projectors, singlets elsewhere."""
    _doubled_dim_guard(n)
    dim = 4**n
    triplet, singlet = _pair_projectors()
    perm = _pair_to_doubled_perm(n)
    out = np.zeros((dim, dim), dtype=np.complex128)
    for subset in itertools.combinations(range(n), g):
        block = np.array([[1.0 + 0j]])
        for pair in range(n):
            block = np.kron(block, triplet if pair in subset else singlet)
        out[perm[:, None], perm[None, :]] += block
    return out


def doubled_state(state: PureState) -> np.ndarray:
    return np.kron(state.amps, state.amps)


def double_copy_spectrum_check(n: int, rng=None) -> dict:
    """Diagonalize every S_m-hat and verify the Kravchuk eigenvalue law.

    Checks, for each m: the eigenvalue multiset equals
    {(-1)^m K_m(g, n) with multiplicity C(n,g) 3^g}, the operators commute,
    and (on random doubled pure states) S_g^(e) = 2^n <Q_g-hat>.
    """
    _doubled_dim_guard(n)
    if rng is None:
        rng = np.random.default_rng(7)
    table = kravchuk_table(n)
    report = {"n": n, "spectra_ok": True, "commute_ok": True, "projector_ok": True}
    ops = [sector_operator(m, n) for m in range(n + 1)]
    for m, op in enumerate(ops):
        eigs = np.linalg.eigvalsh(op)
        got = Counter(int(round(e)) for e in eigs)
        if np.abs(eigs - np.round(eigs)).max() > 1e-8:
            report["spectra_ok"] = False
        want = Counter()
        for g in range(n + 1):
            want[(-1) ** m * table[m][g]] += math.comb(n, g) * 3**g
        if got != want:
            report["spectra_ok"] = False
            report.setdefault("spectrum_mismatches", []).append((m, got, want))
    for m1, m2 in itertools.combinations(range(n + 1), 2):
        if np.abs(ops[m1] @ ops[m2] - ops[m2] @ ops[m1]).max() > 1e-8:
            report["commute_ok"] = False
    from .pauli import haar_random_state

    qs = [projector_q(g, n) for g in range(n + 1)]
    for _ in range(3):
        psi = haar_random_state(n, rng)
        doubled = doubled_state(psi)
        sv = SectorVector(n, tuple(sector_lengths_of_matrix(psi.density_matrix(), n)))
        sh = shadow_enumerators(sv)
        for g, q in enumerate(qs):
            expect = float(np.real(doubled.conj() @ (q @ doubled)))
            if abs(sh[g] - 2**n * expect) > 1e-8:
                report["projector_ok"] = False
                report.setdefault("projector_mismatches", []).append(
                    (g, sh[g], 2**n * expect)
                )
    return report


# ---------------------------------------------------------------------------
# Generalized concurrence
# ---------------------------------------------------------------------------


def p_for_sector(m: int, n: int) -> np.ndarray:
    """Coefficient table selecting S_m-hat: p_s = (-1)^m K_m(|s|, n)."""
    table = kravchuk_table(n)
    p = np.zeros((2,) * n)
    for s in itertools.product((0, 1), repeat=n):
        p[s] = (-1) ** m * table[m][sum(s)]
    return p


def p_for_shadow_projector(g: int, n: int) -> np.ndarray:
    """Coefficient table selecting Q_g-hat: indicator of |s| = g."""
    p = np.zeros((2,) * n)
    for s in itertools.product((0, 1), repeat=n):
        p[s] = 1.0 if sum(s) == g else 0.0
    return p


def concurrence_general(state: PureState, p) -> float:
    """Generalized multipartite concurrence 2 sqrt(<psi (x) psi| A-hat |psi (x) psi>).

    A-hat is the p-weighted sum of products of triplet/singlet pair
    projectors on the doubled space; the radicand must be nonnegative
    (within 1e-9) or the coefficient table is rejected.
    """
    n = state.n_qubits
    if n > 6:
        raise CapabilityError("concurrence evaluation capped at n = 6")
    p = np.asarray(p, dtype=float).reshape((2,) * n)
    doubled = doubled_state(state)
    triplet, singlet = _pair_projectors()
    acc = np.zeros_like(doubled)
    for s in itertools.product((0, 1), repeat=n):
        coeff = p[s]
        if coeff == 0.0:
            continue
        v = doubled.copy()
        for pair, sq in enumerate(s):
            v = _apply_pair_op(triplet if sq else singlet, v, pair, n)
        acc += coeff * v
    radicand = float(np.real(doubled.conj() @ acc))
    if radicand < -1e-9:
        raise ContractViolation(
            f"coefficient table yields negative expectation {radicand}"
        )
    return 2.0 * math.sqrt(max(radicand, 0.0))
