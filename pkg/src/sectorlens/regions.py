"""Monogamy constraint systems over sector lengths, in exact rationals.

Region names:
  R1         pure-state identities: positivity, S_0 = 1, purity sum,
             MacWilliams identities, time-reversal bounds
  R2         R1 plus the shadow inequalities
  R3         R1 plus the subset purity/overlap inequality families
  R          R2 intersect R3
  R6-reduced (n = 6 only) R plus the numerically-derived extra faces;
             labeled as such because those faces are conjectural, not proven

All constraint rows are exact rationals; membership checks snap floating
sector vectors to rationals first so boundary states classify exactly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import CapabilityError, ContractViolation, InternalConsistencyError
from .sectors import SectorVector
from .shadows import kravchuk_table

SNAP_DENOMINATOR = 10**9


@dataclass(frozen=True)
class Row:
    """One constraint: coeffs . (S_0..S_n) {=, <=} rhs."""

    coeffs: tuple
    rhs: Fraction
    sense: str  # "eq" or "le"
    label: str

    def evaluate(self, s: Sequence[Fraction]) -> Fraction:
        return sum(c * v for c, v in zip(self.coeffs, s))

    def slack(self, s: Sequence[Fraction]) -> Fraction:
        """Nonnegative iff satisfied; equalities score -|residual|."""
        val = self.evaluate(s)
        if self.sense == "eq":
            return -abs(val - self.rhs)
        return self.rhs - val


def _normalize(coeffs, rhs, sense):
    """Scale to coprime integers; equalities get a positive leading entry."""
    fracs = [Fraction(c) for c in coeffs] + [Fraction(rhs)]
    denom_lcm = 1
    for f in fracs:
        denom_lcm = denom_lcm * f.denominator // math.gcd(denom_lcm, f.denominator)
    ints = [int(f * denom_lcm) for f in fracs]
    g = 0
    for v in ints:
        g = math.gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    if sense == "eq":
        lead = next((v for v in ints[:-1] if v != 0), 0)
        if lead < 0:
            ints = [-v for v in ints]
    return tuple(Fraction(v) for v in ints[:-1]), Fraction(ints[-1])


def make_row(coeffs, rhs, sense, label) -> Row:
    c, r = _normalize(coeffs, rhs, sense)
    return Row(c, r, sense, label)


@dataclass
class RegionSpec:
    n_qubits: int
    name: str
    equalities: list = field(default_factory=list)
    inequalities: list = field(default_factory=list)

    def all_rows(self):
        return self.equalities + self.inequalities

    def as_float_matrices(self):
        """(A_eq, b_eq, A_le, b_le) as float arrays for bulk screening."""
        n = self.n_qubits
        a_eq = np.array([[float(c) for c in r.coeffs] for r in self.equalities]).reshape(
            -1, n + 1
        )
        b_eq = np.array([float(r.rhs) for r in self.equalities])
        a_le = np.array(
            [[float(c) for c in r.coeffs] for r in self.inequalities]
        ).reshape(-1, n + 1)
        b_le = np.array([float(r.rhs) for r in self.inequalities])
        return a_eq, b_eq, a_le, b_le


# ---------------------------------------------------------------------------
# Region construction
# ---------------------------------------------------------------------------


def _identity_rows(n: int):
    eqs = []
    ineqs = []
    zero = [Fraction(0)] * (n + 1)

    row = zero.copy()
    row[0] = Fraction(1)
    eqs.append(make_row(row, 1, "eq", "S0=1"))

    # MacWilliams identities; k = 0 is the purity sum rule.
    for k in range(0, n // 2 + 1):
        row = zero.copy()
        for m in range(n + 1):
            row[m] = Fraction(math.comb(n - m, k), 2 ** (n - k)) - Fraction(
                math.comb(n - m, n - k), 2**k
            )
        if all(v == 0 for v in row):
            continue
        eqs.append(make_row(row, 0, "eq", f"macwilliams:k={k}"))

    if n % 2 == 1:
        row = [Fraction((-1) ** m) for m in range(n + 1)]
        eqs.append(make_row(row, 0, "eq", "alternating=0"))
    else:
        row = [Fraction(-((-1) ** m)) for m in range(n + 1)]
        ineqs.append(make_row(row, 0, "le", "alternating>=0"))
        row = [Fraction((-1) ** m) for m in range(n + 1)]
        ineqs.append(make_row(row, 2**n, "le", f"alternating<={2 ** n}"))

    for m in range(1, n + 1):
        row = zero.copy()
        row[m] = Fraction(-1)
        ineqs.append(make_row(row, 0, "le", f"S{m}>=0"))
    return eqs, ineqs


def _shadow_rows(n: int):
    table = kravchuk_table(n)
    rows = []
    for g in range(n + 1):
        coeffs = [Fraction(-((-1) ** m) * table[g][m]) for m in range(n + 1)]
        rows.append(make_row(coeffs, 0, "le", f"shadow:g={g}"))
    return rows


def _comb0(n: int, k: int) -> int:
    return math.comb(n, k) if 0 <= k <= n else 0


def _subset_rows(n: int):
    """Inequality families from summed reduced purities and overlaps."""
    rows = []
    for k in range(1, n + 1):
        chooser = [Fraction(_comb0(n - m, k - m)) for m in range(n + 1)]
        lo = Fraction(2**k, 2 ** min(k, n - k)) * math.comb(n, k)
        hi = Fraction(2**k) * math.comb(n, k)
        rows.append(make_row([-c for c in chooser], -lo, "le", f"puritysum-lo:k={k}"))
        rows.append(make_row(chooser, hi, "le", f"puritysum-hi:k={k}"))

        alt = [Fraction((-1) ** m * _comb0(n - m, k - m)) for m in range(n + 1)]
        rows.append(make_row([-c for c in alt], 0, "le", f"overlapsum-lo:k={k}"))
        rows.append(make_row(alt, hi, "le", f"overlapsum-hi:k={k}"))

        even = [Fraction(0)] * (n + 1)
        for m in range(0, k, 2):
            even[m] = Fraction(_comb0(n - m, k - m))
        bound = Fraction(3 + (-1) ** k) * Fraction(2**k, 4) * math.comb(n, k)
        rows.append(make_row(even, bound, "le", f"puri+overlap:k={k}"))
    return rows


_R6_EXTRA = (
    ((0, 10, 0, -3, 0, 0, 0), 0),
    ((0, 30, -8, -3, 0, 0, 0), 0),
    ((0, -10, 4, 3, 0, 0, 0), 60),
    ((0, -5, 1, 1, 0, 0, 0), 15),
    ((0, -2, 0, 1, 0, 0, 0), 8),
)


def _dedup(rows):
    seen = set()
    out = []
    for r in rows:
        key = (r.coeffs, r.rhs, r.sense)
        if key in seen:
            continue
        seen.add(key)
        out.append(r)
    return out


def build_region(n: int, which: str) -> RegionSpec:
    """Assemble the named constraint system for n qubits."""
    if not 1 <= n <= 12:
        raise ContractViolation(f"n={n} outside 1..12")
    name = which.strip()
    key = name.upper().replace(" ", "")
    eqs, ineqs = _identity_rows(n)
    if key == "R1":
        pass
    elif key == "R2":
        ineqs += _shadow_rows(n)
    elif key == "R3":
        ineqs += _subset_rows(n)
    elif key == "R":
        ineqs += _shadow_rows(n) + _subset_rows(n)
    elif key in ("R6-REDUCED", "R6REDUCED"):
        if n != 6:
            raise ContractViolation("R6-reduced is defined for n = 6 only")
        ineqs += _shadow_rows(n) + _subset_rows(n)
        for i, (coeffs, rhs) in enumerate(_R6_EXTRA, start=1):
            ineqs.append(make_row(coeffs, rhs, "le", f"r6-extra:{i}"))
    else:
        raise ContractViolation(f"unknown region name {which!r}")
    return RegionSpec(n, name, _dedup(eqs), _dedup(ineqs))


# ---------------------------------------------------------------------------
# Equality elimination
# ---------------------------------------------------------------------------


@dataclass
class EliminatedRegion:
    """Affine chart of a region: S = offset + basis . f over free coordinates."""

    region: RegionSpec
    free_vars: tuple  # variable indices m whose S_m remain free
    offset: tuple  # length n+1, Fractions
    basis: tuple  # (n+1) x len(free_vars), Fractions
    inequalities: list  # projected Rows over the free coordinates

    def lift(self, point: Sequence[Fraction]) -> tuple:
        """Full (S_0..S_n) vector of a point given in free coordinates."""
        return tuple(
            self.offset[m]
            + sum(self.basis[m][j] * Fraction(point[j]) for j in range(len(point)))
            for m in range(self.region.n_qubits + 1)
        )

    def substitution(self, m: int) -> tuple:
        """(constant, coeffs over free vars) expressing S_m on the chart."""
        return self.offset[m], self.basis[m]


def eliminate_equalities(region: RegionSpec) -> EliminatedRegion:
    """Solve the equality rows, highest sector index first.

    Pivoting on the largest remaining index expresses the high-weight
    sectors through the low-weight ones, matching the usual reduced
    presentation of these regions.
    """
    n = region.n_qubits
    rows = [([Fraction(c) for c in r.coeffs], Fraction(r.rhs)) for r in region.equalities]
    pivots: dict[int, tuple] = {}
    for coeffs, rhs in rows:
        coeffs = coeffs.copy()
        for var, (pc, pr) in pivots.items():
            factor = coeffs[var]
            if factor != 0:
                coeffs = [a - factor * b for a, b in zip(coeffs, pc)]
                rhs = rhs - factor * pr
        pivot_var = None
        for m in range(n, -1, -1):
            if coeffs[m] != 0:
                pivot_var = m
                break
        if pivot_var is None:
            if rhs != 0:
                raise InternalConsistencyError("inconsistent equality system")
            continue
        scale = coeffs[pivot_var]
        coeffs = [c / scale for c in coeffs]
        rhs = rhs / scale
        for var, (pc, pr) in pivots.items():
            factor = pc[pivot_var]
            if factor != 0:
                pivots[var] = (
                    [a - factor * b for a, b in zip(pc, coeffs)],
                    pr - factor * rhs,
                )
        pivots[pivot_var] = (coeffs, rhs)

    free = tuple(m for m in range(n + 1) if m not in pivots)
    offset = [Fraction(0)] * (n + 1)
    basis = [[Fraction(0)] * len(free) for _ in range(n + 1)]
    for j, m in enumerate(free):
        basis[m][j] = Fraction(1)
    for var, (coeffs, rhs) in pivots.items():
        offset[var] = rhs
        for j, m in enumerate(free):
            basis[var][j] = -coeffs[m]

    projected = []
    for r in region.inequalities:
        new_coeffs = [
            sum(r.coeffs[m] * basis[m][j] for m in range(n + 1))
            for j in range(len(free))
        ]
        new_rhs = r.rhs - sum(r.coeffs[m] * offset[m] for m in range(n + 1))
        if all(c == 0 for c in new_coeffs):
            if new_rhs < 0:
                raise InternalConsistencyError(
                    f"region infeasible: row {r.label} reduces to 0 <= {new_rhs}"
                )
            continue
        projected.append(make_row(new_coeffs, new_rhs, "le", r.label))
    # exact duplicates collapse; keep first label
    seen = {}
    for r in projected:
        key = (r.coeffs, r.rhs)
        if key not in seen:
            seen[key] = r
    return EliminatedRegion(
        region,
        free,
        tuple(offset),
        tuple(tuple(b) for b in basis),
        list(seen.values()),
    )


# ---------------------------------------------------------------------------
# Membership
# ---------------------------------------------------------------------------


@dataclass
class RegionReport:
    member: bool
    violated: list  # (label, float slack)
    margin: float  # smallest slack over all rows
    snap_error: float  # max |float - snapped rational|
    tight: list = field(default_factory=list)  # labels with zero slack

    def __bool__(self):
        return self.member


def snap_to_rationals(values, max_denominator: int = SNAP_DENOMINATOR):
    snapped = [Fraction(float(v)).limit_denominator(max_denominator) for v in values]
    err = max(abs(float(f) - float(v)) for f, v in zip(snapped, values))
    return snapped, err


def check_membership(sv, region: RegionSpec, tol: float = 1e-9) -> RegionReport:
    """Evaluate every row exactly after snapping the vector to rationals."""
    values = list(sv.values) if isinstance(sv, SectorVector) else list(sv)
    if len(values) != region.n_qubits + 1:
        raise ContractViolation("sector vector length does not match region")
    snapped, err = snap_to_rationals(values)
    violated = []
    tight = []
    margin = None
    for row in region.all_rows():
        slack = row.slack(snapped)
        fslack = float(slack)
        if margin is None or fslack < margin:
            margin = fslack
        if fslack < -tol:
            violated.append((row.label, fslack))
        elif slack == 0 and row.sense == "le":
            tight.append(row.label)
    return RegionReport(not violated, violated, margin, err, tight)


def membership_mask(sector_matrix: np.ndarray, region: RegionSpec, tol: float = 1e-7):
    """Float screening of many sector vectors at once; rows = states."""
    a_eq, b_eq, a_le, b_le = region.as_float_matrices()
    ok = np.ones(sector_matrix.shape[0], dtype=bool)
    if a_eq.size:
        ok &= np.abs(sector_matrix @ a_eq.T - b_eq).max(axis=1) <= tol
    if a_le.size:
        ok &= (sector_matrix @ a_le.T - b_le).max(axis=1) <= tol
    return ok


# ---------------------------------------------------------------------------
# Vertex enumeration
# ---------------------------------------------------------------------------


def _solve_square(rows, rhs):
    """Exact solve of a small square system; None if singular."""
    d = len(rhs)
    a = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    for col in range(d):
        pivot = next((r for r in range(col, d) if a[r][col] != 0), None)
        if pivot is None:
            return None
        a[col], a[pivot] = a[pivot], a[col]
        scale = a[col][col]
        a[col] = [v / scale for v in a[col]]
        for r in range(d):
            if r != col and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [v - factor * w for v, w in zip(a[r], a[col])]
    return tuple(a[i][d] for i in range(d))


def enumerate_vertices(region: RegionSpec) -> list:
    """Exact vertices of the equality-eliminated region, free coordinates.

    Brute-force intersection of all d-subsets of faces with feasibility
    filtering; the constraint counts here are small enough that nothing
    smarter is warranted.
    """
    elim = eliminate_equalities(region)
    d = len(elim.free_vars)
    if d == 0:
        return [()]
    if d > 3:
        raise CapabilityError(f"vertex enumeration capped at 3 free dims, got {d}")
    rows = elim.inequalities
    verts = set()
    for subset in itertools.combinations(rows, d):
        sol = _solve_square([r.coeffs for r in subset], [r.rhs for r in subset])
        if sol is None:
            continue
        if all(r.evaluate(sol) <= r.rhs for r in rows):
            verts.add(sol)
    return sorted(verts)


@dataclass
class Extremization:
    objective: tuple
    min_value: Fraction
    min_vertices: list
    max_value: Fraction
    max_vertices: list


def extremize_linear_on_vertices(region: RegionSpec, objective) -> Extremization:
    """Exact min and max of a linear functional of (S_0..S_n) over vertices.

    Ties are preserved: every attaining vertex is reported, since the
    extremal set is then the convex hull of those vertices.
    """
    obj = tuple(Fraction(c) for c in objective)
    if len(obj) != region.n_qubits + 1:
        raise ContractViolation("objective length does not match region")
    elim = eliminate_equalities(region)
    verts = enumerate_vertices(region)
    if not verts:
        raise InternalConsistencyError("region has no vertices; polytope empty?")
    scored = []
    for v in verts:
        full = elim.lift(v)
        scored.append((sum(c * s for c, s in zip(obj, full)), v))
    lo = min(s for s, _ in scored)
    hi = max(s for s, _ in scored)
    return Extremization(
        obj,
        lo,
        [v for s, v in scored if s == lo],
        hi,
        [v for s, v in scored if s == hi],
    )


# ---------------------------------------------------------------------------
# Linear functionals over sector space
# ---------------------------------------------------------------------------


def region_contains_exact(region: RegionSpec, full_vector) -> bool:
    """Exact membership of a full rational (S_0..S_n) vector."""
    s = [Fraction(v) for v in full_vector]
    return all(row.slack(s) >= 0 for row in region.all_rows())


def objective_sector(m: int, n: int) -> tuple:
    out = [Fraction(0)] * (n + 1)
    out[m] = Fraction(1)
    return tuple(out)


def objective_shadow(g: int, n: int) -> tuple:
    from .shadows import shadow_coefficient_row

    return shadow_coefficient_row(g, n)


def objective_linear_entropy(k: int, n: int) -> tuple:
    """Average linear entropy over k-subsets as an affine functional via S_0."""
    pref = Fraction(2 * math.comb(n, k))
    out = [Fraction(0)] * (n + 1)
    out[0] = pref
    for m in range(k + 1):
        out[m] -= pref * Fraction(math.comb(k, m), 2**k * math.comb(n, m))
    return tuple(out)


def qecc_detect(state) -> int:
    """Largest d with S_m = 0 for all m < d: the state is a ((n,1,d)) code.

    Equivalently d-1 is the uniformity order of the state.
    """
    from .sectors import SECTOR_ENUMERATION_CAP, sector_lengths, sector_lengths_via_purities

    sv = (
        sector_lengths(state)
        if state.n_qubits <= SECTOR_ENUMERATION_CAP
        else sector_lengths_via_purities(state)
    )
    d = 1
    while d <= state.n_qubits and abs(sv[d]) < 1e-9:
        d += 1
    return d
