"""Exact-rational linear programming over sector-length polytopes.

A hand-rolled two-phase simplex with Bland's anti-cycling rule; problem
sizes here stay below ~20 variables and ~100 rows, where exact Fractions
are cheap and remove every tolerance question from certification.
Equality rows are eliminated by rational Gaussian substitution before the
simplex runs, mirroring how the reduced region presentations are derived.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CapabilityError, CertificationError, ContractViolation
from .regions import RegionSpec, _comb0
from .sectors import SectorVector

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass
class LPProblem:
    """maximize c.x subject to A_ub x <= b_ub, A_eq x = b_eq, x >= 0."""

    c: list
    a_ub: list = field(default_factory=list)
    b_ub: list = field(default_factory=list)
    a_eq: list = field(default_factory=list)
    b_eq: list = field(default_factory=list)

    @property
    def n_vars(self) -> int:
        return len(self.c)


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Fraction | None
    x: list | None


# ---------------------------------------------------------------------------
# Simplex core
# ---------------------------------------------------------------------------


class _Tableau:
    """Dense exact simplex tableau with Bland's anti-cycling rule."""

    def __init__(self, rows, rhs, basis):
        self.rows = rows  # list of lists of Fractions
        self.rhs = rhs
        self.basis = basis  # basis[i] = column index basic in row i
        self.obj = None  # reduced-cost row
        self.obj_rhs = ZERO

    def set_objective(self, cost):
        """Load a maximization objective, reduced through the current basis."""
        width = len(self.rows[0])
        obj = [-Fraction(cost[j]) if j < len(cost) else ZERO for j in range(width)]
        obj_rhs = ZERO
        for i, bv in enumerate(self.basis):
            factor = obj[bv]
            if factor != 0:
                obj = [v - factor * w for v, w in zip(obj, self.rows[i])]
                obj_rhs -= factor * self.rhs[i]
        self.obj = obj
        self.obj_rhs = obj_rhs

    def pivot(self, row, col):
        scale = self.rows[row][col]
        self.rows[row] = [v / scale for v in self.rows[row]]
        self.rhs[row] /= scale
        for r in range(len(self.rows)):
            if r != row:
                factor = self.rows[r][col]
                if factor != 0:
                    self.rows[r] = [
                        v - factor * w for v, w in zip(self.rows[r], self.rows[row])
                    ]
                    self.rhs[r] -= factor * self.rhs[row]
        if self.obj is not None:
            factor = self.obj[col]
            if factor != 0:
                self.obj = [v - factor * w for v, w in zip(self.obj, self.rows[row])]
                self.obj_rhs -= factor * self.rhs[row]
        self.basis[row] = col

    def run(self, allowed_cols):
        """Bland-rule iterations; returns "optimal" or "unbounded"."""
        while True:
            col = next(
                (j for j in allowed_cols if self.obj[j] < 0),
                None,
            )
            if col is None:
                return "optimal"
            best_row = None
            best_ratio = None
            for i, row in enumerate(self.rows):
                if row[col] > 0:
                    ratio = self.rhs[i] / row[col]
                    if (
                        best_ratio is None
                        or ratio < best_ratio
                        or (ratio == best_ratio and self.basis[i] < self.basis[best_row])
                    ):
                        best_ratio = ratio
                        best_row = i
            if best_row is None:
                return "unbounded"
            self.pivot(best_row, col)


def _solve_inequality_lp(a, b, c):
    """maximize c.x, a x <= b, x >= 0, two-phase with exact arithmetic."""
    m = len(a)
    n = len(c)
    # columns: structural 0..n-1, slack n..n+m-1, artificials appended for
    # rows whose slack basis would start infeasible (negative rhs)
    neg = [i for i in range(m) if b[i] < 0]
    n_art = len(neg)
    width = n + m + n_art
    rows = []
    rhs = []
    basis = []
    art_col = {}
    for i in range(m):
        row = [ZERO] * width
        sign = -1 if i in neg else 1
        for j in range(n):
            row[j] = sign * Fraction(a[i][j])
        row[n + i] = Fraction(sign)
        rows.append(row)
        rhs.append(sign * Fraction(b[i]))
        basis.append(n + i)
    for k, i in enumerate(neg):
        col = n + m + k
        rows[i][col] = ONE
        basis[i] = col
        art_col[i] = col

    t = _Tableau(rows, rhs, basis)
    cols_all = list(range(width))
    if n_art:
        phase1 = [ZERO] * width
        for i in neg:
            phase1[art_col[i]] = Fraction(-1)
        t.set_objective(phase1)
        status = t.run(cols_all)
        if status != "optimal" or t.obj_rhs != 0:
            return "infeasible", None, None
        # drive residual artificials (all at value 0) out of the basis
        art_set = set(art_col.values())
        for i in range(m):
            if t.basis[i] in art_set:
                col = next(
                    (j for j in range(n + m) if t.rows[i][j] != 0),
                    None,
                )
                if col is not None:
                    t.pivot(i, col)
        keep = [i for i in range(m) if t.basis[i] not in art_set]
        t.rows = [t.rows[i] for i in keep]
        t.rhs = [t.rhs[i] for i in keep]
        t.basis = [t.basis[i] for i in keep]

    cost = [Fraction(v) for v in c] + [ZERO] * (width - n)
    t.set_objective(cost)
    status = t.run(list(range(n + m)))
    if status != "optimal":
        return status, None, None
    x = [ZERO] * n
    for i, bv in enumerate(t.basis):
        if bv < n:
            x[bv] = t.rhs[i]
    return "optimal", t.obj_rhs, x


def _eliminate_equalities(problem: LPProblem):
    """Substitute equality rows; returns reduced c/a/b, free map, and lift."""
    n = problem.n_vars
    rows = [
        ([Fraction(v) for v in row], Fraction(rhs))
        for row, rhs in zip(problem.a_eq, problem.b_eq)
    ]
    pivots: dict[int, tuple] = {}
    for coeffs, rhs in rows:
        coeffs = coeffs.copy()
        for var, (pc, pr) in pivots.items():
            f = coeffs[var]
            if f != 0:
                coeffs = [a - f * p for a, p in zip(coeffs, pc)]
                rhs = rhs - f * pr
        pivot = next((j for j in range(n - 1, -1, -1) if coeffs[j] != 0), None)
        if pivot is None:
            if rhs != 0:
                return None
            continue
        scale = coeffs[pivot]
        coeffs = [v / scale for v in coeffs]
        rhs /= scale
        for var, (pc, pr) in pivots.items():
            f = pc[pivot]
            if f != 0:
                pivots[var] = ([a - f * b for a, b in zip(pc, coeffs)], pr - f * rhs)
        pivots[pivot] = (coeffs, rhs)

    free = [j for j in range(n) if j not in pivots]
    # x_pivot = rhs - sum over free of coeff * x_free
    def lift(f_point):
        full = [ZERO] * n
        for j, v in zip(free, f_point):
            full[j] = Fraction(v)
        for var, (pc, pr) in pivots.items():
            full[var] = pr - sum(pc[j] * full[j] for j in free)
        return full

    # objective and inequality rows over free vars; pivot positivity -> rows
    def project_row(row):
        row = [Fraction(v) for v in row]
        out = []
        const = ZERO
        for var, (pc, pr) in pivots.items():
            f = row[var]
            if f != 0:
                const += f * pr
        for j in free:
            coeff = row[j]
            for var, (pc, pr) in pivots.items():
                if row[var] != 0:
                    coeff -= row[var] * pc[j]
            out.append(coeff)
        return out, const

    c_red, c_const = project_row(problem.c)
    a_red = []
    b_red = []
    for row, rhs in zip(problem.a_ub, problem.b_ub):
        r, const = project_row(row)
        a_red.append(r)
        b_red.append(Fraction(rhs) - const)
    for var, (pc, pr) in pivots.items():
        # x_var >= 0  <=>  sum_j pc[j] x_free <= pr
        a_red.append([pc[j] for j in free])
        b_red.append(pr)
    return c_red, c_const, a_red, b_red, free, lift


def solve_lp(problem: LPProblem) -> LPResult:
    """Exact optimum of an LPProblem; optimal points returned as Fractions."""
    reduced = _eliminate_equalities(problem)
    if reduced is None:
        return LPResult("infeasible", None, None)
    c_red, c_const, a_red, b_red, free, lift = reduced
    if not free:
        point = lift(())
        if any(v < 0 for v in point):
            return LPResult("infeasible", None, None)
        for row, rhs in zip(problem.a_ub, problem.b_ub):
            if sum(Fraction(a) * v for a, v in zip(row, point)) > Fraction(rhs):
                return LPResult("infeasible", None, None)
        value = sum(Fraction(ci) * v for ci, v in zip(problem.c, point))
        return LPResult("optimal", value, point)
    status, value, x = _solve_inequality_lp(a_red, b_red, c_red)
    if status != "optimal":
        return LPResult(status, None, None)
    full = lift(x)
    total = value + c_const
    # exact certificate: the returned point must satisfy every constraint
    assert all(v >= 0 for v in full)
    for row, rhs in zip(problem.a_ub, problem.b_ub):
        assert sum(Fraction(a) * v for a, v in zip(row, full)) <= Fraction(rhs)
    for row, rhs in zip(problem.a_eq, problem.b_eq):
        assert sum(Fraction(a) * v for a, v in zip(row, full)) == Fraction(rhs)
    assert sum(Fraction(ci) * v for ci, v in zip(problem.c, full)) == total
    return LPResult("optimal", total, full)


# ---------------------------------------------------------------------------
# The max-S_N primal system
# ---------------------------------------------------------------------------


def build_maxSN_primal(n: int) -> LPProblem:
    """Primal LP whose optimum is the largest achievable n-body sector length.

    Variables S_1..S_n >= 0; one inequality row per odd purity+overlap
    family index k = 2q+1 < n, and the antisymmetrized MacWilliams rows as
    equalities for k = 0..n/2-1.  Odd n is out of scope: the odd bound
    2^{n-1} is cited from the literature, not re-derived here.
    """
    if n % 2 != 0:
        raise CapabilityError(
            "primal system defined for even n; odd-n max S_N = 2^(n-1) is cited"
        )
    if not 4 <= n <= 16:
        raise ContractViolation(f"n={n} outside 4..16")
    c = [ZERO] * n
    c[n - 1] = ONE
    a_ub = []
    b_ub = []
    for q in range(1, n // 2):
        row = [
            Fraction(_comb0(n - m, 2 * q + 1 - m)) if m % 2 == 0 else ZERO
            for m in range(1, n + 1)
        ]
        a_ub.append(row)
        b_ub.append(Fraction((2 ** (2 * q) - 1) * math.comb(n, 2 * q + 1)))
    a_eq = []
    b_eq = []
    for k in range(0, n // 2):
        row = [
            Fraction(_comb0(n - m, k), 2 ** (n - k))
            - Fraction(_comb0(n - m, n - k), 2**k)
            for m in range(1, n + 1)
        ]
        a_eq.append(row)
        b_eq.append(
            (Fraction(1, 2**k) - Fraction(1, 2 ** (n - k))) * math.comb(n, k)
        )
    return LPProblem(c, a_ub, b_ub, a_eq, b_eq)


def max_SN(n: int) -> tuple[Fraction, list]:
    """Certified maximum of S_n for even n, with an attaining point."""
    res = solve_lp(build_maxSN_primal(n))
    if res.status != "optimal":
        raise CertificationError(f"max S_N LP returned {res.status}")
    witness = verify_dual_witness(n) if n % 4 in (0, 2) else None
    if witness is not None and witness.objective != res.value:
        raise CertificationError(
            f"primal optimum {res.value} differs from dual witness {witness.objective}"
        )
    return res.value, res.x


# ---------------------------------------------------------------------------
# Dual witness
# ---------------------------------------------------------------------------


@dataclass
class DualWitness:
    n: int
    y: dict  # q -> Fraction, q = 1..n/2-1
    y_prime: dict  # k -> Fraction, k = 0..n/2-1
    q_values: list  # Q_m for m = 1..n
    objective: Fraction


def verify_dual_witness(n: int) -> DualWitness:
    """Instantiate the closed-form dual point and check feasibility exactly.

    Verifies Q_m >= c_m for all m, the proven vanishing pattern of the
    slacks, and that the dual objective equals 2^(n-1) + 1.  Any failure
    raises CertificationError naming the offending index.
    """
    if n % 2 != 0 or not 4 <= n <= 24:
        raise ContractViolation("dual witness defined for even n in 4..24")
    half = n // 2
    y = {}
    for q in range(1, half):
        if q <= n // 4 - 1:
            y[q] = ZERO
        elif n % 4 == 2 and q == (n - 2) // 4:
            y[q] = Fraction(2) ** (1 - half)
        elif q >= (n + 2) // 4:
            y[q] = Fraction(2) ** (-2 * q + 1)
        else:
            y[q] = ZERO
    y_prime = {0: Fraction(2**n)}
    for k in range(1, half):
        y_prime[k] = Fraction((-1) ** k * (2 ** (n - k) - 2**k + 1) - 1)

    def a_q(q, m):
        return Fraction(_comb0(n - m, 2 * q + 1 - m)) if m % 2 == 0 else ZERO

    def a_k(k, m):
        return Fraction(_comb0(n - m, k), 2 ** (n - k)) - Fraction(
            _comb0(n - m, n - k), 2**k
        )

    q_values = []
    for m in range(1, n + 1):
        qm = sum(a_q(q, m) * y[q] for q in range(1, half)) + sum(
            a_k(k, m) * y_prime[k] for k in range(0, half)
        )
        c_m = ONE if m == n else ZERO
        if qm < c_m:
            raise CertificationError(f"dual row m={m} infeasible: Q_m = {qm} < {c_m}")
        r = n - m
        if 1 <= r <= half - 1 and qm != 0:
            raise CertificationError(f"Q_{m} = {qm}, expected 0 for r={r} < n/2")
        if r >= half and r % 2 == 0 and m >= 1 and qm != 0:
            raise CertificationError(f"Q_{m} = {qm}, expected 0 for even r={r}")
        q_values.append(qm)
    if q_values[-1] != ONE:
        raise CertificationError(f"Q_n = {q_values[-1]} != c_n = 1")

    objective = sum(
        Fraction((2 ** (2 * q) - 1) * math.comb(n, 2 * q + 1)) * y[q]
        for q in range(1, half)
    ) + sum(
        (Fraction(1, 2**k) - Fraction(1, 2 ** (n - k))) * math.comb(n, k) * y_prime[k]
        for k in range(0, half)
    )
    if objective != 2 ** (n - 1) + 1:
        raise CertificationError(
            f"dual objective {objective} differs from 2^{n - 1}+1"
        )
    return DualWitness(n, y, y_prime, q_values, objective)


# ---------------------------------------------------------------------------
# Region-backed LPs and the small-sector bounds
# ---------------------------------------------------------------------------


def lp_from_region(region: RegionSpec, objective) -> LPProblem:
    """LP over S_1..S_n from a RegionSpec, substituting S_0 = 1."""
    n = region.n_qubits
    obj = [Fraction(v) for v in objective]
    if len(obj) == n + 1:
        obj = obj[1:]
    a_ub, b_ub, a_eq, b_eq = [], [], [], []
    for row in region.all_rows():
        coeffs = [Fraction(c) for c in row.coeffs]
        rhs = Fraction(row.rhs) - coeffs[0]
        body = coeffs[1:]
        if all(v == 0 for v in body):
            continue
        if row.sense == "eq":
            a_eq.append(body)
            b_eq.append(rhs)
        else:
            a_ub.append(body)
            b_ub.append(rhs)
    return LPProblem(obj, a_ub, b_ub, a_eq, b_eq)


def extremize_over_region(
    region: RegionSpec, objective, direction: str = "max"
) -> tuple[Fraction, list]:
    """Exact optimum of a linear sector functional over a region."""
    obj = [Fraction(v) for v in objective]
    if len(obj) == region.n_qubits + 1:
        const = obj[0]
        body = obj[1:]
    else:
        const = ZERO
        body = obj
    sign = 1 if direction == "max" else -1
    prob = lp_from_region(region, [sign * v for v in body])
    res = solve_lp(prob)
    if res.status != "optimal":
        raise CertificationError(f"LP over region returned {res.status}")
    return sign * res.value + const, res.x


def bound_S1_S2(n: int) -> tuple[Fraction, Fraction]:
    """Tight upper bounds on the one- and two-body sector lengths.

    Derived by the exact combination of the k=2 purity/overlap family rows
    (for S_1) and the k=3 even-sector row (for S_2); for n = 2 the S_2
    bound instead comes from the purity sum rule with S_1 >= 0.
    """
    if n < 2:
        raise ContractViolation("need n >= 2")
    # k=2 rows: [C(n,2) S_0 + (n-1) S_1 + S_2 <= 4 C(n,2)] plus
    # [-C(n,2) S_0 + (n-1) S_1 - S_2 <= 0]; summing cancels S_0 and S_2.
    s1 = Fraction(4 * math.comb(n, 2), 2 * (n - 1))
    if s1 != n:
        raise CertificationError(f"S_1 bound evaluated to {s1}, expected {n}")
    if n >= 3:
        # k=3 even-sector row: C(n,3) S_0 + C(n-2,1) S_2 <= 4 C(n,3)
        s2 = Fraction(3 * math.comb(n, 3), n - 2)
        if s2 != math.comb(n, 2):
            raise CertificationError(f"S_2 bound evaluated to {s2}")
    else:
        s2 = Fraction(3)  # purity sum S_1 + S_2 = 3 with S_1 >= 0
    return s1, s2
