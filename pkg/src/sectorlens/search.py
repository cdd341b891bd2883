"""Nonlinear optimization of sector functionals over the pure-state sphere.

Projected gradient descent with Armijo backtracking and Haar-random
restarts.  Objectives are low-degree polynomials in the state amplitudes
(sector weights are quartic), so restart coverage matters more than local
method sophistication; every restart is an independent, seeded task and the
reduction over restarts is deterministic (ties break to the lowest index).

``SECTORLENS_THREADS`` > 1 runs restarts in a process pool; results are
identical to the sequential path because seeding is per-restart.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import CapabilityError, ContractViolation, InternalConsistencyError
from .pauli import PureState
from .sectors import (
    SectorVector,
    matrix_from_coefficients_fast,
    pauli_coefficients_fast,
    weight_tensor,
)
from .shadows import kravchuk_table

GRAD_TOL = 1e-9
MAX_ITERS = 10_000
_PLATEAU_WINDOW = 250


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("SECTORLENS_THREADS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# Objectives
# ---------------------------------------------------------------------------


class SectorWeightObjective:
    """f(psi) = sum_m w_m S_m(psi); covers sectors, shadows, linear entropy."""

    def __init__(self, n: int, weights: Sequence[float]):
        if len(weights) != n + 1:
            raise ContractViolation("need one weight per sector 0..n")
        self.n = n
        self.weights = np.asarray(weights, dtype=float)
        self.weight_mask = self.weights[weight_tensor(n)].reshape(-1)

    def value(self, amps: np.ndarray) -> float:
        x = pauli_coefficients_fast(np.outer(amps, amps.conj()), self.n)
        return float(np.dot(self.weight_mask, x * x))

    def value_and_grad(self, amps: np.ndarray):
        x = pauli_coefficients_fast(np.outer(amps, amps.conj()), self.n)
        val = float(np.dot(self.weight_mask, x * x))
        mat = matrix_from_coefficients_fast(self.weight_mask * x, self.n)
        return val, 2.0 * (mat @ amps)


class PurityOverlapObjective:
    """f(psi) = Tr(rho_A^2) + R_{rho_A} for a fixed qubit subset A."""

    def __init__(self, n: int, subset: Sequence[int]):
        labels = tuple(sorted(set(int(q) for q in subset)))
        if not labels or not 1 <= len(labels) <= n - 1:
            raise ContractViolation(f"|A| must lie in 1..{n - 1}")
        if any(q < 1 or q > n for q in labels):
            raise ContractViolation(f"labels {labels} outside 1..{n}")
        self.n = n
        self.labels = labels
        self.k = len(labels)
        self.keep_axes = [q - 1 for q in labels]
        self.rest_axes = [a for a in range(n) if a not in self.keep_axes]
        dim = 2**self.k
        idx = np.arange(dim)
        self._rev = idx ^ (dim - 1)
        self._sign = 1.0 - 2.0 * (np.bitwise_count(idx) & 1)

    def _marginal(self, amps: np.ndarray) -> np.ndarray:
        tens = amps.reshape((2,) * self.n)
        mat = np.transpose(tens, self.keep_axes + self.rest_axes).reshape(
            2**self.k, -1
        )
        return mat @ mat.conj().T

    def _tilde(self, rho: np.ndarray) -> np.ndarray:
        return (
            self._sign[:, None]
            * self._sign[None, :]
            * rho[np.ix_(self._rev, self._rev)].conj()
        )

    def value(self, amps: np.ndarray) -> float:
        rho = self._marginal(amps)
        tilde = self._tilde(rho)
        val = np.sum(np.abs(rho) ** 2) + np.trace(rho @ tilde).real
        return float(val)

    def _embed_apply(self, op: np.ndarray, amps: np.ndarray) -> np.ndarray:
        tens = amps.reshape((2,) * self.n)
        tens = np.tensordot(
            op.reshape((2,) * (2 * self.k)),
            tens,
            axes=(list(range(self.k, 2 * self.k)), self.keep_axes),
        )
        tens = np.moveaxis(tens, list(range(self.k)), self.keep_axes)
        return tens.reshape(-1)

    def value_and_grad(self, amps: np.ndarray):
        rho = self._marginal(amps)
        tilde = self._tilde(rho)
        val = float(np.sum(np.abs(rho) ** 2) + np.trace(rho @ tilde).real)
        grad = 2.0 * self._embed_apply(rho, amps) + 2.0 * self._embed_apply(
            tilde, amps
        )
        return val, grad


def sector_weights(n: int, m: int) -> np.ndarray:
    w = np.zeros(n + 1)
    w[m] = 1.0
    return w


def shadow_weights(n: int, g: int) -> np.ndarray:
    table = kravchuk_table(n)
    return np.array([(-1) ** m * table[g][m] / 2**n for m in range(n + 1)])


def entropy_weights(n: int, k: int) -> np.ndarray:
    """Average linear entropy as sector weights, constant folded into S_0."""
    pref = 2 * math.comb(n, k)
    w = np.zeros(n + 1)
    w[0] = pref
    for m in range(k + 1):
        w[m] -= pref * math.comb(k, m) / (2**k * math.comb(n, m))
    return w


def make_objective(n: int, spec):
    """Materialize an objective from a picklable spec.

    Specs: ("sector", m) | ("shadow", g) | ("entropy", k) |
    ("weights", [w_0..w_n]) | ("purity_overlap", (labels...)).
    """
    kind, arg = spec
    if kind == "sector":
        return SectorWeightObjective(n, sector_weights(n, arg))
    if kind == "shadow":
        return SectorWeightObjective(n, shadow_weights(n, arg))
    if kind == "entropy":
        return SectorWeightObjective(n, entropy_weights(n, arg))
    if kind == "weights":
        return SectorWeightObjective(n, np.asarray(arg, dtype=float))
    if kind == "purity_overlap":
        return PurityOverlapObjective(n, arg)
    raise ContractViolation(f"unknown objective spec {spec!r}")


# ---------------------------------------------------------------------------
# Search driver
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SearchProblem:
    n_qubits: int
    objective: tuple  # spec, see make_objective
    direction: str = "min"  # "min" | "max"
    restarts: int = 64
    seed: int = 0
    max_iters: int = MAX_ITERS
    grad_tol: float = GRAD_TOL

    def __post_init__(self):
        if self.direction not in ("min", "max"):
            raise ContractViolation("direction must be 'min' or 'max'")
        if self.n_qubits > 8 and self.objective[0] != "purity_overlap":
            raise CapabilityError("sector objectives capped at n = 8")
        if self.n_qubits > 10:
            raise CapabilityError("search capped at n = 10")


@dataclass
class SearchResult:
    problem: SearchProblem
    best_value: float
    best_state: PureState
    trace: list  # (restart index, value, iterations, converged)
    sectors: SectorVector | None = None
    region_report: object = None


def _run_restart(args):
    n, spec, direction, seed_entropy, max_iters, grad_tol, start = args
    obj = make_objective(n, spec)
    sign = 1.0 if direction == "min" else -1.0
    if start is not None:
        amps = np.asarray(start, dtype=np.complex128)
    else:
        rng = np.random.default_rng(np.random.SeedSequence(seed_entropy))
        vec = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
        amps = vec / np.linalg.norm(vec)

    f, g = obj.value_and_grad(amps)
    f *= sign
    g = sign * g
    g_t = g - np.real(np.vdot(amps, g)) * amps
    step = 0.1
    prev_amps = None
    prev_gt = None
    iters = 0
    converged = False
    best_f = f
    stall = 0
    for iters in range(1, max_iters + 1):
        gnorm2 = float(np.real(np.vdot(g_t, g_t)))
        if math.sqrt(gnorm2) < grad_tol:
            converged = True
            break
        # plateau stop: degenerate optimal manifolds keep the projected
        # gradient pinned around its numerical floor, so a long stretch
        # without objective improvement ends the restart (best-so-far wins)
        if f < best_f - 1e-12 * max(1.0, abs(best_f)):
            best_f = f
            stall = 0
        else:
            stall += 1
            if stall >= _PLATEAU_WINDOW:
                break
        # Barzilai-Borwein trial step from the last accepted move, then
        # Armijo backtracking; BB steps cut the iteration count hard on
        # these quartic landscapes while staying inside plain projected GD.
        if prev_amps is not None:
            s = amps - prev_amps
            y = g_t - prev_gt
            sy = float(np.real(np.vdot(s, y)))
            if sy > 1e-18:
                step = float(np.real(np.vdot(s, s))) / sy
            step = min(max(step, 1e-10), 1e6)
        accepted = False
        trial = step
        while trial > 1e-18:
            cand = amps - trial * g_t
            cand = cand / np.linalg.norm(cand)
            f_cand = sign * obj.value(cand)
            if f_cand <= f - 1e-4 * trial * gnorm2:
                accepted = True
                break
            trial *= 0.5
        if not accepted:
            break
        prev_amps, prev_gt = amps, g_t
        amps = cand
        f, g = obj.value_and_grad(amps)
        f *= sign
        g = sign * g
        g_t = g - np.real(np.vdot(amps, g)) * amps
        step = trial
    return sign * f, amps, iters, converged


def optimize(problem: SearchProblem, starts: Sequence[np.ndarray] | None = None) -> SearchResult:
    """Best-of-restarts projected gradient search.

    ``starts`` may inject explicit initial amplitude vectors (e.g. catalog
    states); remaining restarts draw Haar-random seeds.  The reported value
    is recomputed from the returned state and cross-checked, and the
    optimum's sector vector is screened against the monogamy polytope.
    """
    seeds = np.random.SeedSequence(problem.seed).spawn(problem.restarts)
    jobs = []
    for i in range(problem.restarts):
        start = None
        if starts is not None and i < len(starts):
            start = np.asarray(starts[i], dtype=np.complex128)
        jobs.append(
            (
                problem.n_qubits,
                problem.objective,
                problem.direction,
                seeds[i].entropy if start is None else 0,
                problem.max_iters,
                problem.grad_tol,
                start,
            )
        )
    workers = worker_count()
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_run_restart, jobs))
    else:
        outcomes = [_run_restart(j) for j in jobs]

    sign = 1.0 if problem.direction == "min" else -1.0
    best_idx = min(
        range(len(outcomes)), key=lambda i: (sign * outcomes[i][0], i)
    )
    best_value, best_amps, _, _ = outcomes[best_idx]
    state = PureState(problem.n_qubits, best_amps)
    recomputed = make_objective(problem.n_qubits, problem.objective).value(state.amps)
    if abs(recomputed - best_value) > 1e-9:
        raise InternalConsistencyError(
            f"reported optimum {best_value} does not recompute: {recomputed}"
        )
    trace = [
        (i, val, iters, conv) for i, (val, _, iters, conv) in enumerate(outcomes)
    ]

    sectors = None
    region_report = None
    if problem.n_qubits <= 8:
        from .regions import build_region, check_membership
        from .sectors import sector_lengths

        sectors = sector_lengths(state)
        region_report = check_membership(
            sectors, build_region(problem.n_qubits, "R"), tol=1e-7
        )
        if not region_report.member:
            raise InternalConsistencyError(
                f"optimizer output violates the monogamy polytope: "
                f"{region_report.violated}"
            )
    return SearchResult(problem, best_value, state, trace, sectors, region_report)


def conjecture3_prediction(n: int, k: int) -> float:
    """Conjectured minimum of Tr(rho_A^2) + R_{rho_A} for |A| = k."""
    return 2.0 ** (k - n) if 2 * k > n else 2.0 ** (-k + 1)


def optimize_purity_overlap(
    n: int, subset, restarts: int = 64, seed: int = 0
) -> tuple[SearchResult, float, float]:
    """Minimize the marginal purity+overlap functional over pure states.

    Returns (result, predicted minimum, gap to prediction).
    """
    labels = tuple(sorted(set(int(q) for q in subset)))
    problem = SearchProblem(
        n, ("purity_overlap", labels), "min", restarts=restarts, seed=seed
    )
    res = optimize(problem)
    pred = conjecture3_prediction(n, len(labels))
    return res, pred, res.best_value - pred


def gap_probe(n: int, weights, direction: str = "min", restarts: int = 64, seed: int = 0) -> dict:
    """Compare the polytope LP optimum against the best pure state found.

    A nonzero gap is evidence (never proof) that the polytope is missing
    constraints at this qubit count.
    """
    if n not in (4, 5, 6, 7, 8):
        raise ContractViolation("gap probe supported for n = 4..8")
    from fractions import Fraction

    from .lp import extremize_over_region
    from .regions import build_region

    lp_val, lp_point = extremize_over_region(
        build_region(n, "R"),
        [Fraction(w).limit_denominator(10**6) for w in weights],
        direction,
    )
    problem = SearchProblem(n, ("weights", list(weights)), direction, restarts, seed)
    res = optimize(problem)
    gap = (
        res.best_value - float(lp_val)
        if direction == "min"
        else float(lp_val) - res.best_value
    )
    return {
        "n": n,
        "direction": direction,
        "lp_value": lp_val,
        "search_value": res.best_value,
        "gap": gap,
        "search_result": res,
    }
