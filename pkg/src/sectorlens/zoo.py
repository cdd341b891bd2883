"""Catalog of explicit extremal states and parametric boundary families.

Every entry carries exact amplitudes (integers over square roots and sixth
roots of unity, evaluated in double precision) plus, where known, the
published sector vector it is expected to reproduce.  ``verify_catalog``
recomputes everything and reports mismatches as data instead of failing:
printed values are never silently corrected.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .errors import ContractViolation
from .pauli import PureState, state_from_terms
from .sectors import SectorVector, sector_lengths, sector_lengths_via_purities

SQ2 = math.sqrt(2.0)
OMEGA = complex(math.cos(math.pi / 3), math.sin(math.pi / 3))  # exp(i pi/3)


# ---------------------------------------------------------------------------
# Elementary builders
# ---------------------------------------------------------------------------


def computational(bits: str) -> PureState:
    return state_from_terms(len(bits), {bits: 1.0})


def zero_state(n: int) -> PureState:
    return computational("0" * n)


def ghz(n: int, phi: float = math.pi / 2) -> PureState:
    amps = np.zeros(2**n, dtype=np.complex128)
    amps[0] = math.cos(phi / 2)
    amps[-1] = math.sin(phi / 2)
    return PureState(n, amps)


def dicke(n: int, alpha: int) -> PureState:
    """Symmetric state with alpha excitations, uniform over permutations."""
    if not 0 <= alpha <= n:
        raise ContractViolation(f"excitation number {alpha} outside 0..{n}")
    amps = np.zeros(2**n, dtype=np.complex128)
    coeff = 1.0 / math.sqrt(math.comb(n, alpha))
    for ones in combinations(range(n), alpha):
        idx = sum(1 << (n - 1 - q) for q in ones)
        amps[idx] = coeff
    return PureState(n, amps)


def _from_sign_terms(n: int, plus: str, minus: str = "", coeff: float = 1.0) -> PureState:
    terms: dict[str, complex] = {}
    for bits in plus.split():
        terms[bits] = coeff
    for bits in minus.split():
        terms[bits] = -coeff
    return state_from_terms(n, terms)


# ---------------------------------------------------------------------------
# Named extremal states
# ---------------------------------------------------------------------------


def tetra() -> PureState:
    amps = (
        0.5 * dicke(4, 0).amps
        + 0.5j * SQ2 * dicke(4, 2).amps
        + 0.5 * dicke(4, 4).amps
    )
    return PureState(4, amps)


def ame52() -> PureState:
    return _from_sign_terms(
        5,
        plus="00000 00011 01101 01110 10101 11000",
        minus="10110 11011",
    )


def psi5() -> PureState:
    return _from_sign_terms(
        5,
        plus="00000 00011 00110 10000 10011 10101",
        minus="00101 10110",
    )


_AME62_EDGES = ((1, 4), (1, 5), (1, 6), (2, 3), (2, 5), (2, 6), (3, 4), (3, 6), (4, 5))


def ame62() -> PureState:
    """Absolutely maximally entangled 6-qubit state, built as a graph state.

    Amplitudes are exactly (-1)^(number of selected edge pairs both set)/8 on
    the 3-regular graph above; all three-qubit marginals are maximally
    mixed, giving sectors (1, 0, 0, 0, 45, 0, 18).
    """
    idx = np.arange(64)
    bits = (idx[:, None] >> (5 - np.arange(6))[None, :]) & 1
    sign = np.ones(64)
    for i, j in _AME62_EDGES:
        sign = sign * (1 - 2 * bits[:, i - 1] * bits[:, j - 1])
    return PureState(6, sign / 8.0)


def ame62_printed() -> PureState:
    """The 25-term closed form as published; kept only as a discrepancy record.

    This term list is not 3-uniform (S_1 > 0), so it cannot be the intended
    AME state; ``ame62`` supplies an exact equivalent construction.  Sector
    lengths and reduced-state functionals are local-unitary invariants, so
    every derived table value is unaffected by the substitution.
    """
    return _from_sign_terms(
        6,
        plus=(
            "000000 000011 000101 000110 001001 001111 010001 010100 "
            "011000 011101 100111 101000 101011 101110 110000 110011 "
            "110101 111000"
        ),
        minus="001010 001100 010111 011011 011111 100001 100100",
    )


def psi6() -> PureState:
    return _from_sign_terms(
        6,
        plus="000000 000111 001110 010101 100100 110001 110110 111111",
        minus="001001 010010 011011 011100 100011 101010 101101 111000",
    )


def pyramid() -> PureState:
    amps = -0.5 * dicke(6, 0).amps + (math.sqrt(3.0) / 2) * dicke(6, 4).amps
    return PureState(6, amps)


def psi7() -> PureState:
    amps = (
        2 * SQ2 * dicke(7, 0).amps
        + math.sqrt(14.0) * dicke(7, 3).amps
        + math.sqrt(14.0) * dicke(7, 6).amps
    ) / 6.0
    return PureState(7, amps)


def psi_m7() -> PureState:
    return _from_sign_terms(
        7,
        plus=(
            "0000000 0000011 0001101 0001110 0010001 0011100 "
            "0101000 0101011 0110100 0111010 "
            "1001001 1001010 1010101 1011011 "
            "1100001 1100010 1101100 1101111 1110000 1111101"
        ),
        minus=(
            "0010010 0011111 0100101 0100110 0110111 0111001 "
            "1000100 1000111 1010110 1011000 1110011 1111110"
        ),
    )


def psi7b() -> PureState:
    s32 = math.sqrt(1.5)
    terms: dict[str, complex] = {
        "0000001": s32,
        "0000100": -s32,
        "0001010": 1.0,
        "0101000": 1.0,
        "0110000": 1.0,
        "0011000": 1.0,
        "1100000": OMEGA,
        "0010010": OMEGA**2,
        "1010000": OMEGA**3,
        "0100010": OMEGA**4,
        "1000010": OMEGA**5,
        "1001000": OMEGA**5,
    }
    return state_from_terms(7, terms)


def _grouped_product(groups_a, labels_a, groups_b, labels_b, n=8):
    """Sum of (A_i (x) B_i) with kets given on two disjoint label tuples."""
    amps = np.zeros(2**n, dtype=np.complex128)
    for terms_a, terms_b in zip(groups_a, groups_b):
        for bits_a, coeff_a in terms_a:
            for bits_b, coeff_b in terms_b:
                word = [""] * n
                for lab, bit in zip(labels_a, bits_a):
                    word[lab - 1] = bit
                for lab, bit in zip(labels_b, bits_b):
                    word[lab - 1] = bit
                amps[int("".join(word), 2)] += coeff_a * coeff_b
    norm = np.linalg.norm(amps)
    return PureState(n, amps / norm)


def _signed(spec: str):
    out = []
    for token in spec.split():
        if token.startswith("-"):
            out.append((token[1:], -1.0))
        else:
            out.append((token.lstrip("+"), 1.0))
    return out


def psi_m8() -> PureState:
    """3-uniform 8-qubit minimizer; published on qubit labels (1,2,7,8)(3,4,5,6)."""
    groups_a = [
        _signed("0000 0011 -1101 1110"),
        _signed("-0001 0010 1100 1111"),
        _signed("0100 -0111 1001 1010"),
        _signed("0101 0110 1000 -1011"),
    ]
    groups_b = [
        _signed("0000 0111 -1001 1110"),
        _signed("0001 0110 1000 -1111"),
        _signed("-0011 0100 1010 1101"),
        _signed("-0010 0101 -1011 -1100"),
    ]
    return _grouped_product(groups_a, (1, 2, 7, 8), groups_b, (3, 4, 5, 6))


def tetra8() -> PureState:
    amps = (
        math.sqrt(7.0) * dicke(8, 0).amps
        + 2 * dicke(8, 3).amps
        + 4 * dicke(8, 6).amps
    ) / (3 * math.sqrt(3.0))
    return PureState(8, amps)


def psi8_1() -> PureState:
    """3-uniform 8-qubit state on labels (1,2,5,6)(3,4,7,8); maximizes S_6."""
    groups_a = [
        _signed("0000 1111"),
        _signed("0011 1100"),
        _signed("0101 1010"),
        _signed("0110 1001"),
    ]
    groups_b = [
        _signed("0000 0011 1100 1111"),
        _signed("0110 0101 1010 1001"),
        _signed("0110 -0101 -1010 1001"),
        _signed("0000 -0011 -1100 1111"),
    ]
    return _grouped_product(groups_a, (1, 2, 5, 6), groups_b, (3, 4, 7, 8))


# ---------------------------------------------------------------------------
# Parametric families
# ---------------------------------------------------------------------------


def psi4_family(theta: float, phi: float) -> PureState:
    amps = (
        math.cos(theta / 2) * ghz(4, phi).amps
        + 1j * math.sin(theta / 2) * dicke(4, 2).amps
    )
    return PureState(4, amps)


def boundary5_family(x: float, y: float, t: float) -> PureState:
    """Three-parameter 5-qubit family with vanishing one-body sector."""
    z = t * x - (t + 1) * y
    amps = np.array(
        [0, -t * z, 0, x, y, 0, t * z, 0, z, 0, z, 0, 0, y, 0, z,
         -z, 0, -y, 0, 0, z, 0, z, 0, t * z, 0, y, -x, 0, t * z, 0],
        dtype=np.complex128,
    )
    norm = np.linalg.norm(amps)
    if abs(norm - 1.0) > 1e-9:
        raise ContractViolation(
            f"(x, y, t)=({x}, {y}, {t}) violates the family normalization: "
            f"|psi|^2 = {norm ** 2}"
        )
    return PureState(5, amps / norm)


def right_boundary5_low(eta: float) -> PureState:
    """Covers the S_2 = 2 S_1 boundary for S_1 in [0, 1]."""
    c, s = math.cos(eta) / 2, math.sin(eta) / 2
    terms = {
        "00011": c, "00110": c, "10001": -c, "10100": c,
        "01000": s, "01101": -s, "11010": s, "11111": s,
    }
    return state_from_terms(5, terms)


def right_boundary5_high(eta: float) -> PureState:
    """Covers the S_2 = 2 S_1 boundary for S_1 in [1, 5]."""
    amps = math.cos(eta / 2) * psi5().amps.copy()
    amps[0] += math.sin(eta / 2) / SQ2
    norm_const = 2.0 / math.sqrt(math.sin(eta) + math.cos(eta) + 3.0)
    return PureState(5, norm_const * amps)


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------


@dataclass
class ZooEntry:
    name: str
    n_qubits: int
    builder: object
    expected_sectors: tuple | None = None  # (S_0..S_n) as Fractions, published
    uniformity: int | None = None  # published k-uniformity claim
    discrepancy: str | None = None  # known defect in the published value
    notes: str = ""


def _fr(*vals) -> tuple:
    return tuple(Fraction(v) for v in vals)


CATALOG: dict[str, ZooEntry] = {}


def _register(entry: ZooEntry):
    CATALOG[entry.name] = entry


_register(ZooEntry("tetra", 4, tetra, _fr(1, 0, 2, 8, 5), uniformity=1))
_register(ZooEntry("AME(5,2)", 5, ame52, _fr(1, 0, 0, 10, 15, 6), uniformity=2))
_register(ZooEntry("psi5", 5, psi5, _fr(1, 1, 2, 10, 13, 5)))
_register(ZooEntry("AME(6,2)", 6, ame62, _fr(1, 0, 0, 0, 45, 0, 18), uniformity=3))
_register(
    ZooEntry(
        "AME(6,2)-printed",
        6,
        ame62_printed,
        _fr(1, 0, 0, 0, 45, 0, 18),
        discrepancy=(
            "the 25-term published expansion is not 3-uniform as printed "
            "(S_1 != 0); superseded by the exact graph-state construction "
            "under the name AME(6,2)"
        ),
    )
)
_register(ZooEntry("psi6", 6, psi6, _fr(1, 0, 0, 8, 21, 24, 10), uniformity=2))
_register(
    ZooEntry(
        "pyramid",
        6,
        pyramid,
        _fr(1, 0, Fraction(27, 5), 8, Fraction(51, 5), 24, Fraction(77, 5)),
        uniformity=1,
    )
)
_register(ZooEntry("psi7", 7, psi7, _fr(1, 0, 7, 14, 7, 28, 49, 22), uniformity=1))
_register(
    ZooEntry("psiM7", 7, psi_m7, _fr(1, 0, 0, 3, 29, 42, 34, 19), uniformity=2)
)
_register(
    ZooEntry(
        "psi7b",
        7,
        psi7b,
        _fr(
            1,
            Fraction(25, 13),
            Fraction(9, 13),
            Fraction(125, 13),
            35,
            Fraction(603, 13),
            Fraction(355, 13),
            Fraction(79, 13),
        ),
    )
)
_register(
    ZooEntry(
        "psiM8", 8, psi_m8, _fr(1, 0, 0, 0, 26, 64, 72, 64, 29), uniformity=3
    )
)
_register(
    ZooEntry(
        "tetra(8)",
        8,
        tetra8,
        _fr(1, 0, 0, 3, 29, 42, 34, 19),
        uniformity=1,
        discrepancy=(
            "published sector vector has 7 entries summing to 127 != 255 "
            "(it repeats the 7-qubit psiM7 vector) and the published "
            "2-uniformity claim fails (S_2 = 28/3); the state is 1-uniform "
            "with sectors (1, 0, 28/3, 144/7, 310/21, 160/7, 1396/21, "
            "592/7, 255/7) by direct enumeration"
        ),
    )
)
_register(
    ZooEntry(
        "tetra*tetra",
        8,
        lambda: tetra().tensor(tetra()),
        _fr(1, 0, 4, 16, 14, 32, 84, 80, 25),
    )
)
_register(
    ZooEntry(
        "psi8_1", 8, psi8_1, _fr(1, 0, 0, 0, 42, 0, 168, 0, 45), uniformity=3
    )
)


_TOKEN_BUILDERS = {
    "tetra": tetra,
    "ame(5,2)": ame52,
    "ame52": ame52,
    "psi5": psi5,
    "ame(6,2)": ame62,
    "ame62": ame62,
    "psi6": psi6,
    "pyramid": pyramid,
    "psi7": psi7,
    "psim7": psi_m7,
    "psi7b": psi7b,
    "psim8": psi_m8,
    "tetra(8)": tetra8,
    "tetra8": tetra8,
    "psi8_1": psi8_1,
}

_GHZ_RE = re.compile(r"^ghz\((\d+)(?:,([^)]+))?\)$")
_DICKE_RE = re.compile(r"^dicke\((\d+),(\d+)\)$")
_BASIS_RE = re.compile(r"^[01]+(\^\d+)?$")


def _build_token(token: str) -> PureState:
    t = token.strip().lower()
    if t in _TOKEN_BUILDERS:
        return _TOKEN_BUILDERS[t]()
    m = _GHZ_RE.match(t)
    if m:
        n = int(m.group(1))
        phi = float(m.group(2)) if m.group(2) else math.pi / 2
        return ghz(n, phi)
    m = _DICKE_RE.match(t)
    if m:
        return dicke(int(m.group(1)), int(m.group(2)))
    m = _BASIS_RE.match(t)
    if m:
        if "^" in t:
            bits, _, reps = t.partition("^")
            return computational(bits * int(reps))
        return computational(t)
    raise ContractViolation(f"unknown zoo state {token!r}")


def build(name: str, **params) -> PureState:
    """Build a catalog state, a parametric family, or a tensor product.

    Tensor products join tokens with '*', e.g. "AME(5,2)*0" or
    "GHZ(3)*GHZ(3)"; basis tokens like "0^3" pad with |000>.
    """
    key = name.strip()
    low = key.lower()
    if low in ("psi4", "psi4family"):
        return psi4_family(params["theta"], params["phi"])
    if low in ("boundary5", "family55"):
        return boundary5_family(params["x"], params["y"], params["t"])
    if low in ("family58", "right5low"):
        return right_boundary5_low(params["eta"])
    if low in ("family60", "right5high"):
        return right_boundary5_high(params["eta"])
    parts = key.split("*")
    state = _build_token(parts[0])
    for part in parts[1:]:
        state = state.tensor(_build_token(part))
    return state


def family_scan(name: str, grid) -> list:
    """Sweep a parametric family; returns [(params, SectorVector), ...].

    Families carry built-in relation checks: the five-qubit boundary family
    must keep S_1 = 0, and the two right-boundary families must follow the
    published closed forms for (S_1, S_2), all to 1e-9.
    """
    low = name.strip().lower()
    out = []
    for point in grid:
        if low in ("family55", "boundary5"):
            x, y, t = point
            sv = sector_lengths(boundary5_family(x, y, t))
            if abs(sv[1]) > 1e-9:
                raise ContractViolation(f"S_1 = {sv[1]} != 0 at (x,y,t)={point}")
        elif low in ("family58", "right5low"):
            (eta,) = point if isinstance(point, tuple) else (point,)
            sv = sector_lengths(right_boundary5_low(eta))
            want = math.cos(2 * eta) ** 2
            if abs(sv[1] - want) > 1e-9 or abs(sv[2] - 2 * want) > 1e-9:
                raise ContractViolation(
                    f"(S_1, S_2) = ({sv[1]}, {sv[2]}) != ({want}, {2 * want}) "
                    f"at eta={eta}"
                )
            point = (eta,)
        elif low in ("family60", "right5high"):
            (eta,) = point if isinstance(point, tuple) else (point,)
            sv = sector_lengths(right_boundary5_high(eta))
            den = (math.sin(eta) + math.cos(eta) + 3.0) ** 2
            want = (
                28 * math.sin(eta)
                - 6 * math.sin(2 * eta)
                - 4 * math.cos(eta)
                - math.cos(2 * eta)
                + 37
            ) / den
            if abs(sv[2] - want) > 1e-9 or abs(2 * sv[1] - want) > 1e-9:
                raise ContractViolation(
                    f"(S_1, S_2) = ({sv[1]}, {sv[2]}) breaks S_2 = 2 S_1 = {want} "
                    f"at eta={eta}"
                )
            point = (eta,)
        elif low in ("psi4", "psi4family"):
            theta, phi = point
            sv = sector_lengths(psi4_family(theta, phi))
        elif low.startswith("ghz"):
            n = int(low[4:].rstrip(")"))
            (phi,) = point if isinstance(point, tuple) else (point,)
            sv = sector_lengths(ghz(n, phi))
            point = (phi,)
        else:
            raise ContractViolation(f"unknown family {name!r}")
        out.append((point, sv))
    return out


@dataclass
class CatalogReport:
    checked: int = 0
    matches: list = field(default_factory=list)
    discrepancies: list = field(default_factory=list)  # (name, expected, computed)

    @property
    def clean(self) -> bool:
        return not self.discrepancies


def verify_catalog(tol: float = 1e-9) -> CatalogReport:
    """Recompute sectors for every entry and diff against published values."""
    report = CatalogReport()
    for name, entry in CATALOG.items():
        state = entry.builder()
        sv = (
            sector_lengths(state)
            if state.n_qubits <= 8
            else sector_lengths_via_purities(state)
        )
        report.checked += 1
        if entry.expected_sectors is None:
            continue
        expected = [float(v) for v in entry.expected_sectors]
        if len(expected) != state.n_qubits + 1 or any(
            abs(a - b) > tol for a, b in zip(expected, sv.values)
        ):
            report.discrepancies.append((name, tuple(expected), sv.values))
        else:
            report.matches.append(name)
    return report
