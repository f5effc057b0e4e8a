"""
ADE root data and chambers on the Z(O_y) = -1 slice of a flopping contraction.

A point of the slice is a complexified class beta + i*omega in N^1(Y/X) x Q,
written in the basis dual to the exceptional curves, so beta.C and omega.C for
a curve class C (in simple-root coordinates) are plain dot products. The
central charge of a class (ch2 = m, ch3-part = n) is (beta + i*omega).m - n.

Toda's complement is the set of points with (beta + i*omega).C not an integer
for every root C, i.e. no root has omega.C = 0 and beta.C in Z.

The conifold (one curve C with normal bundle O(-1) + O(-1)) is modelled at
the level of classes: K = Z + Z with O_C(k) = (1, k + 1) and O_y = (0, 1).
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

from cache_utils import EnumerationCache, cache_vectors, get_cached_vectors
from console_utils import debug, status
from errors import ConfigError, ContractError, DimensionError
from exact_utils import ExactComplex, format_rational, parse_int_matrix, parse_rational_list
from heart_stability import Phase
from lattice_core import IntLattice, Matrix, RationalVector, Vector, enumerate_norm, reflect

AMPLE = "AmpleConeU"
FLOP_SIDE = "FlopSide"
PERVERSE_FACE = "PerverseFace"
HIGHER_FACE = "HigherFace"
EXCLUDED = "Excluded"

# largest coefficient of the highest root, which bounds every root coordinate
ROOT_BOXES = {"A": 1, "D": 2, "E6": 3, "E7": 4, "E8": 6}


def cartan_a(n: int) -> Matrix:
    return _cartan_from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cartan_d(n: int) -> Matrix:
    """D_n, Bourbaki numbering: chain 1..n-1 with node n attached to n-2."""
    return _cartan_from_edges(n, [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)])


def cartan_e(n: int) -> Matrix:
    """E_n, Bourbaki numbering: chain 1-3-4-...-n with node 2 attached to 4."""
    return _cartan_from_edges(n, [(0, 2)] + [(i, i + 1) for i in range(2, n - 1)] + [(1, 3)])


def _cartan_from_edges(n: int, edges: Sequence[Tuple[int, int]]) -> Matrix:
    m = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j in edges:
        m[i][j] = m[j][i] = -1
    return tuple(tuple(row) for row in m)


def _parse_type(name: str) -> Tuple[str, int]:
    name = name.strip().upper().replace("_", "")
    if len(name) < 2 or name[0] not in "ADE" or not name[1:].isdigit():
        raise ConfigError(f"Unknown ADE type {name!r}; expected e.g. A3, D4, E8")
    family, n = name[0], int(name[1:])
    valid = (family == "A" and n >= 1) or (family == "D" and n >= 4) or (family == "E" and n in (6, 7, 8))
    if not valid:
        raise ContractError(f"There is no root system of type {family}{n}", "ade-type")
    return family, n


def expected_root_count(name: str) -> int:
    family, n = _parse_type(name)
    if family == "A":
        return n * (n + 1)
    if family == "D":
        return 2 * n * (n - 1)
    return {6: 72, 7: 126, 8: 240}[n]


def root_box(name: str) -> int:
    family, n = _parse_type(name)
    return ROOT_BOXES[family] if family in ROOT_BOXES else ROOT_BOXES[f"{family}{n}"]


def identify_dynkin(cartan: Sequence[Sequence[int]]) -> str:
    """
    Name the simply-laced Dynkin diagram of a Cartan matrix, e.g. "D5".

    Raises:
        ContractError: unless cartan is the Cartan matrix of a connected ADE diagram
    """
    n = len(cartan)
    if n < 1:
        raise ContractError("Cartan matrix is empty", "cartan")
    for i in range(n):
        if len(cartan[i]) != n or cartan[i][i] != 2:
            raise ContractError("Cartan matrix needs 2 on the diagonal", "cartan")
        for j in range(n):
            if i != j and (cartan[i][j] not in (0, -1) or cartan[i][j] != cartan[j][i]):
                raise ContractError("Cartan matrix off-diagonal entries must be symmetric 0 or -1", "cartan")
    neighbours = [[j for j in range(n) if j != i and cartan[i][j] == -1] for i in range(n)]
    edges = sum(len(nb) for nb in neighbours) // 2
    seen, stack = {0}, [0]
    while stack:
        for j in neighbours[stack.pop()]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    if len(seen) != n or edges != n - 1:
        raise ContractError("Dynkin diagram must be a connected tree", "cartan")
    branch = [i for i in range(n) if len(neighbours[i]) >= 3]
    if not branch:
        return f"A{n}"
    if len(branch) > 1 or len(neighbours[branch[0]]) > 3:
        raise ContractError("Dynkin diagram is not of ADE type", "cartan")
    centre = branch[0]
    arms = []
    for start in neighbours[centre]:
        length, prev, node = 1, centre, start
        while len(neighbours[node]) == 2:
            prev, node = node, next(j for j in neighbours[node] if j != prev)
            length += 1
        arms.append(length)
    arms.sort()
    if arms[:2] == [1, 1]:
        return f"D{n}"
    if arms[:2] == [1, 2] and arms[2] in (2, 3, 4):
        return f"E{n}"
    raise ContractError(f"Dynkin diagram with arms {arms} is not of ADE type", "cartan")


@dataclass(frozen=True)
class ADEConfig:
    """A root system: its type, Cartan matrix and the enumerated roots."""

    name: str
    cartan: Matrix
    roots: Tuple[Vector, ...]

    @property
    def rank(self) -> int:
        return len(self.cartan)

    @property
    def lattice(self) -> IntLattice:
        return IntLattice.of(self.cartan)

    def to_json(self) -> Dict[str, Any]:
        return {"type": self.name, "cartan": [list(r) for r in self.cartan],
                "root_count": len(self.roots), "roots": [list(r) for r in self.roots]}


def enumerate_roots(name: str, cartan: Matrix, workers: int = 1) -> List[Vector]:
    """
    The norm-2 vectors of the root lattice within the type's box, cached.

    Raises:
        ContractError: if the count disagrees with the closed form for the type
    """
    box = root_box(name)
    key = EnumerationCache.make_key("roots", gram=[list(r) for r in cartan], norm=2, box=box)
    cached = get_cached_vectors(key)
    if cached is not None:
        found = [tuple(v) for v in cached]
    else:
        status(f"🔍 Enumerating roots of {name} (box {box})")
        found = enumerate_norm(IntLattice.of(cartan), 2, box, workers=workers)
        cache_vectors(key, [list(v) for v in found], f"{name} roots")
    expected = expected_root_count(name)
    if len(found) != expected:
        raise ContractError(f"{name} has {len(found)} roots in box {box}, expected {expected}", "root-count")
    return found


def ade_config(name: str, workers: int = 1) -> ADEConfig:
    """Build the configuration for a type such as "A2", "D4" or "E8"."""
    family, n = _parse_type(name)
    cartan = {"A": cartan_a, "D": cartan_d, "E": cartan_e}[family](n)
    label = f"{family}{n}"
    return ADEConfig(label, cartan, tuple(enumerate_roots(label, cartan, workers)))


def ade_config_from_cartan(cartan: Sequence[Sequence[int]], workers: int = 1) -> ADEConfig:
    """Build a configuration from an explicit Cartan matrix in any node order."""
    rows = tuple(tuple(int(x) for x in row) for row in cartan)
    label = identify_dynkin(rows)
    return ADEConfig(label, rows, tuple(enumerate_roots(label, rows, workers)))


def config_from_json(data: Dict[str, Any], workers: int = 1) -> ADEConfig:
    """{"type": "A2"} or {"cartan": [[...]]}."""
    if not isinstance(data, dict):
        raise ConfigError("Root system JSON must be an object")
    if "cartan" in data:
        return ade_config_from_cartan(parse_int_matrix(data["cartan"], "cartan"), workers)
    if "type" in data:
        return ade_config(str(data["type"]), workers)
    raise ConfigError("Root system JSON needs \"type\" or \"cartan\"")


def roots(config: ADEConfig) -> List[Vector]:
    """The root set, lexicographically sorted."""
    return list(config.roots)


def positive_roots(config: ADEConfig) -> List[Vector]:
    """Roots with nonnegative simple-root coordinates, lexicographically sorted."""
    return [r for r in config.roots if all(x >= 0 for x in r)]


def is_weyl_invariant(config: ADEConfig) -> bool:
    """Roots are closed under negation and under reflection in each root."""
    root_set = set(config.roots)
    lattice = config.lattice
    if any(tuple(-x for x in r) not in root_set for r in config.roots):
        return False
    return all(reflect(lattice, a, r, mode="root") in root_set for a in config.roots for r in config.roots)


@dataclass(frozen=True)
class SlicePoint:
    """beta + i*omega on the Z(O_y) = -1 slice, in coordinates dual to the curves."""

    beta: RationalVector
    omega: RationalVector

    def __post_init__(self):
        object.__setattr__(self, "beta", tuple(Fraction(x) for x in self.beta))
        object.__setattr__(self, "omega", tuple(Fraction(x) for x in self.omega))
        if len(self.beta) != len(self.omega):
            raise DimensionError("beta and omega must have the same length")

    @classmethod
    def of(cls, beta: Any, omega: Any) -> "SlicePoint":
        """A rank-1 point from two rationals."""
        return cls((Fraction(beta),), (Fraction(omega),))

    @property
    def rank(self) -> int:
        return len(self.beta)

    def twisted(self, k: int = 1) -> "SlicePoint":
        """Tensoring by a line bundle of degree k on each curve: beta -> beta + k."""
        return SlicePoint(tuple(b + k for b in self.beta), self.omega)

    def to_json(self) -> Dict[str, List[str]]:
        return {"beta": [format_rational(x) for x in self.beta],
                "omega": [format_rational(x) for x in self.omega]}

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "SlicePoint":
        if not isinstance(data, dict) or "beta" not in data or "omega" not in data:
            raise ConfigError("Slice point JSON needs \"beta\" and \"omega\"")
        beta, omega = data["beta"], data["omega"]
        beta = beta if isinstance(beta, list) else [beta]
        omega = omega if isinstance(omega, list) else [omega]
        return cls(tuple(parse_rational_list(beta)), tuple(parse_rational_list(omega)))


def _dot(x: Sequence[Fraction], c: Sequence[int]) -> Fraction:
    return sum((xi * ci for xi, ci in zip(x, c)), Fraction(0))


@dataclass(frozen=True)
class TodaResult:
    in_complement: bool
    witness: Optional[Vector] = None


def in_toda_complement(config: ADEConfig, p: SlicePoint) -> TodaResult:
    """
    Whether (beta + i*omega).C is not an integer for every root C.

    On failure the witness is the first violating positive root (lexicographic);
    C and -C violate together, so the positive roots suffice.
    """
    if p.rank != config.rank:
        raise DimensionError(f"Slice point of rank {p.rank} for a rank {config.rank} root system")
    for c in positive_roots(config):
        if _dot(p.omega, c) == 0 and _dot(p.beta, c).denominator == 1:
            return TodaResult(False, c)
    return TodaResult(True)


@dataclass(frozen=True)
class ChamberDescriptor:
    """
    Region of a slice point and its line-bundle twist index floor(beta.C) per curve.

    face is the index k of a PerverseFace(k); note explains regions the model
    does not classify.
    """

    region: str
    twist: Tuple[int, ...]
    face: Optional[int] = None
    witness: Optional[Vector] = None
    note: str = ""

    @property
    def label(self) -> str:
        if self.region == PERVERSE_FACE:
            return f"{PERVERSE_FACE}({self.face})"
        return self.region

    def to_json(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"region": self.label, "twist": list(self.twist)}
        if self.witness is not None:
            data["witness"] = list(self.witness)
        if self.note:
            data["note"] = self.note
        return data


_A1: Optional[ADEConfig] = None


def conifold_config() -> ADEConfig:
    global _A1
    if _A1 is None:
        _A1 = ade_config("A1")
    return _A1


def classify_conifold(p: SlicePoint) -> ChamberDescriptor:
    """
    Chamber of a conifold slice point: Excluded off Toda's complement, then
    AmpleConeU (omega > 0), FlopSide (omega < 0) or PerverseFace(k) (omega = 0,
    k < beta < k + 1). The twist is floor(beta).
    """
    if p.rank != 1:
        raise DimensionError("The conifold slice is one-dimensional")
    beta, omega = p.beta[0], p.omega[0]
    twist = (math.floor(beta),)
    toda = in_toda_complement(conifold_config(), p)
    if not toda.in_complement:
        return ChamberDescriptor(EXCLUDED, twist, witness=toda.witness)
    if omega > 0:
        return ChamberDescriptor(AMPLE, twist)
    if omega < 0:
        return ChamberDescriptor(FLOP_SIDE, twist, note="flop equivalence not constructed")
    return ChamberDescriptor(PERVERSE_FACE, twist, face=twist[0])


def classify_chamber(config: ADEConfig, p: SlicePoint) -> ChamberDescriptor:
    """
    Chamber of a slice point for any rank, relative to the simple roots.

    Two or more simple roots with omega.alpha = 0 give a higher-codimension
    face, which is reported as HigherFace and not classified further.
    """
    toda = in_toda_complement(config, p)
    twist = tuple(math.floor(b) for b in p.beta)
    if not toda.in_complement:
        return ChamberDescriptor(EXCLUDED, twist, witness=toda.witness)
    if all(w > 0 for w in p.omega):
        return ChamberDescriptor(AMPLE, twist)
    zeros = [i for i, w in enumerate(p.omega) if w == 0]
    if all(w >= 0 for w in p.omega):
        if len(zeros) == 1:
            return ChamberDescriptor(PERVERSE_FACE, twist, face=twist[zeros[0]])
        return ChamberDescriptor(HIGHER_FACE, twist,
                                 note="higher-codimension face: normalization not classified")
    return ChamberDescriptor(FLOP_SIDE, twist, note="flop equivalence not constructed")


class ConifoldClass(NamedTuple):
    """A class (m, n) in K(D(Y/X)) = N_1 + Z."""

    m: int
    n: int

    def __add__(self, other: "ConifoldClass") -> "ConifoldClass":  # type: ignore[override]
        return ConifoldClass(self.m + other.m, self.n + other.n)

    def __neg__(self) -> "ConifoldClass":
        return ConifoldClass(-self.m, -self.n)

    def shift(self, k: int = 1) -> "ConifoldClass":
        return -self if k % 2 else self

    def __str__(self) -> str:
        return f"({self.m}, {self.n})"


def curve_sheaf(k: int) -> ConifoldClass:
    """Class of O_C(k)."""
    return ConifoldClass(1, k + 1)


POINT_CLASS = ConifoldClass(0, 1)


def conifold_charge(p: SlicePoint, c: ConifoldClass) -> ExactComplex:
    """Z(m, n) = (beta + i*omega) m - n."""
    if p.rank != 1:
        raise DimensionError("The conifold slice is one-dimensional")
    return ExactComplex(p.beta[0] * c.m - c.n, p.omega[0] * c.m)


def coh_heart_witness(p: SlicePoint) -> Optional[int]:
    """
    For omega = 0, the largest k with Z(O_C(k)) = beta - k - 1 on the positive
    real axis: a sheaf of phase 0, so Coh is not the heart there. None when
    omega != 0.
    """
    if p.rank != 1:
        raise DimensionError("The conifold slice is one-dimensional")
    if p.omega[0] != 0:
        return None
    return math.ceil(p.beta[0]) - 2


@dataclass(frozen=True)
class SkyscraperStatus:
    status: str
    factors: Tuple[ConifoldClass, ...] = ()

    def to_json(self) -> Dict[str, Any]:
        return {"status": self.status, "factors": [list(f) for f in self.factors]}


def skyscraper_status(p: SlicePoint) -> SkyscraperStatus:
    """
    Stability of O_y. On AmpleConeU it is simple, hence stable. On
    PerverseFace(k) it is strictly semistable with factors O_C(k - 1)[1] and
    O_C(k), both of phase 1.
    """
    chamber = classify_conifold(p)
    if chamber.region == AMPLE:
        return SkyscraperStatus("stable")
    if chamber.region == PERVERSE_FACE:
        k = chamber.face
        return SkyscraperStatus("strictly semistable", (curve_sheaf(k - 1).shift(), curve_sheaf(k)))
    return SkyscraperStatus("not modelled")


@dataclass
class SequenceReport:
    checks: List[Tuple[str, bool]]

    @property
    def ok(self) -> bool:
        return all(passed for _, passed in self.checks)

    def to_json(self) -> Dict[str, Any]:
        return {"ok": self.ok, "checks": [{"check": name, "passed": passed} for name, passed in self.checks]}


def conifold_sequences_check() -> SequenceReport:
    """
    Class-level checks of the three conifold sequences
    (a) O_C(-1) -> O_C -> O_y, (b) O_C -> O_y -> O_C(-1)[1],
    (c) O_C(-1)[1] -> E -> O_C with [E] = [O_y], and of the stability of O_y
    on either side of the face omega = 0.
    """
    o_c, o_c_minus = curve_sheaf(0), curve_sheaf(-1)
    o_c_minus_shift = o_c_minus.shift()
    checks = [
        ("(a) [O_C(-1)] + [O_y] = [O_C]", o_c_minus + POINT_CLASS == o_c),
        ("(b) [O_C] + [O_C(-1)[1]] = [O_y]", o_c + o_c_minus_shift == POINT_CLASS),
        ("(c) [O_C(-1)[1]] + [O_C] = [E] = [O_y]", o_c_minus_shift + o_c == POINT_CLASS),
    ]

    face = SlicePoint.of(Fraction(1, 2), 0)
    z_sub, z_quot = conifold_charge(face, o_c_minus_shift), conifold_charge(face, o_c)
    equal_phase = (z_sub.in_semi_closed_upper_half_plane() and z_quot.in_semi_closed_upper_half_plane()
                   and Phase(z_sub) == Phase(z_quot) == Phase(ExactComplex.of(-1, 0)))
    checks.append(("O_y strictly semistable at (1/2, 0): factors of phase 1", equal_phase))
    checks.append(("skyscraper_status at (1/2, 0)", skyscraper_status(face).factors == (o_c_minus_shift, o_c)))

    ample = SlicePoint.of(Fraction(1, 2), 1)
    z_point = conifold_charge(ample, POINT_CLASS)
    checks.append(("Z(O_y) = -1 at (1/2, 1)", z_point == ExactComplex.of(-1, 0)))
    # O_C(-1)[1] has charge with negative imaginary part, so it is not in the heart
    outside = not conifold_charge(ample, o_c_minus_shift).in_semi_closed_upper_half_plane()
    checks.append(("O_y stable at (1/2, 1): no destabilizing decomposition in the heart",
                   outside and skyscraper_status(ample).status == "stable"))
    debug(f"Conifold checks: {sum(p for _, p in checks)}/{len(checks)} passed")
    return SequenceReport(checks)


@dataclass(frozen=True)
class ComplementRow:
    beta: Fraction
    omega: Fraction
    in_complement: bool
    chamber: ChamberDescriptor


COMPLEMENT_GRID_HEADER = ["beta", "omega", "in_complement", "region", "twist"]
# bump when the CSV columns change
COMPLEMENT_GRID_VERSION = 1


def complement_grid(betas: Sequence[Fraction], omegas: Sequence[Fraction]) -> List[ComplementRow]:
    """Conifold chamber of every (beta, omega) on a rational grid, beta-major."""
    config = conifold_config()
    rows = []
    for beta in betas:
        for omega in omegas:
            p = SlicePoint.of(beta, omega)
            rows.append(ComplementRow(Fraction(beta), Fraction(omega),
                                      in_toda_complement(config, p).in_complement, classify_conifold(p)))
    return rows


def complement_csv_rows(rows: Sequence[ComplementRow]) -> List[List[str]]:
    return [[format_rational(r.beta), format_rational(r.omega), "true" if r.in_complement else "false",
             r.chamber.label, str(r.chamber.twist[0])] for r in rows]


if __name__ == "__main__":
    for name in ("A1", "A2", "D4", "E6"):
        config = ade_config(name)
        print(f"{name}: {len(roots(config))} roots")
    print(classify_conifold(SlicePoint.of(Fraction(1, 2), 1)).label)
    print(classify_conifold(SlicePoint.of(Fraction(3, 2), 0)).label)
    print(f"Z(O_C) at (1/2, 0): {conifold_charge(SlicePoint.of(Fraction(1, 2), 0), curve_sheaf(0)).format()}")
    print(f"conifold sequences ok: {conifold_sequences_check().ok}")
