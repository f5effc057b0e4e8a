"""
Mukai lattice of a K3 surface.

N(X) = Z + NS(X) + Z with basis (r, D, s) and pairing
((r1, D1, s1), (r2, D2, s2)) = D1.D2 - r1 s2 - r2 s1. A coherent sheaf E has
Mukai vector v(E) = (r(E), c1(E), ch2(E) + r(E)) and Riemann-Roch reads
chi(E, F) = -(v(E), v(F)).

A period point is a complex vector in N(X) x Q, stored as its real and
imaginary parts. It lies in P(X) when they span a positive definite 2-plane,
and in P0(X) when in addition no (-2)-class is orthogonal to both.
"""

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import sympy

from cache_utils import EnumerationCache, cache_vectors, get_cached_vectors
from console_utils import debug, status
from errors import ConfigError, ContractError, DimensionError
from exact_utils import format_rational, parse_int, parse_int_matrix, parse_rational, parse_rational_list
from lattice_core import (IntLattice, Matrix, RationalVector, Vector, enumerate_norm, is_isometry,
                          pair, reflect, reflection_matrix, signature)

NOT_POSITIVE = "NotPositive"
ON_WALL = "OnWall"
IN_P0_PLUS = "InP0Plus"
IN_P0_MINUS = "InP0Minus"


@dataclass(frozen=True)
class K3Model:
    """
    Picard number rho and the Gram matrix of NS(X).

    NS(X) must be even of signature (1, rho - 1); the Mukai lattice built from
    it is then even of signature (2, rho), which is checked again.
    """

    rho: int
    ns_gram: Matrix
    lattice: IntLattice = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.ns_gram)
        object.__setattr__(self, "ns_gram", rows)
        if not 1 <= self.rho <= 20:
            raise ContractError(f"Picard number must be in 1..20, got {self.rho}", "picard-range")
        if len(rows) != self.rho:
            raise DimensionError(f"NS Gram matrix has {len(rows)} rows, expected rho = {self.rho}")
        ns = IntLattice.of(rows)
        if not ns.even:
            raise ContractError("NS(X) must be an even lattice", "even")
        if signature(ns) != (1, self.rho - 1, 0):
            raise ContractError(f"NS(X) has signature {signature(ns)}, expected (1, {self.rho - 1}, 0)",
                                "ns-signature")
        n = self.rho + 2
        gram = [[0] * n for _ in range(n)]
        gram[0][n - 1] = gram[n - 1][0] = -1
        for i in range(self.rho):
            for j in range(self.rho):
                gram[i + 1][j + 1] = rows[i][j]
        lattice = IntLattice.of(gram)
        if not lattice.even or signature(lattice) != (2, self.rho, 0):
            raise ContractError(f"Mukai lattice has signature {signature(lattice)}, expected (2, {self.rho}, 0)",
                                "mukai-signature")
        object.__setattr__(self, "lattice", lattice)

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "K3Model":
        """Parse {"rho": r, "ns_gram": [[...]]}."""
        if not isinstance(data, dict) or "ns_gram" not in data:
            raise ConfigError("K3 model JSON needs \"rho\" and \"ns_gram\"")
        gram = parse_int_matrix(data["ns_gram"], "ns_gram")
        return cls(parse_int(data.get("rho", len(gram))), tuple(tuple(row) for row in gram))

    def to_json(self) -> Dict[str, Any]:
        return {"rho": self.rho, "ns_gram": [list(row) for row in self.ns_gram]}

    def ns_pair(self, d1: Sequence[Any], d2: Sequence[Any]) -> Fraction:
        return sum((Fraction(d1[i]) * self.ns_gram[i][j] * Fraction(d2[j])
                    for i in range(self.rho) for j in range(self.rho)), Fraction(0))


@dataclass(frozen=True)
class MukaiVector:
    """(r, D, s) with D in NS(X)."""

    r: int
    D: Tuple[int, ...]
    s: int

    @property
    def coords(self) -> Vector:
        return (self.r,) + tuple(self.D) + (self.s,)

    @classmethod
    def from_coords(cls, coords: Sequence[int]) -> "MukaiVector":
        return cls(int(coords[0]), tuple(int(c) for c in coords[1:-1]), int(coords[-1]))

    def __neg__(self) -> "MukaiVector":
        return MukaiVector(-self.r, tuple(-d for d in self.D), -self.s)

    def __str__(self) -> str:
        return f"({self.r}, {list(self.D)}, {self.s})"

    def to_json(self) -> List[int]:
        return list(self.coords)


@dataclass(frozen=True)
class PeriodPoint:
    """A rational complex vector re + i*im of N(X) x Q."""

    re: RationalVector
    im: RationalVector

    def __post_init__(self):
        object.__setattr__(self, "re", tuple(Fraction(x) for x in self.re))
        object.__setattr__(self, "im", tuple(Fraction(x) for x in self.im))
        if len(self.re) != len(self.im):
            raise DimensionError("Real and imaginary parts of a period point differ in length")

    def conjugate(self) -> "PeriodPoint":
        return PeriodPoint(self.re, tuple(-x for x in self.im))

    def to_json(self) -> Dict[str, List[str]]:
        return {"re": [format_rational(x) for x in self.re], "im": [format_rational(x) for x in self.im]}

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "PeriodPoint":
        """Parse {"re": [...], "im": [...]} with rational strings."""
        if not isinstance(data, dict) or "re" not in data or "im" not in data:
            raise ConfigError("Period point JSON needs \"re\" and \"im\" arrays")
        return cls(tuple(parse_rational_list(data["re"])), tuple(parse_rational_list(data["im"])))


def _as_ns_vector(model: K3Model, D: Union[int, Sequence[Any]]) -> Tuple[Any, ...]:
    if isinstance(D, (int, Fraction, str)):
        D = (D,)
    D = tuple(D)
    if len(D) != model.rho:
        raise DimensionError(f"NS vector of length {len(D)} with rho = {model.rho}")
    return D


def mukai_vector(r: int, D: Union[int, Sequence[int]], ch2: int) -> MukaiVector:
    """v(E) = (r, c1, ch2 + r) from rank, first Chern class and ch2."""
    if isinstance(D, int):
        D = (D,)
    return MukaiVector(int(r), tuple(int(d) for d in D), int(ch2) + int(r))


def mukai_pair(model: K3Model, v: MukaiVector, w: MukaiVector) -> int:
    return int(pair(model.lattice, v.coords, w.coords))


def euler_form(model: K3Model, v: MukaiVector, w: MukaiVector) -> int:
    """chi(E, F) = -(v(E), v(F))."""
    return -mukai_pair(model, v, w)


def delta_set(model: K3Model, box: int, workers: int = 1) -> List[MukaiVector]:
    """
    The (-2)-classes with every coordinate bounded by box.

    Results are cached by Gram matrix and box.
    """
    key = EnumerationCache.make_key("delta", gram=[list(r) for r in model.lattice.gram], box=box)
    cached = get_cached_vectors(key)
    if cached is None:
        status(f"🔍 Scanning (-2)-classes, rho={model.rho}, box={box}")
        vectors = enumerate_norm(model.lattice, -2, box, workers=workers)
        cache_vectors(key, [list(v) for v in vectors], f"Delta(X) rho={model.rho} box={box}")
    else:
        vectors = [tuple(v) for v in cached]
    return [MukaiVector.from_coords(v) for v in vectors]


def exp_period(model: K3Model, B: Sequence[Any], omega: Sequence[Any]) -> PeriodPoint:
    """exp(B + i omega) = (1, B + i omega, (B + i omega)^2 / 2)."""
    B = tuple(Fraction(x) for x in _as_ns_vector(model, B))
    omega = tuple(Fraction(x) for x in _as_ns_vector(model, omega))
    re = (Fraction(1),) + B + ((model.ns_pair(B, B) - model.ns_pair(omega, omega)) / 2,)
    im = (Fraction(0),) + omega + (model.ns_pair(B, omega),)
    return PeriodPoint(re, im)


def period_from_json(model: K3Model, data: Dict[str, Any]) -> PeriodPoint:
    """Either {"re": [...], "im": [...]} or {"B": [...], "omega": [...]} for exp(B + i omega)."""
    if isinstance(data, dict) and "omega" in data:
        B = parse_rational_list(data.get("B", [0] * model.rho))
        return exp_period(model, B, parse_rational_list(data["omega"]))
    point = PeriodPoint.from_json(data)
    if len(point.re) != model.rho + 2:
        raise DimensionError(f"Period point of length {len(point.re)} with rho = {model.rho}")
    return point


def plane_gram(model: K3Model, point: PeriodPoint) -> Tuple[Fraction, Fraction, Fraction]:
    """((re, re), (re, im), (im, im))."""
    lat = model.lattice
    return pair(lat, point.re, point.re), pair(lat, point.re, point.im), pair(lat, point.im, point.im)


def reference_ample(model: K3Model) -> Tuple[int, ...]:
    """
    omega0: the smallest multiple k*h of the first NS basis vector h with h^2 > 0
    such that (k h)^2 > 2.
    """
    for i in range(model.rho):
        h2 = model.ns_gram[i][i]
        if h2 > 0:
            k = 1
            while k * k * h2 <= 2:
                k += 1
            return tuple(k if j == i else 0 for j in range(model.rho))
    # no positive basis vector: take the first positive vector of a small box
    ns = IntLattice.of(model.ns_gram)
    for box in range(1, 6):
        for v in enumerate_norm_positive(ns, box):
            k = 1
            while k * k * int(pair(ns, v, v)) <= 2:
                k += 1
            return tuple(k * x for x in v)
    raise ContractError("NS(X) has no positive vector in a small box", "ns-signature")


def enumerate_norm_positive(ns: IntLattice, box: int) -> List[Vector]:
    """Nonzero vectors of the box with positive square, lexicographic."""
    return [v for v in itertools.product(range(-box, box + 1), repeat=ns.rank)
            if any(v) and pair(ns, v, v) > 0]


def component_sign(model: K3Model, point: PeriodPoint) -> int:
    """
    Sign of det [[(re, re0), (re, im0)], [(im, re0), (im, im0)]] against the
    reference exp(i omega0). Nonzero for every positive 2-plane.
    """
    ref = exp_period(model, [0] * model.rho, reference_ample(model))
    lat = model.lattice
    det = (pair(lat, point.re, ref.re) * pair(lat, point.im, ref.im)
           - pair(lat, point.re, ref.im) * pair(lat, point.im, ref.re))
    return (det > 0) - (det < 0)


def wall_box(model: K3Model, point: PeriodPoint) -> int:
    """
    A coordinate box containing every (-2)-class orthogonal to a positive
    plane P = span(re, im).

    Such a class lies in the negative definite complement of P, so it has
    value 2 under the positive definite majorant M = 2 G B H^-1 B^T G - G
    (B = [re im], H = B^T G B). Then |x_i|^2 <= 2 (M^-1)_ii.

    Raises:
        ContractError: if the plane is not positive definite
    """
    a, b, c = plane_gram(model, point)
    if not (a > 0 and a * c - b * b > 0):
        raise ContractError("Wall bound needs a positive definite plane", "positive-plane")
    g = sympy.Matrix(model.lattice.gram)
    basis = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in point.re],
                          [sympy.Rational(x.numerator, x.denominator) for x in point.im]]).T
    h = basis.T * g * basis
    majorant = 2 * g * basis * h.inv() * basis.T * g - g
    inverse = majorant.inv()
    bound = 1
    for i in range(model.lattice.rank):
        bound = max(bound, math.isqrt(int(sympy.floor(2 * inverse[i, i]))))
    return bound


@dataclass(frozen=True)
class PeriodClassification:
    """Outcome of classify_period."""

    kind: str
    gram: Tuple[Fraction, Fraction, Fraction]
    wall_box: Optional[int] = None
    walls: Tuple[MukaiVector, ...] = ()
    witness: Optional[RationalVector] = None
    component: Optional[str] = None

    def to_json(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "class": self.kind,
            "plane_gram": [format_rational(x) for x in self.gram],
            "wall_box": self.wall_box,
            "walls": [w.to_json() for w in self.walls],
            "component": self.component,
        }
        if self.witness is not None:
            data["witness"] = [format_rational(x) for x in self.witness]
        return data


def classify_period(model: K3Model, point: PeriodPoint, box: Optional[int] = None,
                    workers: int = 1) -> PeriodClassification:
    """
    Classify a period point as NotPositive, OnWall, InP0Plus or InP0Minus.

    Args:
        model (K3Model): the surface
        point (PeriodPoint): the period point
        box (int): wall scan box; defaults to wall_box(model, point), which is complete
        workers (int): threads for the wall scan

    Returns:
        PeriodClassification: with the box used, the wall classes and the component
    """
    if len(point.re) != model.rho + 2:
        raise DimensionError(f"Period point of length {len(point.re)} with rho = {model.rho}")
    gram = plane_gram(model, point)
    a, b, c = gram
    if a <= 0:
        return PeriodClassification(NOT_POSITIVE, gram, witness=point.re)
    if a * c - b * b <= 0:
        witness = tuple(-b * x + a * y for x, y in zip(point.re, point.im))
        return PeriodClassification(NOT_POSITIVE, gram, witness=witness)

    used_box = box if box is not None else wall_box(model, point)
    debug(f"Wall scan box {used_box} for rho={model.rho}")
    walls = enumerate_norm(model.lattice, -2, used_box, orthogonal_to=[point.re, point.im], workers=workers)
    component = "+" if component_sign(model, point) > 0 else "-"
    if walls:
        return PeriodClassification(ON_WALL, gram, used_box, tuple(MukaiVector.from_coords(w) for w in walls),
                                    component=component)
    kind = IN_P0_PLUS if component == "+" else IN_P0_MINUS
    return PeriodClassification(kind, gram, used_box, component=component)


def spherical_twist_class(model: K3Model, s: MukaiVector, e: MukaiVector) -> MukaiVector:
    """
    Class of T_S(E): e - chi(s, e) s, the reflection in the (-2)-class s.

    Raises:
        InvalidRootError: unless (s, s) = -2
    """
    return MukaiVector.from_coords(reflect(model.lattice, s.coords, e.coords, mode="mukai"))


def twist_matrix(model: K3Model, s: MukaiVector) -> Matrix:
    return reflection_matrix(model.lattice, s.coords, mode="mukai")


def line_bundle_twist_class(model: K3Model, L: Union[int, Sequence[int]], v: MukaiVector) -> MukaiVector:
    """Class of E (x) L: v exp(L) = (r, D + r L, s + D.L + r L^2 / 2)."""
    L = tuple(int(x) for x in _as_ns_vector(model, L))
    D = tuple(d + v.r * l for d, l in zip(v.D, L))
    s = v.s + model.ns_pair(v.D, L) + v.r * model.ns_pair(L, L) / 2
    return MukaiVector(v.r, D, int(s))


def line_bundle_matrix(model: K3Model, L: Union[int, Sequence[int]]) -> Matrix:
    n = model.rho + 2
    columns = [line_bundle_twist_class(model, L, MukaiVector.from_coords(
        tuple(int(i == j) for i in range(n)))).coords for j in range(n)]
    return tuple(tuple(columns[j][i] for j in range(n)) for i in range(n))


def _apply_rational(m: Matrix, v: Sequence[Fraction]) -> RationalVector:
    return tuple(sum((row[j] * v[j] for j in range(len(v))), Fraction(0)) for row in m)


def preserves_components(model: K3Model, m: Sequence[Sequence[int]]) -> bool:
    """
    Whether an isometry of N(X) maps P+(X) to itself, tested on the
    reference point exp(i omega0).

    Raises:
        ContractError: if m is not an isometry
    """
    m = tuple(tuple(int(x) for x in row) for row in m)
    if not is_isometry(model.lattice, m):
        raise ContractError("Matrix is not an isometry of the Mukai lattice", "isometry")
    ref = exp_period(model, [0] * model.rho, reference_ample(model))
    image = PeriodPoint(_apply_rational(m, ref.re), _apply_rational(m, ref.im))
    return component_sign(model, image) > 0


@dataclass(frozen=True)
class GridRow:
    beta: Fraction
    omega: Fraction
    kind: str
    walls: int


def period_grid(model: K3Model, betas: Sequence[Fraction], omegas: Sequence[Fraction],
                workers: int = 1) -> List[GridRow]:
    """
    Classify exp((beta + i omega) h) over a rational grid, for rho = 1.

    Raises:
        ContractError: unless rho = 1
    """
    if model.rho != 1:
        raise ContractError("Period grids are 2D slices and need rho = 1", "picard-one")
    rows = []
    for beta in betas:
        for omega in omegas:
            result = classify_period(model, exp_period(model, [beta], [omega]), workers=workers)
            rows.append(GridRow(Fraction(beta), Fraction(omega), result.kind, len(result.walls)))
    return rows


def rational_range(start: Any, stop: Any, steps: int) -> List[Fraction]:
    """steps + 1 evenly spaced rationals from start to stop inclusive."""
    start, stop = parse_rational(start), parse_rational(stop)
    if steps < 1:
        return [start]
    return [start + (stop - start) * Fraction(k, steps) for k in range(steps + 1)]


if __name__ == "__main__":
    model = K3Model(1, ((2,),))
    o_x = mukai_vector(1, 0, 0)
    point = mukai_vector(0, 0, 1)
    print(f"v(O_X) = {o_x}, v(O_x) = {point}")
    print(f"chi(O_X, O_X) = {euler_form(model, o_x, o_x)}")
    print(f"T_O(O_x) = {spherical_twist_class(model, o_x, point)}")
    for omega in (1, 2):
        result = classify_period(model, exp_period(model, [0], [omega]))
        print(f"exp({omega}ih): {result.kind}, walls {[str(w) for w in result.walls]}, box {result.wall_box}")
