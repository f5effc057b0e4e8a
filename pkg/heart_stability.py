"""
Stability conditions on the heart of type-A quiver representations.

The heart is the category of representations of the linear quiver
1 -> 2 -> ... -> n. Every object is a direct sum of interval modules M[a,b]
(supported on vertices a..b, identity maps inside the support), so an object
is a multiset of intervals and its class in K is its dimension vector.

For M[a,b] the nonzero subobjects are M[c,b] with a <= c <= b and the
quotients are M[a,c-1]; Hom(M[a,b], M[c,d]) is one-dimensional exactly when
c <= a <= d <= b. Both rules are checked against explicit linear algebra
(hom_dimension) in check_axioms and in the tests.

A stability condition is given by the central charges of the simples S_i =
M[i,i]. Phases are never evaluated to decide anything: they are compared by
cross-multiplying exact central charges.
"""

import functools
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import mpmath
import numpy as np
import sympy

from errors import ConfigError, ContractError, DomainError
from exact_utils import (ENCLOSURE_RADIUS, ExactComplex, format_approx, format_rational,
                         parse_int, to_mpf)

Interval = Tuple[int, int]

# brute-force HN comparison is exponential in the interval length
BRUTE_FORCE_MAX_N = 5


@dataclass(frozen=True)
class TypeAHeart:
    """Representations of the linear quiver 1 -> 2 -> ... -> n."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ContractError(f"Quiver needs at least one vertex, got n={self.n}", "heart-size")

    def interval(self, a: int, b: int) -> "IntervalObject":
        return IntervalObject(self.n, ((a, b),))

    def simple(self, i: int) -> "IntervalObject":
        return self.interval(i, i)

    def zero(self) -> "IntervalObject":
        return IntervalObject(self.n, ())

    def all_intervals(self) -> List[Interval]:
        """Every (a, b) with 1 <= a <= b <= n, in lexicographic order."""
        return [(a, b) for a in range(1, self.n + 1) for b in range(a, self.n + 1)]


@dataclass(frozen=True)
class IntervalObject:
    """A direct sum of interval modules, stored as a sorted multiset of intervals."""

    n: int
    intervals: Tuple[Interval, ...] = ()

    def __post_init__(self):
        canonical = tuple(sorted((int(a), int(b)) for a, b in self.intervals))
        for a, b in canonical:
            if not 1 <= a <= b <= self.n:
                raise ContractError(f"Interval [{a},{b}] is not inside [1,{self.n}]", "interval-range")
        object.__setattr__(self, "intervals", canonical)

    def is_zero(self) -> bool:
        return not self.intervals

    def is_interval(self) -> bool:
        return len(self.intervals) == 1

    def dimension_vector(self) -> Tuple[int, ...]:
        dims = [0] * self.n
        for a, b in self.intervals:
            for i in range(a - 1, b):
                dims[i] += 1
        return tuple(dims)

    def direct_sum(self, other: "IntervalObject") -> "IntervalObject":
        if other.n != self.n:
            raise ContractError("Direct sum of objects over different hearts", "same-heart")
        return IntervalObject(self.n, self.intervals + other.intervals)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        return " + ".join(f"M[{a},{b}]" for a, b in self.intervals)

    def to_json(self) -> List[List[int]]:
        return [[a, b] for a, b in self.intervals]

    @classmethod
    def from_json(cls, n: int, data: Any) -> "IntervalObject":
        if not isinstance(data, list):
            raise ConfigError(f"Object must be a list of [a, b] intervals, got {data!r}")
        pairs = []
        for item in data:
            if not isinstance(item, list) or len(item) != 2:
                raise ConfigError(f"Interval must be [a, b], got {item!r}")
            pairs.append((parse_int(item[0]), parse_int(item[1])))
        return cls(n, tuple(pairs))


@functools.total_ordering
class Phase:
    """
    The phase of a nonzero charge z in the semi-closed upper half plane, plus
    an integer shift: the real number shift + arg(z)/pi in (shift, shift + 1].

    Equality and order are exact.
    """

    __slots__ = ("z", "shift")

    def __init__(self, z: ExactComplex, shift: int = 0):
        if not z.in_semi_closed_upper_half_plane():
            raise DomainError(f"Charge {z.format()} has no phase in (0, 1]", "stability-function")
        self.z = z
        self.shift = shift

    def _direction(self) -> Tuple[Fraction, Fraction]:
        m = max(abs(self.z.re), abs(self.z.im))
        return self.z.re / m, self.z.im / m

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Phase):
            return NotImplemented
        return self.shift == other.shift and self._direction() == other._direction()

    def __lt__(self, other: "Phase") -> bool:
        if self.shift != other.shift:
            return self.shift < other.shift
        # both arguments lie in (0, pi]: arg(z1) < arg(z2) iff z1 x z2 > 0
        return self.z.re * other.z.im - self.z.im * other.z.re > 0

    def __hash__(self) -> int:
        return hash((self.shift, self._direction()))

    def exact(self) -> Optional[Fraction]:
        """The phase as a rational when it is one (multiples of 1/4), else None."""
        x, y = self.z
        if y == 0:
            base = Fraction(1)
        elif x == 0:
            base = Fraction(1, 2)
        elif x == y:
            base = Fraction(1, 4)
        elif x == -y:
            base = Fraction(3, 4)
        else:
            # arctan of a rational is a rational multiple of pi only at 0, +-1
            return None
        return base + self.shift

    def approx(self) -> mpmath.mpf:
        return self.shift + mpmath.atan2(to_mpf(self.z.im), to_mpf(self.z.re)) / mpmath.pi

    def compare(self, q: Fraction) -> int:
        """Sign of (phase - q) for a rational q."""
        exact = self.exact()
        if exact is not None:
            return (exact > q) - (exact < q)
        value = self.approx()
        return 1 if value > to_mpf(q) else -1

    def shifted(self, k: int) -> "Phase":
        return Phase(self.z, self.shift + k)

    def format(self, precision: int = 12) -> str:
        exact = self.exact()
        if exact is not None:
            return format_rational(exact)
        return format_approx(self.approx(), precision)

    def __repr__(self) -> str:
        return f"Phase({self.format()})"


@dataclass(frozen=True)
class StabilityCondition:
    """
    A stability function on the type-A heart, given by the charges of the simples.

    Every charge must lie in the semi-closed upper half plane
    {m exp(i pi phi) : m > 0, 0 < phi <= 1}.
    """

    heart: TypeAHeart
    z_simple: Tuple[ExactComplex, ...]

    def __post_init__(self):
        charges = tuple(ExactComplex(Fraction(z[0]), Fraction(z[1])) for z in self.z_simple)
        object.__setattr__(self, "z_simple", charges)
        if len(charges) != self.heart.n:
            raise ContractError(f"Need {self.heart.n} simple charges, got {len(charges)}", "charge-count")
        for i, z in enumerate(charges, 1):
            if not z.in_semi_closed_upper_half_plane():
                raise ContractError(f"Z(S_{i}) = {z.format()} is outside the semi-closed upper half plane",
                                    "stability-function")

    @classmethod
    def of(cls, charges: Sequence[Tuple[Any, Any]]) -> "StabilityCondition":
        return cls(TypeAHeart(len(charges)), tuple(ExactComplex.of(x, y) for x, y in charges))

    def to_json(self) -> Dict[str, Any]:
        return {"n": self.heart.n, "z": [z.to_json() for z in self.z_simple]}

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "StabilityCondition":
        """Parse {"n": n, "z": [["x1", "y1"], ...]}."""
        if not isinstance(data, dict) or "z" not in data:
            raise ConfigError("Stability condition JSON needs a \"z\" array")
        if not isinstance(data["z"], list):
            raise ConfigError(f"\"z\" must be an array of [re, im] pairs, got {data['z']!r}")
        charges = tuple(ExactComplex.from_json(z) for z in data["z"])
        n = parse_int(data.get("n", len(charges)))
        return cls(TypeAHeart(n), charges)


def _check_heart(sigma: StabilityCondition, obj: IntervalObject):
    if obj.n != sigma.heart.n:
        raise ContractError(f"Object lives over n={obj.n}, stability condition over n={sigma.heart.n}",
                            "same-heart")


def central_charge(sigma: StabilityCondition, obj: IntervalObject) -> ExactComplex:
    """Z(E) = sum_i dim(E)_i * Z(S_i)."""
    _check_heart(sigma, obj)
    total = ExactComplex.of(0, 0)
    for d, z in zip(obj.dimension_vector(), sigma.z_simple):
        if d:
            total = total + z * d
    return total


def _interval_charge(sigma: StabilityCondition, a: int, b: int) -> ExactComplex:
    total = ExactComplex.of(0, 0)
    for z in sigma.z_simple[a - 1:b]:
        total = total + z
    return total


def phase(sigma: StabilityCondition, obj: IntervalObject) -> Phase:
    """
    The phase of a nonzero object.

    Raises:
        DomainError: for the zero object
    """
    if obj.is_zero():
        raise DomainError("The zero object has no phase")
    return Phase(central_charge(sigma, obj))


def _interval_phase(sigma: StabilityCondition, a: int, b: int) -> Phase:
    return Phase(_interval_charge(sigma, a, b))


def _single_interval(obj: IntervalObject) -> Interval:
    if not obj.is_interval():
        raise ContractError(f"{obj} is not a single interval module; use hn_filtration", "indecomposable")
    return obj.intervals[0]


def is_semistable(sigma: StabilityCondition, obj: IntervalObject) -> bool:
    """
    Semistability of an interval module: no subobject M[c,b] has larger phase.

    Raises:
        ContractError: if obj is not a single interval
    """
    _check_heart(sigma, obj)
    a, b = _single_interval(obj)
    return _interval_semistable(sigma, a, b)


def _interval_semistable(sigma: StabilityCondition, a: int, b: int) -> bool:
    whole = _interval_phase(sigma, a, b)
    return all(_interval_phase(sigma, c, b) <= whole for c in range(a + 1, b + 1))


def is_stable(sigma: StabilityCondition, obj: IntervalObject) -> bool:
    """Every proper nonzero subobject has strictly smaller phase."""
    _check_heart(sigma, obj)
    a, b = _single_interval(obj)
    whole = _interval_phase(sigma, a, b)
    return all(_interval_phase(sigma, c, b) < whole for c in range(a + 1, b + 1))


@dataclass(frozen=True)
class HNFactor:
    """One semistable factor of a Harder-Narasimhan filtration."""

    obj: IntervalObject
    phase: Phase
    charge: ExactComplex

    @property
    def mass(self) -> sympy.Expr:
        q = self.charge.norm_squared()
        return sympy.sqrt(sympy.Rational(q.numerator, q.denominator))

    def mass_approx(self) -> mpmath.mpf:
        return mpmath.sqrt(to_mpf(self.charge.norm_squared()))


@dataclass(frozen=True)
class HNDecomposition:
    """HN factors in order of strictly decreasing phase."""

    factors: Tuple[HNFactor, ...]

    @property
    def phi_plus(self) -> Phase:
        return self.factors[0].phase

    @property
    def phi_minus(self) -> Phase:
        return self.factors[-1].phase

    @property
    def mass(self) -> sympy.Expr:
        return sympy.Add(*[f.mass for f in self.factors])

    def mass_approx(self) -> mpmath.mpf:
        return mpmath.fsum(f.mass_approx() for f in self.factors)

    def classes(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(f.obj.dimension_vector() for f in self.factors)

    def to_json(self, precision: int = 12) -> List[Dict[str, Any]]:
        return [{
            "intervals": f.obj.to_json(),
            "phase": f.phase.format(precision),
            "mass": str(f.mass),
            "mass_approx": format_approx(f.mass_approx(), precision),
        } for f in self.factors]


def _interval_hn(sigma: StabilityCondition, a: int, b: int) -> List[Tuple[Interval, Phase]]:
    """
    Greedy HN of M[a,b]: split off the subobject of maximal phase (the largest
    one on ties) and continue with the quotient M[a, c-1].
    """
    pieces = []
    while a <= b:
        best_c, best = a, _interval_phase(sigma, a, b)
        for c in range(a + 1, b + 1):
            candidate = _interval_phase(sigma, c, b)
            if candidate > best:
                best_c, best = c, candidate
        pieces.append(((best_c, b), best))
        b = best_c - 1
    return pieces


def hn_filtration(sigma: StabilityCondition, obj: IntervalObject) -> HNDecomposition:
    """
    Harder-Narasimhan filtration of any nonzero object.

    Each interval summand is filtered greedily; the pieces of all summands are
    then merged by phase, equal-phase pieces being summed into one factor.

    Raises:
        DomainError: for the zero object
    """
    _check_heart(sigma, obj)
    if obj.is_zero():
        raise DomainError("The zero object has no HN filtration")
    pieces = [piece for a, b in obj.intervals for piece in _interval_hn(sigma, a, b)]
    pieces.sort(key=lambda piece: piece[1], reverse=True)
    factors = []
    for ph, group in itertools.groupby(pieces, key=lambda piece: piece[1]):
        factor_obj = IntervalObject(obj.n, tuple(interval for interval, _ in group))
        factors.append(HNFactor(factor_obj, ph, central_charge(sigma, factor_obj)))
    return HNDecomposition(tuple(factors))


def brute_force_hn(sigma: StabilityCondition, a: int, b: int) -> List[List[Tuple[Interval, Phase]]]:
    """
    Every filtration of M[a,b] whose factors are semistable with strictly
    decreasing phases, found by trying all chains of subobjects.
    """
    valid = []
    inner = list(range(a + 1, b + 1))
    for k in range(len(inner) + 1):
        for cuts in itertools.combinations(sorted(inner, reverse=True), k):
            tops = (b,) + tuple(c - 1 for c in cuts)
            bottoms = cuts + (a,)
            pieces = [((lo, hi), _interval_phase(sigma, lo, hi)) for lo, hi in zip(bottoms, tops)]
            if not all(_interval_semistable(sigma, lo, hi) for (lo, hi), _ in pieces):
                continue
            if all(p[1] > q[1] for p, q in zip(pieces, pieces[1:])):
                valid.append(pieces)
    return valid


@dataclass(frozen=True)
class MassReport:
    """phi^+, phi^- and mass of an object."""

    phi_plus: Phase
    phi_minus: Phase
    mass: sympy.Expr
    mass_approx: mpmath.mpf
    error_bound: mpmath.mpf = ENCLOSURE_RADIUS


def phi_plus_minus_mass(sigma: StabilityCondition, obj: IntervalObject) -> MassReport:
    """Top and bottom HN phases and the mass sum |Z(A_i)| over HN factors."""
    hn = hn_filtration(sigma, obj)
    return MassReport(hn.phi_plus, hn.phi_minus, hn.mass, hn.mass_approx())


def in_slice_interval(sigma: StabilityCondition, obj: IntervalObject, a: Any, b: Any) -> bool:
    """
    Membership of P((a, b)): zero, or a < phi^-(E) <= phi^+(E) < b.

    Raises:
        ContractError: unless a < b
    """
    a, b = Fraction(a), Fraction(b)
    if not a < b:
        raise ContractError(f"Slice interval ({a}, {b}) is empty", "interval-order")
    _check_heart(sigma, obj)
    if obj.is_zero():
        return True
    hn = hn_filtration(sigma, obj)
    return hn.phi_minus.compare(a) > 0 and hn.phi_plus.compare(b) < 0


def shifted_phase(sigma: StabilityCondition, obj: IntervalObject, k: int) -> Tuple[Tuple[int, ...], Phase]:
    """
    Class and phase of E[k] for a semistable interval E: the class is
    (-1)^k [E] and the phase is phi(E) + k.
    """
    ph = phase(sigma, obj)
    sign = -1 if k % 2 else 1
    return tuple(sign * d for d in obj.dimension_vector()), ph.shifted(k)


@dataclass(frozen=True)
class DistanceReport:
    """d(sigma1, sigma2) with its enclosure and the interval attaining it."""

    value: mpmath.mpf
    lower: mpmath.mpf
    upper: mpmath.mpf
    witness: Optional[Interval]
    component: str
    exact_zero: bool

    def format(self, precision: int = 12) -> str:
        if self.exact_zero:
            return "0"
        return format_approx(self.value, precision, (self.upper - self.lower) / 2)


def _phase_gap(p: Phase, q: Phase) -> mpmath.mpf:
    if p == q:
        return mpmath.mpf(0)
    return abs(p.approx() - q.approx())


def distance(sigma1: StabilityCondition, sigma2: StabilityCondition) -> DistanceReport:
    """
    The metric sup_E max(|dphi^-|, |dphi^+|, |log m2/m1|), taken over the
    finitely many interval modules.

    Raises:
        ContractError: if the stability conditions live on different hearts
    """
    if sigma1.heart != sigma2.heart:
        raise ContractError("Distance between stability conditions on different hearts", "same-heart")
    best = mpmath.mpf(0)
    witness: Optional[Interval] = None
    component = "none"
    for a, b in sigma1.heart.all_intervals():
        obj = sigma1.heart.interval(a, b)
        hn1, hn2 = hn_filtration(sigma1, obj), hn_filtration(sigma2, obj)
        norms1 = sorted(f.charge.norm_squared() for f in hn1.factors)
        norms2 = sorted(f.charge.norm_squared() for f in hn2.factors)
        log_gap = mpmath.mpf(0)
        if norms1 != norms2:
            log_gap = abs(mpmath.log(hn2.mass_approx()) - mpmath.log(hn1.mass_approx()))
        candidates = (
            ("phi-", _phase_gap(hn1.phi_minus, hn2.phi_minus)),
            ("phi+", _phase_gap(hn1.phi_plus, hn2.phi_plus)),
            ("log-mass", log_gap),
        )
        for name, value in candidates:
            if value > best:
                best, witness, component = value, (a, b), name
    exact_zero = witness is None
    radius = mpmath.mpf(0) if exact_zero else ENCLOSURE_RADIUS
    return DistanceReport(best, best - radius, best + radius, witness, component, exact_zero)


def hom_nonzero(source: IntervalObject, target: IntervalObject) -> bool:
    """Hom(M[a,b], M[c,d]) != 0 iff c <= a <= d <= b."""
    a, b = _single_interval(source)
    c, d = _single_interval(target)
    return c <= a <= d <= b


@dataclass(frozen=True)
class Representation:
    """An explicit quiver representation: vector space dimensions and arrow matrices."""

    dims: Tuple[int, ...]
    maps: Tuple[sympy.Matrix, ...] = field(compare=False)

    @classmethod
    def of_object(cls, obj: IntervalObject) -> "Representation":
        """
        The direct sum of the interval modules of obj. The basis at vertex i is
        one vector per summand whose support contains i.
        """
        n = obj.n
        basis = [[k for k, (a, b) in enumerate(obj.intervals) if a <= i <= b] for i in range(1, n + 1)]
        dims = tuple(len(b) for b in basis)
        maps = []
        for i in range(n - 1):
            m = sympy.zeros(dims[i + 1], dims[i])
            for col, k in enumerate(basis[i]):
                if k in basis[i + 1]:
                    m[basis[i + 1].index(k), col] = 1
            maps.append(m)
        return cls(dims, tuple(maps))


def hom_dimension(source: IntervalObject, target: IntervalObject) -> int:
    """
    dim Hom(V, W) by solving F_{i+1} A_i = B_i F_i over the rationals, where
    A, B are the arrow matrices of explicit representations of V and W.
    """
    if source.n != target.n:
        raise ContractError("Hom between objects over different hearts", "same-heart")
    v, w = Representation.of_object(source), Representation.of_object(target)
    n = source.n
    # unknowns: the entries of F_i (dim W_i x dim V_i), column-major per vertex
    offsets = list(itertools.accumulate((w.dims[i] * v.dims[i] for i in range(n)), initial=0))
    unknowns = offsets[-1]
    if unknowns == 0:
        return 0
    rows = []
    for i in range(n - 1):
        out_rows = w.dims[i + 1] * v.dims[i]
        if out_rows == 0:
            continue
        block = sympy.zeros(out_rows, unknowns)
        if v.dims[i + 1]:
            # vec(F_{i+1} A_i) = (A_i^T kron I) vec(F_{i+1})
            left = sympy.kronecker_product(v.maps[i].T, sympy.eye(w.dims[i + 1]))
            block[:, offsets[i + 1]:offsets[i + 2]] = left
        if w.dims[i]:
            # vec(B_i F_i) = (I kron B_i) vec(F_i)
            right = sympy.kronecker_product(sympy.eye(v.dims[i]), w.maps[i])
            block[:, offsets[i]:offsets[i + 1]] = block[:, offsets[i]:offsets[i + 1]] - right
        rows.append(block)
    if not rows:
        return unknowns
    system = sympy.Matrix.vstack(*rows)
    return unknowns - system.rank()


@dataclass
class AxiomReport:
    """Outcome of check_axioms: counts of checks run and any violations."""

    n: int
    checks: Dict[str, int] = field(default_factory=dict)
    violations: List[str] = field(default_factory=list)
    local_finiteness: str = ("automatic: the heart has finite length, so every "
                             "P((phi - eps, phi + eps)) is of finite length")

    @property
    def ok(self) -> bool:
        return not self.violations

    def count(self, axiom: str, k: int = 1):
        self.checks[axiom] = self.checks.get(axiom, 0) + k

    def to_json(self) -> Dict[str, Any]:
        return {"n": self.n, "ok": self.ok, "checks": dict(sorted(self.checks.items())),
                "violations": list(self.violations), "local_finiteness": self.local_finiteness}


def check_axioms(sigma: StabilityCondition, brute_force_max_n: int = BRUTE_FORCE_MAX_N) -> AxiomReport:
    """
    Check the stability condition axioms over every interval module.

    (a) semistable objects have Z = m exp(i pi phi) with m > 0;
    (b) shifting by [1] negates the class and adds 1 to the phase;
    (c) Hom vanishes from higher to lower phase semistables (and hom_nonzero
        agrees with hom_dimension on every pair examined);
    (d) the greedy HN filtration is valid, and for n <= brute_force_max_n it is
        the unique one found by enumerating all filtrations.
    """
    heart = sigma.heart
    report = AxiomReport(heart.n)
    intervals = heart.all_intervals()
    semistable = []
    for a, b in intervals:
        obj = heart.interval(a, b)
        z = central_charge(sigma, obj)
        if _interval_semistable(sigma, a, b):
            semistable.append(((a, b), Phase(z)))
            report.count("a")
            if z.is_zero() or not z.in_semi_closed_upper_half_plane():
                report.violations.append(f"(a) Z(M[{a},{b}]) = {z.format()} has no phase in (0, 1]")
            cls_shift, ph_shift = shifted_phase(sigma, obj, 1)
            report.count("b")
            if cls_shift != tuple(-d for d in obj.dimension_vector()) or ph_shift != Phase(z, 1):
                report.violations.append(f"(b) shift bookkeeping fails for M[{a},{b}]")

        hn = _interval_hn(sigma, a, b)
        report.count("d")
        if any(not _interval_semistable(sigma, lo, hi) for (lo, hi), _ in hn):
            report.violations.append(f"(d) HN of M[{a},{b}] has an unstable factor")
        if any(p[1] <= q[1] for p, q in zip(hn, hn[1:])):
            report.violations.append(f"(d) HN phases of M[{a},{b}] are not strictly decreasing")
        total = [0] * heart.n
        for (lo, hi), _ in hn:
            for i in range(lo - 1, hi):
                total[i] += 1
        if tuple(total) != heart.interval(a, b).dimension_vector():
            report.violations.append(f"(d) HN classes of M[{a},{b}] do not add up")
        if heart.n <= brute_force_max_n:
            report.count("d-brute-force")
            oracle = brute_force_hn(sigma, a, b)
            if len(oracle) != 1:
                report.violations.append(f"(d) M[{a},{b}] has {len(oracle)} valid HN filtrations")
            elif oracle[0] != hn:
                report.violations.append(f"(d) greedy HN of M[{a},{b}] differs from the brute-force one")

    for (i1, p1), (i2, p2) in itertools.product(semistable, repeat=2):
        if not p1 > p2:
            continue
        source, target = heart.interval(*i1), heart.interval(*i2)
        report.count("c")
        if hom_nonzero(source, target):
            report.violations.append(f"(c) Hom(M{list(i1)}, M{list(i2)}) != 0 with phase {p1.format()} > {p2.format()}")
        if (hom_dimension(source, target) > 0) != hom_nonzero(source, target):
            report.violations.append(f"(c) Hom rule disagrees with linear algebra for M{list(i1)}, M{list(i2)}")
    return report


def random_stability_condition(rng: np.random.Generator, n: int, allow_real: bool = True,
                               size: int = 9) -> StabilityCondition:
    """
    A random stability condition with small rational charges.

    With allow_real, about one simple in six sits on the negative real axis.
    """
    charges = []
    for _ in range(n):
        den = int(rng.integers(1, 4))
        if allow_real and rng.random() < 1 / 6:
            charges.append(ExactComplex(Fraction(-int(rng.integers(1, size + 1)), den), Fraction(0)))
        else:
            charges.append(ExactComplex(Fraction(int(rng.integers(-size, size + 1)), den),
                                        Fraction(int(rng.integers(1, size + 1)), den)))
    return StabilityCondition(TypeAHeart(n), tuple(charges))


def random_object(rng: np.random.Generator, n: int, max_summands: int = 4) -> IntervalObject:
    """A random nonzero direct sum of interval modules."""
    k = int(rng.integers(1, max_summands + 1))
    intervals = []
    for _ in range(k):
        a = int(rng.integers(1, n + 1))
        b = int(rng.integers(a, n + 1))
        intervals.append((a, b))
    return IntervalObject(n, tuple(intervals))


def all_phases(sigma: StabilityCondition) -> Iterator[Tuple[Interval, Phase]]:
    for a, b in sigma.heart.all_intervals():
        yield (a, b), _interval_phase(sigma, a, b)


def perturbation_threshold(sigma: StabilityCondition) -> Fraction:
    """
    A radius t such that moving every simple charge by at most t in each
    coordinate keeps every strict order between interval phases (and keeps
    all phases inside (0, 1)).

    Each interval charge moves by at most sqrt(2) t dim(E), which turns its
    phase by at most arcsin(sqrt(2) t dim(E) / |Z(E)|) / pi; that stays below
    half the smallest gap between distinct phases. Returns 0 when two intervals
    share a phase or a phase is 1, since then no perturbation is safe.
    """
    entries = [((a, b), ph, ph.approx()) for (a, b), ph in all_phases(sigma)]
    values = sorted(v for _, _, v in entries)
    gaps = [values[0], 1 - values[-1]]
    for (_, p, vp), (_, q, vq) in itertools.combinations(entries, 2):
        if p == q:
            return Fraction(0)
        gaps.append(abs(vp - vq))
    gap = min(gaps)
    if gap <= 0:
        return Fraction(0)
    sin_half = mpmath.sin(mpmath.pi * gap / 2)
    bound = min(
        mpmath.sqrt(to_mpf(_interval_charge(sigma, a, b).norm_squared())) * sin_half
        / (mpmath.sqrt(2) * (b - a + 1))
        for (a, b), _, _ in entries
    )
    scaled = int(mpmath.floor(bound / 2 * 10 ** 30))
    return Fraction(scaled, 10 ** 30)


def perturb(sigma: StabilityCondition, deltas: Sequence[ExactComplex]) -> StabilityCondition:
    """Add deltas to the simple charges (the result is validated)."""
    return StabilityCondition(sigma.heart, tuple(z + d for z, d in zip(sigma.z_simple, deltas)))


def hn_classes(sigma: StabilityCondition) -> Dict[Interval, Tuple[Tuple[int, ...], ...]]:
    """HN factor classes of every interval module."""
    return {(a, b): hn_filtration(sigma, sigma.heart.interval(a, b)).classes()
            for a, b in sigma.heart.all_intervals()}


if __name__ == "__main__":
    sigma = StabilityCondition.of([(0, 1), (-1, 0)])
    obj = sigma.heart.interval(1, 2)
    print(f"Z(M[1,2]) = {central_charge(sigma, obj).format()}")
    print(f"M[1,2] semistable: {is_semistable(sigma, obj)}")
    for f in hn_filtration(sigma, obj).factors:
        print(f"  factor {f.obj}, phase {f.phase.format()}, mass {f.mass}")
    print(f"axioms ok: {check_axioms(sigma).ok}")
    other = StabilityCondition.of([(0, 1), (0, 1)])
    print(f"d = {distance(sigma, other).format()}")
