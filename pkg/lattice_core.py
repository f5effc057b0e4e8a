"""
Exact integer lattices for StabLab.

An IntLattice is a free abelian group with a symmetric integer bilinear form,
given by its Gram matrix in a fixed basis. All vectors are coordinate tuples
in that basis. Nothing in this module uses floating point: wall membership
and root conditions are exact equalities.
"""

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from console_utils import debug
from errors import ConfigError, ContractError, DimensionError, InvalidRootError
from exact_utils import parse_int, parse_int_matrix

Vector = Tuple[int, ...]
RationalVector = Tuple[Fraction, ...]
Matrix = Tuple[Tuple[int, ...], ...]

# rows per numpy block in the brute-force box scan
SCAN_BLOCK_ROWS = 200_000

# int64 products in the box scan must stay below this
INT64_SAFE = 2 ** 62

# reflection modes: expected self-pairing of the root
REFLECTION_NORMS = {"mukai": -2, "root": 2}


@dataclass(frozen=True)
class IntLattice:
    """
    A finite-rank lattice with an integer symmetric bilinear form.

    The flags are claims checked at construction; use IntLattice.of() to
    have them computed.
    """

    gram: Matrix
    even: bool = False
    nondegenerate: bool = False

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", rows)
        n = len(rows)
        if n < 1:
            raise ContractError("Lattice rank must be positive", "rank-positive")
        if any(len(row) != n for row in rows):
            raise ContractError("Gram matrix must be square", "gram-square")
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise ContractError(f"Gram matrix is not symmetric at ({i}, {j})", "gram-symmetric")
        if self.even and any(rows[i][i] % 2 for i in range(n)):
            raise ContractError("Lattice flagged even has an odd diagonal entry", "even")
        if self.nondegenerate and determinant(rows) == 0:
            raise ContractError("Lattice flagged nondegenerate has determinant 0", "nondegenerate")

    @classmethod
    def of(cls, gram: Sequence[Sequence[int]]) -> "IntLattice":
        """Build a lattice and compute its even/nondegenerate flags."""
        rows = tuple(tuple(int(x) for x in row) for row in gram)
        if not rows or any(len(row) != len(rows) for row in rows):
            # __post_init__ reports the exact failure
            return cls(rows)
        even = all(rows[i][i] % 2 == 0 for i in range(len(rows)))
        return cls(rows, even=even, nondegenerate=determinant(rows) != 0)

    @property
    def rank(self) -> int:
        return len(self.gram)

    def to_json(self) -> Dict[str, Any]:
        return {"rank": self.rank, "gram": [list(row) for row in self.gram], "even": self.even}

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "IntLattice":
        """
        Parse {"rank": n, "gram": [[...]], "even": bool}.

        The "even" key is optional; when present it is checked.
        """
        if not isinstance(data, dict) or "gram" not in data:
            raise ConfigError("Lattice JSON needs a \"gram\" array")
        lattice = cls.of(parse_int_matrix(data["gram"], "gram"))
        if "rank" in data and parse_int(data["rank"]) != lattice.rank:
            raise ConfigError(f"\"rank\" is {data['rank']} but gram has {lattice.rank} rows")
        if data.get("even") and not lattice.even:
            raise ContractError("Lattice declared even has an odd diagonal entry", "even")
        return lattice


def determinant(gram: Sequence[Sequence[int]]) -> int:
    """Exact determinant of an integer matrix."""
    return int(sympy.Matrix(gram).det())


def _check_rank(lattice: IntLattice, *vectors: Sequence[Any]):
    for v in vectors:
        if len(v) != lattice.rank:
            raise DimensionError(f"Vector of length {len(v)} in a rank {lattice.rank} lattice")


def pair(lattice: IntLattice, v: Sequence[Any], w: Sequence[Any]) -> Fraction:
    """
    Evaluate the bilinear form.

    Args:
        lattice (IntLattice): the lattice
        v, w: integer or rational coordinate vectors

    Returns:
        Fraction: v^T * gram * w, exactly

    Raises:
        DimensionError: if a vector length differs from the rank
    """
    _check_rank(lattice, v, w)
    total = Fraction(0)
    for i, vi in enumerate(v):
        if vi == 0:
            continue
        row = lattice.gram[i]
        total += Fraction(vi) * sum(Fraction(row[j]) * w[j] for j in range(lattice.rank) if row[j])
    return total


def norm(lattice: IntLattice, v: Sequence[Any]) -> Fraction:
    return pair(lattice, v, v)


def signature(lattice: IntLattice) -> Tuple[int, int, int]:
    """
    Inertia indices of the form by exact symmetric Gaussian reduction.

    Returns:
        Tuple[int, int, int]: (positive, negative, zero)
    """
    m = [[Fraction(x) for x in row] for row in lattice.gram]
    n = len(m)
    p = q = z = 0
    for k in range(n):
        if m[k][k] == 0:
            j = next((j for j in range(k + 1, n) if m[j][j] != 0), None)
            if j is not None:
                m[k], m[j] = m[j], m[k]
                for row in m:
                    row[k], row[j] = row[j], row[k]
        if m[k][k] == 0:
            j = next((j for j in range(k + 1, n) if m[k][j] != 0), None)
            if j is not None:
                # e_k -> e_k + e_j turns the hyperbolic pair into a nonzero pivot
                for c in range(n):
                    m[k][c] += m[j][c]
                for r in range(n):
                    m[r][k] += m[r][j]
        d = m[k][k]
        if d == 0:
            z += 1
            continue
        if d > 0:
            p += 1
        else:
            q += 1
        for i in range(k + 1, n):
            f = m[i][k] / d
            if f == 0:
                continue
            for j in range(k + 1, n):
                m[i][j] -= f * m[k][j]
        for i in range(k + 1, n):
            m[i][k] = m[k][i] = Fraction(0)
    return p, q, z


def is_positive_definite(lattice: IntLattice) -> bool:
    return signature(lattice) == (lattice.rank, 0, 0)


def _ldl(gram: Matrix) -> Optional[Tuple[List[Fraction], List[List[Fraction]]]]:
    """
    Write x^T G x = sum_i d_i (x_i + sum_{j>i} u_ij x_j)^2.

    Returns None unless every d_i is positive (G positive definite).
    """
    n = len(gram)
    d: List[Fraction] = []
    u = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        di = Fraction(gram[i][i]) - sum(d[k] * u[k][i] * u[k][i] for k in range(i))
        if di <= 0:
            return None
        d.append(di)
        u[i][i] = Fraction(1)
        for j in range(i + 1, n):
            u[i][j] = (Fraction(gram[i][j]) - sum(d[k] * u[k][i] * u[k][j] for k in range(i))) / di
    return d, u


def _pruned_scan(lattice: IntLattice, target: int, box: int) -> List[Vector]:
    """Box scan for positive-definite forms, cutting branches whose partial sum exceeds target."""
    d, u = _ldl(lattice.gram)
    n = lattice.rank
    x = [0] * n
    found: List[Vector] = []

    def descend(i: int, partial: Fraction):
        if i < 0:
            if partial == target:
                found.append(tuple(x))
            return
        shift = sum(u[i][j] * x[j] for j in range(i + 1, n))
        # |xi + shift| <= sqrt((target - partial) / d_i)
        reach = math.isqrt(math.floor((target - partial) / d[i])) + 1
        centre = math.floor(-shift)
        for xi in range(max(-box, centre - reach), min(box, centre + reach + 1) + 1):
            s = partial + d[i] * (xi + shift) ** 2
            if s <= target:
                x[i] = xi
                descend(i - 1, s)
        x[i] = 0

    if target >= 0:
        descend(n - 1, Fraction(0))
    return found


def _integral_constraint(lattice: IntLattice, u: Sequence[Any]) -> List[int]:
    """The integer functional x -> (x, u) scaled to clear denominators."""
    _check_rank(lattice, u)
    coeffs = [sum(Fraction(lattice.gram[i][j]) * Fraction(u[j]) for j in range(lattice.rank))
              for i in range(lattice.rank)]
    scale = 1
    for c in coeffs:
        scale = math.lcm(scale, c.denominator)
    ints = [int(c * scale) for c in coeffs]
    g = math.gcd(*ints)
    return [c // g for c in ints] if g > 1 else ints


def _scan_dtype(lattice: IntLattice, box: int, constraints: List[List[int]]) -> Any:
    """int64 when every product in the scan fits, else exact Python ints."""
    n = lattice.rank
    largest = max([abs(x) for row in lattice.gram for x in row] + [abs(c) for f in constraints for c in f])
    if largest * n * n * box * box < INT64_SAFE:
        return np.int64
    return object


def _brute_scan(lattice: IntLattice, target: int, box: int, constraints: List[List[int]],
                workers: int) -> List[Vector]:
    """Vectorised scan of the full coordinate box, split by coordinate prefix."""
    n = lattice.rank
    side = 2 * box + 1
    prefix_len = 0
    while side ** (n - prefix_len) > SCAN_BLOCK_ROWS and prefix_len < n:
        prefix_len += 1
    values = range(-box, box + 1)
    dtype = _scan_dtype(lattice, box, constraints)
    tail = np.array(list(itertools.product(values, repeat=n - prefix_len)), dtype=dtype)
    tail = tail.reshape(side ** (n - prefix_len), n - prefix_len)
    gram = np.array(lattice.gram, dtype=dtype)
    functionals = [np.array(c, dtype=dtype) for c in constraints]

    def scan_block(prefix: Tuple[int, ...]) -> List[Vector]:
        head = np.tile(np.array(prefix, dtype=dtype), (tail.shape[0], 1))
        block = np.hstack([head, tail])
        mask = np.ones(block.shape[0], dtype=bool)
        for f in functionals:
            mask &= block @ f == 0
        block = block[mask]
        values_q = ((block @ gram) * block).sum(axis=1)
        return [tuple(int(c) for c in row) for row in block[values_q == target]]

    prefixes = list(itertools.product(values, repeat=prefix_len))
    if workers > 1 and len(prefixes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(scan_block, prefixes))
    else:
        blocks = [scan_block(prefix) for prefix in prefixes]
    return [v for block in blocks for v in block]


def enumerate_norm(lattice: IntLattice, n: int, box: int,
                   orthogonal_to: Optional[Sequence[Sequence[Any]]] = None,
                   workers: int = 1) -> List[Vector]:
    """
    All vectors with every |coordinate| <= box and self-pairing n.

    Args:
        lattice (IntLattice): the lattice
        n (int): target value of pair(v, v)
        box (int): coordinate bound, at least 1
        orthogonal_to: optional vectors u; only v with pair(v, u) = 0 are kept
        workers (int): threads for the brute-force scan

    Returns:
        List[Vector]: lexicographically sorted, no duplicates

    Raises:
        ContractError: if box < 1
    """
    if box < 1:
        raise ContractError(f"Enumeration box must be at least 1, got {box}", "box-positive")
    constraints = [_integral_constraint(lattice, u) for u in (orthogonal_to or [])]
    if not constraints and _ldl(lattice.gram) is not None:
        debug(f"Pruned scan: rank {lattice.rank}, norm {n}, box {box}")
        found = _pruned_scan(lattice, n, box)
    else:
        debug(f"Box scan: rank {lattice.rank}, norm {n}, box {box}, {len(constraints)} constraints")
        found = _brute_scan(lattice, n, box, constraints, max(1, workers))
    return sorted(set(found))


def reflect(lattice: IntLattice, delta: Sequence[int], v: Sequence[int], mode: str = "mukai") -> Vector:
    """
    Reflect v in the hyperplane orthogonal to delta.

    Mode "mukai" needs (delta, delta) = -2 and gives v + (v, delta) delta;
    mode "root" needs (delta, delta) = 2 and gives v - (v, delta) delta.

    Raises:
        InvalidRootError: if delta has the wrong self-pairing for the mode
    """
    _check_root(lattice, delta, mode)
    _check_rank(lattice, v)
    k = pair(lattice, v, delta)
    step = k if mode == "mukai" else -k
    return tuple(int(vi + step * di) for vi, di in zip(v, delta))


def _check_root(lattice: IntLattice, delta: Sequence[int], mode: str):
    if mode not in REFLECTION_NORMS:
        raise ContractError(f"Unknown reflection mode {mode!r}", "reflection-mode")
    _check_rank(lattice, delta)
    expected = REFLECTION_NORMS[mode]
    value = norm(lattice, delta)
    if value != expected:
        raise InvalidRootError(f"Root {tuple(delta)} has self-pairing {value}, expected {expected}")


def reflection_matrix(lattice: IntLattice, delta: Sequence[int], mode: str = "mukai") -> Matrix:
    """The reflection in delta as an integer matrix acting on column vectors."""
    _check_root(lattice, delta, mode)
    n = lattice.rank
    columns = [reflect(lattice, delta, tuple(int(i == j) for i in range(n)), mode) for j in range(n)]
    return tuple(tuple(columns[j][i] for j in range(n)) for i in range(n))


def apply_matrix(m: Matrix, v: Sequence[int]) -> Vector:
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in m)


def is_isometry(lattice: IntLattice, m: Sequence[Sequence[int]]) -> bool:
    """True iff M^T G M = G."""
    g = sympy.Matrix(lattice.gram)
    mm = sympy.Matrix(m)
    return mm.T * g * mm == g


def unimodular_change(lattice: IntLattice, u: Sequence[Sequence[int]]) -> IntLattice:
    """
    The same lattice in the basis given by the columns of u.

    Raises:
        ContractError: unless det(u) = +-1
    """
    mu = sympy.Matrix(u)
    if mu.shape != (lattice.rank, lattice.rank) or abs(mu.det()) != 1:
        raise ContractError("Change of basis must be unimodular", "unimodular")
    g = mu.T * sympy.Matrix(lattice.gram) * mu
    return IntLattice.of([[int(g[i, j]) for j in range(lattice.rank)] for i in range(lattice.rank)])


def random_unimodular(rng: np.random.Generator, rank: int, steps: int = 12) -> Matrix:
    """A random element of SL(rank, Z) as a product of elementary matrices."""
    m = [[int(i == j) for j in range(rank)] for i in range(rank)]
    if rank < 2:
        return tuple(tuple(row) for row in m)
    for _ in range(steps):
        i, j = (int(x) for x in rng.choice(rank, size=2, replace=False))
        k = int(rng.integers(-2, 3))
        for r in range(rank):
            m[r][j] += k * m[r][i]
    return tuple(tuple(row) for row in m)


def vector_from_json(data: Any, rank: Optional[int] = None) -> Vector:
    """Parse a JSON integer array."""
    if not isinstance(data, list):
        raise ConfigError(f"Expected an integer array, got {data!r}")
    v = tuple(parse_int(x) for x in data)
    if rank is not None and len(v) != rank:
        raise DimensionError(f"Vector of length {len(v)} in a rank {rank} lattice")
    return v


if __name__ == "__main__":
    mukai = IntLattice.of([[0, 0, -1], [0, 2, 0], [-1, 0, 0]])
    print(f"Mukai form (h^2 = 2): signature {signature(mukai)}")
    print(f"pair((1,0,1), (1,0,1)) = {pair(mukai, (1, 0, 1), (1, 0, 1))}")
    print(f"(-2)-vectors in box 1: {enumerate_norm(mukai, -2, 1)}")
    a2 = IntLattice.of([[2, -1], [-1, 2]])
    print(f"A2 roots: {enumerate_norm(a2, 2, 2)}")
    print(f"reflect alpha2 in alpha1: {reflect(a2, (1, 0), (0, 1), mode='root')}")
