"""
SL(2, Z) action of autoequivalences of an elliptic curve on (rank, degree).

Generators act on column vectors (r, d):
    F     = [[0, -1], [1, 0]]   the Fourier-Mukai transform, (r, d) -> (-d, r)
    T     = [[1, 0], [1, 1]]    tensoring by a degree-one line bundle L
    Shift = -I                  the shift [1]
    P0, Aut = I                 tensoring by a degree-zero bundle, pulling back by an automorphism

P0 and Aut map to the identity, so a word with identity matrix need not be
the identity functor.

A word is a tuple of syllables (token, exponent) read as a composite
t1 o t2 o ... o tk: its matrix is M(t1) M(t2) ... M(tk), and on a charge
vector the last syllable acts first.
"""

import math
import re
from typing import Dict, List, NamedTuple, Sequence, Tuple

import numpy as np

from errors import ConfigError, NotInGroupError
from exact_utils import parse_int

Matrix2 = Tuple[Tuple[int, int], Tuple[int, int]]

IDENTITY: Matrix2 = ((1, 0), (0, 1))
GENERATORS: Dict[str, Matrix2] = {
    "F": ((0, -1), (1, 0)),
    "T": ((1, 0), (1, 1)),
    "Shift": ((-1, 0), (0, -1)),
    "P0": IDENTITY,
    "Aut": IDENTITY,
}
ALIASES = {"F": "F", "T": "T", "TL": "T", "T_L": "T", "L": "T", "SHIFT": "Shift", "[1]": "Shift",
           "P0": "P0", "AUT": "Aut"}

# decompose() words have at most this many syllables per bit of max|entry|, plus one
LENGTH_CONSTANT = 9

_SYLLABLE = re.compile(r"^\s*([A-Za-z_\[\]01]+?)\s*(?:\^\s*([+-]?\d+))?\s*$")


class Syllable(NamedTuple):
    token: str
    exp: int = 1

    def __str__(self) -> str:
        return self.token if self.exp == 1 else f"{self.token}^{self.exp}"


Word = Tuple[Syllable, ...]


class ChargeVector(NamedTuple):
    r: int
    d: int


def mat_mul(a: Matrix2, b: Matrix2) -> Matrix2:
    return ((a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]),
            (a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]))


def mat_pow(m: Matrix2, k: int) -> Matrix2:
    result = IDENTITY
    for _ in range(k):
        result = mat_mul(result, m)
    return result


def syllable_matrix(s: Syllable) -> Matrix2:
    """Matrix of one syllable, with negative exponents allowed."""
    if s.token == "T":
        return ((1, 0), (s.exp, 1))
    if s.token == "F":
        return mat_pow(GENERATORS["F"], s.exp % 4)
    if s.token == "Shift":
        return GENERATORS["Shift"] if s.exp % 2 else IDENTITY
    if s.token in GENERATORS:
        return IDENTITY
    raise ConfigError(f"Unknown generator {s.token!r}")


def parse_word(text: str) -> Word:
    """
    Parse "F,T,T,F", "T^-2, F^-1", "Shift" and so on (commas or spaces).

    Raises:
        ConfigError: for an unknown token or malformed exponent
    """
    parts = [p for p in re.split(r"[,\s]+", text.strip()) if p]
    word = []
    for part in parts:
        match = _SYLLABLE.match(part)
        if not match:
            raise ConfigError(f"Cannot parse syllable {part!r}")
        name = ALIASES.get(match.group(1).upper())
        if name is None:
            raise ConfigError(f"Unknown generator {match.group(1)!r}; expected F, T, Shift, P0 or Aut")
        word.append(Syllable(name, int(match.group(2)) if match.group(2) else 1))
    return tuple(word)


def format_word(word: Sequence[Syllable]) -> str:
    return ",".join(str(s) for s in word)


def parse_matrix(text: str) -> Matrix2:
    """Parse "a,b,c,d" (row-major)."""
    parts = [p for p in re.split(r"[,\s]+", text.strip()) if p]
    if len(parts) != 4:
        raise ConfigError(f"Matrix needs four entries \"a,b,c,d\", got {text!r}")
    a, b, c, d = (parse_int(p) for p in parts)
    return ((a, b), (c, d))


def format_matrix(m: Matrix2) -> str:
    return f"[[{m[0][0]}, {m[0][1]}], [{m[1][0]}, {m[1][1]}]]"


def matrix_of(word: Sequence[Syllable]) -> Matrix2:
    """M(t1) M(t2) ... M(tk); the empty word gives the identity."""
    result = IDENTITY
    for s in word:
        result = mat_mul(result, syllable_matrix(s))
    return result


def act(word: Sequence[Syllable], v: ChargeVector) -> ChargeVector:
    """Apply the syllables to v one at a time, last syllable first."""
    r, d = v
    for s in reversed(word):
        m = syllable_matrix(s)
        r, d = m[0][0] * r + m[0][1] * d, m[1][0] * r + m[1][1] * d
    return ChargeVector(r, d)


def normalize(word: Sequence[Syllable]) -> Word:
    """
    Merge adjacent powers of the same generator, reduce F modulo 4 (F^2 is
    Shift) and move every Shift to the end, where it is reduced modulo 2.
    The matrix is unchanged.
    """
    shifts = 0
    body: List[Syllable] = []
    for s in word:
        if s.token == "Shift":
            shifts += s.exp
            continue
        if s.token == "F":
            e = s.exp % 4
            if e >= 2:
                shifts += 1
                e -= 2
            if e == 0:
                continue
            s = Syllable("F", e)
        if s.exp == 0:
            continue
        if body and body[-1].token == s.token:
            merged = Syllable(s.token, body.pop().exp + s.exp)
            if merged.token == "F":
                # F F = Shift
                shifts += 1
                continue
            if merged.exp != 0:
                body.append(merged)
            continue
        body.append(s)
    if shifts % 2:
        body.append(Syllable("Shift", 1))
    return tuple(body)


def decompose(m: Sequence[Sequence[int]]) -> Word:
    """
    A word in F, T^k and Shift whose matrix is m.

    Euclid's algorithm on the first column: left-multiply by T^-q to reduce the
    lower entry modulo the upper, by F^-1 to swap them, until the column is
    (+-1, 0). Then Shift fixes the sign and the remaining [[1, b], [0, 1]] is
    F T^-b F^-1. The word has at most LENGTH_CONSTANT * (1 + log2 max|entry|)
    syllables; it is not claimed to be shortest.

    Raises:
        NotInGroupError: unless det m = 1
    """
    a = ((int(m[0][0]), int(m[0][1])), (int(m[1][0]), int(m[1][1])))
    if a[0][0] * a[1][1] - a[0][1] * a[1][0] != 1:
        raise NotInGroupError(f"{format_matrix(a)} has determinant "
                              f"{a[0][0] * a[1][1] - a[0][1] * a[1][0]}, not 1")
    f_inv = syllable_matrix(Syllable("F", -1))
    # inverses of the left factors, in the order they were applied
    prefix: List[Syllable] = []
    if a[0][0] == 0:
        a = mat_mul(f_inv, a)
        prefix.append(Syllable("F", 1))
    while a[1][0] != 0:
        q = a[1][0] // a[0][0]
        if q:
            a = mat_mul(((1, 0), (-q, 1)), a)
            prefix.append(Syllable("T", q))
        if a[1][0] != 0:
            a = mat_mul(f_inv, a)
            prefix.append(Syllable("F", 1))
    if a[0][0] == -1:
        a = mat_mul(GENERATORS["Shift"], a)
        prefix.append(Syllable("Shift", 1))
    b = a[0][1]
    tail: List[Syllable] = []
    if b:
        tail = [Syllable("F", 1), Syllable("T", -b), Syllable("F", 1), Syllable("Shift", 1)]
    return normalize(prefix + tail)


def decompose_length_bound(m: Sequence[Sequence[int]]) -> int:
    largest = max(abs(int(x)) for row in m for x in row)
    return math.floor(LENGTH_CONSTANT * (1 + math.log2(max(largest, 1))))


def kernel_witness(word: Sequence[Syllable]) -> bool:
    """
    True iff the word acts as the identity on (rank, degree).

    This is necessary for the word to lie in the kernel Z x (Aut(X) x Pic0(X))
    of the map to SL(2, Z) only up to that kernel: P0 and Aut are invisible here,
    and of the shifts only the even ones are.
    """
    return matrix_of(word) == IDENTITY


def random_word(rng: np.random.Generator, max_length: int = 30) -> Word:
    """A random word in F, T, T^-1 and Shift."""
    choices = [Syllable("F", 1), Syllable("T", 1), Syllable("T", -1), Syllable("Shift", 1)]
    length = int(rng.integers(0, max_length + 1))
    return tuple(choices[int(i)] for i in rng.integers(0, len(choices), size=length))


def relations_check() -> Dict[str, bool]:
    """F^4 = I, F^2 = Shift and (F T)^3 = I, hence (F T)^6 = I."""
    f, t = GENERATORS["F"], GENERATORS["T"]
    ft = mat_mul(f, t)
    return {
        "F^4 = I": mat_pow(f, 4) == IDENTITY,
        "F^2 = Shift": mat_pow(f, 2) == GENERATORS["Shift"],
        "(FT)^3 = I": mat_pow(ft, 3) == IDENTITY,
        "(FT)^6 = +-I": mat_pow(ft, 6) in (IDENTITY, GENERATORS["Shift"]),
    }


if __name__ == "__main__":
    word = parse_word("F,T,T,F")
    print(f"matrix_of({format_word(word)}) = {format_matrix(matrix_of(word))}")
    print(f"act on (1, 0): {act(word, ChargeVector(1, 0))}")
    m = ((2, 1), (1, 1))
    w = decompose(m)
    print(f"decompose({format_matrix(m)}) = {format_word(w)} -> {format_matrix(matrix_of(w))}")
    print(f"kernel_witness(Shift,Shift) = {kernel_witness(parse_word('Shift,Shift'))}")
    print(relations_check())
