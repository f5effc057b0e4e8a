import pytest

import elliptic_sl2z as sl
from elliptic_sl2z import ChargeVector, Syllable
from errors import ConfigError, NotInGroupError

F = sl.GENERATORS["F"]
T = sl.GENERATORS["T"]
SHIFT = sl.GENERATORS["Shift"]


def test_generator_matrices():
    assert sl.matrix_of(sl.parse_word("T")) == ((1, 0), (1, 1))
    assert sl.matrix_of(sl.parse_word("F")) == ((0, -1), (1, 0))
    assert sl.matrix_of(()) == sl.IDENTITY
    assert sl.matrix_of(sl.parse_word("P0,Aut")) == sl.IDENTITY


def test_tensoring_structure_sheaf():
    assert sl.act(sl.parse_word("T_L"), ChargeVector(1, 0)) == (1, 1)


def test_fourier_mukai_sign_convention():
    assert sl.act(sl.parse_word("F"), ChargeVector(1, 0)) == (0, 1)
    assert sl.act(sl.parse_word("F"), ChargeVector(2, 3)) == (-3, 2)


def test_f_squared_is_shift():
    assert sl.matrix_of(sl.parse_word("F,F")) == sl.matrix_of(sl.parse_word("Shift")) == SHIFT
    assert sl.matrix_of(sl.parse_word("F,F,F,F")) == sl.IDENTITY


def test_determinant_is_one(rng):
    for _ in range(100):
        m = sl.matrix_of(sl.random_word(rng))
        assert m[0][0] * m[1][1] - m[0][1] * m[1][0] == 1


def test_matrix_of_is_a_homomorphism(rng):
    for _ in range(1000):
        w1, w2 = sl.random_word(rng), sl.random_word(rng)
        assert sl.matrix_of(w1 + w2) == sl.mat_mul(sl.matrix_of(w1), sl.matrix_of(w2))


def test_action_matches_matrix(rng):
    for _ in range(300):
        word = sl.random_word(rng)
        v = ChargeVector(int(rng.integers(-9, 10)), int(rng.integers(-9, 10)))
        m = sl.matrix_of(word)
        assert sl.act(word, v) == (m[0][0] * v.r + m[0][1] * v.d, m[1][0] * v.r + m[1][1] * v.d)


def test_composition_order():
    # T then F: (1, 0) -> (1, 1) -> (-1, 1)
    assert sl.act(sl.parse_word("F,T"), ChargeVector(1, 0)) == (-1, 1)
    assert sl.act(sl.parse_word("T,F"), ChargeVector(1, 0)) == (0, 1)


@pytest.mark.parametrize("m", [
    ((1, 0), (0, 1)),
    ((1, 0), (1, 1)),
    ((2, 1), (1, 1)),
    ((-1, 0), (0, -1)),
    ((0, -1), (1, 0)),
    ((0, 1), (-1, 0)),
    ((1, 5), (0, 1)),
    ((13, 8), (21, 13)),
    ((-7, 3), (-12, 5)),
])
def test_decompose_round_trip(m):
    word = sl.decompose(m)
    assert sl.matrix_of(word) == m
    assert len(word) <= sl.decompose_length_bound(m)


def test_decompose_small_cases():
    assert sl.decompose(sl.IDENTITY) == ()
    assert sl.decompose(((1, 0), (1, 1))) == (Syllable("T", 1),)
    assert sl.decompose(((-1, 0), (0, -1))) == (Syllable("Shift", 1),)


def test_decompose_random_words(rng):
    for _ in range(1000):
        m = sl.matrix_of(sl.random_word(rng))
        word = sl.decompose(m)
        assert sl.matrix_of(word) == m
        assert len(word) <= sl.decompose_length_bound(m)
        assert all(s.token in ("F", "T", "Shift") for s in word)


def test_decompose_rejects_non_group_elements():
    with pytest.raises(NotInGroupError) as excinfo:
        sl.decompose(((1, 1), (1, 1)))
    assert excinfo.value.invariant == "det-one"
    with pytest.raises(NotInGroupError):
        sl.decompose(((-1, 0), (0, 1)))


def test_normalize_keeps_matrix(rng):
    for _ in range(200):
        word = sl.random_word(rng)
        normal = sl.normalize(word)
        assert sl.matrix_of(normal) == sl.matrix_of(word)
        assert all(s.token != "Shift" for s in normal[:-1])
        assert all(a.token != b.token for a, b in zip(normal, normal[1:]))


def test_normalize_examples():
    assert sl.normalize(sl.parse_word("T,T,T^-2")) == ()
    assert sl.normalize(sl.parse_word("F,F,F,F")) == ()
    assert sl.normalize(sl.parse_word("Shift,T,Shift,Shift")) == (Syllable("T", 1), Syllable("Shift", 1))


@pytest.mark.parametrize("text, expected", [
    ("Shift,Shift", True),
    ("F,F,F,F", True),
    ("T_L", False),
    ("F,T,F,T,F,T", True),
    ("P0,Aut", True),
    ("Shift", False),
])
def test_kernel_witness(text, expected):
    assert sl.kernel_witness(sl.parse_word(text)) is expected


def test_relations():
    checks = sl.relations_check()
    assert all(checks.values())
    assert sl.mat_pow(sl.mat_mul(F, T), 6) == sl.IDENTITY


def test_parse_word():
    assert sl.parse_word("F, T^-2  Shift") == (Syllable("F"), Syllable("T", -2), Syllable("Shift"))
    assert sl.parse_word("tl,[1],f^3") == (Syllable("T"), Syllable("Shift"), Syllable("F", 3))
    assert sl.parse_word("") == ()
    assert sl.format_word(sl.parse_word("F,T^-2,Shift")) == "F,T^-2,Shift"
    with pytest.raises(ConfigError):
        sl.parse_word("G")
    with pytest.raises(ConfigError):
        sl.parse_word("T^x")


def test_parse_matrix():
    assert sl.parse_matrix("2,1,1,1") == ((2, 1), (1, 1))
    assert sl.parse_matrix("1 0 -3 1") == ((1, 0), (-3, 1))
    assert sl.format_matrix(((2, 1), (1, 1))) == "[[2, 1], [1, 1]]"
    with pytest.raises(ConfigError):
        sl.parse_matrix("1,2,3")
    with pytest.raises(ConfigError):
        sl.parse_matrix("1,2,3,1/2")
