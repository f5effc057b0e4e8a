import math
from fractions import Fraction

import pytest

import flop_chambers as fc
from cache_utils import get_cache_stats
from errors import ConfigError, ContractError, DimensionError
from exact_utils import ExactComplex
from heart_stability import Phase
from lattice_core import norm


@pytest.mark.parametrize("name, count", [
    ("A1", 2), ("A2", 6), ("A3", 12), ("A4", 20), ("D4", 24), ("D5", 40), ("E6", 72), ("E7", 126), ("E8", 240),
])
def test_root_counts(name, count):
    config = fc.ade_config(name)
    assert len(fc.roots(config)) == count == fc.expected_root_count(name)
    assert all(norm(config.lattice, r) == 2 for r in config.roots)


def test_a1_roots():
    assert fc.roots(fc.ade_config("A1")) == [(-1,), (1,)]


@pytest.mark.parametrize("name", ["A1", "A3", "D4", "E6"])
def test_positive_roots_are_half(name):
    config = fc.ade_config(name)
    positive = fc.positive_roots(config)
    assert 2 * len(positive) == len(config.roots)
    assert sorted(positive + [tuple(-x for x in r) for r in positive]) == fc.roots(config)


def test_roots_are_sorted_and_cached():
    config = fc.ade_config("A2")
    assert fc.roots(config) == sorted(fc.roots(config))
    assert get_cache_stats()["total_entries"] == 1
    assert fc.ade_config("A2") == config
    assert get_cache_stats()["total_entries"] == 1


@pytest.mark.parametrize("name", ["A3", "D4"])
def test_weyl_invariance(name):
    assert fc.is_weyl_invariant(fc.ade_config(name))


def test_unknown_types():
    with pytest.raises(ConfigError):
        fc.ade_config("B3")
    with pytest.raises(ContractError):
        fc.ade_config("E9")
    with pytest.raises(ContractError):
        fc.ade_config("D3")


def test_cartan_matrices():
    assert fc.cartan_a(2) == ((2, -1), (-1, 2))
    d4 = fc.cartan_d(4)
    assert sum(1 for x in d4[1] if x == -1) == 3
    e6 = fc.cartan_e(6)
    assert e6[1][3] == -1 and e6[0][2] == -1


@pytest.mark.parametrize("cartan, name", [
    (fc.cartan_a(4), "A4"),
    (fc.cartan_d(5), "D5"),
    (fc.cartan_e(6), "E6"),
    (fc.cartan_e(7), "E7"),
    (fc.cartan_e(8), "E8"),
    # D4 with the branch node listed first
    (((2, -1, -1, -1), (-1, 2, 0, 0), (-1, 0, 2, 0), (-1, 0, 0, 2)), "D4"),
])
def test_identify_dynkin(cartan, name):
    assert fc.identify_dynkin(cartan) == name


@pytest.mark.parametrize("cartan", [
    ((2, -1, -1), (-1, 2, -1), (-1, -1, 2)),
    ((2, 0), (0, 2)),
    ((2, -2), (-2, 2)),
    ((2, -1, -1, -1, -1), (-1, 2, 0, 0, 0), (-1, 0, 2, 0, 0), (-1, 0, 0, 2, 0), (-1, 0, 0, 0, 2)),
])
def test_identify_dynkin_rejects(cartan):
    with pytest.raises(ContractError):
        fc.identify_dynkin(cartan)


def test_config_from_json():
    assert fc.config_from_json({"type": "a2"}).name == "A2"
    from_cartan = fc.config_from_json({"cartan": [[2, -1], [-1, 2]]})
    assert from_cartan.name == "A2"
    assert len(from_cartan.roots) == 6
    with pytest.raises(ConfigError):
        fc.config_from_json({})


def test_toda_complement_examples():
    a1 = fc.ade_config("A1")
    assert fc.in_toda_complement(a1, fc.SlicePoint.of(Fraction(1, 2), 0)).in_complement
    failed = fc.in_toda_complement(a1, fc.SlicePoint.of(1, 0))
    assert not failed.in_complement
    assert failed.witness == (1,)
    assert fc.in_toda_complement(a1, fc.SlicePoint.of(1, Fraction(1, 7))).in_complement


def test_toda_complement_rank_two():
    a2 = fc.ade_config("A2")
    # alpha1 + alpha2 has beta.C = 1/2 + 1/2 = 1 and omega.C = 1 - 1 = 0
    p = fc.SlicePoint((Fraction(1, 2), Fraction(1, 2)), (1, -1))
    result = fc.in_toda_complement(a2, p)
    assert not result.in_complement
    assert result.witness == (1, 1)
    assert fc.in_toda_complement(a2, fc.SlicePoint((Fraction(1, 3), Fraction(1, 3)), (0, 0))).in_complement
    with pytest.raises(DimensionError):
        fc.in_toda_complement(a2, fc.SlicePoint.of(0, 1))


def test_toda_complement_invariances(rng):
    a2 = fc.ade_config("A2")
    for _ in range(100):
        beta = tuple(Fraction(int(rng.integers(-6, 7)), 2) for _ in range(2))
        omega = tuple(Fraction(int(rng.integers(-2, 3)), 1) for _ in range(2))
        p = fc.SlicePoint(beta, omega)
        expected = fc.in_toda_complement(a2, p).in_complement
        shift = tuple(int(x) for x in rng.integers(-3, 4, size=2))
        moved = fc.SlicePoint(tuple(b + s for b, s in zip(beta, shift)), omega)
        assert fc.in_toda_complement(a2, moved).in_complement == expected
        scaled = fc.SlicePoint(beta, tuple(3 * w for w in omega))
        assert fc.in_toda_complement(a2, scaled).in_complement == expected


@pytest.mark.parametrize("beta, omega, label, twist", [
    (Fraction(1, 2), 1, "AmpleConeU", 0),
    (Fraction(1, 2), 0, "PerverseFace(0)", 0),
    (Fraction(3, 2), 0, "PerverseFace(1)", 1),
    (Fraction(-1, 3), -2, "FlopSide", -1),
    (2, 0, "Excluded", 2),
    (2, 1, "AmpleConeU", 2),
])
def test_classify_conifold_examples(beta, omega, label, twist):
    chamber = fc.classify_conifold(fc.SlicePoint.of(beta, omega))
    assert chamber.label == label
    assert chamber.twist == (twist,)


def test_classify_conifold_twist_commutes(rng):
    for _ in range(200):
        beta = Fraction(int(rng.integers(-20, 21)), int(rng.integers(1, 5)))
        omega = Fraction(int(rng.integers(-3, 4)), int(rng.integers(1, 4)))
        before = fc.classify_conifold(fc.SlicePoint.of(beta, omega))
        after = fc.classify_conifold(fc.SlicePoint.of(beta, omega).twisted())
        assert after.region == before.region
        assert after.twist == (before.twist[0] + 1,)
        if before.face is not None:
            assert after.face == before.face + 1


def test_excluded_set_matches_toda_complement():
    # 100 x 100 grid on [-5, 5) x [-1, 1) with step 1/10 and 1/50
    betas = [Fraction(k, 10) - 5 for k in range(100)]
    omegas = [Fraction(k, 50) - 1 for k in range(100)]
    rows = fc.complement_grid(betas, omegas)
    assert len(rows) == 10_000
    for row in rows:
        excluded = row.chamber.region == fc.EXCLUDED
        assert excluded == (not row.in_complement)
        assert excluded == (row.omega == 0 and row.beta.denominator == 1)


def test_classify_chamber_rank_two():
    a2 = fc.ade_config("A2")
    ample = fc.classify_chamber(a2, fc.SlicePoint((Fraction(1, 3), Fraction(5, 2)), (1, 2)))
    assert ample.label == "AmpleConeU"
    assert ample.twist == (0, 2)
    face = fc.classify_chamber(a2, fc.SlicePoint((Fraction(1, 3), Fraction(1, 4)), (0, 1)))
    assert face.label == "PerverseFace(0)"
    higher = fc.classify_chamber(a2, fc.SlicePoint((Fraction(1, 3), Fraction(1, 3)), (0, 0)))
    assert higher.region == fc.HIGHER_FACE
    assert "not classified" in higher.to_json()["note"]
    flop = fc.classify_chamber(a2, fc.SlicePoint((Fraction(1, 3), Fraction(1, 3)), (1, -1)))
    assert flop.region == fc.FLOP_SIDE
    excluded = fc.classify_chamber(a2, fc.SlicePoint((1, Fraction(1, 3)), (0, 1)))
    assert excluded.region == fc.EXCLUDED
    assert excluded.to_json()["witness"] == [1, 0]


def test_classify_chamber_agrees_with_conifold(rng):
    a1 = fc.ade_config("A1")
    for _ in range(50):
        p = fc.SlicePoint.of(Fraction(int(rng.integers(-9, 10)), 3), int(rng.integers(-1, 2)))
        assert fc.classify_chamber(a1, p).label == fc.classify_conifold(p).label


def test_conifold_classes():
    assert fc.curve_sheaf(0) == (1, 1)
    assert fc.curve_sheaf(-1) == (1, 0)
    assert fc.POINT_CLASS == (0, 1)
    assert fc.curve_sheaf(-1).shift() == (-1, 0)
    assert fc.curve_sheaf(-1).shift(2) == (1, 0)
    assert fc.curve_sheaf(-1) + fc.POINT_CLASS == fc.curve_sheaf(0)


def test_conifold_charge_examples(rng):
    for _ in range(20):
        p = fc.SlicePoint.of(Fraction(int(rng.integers(-9, 10)), 4), Fraction(int(rng.integers(-9, 10)), 4))
        assert fc.conifold_charge(p, fc.POINT_CLASS) == ExactComplex.of(-1, 0)
    face = fc.SlicePoint.of(Fraction(1, 2), 0)
    assert fc.conifold_charge(face, fc.curve_sheaf(0)) == ExactComplex.of(Fraction(-1, 2), 0)
    assert fc.conifold_charge(face, fc.curve_sheaf(-1).shift()) == ExactComplex.of(Fraction(-1, 2), 0)


def test_curve_charge_vanishes_exactly_on_excluded_points():
    for k in range(-3, 4):
        for beta in [Fraction(n, 2) for n in range(-8, 9)]:
            for omega in (Fraction(0), Fraction(1, 2)):
                p = fc.SlicePoint.of(beta, omega)
                vanishes = fc.conifold_charge(p, fc.curve_sheaf(k)).is_zero()
                assert vanishes == (omega == 0 and beta == k + 1)
                if vanishes:
                    assert fc.classify_conifold(p).region == fc.EXCLUDED


def test_coh_heart_witness():
    assert fc.coh_heart_witness(fc.SlicePoint.of(Fraction(1, 2), 1)) is None
    for beta in [Fraction(1, 2), Fraction(3, 2), Fraction(-7, 3), Fraction(2)]:
        k = fc.coh_heart_witness(fc.SlicePoint.of(beta, 0))
        charge = fc.conifold_charge(fc.SlicePoint.of(beta, 0), fc.curve_sheaf(k))
        assert charge.re > 0 and charge.im == 0
        assert fc.conifold_charge(fc.SlicePoint.of(beta, 0), fc.curve_sheaf(k + 1)).re <= 0


def test_skyscraper_status():
    assert fc.skyscraper_status(fc.SlicePoint.of(Fraction(1, 2), 1)).status == "stable"
    face = fc.skyscraper_status(fc.SlicePoint.of(Fraction(3, 2), 0))
    assert face.status == "strictly semistable"
    assert face.factors == (fc.curve_sheaf(0).shift(), fc.curve_sheaf(1))
    p = fc.SlicePoint.of(Fraction(3, 2), 0)
    phases = {Phase(fc.conifold_charge(p, c)) for c in face.factors}
    assert phases == {Phase(ExactComplex.of(-1, 0))}
    assert fc.skyscraper_status(fc.SlicePoint.of(Fraction(1, 2), -1)).status == "not modelled"


def test_conifold_sequences_check():
    report = fc.conifold_sequences_check()
    assert report.ok
    assert len(report.checks) == 6
    assert report.to_json()["ok"] is True


def test_complement_csv_rows():
    rows = fc.complement_grid([Fraction(1, 2), Fraction(1)], [Fraction(0)])
    assert fc.complement_csv_rows(rows) == [
        ["1/2", "0", "true", "PerverseFace(0)", "0"],
        ["1", "0", "false", "Excluded", "1"],
    ]
    assert fc.COMPLEMENT_GRID_HEADER == ["beta", "omega", "in_complement", "region", "twist"]


def test_slice_point_json():
    p = fc.SlicePoint.from_json({"beta": "1/2", "omega": ["0"]})
    assert p == fc.SlicePoint.of(Fraction(1, 2), 0)
    assert p.to_json() == {"beta": ["1/2"], "omega": ["0"]}
    with pytest.raises(ConfigError):
        fc.SlicePoint.from_json({"beta": [0.5], "omega": [0]})
    with pytest.raises(DimensionError):
        fc.SlicePoint((0, 1), (1,))


def test_twist_is_floor():
    for beta in [Fraction(-1, 2), Fraction(7, 3), Fraction(0)]:
        assert fc.classify_conifold(fc.SlicePoint.of(beta, 1)).twist == (math.floor(beta),)
