"""
Seeded invariant suite behind `cli.py selftest`.

Every check gets its own generator derived from (seed, check index), so the
report does not depend on the number of worker threads.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

import mpmath
import numpy as np
from dotenv import load_dotenv

import elliptic_sl2z as sl2z
import flop_chambers as flops
import heart_stability as hs
import k3_mukai as k3
import lattice_core as lc
from console_utils import status
from errors import StabLabError
from exact_utils import ExactComplex

load_dotenv()

CheckFn = Callable[[np.random.Generator], Tuple[bool, str]]

MUKAI_TEST_GRAMS = [
    ((2,),),
    ((2, 1), (1, -2)),
    ((0, 1), (1, 0)),
    ((2, 0, 0), (0, -2, 0), (0, 0, -2)),
    ((4, 0, 0, 0), (0, -2, 1, 0), (0, 1, -2, 0), (0, 0, 0, -2)),
]


def _random_int_vector(rng: np.random.Generator, n: int, size: int = 5) -> Tuple[int, ...]:
    return tuple(int(x) for x in rng.integers(-size, size + 1, size=n))


def check_lattice_signatures(rng: np.random.Generator) -> Tuple[bool, str]:
    for gram in MUKAI_TEST_GRAMS:
        model = k3.K3Model(len(gram), gram)
        if not model.lattice.even or lc.signature(model.lattice) != (2, model.rho, 0):
            return False, f"Mukai lattice of {gram} is not even of signature (2, rho)"
    return True, f"{len(MUKAI_TEST_GRAMS)} Mukai lattices even of signature (2, rho)"


def check_lattice_basis_change(rng: np.random.Generator) -> Tuple[bool, str]:
    a3 = lc.IntLattice.of(flops.cartan_a(3))
    for _ in range(5):
        u = lc.random_unimodular(rng, 3, steps=3)
        changed = lc.unimodular_change(a3, u)
        if lc.signature(changed) != lc.signature(a3) or lc.determinant(changed.gram) != lc.determinant(a3.gram):
            return False, "signature or determinant changed under a unimodular basis change"
    return True, "signature and determinant invariant under 5 unimodular changes"


def check_mukai_reflections(rng: np.random.Generator) -> Tuple[bool, str]:
    model = k3.K3Model(2, MUKAI_TEST_GRAMS[1])
    deltas = k3.delta_set(model, 2)
    lattice = model.lattice
    for _ in range(1000):
        delta = deltas[int(rng.integers(len(deltas)))].coords
        v, w = _random_int_vector(rng, 4), _random_int_vector(rng, 4)
        if lc.pair(lattice, lc.reflect(lattice, delta, v), lc.reflect(lattice, delta, w)) != lc.pair(lattice, v, w):
            return False, f"reflection in {delta} does not preserve ({v}, {w})"
    return True, f"1000 reflections preserve the Mukai pairing ({len(deltas)} (-2)-classes in box 2)"


def check_k3_examples(rng: np.random.Generator) -> Tuple[bool, str]:
    model = k3.K3Model(1, ((2,),))
    o_x = k3.mukai_vector(1, 0, 0)
    if k3.euler_form(model, o_x, o_x) != 2 or k3.mukai_pair(model, o_x, o_x) != -2:
        return False, "chi(O_X, O_X) != 2"
    on_wall = k3.classify_period(model, k3.exp_period(model, [0], [1]))
    if on_wall.kind != k3.ON_WALL or {w.coords for w in on_wall.walls} != {(1, 0, 1), (-1, 0, -1)}:
        return False, f"exp(ih) classified {on_wall.kind}"
    plus = k3.exp_period(model, [0], [2])
    if k3.classify_period(model, plus).kind != k3.IN_P0_PLUS:
        return False, "exp(2ih) not in P0+"
    if k3.classify_period(model, plus.conjugate()).kind != k3.IN_P0_MINUS:
        return False, "conjugate of exp(2ih) not in P0-"
    return True, "O_X spherical, exp(ih) on the wall of (1,0,1), exp(2ih) in P0+ and its conjugate in P0-"


def check_k3_random_periods(rng: np.random.Generator) -> Tuple[bool, str]:
    model = k3.K3Model(2, MUKAI_TEST_GRAMS[1])
    checked = 0
    for _ in range(12):
        B = [Fraction(int(rng.integers(-6, 7)), 4) for _ in range(2)]
        omega = [Fraction(int(rng.integers(1, 4))), Fraction(int(rng.integers(-1, 2)), 3)]
        point = k3.exp_period(model, B, omega)
        result = k3.classify_period(model, point)
        if result.kind == k3.NOT_POSITIVE:
            continue
        checked += 1
        mirrored = k3.classify_period(model, point.conjugate())
        if result.component == mirrored.component:
            return False, f"{point.to_json()} and its conjugate share a component"
        if result.kind in (k3.IN_P0_PLUS, k3.IN_P0_MINUS):
            wider = lc.enumerate_norm(model.lattice, -2, result.wall_box + 1, orthogonal_to=[point.re, point.im])
            if wider:
                return False, f"wall {wider[0]} outside the box {result.wall_box}"
    return True, f"{checked} positive periods: conjugates swap components, wall scans complete"


def check_root_counts(rng: np.random.Generator) -> Tuple[bool, str]:
    names = ["A1", "A2", "A3", "A4", "D4", "D5", "E6", "E7", "E8"]
    for name in names:
        config = flops.ade_config(name)
        if len(config.roots) != flops.expected_root_count(name):
            return False, f"{name} has {len(config.roots)} roots"
    for name in ("A3", "D4"):
        if not flops.is_weyl_invariant(flops.ade_config(name)):
            return False, f"{name} roots not Weyl invariant"
    return True, f"root counts of {', '.join(names)} match; A3, D4 Weyl invariant"


def check_conifold_grid(rng: np.random.Generator) -> Tuple[bool, str]:
    betas = [Fraction(k, 10) for k in range(-50, 50)]
    omegas = [Fraction(k, 10) for k in range(-50, 50)]
    for row in flops.complement_grid(betas, omegas):
        excluded = row.chamber.region == flops.EXCLUDED
        if excluded != (row.omega == 0 and row.beta.denominator == 1) or excluded == row.in_complement:
            return False, f"excluded set wrong at ({row.beta}, {row.omega})"
        twisted = flops.classify_conifold(flops.SlicePoint.of(row.beta + 1, row.omega))
        if twisted.label.split("(")[0] != row.chamber.region or twisted.twist[0] != row.chamber.twist[0] + 1:
            return False, f"twist does not commute with classification at ({row.beta}, {row.omega})"
    if not flops.conifold_sequences_check().ok:
        return False, "conifold sequence checks failed"
    return True, f"{len(betas) * len(omegas)} grid points: excluded set is beta in Z on omega = 0, twist-equivariant"


def check_heart_axioms(rng: np.random.Generator) -> Tuple[bool, str]:
    for i in range(200):
        sigma = hs.random_stability_condition(rng, 1 + i % 6)
        report = hs.check_axioms(sigma)
        if not report.ok:
            return False, f"{sigma.to_json()}: {report.violations[0]}"
    return True, ("axioms (a)-(d) hold for 200 random stability conditions with n <= 6, "
                  "Hom rule and HN (n <= 5) checked by brute force")


def check_heart_hn_objects(rng: np.random.Generator) -> Tuple[bool, str]:
    for i in range(50):
        n = 1 + i % 5
        sigma = hs.random_stability_condition(rng, n)
        for a, b in sigma.heart.all_intervals():
            found = hs.brute_force_hn(sigma, a, b)
            if len(found) != 1 or found[0] != hs._interval_hn(sigma, a, b):
                return False, f"HN of M[{a},{b}] at n={n} disagrees with the brute-force search"
        obj = hs.random_object(rng, n)
        hn = hs.hn_filtration(sigma, obj)
        total = tuple(map(sum, zip(*hn.classes())))
        if total != obj.dimension_vector():
            return False, f"HN classes of {obj} do not add up"
        if any(p.phase <= q.phase for p, q in zip(hn.factors, hn.factors[1:])):
            return False, f"HN phases of {obj} not strictly decreasing"
    return True, "HN at 50 stability conditions (n <= 5): unique filtration matches brute force, classes add up"


def check_metric(rng: np.random.Generator) -> Tuple[bool, str]:
    slack = mpmath.mpf(10) ** -9
    for _ in range(500):
        n = int(rng.integers(1, 4))
        s1, s2, s3 = (hs.random_stability_condition(rng, n) for _ in range(3))
        if not hs.distance(s1, s1).exact_zero:
            return False, "d(s, s) != 0"
        d12, d21 = hs.distance(s1, s2).value, hs.distance(s2, s1).value
        if d12 != d21:
            return False, "distance not symmetric"
        if d12 > hs.distance(s1, s3).value + hs.distance(s3, s2).value + slack:
            return False, "triangle inequality fails"
    return True, "distance: zero on the diagonal, symmetric, triangle inequality on 500 triples"


def check_perturbation(rng: np.random.Generator) -> Tuple[bool, str]:
    pairs = 0
    for _ in range(1000):
        if pairs == 100:
            break
        n = int(rng.integers(1, 5))
        sigma = hs.random_stability_condition(rng, n, allow_real=False)
        t = hs.perturbation_threshold(sigma)
        if t == 0:
            continue
        pairs += 1
        deltas = [ExactComplex(t * Fraction(int(rng.integers(-100, 101)), 100),
                               t * Fraction(int(rng.integers(-100, 101)), 100)) for _ in range(n)]
        if hs.hn_classes(hs.perturb(sigma, deltas)) != hs.hn_classes(sigma):
            return False, f"HN changed under a perturbation below {t}"
    if pairs < 100:
        return False, f"only {pairs} stability conditions with a positive threshold"
    return True, "HN classes stable under 100 perturbations below the threshold"


def check_sl2z(rng: np.random.Generator) -> Tuple[bool, str]:
    for _ in range(1000):
        w1, w2 = sl2z.random_word(rng), sl2z.random_word(rng)
        if sl2z.matrix_of(w1 + w2) != sl2z.mat_mul(sl2z.matrix_of(w1), sl2z.matrix_of(w2)):
            return False, f"matrix_of not multiplicative on {sl2z.format_word(w1)} | {sl2z.format_word(w2)}"
        m = sl2z.matrix_of(w1)
        word = sl2z.decompose(m)
        if sl2z.matrix_of(word) != m or len(word) > sl2z.decompose_length_bound(m):
            return False, f"decompose fails on {sl2z.format_matrix(m)}"
        v = sl2z.ChargeVector(int(rng.integers(-9, 10)), int(rng.integers(-9, 10)))
        image = sl2z.act(w1, v)
        if image != (m[0][0] * v.r + m[0][1] * v.d, m[1][0] * v.r + m[1][1] * v.d):
            return False, "act disagrees with matrix_of"
    if not all(sl2z.relations_check().values()):
        return False, "relations fail"
    return True, "1000 word pairs: homomorphism, decomposition round trip within the length bound, action"


CHECKS: List[Tuple[str, CheckFn]] = [
    ("lattice-signatures", check_lattice_signatures),
    ("lattice-basis-change", check_lattice_basis_change),
    ("k3-reflections", check_mukai_reflections),
    ("k3-examples", check_k3_examples),
    ("k3-random-periods", check_k3_random_periods),
    ("flop-root-counts", check_root_counts),
    ("flop-conifold-grid", check_conifold_grid),
    ("heart-axioms", check_heart_axioms),
    ("heart-hn-objects", check_heart_hn_objects),
    ("heart-metric", check_metric),
    ("heart-perturbation", check_perturbation),
    ("sl2z", check_sl2z),
]


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


@dataclass
class SelfTestReport:
    seed: int
    results: List[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json(self) -> Dict[str, Any]:
        return {"seed": self.seed, "ok": self.ok,
                "checks": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in self.results]}

    def format_text(self) -> str:
        lines = [f"selftest seed={self.seed}"]
        for r in self.results:
            lines.append(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}")
        passed = sum(r.passed for r in self.results)
        lines.append(f"{passed}/{len(self.results)} checks passed")
        return "\n".join(lines) + "\n"


class SelfTestRunner:
    """Runs CHECKS with per-check generators, optionally on a thread pool."""

    def __init__(self, seed: int = 0, workers: Optional[int] = None):
        self.seed = seed
        self.workers = workers if workers is not None else int(os.getenv("STABLAB_WORKERS", "1"))

    def _run_one(self, index: int) -> CheckResult:
        name, fn = CHECKS[index]
        rng = np.random.default_rng([self.seed, index])
        status(f"🧪 {name}")
        try:
            passed, detail = fn(rng)
        except StabLabError as e:
            passed, detail = False, f"{type(e).__name__} ({e.invariant}): {e}"
        return CheckResult(name, passed, detail)

    def run(self) -> SelfTestReport:
        indices = range(len(CHECKS))
        if self.workers > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                results = list(pool.map(self._run_one, indices))
        else:
            results = [self._run_one(i) for i in indices]
        return SelfTestReport(self.seed, results)


def run_selftest(seed: int = 0, workers: Optional[int] = None) -> SelfTestReport:
    return SelfTestRunner(seed, workers).run()


if __name__ == "__main__":
    print(run_selftest(42).format_text(), end="")
