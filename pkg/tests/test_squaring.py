from itertools import product

import pytest

from config import Config
from models import (
    BoolsysInstance, Disjunction, EpsilonVector, IsTrue, ModelError, Negation, SquaringMethod, SquaringPlan,
)
from modules.harness import boolsys_corpus, genericity_failure_rate
from modules.reductions import boolsys_brute_force, boolsys_to_system
from modules.squaring import (
    RNG_NAME, SquaringError, epsilon_determinant, epsilon_matrix, ground_field_square, lambda_chain_square,
    lambda_plan_for, pad_degrees, random_square, random_square_trials, structured_epsilons,
)
from modules.verification import enumerate_projective_roots, structured_sign_oracle
from utils.field import FieldCtx
from utils.linalg import bareiss_determinant
from utils.poly import Poly, PolySystem, check_homogeneous

CONTRADICTION = BoolsysInstance(1, (IsTrue(1), Negation(1, 1)))


def _chained(inst, ctx, value=None, strict=True):
    sys = boolsys_to_system(inst, ctx)
    return lambda_chain_square(sys, lambda_plan_for(sys, value, strict))


def _unsatisfiable_quadrics(rng, ctx):
    """l1^2, l2^2 and a random quadric, with l1 and l2 independent linear forms in two variables."""
    x0, x1 = (Poly.variable(ctx, 2, i) for i in range(2))
    while True:
        a, b, c, d = (int(v) for v in rng.integers(0, ctx.characteristic, size=4))
        if (a * d - b * c) % ctx.characteristic:
            break
    l1 = x0 * a + x1 * b
    l2 = x0 * c + x1 * d
    extra = x0 ** 2 * int(rng.integers(0, 3)) + x0 * x1 + x1 ** 2 * int(rng.integers(0, 3))
    return PolySystem(ctx, ["x0", "x1"], [l1 * l1, l2 * l2, extra])


class TestPadDegrees:
    def test_mixed_degrees(self, f3, variables, system):
        x0, x1 = variables(f3, 2)
        padded = pad_degrees(system(f3, [x0 + x1, x0 ** 2]))
        assert list(padded.polys) == [x0 ** 2 + x0 * x1, x0 * x1 + x1 ** 2, x0 ** 2]
        assert padded.metadata["padded"] == "2"

    def test_root_set_preserved(self, f3, variables, system):
        x0, x1 = variables(f3, 2)
        sys = system(f3, [x0, x0 ** 2])
        padded = pad_degrees(sys)
        assert list(padded.polys) == [x0 ** 2, x0 * x1, x0 ** 2]
        assert enumerate_projective_roots(padded) == enumerate_projective_roots(sys)

    def test_equal_degrees_untouched(self, f3, variables, system):
        x0, x1 = variables(f3, 2)
        sys = system(f3, [x0 ** 2, x1 ** 2])
        assert pad_degrees(sys) is sys

    def test_lcm_of_degrees(self, q, variables, system):
        x0, x1 = variables(q, 2)
        padded = pad_degrees(system(q, [x0 ** 2, x1 ** 3]))
        assert set(padded.degrees) == {6}
        assert padded.num_polys == 4


class TestRandomSquare:
    def _satisfiable(self, f5, variables, system):
        x0, x1 = variables(f5, 2)
        return system(f5, [x0 ** 2 - x1 ** 2, x0 * x1 - x1 ** 2, x0 ** 2 - x0 * x1])

    def test_root_inclusion(self, f5, variables, system):
        sys = self._satisfiable(f5, variables, system)
        squared = random_square(sys, SquaringPlan.random(f5, seed=7))
        assert squared.num_polys == squared.num_vars == 2
        assert squared.ctx.characteristic == 5
        assert squared.vanishes_at([squared.ctx.one(), squared.ctx.one()])

    def test_default_sampling_field(self, f5, variables, system):
        sys = self._satisfiable(f5, variables, system)
        squared = random_square(sys, SquaringPlan.random(f5, seed=7))
        # 4 * 3^2 = 36 elements needed, so F_125
        assert squared.ctx.order == 125
        assert squared.metadata["field_size"] == "125"

    def test_seeded_and_replayable(self, f5, variables, system):
        sys = self._satisfiable(f5, variables, system)
        plan = SquaringPlan.random(f5, seed=12345, field_size=25)
        first, second = random_square(sys, plan), random_square(sys, plan)
        assert first == second
        assert first.metadata["seed"] == "12345"
        assert first.metadata["rng"] == RNG_NAME

    def test_trials_use_spawned_seeds(self, f5, variables, system):
        sys = self._satisfiable(f5, variables, system)
        trials = random_square_trials(sys, SquaringPlan.random(f5, seed=3, field_size=25), 4)
        assert [t.metadata["trial"] for t in trials] == ["0", "1", "2", "3"]
        assert len({t.polys for t in trials}) > 1

    def test_explicit_identity_alpha(self, f5, variables, system):
        sys = self._satisfiable(f5, variables, system)
        plan = SquaringPlan(SquaringMethod.RANDOM, f5, alpha=((1, 0, 0), (0, 1, 0)))
        squared = random_square(sys, plan)
        assert squared.polys == sys.polys[:2]
        assert squared.metadata["alpha"] == "explicit"

    def test_degree_mismatch(self, f5, variables, system):
        x0, x1 = variables(f5, 2)
        with pytest.raises(SquaringError, match="pad_degrees"):
            random_square(system(f5, [x0, x1 ** 2, x0 ** 2]), SquaringPlan.random(f5, seed=1))

    def test_plan_needs_alpha_or_seed(self, f5):
        with pytest.raises(ModelError):
            SquaringPlan(SquaringMethod.RANDOM, f5)

    def test_generic_squaring_stays_unsatisfiable(self, f2, variables, system):
        x0, x1 = variables(f2, 2)
        sys = system(f2, [x0, x1, x0 + x1])
        stats = genericity_failure_rate(sys, [Config().default_field_size(sys.n)], trials=100, seed=2024)
        (result,) = stats.values()
        assert result.trials == 100
        assert result.indeterminate == 0
        assert result.spurious <= 25

    def test_failure_rate_drops_as_field_grows(self, f2, variables, system):
        x0, x1 = variables(f2, 2)
        sys = system(f2, [x0, x1, x0 + x1])
        stats = genericity_failure_rate(sys, [4, 64], trials=60, seed=99)
        assert stats[64].rate < stats[4].rate
        assert stats[64].rate <= 0.25

    @pytest.mark.slow
    def test_genericity_over_many_systems(self, f3, rng):
        for _ in range(20):
            sys = _unsatisfiable_quadrics(rng, f3)
            stats = genericity_failure_rate(sys, [Config().default_field_size(sys.n)], trials=100,
                                            seed=int(rng.integers(1 << 32)))
            (result,) = stats.values()
            assert result.indeterminate == 0
            assert result.spurious <= 25


class TestLambdaChain:
    def test_contradiction_rows(self, q, variables):
        squared = _chained(CONTRADICTION, q)
        x0, x1, y1 = variables(q, 3)
        assert squared.var_names == ("x0", "x1", "y1")
        assert list(squared.polys) == [x0 ** 2 - x1 ** 2, x0 * (x1 + x0) + y1 ** 2 * 3, x0 * x1 * 2 - y1 ** 2]
        assert squared.metadata["lambda"] == "3"
        assert not structured_sign_oracle(squared).is_satisfiable

    def test_small_lambda_admits_spurious_root(self, q):
        squared = _chained(CONTRADICTION, q, value=-1, strict=False)
        assert squared.metadata["strict"] == "false"
        verdict = structured_sign_oracle(squared)
        assert verdict.is_satisfiable
        assert verdict.witness.point[2] == 2
        assert verdict.witness.powers == (1, 1, 2)

    def test_strict_lambda_bound(self, q):
        with pytest.raises(SquaringError):
            lambda_plan_for(boolsys_to_system(CONTRADICTION, q), 2)

    def test_empty_chain_returns_input(self, q):
        sys = boolsys_to_system(BoolsysInstance(1, (IsTrue(1),)), q)
        assert lambda_chain_square(sys, lambda_plan_for(sys)) is sys

    def test_extension_chain(self, f3):
        squared = _chained(CONTRADICTION, f3)
        assert squared.ctx.degree == 2
        assert squared.metadata["modulus"] == "t^2+1"
        assert not structured_sign_oracle(squared).is_satisfiable

    def test_extension_degree_must_match(self, f3):
        sys = boolsys_to_system(CONTRADICTION, f3)
        with pytest.raises(SquaringError):
            lambda_chain_square(sys, SquaringPlan.lambda_ext(3, 3))

    def test_trivial_disjunction_row(self, q, variables):
        inst = BoolsysInstance(1, (IsTrue(1), Disjunction(1, 1, 1)))
        sys = boolsys_to_system(inst, q)
        assert sys.polys[2].is_zero()
        squared = lambda_chain_square(sys, lambda_plan_for(sys))
        x0, x1, y1 = variables(q, 3)
        assert list(squared.polys) == [x0 ** 2 - x1 ** 2, x0 * (x1 + x0) + y1 ** 2 * 3, -(y1 ** 2)]
        assert structured_sign_oracle(squared).is_satisfiable

    def test_rejects_non_gadget_systems(self, q, variables, system):
        x0, x1 = variables(q, 2)
        sys = system(q, [x0 ** 2 + x1 ** 2, x0 * x1, x1 ** 2])
        with pytest.raises(SquaringError, match="gadget"):
            lambda_chain_square(sys, SquaringPlan.lambda_int())

    @pytest.mark.parametrize("char", [0, 2, 3, 5])
    def test_output_shape_and_root_inclusion(self, char, boolsys_point):
        ctx = FieldCtx(char)
        for inst in boolsys_corpus(2, 3):
            sys = boolsys_to_system(inst, ctx)
            if sys.num_polys <= sys.num_vars:
                continue
            squared = lambda_chain_square(sys, lambda_plan_for(sys))
            assert squared.is_square
            assert squared.num_polys == sys.num_polys
            assert set(squared.degrees) <= {0, 2}
            assignment = boolsys_brute_force(inst)
            if assignment is not None:
                point = [squared.ctx.element(c) for c in boolsys_point(assignment, ctx)]
                point += [squared.ctx.zero()] * (squared.num_vars - len(point))
                assert squared.vanishes_at(point), inst


class TestEpsilon:
    def test_determinant_values(self, q):
        lam = q.element(3)
        assert epsilon_determinant(EpsilonVector((2, 4)), lam) == -14
        assert epsilon_determinant(EpsilonVector((0, 0, 0)), lam) == 0
        assert epsilon_determinant(EpsilonVector((1, 0, 0)), q.element(7)) == 1

    def test_matrix_determinant_matches(self, q, rng):
        for m in range(1, 5):
            eps = EpsilonVector(tuple(int(v) for v in rng.integers(-4, 5, size=m)))
            lam = q.element(int(rng.integers(-5, 6)))
            assert bareiss_determinant(epsilon_matrix(eps, lam), q) == epsilon_determinant(eps, lam)

    def test_base_three_uniqueness(self):
        for m in range(1, 6):
            for digits in product((-2, -1, 0, 1, 2), repeat=m):
                total = sum(d * 3 ** i for i, d in enumerate(digits))
                assert (total == 0) is all(d == 0 for d in digits)

    @pytest.mark.parametrize("p", [2, 3, 5])
    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_extension_lambda_is_sound(self, p, m):
        lam = SquaringPlan.lambda_ext(p, m).lambda_
        for values in product(range(p), repeat=m):
            det = epsilon_determinant(EpsilonVector(values), lam)
            assert det.is_zero() is all(v == 0 for v in values)

    def test_gadget_values_over_q(self, q):
        seen = set()
        for inst in boolsys_corpus(2, 1):
            sys = boolsys_to_system(inst, q)
            n = inst.num_vars
            for signs in product((1, -1), repeat=n):
                eps = structured_epsilons(sys.polys[n:], (1,) + signs, q)
                seen |= {e.as_integer() for e in eps.values}
        assert seen == {-4, -2, 0, 2, 4}

    def test_is_true_row_at_truth(self, q, variables):
        x0, x1 = variables(q, 2)
        eps = structured_epsilons([x0 * (x1 + x0)], (1, -1), q)
        assert eps.values == (q.zero(),)

    def test_zero_assignment(self, q, variables):
        x0, x1 = variables(q, 2)
        assert structured_epsilons([x0 * (x1 + x0), x0 * x1], (0, 0), q).is_zero()

    def test_gadget_violation(self, q, variables):
        x0, x1 = variables(q, 2)
        with pytest.raises(SquaringError):
            structured_epsilons([x0 * x1], (1, 2), q)


class TestGroundField:
    def test_contradiction_over_f5(self, f5):
        sys = boolsys_to_system(CONTRADICTION, f5)
        squared = ground_field_square(sys)
        assert squared.var_names == ("x0", "x1", "y1", "lam")
        assert squared.num_polys == squared.num_vars == 4
        assert squared.metadata["modulus"] == "t^2+2"
        assert all(check_homogeneous(f) is not None for f in squared.polys)
        x0, x1, y1, lam = (Poly.variable(f5, 4, i) for i in range(4))
        assert squared.polys[1] == x0 * x0 * (x1 + x0) + lam * y1 ** 2
        assert squared.polys[2] == x0 * x1 * 2 - y1 ** 2
        assert squared.polys[3] == lam ** 2 + x0 ** 2 * 2
        assert not structured_sign_oracle(squared).is_satisfiable

    def test_satisfiable_source(self, f5):
        sys = boolsys_to_system(BoolsysInstance(1, (IsTrue(1), IsTrue(1))), f5)
        verdict = structured_sign_oracle(ground_field_square(sys))
        assert verdict.is_satisfiable
        assert verdict.witness.ctx.degree == 2

    def test_y_powers(self, f3):
        inst = BoolsysInstance(1, (IsTrue(1), IsTrue(1), Negation(1, 1), IsTrue(1)))
        squared = ground_field_square(boolsys_to_system(inst, f3))
        m = 4
        for i in range(1, m):
            index = squared.var_names.index(f"y{i}")
            powers = {e[index] for f in squared.polys for e in f.terms if e[index]}
            assert powers == {m - i + 1}

    @pytest.mark.parametrize("equation, expected", [(IsTrue(1), True), (Negation(1, 1), False)])
    def test_trivial_disjunction_row(self, f5, equation, expected):
        inst = BoolsysInstance(1, (equation, Disjunction(1, 1, 1)))
        squared = ground_field_square(boolsys_to_system(inst, f5))
        assert squared.num_polys == squared.num_vars == 4
        assert structured_sign_oracle(squared).is_satisfiable is expected

    def test_reducible_modulus_rejected(self, f5):
        sys = boolsys_to_system(CONTRADICTION, f5)
        with pytest.raises(SquaringError, match="reducible"):
            ground_field_square(sys, (1, 0, 1))
        with pytest.raises(SquaringError, match="degree"):
            ground_field_square(sys, (2, 1))

    def test_needs_prime_field(self, q):
        with pytest.raises(SquaringError):
            ground_field_square(boolsys_to_system(CONTRADICTION, q))

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_output_shape_and_equivalence(self, p):
        ctx = FieldCtx(p)
        for inst in boolsys_corpus(2, 3):
            sys = boolsys_to_system(inst, ctx)
            if sys.num_polys <= sys.num_vars:
                continue
            squared = ground_field_square(sys)
            assert squared.num_polys == squared.num_vars == sys.num_polys + 1
            expected = boolsys_brute_force(inst) is not None
            assert structured_sign_oracle(squared).is_satisfiable is expected, inst
