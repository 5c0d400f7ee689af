from fractions import Fraction
from itertools import product

import pytest

from models import CnfFormula
from modules.harness import cnf_corpus
from modules.plaisted import (
    DeskScaleExceededError, SupersparsePoly, assign_primes, encode_plaisted, literal_support, modulus,
    plaisted_clause_poly, plaisted_conjunction, plaisted_homogenize, spurious_example_system,
)
from modules.reductions import ReductionError, cnf_brute_force
from modules.resultants import sylvester_zero_test
from utils.field import FieldCtx

PRIMES = {1: 2, 2: 3}
WORKED_EXAMPLE = CnfFormula(2, ((1, 2), (-1,), (-2,)))


class TestClausePolynomials:
    def test_positive_literal(self):
        assert plaisted_clause_poly([1], PRIMES) == SupersparsePoly({3: 1, 0: -1})

    def test_negative_literal(self):
        assert plaisted_clause_poly([-2], PRIMES) == SupersparsePoly({0: 1, 2: 1, 4: 1})

    def test_disjunction_is_lcm(self):
        # lcm(x^3 - 1, x^2 - 1) = (x^2 - 1)(x^2 + x + 1)
        assert plaisted_clause_poly([1, 2], PRIMES) == SupersparsePoly({4: 1, 3: 1, 1: -1, 0: -1})

    def test_literal_support(self):
        assert literal_support(1, PRIMES, 6) == {1, 3}
        assert literal_support(-2, PRIMES, 6) == {3, 6}

    def test_primes_follow_variable_order(self):
        phi = CnfFormula(4, ((2, -4), (4,)))
        assert assign_primes(phi) == {2: 2, 4: 3}

    def test_desk_scale_cap(self):
        with pytest.raises(DeskScaleExceededError, match="desk-scale exceeded"):
            modulus({1: 2, 2: 3, 3: 5}, max_modulus=10)
        with pytest.raises(DeskScaleExceededError):
            plaisted_clause_poly([1], {1: 2, 2: 3, 3: 5}, max_modulus=29)

    def test_clause_polynomials_divide_and_are_squarefree(self):
        primes = {1: 2, 2: 3, 3: 5}
        binomial = SupersparsePoly.binomial(30).to_sympy()
        for width in (1, 2, 3):
            for variables in product((1, 2, 3), repeat=width):
                if len(set(variables)) != width:
                    continue
                for signs in product((1, -1), repeat=width):
                    literals = [s * v for s, v in zip(signs, variables)]
                    p = plaisted_clause_poly(literals, primes).to_sympy()
                    assert binomial.rem(p).is_zero, literals
                    assert p.gcd(p.diff()).degree() == 0, literals


class TestConjunction:
    def test_worked_example(self):
        clauses = [plaisted_clause_poly(c, PRIMES) for c in WORKED_EXAMPLE.clauses]
        p, binomial = plaisted_conjunction(clauses, 6)
        assert p == SupersparsePoly({3: -1, 4: 1, 5: 2, 6: 9, 7: 2, 8: 1, 9: -1})
        assert binomial == SupersparsePoly({6: 1, 0: -1})
        assert str(p) == "-x^3+x^4+2x^5+9x^6+2x^7+x^8-x^9"

    def test_single_clause(self):
        p, _ = plaisted_conjunction([plaisted_clause_poly([1], PRIMES)], 6)
        assert p == SupersparsePoly({6: 2, 3: -1, 9: -1})

    def test_empty_conjunction(self):
        p, binomial = plaisted_conjunction([], 6)
        assert p.is_zero()
        assert binomial == SupersparsePoly.binomial(6)

    def test_non_divisor_rejected(self):
        with pytest.raises(ReductionError):
            plaisted_conjunction([SupersparsePoly({1: 1, 0: 2})], 6)

    def test_reciprocal_symmetry(self, rng):
        clauses = [plaisted_clause_poly(c, PRIMES) for c in WORKED_EXAMPLE.clauses]
        p, _ = plaisted_conjunction(clauses, 6)
        for num, den in rng.integers(1, 50, size=(5, 2)):
            x = Fraction(int(num), int(den))
            assert p.evaluate(x) == x ** 12 * p.evaluate(1 / x)


class TestEncoder:
    def test_homogenize_pair(self, q, variables):
        x, y = variables(q, 2)
        sys = plaisted_homogenize((SupersparsePoly({1: 1, 0: -1}), SupersparsePoly({1: 1, 0: 1})))
        assert list(sys.polys) == [x - y, x + y]
        assert sys.var_names == ("x", "y")
        assert not sys_verdict_is_satisfiable(sys)

    def test_homogenized_binomial(self, q, variables):
        x, y = variables(q, 2)
        sys = plaisted_homogenize((SupersparsePoly.binomial(6), SupersparsePoly.binomial(6)))
        assert sys.polys[0] == x ** 6 - y ** 6

    def test_worked_example_is_unsatisfiable(self):
        sys = encode_plaisted(WORKED_EXAMPLE)
        assert sys.degrees == (9, 6)
        assert sys.metadata["M"] == "6"
        assert sys.metadata["primes"] == "X1:2,X2:3"
        assert not sys_verdict_is_satisfiable(sys)

    def test_positive_characteristic_refused(self):
        with pytest.raises(ReductionError, match="only sound"):
            encode_plaisted(WORKED_EXAMPLE, ctx=FieldCtx(3))
        with pytest.raises(ReductionError):
            plaisted_homogenize((SupersparsePoly.binomial(2), SupersparsePoly.binomial(2)), FieldCtx(2))

    def test_agrees_with_brute_force(self):
        for phi in cnf_corpus(2, 2):
            expected = cnf_brute_force(phi) is not None
            assert sys_verdict_is_satisfiable(encode_plaisted(phi)) is expected, phi

    @pytest.mark.slow
    def test_agrees_with_brute_force_on_three_variables(self):
        for phi in cnf_corpus(3, 1):
            expected = cnf_brute_force(phi) is not None
            assert sys_verdict_is_satisfiable(encode_plaisted(phi)) is expected, phi


class TestSpuriousExample:
    def test_root_at_infinity(self, q):
        sys = spurious_example_system()
        names = list(sys.var_names)
        point = [q.zero()] * sys.num_vars
        point[names.index("x8")] = q.one()
        point[names.index("x9")] = q.one()
        assert sys.vanishes_at(point)

    def test_all_ones(self, q):
        sys = spurious_example_system()
        point = [q.one()] * sys.num_vars
        assert sys.polys[0](point) == 13

    def test_shape(self):
        sys = spurious_example_system()
        assert sys.num_polys == 10
        assert sys.var_names[:2] == ("x", "x0")
        assert all(d in (1, 2) for d in sys.degrees)


def sys_verdict_is_satisfiable(sys) -> bool:
    verdict = sylvester_zero_test(sys)
    assert verdict.is_decided
    return verdict.is_satisfiable
