from itertools import product

import pytest

from models import BoolsysInstance, CnfFormula, Disjunction, IsTrue, ModelError, Negation, PartitionInstance
from modules.harness import boolsys_corpus, cnf_corpus, partition_corpus
from modules.reductions import (
    ReductionError, boolsys_brute_force, boolsys_to_system, cnf_brute_force, cnf_to_boolsys, hhn_to_hn,
    partition_bounded_system, partition_feasible, partition_to_system, weight_bits,
)
from modules.verification import enumerate_affine_roots, enumerate_projective_roots, structured_sign_oracle
from utils.field import FieldCtx
from utils.poly import PolySystem


class TestPartition:
    def test_encoding_of_small_instance(self, q, variables):
        sys = partition_to_system(PartitionInstance((1, 1, 2)))
        x0, x1, x2, x3 = variables(q, 4)
        assert list(sys.polys) == [x0 ** 2 - x1 ** 2, x0 ** 2 - x2 ** 2, x0 ** 2 - x3 ** 2, x1 + x2 + x3 * 2]
        assert sys.metadata["method"] == "partition"
        assert sys.vanishes_at([q.element(v) for v in (1, 1, 1, -1)])
        assert structured_sign_oracle(sys).is_satisfiable

    def test_single_odd_weight_is_unsatisfiable(self):
        verdict = structured_sign_oracle(partition_to_system(PartitionInstance((1,))))
        assert not verdict.is_satisfiable
        assert verdict.is_decided

    def test_feasible_split(self):
        weights = (3, 5, 8)
        signs = partition_feasible(PartitionInstance(weights))
        assert signs is not None
        assert sum(s * w for s, w in zip(signs, weights)) == 0

    @pytest.mark.parametrize("weights", [(1,), (1, 2), (2, 3, 4, 7), (1, 1, 1)])
    def test_infeasible(self, weights):
        assert partition_feasible(PartitionInstance(weights)) is None

    def test_weights_must_be_non_negative(self):
        with pytest.raises(ModelError):
            PartitionInstance((1, -1))

    def test_weight_bits(self):
        assert weight_bits(0) == [0]
        assert weight_bits(5) == [1, 0, 1]
        assert weight_bits(6) == [0, 1, 1]


class TestBoundedPartition:
    def test_coefficients_and_degrees_are_bounded(self):
        sys = partition_bounded_system(PartitionInstance((1, 1, 2)))
        assert max(f.max_abs_coefficient() for f in sys.polys) <= 2
        assert max(sys.degrees) <= 2
        assert sys.is_square
        assert structured_sign_oracle(sys).is_satisfiable

    def test_zero_weight(self, q):
        sys = partition_bounded_system(PartitionInstance((0,)))
        assert sys.var_names == ("x0", "x1", "W1_0")
        verdict = structured_sign_oracle(sys)
        assert verdict.is_satisfiable
        assert verdict.witness.point[2] == 0

    def test_chain_for_weight_five(self, q, variables):
        sys = partition_bounded_system(PartitionInstance((5,)))
        assert sys.var_names == ("x0", "x1", "W1_0", "W1_1", "W1_2")
        x0, x1, w0, w1, w2 = variables(q, 5)
        assert list(sys.polys[1:4]) == [w2 - x0, w1 - w2 * 2, w0 - (w1 * 2 + x0)]
        assert sys.polys[-1] == w0 * x1
        # W1_0 = 5 x0 on every root of the chain
        point = [q.element(v) for v in (1, 1, 5, 2, 1)]
        assert all(f(point).is_zero() for f in sys.polys[1:4])
        assert not structured_sign_oracle(sys).is_satisfiable

    @pytest.mark.parametrize("encoder", [partition_to_system, partition_bounded_system])
    def test_agrees_with_subset_sum(self, encoder):
        for inst in partition_corpus(3, 6):
            expected = partition_feasible(inst) is not None
            assert structured_sign_oracle(encoder(inst)).is_satisfiable is expected, inst

    @pytest.mark.slow
    @pytest.mark.parametrize("encoder", [partition_to_system, partition_bounded_system])
    def test_agrees_with_subset_sum_on_random_instances(self, encoder):
        for inst in partition_corpus(0, 20, samples=60, sample_max_n=10, seed=11):
            expected = partition_feasible(inst) is not None
            assert structured_sign_oracle(encoder(inst)).is_satisfiable is expected, inst


class TestBoolsys:
    def test_is_true_over_f3(self, f3, variables):
        sys = boolsys_to_system(BoolsysInstance(1, (IsTrue(1),)), f3)
        x0, x1 = variables(f3, 2)
        assert list(sys.polys) == [x0 ** 2 - x1 ** 2, x0 * (x1 + x0)]
        assert sys.vanishes_at([f3.element(1), f3.element(2)])

    def test_is_true_over_f2(self, f2, variables):
        sys = boolsys_to_system(BoolsysInstance(1, (IsTrue(1),)), f2)
        x0, x1 = variables(f2, 2)
        assert list(sys.polys) == [x0 * x1 - x1 ** 2, x0 * (x1 + x0)]
        assert sys.vanishes_at([f2.one(), f2.one()])

    def test_contradiction_over_q(self, q):
        inst = BoolsysInstance(1, (IsTrue(1), Negation(1, 1)))
        assert boolsys_brute_force(inst) is None
        assert not structured_sign_oracle(boolsys_to_system(inst, q)).is_satisfiable

    def test_metadata(self, q):
        sys = boolsys_to_system(BoolsysInstance(2, (Disjunction(1, 1, 2),)), q)
        assert sys.metadata == {"method": "boolsys", "gadget_vars": "2"}

    def test_instance_rejects_out_of_range_variables(self):
        with pytest.raises(ModelError):
            BoolsysInstance(1, (Negation(1, 2),))

    @pytest.mark.parametrize("char", [0, 2, 3, 5])
    def test_truth_convention(self, char, boolsys_point):
        ctx = FieldCtx(char)
        for inst in boolsys_corpus(2, 2):
            sys = boolsys_to_system(inst, ctx)
            for assignment in inst.assignments():
                point = boolsys_point(assignment, ctx)
                assert sys.vanishes_at(point) is inst.is_satisfied_by(assignment)

    @pytest.mark.parametrize("char", [0, 2, 3, 5])
    def test_agrees_with_brute_force(self, char):
        ctx = FieldCtx(char)
        for inst in boolsys_corpus(2, 3):
            expected = boolsys_brute_force(inst) is not None
            assert structured_sign_oracle(boolsys_to_system(inst, ctx)).is_satisfiable is expected, inst

    @pytest.mark.slow
    @pytest.mark.parametrize("char", [0, 2, 3, 5])
    def test_agrees_with_brute_force_exhaustively(self, char):
        ctx = FieldCtx(char)
        for inst in boolsys_corpus(3, 4):
            expected = boolsys_brute_force(inst) is not None
            assert structured_sign_oracle(boolsys_to_system(inst, ctx)).is_satisfiable is expected, inst

    def test_f3_roots_use_signs(self, f3):
        inst = BoolsysInstance(2, (IsTrue(1), Negation(2, 1)))
        roots = enumerate_projective_roots(boolsys_to_system(inst, f3))
        assert roots
        for point in roots:
            assert all(c in (f3.element(1), f3.element(-1)) for c in point)


class TestCnf:
    def test_unit_clause(self):
        inst = cnf_to_boolsys(CnfFormula(1, ((1,),)))
        assert inst.num_vars == 2
        assert inst.equations == (Disjunction(2, 1, 1), IsTrue(2))

    def test_negated_literal(self):
        inst = cnf_to_boolsys(CnfFormula(2, ((1, -2),)))
        assert inst.num_vars == 4
        assert inst.equations == (Negation(3, 2), Disjunction(4, 1, 3), IsTrue(4))

    def test_three_literals_associate_left(self):
        inst = cnf_to_boolsys(CnfFormula(3, ((1, 2, 3),)))
        assert inst.equations == (Disjunction(4, 1, 2), Disjunction(5, 4, 3), IsTrue(5))

    def test_negation_aux_is_shared(self):
        inst = cnf_to_boolsys(CnfFormula(2, ((-1, 2), (-1,))))
        negations = [eq for eq in inst.equations if isinstance(eq, Negation)]
        assert negations == [Negation(3, 1)]

    def test_contradiction(self):
        phi = CnfFormula(1, ((1,), (-1,)))
        assert cnf_brute_force(phi) is None
        assert boolsys_brute_force(cnf_to_boolsys(phi)) is None

    def test_empty_formula(self):
        with pytest.raises(ReductionError):
            cnf_to_boolsys(CnfFormula(2, ()))

    def test_wide_clause_rejected(self):
        with pytest.raises(ModelError):
            CnfFormula(4, ((1, 2, 3, 4),))

    def test_assignments_restrict_bijectively(self):
        for phi in cnf_corpus(2, 2):
            inst = cnf_to_boolsys(phi)
            restricted = [
                tuple(a[:phi.num_vars]) for a in inst.assignments() if inst.is_satisfied_by(a)
            ]
            satisfying = [a for a in product((False, True), repeat=phi.num_vars) if phi.is_satisfied_by(a)]
            assert sorted(restricted) == satisfying, phi


class TestHomogeneousToAffine:
    def test_single_square(self, f3, variables, system):
        (x1,) = variables(f3, 1)
        affine = hhn_to_hn(system(f3, [x1 ** 2], names=["x1"]))
        assert affine.var_names == ("x1", "y_x1")
        assert not affine.homogeneous
        assert affine.metadata["method"] == "affine"
        assert enumerate_affine_roots(affine) == []

    def test_difference_of_squares(self, f3, variables, system):
        x0, x1 = variables(f3, 2)
        affine = hhn_to_hn(system(f3, [x0 ** 2 - x1 ** 2]))
        point = [f3.element(v) for v in (1, 1, 1, 0)]
        assert affine.vanishes_at(point)

    def test_product(self, f3, variables, system):
        x0, x1 = variables(f3, 2)
        affine = hhn_to_hn(system(f3, [x0 * x1]))
        assert affine.vanishes_at([f3.element(v) for v in (1, 0, 1, 0)])

    @pytest.mark.parametrize("max_vars, max_equations", [
        (1, 3),
        pytest.param(2, 2, marks=pytest.mark.slow),
    ])
    def test_equisatisfiable_over_f3(self, f3, max_vars, max_equations):
        for inst in boolsys_corpus(max_vars, max_equations):
            sys = boolsys_to_system(inst, f3)
            projective = bool(enumerate_projective_roots(sys))
            affine = bool(enumerate_affine_roots(hhn_to_hn(sys)))
            assert projective is affine, inst

    def test_affine_output_is_not_homogeneous(self, f3, variables):
        x0, x1 = variables(f3, 2)
        affine = hhn_to_hn(PolySystem(f3, ["x0", "x1"], [x0 ** 2 + x1 ** 2]))
        assert affine.degrees == (2, 2)
