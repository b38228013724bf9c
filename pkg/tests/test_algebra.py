import itertools
import random
from fractions import Fraction

import pytest

from colorlie.algebra import (
    BracketTable,
    ColorAlgebra,
    GradedSubspace,
    HomogeneousMap,
    ab_center,
    center,
    centralizer,
    central_sequence,
    check_axioms,
    check_ideal_theorem,
    check_jacobi_alternate,
    derived_sequence,
    eval_bracket,
    is_ideal,
    is_morphism,
    is_multiplicative,
    is_subalgebra,
    skew_symmetric_table,
)
from colorlie.linalg import MatrixQ, unit_vec, vec

from generators import random_skew_table, random_two_step, random_zero_bracket
from oracles import (
    oracle_ab_center,
    oracle_center,
    oracle_centralizer,
    oracle_eval,
    oracle_sequence,
    span_rows,
    unit,
)


def flat_basis(sub: GradedSubspace):
    return span_rows([list(v) for v in sub.basis_vectors()])


class TestEval:
    def test_stored_entries(self, ternary4):
        L = ternary4
        e = [unit_vec(4, i) for i in range(4)]
        assert eval_bracket(L, [e[0], e[1], e[3]]) == unit_vec(4, 0)
        assert eval_bracket(L, [e[1], e[2], e[3]]) == unit_vec(4, 2)
        # a skew-extended entry: swapping the first two arguments of
        # [e1,e2,e4] flips the sign (the two degrees pair to +1 under eps)
        assert eval_bracket(L, [e[1], e[0], e[3]]) == vec([-1, 0, 0, 0])

    def test_zero_argument(self, ternary4):
        z = (Fraction(0),) * 4
        assert eval_bracket(ternary4, [z, unit_vec(4, 1), unit_vec(4, 3)]) == z

    def test_multilinearity(self, ternary4):
        L = ternary4
        rng = random.Random(11)
        for _ in range(25):
            a = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
            b = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
            u = vec([rng.randint(-2, 2) for _ in range(4)])
            v = vec([rng.randint(-2, 2) for _ in range(4)])
            w = vec([rng.randint(-2, 2) for _ in range(4)])
            x = vec([rng.randint(-2, 2) for _ in range(4)])
            mix = tuple(a * ui + b * vi for ui, vi in zip(u, v))
            left = eval_bracket(L, [w, mix, x])
            right = tuple(
                a * p + b * q
                for p, q in zip(eval_bracket(L, [w, u, x]), eval_bracket(L, [w, v, x]))
            )
            assert left == right

    def test_matches_oracle_eval(self, ternary4):
        L = ternary4
        rng = random.Random(5)
        for _ in range(20):
            args = [vec([rng.randint(-2, 2) for _ in range(4)]) for _ in range(3)]
            assert eval_bracket(L, args) == oracle_eval(L, args)


class TestSkewTable:
    def test_inconsistent_assignment_rejected(self, ternary4):
        L = ternary4
        # assigning both a tuple and its swap with the wrong sign must fail
        with pytest.raises(ValueError):
            skew_symmetric_table(
                3, L.basis_degrees, L.eps,
                {(0, 1, 3): (1, 0, 0, 0), (1, 0, 3): (1, 0, 0, 0)},
            )

    def test_even_repeat_forced_zero(self, ternary4):
        L = ternary4
        # e2 and e4 are even, so a repeated pair forces the value to zero
        with pytest.raises(ValueError):
            skew_symmetric_table(
                3, L.basis_degrees, L.eps, {(1, 1, 3): (1, 0, 0, 0)}
            )

    def test_odd_repeat_allowed(self, ternary4):
        L = ternary4
        # e1 is odd: eps(1,1) = -1 makes the swap sign +1, no forcing
        t = skew_symmetric_table(
            3, L.basis_degrees, L.eps, {(0, 0, 1): (0, 1, 0, 0)}
        )
        assert t.get((0, 0, 1)) == vec([0, 1, 0, 0])


class TestAxioms:
    def test_reference_passes(self, ternary4):
        rep = check_axioms(ternary4)
        assert [r.name for r in rep.results] == [
            "twists-commute", "evenness", "skew-symmetry", "jacobi",
        ]
        assert rep.all_pass

    def test_negated_twists_pass(self, ternary4_neg):
        assert check_axioms(ternary4_neg).all_pass
        assert is_multiplicative(ternary4_neg)

    def test_zero_bracket_passes(self, abelian2):
        assert check_axioms(abelian2).all_pass

    def test_wrong_degree_constant_fails_evenness(self, ternary4):
        L = ternary4
        entries = dict(L.bracket.entries)
        entries[(0, 1, 3)] = unit_vec(4, 1)  # even value in an odd-degree slot
        bad = ColorAlgebra(L.group, L.eps, 3, L.basis_degrees, L.alpha, L.beta,
                           BracketTable(3, 4, entries))
        rep = check_axioms(bad)
        res = rep.result("evenness")
        assert res.status == "fail"
        assert res.witness is not None and res.witness.indices == (0, 1, 3)

    def test_noncommuting_twists_reported(self, ternary4):
        L = ternary4
        a = MatrixQ.from_rows([[1, 0, 0, 0], [0, 1, 0, 0],
                               [0, 0, 1, 0], [0, 1, 0, 1]])
        b = MatrixQ.from_rows([[1, 0, 0, 0], [0, 0, 0, 1],
                               [0, 0, 1, 0], [0, 1, 0, 0]])
        bad = ColorAlgebra(L.group, L.eps, 3, L.basis_degrees, a, b, L.bracket)
        assert bad.alpha.matmul(bad.beta) != bad.beta.matmul(bad.alpha)
        assert check_axioms(bad).result("twists-commute").status == "fail"

    def test_skew_violation_witnessed(self, ternary4):
        L = ternary4
        entries = dict(L.bracket.entries)
        del entries[(1, 0, 3)]  # drop one orbit member: skew now fails
        bad = ColorAlgebra(L.group, L.eps, 3, L.basis_degrees, L.alpha, L.beta,
                           BracketTable(3, 4, entries))
        res = check_axioms(bad).result("skew-symmetry")
        assert res.status == "fail" and res.witness is not None

    def test_multiplicative_detects_bad_twist(self, ternary4):
        L = ternary4
        a = MatrixQ.from_rows([[1, 0, 0, 0], [0, 2, 0, 0],
                               [0, 0, 1, 0], [0, 0, 0, 1]])
        weird = ColorAlgebra(L.group, L.eps, 3, L.basis_degrees, a, a, L.bracket)
        assert not is_multiplicative(weird)
        assert is_multiplicative(L)


class TestJacobiEquivalence:
    def test_reference(self, ternary4, ternary4_neg):
        for L in (ternary4, ternary4_neg):
            std = check_axioms(L).result("jacobi")
            alt = check_jacobi_alternate(L).results[0]
            assert std.status == alt.status == "pass"

    def test_random_skew_tables_agree(self):
        rng = random.Random(20260809)
        agree_fail = 0
        for _ in range(100):
            L = random_skew_table(rng)
            std = check_axioms(L).result("jacobi")
            alt = check_jacobi_alternate(L).results[0]
            assert std.status == alt.status
            assert set(std.failing) == set(alt.failing)
            if std.status == "fail":
                agree_fail += 1
        assert agree_fail > 50  # generic perturbations do fail


class TestSubstructures:
    def test_full_and_zero_are_subalgebras(self, ternary4):
        L = ternary4
        assert is_subalgebra(L, GradedSubspace.full(L.basis_degrees))
        assert is_subalgebra(L, GradedSubspace.zero(L.basis_degrees))
        assert is_ideal(L, GradedSubspace.full(L.basis_degrees))
        assert is_ideal(L, GradedSubspace.zero(L.basis_degrees))

    def test_derived_subspace_is_ideal(self, ternary4):
        L = ternary4
        I = derived_sequence(L, 1)[1]
        # brute force: all placements of an ideal-basis vector
        for v in I.basis_vectors():
            for p in range(3):
                for rest in itertools.product(range(4), repeat=2):
                    args = [unit_vec(4, j) for j in rest]
                    args.insert(p, v)
                    assert I.contains(eval_bracket(L, args))
        assert is_ideal(L, I)
        assert is_subalgebra(L, I)

    def test_span_e2_not_ideal(self, ternary4):
        L = ternary4
        H = GradedSubspace.from_vectors(L.basis_degrees, [unit_vec(4, 1)])
        assert not is_ideal(L, H)

    def test_span_e3_is_ideal(self, ternary4):
        # every bracket involving e3 lands back in its line
        L = ternary4
        H = GradedSubspace.from_vectors(L.basis_degrees, [unit_vec(4, 2)])
        assert is_ideal(L, H)

    def test_center_matches_oracle(self, ternary4, ternary4_neg, abelian2):
        for L in (ternary4, ternary4_neg, abelian2):
            assert flat_basis(center(L)) == oracle_center(L)

    def test_center_of_reference_is_zero(self, ternary4):
        assert center(ternary4).dim == 0

    def test_zero_bracket_center_is_everything(self, abelian2):
        assert center(abelian2).dim == 2

    def test_ab_center_matches_oracle(self, ternary4, ternary4_neg):
        for L in (ternary4, ternary4_neg):
            assert flat_basis(ab_center(L)) == oracle_ab_center(L)

    def test_ab_center_equals_center_for_identity_twists(self, ternary4):
        assert ab_center(ternary4).components == center(ternary4).components

    def test_centralizer_matches_oracle(self, ternary4):
        L = ternary4
        H = GradedSubspace.from_vectors(L.basis_degrees, [unit_vec(4, 2)])
        got = flat_basis(centralizer(L, H))
        assert got == oracle_centralizer(L, [unit(4, 2)])

    def test_centralizer_trivial_cases(self, ternary4, abelian2):
        L = ternary4
        assert centralizer(L, GradedSubspace.zero(L.basis_degrees)).dim == 4
        H = GradedSubspace.full(abelian2.basis_degrees)
        assert centralizer(abelian2, H).dim == 2

    def test_sequences_match_oracle(self, ternary4):
        L = ternary4
        der = derived_sequence(L, 3)
        cen = central_sequence(L, 3)
        ods = oracle_sequence(L, 3, descending=False)
        ocs = oracle_sequence(L, 3, descending=True)
        assert [flat_basis(s) for s in der] == ods
        assert [flat_basis(s) for s in cen] == ocs

    def test_sequence_dimensions(self, ternary4):
        L = ternary4
        der = derived_sequence(L, 3)
        cen = central_sequence(L, 3)
        assert [s.dim for s in der] == [4, 2, 0, 0]
        assert [s.dim for s in cen] == [4, 2, 2, 2]

    def test_zero_bracket_sequences(self, abelian2):
        der = derived_sequence(abelian2, 2)
        cen = central_sequence(abelian2, 2)
        assert [s.dim for s in der] == [2, 0, 0]
        assert [s.dim for s in cen] == [2, 0, 0]

    def test_center_is_ideal_for_identity_twists(self, ternary4, abelian2):
        for L in (ternary4, abelian2):
            assert is_ideal(L, center(L))
        rng = random.Random(3)
        for _ in range(5):
            L = random_two_step(rng)
            assert is_ideal(L, center(L))

    def test_homogeneity_of_returned_subspaces(self, ternary4):
        L = ternary4
        for sub in (center(L), derived_sequence(L, 2)[1], central_sequence(L, 2)[1]):
            for deg, comp in sub.components:
                for v in comp.basis:
                    degs = {L.basis_degrees[i] for i, x in enumerate(v) if x != 0}
                    assert degs == {deg}


class TestIdealTheorem:
    def test_involutive_reference(self, ternary4, ternary4_neg):
        for L in (ternary4, ternary4_neg):
            rep = check_ideal_theorem(L, depth=3)
            assert all(r.status == "pass" for r in rep.results)

    def test_zero_bracket(self, abelian2):
        rep = check_ideal_theorem(abelian2, depth=2)
        assert all(r.status == "pass" for r in rep.results)

    def test_non_involutive_gated(self, ternary4):
        L = ternary4
        two = MatrixQ.identity(4).scale(2)
        weird = ColorAlgebra(L.group, L.eps, 3, L.basis_degrees, two, two, L.bracket)
        rep = check_ideal_theorem(weird, depth=2)
        assert all(r.status == "hypothesis-not-met" for r in rep.results)


class TestMorphism:
    def test_identity(self, ternary4):
        L = ternary4
        f = HomogeneousMap(L.group.identity(), MatrixQ.identity(4))
        assert is_morphism(f, L, L)

    def test_diagonal_endomorphism(self, ternary4):
        L = ternary4
        f = HomogeneousMap(L.group.identity(), MatrixQ.from_rows(
            [[1, 0, 0, 0], [0, 2, 0, 0], [0, 0, 1, 0], [0, 0, 0, Fraction(1, 2)]]
        ))
        assert is_morphism(f, L, L)

    def test_scaling_one_generator_breaks_it(self, ternary4):
        L = ternary4
        f = HomogeneousMap(L.group.identity(), MatrixQ.from_rows(
            [[1, 0, 0, 0], [0, 2, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
        ))
        # [f e2, e3, e4] doubles while f([e2,e3,e4]) does not
        assert not is_morphism(f, L, L)

    def test_odd_degree_rejected(self, ternary4):
        L = ternary4
        f = HomogeneousMap(L.group.element((1,)), MatrixQ.identity(4))
        with pytest.raises(ValueError):
            is_morphism(f, L, L)


class TestRandomValidFamilies:
    def test_two_step_algebras_pass(self):
        rng = random.Random(99)
        for _ in range(12):
            L = random_two_step(rng)
            assert check_axioms(L).all_pass
            assert is_multiplicative(L)

    def test_zero_bracket_twisted_pass(self):
        rng = random.Random(7)
        for _ in range(8):
            L = random_zero_bracket(rng)
            assert check_axioms(L).all_pass
            assert is_multiplicative(L)
