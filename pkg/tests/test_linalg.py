from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from colorlie.linalg import (
    MatrixQ,
    RowReducer,
    SubspaceQ,
    coordinates_in,
    nullspace,
    rref,
    solve_linear,
    subspace_intersect,
    subspace_membership,
    subspace_sum,
)

from oracles import nullspace_rows, rref_rows


def M(rows):
    return MatrixQ.from_rows(rows)


class TestRref:
    def test_proportional_rows(self):
        red, rank = rref(M([[2, 4], [1, 2]]))
        assert red.row_list() == [[1, 2], [0, 0]]
        assert rank == 1

    def test_identity(self):
        red, rank = rref(MatrixQ.identity(2))
        assert red == MatrixQ.identity(2)
        assert rank == 2

    def test_invertible_two_by_two(self):
        # determinant of [[1,2],[3,4]] is -2, nonzero by direct expansion
        assert Fraction(1) * 4 - Fraction(2) * 3 == -2
        red, rank = rref(M([[1, 2], [3, 4]]))
        assert red == MatrixQ.identity(2)
        assert rank == 2

    def test_input_unmodified(self):
        m = M([[1, 2], [3, 4]])
        rref(m)
        assert m == M([[1, 2], [3, 4]])


class TestNullspace:
    def test_zero_matrix(self):
        ker = nullspace(MatrixQ.zero(2, 2))
        assert ker.dim == 2

    def test_identity(self):
        assert nullspace(MatrixQ.identity(2)).dim == 0

    def test_rank_one(self):
        ker = nullspace(M([[1, 2], [0, 0]]))
        assert ker.dim == 1
        (v,) = ker.basis
        # direct multiplication: the kernel vector is annihilated, and the
        # span is that of (-2, 1)
        assert M([[1, 2], [0, 0]]).apply(v) == (Fraction(0), Fraction(0))
        assert M([[1, 2], [0, 0]]).apply((-2, 1)) == (Fraction(0), Fraction(0))
        assert subspace_membership(ker, [-2, 1])
        assert v == (Fraction(1), Fraction(-1, 2))


class TestSolve:
    def test_identity_system(self):
        assert solve_linear(MatrixQ.identity(2), [3, 5]) == (3, 5)

    def test_inconsistent(self):
        assert solve_linear(MatrixQ.zero(2, 2), [1, 0]) is None

    def test_residual(self):
        m = M([[1, 2], [0, 0]])
        x = solve_linear(m, [4, 0])
        assert x is not None
        assert m.apply(x) == (4, 0)


class TestSubspace:
    def test_membership_trivial(self):
        s = SubspaceQ.from_vectors(2, [[1, 0]])
        assert subspace_membership(s, [2, 0])
        assert not subspace_membership(s, [0, 1])

    def test_membership_solve(self):
        s = SubspaceQ.from_vectors(2, [[1, 1], [1, -1]])
        # (3,5) = 4*(1,1) - 1*(1,-1), solved exactly
        assert Fraction(4) - 1 == 3 and Fraction(4) + 1 == 5
        assert subspace_membership(s, [3, 5])

    def test_intersect_same(self):
        a = SubspaceQ.from_vectors(3, [[1, 0, 2], [0, 1, 1]])
        assert subspace_intersect(a, a) == a

    def test_intersect_perpendicular(self):
        a = SubspaceQ.from_vectors(2, [[1, 0]])
        b = SubspaceQ.from_vectors(2, [[0, 1]])
        assert subspace_intersect(a, b).dim == 0

    def test_intersect_line(self):
        a = SubspaceQ.from_vectors(2, [[1, 0], [0, 1]])
        b = SubspaceQ.from_vectors(2, [[1, 1]])
        assert subspace_intersect(a, b) == SubspaceQ.from_vectors(2, [[1, 1]])

    def test_canonical_equality(self):
        a = SubspaceQ.from_vectors(2, [[1, 1], [2, 0]])
        b = SubspaceQ.from_vectors(2, [[3, 1], [0, 7]])
        assert a == b  # same span, same stored representation

    def test_dimension_mismatch(self):
        s = SubspaceQ.from_vectors(2, [[1, 0]])
        with pytest.raises(ValueError):
            subspace_membership(s, [1, 0, 0])

    def test_coordinates(self):
        s = SubspaceQ.from_vectors(2, [[1, 1], [1, -1]])
        c = coordinates_in(s, [3, 5])
        assert c is not None
        got = [sum(ci * bi for ci, bi in zip(c, col)) for col in zip(*s.basis)]
        assert got == [3, 5]
        assert coordinates_in(SubspaceQ.from_vectors(2, [[1, 0]]), [0, 1]) is None


small_fracs = st.fractions(
    min_value=-4, max_value=4, max_denominator=3
)


def matrices(max_dim=4):
    return st.integers(2, max_dim).flatmap(
        lambda n: st.integers(2, max_dim).flatmap(
            lambda m_: st.lists(
                st.lists(small_fracs, min_size=m_, max_size=m_),
                min_size=n, max_size=n,
            ).map(MatrixQ.from_rows)
        )
    )


class TestProperties:
    @settings(max_examples=60, deadline=None)
    @given(matrices())
    def test_rref_idempotent(self, m):
        red, rank = rref(m)
        red2, rank2 = rref(red)
        assert red2 == red and rank2 == rank

    @settings(max_examples=60, deadline=None)
    @given(matrices())
    def test_rank_nullity(self, m):
        _, rank = rref(m)
        assert nullspace(m).dim + rank == m.cols

    @settings(max_examples=60, deadline=None)
    @given(matrices())
    def test_nullspace_annihilated(self, m):
        for v in nullspace(m).basis:
            assert all(x == 0 for x in m.apply(v))

    @settings(max_examples=60, deadline=None)
    @given(matrices())
    def test_solver_residual(self, m):
        b = m.apply(tuple(Fraction(1) for _ in range(m.cols)))
        x = solve_linear(m, b)
        assert x is not None and m.apply(x) == b

    @settings(max_examples=40, deadline=None)
    @given(matrices())
    def test_matches_textbook_oracle(self, m):
        red, rank = rref(m)
        orows, orank = rref_rows(m.row_list())
        assert rank == orank
        assert red.row_list() == orows
        lib = [list(v) for v in nullspace(m).basis]
        assert lib == [list(v) for v in nullspace_rows(m.row_list(), m.cols)]


class TestRowReducer:
    def test_incremental_matches_batch(self):
        rows = [[1, 2, 3], [2, 4, 6], [0, 1, 1], [1, 0, 1]]
        red = RowReducer(3)
        for r in rows:
            red.add_row(r)
        assert [list(v) for v in red.nullspace().basis] == [
            list(v) for v in nullspace_rows(rows, 3)
        ]

    def test_full_rank_short_circuits(self):
        red = RowReducer(2)
        red.add_row([1, 0])
        red.add_row([0, 1])
        assert red.is_full_rank()
        assert not red.add_row([1, 1])
        assert red.nullspace().dim == 0

    def test_sum(self):
        a = SubspaceQ.from_vectors(3, [[1, 0, 0]])
        b = SubspaceQ.from_vectors(3, [[0, 1, 0]])
        assert subspace_sum(a, b).dim == 2


class TestInverse:
    def test_singular_detected(self):
        assert MatrixQ.zero(1, 1).inverse() is None
        assert M([[1, 2], [2, 4]]).inverse() is None

    @settings(max_examples=40, deadline=None)
    @given(matrices(3))
    def test_inverse_round_trip(self, m):
        if m.rows != m.cols:
            assert m.inverse() is None
            return
        inv = m.inverse()
        _, rank = rref(m)
        if rank < m.rows:
            assert inv is None
        else:
            assert m.matmul(inv) == MatrixQ.identity(m.rows)
            assert inv.matmul(m) == MatrixQ.identity(m.rows)
