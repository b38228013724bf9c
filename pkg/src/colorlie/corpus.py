"""Bundled reference algebras used by the CLI corpus and the test suite."""

from __future__ import annotations

from fractions import Fraction

from .algebra import BracketTable, ColorAlgebra, skew_symmetric_table
from .grading import builtin_bicharacter
from .linalg import MatrixQ


def four_dim_ternary() -> ColorAlgebra:
    """The 4-dimensional ternary reference algebra over the Z_2 sign grading.

    Basis: e1, e3 odd; e2, e4 even (0-based indices 0..3).  Nonzero
    representative brackets: [e1,e2,e4] = e1 and [e2,e3,e4] = e3; the full
    table is the sign-consistent extension.  Twists are the identity.  The
    derived sequence has dimensions 4, 2, 0 and the descending central
    sequence stabilizes at dimension 2.
    """
    eps = builtin_bicharacter("Z2")
    grp = eps.group
    odd, even = grp.element((1,)), grp.element((0,))
    degrees = (odd, even, odd, even)
    table = skew_symmetric_table(
        3,
        degrees,
        eps,
        {
            (0, 1, 3): (1, 0, 0, 0),
            (1, 2, 3): (0, 0, 1, 0),
        },
    )
    ident = MatrixQ.identity(4)
    return ColorAlgebra(grp, eps, 3, degrees, ident, ident, table)


def four_dim_ternary_negated_twists() -> ColorAlgebra:
    """Same table as :func:`four_dim_ternary` with alpha = beta = -id.

    For odd arity the negated identity is an algebra automorphism, so this
    is a multiplicative example with nontrivial twists.
    """
    L = four_dim_ternary()
    neg = MatrixQ.identity(4).scale(Fraction(-1))
    return ColorAlgebra(L.group, L.eps, 3, L.basis_degrees, neg, neg, L.bracket)


def zero_algebra(dim: int = 2, arity: int = 3) -> ColorAlgebra:
    """Abelian algebra over the trivially graded Z_2 setting (all even)."""
    eps = builtin_bicharacter("Z2")
    grp = eps.group
    degrees = tuple(grp.element((0,)) for _ in range(dim))
    ident = MatrixQ.identity(dim)
    return ColorAlgebra(grp, eps, arity, degrees, ident, ident,
                        BracketTable(arity, dim, {}))


def zero_algebra_singular_twists(dim: int = 2, arity: int = 3) -> ColorAlgebra:
    """Abelian algebra whose twists are the zero map (not surjective)."""
    L = zero_algebra(dim, arity)
    z = MatrixQ.zero(dim, dim)
    return ColorAlgebra(L.group, L.eps, arity, L.basis_degrees, z, z, L.bracket)
