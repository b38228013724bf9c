"""Core data model for graded n-ary bracket algebras with two twisting maps.

An algebra here is a finite graded basis, a raw table of structure constants
for the n-ary bracket, and two even linear maps (the twists).  The table is
stored exactly as given: sign symmetry is a *checked* property, never an
enforced storage normalization, because the defining identities only
constrain specific twisted argument patterns.

Sign conventions used throughout (prefix-sum convention): for arguments
x_1, ..., x_n the k-th Jacobi term carries eps(X, Y_k) with
X = deg x_1 + ... + deg x_{n-1} and Y_k = deg y_1 + ... + deg y_{k-1}
(empty sum = identity degree).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

from .grading import Bicharacter, GradingGroup, GroupElement
from .linalg import (
    MatrixQ,
    RowReducer,
    SubspaceQ,
    Vector,
    is_zero_vec,
    unit_vec,
    vec,
    vec_scale,
    zero_vec,
)


class BracketTable:
    """Raw structure constants: map from ordered index tuples to vectors.

    Missing tuples mean the zero vector.  Zero values are dropped on
    construction and keys are kept sorted so identical tables print and
    serialize identically.
    """

    __slots__ = ("arity", "dim", "entries")

    def __init__(self, arity: int, dim: int, entries: Mapping[tuple[int, ...], Sequence]):
        self.arity = arity
        self.dim = dim
        table: dict[tuple[int, ...], Vector] = {}
        for key in sorted(entries):
            if len(key) != arity:
                raise ValueError(f"key {key} has length != arity {arity}")
            if any(not 0 <= i < dim for i in key):
                raise ValueError(f"key {key} out of range for dimension {dim}")
            value = vec(entries[key])
            if len(value) != dim:
                raise ValueError(f"value for {key} has length != dimension {dim}")
            if not is_zero_vec(value):
                table[tuple(int(i) for i in key)] = value
        self.entries = table

    def get(self, key: tuple[int, ...]) -> Optional[Vector]:
        return self.entries.get(key)

    def items_sorted(self):
        return sorted(self.entries.items())

    def __eq__(self, other):
        return (
            isinstance(other, BracketTable)
            and self.arity == other.arity
            and self.dim == other.dim
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"BracketTable(arity={self.arity}, dim={self.dim}, nonzero={len(self.entries)})"


@dataclass(frozen=True)
class HomogeneousMap:
    """Linear map of a fixed degree: sends the degree-g slice into degree g+d."""

    degree: GroupElement
    matrix: MatrixQ

    def apply(self, v: Sequence) -> Vector:
        return self.matrix.apply(vec(v))

    def is_even(self) -> bool:
        return self.degree.is_identity()


def hom_map_violations(
    m: MatrixQ,
    degree: GroupElement,
    src_degrees: Sequence[GroupElement],
    dst_degrees: Sequence[GroupElement],
) -> list[tuple[int, int]]:
    """Cells (i, j) with a nonzero entry that breaks the degree rule."""
    bad = []
    for i in range(m.rows):
        for j in range(m.cols):
            if m[i, j] != 0 and dst_degrees[i] != src_degrees[j] + degree:
                bad.append((i, j))
    return bad


@dataclass(frozen=True)
class ColorAlgebra:
    """Graded n-ary bracket algebra with twist maps alpha and beta.

    The constructor validates shapes only; the mathematical invariants
    (twist commutation, evenness of twists and bracket) are the business of
    :func:`check_axioms`, so that deliberately broken tables can be built
    and diagnosed.
    """

    group: GradingGroup
    eps: Bicharacter
    arity: int
    basis_degrees: tuple[GroupElement, ...]
    alpha: MatrixQ
    beta: MatrixQ
    bracket: BracketTable

    def __post_init__(self):
        if self.arity < 2:
            raise ValueError("arity must be >= 2")
        if self.eps.group != self.group:
            raise ValueError("bicharacter group differs from grading group")
        for d in self.basis_degrees:
            if d.group != self.group:
                raise ValueError("basis degree in wrong group")
        dim = len(self.basis_degrees)
        for name, m in (("alpha", self.alpha), ("beta", self.beta)):
            if m.rows != dim or m.cols != dim:
                raise ValueError(f"{name} must be {dim}x{dim}")
        if self.bracket.arity != self.arity or self.bracket.dim != dim:
            raise ValueError("bracket table shape mismatch")

    @property
    def dim(self) -> int:
        return len(self.basis_degrees)

    @cached_property
    def degree_positions(self) -> dict[tuple[int, ...], list[int]]:
        pos: dict[tuple[int, ...], list[int]] = {}
        for i, d in enumerate(self.basis_degrees):
            pos.setdefault(d.sort_key(), []).append(i)
        return pos

    @cached_property
    def units(self) -> tuple[Vector, ...]:
        return tuple(unit_vec(self.dim, i) for i in range(self.dim))

    @cached_property
    def alpha_cols(self) -> tuple[Vector, ...]:
        return tuple(self.alpha.col(j) for j in range(self.dim))

    @cached_property
    def beta_cols(self) -> tuple[Vector, ...]:
        return tuple(self.beta.col(j) for j in range(self.dim))

    @cached_property
    def beta2_cols(self) -> tuple[Vector, ...]:
        b2 = self.beta.matmul(self.beta)
        return tuple(b2.col(j) for j in range(self.dim))

    @cached_property
    def zero_vector(self) -> Vector:
        return zero_vec(self.dim)

    def eps_deg(self, a: GroupElement, b: GroupElement) -> Fraction:
        return self.eps(a, b)

    def degree_of_vector(self, v: Sequence) -> Optional[GroupElement]:
        """Common degree of a homogeneous vector; None for 0 or mixed support."""
        deg = None
        for i, x in enumerate(vec(v)):
            if x == 0:
                continue
            if deg is None:
                deg = self.basis_degrees[i]
            elif deg != self.basis_degrees[i]:
                return None
        return deg

    def identity_degree(self) -> GroupElement:
        return self.group.identity()


def _support(v: Sequence) -> list[tuple[int, object]]:
    return [(i, c) for i, c in enumerate(v) if c != 0]


def _eval_supports(L: ColorAlgebra, supports: Sequence[Sequence]) -> Vector:
    """Core expansion over precomputed (index, coefficient) supports."""
    table = L.bracket.entries
    acc = None
    for combo in itertools.product(*supports):
        key = tuple(i for i, _ in combo)
        value = table.get(key)
        if value is None:
            continue
        coeff = combo[0][1]
        for _, c in combo[1:]:
            coeff = coeff * c
        if acc is None:
            acc = [coeff * x for x in value]
        else:
            for i, x in enumerate(value):
                if x:
                    acc[i] += coeff * x
    return L.zero_vector if acc is None else tuple(acc)


def eval_bracket(L: ColorAlgebra, args: Sequence[Sequence]) -> Vector:
    """n-linear extension of the structure-constant table.

    Arguments are coordinate vectors; integer entries are fine (exactness
    is preserved because the table entries are rational).
    """
    if len(args) != L.arity:
        raise ValueError(f"expected {L.arity} arguments")
    supports = []
    for a in args:
        if len(a) != L.dim:
            raise ValueError("argument length != algebra dimension")
        s = _support(a)
        if not s:
            return L.zero_vector
        supports.append(s)
    return _eval_supports(L, supports)


def skew_symmetric_table(
    arity: int,
    degrees: Sequence[GroupElement],
    eps: Bicharacter,
    entries: Mapping[tuple[int, ...], Sequence],
) -> BracketTable:
    """Extend representative entries to a sign-consistent full table.

    Every adjacent transposition of arguments multiplies the value by
    -eps(deg_a, deg_b).  Conflicting assignments (including repeated-index
    tuples whose orbit forces the value to vanish) raise ValueError.
    """
    dim = len(degrees)
    table: dict[tuple[int, ...], Vector] = {}
    for key in sorted(entries):
        value = vec(entries[key])
        frontier = [(tuple(key), value)]
        seen: dict[tuple[int, ...], Vector] = {}
        while frontier:
            k, v = frontier.pop()
            if k in seen:
                if seen[k] != v:
                    raise ValueError(f"sign-inconsistent assignment at tuple {k}")
                continue
            seen[k] = v
            for p in range(arity - 1):
                swapped = list(k)
                swapped[p], swapped[p + 1] = swapped[p + 1], swapped[p]
                sign = -eps(degrees[k[p]], degrees[k[p + 1]])
                frontier.append((tuple(swapped), vec_scale(sign, v)))
        for k, v in seen.items():
            if k in table and table[k] != v:
                raise ValueError(f"conflicting entries reach tuple {k}")
            table[k] = v
    return BracketTable(arity, dim, table)


# ---------------------------------------------------------------------------
# check reports
# ---------------------------------------------------------------------------

PASS = "pass"
FAIL = "fail"
HYPOTHESIS_NOT_MET = "hypothesis-not-met"


@dataclass(frozen=True)
class Witness:
    indices: tuple[int, ...]
    lhs: Vector
    rhs: Vector
    detail: str = ""


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str
    checked: int = 0
    failures: int = 0
    witness: Optional[Witness] = None
    failing: tuple[tuple[int, ...], ...] = ()
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.status == PASS


@dataclass(frozen=True)
class AxiomReport:
    results: tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(r.status in (PASS, HYPOTHESIS_NOT_MET) for r in self.results)

    @property
    def all_pass(self) -> bool:
        return all(r.status == PASS for r in self.results)

    def result(self, name: str) -> CheckResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)


class _Collector:
    """Accumulates per-tuple outcomes, keeping the lexicographically first witness."""

    def __init__(self, name: str):
        self.name = name
        self.checked = 0
        self.failing: list[tuple[int, ...]] = []
        self.witness: Optional[Witness] = None

    def record(self, indices: tuple[int, ...], lhs: Vector, rhs: Vector, detail: str = ""):
        self.checked += 1
        if lhs != rhs:
            self.failing.append(indices)
            if self.witness is None:
                self.witness = Witness(indices, lhs, rhs, detail)

    def result(self) -> CheckResult:
        status = PASS if not self.failing else FAIL
        return CheckResult(
            self.name,
            status,
            checked=self.checked,
            failures=len(self.failing),
            witness=self.witness,
            failing=tuple(self.failing),
        )


def _evenness_result(L: ColorAlgebra) -> CheckResult:
    col = _Collector("evenness")
    degs = L.basis_degrees
    e = L.identity_degree()
    for name, m in (("alpha", L.alpha), ("beta", L.beta)):
        bad = hom_map_violations(m, e, degs, degs)
        col.checked += 1
        if bad:
            i, j = bad[0]
            col.failing.append((i, j))
            if col.witness is None:
                col.witness = Witness(
                    (i, j), (m[i, j],), (Fraction(0),), f"{name} not even at cell ({i},{j})"
                )
    for key, value in L.bracket.items_sorted():
        col.checked += 1
        want = degs[key[0]]
        for i in key[1:]:
            want = want + degs[i]
        for c, x in enumerate(value):
            if x != 0 and degs[c] != want:
                col.failing.append(key)
                if col.witness is None:
                    col.witness = Witness(
                        key, value, zero_vec(L.dim),
                        f"bracket value has degree-{degs[c].coords} support, "
                        f"expected degree {want.coords}",
                    )
                break
    return col.result()


def _twist_commute_result(L: ColorAlgebra) -> CheckResult:
    ab = L.alpha.matmul(L.beta)
    ba = L.beta.matmul(L.alpha)
    if ab == ba:
        return CheckResult("twists-commute", PASS, checked=1)
    cell = next(
        (i, j)
        for i in range(L.dim)
        for j in range(L.dim)
        if ab[i, j] != ba[i, j]
    )
    w = Witness(cell, (ab[cell],), (ba[cell],), "alpha.beta != beta.alpha")
    return CheckResult("twists-commute", FAIL, checked=1, failures=1, witness=w,
                       failing=(cell,))


def _skew_result(L: ColorAlgebra) -> CheckResult:
    n, dim = L.arity, L.dim
    col = _Collector("skew-symmetry")
    sup_b = [_support(v) for v in L.beta_cols]
    sup_a = [_support(v) for v in L.alpha_cols]
    zero = L.zero_vector

    def ev(sups):
        return zero if any(not s for s in sups) else _eval_supports(L, sups)

    for tup in itertools.product(range(dim), repeat=n):
        lhs = ev([sup_b[i] for i in tup[:-1]] + [sup_a[tup[-1]]])
        # adjacent swaps inside the beta block
        for k in range(n - 2):
            swapped = list(tup)
            swapped[k], swapped[k + 1] = swapped[k + 1], swapped[k]
            rhs = ev([sup_b[i] for i in swapped[:-1]] + [sup_a[swapped[-1]]])
            sign = -L.eps_deg(L.basis_degrees[tup[k]], L.basis_degrees[tup[k + 1]])
            col.record(tup + (k,), lhs, vec_scale(sign, rhs),
                       f"swap of slots {k + 1},{k + 2}")
        # final swap, exchanging which argument carries alpha
        rhs = ev([sup_b[i] for i in tup[: n - 2]] + [sup_b[tup[-1]], sup_a[tup[-2]]])
        sign = -L.eps_deg(L.basis_degrees[tup[-2]], L.basis_degrees[tup[-1]])
        col.record(tup + (n - 1,), lhs, vec_scale(sign, rhs),
                   "swap of the last two slots")
    return col.result()


def _jacobi_terms(
    L: ColorAlgebra, xs: tuple[int, ...], ys: tuple[int, ...]
) -> tuple[Vector, list[Vector], list[Fraction]]:
    """LHS and the n unsigned right-hand terms of the Jacobi identity."""
    n = L.arity
    bc, ac, b2c = L.beta_cols, L.alpha_cols, L.beta2_cols
    inner_lhs = eval_bracket(L, [bc[i] for i in ys[:-1]] + [ac[ys[-1]]])
    lhs = eval_bracket(L, [b2c[i] for i in xs] + [inner_lhs])
    terms = []
    signs = []
    x_deg = L.identity_degree()
    for i in xs:
        x_deg = x_deg + L.basis_degrees[i]
    prefix = L.identity_degree()
    for k in range(n):
        inner = eval_bracket(L, [bc[i] for i in xs] + [ac[ys[k]]])
        outer_args = [b2c[ys[j]] for j in range(k)] + [inner] + [
            b2c[ys[j]] for j in range(k + 1, n)
        ]
        terms.append(eval_bracket(L, outer_args))
        signs.append(L.eps_deg(x_deg, prefix))
        prefix = prefix + L.basis_degrees[ys[k]]
    return lhs, terms, signs


def _jacobi_result(L: ColorAlgebra) -> CheckResult:
    n, dim = L.arity, L.dim
    col = _Collector("jacobi")
    bc, ac, b2c = L.beta_cols, L.alpha_cols, L.beta2_cols
    sup_b = [_support(v) for v in bc]
    sup_a = [_support(v) for v in ac]
    sup_b2 = [_support(v) for v in b2c]
    zero = L.zero_vector

    def ev(sups):
        return zero if any(not s for s in sups) else _eval_supports(L, sups)

    # the twisted inner bracket of the left side depends only on the y-tuple
    inner_lhs_cache: dict[tuple[int, ...], list] = {}
    for ys in itertools.product(range(dim), repeat=n):
        v = ev([sup_b[i] for i in ys[:-1]] + [sup_a[ys[-1]]])
        inner_lhs_cache[ys] = _support(v)
    for xs in itertools.product(range(dim), repeat=n - 1):
        x_deg = L.identity_degree()
        for i in xs:
            x_deg = x_deg + L.basis_degrees[i]
        xs_b2 = [sup_b2[i] for i in xs]
        xs_b = [sup_b[i] for i in xs]
        cross = [_support(ev(xs_b + [sup_a[y]])) for y in range(dim)]
        for ys in itertools.product(range(dim), repeat=n):
            inner_sup = inner_lhs_cache[ys]
            lhs = ev(xs_b2 + [inner_sup]) if inner_sup else zero
            rhs = None
            prefix = L.identity_degree()
            for k in range(n):
                inner = cross[ys[k]]
                if inner:
                    term = ev(
                        [sup_b2[ys[j]] for j in range(k)]
                        + [inner]
                        + [sup_b2[ys[j]] for j in range(k + 1, n)]
                    )
                    if term is not zero:
                        sign = L.eps_deg(x_deg, prefix)
                        if rhs is None:
                            rhs = [sign * x for x in term]
                        else:
                            for i, x in enumerate(term):
                                if x:
                                    rhs[i] += sign * x
                prefix = prefix + L.basis_degrees[ys[k]]
            col.record(xs + ys, lhs, zero if rhs is None else tuple(rhs))
    return col.result()


def check_axioms(L: ColorAlgebra) -> AxiomReport:
    """All defining identities, each reported independently with a witness."""
    return AxiomReport(
        (
            _twist_commute_result(L),
            _evenness_result(L),
            _skew_result(L),
            _jacobi_result(L),
        )
    )


def check_jacobi_alternate(L: ColorAlgebra) -> AxiomReport:
    """Reordered Jacobi form: the inner bracket is moved to the last slot.

    Moving the k-th term's inner bracket across the trailing arguments
    picks up one factor -eps(deg y_k, deg y_j) per step plus the bulk factor
    eps(X, Ytilde) from commuting X past the bypassed y's, so the k-th
    coefficient is (-1)^(n-k) eps(X, Ytilde_k) eps(y_k, Ybar_{k+1}) with
    Ytilde_k = sum of deg y_l over l != k and Ybar_{k+1} = deg y_{k+1} + ...
    + deg y_n.  The parity factor is required for the reordered form to
    agree with the standard one (verified against worked examples).
    """
    n, dim = L.arity, L.dim
    bc, ac, b2c = L.beta_cols, L.alpha_cols, L.beta2_cols
    sup_b = [_support(v) for v in bc]
    sup_a = [_support(v) for v in ac]
    sup_b2 = [_support(v) for v in b2c]
    zero = L.zero_vector
    col = _Collector("jacobi-alternate")

    def ev(sups):
        return zero if any(not s for s in sups) else _eval_supports(L, sups)

    inner_lhs_cache: dict[tuple[int, ...], list] = {}
    for ys in itertools.product(range(dim), repeat=n):
        v = ev([sup_b[i] for i in ys[:-1]] + [sup_a[ys[-1]]])
        inner_lhs_cache[ys] = _support(v)
    for xs in itertools.product(range(dim), repeat=n - 1):
        x_deg = L.identity_degree()
        for i in xs:
            x_deg = x_deg + L.basis_degrees[i]
        xs_b2 = [sup_b2[i] for i in xs]
        xs_b = [sup_b[i] for i in xs]
        cross = [_support(ev(xs_b + [sup_a[y]])) for y in range(dim)]
        for ys in itertools.product(range(dim), repeat=n):
            inner_sup = inner_lhs_cache[ys]
            lhs = ev(xs_b2 + [inner_sup]) if inner_sup else zero
            rhs = None
            for k in range(n):
                inner = cross[ys[k]]
                if not inner:
                    continue
                rest = [ys[j] for j in range(n) if j != k]
                outer = ev([sup_b2[j] for j in rest] + [inner])
                if outer is zero:
                    continue
                y_tilde = L.identity_degree()
                for j in rest:
                    y_tilde = y_tilde + L.basis_degrees[j]
                y_bar = L.identity_degree()
                for j in range(k + 1, n):
                    y_bar = y_bar + L.basis_degrees[ys[j]]
                sign = (
                    L.eps_deg(x_deg, y_tilde)
                    * L.eps_deg(L.basis_degrees[ys[k]], y_bar)
                )
                if (n - k - 1) % 2:
                    sign = -sign
                if rhs is None:
                    rhs = [sign * x for x in outer]
                else:
                    for i, x in enumerate(outer):
                        if x:
                            rhs[i] += sign * x
            col.record(xs + ys, lhs, zero if rhs is None else tuple(rhs))
    return AxiomReport((col.result(),))


def check_multiplicative(L: ColorAlgebra) -> AxiomReport:
    """Do alpha and beta commute with the bracket on all basis tuples?"""
    n, dim = L.arity, L.dim
    results = []
    for name, m, cols in (("alpha", L.alpha, L.alpha_cols), ("beta", L.beta, L.beta_cols)):
        col = _Collector(f"multiplicative-{name}")
        for tup in itertools.product(range(dim), repeat=n):
            raw = L.bracket.get(tup)
            lhs = m.apply(raw) if raw is not None else zero_vec(dim)
            rhs = eval_bracket(L, [cols[i] for i in tup])
            col.record(tup, lhs, rhs)
        results.append(col.result())
    return AxiomReport(tuple(results))


def is_multiplicative(L: ColorAlgebra) -> bool:
    return check_multiplicative(L).all_pass


def is_morphism(f: HomogeneousMap, L: ColorAlgebra, L2: ColorAlgebra) -> bool:
    """Bracket- and twist-compatibility of an even map L -> L2."""
    if not f.is_even():
        raise ValueError("morphisms must be even (degree-zero) maps")
    m = f.matrix
    if m.cols != L.dim or m.rows != L2.dim:
        raise ValueError("map shape does not match the two algebras")
    if L.arity != L2.arity:
        return False
    if m.matmul(L.alpha) != L2.alpha.matmul(m):
        return False
    if m.matmul(L.beta) != L2.beta.matmul(m):
        return False
    f_cols = tuple(m.col(j) for j in range(L.dim))
    for tup in itertools.product(range(L.dim), repeat=L.arity):
        raw = L.bracket.get(tup)
        lhs = m.apply(raw) if raw is not None else zero_vec(L2.dim)
        rhs = eval_bracket(L2, [f_cols[i] for i in tup])
        if lhs != rhs:
            return False
    return True


# ---------------------------------------------------------------------------
# graded subspaces and substructures
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GradedSubspace:
    """Subspace spanned by homogeneous vectors, canonical RREF per degree."""

    basis_degrees: tuple[GroupElement, ...]
    components: tuple[tuple[GroupElement, SubspaceQ], ...]

    @property
    def ambient_dim(self) -> int:
        return len(self.basis_degrees)

    @property
    def dim(self) -> int:
        return sum(s.dim for _, s in self.components)

    @staticmethod
    def from_vectors(
        basis_degrees: Sequence[GroupElement], vectors: Iterable[Sequence]
    ) -> "GradedSubspace":
        """Graded span: each vector contributes its homogeneous components."""
        degs = tuple(basis_degrees)
        n = len(degs)
        by_degree: dict[tuple[int, ...], tuple[GroupElement, list[Vector]]] = {}
        for v in vectors:
            w = vec(v)
            if len(w) != n:
                raise ValueError("vector length != ambient dimension")
            parts: dict[tuple[int, ...], list[Fraction]] = {}
            for i, x in enumerate(w):
                if x != 0:
                    comp = parts.setdefault(degs[i].sort_key(), [Fraction(0)] * n)
                    comp[i] = x
            for key, comp in parts.items():
                deg = degs[next(i for i, x in enumerate(comp) if x != 0)]
                by_degree.setdefault(key, (deg, []))[1].append(tuple(comp))
        comps = []
        for key in sorted(by_degree):
            deg, vs = by_degree[key]
            sub = SubspaceQ.from_vectors(n, vs)
            if sub.dim:
                comps.append((deg, sub))
        return GradedSubspace(degs, tuple(comps))

    @staticmethod
    def zero(basis_degrees: Sequence[GroupElement]) -> "GradedSubspace":
        return GradedSubspace(tuple(basis_degrees), ())

    @staticmethod
    def full(basis_degrees: Sequence[GroupElement]) -> "GradedSubspace":
        n = len(basis_degrees)
        return GradedSubspace.from_vectors(
            basis_degrees, [unit_vec(n, i) for i in range(n)]
        )

    def basis_vectors(self) -> tuple[Vector, ...]:
        out: list[Vector] = []
        for _, sub in self.components:
            out.extend(sub.basis)
        return tuple(out)

    def contains(self, v: Sequence) -> bool:
        w = vec(v)
        if len(w) != self.ambient_dim:
            raise ValueError("dimension mismatch")
        comp_map = {deg.sort_key(): sub for deg, sub in self.components}
        parts: dict[tuple[int, ...], list[Fraction]] = {}
        for i, x in enumerate(w):
            if x != 0:
                key = self.basis_degrees[i].sort_key()
                parts.setdefault(key, [Fraction(0)] * self.ambient_dim)[i] = x
        for key, comp in parts.items():
            sub = comp_map.get(key)
            if sub is None or not sub.contains(tuple(comp)):
                return False
        return True

    def contains_subspace(self, other: "GradedSubspace") -> bool:
        return all(self.contains(v) for v in other.basis_vectors())

    def component(self, degree: GroupElement) -> SubspaceQ:
        for deg, sub in self.components:
            if deg == degree:
                return sub
        return SubspaceQ.zero(self.ambient_dim)

    def flatten(self) -> SubspaceQ:
        return SubspaceQ.from_vectors(self.ambient_dim, self.basis_vectors())


def full_space(L: ColorAlgebra) -> GradedSubspace:
    return GradedSubspace.full(L.basis_degrees)


def is_subalgebra(L: ColorAlgebra, H: GradedSubspace) -> bool:
    basis = H.basis_vectors()
    for v in basis:
        if not H.contains(L.alpha.apply(v)) or not H.contains(L.beta.apply(v)):
            return False
    for combo in itertools.product(basis, repeat=L.arity):
        if not H.contains(eval_bracket(L, combo)):
            return False
    return True


def is_ideal(L: ColorAlgebra, I: GradedSubspace, all_positions: bool = True) -> bool:
    """Bracket absorption: the distinguished element ranges over every slot.

    ``all_positions=False`` restricts the distinguished element to the
    first slot, the literal reading of the definition; the default matches
    how ideal closure is actually used in the ideal theorem's proof.
    """
    basis = I.basis_vectors()
    for v in basis:
        if not I.contains(L.alpha.apply(v)) or not I.contains(L.beta.apply(v)):
            return False
    n = L.arity
    positions = range(n) if all_positions else (0,)
    for v in basis:
        for p in positions:
            for rest in itertools.product(L.units, repeat=n - 1):
                args = list(rest[:p]) + [v] + list(rest[p:])
                if not I.contains(eval_bracket(L, args)):
                    return False
    return True


def _per_degree_nullspace(
    L: ColorAlgebra, constraint_images
) -> GradedSubspace:
    """Solve linear conditions degree block by degree block.

    ``constraint_images(i)`` yields, for basis index ``i``, the list of
    constraint vectors attached to e_i; a combination x = sum c_i e_i over
    one degree block satisfies the conditions iff every stacked row
    vanishes.
    """
    dim = L.dim
    comps = []
    for key in sorted(L.degree_positions):
        positions = L.degree_positions[key]
        images = [constraint_images(i) for i in positions]
        n_constraints = len(images[0])
        reducer = RowReducer(len(positions))
        for c in range(n_constraints):
            block = [images[t][c] for t in range(len(positions))]
            for out_coord in range(dim):
                row = [block[t][out_coord] for t in range(len(positions))]
                if any(row):
                    reducer.add_row(row)
            if reducer.is_full_rank():
                break
        kernel = reducer.nullspace()
        vectors = []
        for w in kernel.basis:
            full = [Fraction(0)] * dim
            for t, i in enumerate(positions):
                full[i] = w[t]
            vectors.append(tuple(full))
        if vectors:
            deg = L.basis_degrees[positions[0]]
            comps.append((deg, SubspaceQ.from_vectors(dim, vectors)))
    return GradedSubspace(L.basis_degrees, tuple(comps))


def center(L: ColorAlgebra) -> GradedSubspace:
    """Elements whose bracket with anything (in slot one) vanishes."""
    n = L.dim
    tuples = list(itertools.product(range(n), repeat=L.arity - 1))

    def images(i: int) -> list[Vector]:
        return [
            eval_bracket(L, [L.units[i]] + [L.units[j] for j in rest])
            for rest in tuples
        ]

    return _per_degree_nullspace(L, images)


def ab_center(L: ColorAlgebra) -> GradedSubspace:
    """Like :func:`center` but the other arguments run through alpha.beta images."""
    ab = L.alpha.matmul(L.beta)
    cols = [ab.col(j) for j in range(L.dim)]
    tuples = list(itertools.product(range(L.dim), repeat=L.arity - 1))

    def images(i: int) -> list[Vector]:
        return [
            eval_bracket(L, [L.units[i]] + [cols[j] for j in rest])
            for rest in tuples
        ]

    return _per_degree_nullspace(L, images)


def centralizer(L: ColorAlgebra, H: GradedSubspace) -> GradedSubspace:
    """{x : [x, h, y_2, ..., y_{n-1}] = 0 for h in H and basis y_i}."""
    hbasis = H.basis_vectors()
    if L.arity == 2:
        combos = [(h,) for h in hbasis]
    else:
        combos = [
            (h,) + tuple(L.units[j] for j in rest)
            for h in hbasis
            for rest in itertools.product(range(L.dim), repeat=L.arity - 2)
        ]

    def images(i: int) -> list[Vector]:
        return [eval_bracket(L, [L.units[i]] + list(c)) for c in combos]

    return _per_degree_nullspace(L, images)


def derived_sequence(L: ColorAlgebra, depth: int) -> list[GradedSubspace]:
    """[L_0, ..., L_depth] with L_{m+1} spanned by brackets of L_m basis tuples."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    seq = [full_space(L)]
    for _ in range(depth):
        basis = seq[-1].basis_vectors()
        outputs = [
            eval_bracket(L, combo)
            for combo in itertools.product(basis, repeat=L.arity)
        ]
        seq.append(GradedSubspace.from_vectors(L.basis_degrees, outputs))
    return seq


def central_sequence(L: ColorAlgebra, depth: int) -> list[GradedSubspace]:
    """[L^0, ..., L^depth] with L^{m+1} spanned by [L^m, L, ..., L]."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    seq = [full_space(L)]
    for _ in range(depth):
        basis = seq[-1].basis_vectors()
        outputs = [
            eval_bracket(L, [v] + [L.units[j] for j in rest])
            for v in basis
            for rest in itertools.product(range(L.dim), repeat=L.arity - 1)
        ]
        seq.append(GradedSubspace.from_vectors(L.basis_degrees, outputs))
    return seq


def check_ideal_theorem(L: ColorAlgebra, depth: int = 4) -> AxiomReport:
    """For involutive twists, the sequence members and the center are ideals."""
    ident = MatrixQ.identity(L.dim)
    involutive = (
        L.alpha.matmul(L.alpha) == ident and L.beta.matmul(L.beta) == ident
    )
    results = []
    named = []
    der = derived_sequence(L, depth)
    cen = central_sequence(L, depth)
    for m in range(1, depth + 1):
        named.append((f"derived[{m}]", der[m]))
        named.append((f"central[{m}]", cen[m]))
    named.append(("center", center(L)))
    for name, sub in named:
        outcome = is_ideal(L, sub)
        if involutive:
            status = PASS if outcome else FAIL
            note = ""
        else:
            status = HYPOTHESIS_NOT_MET
            note = f"twists not involutive; raw is_ideal = {outcome}"
        results.append(CheckResult(f"ideal:{name}", status, checked=1,
                                   failures=0 if outcome else 1, note=note))
    return AxiomReport(tuple(results))
