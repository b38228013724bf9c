"""Exact rational linear algebra kernel.

Everything downstream (axiom checkers, derivation-space solvers, subspace
computations) runs on top of this module.  All arithmetic is done with
``fractions.Fraction``; there is no floating point anywhere, so identities
either hold exactly or fail exactly.

Subspaces are kept in reduced row echelon form, which is a unique normal
form: two subspaces are equal iff their stored bases are identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

QQ = Fraction

Vector = tuple[Fraction, ...]


def vec(entries: Iterable) -> Vector:
    return tuple(Fraction(e) for e in entries)


def zero_vec(n: int) -> Vector:
    return (Fraction(0),) * n


def unit_vec(n: int, i: int) -> Vector:
    return tuple(Fraction(1 if j == i else 0) for j in range(n))


def vec_add(a: Vector, b: Vector) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: Vector, b: Vector) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(c: Fraction, a: Vector) -> Vector:
    return tuple(c * x for x in a)


def is_zero_vec(a: Vector) -> bool:
    return all(x == 0 for x in a)


@dataclass(frozen=True)
class MatrixQ:
    """Dense rational matrix, row-major, immutable."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"entry count {len(self.entries)} != {self.rows}x{self.cols}"
            )

    @staticmethod
    def from_rows(rows: Sequence[Sequence]) -> "MatrixQ":
        r = len(rows)
        c = len(rows[0]) if r else 0
        flat = []
        for row in rows:
            if len(row) != c:
                raise ValueError("ragged rows")
            flat.extend(Fraction(x) for x in row)
        return MatrixQ(r, c, tuple(flat))

    @staticmethod
    def identity(n: int) -> "MatrixQ":
        return MatrixQ(
            n, n, tuple(Fraction(1 if i == j else 0) for i in range(n) for j in range(n))
        )

    @staticmethod
    def zero(rows: int, cols: int) -> "MatrixQ":
        return MatrixQ(rows, cols, (Fraction(0),) * (rows * cols))

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def row_list(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def apply(self, v: Vector) -> Vector:
        """Matrix-vector product (column-vector convention)."""
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        out = []
        for i in range(self.rows):
            base = i * self.cols
            s = Fraction(0)
            for j, x in enumerate(v):
                if x:
                    s += self.entries[base + j] * x
            out.append(s)
        return tuple(out)

    def matmul(self, other: "MatrixQ") -> "MatrixQ":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        flat = []
        for i in range(self.rows):
            for j in range(other.cols):
                s = Fraction(0)
                for k in range(self.cols):
                    a = self.entries[i * self.cols + k]
                    if a:
                        s += a * other.entries[k * other.cols + j]
                flat.append(s)
        return MatrixQ(self.rows, other.cols, tuple(flat))

    def add(self, other: "MatrixQ") -> "MatrixQ":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch")
        return MatrixQ(
            self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries))
        )

    def sub(self, other: "MatrixQ") -> "MatrixQ":
        return self.add(other.scale(Fraction(-1)))

    def scale(self, c) -> "MatrixQ":
        c = Fraction(c)
        return MatrixQ(self.rows, self.cols, tuple(c * a for a in self.entries))

    def power(self, k: int) -> "MatrixQ":
        if self.rows != self.cols:
            raise ValueError("power of non-square matrix")
        if k < 0:
            inv = self.inverse()
            if inv is None:
                raise ValueError("matrix not invertible")
            return inv.power(-k)
        out = MatrixQ.identity(self.rows)
        base = self
        while k:
            if k & 1:
                out = out.matmul(base)
            base = base.matmul(base)
            k >>= 1
        return out

    def is_zero(self) -> bool:
        return all(e == 0 for e in self.entries)

    def inverse(self) -> Optional["MatrixQ"]:
        """Inverse, or None for a singular (or non-square) matrix."""
        if self.rows != self.cols:
            return None
        n = self.rows
        _, rank = rref(self)
        if rank < n:
            return None
        aug = [list(self.row(i)) + [Fraction(1 if j == i else 0) for j in range(n)]
               for i in range(n)]
        red, _ = _rref_rows(aug)
        return MatrixQ.from_rows([row[n:] for row in red[:n]])


def _rref_rows(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], int]:
    """In-place Gauss-Jordan to reduced row echelon form; returns (rows, rank)."""
    if not rows:
        return rows, 0
    ncols = len(rows[0])
    pivot_row = 0
    for col in range(ncols):
        sel = None
        for r in range(pivot_row, len(rows)):
            if rows[r][col] != 0:
                sel = r
                break
        if sel is None:
            continue
        rows[pivot_row], rows[sel] = rows[sel], rows[pivot_row]
        pv = rows[pivot_row][col]
        if pv != 1:
            inv = Fraction(1) / pv
            rows[pivot_row] = [x * inv for x in rows[pivot_row]]
        prow = rows[pivot_row]
        for r in range(len(rows)):
            if r == pivot_row:
                continue
            f = rows[r][col]
            if f:
                rows[r] = [x - f * y for x, y in zip(rows[r], prow)]
        pivot_row += 1
        if pivot_row == len(rows):
            break
    return rows, pivot_row


def rref(m: MatrixQ) -> tuple[MatrixQ, int]:
    """Unique reduced row echelon form of ``m`` and its rank."""
    rows, rank = _rref_rows(m.row_list())
    return MatrixQ.from_rows(rows) if rows else m, rank


@dataclass(frozen=True)
class SubspaceQ:
    """Subspace of QQ^n stored as a canonical RREF basis.

    The basis rows are in reduced row echelon form with zero rows dropped,
    so equality of subspaces is plain equality of the stored data.
    """

    ambient_dim: int
    basis: tuple[Vector, ...]

    @staticmethod
    def from_vectors(ambient_dim: int, vectors: Iterable[Sequence]) -> "SubspaceQ":
        rows = [list(vec(v)) for v in vectors]
        for row in rows:
            if len(row) != ambient_dim:
                raise ValueError("vector length != ambient dimension")
        if not rows:
            return SubspaceQ(ambient_dim, ())
        red, rank = _rref_rows(rows)
        return SubspaceQ(ambient_dim, tuple(tuple(r) for r in red[:rank]))

    @staticmethod
    def zero(ambient_dim: int) -> "SubspaceQ":
        return SubspaceQ(ambient_dim, ())

    @staticmethod
    def full(ambient_dim: int) -> "SubspaceQ":
        return SubspaceQ.from_vectors(
            ambient_dim, [unit_vec(ambient_dim, i) for i in range(ambient_dim)]
        )

    @property
    def dim(self) -> int:
        return len(self.basis)

    def pivots(self) -> list[int]:
        out = []
        for row in self.basis:
            for j, x in enumerate(row):
                if x != 0:
                    out.append(j)
                    break
        return out

    def contains(self, v: Sequence) -> bool:
        return subspace_membership(self, v)

    def contains_subspace(self, other: "SubspaceQ") -> bool:
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        return all(self.contains(b) for b in other.basis)

    def reduce(self, v: Sequence) -> Vector:
        """Residual of ``v`` after eliminating along the basis (zero iff member)."""
        w = list(vec(v))
        if len(w) != self.ambient_dim:
            raise ValueError("dimension mismatch")
        for row in self.basis:
            p = next(j for j, x in enumerate(row) if x != 0)
            f = w[p]
            if f:
                for j in range(p, self.ambient_dim):
                    if row[j]:
                        w[j] -= f * row[j]
        return tuple(w)


def nullspace(m: MatrixQ) -> SubspaceQ:
    """Canonical basis of the right kernel {v : m v = 0}."""
    red, rank = rref(m)
    pivots = []
    col = 0
    for r in range(rank):
        while red[r, col] == 0:
            col += 1
        pivots.append(col)
        col += 1
    pivot_set = set(pivots)
    free_cols = [c for c in range(m.cols) if c not in pivot_set]
    basis = []
    for fc in free_cols:
        v = [Fraction(0)] * m.cols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r, fc]
        basis.append(tuple(v))
    # columns are processed in increasing order, so this is already canonical
    return SubspaceQ.from_vectors(m.cols, basis)


def solve_linear(m: MatrixQ, b: Sequence) -> Optional[Vector]:
    """A particular solution of m x = b, or None if inconsistent."""
    bv = vec(b)
    if len(bv) != m.rows:
        raise ValueError("b length != rows")
    aug = [list(m.row(i)) + [bv[i]] for i in range(m.rows)]
    red, rank = _rref_rows(aug)
    x = [Fraction(0)] * m.cols
    for r in range(rank):
        pc = next(j for j, v in enumerate(red[r]) if v != 0)
        if pc == m.cols:
            return None  # pivot in the augmented column: inconsistent
        x[pc] = red[r][m.cols]
    return tuple(x)


def subspace_membership(s: SubspaceQ, v: Sequence) -> bool:
    """True iff ``v`` lies in the span of ``s``."""
    return is_zero_vec(s.reduce(v))


def coordinates_in(s: SubspaceQ, v: Sequence) -> Optional[Vector]:
    """Coefficients of ``v`` in the stored basis of ``s``, or None."""
    w = vec(v)
    if len(w) != s.ambient_dim:
        raise ValueError("dimension mismatch")
    if s.dim == 0:
        return () if is_zero_vec(w) else None
    m = MatrixQ.from_rows(
        [[s.basis[k][i] for k in range(s.dim)] for i in range(s.ambient_dim)]
    )
    sol = solve_linear(m, w)
    if sol is None or m.apply(sol) != w:
        return None
    return sol


def subspace_sum(a: SubspaceQ, b: SubspaceQ) -> SubspaceQ:
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    return SubspaceQ.from_vectors(a.ambient_dim, list(a.basis) + list(b.basis))


def subspace_intersect(a: SubspaceQ, b: SubspaceQ) -> SubspaceQ:
    """Canonical basis of a ∩ b (Zassenhaus-style via a kernel computation)."""
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    if a.dim == 0 or b.dim == 0:
        return SubspaceQ.zero(a.ambient_dim)
    # x = sum u_k a_k = sum v_l b_l  <=>  (u, v) in ker [A^T | -B^T]
    n = a.ambient_dim
    rows = []
    for i in range(n):
        rows.append(
            [a.basis[k][i] for k in range(a.dim)]
            + [-b.basis[l][i] for l in range(b.dim)]
        )
    ker = nullspace(MatrixQ.from_rows(rows))
    vectors = []
    for w in ker.basis:
        x = [Fraction(0)] * n
        for k in range(a.dim):
            if w[k]:
                for i in range(n):
                    x[i] += w[k] * a.basis[k][i]
        vectors.append(tuple(x))
    return SubspaceQ.from_vectors(n, vectors)


class RowReducer:
    """Incremental Gaussian elimination used to assemble big constraint systems.

    Rows are fed one at a time; only independent rows are kept (at most
    ``ncols`` of them), so assembling systems with vastly more constraints
    than unknowns stays cheap.  ``nullspace()`` returns the canonical kernel
    of the accumulated system.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self._rows: list[list[Fraction]] = []  # kept in echelon form
        self._pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self._rows)

    def is_full_rank(self) -> bool:
        return len(self._rows) == self.ncols

    def add_row(self, row: Sequence) -> bool:
        """Reduce ``row`` against the kept rows; keep it if independent."""
        if self.is_full_rank():
            return False
        w = [Fraction(x) for x in row]
        for prow, p in zip(self._rows, self._pivots):
            f = w[p]
            if f:
                for j in range(p, self.ncols):
                    if prow[j]:
                        w[j] -= f * prow[j]
        p = next((j for j, x in enumerate(w) if x != 0), None)
        if p is None:
            return False
        pv = w[p]
        if pv != 1:
            inv = Fraction(1) / pv
            w = [x * inv for x in w]
        # eliminate the new pivot from earlier rows to stay fully reduced
        for idx, prow in enumerate(self._rows):
            f = prow[p]
            if f:
                self._rows[idx] = [x - f * y for x, y in zip(prow, w)]
        # insert sorted by pivot column
        pos = 0
        while pos < len(self._pivots) and self._pivots[pos] < p:
            pos += 1
        self._rows.insert(pos, w)
        self._pivots.insert(pos, p)
        return True

    def matrix(self) -> MatrixQ:
        if not self._rows:
            return MatrixQ.zero(0, self.ncols)
        return MatrixQ.from_rows(self._rows)

    def nullspace(self) -> SubspaceQ:
        if not self._rows:
            return SubspaceQ.full(self.ncols)
        return nullspace(self.matrix())
