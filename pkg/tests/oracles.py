"""Independent brute-force oracles used to cross-check the library.

Everything here is deliberately written from scratch on plain lists of
Fractions: a textbook Gauss-Jordan, a direct table-walking bracket
evaluator, and monolithic dense constraint solvers with no per-degree
blocking and no incremental reduction.  Keeping these separate from the
library's code paths is what makes the dual-route comparisons meaningful.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def rref_rows(rows):
    """Textbook Gauss-Jordan; returns (reduced rows, rank)."""
    rows = [list(map(Fraction, r)) for r in rows]
    if not rows:
        return [], 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        piv = None
        for r in range(rank, len(rows)):
            if rows[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = Fraction(1) / rows[rank][col]
        rows[rank] = [x * inv for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rows, rank


def nullspace_rows(rows, ncols):
    """Kernel basis (RREF canonical) of the stacked constraint rows."""
    red, rank = rref_rows(rows) if rows else ([], 0)
    pivots = []
    col = 0
    for r in range(rank):
        while red[r][col] == 0:
            col += 1
        pivots.append(col)
        col += 1
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -red[r][free]
        basis.append(v)
    red2, rank2 = rref_rows(basis)
    return [tuple(r) for r in red2[:rank2]]


def span_rows(vectors):
    """Canonical RREF basis of a span."""
    red, rank = rref_rows(list(vectors)) if vectors else ([], 0)
    return [tuple(r) for r in red[:rank]]


def span_dim(vectors):
    return len(span_rows([v for v in vectors if any(x != 0 for x in v)]))


def oracle_eval(L, args):
    """Multilinear bracket evaluation by direct expansion of the table."""
    dim = L.dim
    out = [Fraction(0)] * dim
    ranges = [range(dim)] * L.arity
    for key in itertools.product(*ranges):
        coeff = Fraction(1)
        dead = False
        for slot, idx in enumerate(key):
            c = args[slot][idx]
            if c == 0:
                dead = True
                break
            coeff *= c
        if dead:
            continue
        value = L.bracket.entries.get(key)
        if value is None:
            continue
        for t in range(dim):
            if value[t]:
                out[t] += coeff * value[t]
    return tuple(out)


def unit(dim, i):
    return tuple(Fraction(1 if j == i else 0) for j in range(dim))


def oracle_center(L):
    """Stacked dense constraint solve for the annihilator in slot one."""
    dim = L.dim
    rows = []
    for rest in itertools.product(range(dim), repeat=L.arity - 1):
        cols = [
            oracle_eval(L, [unit(dim, i)] + [unit(dim, j) for j in rest])
            for i in range(dim)
        ]
        for c in range(dim):
            rows.append([cols[i][c] for i in range(dim)])
    return nullspace_rows(rows, dim)


def oracle_ab_center(L):
    dim = L.dim
    ab = L.alpha.matmul(L.beta)
    ab_cols = [tuple(ab[i, j] for i in range(dim)) for j in range(dim)]
    rows = []
    for rest in itertools.product(range(dim), repeat=L.arity - 1):
        cols = [
            oracle_eval(L, [unit(dim, i)] + [ab_cols[j] for j in rest])
            for i in range(dim)
        ]
        for c in range(dim):
            rows.append([cols[i][c] for i in range(dim)])
    return nullspace_rows(rows, dim)


def oracle_centralizer(L, h_vectors):
    dim = L.dim
    rows = []
    if L.arity == 2:
        combos = [(h,) for h in h_vectors]
    else:
        combos = [
            (h,) + tuple(unit(dim, j) for j in rest)
            for h in h_vectors
            for rest in itertools.product(range(dim), repeat=L.arity - 2)
        ]
    for combo in combos:
        cols = [oracle_eval(L, [unit(dim, i)] + list(combo)) for i in range(dim)]
        for c in range(dim):
            rows.append([cols[i][c] for i in range(dim)])
    return nullspace_rows(rows, dim)


def oracle_sequence(L, depth, descending):
    """Span-based derived or descending central sequence as RREF bases."""
    dim = L.dim
    spaces = [span_rows([unit(dim, i) for i in range(dim)])]
    for _ in range(depth):
        basis = spaces[-1]
        outputs = []
        if descending:
            for v in basis:
                for rest in itertools.product(range(dim), repeat=L.arity - 1):
                    outputs.append(
                        oracle_eval(L, [v] + [unit(dim, j) for j in rest])
                    )
        else:
            for combo in itertools.product(basis, repeat=L.arity):
                outputs.append(oracle_eval(L, list(combo)))
        spaces.append(span_rows([v for v in outputs if any(x != 0 for x in v)]))
    return spaces


def oracle_operator_space(L, kind, k, r, degree):
    """Monolithic dense solve over all dim^2 cells, no degree blocking.

    Homogeneity, twist commutation, and the kind's defining identity are
    stacked into one big dense system whose kernel is the flattened
    solution space.
    """
    dim = L.dim
    ncells = dim * dim
    phi = L.alpha.power(k).matmul(L.beta.power(r))
    phi_cols = [tuple(phi[i, j] for i in range(dim)) for j in range(dim)]
    rows = []
    # homogeneity: cells outside the degree pattern vanish
    for i in range(dim):
        for j in range(dim):
            if L.basis_degrees[i] != L.basis_degrees[j] + degree:
                row = [Fraction(0)] * ncells
                row[i * dim + j] = Fraction(1)
                rows.append(row)
    # commutation with both twists
    for twist in (L.alpha, L.beta):
        for i in range(dim):
            for j in range(dim):
                row = [Fraction(0)] * ncells
                for b in range(dim):
                    row[i * dim + b] += twist[b, j]
                for a in range(dim):
                    row[a * dim + j] -= twist[i, a]
                rows.append(row)

    def insertion_cols(tup, slot):
        """For each a: eval with unit a in the slot, phi elsewhere."""
        out = []
        for a in range(dim):
            args = [phi_cols[c] for c in tup]
            args[slot] = unit(dim, a)
            out.append(oracle_eval(L, args))
        return out

    n = L.arity
    for tup in itertools.product(range(dim), repeat=n):
        prefix = L.identity_degree()
        signs = []
        for idx in tup:
            signs.append(L.eps(degree, prefix))
            prefix = prefix + L.basis_degrees[idx]
        raw = L.bracket.entries.get(tup)
        ins = [insertion_cols(tup, i) for i in range(n)]
        if kind == "der":
            for c in range(dim):
                row = [Fraction(0)] * ncells
                if raw is not None:
                    for b in range(dim):
                        if raw[b]:
                            row[c * dim + b] += raw[b]
                for i in range(n):
                    for a in range(dim):
                        v = ins[i][a][c]
                        if v:
                            row[a * dim + tup[i]] -= signs[i] * v
                rows.append(row)
        elif kind == "zder":
            for c in range(dim):
                row = [Fraction(0)] * ncells
                if raw is not None:
                    for b in range(dim):
                        if raw[b]:
                            row[c * dim + b] += raw[b]
                rows.append(row)
            for i in range(n):
                for c in range(dim):
                    row = [Fraction(0)] * ncells
                    for a in range(dim):
                        v = ins[i][a][c]
                        if v:
                            row[a * dim + tup[i]] += v
                    rows.append(row)
        elif kind == "c":
            for i in range(n):
                for c in range(dim):
                    row = [Fraction(0)] * ncells
                    if raw is not None:
                        for b in range(dim):
                            if raw[b]:
                                row[c * dim + b] += raw[b]
                    for a in range(dim):
                        v = ins[i][a][c]
                        if v:
                            row[a * dim + tup[i]] -= signs[i] * v
                    rows.append(row)
        elif kind == "qc":
            for i in range(1, n):
                for c in range(dim):
                    row = [Fraction(0)] * ncells
                    for a in range(dim):
                        v = ins[0][a][c]
                        if v:
                            row[a * dim + tup[0]] += v
                        v2 = ins[i][a][c]
                        if v2:
                            row[a * dim + tup[i]] -= signs[i] * v2
                    rows.append(row)
    return nullspace_rows(rows, ncells)
