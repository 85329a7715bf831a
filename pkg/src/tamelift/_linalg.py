"""Dense linear algebra over the residue field F and over the chain ring O/pi^k.

Matrices over F are lists of rows of field codes (see ResidueField).  Sizes in
this package are tiny (at most a few dozen), so plain Gaussian elimination is
the right tool.
"""

from __future__ import annotations

from typing import Sequence

from .padic_ring import RingElem, Ring, div_pi, invert_unit, ResidueField

Vec = list[int]
Matrix = list[list[int]]


def zeros(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(F: ResidueField, A: Matrix, B: Matrix) -> Matrix:
    cols = len(B[0]) if B else 0
    out = zeros(len(A), cols)
    for i, row in enumerate(A):
        for k, a in enumerate(row):
            if a:
                bk = B[k]
                for j in range(cols):
                    if bk[j]:
                        out[i][j] = F.add(out[i][j], F.mul(a, bk[j]))
    return out


def matvec(F: ResidueField, A: Matrix, v: Sequence[int]) -> Vec:
    out = []
    for row in A:
        acc = 0
        for a, x in zip(row, v):
            if a and x:
                acc = F.add(acc, F.mul(a, x))
        out.append(acc)
    return out


def mat_add(F: ResidueField, A: Matrix, B: Matrix) -> Matrix:
    return [[F.add(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(F: ResidueField, A: Matrix, B: Matrix) -> Matrix:
    return [[F.sub(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(F: ResidueField, c: int, A: Matrix) -> Matrix:
    return [[F.mul(c, a) for a in row] for row in A]


def mat_pow(F: ResidueField, A: Matrix, n: int) -> Matrix:
    result = identity(len(A))
    base = A
    while n:
        if n & 1:
            result = matmul(F, result, base)
        base = matmul(F, base, base)
        n >>= 1
    return result


def vec_add(F: ResidueField, u: Sequence[int], v: Sequence[int]) -> Vec:
    return [F.add(a, b) for a, b in zip(u, v)]


def vec_scale(F: ResidueField, c: int, v: Sequence[int]) -> Vec:
    return [F.mul(c, a) for a in v]


def rref(F: ResidueField, M: Matrix) -> tuple[Matrix, list[int]]:
    A = [list(r) for r in M]
    if not A:
        return A, []
    rows, cols = len(A), len(A[0])
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = F.inv(A[r][c])
        A[r] = [F.mul(inv, x) for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c]:
                t = A[i][c]
                A[i] = [F.sub(x, F.mul(t, y)) for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return A[:r], pivots


def rank(F: ResidueField, M: Matrix) -> int:
    return len(rref(F, M)[1])


def nullspace(F: ResidueField, M: Matrix, ncols: int | None = None) -> Matrix:
    """Basis of {x : M x = 0}, as a list of vectors."""
    if ncols is None:
        ncols = len(M[0]) if M else 0
    R, pivots = rref(F, M) if M else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for row, pc in zip(R, pivots):
            if row[fc]:
                v[pc] = F.neg(row[fc])
        basis.append(v)
    return basis


def solve(F: ResidueField, M: Matrix, b: Sequence[int]) -> Vec | None:
    """One solution of M x = b, or None."""
    ncols = len(M[0]) if M else 0
    aug = [list(row) + [bi] for row, bi in zip(M, b)]
    R, pivots = rref(F, aug)
    if ncols in pivots:
        return None
    x = [0] * ncols
    for row, pc in zip(R, pivots):
        x[pc] = row[-1]
    return x


def span_basis(F: ResidueField, vectors: Sequence[Sequence[int]]) -> Matrix:
    vecs = [list(v) for v in vectors if any(v)]
    return rref(F, vecs)[0] if vecs else []


def same_span(F: ResidueField, A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> bool:
    return span_basis(F, A) == span_basis(F, B)


def in_span(F: ResidueField, v: Sequence[int], basis: Sequence[Sequence[int]]) -> bool:
    if not any(v):
        return True
    return rank(F, [list(b) for b in basis] + [list(v)]) == rank(F, [list(b) for b in basis]) if basis else False


def coordinates(F: ResidueField, v: Sequence[int], basis: Sequence[Sequence[int]]) -> Vec | None:
    """Coefficients c with sum c_i basis_i = v, when basis is independent."""
    if not basis:
        return [] if not any(v) else None
    M = [[basis[j][i] for j in range(len(basis))] for i in range(len(v))]
    return solve(F, M, v)


def complement_basis(F: ResidueField, sub: Sequence[Sequence[int]], dim: int) -> Matrix:
    """Standard basis vectors completing span(sub) to F^dim."""
    current = span_basis(F, sub)
    out = []
    for i in range(dim):
        e = [0] * dim
        e[i] = 1
        if rank(F, current + [e]) > len(current):
            current = span_basis(F, current + [e])
            out.append(e)
    return out


# ----------------------------------------------------------------------------
# linear systems over O/pi^k


class NoSolution(Exception):
    pass


def solve_chain(M: list[list[RingElem]], b: list[RingElem]) -> list[RingElem]:
    """Solve M x = b over O/pi^k (all entries at precision k).

    Full pivoting on valuation reduces M to a diagonal of pi-powers; row and
    column operations are tracked so x can be recovered.  Raises NoSolution.
    """
    rows = len(M)
    cols = len(M[0]) if rows else 0
    if rows == 0:
        return []
    k = M[0][0].prec
    params = M[0][0].params
    ring = Ring(params, k)
    A = [list(r) for r in M]
    rhs = list(b)
    # column operations applied to A are recorded as x = Q y
    Q = [[ring.one if i == j else ring.zero for j in range(cols)] for i in range(cols)]
    diag = []
    for step in range(min(rows, cols)):
        best = None
        for i in range(step, rows):
            for j in range(step, cols):
                v = A[i][j].val()
                if v < k and (best is None or v < best[0]):
                    best = (v, i, j)
                    if v == 0:
                        break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, pi_, pj = best
        A[step], A[pi_] = A[pi_], A[step]
        rhs[step], rhs[pi_] = rhs[pi_], rhs[step]
        if pj != step:
            for row in A:
                row[step], row[pj] = row[pj], row[step]
            for row in Q:
                row[step], row[pj] = row[pj], row[step]
        piv = A[step][step]
        unit = div_pi(piv, v).with_prec(k) if v else piv
        uinv = invert_unit(unit)
        # scale pivot row to make the pivot exactly pi^v
        A[step] = [x * uinv for x in A[step]]
        rhs[step] = rhs[step] * uinv
        for i in range(rows):
            if i != step and not A[i][step].is_zero():
                t = div_pi(A[i][step], v).with_prec(k) if v else A[i][step]
                A[i] = [x - t * y for x, y in zip(A[i], A[step])]
                rhs[i] = rhs[i] - t * rhs[step]
        for j in range(step + 1, cols):
            if not A[step][j].is_zero():
                t = div_pi(A[step][j], v).with_prec(k) if v else A[step][j]
                for i in range(rows):
                    A[i][j] = A[i][j] - t * A[i][step]
                for i in range(cols):
                    Q[i][j] = Q[i][j] - t * Q[i][step]
        diag.append(v)
    y = [ring.zero] * cols
    for i, v in enumerate(diag):
        if rhs[i].val() < v:
            raise NoSolution(f"row {i}: need valuation {v}, have {rhs[i].val()}")
        y[i] = div_pi(rhs[i], v).with_prec(k) if v else rhs[i]
    for i in range(len(diag), rows):
        if not rhs[i].is_zero():
            raise NoSolution(f"inconsistent row {i}")
    x = []
    for i in range(cols):
        acc = ring.zero
        for j in range(cols):
            if not Q[i][j].is_zero() and not y[j].is_zero():
                acc = acc + Q[i][j] * y[j]
        x.append(acc)
    return x
