"""Exact linear algebra kernels.

Rational elimination (rank, reduced row echelon form, nullspace) and integer
Smith normal form with transform tracking. Everything is exact: integer
matrices use arbitrary-precision ints, rational ones use fractions.Fraction.
Dense list-of-lists matrices are fine at the scale this package targets
(a few hundred rows and columns at most).

A fast modular-rank routine is provided as a one-sided certificate: a full
rank mod p proves full rank over Q, while anything less falls back to the
exact fraction-free elimination.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np

try:  # optional big-int accelerator; plain ints are a correct fallback
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover
    _mpz = int

IntMatrix = list[list[int]]

# 2^31 - 1, a Mersenne prime: entries stay below 2^31 so int64 products cannot
# overflow during the modular elimination.
DEFAULT_PRIME = 2_147_483_647


def rank_int(mat: Sequence[Sequence[int]]) -> int:
    """Exact rank over Q of an integer matrix (Bareiss fraction-free elimination).

    Pivots are chosen with least absolute value over the remaining block to
    control entry growth.
    """
    m = len(mat)
    if m == 0:
        return 0
    n = len(mat[0])
    if n == 0:
        return 0
    M = [[_mpz(x) for x in row] for row in mat]
    rows = list(range(m))
    cols = list(range(n))
    prev = _mpz(1)
    r = 0
    limit = min(m, n)
    while r < limit:
        best = None
        for i in range(r, m):
            Mi = M[rows[i]]
            for j in range(r, n):
                v = Mi[cols[j]]
                if v:
                    a = -v if v < 0 else v
                    if best is None or a < best[0]:
                        best = (a, i, j)
                        if a == 1:
                            break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, bi, bj = best
        rows[r], rows[bi] = rows[bi], rows[r]
        cols[r], cols[bj] = cols[bj], cols[r]
        pr = rows[r]
        pc = cols[r]
        piv = M[pr][pc]
        Mp = M[pr]
        for i in range(r + 1, m):
            Mi = M[rows[i]]
            a = Mi[pc]
            if a:
                for j in range(r + 1, n):
                    cj = cols[j]
                    Mi[cj] = (piv * Mi[cj] - a * Mp[cj]) // prev
                Mi[pc] = _mpz(0)
            elif prev != 1 or piv != 1:
                for j in range(r + 1, n):
                    cj = cols[j]
                    Mi[cj] = (piv * Mi[cj]) // prev
        prev = piv
        r += 1
    return r


def det_int(mat: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix."""
    n = len(mat)
    if n == 0:
        return 1
    M = [[_mpz(x) for x in row] for row in mat]
    rows = list(range(n))
    cols = list(range(n))
    prev = _mpz(1)
    sign = 1
    for r in range(n):
        best = None
        for i in range(r, n):
            Mi = M[rows[i]]
            for j in range(r, n):
                v = Mi[cols[j]]
                if v:
                    a = -v if v < 0 else v
                    if best is None or a < best[0]:
                        best = (a, i, j)
                        if a == 1:
                            break
            if best is not None and best[0] == 1:
                break
        if best is None:
            return 0
        _, bi, bj = best
        if bi != r:
            rows[r], rows[bi] = rows[bi], rows[r]
            sign = -sign
        if bj != r:
            cols[r], cols[bj] = cols[bj], cols[r]
            sign = -sign
        pr = rows[r]
        pc = cols[r]
        piv = M[pr][pc]
        Mp = M[pr]
        for i in range(r + 1, n):
            Mi = M[rows[i]]
            a = Mi[pc]
            for j in range(r + 1, n):
                cj = cols[j]
                Mi[cj] = (piv * Mi[cj] - a * Mp[cj]) // prev
        prev = piv
    return int(sign * prev)


def det_fraction(mat: Sequence[Sequence[Fraction]]) -> Fraction:
    """Exact determinant of a square matrix of rationals."""
    n = len(mat)
    A = [[Fraction(x) for x in row] for row in mat]
    det = Fraction(1)
    for c in range(n):
        piv = None
        for i in range(c, n):
            if A[i][c]:
                piv = i
                break
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        inv = 1 / A[c][c]
        for i in range(c + 1, n):
            if A[i][c]:
                f = A[i][c] * inv
                for j in range(c, n):
                    A[i][j] -= f * A[c][j]
    return det


def rank_mod_p(mat: Sequence[Sequence[int]], p: int = DEFAULT_PRIME) -> int:
    """Rank of an integer matrix mod p.

    Always a lower bound for the rank over Q; equality holds for all but
    finitely many primes.  Callers use it as a certificate when the result is
    full and fall back to rank_int otherwise.
    """
    m = len(mat)
    if m == 0:
        return 0
    n = len(mat[0])
    if n == 0:
        return 0
    A = np.array([[x % p for x in row] for row in mat], dtype=np.int64)
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        A[r, c:] = (A[r, c:] * inv) % p
        below = A[r + 1 :, c]
        nzb = np.nonzero(below)[0]
        if nzb.size:
            idx = r + 1 + nzb
            A[idx, c:] = (A[idx, c:] - np.outer(A[idx, c], A[r, c:])) % p
        r += 1
    return r


def rref(mat: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form over Q.

    Returns (rows, pivots): the nonzero RREF rows as Fraction lists and the
    pivot column indices.  Columns are processed strictly left to right, so
    the pivot set is the lexicographically earliest independent one; this is
    what makes downstream basis choices deterministic.
    """
    R = [[Fraction(x) for x in row] for row in mat]
    m = len(R)
    if ncols is None:
        ncols = len(R[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, m):
            if R[i][c]:
                piv = i
                break
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = 1 / R[r][c]
        R[r] = [v * inv for v in R[r]]
        for i in range(m):
            if i != r and R[i][c]:
                f = R[i][c]
                Ri = R[i]
                Rr = R[r]
                R[i] = [a - f * b for a, b in zip(Ri, Rr)]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return R[:r], pivots


def rank_fraction(mat: Sequence[Sequence], ncols: int | None = None) -> int:
    return len(rref(mat, ncols)[1])


def nullspace(mat: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of the right kernel over Q, ordered by ascending free column."""
    rows, pivots = rref(mat, ncols)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -rows[i][f]
        basis.append(v)
    return basis


def matmul_int(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    if not A or not B:
        return []
    n = len(B)
    cols = len(B[0]) if B else 0
    out = []
    for row in A:
        acc = [0] * cols
        for k in range(n):
            a = row[k]
            if a:
                Bk = B[k]
                for j in range(cols):
                    if Bk[j]:
                        acc[j] += a * Bk[j]
        out.append(acc)
    return out


def _identity(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_with_transforms(mat: Sequence[Sequence[int]]):
    """Smith-style diagonalization U * mat * V = D with unimodular U, V.

    Returns (U, D, V, Uinv).  D is diagonal but its entries are not
    normalized to a divisibility chain; use invariant_factors for that.
    Pivoting picks the least absolute value to limit entry growth.
    """
    m = len(mat)
    n = len(mat[0]) if m else 0
    A = [[int(x) for x in row] for row in mat]
    U = _identity(m)
    Ui = _identity(m)
    V = _identity(n)

    def swap_rows(a: int, b: int) -> None:
        A[a], A[b] = A[b], A[a]
        U[a], U[b] = U[b], U[a]
        for r in Ui:
            r[a], r[b] = r[b], r[a]

    def add_row(dst: int, src: int, c: int) -> None:
        # row_dst += c * row_src ; inverse op applied to Ui columns
        Ad, As = A[dst], A[src]
        for j in range(n):
            if As[j]:
                Ad[j] += c * As[j]
        Ud, Us = U[dst], U[src]
        for j in range(m):
            if Us[j]:
                Ud[j] += c * Us[j]
        for r in Ui:
            r[src] -= c * r[dst]

    def negate_row(a: int) -> None:
        A[a] = [-x for x in A[a]]
        U[a] = [-x for x in U[a]]
        for r in Ui:
            r[a] = -r[a]

    def swap_cols(a: int, b: int) -> None:
        for r in A:
            r[a], r[b] = r[b], r[a]
        for r in V:
            r[a], r[b] = r[b], r[a]

    def add_col(dst: int, src: int, c: int) -> None:
        for r in A:
            if r[src]:
                r[dst] += c * r[src]
        for r in V:
            if r[src]:
                r[dst] += c * r[src]

    t = 0
    limit = min(m, n)
    while t < limit:
        best = None
        for i in range(t, m):
            Ai = A[i]
            for j in range(t, n):
                v = Ai[j]
                if v:
                    a = -v if v < 0 else v
                    if best is None or a < best[0]:
                        best = (a, i, j)
                        if a == 1:
                            break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, bi, bj = best
        if bi != t:
            swap_rows(t, bi)
        if bj != t:
            swap_cols(t, bj)
        while True:
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    if q:
                        add_row(i, t, -q)
                    if A[i][t]:
                        swap_rows(t, i)
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    if q:
                        add_col(j, t, -q)
                    if A[t][j]:
                        swap_cols(t, j)
            if all(A[i][t] == 0 for i in range(t + 1, m)) and all(
                A[t][j] == 0 for j in range(t + 1, n)
            ):
                break
        if A[t][t] < 0:
            negate_row(t)
        t += 1
    return U, A, V, Ui


def _divisibility_chain(values: list[int]) -> list[int]:
    vals = sorted(abs(v) for v in values if v)
    changed = True
    while changed:
        changed = False
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                if vals[j] % vals[i]:
                    g = gcd(vals[i], vals[j])
                    vals[i], vals[j] = g, vals[i] * vals[j] // g
                    changed = True
        if changed:
            vals.sort()
    return vals


def invariant_factors(mat: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors d1 | d2 | ... of an integer matrix."""
    _, D, _, _ = smith_with_transforms(mat)
    diag = [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]
    return _divisibility_chain(diag)


def integer_kernel(mat: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Basis of the saturated integer kernel (kernel lattices are saturated)."""
    m = len(mat)
    if m == 0:
        return [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    _, D, V, _ = smith_with_transforms(mat)
    rank = sum(1 for i in range(min(m, ncols)) if D[i][i])
    return [[V[i][j] for i in range(ncols)] for j in range(rank, ncols)]


def lattice_quotient(mat: Sequence[Sequence[int]], nrows: int):
    """Presentation of Z^nrows / image(mat), torsion removed.

    mat has nrows rows (image vectors are its columns).  Returns
    (proj, lift, torsion): proj rows map a vector of Z^nrows onto integer
    coordinates of the free quotient, lift holds preimages of the quotient
    basis, and torsion lists the invariant factors > 1 of the cokernel.
    proj . lift = identity.
    """
    if not mat or not mat[0]:
        ident = _identity(nrows)
        return ident, [row[:] for row in ident], []
    U, D, _, Ui = smith_with_transforms(mat)
    ncols = len(mat[0])
    rank = sum(1 for i in range(min(nrows, ncols)) if D[i][i])
    proj = [U[i][:] for i in range(rank, nrows)]
    lift = [[Ui[i][j] for i in range(nrows)] for j in range(rank, nrows)]
    torsion = _divisibility_chain(
        [D[i][i] for i in range(rank) if abs(D[i][i]) > 1]
    )
    return proj, lift, torsion
