"""Exact linear algebra over Z and Q.

Matrices are sequences of rows.  Every function returns fresh lists and
never mutates its input.  Determinants use fraction-free Bareiss
elimination; Hermite and Smith normal forms are deterministic (fixed pivot
rules) so canonical forms are reproducible byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .errors import DegenerateLatticeError

Matrix = Sequence[Sequence]


def copy_rows(a: Matrix) -> list[list]:
    return [list(row) for row in a]


def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> list[list[int]]:
    return [[0] * n for _ in range(m)]


def transpose(a: Matrix) -> list[list]:
    return [list(col) for col in zip(*a)]


def mat_mul(a: Matrix, b: Matrix) -> list[list]:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_sub(a: Matrix, b: Matrix) -> list[list]:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_add(a: Matrix, b: Matrix) -> list[list]:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a: Matrix, c) -> list[list]:
    return [[c * x for x in row] for row in a]


def mat_vec(a: Matrix, v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def vec_mat(v: Sequence, a: Matrix) -> list:
    return [sum(v[i] * a[i][j] for i in range(len(v))) for j in range(len(a[0]))]


def freeze(a: Matrix) -> tuple[tuple, ...]:
    return tuple(tuple(row) for row in a)


def determinant(a: Matrix) -> int:
    """Fraction-free Bareiss determinant of a square integer matrix."""
    n = len(a)
    if n == 0:
        return 1
    m = copy_rows(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def determinant_fraction(a: Matrix) -> Fraction:
    """Exact determinant of a rational matrix: clear each row, Bareiss, divide."""
    n = len(a)
    if n == 0:
        return Fraction(1)
    scaled = []
    den = Fraction(1)
    for row in a:
        fr = [Fraction(x) for x in row]
        d = lcm(*(c.denominator for c in fr)) if fr else 1
        den *= d
        scaled.append([int(c * d) for c in fr])
    return Fraction(determinant(scaled)) / den


def minor(a: Matrix, i: int, j: int) -> list[list]:
    return [[a[r][c] for c in range(len(a)) if c != j] for r in range(len(a)) if r != i]


def cofactor_matrix(a: Matrix) -> list[list[int]]:
    """Cofactor matrix: entry (i, j) is (-1)^(i+j) times the (i, j) minor.

    Dimension 1 returns [[1]] so that A * cof(A)^T = det(A) * I keeps
    holding there.
    """
    n = len(a)
    if n == 1:
        return [[1]]
    out = zeros(n, n)
    for i in range(n):
        for j in range(n):
            s = 1 if (i + j) % 2 == 0 else -1
            out[i][j] = s * determinant(minor(a, i, j))
    return out


def entries_gcd(a: Matrix) -> int:
    g = 0
    for row in a:
        for x in row:
            g = gcd(g, x)
    return g


def tau(a: Matrix) -> int:
    """gcd of all cofactors; conjugation invariant, and tau(AB) is divisible
    by tau(A) * tau(B)."""
    return entries_gcd(cofactor_matrix(a))


def adjugate(a: Matrix) -> list[list[int]]:
    return transpose(cofactor_matrix(a))


def is_unimodular(a: Matrix) -> bool:
    return len(a) == len(a[0]) and abs(determinant(a)) == 1


def inverse_unimodular(a: Matrix) -> list[list[int]]:
    """Exact integer inverse of a unimodular matrix (adjugate over det)."""
    d = determinant(a)
    if abs(d) != 1:
        raise ValueError("matrix is not unimodular")
    return mat_scale(adjugate(a), d)


def mat_inverse_fraction(a: Matrix) -> list[list[Fraction]]:
    """Gauss-Jordan inverse over Q with the first nonzero pivot rule."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(1 if i == j else 0) for j in range(n)]
         for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise DegenerateLatticeError("singular matrix")
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                c = m[r][col]
                m[r] = [x - c * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def charpoly(a: Matrix) -> tuple:
    """Characteristic polynomial det(tI - A), lowest degree first, monic.

    Faddeev-LeVerrier with Fraction accumulators; integer input yields
    integer output (cast back to int).
    """
    n = len(a)
    af = [[Fraction(x) for x in row] for row in a]
    coeffs_high = [Fraction(1)]  # c_0 = 1, then c_1 .. c_n
    m = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A (M_{k-1} + c_{k-1} I)
        shifted = [row[:] for row in m]
        for i in range(n):
            shifted[i][i] += coeffs_high[k - 1]
        m = mat_mul(af, shifted)
        c = -sum(m[i][i] for i in range(n)) / k
        coeffs_high.append(c)
    low_first = list(reversed(coeffs_high))
    if all(isinstance(x, int) for row in a for x in row):
        return tuple(int(c) for c in low_first)
    return tuple(low_first)


# ---------------------------------------------------------------------------
# Hermite normal form


def _hnf_core(rows: list[list[int]], want_transform: bool):
    """Row HNF.  Returns (h, u, rank) with u unimodular, u * rows = h,
    zero rows of h collected at the bottom.  Deterministic: columns left to
    right, pivot chained down from the first nonzero row."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    h = copy_rows(rows)
    u = identity(m) if want_transform else None
    r = 0
    for col in range(n):
        if r == m:
            break
        piv = None
        for i in range(r, m):
            if h[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            h[r], h[piv] = h[piv], h[r]
            if u is not None:
                u[r], u[piv] = u[piv], u[r]
        for i in range(r + 1, m):
            while h[i][col] != 0:
                q = h[r][col] // h[i][col]
                h[r] = [x - q * y for x, y in zip(h[r], h[i])]
                if u is not None:
                    u[r] = [x - q * y for x, y in zip(u[r], u[i])]
                h[r], h[i] = h[i], h[r]
                if u is not None:
                    u[r], u[i] = u[i], u[r]
        if h[r][col] < 0:
            h[r] = [-x for x in h[r]]
            if u is not None:
                u[r] = [-x for x in u[r]]
        for i in range(r):
            q = h[i][col] // h[r][col]
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                if u is not None:
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        r += 1
    return h, u, r


def hnf_rows(rows: Matrix) -> list[list[int]]:
    """Canonical HNF of the row span, zero rows dropped (rank x n)."""
    rows = copy_rows(rows)
    if not rows:
        return []
    h, _, r = _hnf_core(rows, want_transform=False)
    return h[:r]


def hermite_normal_form(a: Matrix) -> tuple[list[list[Fraction]], list[list[int]]]:
    """Canonical Hermite form of a full-row-rank rational matrix.

    Denominators are cleared by their lcm; the returned H is the HNF of the
    cleared integer matrix and U is unimodular with U * A_cleared = H.  The
    (H, denominator) pair is what lattice code uses for equality; this
    surface returns H and U and raises on rank deficiency.
    """
    h_int, u, den, rank = hnf_rational(a)
    if rank < len(list(a)):
        raise DegenerateLatticeError()
    return h_int, u


def hnf_rational(a: Matrix) -> tuple[list[list[int]], list[list[int]], int, int]:
    """Clear denominators and reduce: returns (h, u, den, rank) where
    u * (den * a) = h, h canonical with zero rows at the bottom."""
    rows = [[Fraction(x) for x in row] for row in a]
    if not rows:
        raise DegenerateLatticeError("empty generating set")
    den = 1
    for row in rows:
        for x in row:
            den = lcm(den, x.denominator)
    cleared = [[int(x * den) for x in row] for row in rows]
    h, u, rank = _hnf_core(cleared, want_transform=True)
    return h, u, den, rank


def kernel_int(a: Matrix) -> list[list[int]]:
    """Basis of the left integer kernel {x : x * a = 0} of an integer matrix."""
    h, u, rank = _hnf_core(copy_rows(a), want_transform=True)
    return [u[i] for i in range(rank, len(u))]


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SnfResult:
    s: tuple[tuple[int, ...], ...]
    u: tuple[tuple[int, ...], ...]
    v: tuple[tuple[int, ...], ...]
    invariant_factors: tuple[int, ...]


def _smallest_pivot(m: list[list[int]], k: int) -> tuple[int, int] | None:
    """Position of the smallest nonzero |entry| in the trailing submatrix,
    row-major tie break: earliest row, then earliest column."""
    best = None
    best_abs = None
    n = len(m)
    for i in range(k, n):
        for j in range(k, len(m[0])):
            x = abs(m[i][j])
            if x and (best_abs is None or x < best_abs):
                best, best_abs = (i, j), x
    return best


def smith_normal_form(a: Matrix) -> SnfResult:
    """Smith normal form with transforms: U A V = S, diagonal nonnegative,
    each invariant factor dividing the next.

    Pivots are always the smallest nonzero absolute entry of the working
    submatrix (row-major tie break), which keeps intermediate growth down
    and makes the reduction deterministic.
    """
    n = len(a)
    m = copy_rows(a)
    u = identity(n)
    v = identity(n)
    for k in range(n):
        while True:
            pos = _smallest_pivot(m, k)
            if pos is None:
                break
            pi, pj = pos
            if pi != k:
                m[k], m[pi] = m[pi], m[k]
                u[k], u[pi] = u[pi], u[k]
            if pj != k:
                for row in m:
                    row[k], row[pj] = row[pj], row[k]
                for row in v:
                    row[k], row[pj] = row[pj], row[k]
            dirty = False
            for i in range(k + 1, n):
                q = m[i][k] // m[k][k]
                if q:
                    m[i] = [x - q * y for x, y in zip(m[i], m[k])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[k])]
                if m[i][k]:
                    dirty = True
            for j in range(k + 1, n):
                q = m[k][j] // m[k][k]
                if q:
                    for row in m:
                        row[j] -= q * row[k]
                    for row in v:
                        row[j] -= q * row[k]
                if m[k][j]:
                    dirty = True
            if dirty:
                continue
            # row and column are clear; enforce divisibility of the rest
            offender = None
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    if m[i][j] % m[k][k]:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            m[k] = [x + y for x, y in zip(m[k], m[offender])]
            u[k] = [x + y for x, y in zip(u[k], u[offender])]
    for k in range(n):
        if m[k][k] < 0:
            m[k] = [-x for x in m[k]]
            u[k] = [-x for x in u[k]]
    factors = tuple(m[k][k] for k in range(n))
    return SnfResult(freeze(m), freeze(u), freeze(v), factors)


def invariant_factors(a: Matrix) -> tuple[int, ...]:
    return smith_normal_form(a).invariant_factors


# ---------------------------------------------------------------------------
# Lattice reduction


def lll_reduce_gram(gram: Matrix, delta: Fraction = Fraction(99, 100)) -> list[list[int]]:
    """LLL transformation for a positive definite rational Gram matrix.

    Returns unimodular integer rows u such that u * basis is LLL-reduced
    when gram[i][j] is the inner product of basis vectors i and j.  All
    arithmetic is exact Fraction work, so the output is deterministic.
    Raises ValueError when the form is not positive definite (a
    Gram-Schmidt length comes out zero or negative).
    """
    n = len(gram)
    g0 = [[Fraction(x) for x in row] for row in gram]
    u = identity(n)

    def inner(x, y):
        return sum(x[i] * g0[i][j] * y[j] for i in range(n) for j in range(n))

    def orthogonalize():
        mu = [[Fraction(0)] * n for _ in range(n)]
        norms = [Fraction(0)] * n
        for i in range(n):
            for j in range(i):
                mu[i][j] = (inner(u[i], u[j]) - sum(mu[j][k] * mu[i][k] * norms[k]
                                                    for k in range(j))) / norms[j]
            norms[i] = inner(u[i], u[i]) - sum(mu[i][k] ** 2 * norms[k] for k in range(i))
            if norms[i] <= 0:
                raise ValueError("gram matrix is not positive definite")
        return mu, norms

    # terminates: each swap shrinks the Lovasz potential by a factor of delta
    mu, norms = orthogonalize()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                u[k] = [x - q * y for x, y in zip(u[k], u[j])]
                mu, norms = orthogonalize()
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            u[k], u[k - 1] = u[k - 1], u[k]
            mu, norms = orthogonalize()
            k = max(1, k - 1)
    return u
