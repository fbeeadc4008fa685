"""Arithmetic in K = Q[t]/(f): field elements, full-rank lattices, orders,
fractional ideals, and ideal equivalence with witnesses.

Elements carry power-basis coordinates as Fractions.  A lattice stores the
canonical pair (den, mat): mat is the row Hermite normal form of den times
a generating set, den the least common denominator of the generators.
Equal lattices always produce identical pairs, so dataclass equality is
lattice equality.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd, isqrt

from . import linalg
from .errors import ConsistencyError, DegenerateLatticeError, InputError
from .weil import WeilContext, is_prime

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FieldElement:
    ctx: WeilContext
    coeffs: tuple[Fraction, ...]

    @staticmethod
    def make(ctx: WeilContext, seq) -> "FieldElement":
        coeffs = [Fraction(c) for c in seq]
        if len(coeffs) > ctx.n:
            raise InputError("bad_coords", f"expected at most {ctx.n} coordinates")
        coeffs += [Fraction(0)] * (ctx.n - len(coeffs))
        return FieldElement(ctx, tuple(coeffs))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __add__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.ctx, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        return FieldElement(self.ctx, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.ctx, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, FieldElement):
            conv = [Fraction(0)] * (2 * self.ctx.n - 1)
            for i, a in enumerate(self.coeffs):
                if a == 0:
                    continue
                for j, b in enumerate(other.coeffs):
                    if b:
                        conv[i + j] += a * b
            return FieldElement(self.ctx, _reduce_coords(self.ctx, conv))
        return FieldElement(self.ctx, tuple(Fraction(other) * a for a in self.coeffs))

    __rmul__ = __mul__

    def mult_matrix(self) -> list[list[Fraction]]:
        """Row-convention matrix of multiplication by this element: the k-th
        row is the coordinate vector of alpha^k times the element."""
        n = self.ctx.n
        top = self.ctx.power_rows[n]
        rows = [list(self.coeffs)]
        for _ in range(n - 1):
            prev = rows[-1]
            carry = prev[n - 1]
            row = [carry * top[0]] + [prev[j - 1] + carry * top[j] for j in range(1, n)]
            rows.append(row)
        return rows

    def trace(self) -> Fraction:
        return sum((c * s for c, s in zip(self.coeffs, self.ctx.trace_sums)), Fraction(0))

    def norm(self) -> Fraction:
        return linalg.determinant_fraction(self.mult_matrix())

    def charpoly(self) -> tuple:
        """Characteristic polynomial of the multiplication map, lowest
        degree first.  Monic of degree 2g; equal to the minimal polynomial
        to the appropriate power."""
        return linalg.charpoly(self.mult_matrix())

    def is_integral(self) -> bool:
        return all(Fraction(c).denominator == 1 for c in self.charpoly())

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        inv = linalg.mat_inverse_fraction(self.mult_matrix())
        return FieldElement(self.ctx, tuple(inv[0]))

    def conj(self) -> "FieldElement":
        """Image under alpha -> q/alpha (complex conjugation on the CM field)."""
        rows = _conj_power_rows(self.ctx)
        n = self.ctx.n
        out = [Fraction(0)] * n
        for k, c in enumerate(self.coeffs):
            if c:
                for j in range(n):
                    out[j] += c * rows[k][j]
        return FieldElement(self.ctx, tuple(out))


def _reduce_coords(ctx: WeilContext, conv: list[Fraction]) -> tuple[Fraction, ...]:
    n = ctx.n
    out = list(conv[:n]) + [Fraction(0)] * (n - min(n, len(conv)))
    for k in range(n, len(conv)):
        c = conv[k]
        if c == 0:
            continue
        row = ctx.power_rows[k]
        for j in range(n):
            out[j] += c * row[j]
    return tuple(out)


@lru_cache(maxsize=None)
def _conj_power_rows(ctx: WeilContext) -> tuple[tuple[Fraction, ...], ...]:
    """Coordinates of (q/alpha)^k, k = 0 .. n-1; only defined when q/alpha
    is again a root of f (precisely the functional equation)."""
    abar = Fraction(ctx.q) * alpha(ctx).inverse()
    check = _apply_poly(ctx, abar)
    if not check.is_zero():
        raise InputError("not_self_reciprocal", "q/alpha is not a root of f")
    rows = [one(ctx).coeffs]
    acc = one(ctx)
    for _ in range(ctx.n - 1):
        acc = acc * abar
        rows.append(acc.coeffs)
    return tuple(rows)


def _apply_poly(ctx: WeilContext, x: FieldElement) -> FieldElement:
    """Evaluate f at a field element (Horner)."""
    acc = zero(ctx)
    for c in reversed(ctx.f_low):
        acc = acc * x + FieldElement.make(ctx, [c])
    return acc


def zero(ctx: WeilContext) -> FieldElement:
    return FieldElement.make(ctx, [])


def one(ctx: WeilContext) -> FieldElement:
    return FieldElement.make(ctx, [1])


def alpha(ctx: WeilContext) -> FieldElement:
    return FieldElement.make(ctx, [0, 1])


def q_over_alpha(ctx: WeilContext) -> FieldElement:
    return Fraction(ctx.q) * alpha(ctx).inverse()


def sigma_element(ctx: WeilContext, ell: int) -> FieldElement:
    """f(1) / (ell * (1 - alpha)); integrality of this element across classes
    drives the local cyclicity refinement."""
    if not is_prime(ell):
        raise InputError("ell_not_prime", f"{ell} is not prime")
    if ctx.point_count % ell:
        raise InputError("ell_not_dividing", f"{ell} does not divide the point count")
    one_minus = one(ctx) - alpha(ctx)
    return Fraction(ctx.point_count, ell) * one_minus.inverse()


# ---------------------------------------------------------------------------
# Lattices


@dataclass(frozen=True)
class IdealLattice:
    """Full-rank lattice in K in canonical (den, mat) form.

    mat is n x n upper triangular in row HNF with positive diagonal and
    entries above each pivot reduced into [0, pivot); den is the least
    common denominator.  The basis rows are mat / den.
    """

    ctx: WeilContext
    den: int
    mat: tuple[tuple[int, ...], ...]

    @classmethod
    def from_rows(cls, ctx: WeilContext, rows) -> "IdealLattice":
        rows = [list(r) for r in rows]
        if not rows or any(len(r) != ctx.n for r in rows):
            raise DegenerateLatticeError("generating set has wrong shape")
        h, _, den, rank = linalg.hnf_rational(rows)
        if rank < ctx.n:
            raise DegenerateLatticeError()
        return cls(ctx, den, linalg.freeze(h[:rank]))

    @classmethod
    def from_elements(cls, ctx: WeilContext, elems) -> "IdealLattice":
        return cls.from_rows(ctx, [e.coeffs for e in elems])

    @classmethod
    def standard(cls, ctx: WeilContext) -> "IdealLattice":
        """Z[alpha] as a lattice."""
        return cls(ctx, 1, linalg.freeze(linalg.identity(ctx.n)))

    @property
    def rows_fraction(self) -> list[list[Fraction]]:
        return [[Fraction(x, self.den) for x in row] for row in self.mat]

    @property
    def elements(self) -> tuple[FieldElement, ...]:
        return tuple(FieldElement(self.ctx, tuple(row)) for row in self.rows_fraction)

    def covolume(self) -> Fraction:
        det = Fraction(1)
        for k in range(self.ctx.n):
            det *= Fraction(self.mat[k][k], self.den)
        return abs(det)

    def __contains__(self, x: FieldElement) -> bool:
        n = self.ctx.n
        target = [Fraction(c) * self.den for c in x.coeffs]
        u: list[Fraction] = []
        for j in range(n):
            acc = target[j]
            for i in range(j):
                acc -= u[i] * self.mat[i][j]
            val = acc / self.mat[j][j]
            if val.denominator != 1:
                return False
            u.append(val)
        return True

    def scale(self, x: FieldElement) -> "IdealLattice":
        if x.is_zero():
            raise InputError("zero_scale", "cannot scale a lattice by zero")
        return IdealLattice.from_elements(self.ctx, [x * e for e in self.elements])


def ideal_sum(a: IdealLattice, b: IdealLattice) -> IdealLattice:
    _same_ctx(a, b)
    return IdealLattice.from_rows(a.ctx, a.rows_fraction + b.rows_fraction)


def ideal_product(a: IdealLattice, b: IdealLattice) -> IdealLattice:
    _same_ctx(a, b)
    rows = [(ea * eb).coeffs for ea in a.elements for eb in b.elements]
    return IdealLattice.from_rows(a.ctx, rows)


def ideal_intersection(a: IdealLattice, b: IdealLattice) -> IdealLattice:
    _same_ctx(a, b)
    n = a.ctx.n
    from math import lcm

    d = lcm(a.den, b.den)
    am = [[x * (d // a.den) for x in row] for row in a.mat]
    bm = [[x * (d // b.den) for x in row] for row in b.mat]
    stacked = am + [[-x for x in row] for row in bm]
    kernel = linalg.kernel_int(stacked)
    rows = [linalg.vec_mat(k[:n], am) for k in kernel]
    frac_rows = [[Fraction(x, d) for x in row] for row in rows]
    return IdealLattice.from_rows(a.ctx, frac_rows)


def ideal_quotient(a: IdealLattice, b: IdealLattice) -> IdealLattice:
    """(a : b) = {x in K : x * b is contained in a}."""
    _same_ctx(a, b)
    result = None
    for e in b.elements:
        minv = linalg.mat_inverse_fraction(e.mult_matrix())
        lat = IdealLattice.from_rows(a.ctx, linalg.mat_mul(a.rows_fraction, minv))
        result = lat if result is None else ideal_intersection(result, lat)
    return result


def lattice_index(sub: IdealLattice, sup: IdealLattice) -> Fraction:
    """Generalized index [sup : sub] as a positive rational: the ratio of
    covolumes.  An integer exactly when sub is contained in sup."""
    _same_ctx(sub, sup)
    return sub.covolume() / sup.covolume()


def _same_ctx(a, b) -> None:
    if a.ctx != b.ctx:
        raise InputError("context_mismatch", "operands live in different fields")


# ---------------------------------------------------------------------------
# Orders


@dataclass(frozen=True)
class OrderDesc:
    """An order: a full-rank subring lattice, plus the generators it was
    built from.  Ring evidence (1 in the lattice, closure under products of
    basis elements) is verified at construction time."""

    lattice: IdealLattice
    generators: tuple[FieldElement, ...]

    def __post_init__(self):
        lat = self.lattice
        if one(lat.ctx) not in lat:
            raise ConsistencyError("order lattice does not contain 1")
        elems = lat.elements
        for i, ei in enumerate(elems):
            for ej in elems[i:]:
                if (ei * ej) not in lat:
                    raise ConsistencyError("order lattice is not multiplicatively closed")

    @property
    def ctx(self) -> WeilContext:
        return self.lattice.ctx


def _span_rows(ctx: WeilContext, rows) -> list[list[Fraction]]:
    """Canonical reduced generating rows of a (possibly not full rank) span."""
    h, _, den, rank = linalg.hnf_rational(rows)
    return [[Fraction(x, den) for x in h[i]] for i in range(rank)]


def ring_closure(ctx: WeilContext, generators) -> OrderDesc:
    """Smallest ring lattice containing 1 and all monomials in the
    generators.  Iterates multiply-adjoin-reduce until the span stabilizes;
    integrality of every generator guarantees termination."""
    gens = tuple(FieldElement.make(ctx, g.coeffs if isinstance(g, FieldElement) else g)
                 for g in generators)
    for g in gens:
        if not g.is_integral():
            raise InputError("not_integral", "ring generators must be integral elements")
    current = _span_rows(ctx, [one(ctx).coeffs] + [g.coeffs for g in gens])
    for _ in range(200):
        elems = [FieldElement(ctx, tuple(r)) for r in current]
        rows = [list(r) for r in current]
        rows += [(e * g).coeffs for e in elems for g in gens]
        nxt = _span_rows(ctx, rows)
        if nxt == current:
            break
        current = nxt
    else:
        raise ConsistencyError("ring closure did not stabilize")
    if len(current) < ctx.n:
        raise DegenerateLatticeError("generators do not span the field")
    return OrderDesc(IdealLattice.from_rows(ctx, current), gens)


def standard_order(ctx: WeilContext) -> OrderDesc:
    return ring_closure(ctx, [alpha(ctx)])


def frobenius_pair_order(ctx: WeilContext) -> OrderDesc:
    """The order generated by alpha and q/alpha (Frobenius and Verschiebung)."""
    return ring_closure(ctx, [alpha(ctx), q_over_alpha(ctx)])


@lru_cache(maxsize=None)
def multiplicator_ring(a: IdealLattice) -> OrderDesc:
    """(a : a), packaged as an order (the packaging re-verifies ring-ness)."""
    lat = ideal_quotient(a, a)
    return OrderDesc(lat, lat.elements)


def discriminant(order: OrderDesc) -> int:
    """Determinant of the trace pairing Gram matrix on a basis."""
    elems = order.lattice.elements
    gram = [[(ei * ej).trace() for ej in elems] for ei in elems]
    d = linalg.determinant_fraction(gram)
    if d.denominator != 1:
        raise ConsistencyError("order discriminant must be an integer")
    return int(d)


# ---------------------------------------------------------------------------
# Equivalence


@dataclass(frozen=True)
class EquivalenceResult:
    status: str  # "equivalent" | "not_equivalent" | "indeterminate"
    witness: FieldElement | None = None
    search_bound: int | None = None


def _quadratic_disc(ctx: WeilContext) -> int:
    a1, a2 = ctx.f_low[1], ctx.f_low[0]
    return a1 * a1 - 4 * a2


def _iroot_ceil(v: int, k: int) -> int:
    """Smallest integer r with r^k >= v (v >= 1)."""
    r = max(1, int(round(v ** (1.0 / k))))
    while r**k < v:
        r += 1
    while r > 1 and (r - 1) ** k >= v:
        r -= 1
    return r


def _int_mult_matrix(ctx: WeilContext, coords: list[int]) -> list[list[int]]:
    """Multiplication matrix for integer power-basis coordinates (all int)."""
    n = ctx.n
    top = ctx.power_rows[n]
    rows = [list(coords)]
    for _ in range(n - 1):
        prev = rows[-1]
        carry = prev[n - 1]
        rows.append([carry * top[0]] + [prev[j - 1] + carry * top[j] for j in range(1, n)])
    return rows


def ideal_equivalent(a: IdealLattice, b: IdealLattice,
                     search_bound: int | None = None) -> EquivalenceResult:
    """Searches for x with x * a = b.

    2g = 2 with negative discriminant: the norm form on (b : a) is positive
    definite, the coefficient box derived from the Gram inverse is
    exhaustive, and a failed search is a proof of inequivalence.  Larger
    fields fall back to a bounded sup-norm search over a basis of (b : a)
    reduced against the conjugation trace form (positive definite on a
    totally imaginary field, so witnesses sit at small coordinates) and
    report indeterminate when it is exhausted.
    """
    _same_ctx(a, b)
    ctx = a.ctx
    if a == b:
        return EquivalenceResult("equivalent", one(ctx))
    ra = multiplicator_ring(a)
    rb = multiplicator_ring(b)
    if ra.lattice != rb.lattice:
        return EquivalenceResult("not_equivalent")
    target = lattice_index(b, a)  # the |N(x)| any witness must have
    quo = ideal_quotient(b, a)
    n = ctx.n

    if n == 2 and _quadratic_disc(ctx) < 0:
        return _equivalence_definite(a, b, quo, target)

    if search_bound is None:
        ceil_t = -((-target.numerator) // target.denominator)
        search_bound = max(2, 4 * _iroot_ceil(max(1, ceil_t), n))
    rows = _reduced_quotient_rows(quo)
    den = quo.den
    den_pow = Fraction(den) ** n
    for shell in range(1, search_bound + 1):
        for u in _sup_norm_shell(n, shell):
            coords = [sum(u[i] * rows[i][j] for i in range(n)) for j in range(n)]
            nrm = Fraction(linalg.determinant(_int_mult_matrix(ctx, coords))) / den_pow
            if abs(nrm) != target:
                continue
            x = FieldElement(ctx, tuple(Fraction(c, den) for c in coords))
            if a.scale(x) == b:
                _assert_equal_rings(a, b)
                return EquivalenceResult("equivalent", x)
    return EquivalenceResult("indeterminate", search_bound=search_bound)


def _reduced_quotient_rows(quo: IdealLattice) -> list[list[int]]:
    """Basis rows of quo reduced against Tr(x * conj(y)).  The form is
    positive definite exactly when conjugation is complex conjugation on
    every embedding; anything else keeps the raw HNF rows."""
    n = quo.ctx.n
    basis = quo.elements
    gram = [[(basis[i] * basis[j].conj()).trace() for j in range(n)] for i in range(n)]
    try:
        u = linalg.lll_reduce_gram(gram)
    except ValueError:
        return [list(row) for row in quo.mat]
    return [[sum(u[k][i] * quo.mat[i][j] for i in range(n)) for j in range(n)]
            for k in range(n)]


def _equivalence_definite(a: IdealLattice, b: IdealLattice,
                          quo: IdealLattice, target: Fraction) -> EquivalenceResult:
    ctx = a.ctx
    basis = quo.elements
    conj_basis = [e.conj() for e in basis]
    gram = [[(basis[i] * conj_basis[j]).trace() / 2 for j in range(2)] for i in range(2)]
    ginv = linalg.mat_inverse_fraction(gram)
    bounds = []
    for k in range(2):
        cap = target * ginv[k][k]
        bounds.append(isqrt(cap.numerator // cap.denominator))
    for u0 in range(0, bounds[0] + 1):
        lo = -bounds[1] if u0 > 0 else 1  # half box: first nonzero coordinate positive
        for u1 in range(lo, bounds[1] + 1):
            if u0 == 0 and u1 == 0:
                continue
            val = (gram[0][0] * u0 * u0 + 2 * gram[0][1] * u0 * u1 + gram[1][1] * u1 * u1)
            if val != target:
                continue
            x = FieldElement(ctx, tuple(u0 * p + u1 * q for p, q in
                                        zip(basis[0].coeffs, basis[1].coeffs)))
            if a.scale(x) == b:
                _assert_equal_rings(a, b)
                return EquivalenceResult("equivalent", x)
    return EquivalenceResult("not_equivalent")


def _assert_equal_rings(a: IdealLattice, b: IdealLattice) -> None:
    if multiplicator_ring(a).lattice != multiplicator_ring(b).lattice:
        raise ConsistencyError("equivalent ideals with distinct multiplicator rings")


def _sup_norm_shell(n: int, s: int):
    """Integer vectors with sup norm exactly s, first nonzero coordinate
    positive, in deterministic order."""
    for u in product(range(-s, s + 1), repeat=n):
        if max(abs(c) for c in u) != s:
            continue
        lead = next((c for c in u if c != 0), 0)
        if lead > 0:
            yield u
