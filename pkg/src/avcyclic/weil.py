"""Weil polynomial contexts: validation, ordinariness, irreducibility,
point counts, and desk-scale enumeration.

A context bundles a prime power q = p^r, a dimension g, and a monic integer
polynomial of degree 2g given highest-degree-first (constant term last).
Root location on the circle of radius sqrt(q) is decided exactly: the
functional equation is checked coefficient-wise, the real substitution
s = t + q/t produces a degree-g polynomial h, and a Sturm count over Q
(with exact sign evaluation at the irrational endpoints +-2*sqrt(q)) must
find all g roots of h inside [-2*sqrt(q), 2*sqrt(q)].
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb, gcd, isqrt
from typing import Sequence

from . import polynomials as poly
from .errors import CapabilityError, InputError

DEGREE_CAP = 8  # largest polynomial degree the exact kernels accept
ENUM_Q_CAP = 16
ENUM_G_CAP = 2

_SIEVE_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors in increasing order (trial division)."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def prime_power_split(q: int) -> tuple[int, int] | None:
    """(p, r) with q = p^r, or None if q is not a prime power."""
    if q < 2:
        return None
    ps = prime_factors(q)
    if len(ps) != 1:
        return None
    p = ps[0]
    r = 0
    while q > 1:
        q //= p
        r += 1
    return p, r


@dataclass(frozen=True)
class WeilContext:
    """Validated input bundle for one isogeny class candidate.

    ``f`` is the monic coefficient tuple, highest degree first.  The three
    flags record what validation found; construction never silently rejects
    a polynomial that parses, it just flags it.
    """

    p: int
    r: int
    q: int
    g: int
    f: tuple[int, ...]
    is_weil: bool
    weil_reason: str | None
    is_ordinary: bool
    is_irreducible: bool

    @cached_property
    def f_low(self) -> tuple[int, ...]:
        return poly.from_monic_first(self.f)

    @property
    def n(self) -> int:
        return 2 * self.g

    @cached_property
    def point_count(self) -> int:
        """Order of the group of rational points: f(1)."""
        value = poly.evaluate(self.f_low, 1)
        if self.is_weil and value <= 0:
            raise InputError("bad_point_count", "f(1) must be positive for a Weil polynomial")
        return value

    @cached_property
    def power_rows(self) -> tuple[tuple[int, ...], ...]:
        """Power-basis coordinates of alpha^k for k = 0 .. 2n-2."""
        n = self.n
        # alpha^n = -(a_n + a_{n-1} alpha + ... + a_1 alpha^{n-1})
        top = tuple(-c for c in self.f_low[:n])
        rows = [tuple(1 if j == k else 0 for j in range(n)) for k in range(n)]
        for _ in range(n - 1):
            prev = rows[-1]
            shifted = [0] + list(prev[: n - 1])
            carry = prev[n - 1]
            rows.append(tuple(shifted[j] + carry * top[j] for j in range(n)))
        return tuple(rows)

    @cached_property
    def trace_sums(self) -> tuple[int, ...]:
        """Newton power sums of the roots, k = 0 .. 2n-2 (always integers)."""
        sums = poly.power_sums(self.f_low, 2 * self.n - 2)
        return tuple(int(s) for s in sums)


def make_context(p: int, r: int, g: int, coeffs: Sequence[int]) -> WeilContext:
    """Validate raw input and compute the context flags."""
    if not is_prime(p):
        raise InputError("p_not_prime", f"p = {p} is not prime")
    if r < 1:
        raise InputError("bad_extension", "r must be a positive integer")
    if g < 1:
        raise InputError("bad_dimension", "g must be a positive integer")
    if 2 * g > DEGREE_CAP:
        raise CapabilityError(f"degree 2g = {2 * g} exceeds the supported cap {DEGREE_CAP}")
    coeffs = list(coeffs)
    if len(coeffs) != 2 * g + 1:
        raise InputError("bad_degree", f"expected {2 * g + 1} coefficients, got {len(coeffs)}")
    if any(not isinstance(c, int) for c in coeffs):
        raise InputError("not_integer", "coefficients must be integers")
    if coeffs[0] != 1:
        raise InputError("not_monic", "leading coefficient must be 1")
    q = p**r
    f = tuple(coeffs)
    ok, reason = _weil_reason(poly.from_monic_first(f), q)
    ordinary = gcd(f[g], p) == 1  # middle coefficient coprime to p
    irreducible = is_irreducible(f)
    return WeilContext(p, r, q, g, f, ok, reason, ordinary, irreducible)


def validate_weil(coeffs: Sequence[int], q: int) -> bool:
    """True iff the monic even-degree polynomial has every root on
    |t| = sqrt(q).  Exact; no floating point."""
    f_low = poly.from_monic_first(coeffs)
    ok, _ = _weil_reason(f_low, q)
    return ok


def weil_failure_reason(coeffs: Sequence[int], q: int) -> str | None:
    _, reason = _weil_reason(poly.from_monic_first(coeffs), q)
    return reason


def _weil_reason(f_low: tuple, q: int) -> tuple[bool, str | None]:
    n = len(f_low) - 1
    if n < 2 or n % 2:
        return False, "bad_degree"
    if f_low[-1] != 1:
        return False, "not_monic"
    g = n // 2
    if f_low[0] != q**g:
        return False, "constant_term"
    # a_i is the coefficient of t^(2g-i); the root pairing t <-> q/t forces
    # a_{2g-i} = q^(g-i) a_i, i.e. f_low[i] = q^(g-i) * f_low[2g-i].
    for i in range(g):
        if f_low[i] != q ** (g - i) * f_low[n - i]:
            return False, "functional_equation"
    h = _real_substitution(f_low, q, g)
    if _roots_in_interval_count(h, q) != g:
        return False, "root_location"
    return True, None


def _real_substitution(f_low: tuple, q: int, g: int) -> tuple:
    """The unique h with f(t) = t^g h(t + q/t); requires the functional
    equation (checked by the caller)."""
    work = list(f_low) + [0] * (2 * g + 1 - len(f_low))
    h = [0] * (g + 1)
    for k in range(g, -1, -1):
        c = work[g + k]
        h[k] = c
        if c:
            # subtract c * t^g * (t + q/t)^k = c * sum_j C(k,j) q^j t^(g+k-2j)
            for j in range(k + 1):
                work[g + k - 2 * j] -= c * comb(k, j) * q**j
    if any(work):
        raise AssertionError("real substitution left a nonzero remainder")
    return poly.trim(h)


def _sign_at_sqrt_multiple(p_: Sequence, eps: int, q: int) -> int:
    """Exact sign of p(eps * 2 * sqrt(q)) for a rational polynomial p."""
    a = Fraction(0)
    b = Fraction(0)
    for k, c in enumerate(p_):
        if c == 0:
            continue
        term = Fraction(c) * (eps * 2) ** k * q ** (k // 2)
        if k % 2:
            b += term
        else:
            a += term
    if a == 0 and b == 0:
        return 0
    if a >= 0 and b >= 0:
        return 1
    if a <= 0 and b <= 0:
        return -1
    d = a * a - b * b * q
    if a > 0:  # b < 0: positive iff a^2 > b^2 q
        return 1 if d > 0 else (-1 if d < 0 else 0)
    return 1 if d < 0 else (-1 if d > 0 else 0)


def _sturm_chain(p_: Sequence) -> list[tuple]:
    chain = [poly.trim(p_), poly.derivative(p_)]
    while chain[-1]:
        _, rem = poly.divmod_exact(chain[-2], chain[-1])
        if not rem:
            break
        chain.append(poly.neg(rem))
    return [c for c in chain if c]


def _variations(signs: list[int]) -> int:
    seq = [s for s in signs if s != 0]
    return sum(1 for x, y in zip(seq, seq[1:]) if x * y < 0)


def _sturm_count_open(p_: Sequence, q: int) -> int:
    """Distinct roots of p in the open interval (-2 sqrt q, 2 sqrt q);
    p must not vanish at either endpoint."""
    if poly.degree(p_) < 1:
        return 0
    chain = _sturm_chain(p_)
    lo = _variations([_sign_at_sqrt_multiple(c, -1, q) for c in chain])
    hi = _variations([_sign_at_sqrt_multiple(c, +1, q) for c in chain])
    return lo - hi


def _roots_in_interval_count(h: tuple, q: int) -> int:
    """Number of real roots of h in the closed interval [-2 sqrt q, 2 sqrt q],
    counted WITH multiplicity.  Exact for rational h."""
    h = poly.monic(h)
    if not h:
        raise AssertionError("zero polynomial")
    count = 0
    # Strip endpoint roots first so Sturm evaluation never lands on a zero.
    root_q = isqrt(q)
    if root_q * root_q == q:
        for m in (2 * root_q, -2 * root_q):
            factor = (Fraction(-m), Fraction(1))
            while poly.degree(h) >= 1 and poly.evaluate(h, m) == 0:
                h, _ = poly.divmod_exact(h, factor)
                count += 1
    else:
        factor = (Fraction(-4 * q), Fraction(0), Fraction(1))  # s^2 - 4q
        while poly.degree(h) >= 2 and poly.divides(factor, h):
            h, _ = poly.divmod_exact(h, factor)
            count += 2
    # gcd chain: distinct roots of the k-th derivative-gcd are the roots of h
    # with multiplicity > k, so summing distinct counts totals multiplicity.
    d = h
    while poly.degree(d) >= 1:
        count += _sturm_count_open(d, q)
        d = poly.gcd_poly(d, poly.derivative(d))
    return count


# ---------------------------------------------------------------------------
# Irreducibility over Q for monic integer polynomials, desk scale.


def is_irreducible(coeffs: Sequence[int]) -> bool:
    """Irreducibility over Q of a monic integer polynomial of degree <= 8.

    Square-free check, then factor-degree patterns over several small
    finite fields; any degree the sieve cannot rule out is settled by a
    bounded exhaustive search for a monic integer factor.
    """
    f_low = poly.from_monic_first(coeffs)
    n = poly.degree(f_low)
    if n > DEGREE_CAP:
        raise CapabilityError(f"degree {n} exceeds the supported cap {DEGREE_CAP}")
    if n <= 0:
        return False
    if n == 1:
        return True
    if f_low[-1] != 1:
        raise InputError("not_monic", "irreducibility test expects a monic polynomial")
    if _integer_root_exists(f_low):
        return False
    if n <= 3:
        return True  # no rational root and degree <= 3
    if poly.degree(poly.gcd_poly(f_low, poly.derivative(f_low))) >= 1:
        return False
    candidates = set(range(2, n // 2 + 1))
    for pr in _SIEVE_PRIMES:
        pattern = poly.distinct_degree_pattern(f_low, pr)
        if pattern is None:
            continue
        if pattern == [n]:
            return True
        candidates &= _subset_sums(pattern)
        if not candidates:
            return True
    for d in sorted(candidates):
        if _has_factor_of_degree(f_low, d):
            return False
    return True


def _integer_root_exists(f_low: tuple) -> bool:
    c0 = f_low[0]
    if c0 == 0:
        return True
    for div in _divisors(abs(c0)):
        if poly.evaluate(f_low, div) == 0 or poly.evaluate(f_low, -div) == 0:
            return True
    return False


def _divisors(v: int) -> list[int]:
    out = [d for d in range(1, isqrt(v) + 1) if v % d == 0]
    out += [v // d for d in reversed(out) if d * d != v]
    return out


def _subset_sums(multiset: list[int]) -> set[int]:
    sums = {0}
    for x in multiset:
        sums |= {s + x for s in sums}
    return sums


def _has_factor_of_degree(f_low: tuple, d: int) -> bool:
    """Exhaustive search for a monic integer factor of degree d.

    Any factor's roots are roots of f, so the coefficient of t^k obeys the
    elementary-symmetric bound |c_k| <= C(d, d-k) * RB^(d-k) with RB the
    Cauchy root bound; the constant term additionally divides f(0)."""
    from itertools import product

    rb = 1 + max(abs(c) for c in f_low[:-1])
    c0_divs = _divisors(abs(f_low[0]))
    ranges = [range(-comb(d, d - k) * rb ** (d - k), comb(d, d - k) * rb ** (d - k) + 1)
              for k in range(1, d)]
    for mids in product(*ranges):
        for c0 in c0_divs:
            for signed in (c0, -c0):
                cand = poly.trim((signed,) + mids + (1,))
                if poly.divides(cand, f_low):
                    return True
    return False


# ---------------------------------------------------------------------------
# Enumeration


def enumerate_weil_contexts(
    p: int,
    r: int,
    g: int,
    *,
    ordinary: bool | None = None,
    irreducible: bool | None = None,
) -> list[WeilContext]:
    """All degree-2g contexts over F_q passing the root-location check,
    in lexicographic coefficient order, optionally filtered by the
    ordinary/irreducible flags.  Supports g in {1, 2} and q <= 16."""
    if g > ENUM_G_CAP:
        raise CapabilityError(f"enumeration supports g <= {ENUM_G_CAP}")
    if not is_prime(p) or r < 1:
        raise InputError("bad_field", "q must be a prime power")
    q = p**r
    if q > ENUM_Q_CAP:
        raise CapabilityError(f"enumeration supports q <= {ENUM_Q_CAP}")
    out = []
    # Only coefficient vectors already satisfying the functional equation can
    # pass validate_weil, so the generator fixes the mirrored coefficients.
    if g == 1:
        top = isqrt(4 * q)
        for a1 in range(-top, top + 1):
            ctx = make_context(p, r, g, [1, a1, q])
            if ctx.is_weil and _match(ctx, ordinary, irreducible):
                out.append(ctx)
    else:
        top1 = isqrt(16 * q)
        for a1 in range(-top1, top1 + 1):
            for a2 in range(-6 * q, 6 * q + 1):
                ctx = make_context(p, r, g, [1, a1, a2, q * a1, q * q])
                if ctx.is_weil and _match(ctx, ordinary, irreducible):
                    out.append(ctx)
    return out


def _match(ctx: WeilContext, ordinary: bool | None, irreducible: bool | None) -> bool:
    if ordinary is not None and ctx.is_ordinary != ordinary:
        return False
    if irreducible is not None and ctx.is_irreducible != irreducible:
        return False
    return True
