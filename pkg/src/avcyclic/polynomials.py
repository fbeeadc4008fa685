"""Exact univariate polynomial arithmetic over Z and Q.

Polynomials are tuples of coefficients in increasing degree order:
``coeffs[k]`` is the coefficient of t^k.  The zero polynomial is the empty
tuple.  Integer and Fraction coefficients mix freely; nothing here touches
floating point.

A second, self-contained section provides arithmetic in F_p[t], used by the
irreducibility sieve.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Poly = tuple


def trim(coeffs: Sequence) -> Poly:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def degree(p: Sequence) -> int:
    """Degree, with degree(0) = -1."""
    return len(trim(p)) - 1


def add(p: Sequence, q: Sequence) -> Poly:
    n = max(len(p), len(q))
    return trim([(p[k] if k < len(p) else 0) + (q[k] if k < len(q) else 0) for k in range(n)])


def neg(p: Sequence) -> Poly:
    return tuple(-c for c in p)


def sub(p: Sequence, q: Sequence) -> Poly:
    return add(p, neg(q))


def scale(p: Sequence, c) -> Poly:
    if c == 0:
        return ()
    return tuple(c * a for a in p)


def mul(p: Sequence, q: Sequence) -> Poly:
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return trim(out)


def evaluate(p: Sequence, x):
    """Horner evaluation; exact for int/Fraction arguments."""
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def derivative(p: Sequence) -> Poly:
    return trim([k * p[k] for k in range(1, len(p))])


def divmod_exact(p: Sequence, q: Sequence) -> tuple[Poly, Poly]:
    """Quotient and remainder over Q.  q must be nonzero."""
    q = trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = [Fraction(c) for c in p]
    dq = len(q) - 1
    lead = Fraction(q[-1])
    quo = [Fraction(0)] * max(0, len(rem) - dq)
    while len(trim(rem)) - 1 >= dq and trim(rem):
        rem = list(trim(rem))
        k = len(rem) - 1 - dq
        c = rem[-1] / lead
        quo[k] = c
        for j in range(dq + 1):
            rem[k + j] -= c * q[j]
    return trim(quo), trim(rem)


def divides(q: Sequence, p: Sequence) -> bool:
    _, rem = divmod_exact(p, q)
    return not rem


def monic(p: Sequence) -> Poly:
    p = trim(p)
    if not p:
        return ()
    lead = p[-1]
    return tuple(Fraction(c, 1) / lead for c in p)


def gcd_poly(p: Sequence, q: Sequence) -> Poly:
    """Monic gcd over Q (1-tuple for coprime, () only if both zero)."""
    a, b = trim(p), trim(q)
    while b:
        _, r = divmod_exact(a, b)
        a, b = b, r
    return monic(a)


def int_coeffs(p: Sequence) -> Poly:
    """Cast rational coefficients known to be integral back to int."""
    out = []
    for c in p:
        f = Fraction(c)
        if f.denominator != 1:
            raise ValueError(f"coefficient {c} is not an integer")
        out.append(f.numerator)
    return tuple(out)


def content(p: Sequence) -> int:
    g = 0
    for c in p:
        g = gcd(g, c)
    return g


def from_monic_first(seq: Sequence) -> Poly:
    """Convert a coefficient list written highest degree first."""
    return trim(list(reversed(list(seq))))


def to_monic_first(p: Sequence) -> tuple:
    return tuple(reversed(trim(p)))


def power_sums(f_low: Sequence, count: int) -> list:
    """Newton power sums s_k = sum of k-th powers of the roots of monic f,
    for k = 0..count (inclusive).  f given lowest degree first."""
    f = trim(f_low)
    n = len(f) - 1
    if n < 0 or f[-1] != 1:
        raise ValueError("power_sums needs a monic polynomial")
    # a[i] is the coefficient of t^(n-i), so a[0] = 1.
    a = list(reversed(f))
    s = [Fraction(n)]
    for k in range(1, count + 1):
        if k <= n:
            acc = Fraction(-k) * a[k]
            for i in range(1, k):
                acc -= a[i] * s[k - i]
        else:
            acc = Fraction(0)
            for i in range(1, n + 1):
                acc -= a[i] * s[k - i]
        s.append(acc)
    return s


# ---------------------------------------------------------------------------
# Arithmetic in F_p[t].  Coefficient tuples, lowest degree first, entries in
# range(p).  Only what the distinct-degree sieve needs.


def pmod(p: Sequence, m: int) -> Poly:
    return trim([c % m for c in p])


def pmod_mul(a: Sequence, b: Sequence, m: int) -> Poly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % m
    return trim(out)


def pmod_rem(a: Sequence, f: Sequence, m: int) -> Poly:
    """Remainder of a modulo monic-up-to-unit f, coefficients mod m (prime)."""
    f = trim(f)
    inv_lead = pow(f[-1], -1, m)
    rem = [c % m for c in a]
    df = len(f) - 1
    while len(trim(rem)) - 1 >= df:
        rem = list(trim(rem))
        k = len(rem) - 1 - df
        c = (rem[-1] * inv_lead) % m
        for j in range(df + 1):
            rem[k + j] = (rem[k + j] - c * f[j]) % m
    return trim(rem)


def pmod_powmod(base: Sequence, e: int, f: Sequence, m: int) -> Poly:
    """base^e modulo f over F_m, square and multiply."""
    result: Poly = (1,)
    acc = pmod_rem(base, f, m)
    while e:
        if e & 1:
            result = pmod_rem(pmod_mul(result, acc, m), f, m)
        acc = pmod_rem(pmod_mul(acc, acc, m), f, m)
        e >>= 1
    return result


def pmod_gcd(a: Sequence, b: Sequence, m: int) -> Poly:
    a, b = pmod(a, m), pmod(b, m)
    while b:
        a, b = b, pmod_rem(a, b, m)
    if not a:
        return ()
    inv = pow(a[-1], -1, m)
    return tuple((c * inv) % m for c in a)


def pmod_div_exact(a: Sequence, b: Sequence, m: int) -> Poly:
    """Exact quotient a/b over F_m; raises if the division leaves a remainder."""
    b = trim(b)
    inv_lead = pow(b[-1], -1, m)
    rem = [c % m for c in a]
    db = len(b) - 1
    quo = [0] * max(1, len(rem) - db)
    while len(trim(rem)) - 1 >= db:
        rem = list(trim(rem))
        k = len(rem) - 1 - db
        c = (rem[-1] * inv_lead) % m
        quo[k] = c
        for j in range(db + 1):
            rem[k + j] = (rem[k + j] - c * b[j]) % m
    if trim(rem):
        raise ValueError("inexact division in F_p[t]")
    return trim(quo)


def distinct_degree_pattern(f_low: Sequence, p: int) -> list[int] | None:
    """Multiset of irreducible factor degrees of monic f over F_p, or None
    when f mod p is not squarefree (the sieve skips such primes)."""
    f = pmod(f_low, p)
    if len(f) - 1 != len(trim(f_low)) - 1:
        return None  # leading coefficient vanished; not monic mod p
    d = pmod_gcd(f, derivative(f), p)
    if len(d) > 1:
        return None
    degrees: list[int] = []
    rem = f
    x: Poly = (0, 1)
    power = x
    d_deg = 1
    while len(rem) - 1 >= 2 * d_deg:
        # power = x^(p^d_deg) mod rem
        power = pmod_powmod(power, p, rem, p)
        g = pmod_gcd(sub(power, x), rem, p)
        if len(g) > 1:
            degrees.extend([d_deg] * ((len(g) - 1) // d_deg))
            rem = pmod_div_exact(rem, g, p)
            power = pmod_rem(power, rem, p)
        d_deg += 1
    if len(rem) > 1:
        degrees.append(len(rem) - 1)
    degrees.sort()
    return degrees
