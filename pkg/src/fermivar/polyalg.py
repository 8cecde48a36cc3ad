"""Univariate-view polynomial algebra: contents, subresultant GCD and
resultants, square-freeness, and irreducibility over GF(p).

Multivariate polynomials are handled through their coefficient lists
with respect to one main variable; coefficients are again MultiPoly
values, so the classical subresultant PRS (Brown's algorithm) runs
unchanged with ground-ring operations replaced by exact polynomial
arithmetic.  Everything here is exact; nothing rounds.
"""

from __future__ import annotations

from .polynomials import MultiPoly
from .rationals import mpq


class BadPrimeError(ValueError):
    """The chosen prime is unusable for a mod-p irreducibility test."""


# ---------------------------------------------------------------------------
# univariate views: lists of MultiPoly coefficients, ascending, stripped
# ---------------------------------------------------------------------------

def _strip(f: list) -> list:
    while f and f[-1].is_zero:
        f.pop()
    return f

def _deg(f: list) -> int:
    return len(f) - 1

def _lc(f: list) -> MultiPoly:
    return f[-1]

def _neg(f: list) -> list:
    return [-c for c in f]

def _sub(f: list, g: list) -> list:
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        a = f[i] if i < len(f) else None
        b = g[i] if i < len(g) else None
        if a is None:
            out.append(-b)
        elif b is None:
            out.append(a)
        else:
            out.append(a - b)
    return _strip(out)

def _mul_ground(f: list, c: MultiPoly) -> list:
    return _strip([a * c for a in f])

def _quo_ground(f: list, c: MultiPoly) -> list:
    return [a.exact_div(c) for a in f]

def _shift_mul(f: list, k: int, c: MultiPoly) -> list:
    # c * x^k * f
    zero = MultiPoly.zero(c.vars)
    return [zero] * k + [a * c for a in f]

def _prem(f: list, g: list) -> list:
    """Pseudo-remainder: lc(g)^(deg f - deg g + 1) * f mod g."""
    df, dg = _deg(f), _deg(g)
    if dg < 0:
        raise ZeroDivisionError("pseudo-division by zero")
    r = list(f)
    dr = df
    if df < dg:
        return r
    n = df - dg + 1
    lc_g = _lc(g)
    while True:
        lc_r = _lc(r)
        j = dr - dg
        n -= 1
        r = _sub(_mul_ground(r, lc_g), _shift_mul(g, j, lc_r))
        dr = _deg(r)
        if dr < dg:
            break
    if n > 0:
        r = _mul_ground(r, _lc_pow(lc_g, n))
    return r

def _lc_pow(c: MultiPoly, n: int) -> MultiPoly:
    return c ** n


def _inner_subresultants(f: list, g: list):
    """Subresultant PRS of f, g (deg f >= deg g > -1) after Brown.

    Returns (prs, scalar_subresultants); the last scalar is the
    resultant whenever the last PRS member has degree 0.
    """
    n, m = _deg(f), _deg(g)
    one = MultiPoly.constant(f[0].vars, 1)
    d = n - m

    b = one if (d + 1) % 2 == 0 else -one
    h = _mul_ground(_prem(f, g), b)
    lc = _lc(g)
    c = lc ** d

    subs = [one, c]
    c = -c
    prs = [f, g]
    while h:
        k = _deg(h)
        prs.append(h)
        f, g, m, d = g, h, k, m - k
        b = -(lc * c ** d)
        h = _quo_ground(_prem(f, g), b)
        lc = _lc(g)
        if d > 1:
            c = ((-lc) ** d).exact_div(c ** (d - 1))
        else:
            c = -lc
        subs.append(-c)
    return prs, subs


# ---------------------------------------------------------------------------
# public operations on MultiPoly
# ---------------------------------------------------------------------------

def content(p: MultiPoly, var: str) -> MultiPoly:
    """GCD of the coefficients of ``p`` viewed as a polynomial in ``var``."""
    coeffs = [c for c in p.coeffs_in(var) if not c.is_zero]
    if not coeffs:
        return MultiPoly.zero(p.vars)
    g = coeffs[0]
    for c in coeffs[1:]:
        g = gcd(g, c)
        if g.is_constant:
            break
    return _normalize(g)

def primitive_part(p: MultiPoly, var: str) -> MultiPoly:
    c = content(p, var)
    if c.is_zero or c.is_constant:
        return _normalize_assoc(p)
    return p.exact_div(c)

def _lex_lc(p: MultiPoly):
    return p.terms[max(p.terms)]

def _normalize(p: MultiPoly) -> MultiPoly:
    """Monic-like canonical associate: lex-leading coefficient 1."""
    if p.is_zero:
        return p
    lc = _lex_lc(p)
    if lc == 1:
        return p
    return p.scale(mpq(1) / lc if isinstance(lc, mpq) else 1 / lc)

def _normalize_assoc(p: MultiPoly) -> MultiPoly:
    return _normalize(p)


def gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """Multivariate GCD by recursive subresultant PRS.

    The result is normalized so that its lex-leading coefficient is 1
    (coefficients live in a field, so the GCD is defined up to a unit).
    """
    if a.vars != b.vars:
        raise ValueError("variable sets differ")
    if a.is_zero:
        return _normalize(b)
    if b.is_zero:
        return _normalize(a)
    if a.is_constant or b.is_constant:
        return MultiPoly.constant(a.vars, 1)
    var = next(v for v in a.vars if a.uses(v) or b.uses(v))
    if not a.uses(var):
        return gcd(a, content(b, var))
    if not b.uses(var):
        return gcd(content(a, var), b)
    ca = content(a, var)
    cb = content(b, var)
    cont = gcd(ca, cb)
    pa = a if ca.is_constant else a.exact_div(ca)
    pb = b if cb.is_constant else b.exact_div(cb)
    fa, fb = pa.coeffs_in(var), pb.coeffs_in(var)
    if _deg(fa) < _deg(fb):
        fa, fb = fb, fa
    prs, _ = _inner_subresultants(fa, fb)
    last = prs[-1]
    if _deg(last) == 0:
        return _normalize(cont)
    g = MultiPoly.from_coeffs_in(a.vars, var, last)
    g = primitive_part(g, var)
    return _normalize(cont * g)


# spec name for the same operation
subresultant_gcd = gcd


def resultant(a: MultiPoly, b: MultiPoly, var: str) -> MultiPoly:
    """Resultant eliminating ``var``: lc(a)^deg(b) * prod b(roots of a).

    The swap convention Res(a, b) = (-1)^(deg a * deg b) Res(b, a) is
    applied so the identity above holds unconditionally.
    """
    if a.vars != b.vars:
        raise ValueError("variable sets differ")
    if not a.uses(var) and not b.uses(var):
        raise ValueError(f"{var!r} occurs in neither operand")
    if a.is_zero or b.is_zero:
        return MultiPoly.zero(a.vars)
    fa, fb = a.coeffs_in(var), b.coeffs_in(var)
    da, db = _deg(fa), _deg(fb)
    if da == 0:
        return fa[0] ** db
    if db == 0:
        return fb[0] ** da
    sign = 1
    if da < db:
        fa, fb = fb, fa
        if (da * db) % 2:
            sign = -1
    prs, subs = _inner_subresultants(fa, fb)
    if _deg(prs[-1]) > 0:
        return MultiPoly.zero(a.vars)
    res = subs[-1]
    return -res if sign < 0 else res


def squarefree_test(p: MultiPoly) -> bool:
    """True iff ``p`` has no repeated non-constant factor.

    Criterion: the GCD of ``p`` with all of its partial derivatives
    jointly is constant.  (A repeated factor divides every partial; a
    factor free of some variable divides that partial derivative, which
    is why the derivatives are accumulated rather than tested one by
    one.)
    """
    if p.is_zero:
        return False
    if p.is_constant:
        return True
    g = p
    for v in p.vars:
        if p.uses(v):
            g = gcd(g, p.derivative(v))
            if g.is_constant:
                return True
    return g.is_constant


# ---------------------------------------------------------------------------
# GF(p)[x] kernel and rational-coefficient irreducibility mod p
# ---------------------------------------------------------------------------

def _gf_strip(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f

def _gf_mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                if b:
                    out[i + j] = (out[i + j] + a * b) % p
    return _gf_strip(out)

def _gf_rem(f, g, p):
    f = list(f)
    dg = len(g) - 1
    inv = pow(g[-1], -1, p)
    while len(f) - 1 >= dg and f:
        k = len(f) - 1 - dg
        c = (f[-1] * inv) % p
        for j, b in enumerate(g):
            f[k + j] = (f[k + j] - c * b) % p
        _gf_strip(f)
    return f

def _gf_gcd(f, g, p):
    f, g = list(f), list(g)
    while g:
        f, g = g, _gf_rem(f, g, p)
    if f:
        inv = pow(f[-1], -1, p)
        f = [(a * inv) % p for a in f]
    return f

def _gf_powmod(f, n, mod, p):
    result = [1]
    f = _gf_rem(list(f), mod, p)
    while n:
        if n & 1:
            result = _gf_rem(_gf_mul(result, f, p), mod, p)
        f = _gf_rem(_gf_mul(f, f, p), mod, p)
        n >>= 1
    return result

def _gf_diff(f, p):
    return _gf_strip([(k * c) % p for k, c in enumerate(f)][1:])


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def irreducible_mod_p(coeffs, p: int) -> bool:
    """Rabin irreducibility of a rational univariate polynomial mod p.

    ``coeffs`` is the ascending coefficient list (mpq or int).  True is
    returned iff the reduction mod p is irreducible *of the same degree*;
    a prime that collides with a denominator, drops the degree, or
    destroys square-freeness raises :class:`BadPrimeError` (pick a
    different prime).
    """
    coeffs = [mpq(c) for c in coeffs]
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    n = len(coeffs) - 1
    if n < 1:
        raise ValueError("degree must be at least 1")
    denom = 1
    for c in coeffs:
        denom = denom * c.denominator // _int_gcd(denom, c.denominator)
    if denom % p == 0:
        raise BadPrimeError(f"prime {p} divides a coefficient denominator")
    ints = [int(c * denom) for c in coeffs]
    if ints[-1] % p == 0:
        raise BadPrimeError(f"prime {p} kills the leading coefficient (degree drop)")
    f = [c % p for c in ints]
    # square-freeness of f itself must survive the reduction, otherwise
    # the reduction carries no irreducibility information
    if len(_gf_gcd(f, _gf_diff(f, p), p)) - 1 > 0:
        if _rational_squarefree(coeffs):
            raise BadPrimeError(f"prime {p} breaks square-freeness")
        return False
    if n == 1:
        return True
    x = [0, 1]
    # x^(p^n) == x mod f
    h = list(x)
    for _ in range(n):
        h = _gf_powmod(h, p, f, p)
    if _gf_sub(h, x, p):
        return False
    # gcd(x^(p^(n/l)) - x, f) == 1 for each prime l | n
    for ell in _prime_factors(n):
        h = list(x)
        for _ in range(n // ell):
            h = _gf_powmod(h, p, f, p)
        g = _gf_gcd(_gf_sub(h, x, p), f, p)
        if len(g) - 1 != 0:
            return False
    return True


def _gf_sub(f, g, p):
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        a = f[i] if i < len(f) else 0
        b = g[i] if i < len(g) else 0
        out.append((a - b) % p)
    return _gf_strip(out)


def _int_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _rational_squarefree(coeffs: list) -> bool:
    diff = [c * k for k, c in enumerate(coeffs)][1:]
    return _uni_gcd_degree(coeffs, diff) == 0


def _uni_gcd_degree(f: list, g: list) -> int:
    f = [mpq(c) for c in f]
    g = [mpq(c) for c in g]
    def strip(h):
        while h and not h[-1]:
            h.pop()
        return h
    f, g = strip(f), strip(g)
    while g:
        # monic euclidean remainder
        while len(f) >= len(g):
            c = f[-1] / g[-1]
            k = len(f) - len(g)
            for j, b in enumerate(g):
                f[k + j] -= c * b
            strip(f)
            if not f:
                break
        f, g = g, f
    return len(f) - 1
