"""Univariate polynomials over an exact field.

Coefficients are stored constant-term first in a trimmed tuple; the zero
polynomial is the empty tuple and its degree is ``None`` (a sentinel, never
compared numerically).  Everything here is exact: gcd and Bezout via the
extended Euclid algorithm, squarefree radicals valid over Q and over finite
fields (both perfect), and a deterministic finite-field factorization by
distinct-degree splitting plus trial division against enumerated monic
candidates.  Performance is a non-goal; degrees stay below the ambient
matrix size throughout the package.
"""

from __future__ import annotations

import math
from fractions import Fraction

from commutant.errors import FieldMismatchError
from commutant.fields import Field, QQ, RationalField

__all__ = [
    "Poly",
    "poly_gcd",
    "poly_gcd_bezout",
    "squarefree_radical",
    "squarefree_decomposition",
    "factor_finite_field",
    "rational_roots",
    "rational_linear_quadratic_split",
]


class Poly:
    """Dense univariate polynomial over a fixed field."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs=()):
        cs = [field.coerce(c) if not _is_value(field, c) else c for c in coeffs]
        while cs and field.is_zero(cs[-1]):
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    # constructors ----------------------------------------------------------
    @classmethod
    def zero(cls, field):
        return cls(field, ())

    @classmethod
    def one(cls, field):
        return cls(field, (field.one(),))

    @classmethod
    def x(cls, field):
        return cls(field, (field.zero(), field.one()))

    @classmethod
    def constant(cls, field, c):
        return cls(field, (field.coerce(c),))

    @classmethod
    def monomial(cls, field, k, c=1):
        return cls(field, (field.zero(),) * k + (field.coerce(c),))

    # basics ----------------------------------------------------------------
    @property
    def degree(self):
        """Degree as an int, or None for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else None

    def is_zero(self):
        return not self.coeffs

    def is_one(self):
        return len(self.coeffs) == 1 and self.coeffs[0] == self.field.one()

    def is_constant(self):
        return len(self.coeffs) <= 1

    def lead(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == self.field.one()

    def monic(self):
        if self.is_zero():
            raise ValueError("cannot normalize the zero polynomial")
        if self.is_monic():
            return self
        return self.scale(self.field.inv(self.lead()))

    def scale(self, c):
        f = self.field
        return Poly(f, tuple(f.mul(c, a) for a in self.coeffs))

    def shift(self, k):
        """Multiply by x^k."""
        if self.is_zero():
            return self
        return Poly(self.field, (self.field.zero(),) * k + self.coeffs)

    # arithmetic ------------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, Poly):
            raise TypeError("expected a Poly")
        if other.field != self.field:
            raise FieldMismatchError("polynomials over different fields")

    def __add__(self, other):
        self._check(other)
        f = self.field
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = f.add(out[i], c)
        return Poly(f, out)

    def __sub__(self, other):
        self._check(other)
        f = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        z = f.zero()
        a = list(self.coeffs) + [z] * (n - len(self.coeffs))
        for i, c in enumerate(other.coeffs):
            a[i] = f.sub(a[i], c)
        return Poly(f, a)

    def __neg__(self):
        f = self.field
        return Poly(f, tuple(f.neg(c) for c in self.coeffs))

    def __mul__(self, other):
        self._check(other)
        f = self.field
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero(f)
        out = [f.zero()] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if f.is_zero(ai):
                continue
            for j, bj in enumerate(b):
                out[i + j] = f.add(out[i + j], f.mul(ai, bj))
        return Poly(f, out)

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative power")
        result = Poly.one(self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other):
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        f = self.field
        r = list(self.coeffs)
        d = other.coeffs
        dn = len(d)
        inv_lead = f.inv(d[-1])
        q = [f.zero()] * max(0, len(r) - dn + 1)
        while len(r) >= dn:
            c = f.mul(r[-1], inv_lead)
            k = len(r) - dn
            q[k] = c
            for i, di in enumerate(d):
                r[k + i] = f.sub(r[k + i], f.mul(c, di))
            while r and f.is_zero(r[-1]):
                r.pop()
        return Poly(f, q), Poly(f, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other) -> bool:
        return (other % self).is_zero()

    def derivative(self):
        f = self.field
        out = []
        for k, c in enumerate(self.coeffs[1:], start=1):
            out.append(f.mul(f.from_int(k), c))
        return Poly(f, out)

    def evaluate(self, v):
        """Horner evaluation at a field value."""
        f = self.field
        acc = f.zero()
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, v), c)
        return acc

    # comparisons / misc ----------------------------------------------------
    def __eq__(self, other):
        return (
            isinstance(other, Poly)
            and other.field == self.field
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        if self.is_zero():
            return "0"
        f = self.field
        parts = []
        for k, c in enumerate(self.coeffs):
            if f.is_zero(c):
                continue
            cs = f.format_value(c)
            if k == 0:
                parts.append(cs)
            else:
                xs = "x" if k == 1 else f"x^{k}"
                parts.append(xs if cs == "1" else f"{cs}*{xs}")
        return " + ".join(parts)


def _is_value(field, c):
    # fast-path guard so Poly() accepts both raw values and ints
    if isinstance(field, RationalField):
        return isinstance(c, Fraction)
    return False


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd; gcd(0, 0) is 0."""
    if f.field != g.field:
        raise FieldMismatchError("polynomials over different fields")
    a, b = f, g
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def poly_gcd_bezout(f: Poly, g: Poly):
    """Extended Euclid: returns (d, u, v) with u*f + v*g = d, d monic.

    The cofactors carry the usual minimality: deg u < deg g - deg d whenever
    g does not divide f.  Raises on two zero inputs.
    """
    if f.field != g.field:
        raise FieldMismatchError("polynomials over different fields")
    if f.is_zero() and g.is_zero():
        raise ValueError("gcd of two zero polynomials is undefined")
    field = f.field
    r0, r1 = f, g
    u0, u1 = Poly.one(field), Poly.zero(field)
    v0, v1 = Poly.zero(field), Poly.one(field)
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    c = field.inv(r0.lead())
    return r0.scale(c), u0.scale(c), v0.scale(c)


def _pth_root_poly(f: Poly) -> Poly:
    """For f with zero derivative in characteristic p, the g with g^p = f."""
    field = f.field
    p = field.char
    out = []
    for k in range(0, len(f.coeffs), p):
        out.append(field.pth_root(f.coeffs[k]))
    return Poly(field, out)


def squarefree_radical(f: Poly) -> Poly:
    """Product of the distinct irreducible factors of f, monic.

    Valid over Q and over finite fields; both are perfect, so factors whose
    multiplicity is divisible by the characteristic are recovered through
    p-th roots.
    """
    if f.is_zero():
        raise ValueError("radical of the zero polynomial")
    f = f.monic()
    if f.is_constant():
        return Poly.one(f.field)
    fp = f.derivative()
    if fp.is_zero():
        # characteristic p and f = g(x^p)
        return squarefree_radical(_pth_root_poly(f))
    g = poly_gcd(f, fp)
    if g.is_constant():
        return f
    w = f // g
    # strip from g every irreducible already present in w
    c = g
    d = poly_gcd(c, w)
    while not d.is_constant():
        c = c // d
        d = poly_gcd(c, w)
    if c.is_constant():
        return w
    # remaining factors all have multiplicity divisible by char
    return w * squarefree_radical(_pth_root_poly(c))


def squarefree_decomposition(f: Poly):
    """Yun decomposition over a characteristic-zero field.

    Returns [(g_i, i)] with f = lead * prod g_i^i, the g_i squarefree,
    pairwise coprime, monic and nonconstant.
    """
    if f.field.char != 0:
        raise ValueError("Yun decomposition implemented for characteristic zero")
    if f.is_zero():
        raise ValueError("decomposition of the zero polynomial")
    f = f.monic()
    out = []
    if f.is_constant():
        return out
    g = poly_gcd(f, f.derivative())
    w = f // g
    i = 1
    while not w.is_constant():
        y = poly_gcd(w, g)
        z = w // y
        if not z.is_constant():
            out.append((z, i))
        w = y
        g = g // y
        i += 1
    return out


def _iter_monic(field, degree):
    """All monic polynomials of the given degree, by increasing encoding."""
    elems = list(field.elements())
    idx = [0] * degree
    one = field.one()
    while True:
        yield Poly(field, [elems[i] for i in idx] + [one])
        k = 0
        while k < degree:
            idx[k] += 1
            if idx[k] < len(elems):
                break
            idx[k] = 0
            k += 1
        if k == degree:
            return


def _value_key(field, v):
    if isinstance(v, tuple):
        return tuple(int(c) for c in v)
    return (int(v),)


def _poly_sort_key(g: Poly):
    return (g.degree, tuple(_value_key(g.field, c) for c in g.coeffs))


def factor_finite_field(f: Poly):
    """Factor a monic polynomial over a finite field.

    Returns [(irreducible, multiplicity)] sorted by degree then by the
    coefficient sequence, and re-multiplies to the input exactly.  Distinct
    degrees are separated with Frobenius gcds; equal-degree blocks are split
    by trial division against monic candidates in canonical order, which is
    deterministic and entirely adequate at the degrees this package meets.
    """
    field = f.field
    if not field.is_finite:
        raise ValueError("finite-field factorization requested over the rationals")
    if f.is_zero():
        raise ValueError("factorization of the zero polynomial")
    f = f.monic()
    if f.is_constant():
        return []
    rad = squarefree_radical(f)
    q = field.order
    x = Poly.x(field)

    # distinct-degree stage on the radical
    stages = []  # (product of degree-k irreducibles, k)
    rem = rad
    h = x
    k = 0
    while rem.degree is not None and rem.degree >= 1:
        k += 1
        if 2 * k > rem.degree:
            stages.append((rem, rem.degree))
            break
        h = _pow_mod(h, q, rem)
        gk = poly_gcd(h - x, rem)
        if not gk.is_constant():
            stages.append((gk, k))
            rem = rem // gk
            h = h % rem if rem.degree and rem.degree >= 1 else h

    irreducibles = []
    for block, k in stages:
        if block.degree == k:
            irreducibles.append(block)
            continue
        remaining = block
        for cand in _iter_monic(field, k):
            if remaining.degree < k:
                break
            if cand.divides(remaining):
                irreducibles.append(cand)
                remaining = remaining // cand
                if remaining.is_constant():
                    break
        if not remaining.is_constant():
            raise AssertionError("equal-degree split failed")  # unreachable

    out = []
    for pi in irreducibles:
        e = 0
        t = f
        while pi.divides(t):
            t = t // pi
            e += 1
        out.append((pi, e))
    out.sort(key=lambda pe: _poly_sort_key(pe[0]))

    check = Poly.one(field)
    for pi, e in out:
        check = check * pi**e
    if check != f:
        raise AssertionError("factorization does not re-multiply")  # unreachable
    return out


def _pow_mod(base: Poly, e: int, mod: Poly) -> Poly:
    result = Poly.one(base.field)
    base = base % mod
    while e:
        if e & 1:
            result = (result * base) % mod
        base = (base * base) % mod
        e >>= 1
    return result


def _factor_int(n: int) -> dict:
    """Prime factorization by trial division plus Brent's rho."""
    from commutant.fields import is_prime

    out = {}
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p

    def brent(m):
        if m % 2 == 0:
            return 2
        c = 1
        while True:
            x = y = 2
            d = 1
            while d == 1:
                x = (x * x + c) % m
                y = (y * y + c) % m
                y = (y * y + c) % m
                d = math.gcd(abs(x - y), m)
            if d != m:
                return d
            c += 1

    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = brent(m)
        stack.append(d)
        stack.append(m // d)
    return out


def _divisors(n: int):
    divs = [1]
    for p, e in _factor_int(abs(n)).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def _sqrt_fraction(fr: Fraction):
    """Exact rational square root, or None."""
    if fr < 0:
        return None
    sn = math.isqrt(fr.numerator)
    sd = math.isqrt(fr.denominator)
    if sn * sn == fr.numerator and sd * sd == fr.denominator:
        return Fraction(sn, sd)
    return None


def rational_roots(f: Poly):
    """All rational roots of a nonzero polynomial over Q, sorted.

    Degrees one and two are solved in closed form; beyond that, root
    candidates come from the usual divisor criterion on the cleared-
    denominator form and are tested with pure integer arithmetic.
    """
    if f.field != QQ:
        raise ValueError("rational root scan is for polynomials over Q")
    if f.is_zero():
        raise ValueError("zero polynomial")
    if f.degree == 0:
        return []
    if f.degree == 1:
        return [-f.coeffs[0] / f.coeffs[1]]
    if f.degree == 2:
        c, b, a = f.coeffs
        disc = _sqrt_fraction(b * b - 4 * a * c)
        if disc is None:
            return []
        return sorted({(-b + disc) / (2 * a), (-b - disc) / (2 * a)})
    # clear denominators
    denom = 1
    for c in f.coeffs:
        denom = denom * c.denominator // math.gcd(denom, c.denominator)
    ints = [int(c * denom) for c in f.coeffs]
    k = 0
    while ints[k] == 0:
        k += 1
    ints = ints[k:]
    lead = ints[-1]
    const = ints[0]
    deg = len(ints) - 1
    roots = set()
    if k > 0:
        roots.add(Fraction(0))
    for pn in _divisors(const):
        for qn in _divisors(lead):
            if math.gcd(pn, qn) != 1:
                continue
            for u in (pn, -pn):
                # sum of c_j * u^j * qn^(deg-j) vanishes iff u/qn is a root
                acc = 0
                up = 1
                for j, cj in enumerate(ints):
                    acc += cj * up * qn ** (deg - j)
                    up *= u
                if acc == 0:
                    roots.add(Fraction(u, qn))
    return sorted(roots)


def rational_linear_quadratic_split(f: Poly):
    """Try to split a monic rational polynomial into two coprime factors.

    Only splittings reachable by root extraction are attempted: if f has a
    rational root r of multiplicity m and a nonconstant cofactor, the result
    is ((x - r)^m, f / (x - r)^m).  Returns None when no such splitting
    exists; absence is an answer, not an error.
    """
    if f.field != QQ:
        raise ValueError("rational splitting is for polynomials over Q")
    if f.degree is None or f.degree < 2:
        raise ValueError("degree must be at least 2")
    f = f.monic()
    for r in rational_roots(f):
        lin = Poly.x(QQ) - Poly.constant(QQ, r)
        m = 0
        rest = f
        while lin.divides(rest):
            rest = rest // lin
            m += 1
        if rest.is_constant():
            continue  # f is a pure power of (x - r); no coprime split
        return lin**m, rest
    return None
