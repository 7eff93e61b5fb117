"""Exact scalar arithmetic over Q, GF(p) and GF(p^d).

Scalars are plain canonical Python values rather than wrapper objects:
``Fraction`` for rationals, ``int`` residues in [0, p) for prime fields and
fixed-length tuples of residues (constant coefficient first) for extension
fields.  A :class:`Field` object carries the arithmetic; containers such as
matrices and polynomials hold raw values plus a field reference and reject
mixed-field operands at their own boundaries.  Keeping values unboxed keeps
the elimination hot loops free of per-element dispatch.

Extension fields are F_p[x] modulo a stored monic irreducible.  When no
modulus is given, construction picks the irreducible of the requested degree
with the smallest integer encoding sum(c_i * p^i), so field towers are
reproducible across runs.
"""

from __future__ import annotations

from fractions import Fraction

from commutant.errors import FieldMismatchError

__all__ = [
    "Field",
    "RationalField",
    "PrimeField",
    "ExtensionField",
    "QQ",
    "GF",
    "is_prime",
    "find_irreducible",
    "parse_field_label",
]

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for every n below 3.3e24."""
    if n < 2:
        return False
    for small in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % small == 0:
            return n == small
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# Low-level polynomial arithmetic over F_p on int lists, constant term first.
# Used for extension-field arithmetic and modulus validation; the public
# polynomial type lives in commutant.polys.
# ---------------------------------------------------------------------------

def _trim(cs):
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _trim([c % p for c in out])


def _pdivmod(a, b, p):
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = _trim(list(a))
    q = [0] * max(0, len(a) - len(b) + 1)
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        c = a[-1] * inv_lead % p
        k = len(a) - len(b)
        q[k] = c
        for i, bi in enumerate(b):
            a[k + i] = (a[k + i] - c * bi) % p
        _trim(a)
    return _trim(q), a


def _pmod(a, b, p):
    return _pdivmod(a, b, p)[1]


def _pgcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    if a:
        inv_lead = pow(a[-1], p - 2, p)
        a = [c * inv_lead % p for c in a]
    return a


def _ppow_mod(base, e, mod, p):
    result = [1]
    base = _pmod(base, mod, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), mod, p)
        base = _pmod(_pmul(base, base, p), mod, p)
        e >>= 1
    return result


def _is_irreducible(coeffs, p) -> bool:
    """Rabin irreducibility test for a monic polynomial over F_p."""
    d = len(coeffs) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    x = [0, 1]
    # x^(p^d) == x mod f
    fr = x
    for _ in range(d):
        fr = _ppow_mod(fr, p, coeffs, p)
    if _trim([(a - b) % p for a, b in zip_pad(fr, x, p)]):
        return False
    # gcd(x^(p^(d/r)) - x, f) == 1 for every prime divisor r of d
    for r in _prime_divisors(d):
        fr = x
        for _ in range(d // r):
            fr = _ppow_mod(fr, p, coeffs, p)
        diff = _trim([(a - b) % p for a, b in zip_pad(fr, x, p)])
        if len(_pgcd(diff, coeffs, p)) != 1:
            return False
    return True


def zip_pad(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return zip(a, b)


def _prime_divisors(n):
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


def find_irreducible(p: int, d: int) -> tuple:
    """Monic irreducible of degree d over F_p with least integer encoding.

    The encoding of c_0 + c_1 x + ... + x^d is sum(c_i * p^i); candidates are
    scanned in increasing encoding order, so the result is reproducible.
    """
    if d < 1:
        raise ValueError("degree must be positive")
    if d == 1:
        return (0, 1)
    for code in range(p**d):
        coeffs = []
        c = code
        for _ in range(d):
            coeffs.append(c % p)
            c //= p
        coeffs.append(1)
        if _is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise AssertionError("no irreducible found")  # cannot happen


# ---------------------------------------------------------------------------
# Field objects
# ---------------------------------------------------------------------------

class Field:
    """Common interface: canonical values plus arithmetic on them.

    Subclasses provide scalar operations and a few row-level kernels
    (``vec_dot``, ``row_submul``, ``row_scale``) that elimination loops call
    once per row instead of once per entry.
    """

    kind = None
    char = None
    order = None  # number of elements, None when infinite

    # scalar arithmetic -----------------------------------------------------
    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return a == self.zero()

    def from_int(self, k: int):
        raise NotImplementedError

    def pth_root(self, a):
        """Inverse Frobenius; identity in characteristic zero."""
        raise NotImplementedError

    def coerce(self, x):
        """Accept ints (and representation-compatible values) as elements."""
        raise NotImplementedError

    # vector kernels --------------------------------------------------------
    def vec_dot(self, xs, ys):
        acc = self.zero()
        for x, y in zip(xs, ys):
            acc = self.add(acc, self.mul(x, y))
        return acc

    def row_submul(self, dst, src, c, start=0):
        """dst[j] -= c * src[j] for j >= start, in place."""
        for j in range(start, len(dst)):
            dst[j] = self.sub(dst[j], self.mul(c, src[j]))

    def row_scale(self, row, c, start=0):
        for j in range(start, len(row)):
            row[j] = self.mul(row[j], c)

    # misc ------------------------------------------------------------------
    @property
    def is_finite(self):
        return self.order is not None

    def elements(self):
        raise NotImplementedError("field is not finite")

    def random_value(self, rng):
        raise NotImplementedError

    def format_value(self, a) -> str:
        raise NotImplementedError

    def parse_value(self, text: str):
        raise NotImplementedError

    def label(self) -> str:
        raise NotImplementedError

    def __repr__(self):
        return self.label()


class RationalField(Field):
    """The rationals, represented by ``fractions.Fraction``."""

    kind = "rationals"
    char = 0
    order = None

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def is_zero(self, a):
        return not a

    def from_int(self, k):
        return Fraction(k)

    def pth_root(self, a):
        return a

    def coerce(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        raise TypeError(f"cannot interpret {x!r} as a rational")

    def vec_dot(self, xs, ys):
        acc = Fraction(0)
        for x, y in zip(xs, ys):
            acc += x * y
        return acc

    def row_submul(self, dst, src, c, start=0):
        for j in range(start, len(dst)):
            dst[j] = dst[j] - c * src[j]

    def row_scale(self, row, c, start=0):
        for j in range(start, len(row)):
            row[j] = row[j] * c

    def random_value(self, rng):
        return Fraction(rng.randrange(-9, 10), rng.randrange(1, 8))

    def format_value(self, a):
        return str(a)

    def parse_value(self, text):
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad rational literal {text!r}") from exc

    def label(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")


class PrimeField(Field):
    """GF(p): int residues in [0, p)."""

    kind = "prime-field"

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.char = p
        self.order = p

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def is_zero(self, a):
        return a == 0

    def from_int(self, k):
        return k % self.p

    def pth_root(self, a):
        return a  # Frobenius is the identity on F_p

    def coerce(self, x):
        if isinstance(x, int):
            return x % self.p
        raise TypeError(f"cannot interpret {x!r} as an element of {self.label()}")

    def vec_dot(self, xs, ys):
        acc = 0
        for x, y in zip(xs, ys):
            acc += x * y
        return acc % self.p

    def row_submul(self, dst, src, c, start=0):
        p = self.p
        for j in range(start, len(dst)):
            s = src[j]
            if s:
                dst[j] = (dst[j] - c * s) % p

    def row_scale(self, row, c, start=0):
        p = self.p
        for j in range(start, len(row)):
            v = row[j]
            if v:
                row[j] = v * c % p

    def elements(self):
        return range(self.p)

    def random_value(self, rng):
        return rng.randrange(self.p)

    def format_value(self, a):
        return str(a)

    def parse_value(self, text):
        try:
            return int(text) % self.p
        except ValueError as exc:
            raise ValueError(f"bad GF({self.p}) literal {text!r}") from exc

    def label(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


class ExtensionField(Field):
    """GF(p^d) as F_p[x] / (modulus), values are length-d tuples of residues."""

    kind = "extension-field"

    def __init__(self, p: int, modulus=None, degree=None):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if modulus is None:
            if degree is None or degree < 2:
                raise ValueError("extension degree must be at least 2")
            modulus = find_irreducible(p, degree)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) < 3 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree >= 2")
        if not _is_irreducible(list(modulus), p):
            raise ValueError(f"modulus {modulus} is reducible over GF({p})")
        self.p = p
        self.modulus = modulus
        self.degree = len(modulus) - 1
        self.char = p
        self.order = p ** self.degree
        d = self.degree
        self._zero = (0,) * d
        self._one = (1,) + (0,) * (d - 1)
        # x^k mod modulus for k in [d, 2d-2]: folds products back to length d
        table = []
        cur = [-c % p for c in modulus[:d]]  # x^d
        table.append(tuple(cur))
        for _ in range(d - 2):
            cur = [0] + cur
            lead = cur[d]
            cur = cur[:d]
            if lead:
                cur = [(ci + lead * ti) % p for ci, ti in zip(cur, table[0])]
            table.append(tuple(cur))
        self._xpow = table

    def zero(self):
        return self._zero

    def one(self):
        return self._one

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple(-x % p for x in a)

    def _fold(self, acc):
        """Reduce a raw convolution (length <= 2d-1 ints) to a canonical tuple."""
        p = self.p
        d = self.degree
        out = list(acc[:d]) + [0] * (d - len(acc[:d]))
        for k in range(d, len(acc)):
            c = acc[k]
            if c:
                t = self._xpow[k - d]
                for i in range(d):
                    out[i] += c * t[i]
        return tuple(c % p for c in out)

    def mul(self, a, b):
        d = self.degree
        acc = [0] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    acc[i + j] += ai * bj
        return self._fold(acc)

    def inv(self, a):
        coeffs = _trim(list(a))
        if not coeffs:
            raise ZeroDivisionError("inverse of zero")
        p = self.p
        # extended Euclid against the modulus
        r0, r1 = list(self.modulus), coeffs
        s0, s1 = [], [1]
        while r1:
            q, r = _pdivmod(r0, r1, p)
            r0, r1 = r1, r
            s0, s1 = s1, _trim([(x - y) % p for x, y in zip_pad(s0, _pmul(q, s1, p), p)])
        lead_inv = pow(r0[-1], p - 2, p)
        s0 = [c * lead_inv % p for c in s0]
        s0 += [0] * (self.degree - len(s0))
        return tuple(s0[: self.degree])

    def is_zero(self, a):
        return a == self._zero

    def from_int(self, k):
        return (k % self.p,) + (0,) * (self.degree - 1)

    def pth_root(self, a):
        # inverse Frobenius: a -> a^(p^(d-1))
        out = a
        for _ in range(self.degree - 1):
            out = self._frob(out)
        return out

    def _frob(self, a):
        # a^p by square-and-multiply
        acc = self._one
        base = a
        e = self.p
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    def generator(self):
        """The residue class of x."""
        d = self.degree
        return (0, 1) + (0,) * (d - 2)

    def coerce(self, x):
        if isinstance(x, tuple) and len(x) == self.degree:
            return tuple(int(c) % self.p for c in x)
        if isinstance(x, (tuple, list)):
            if len(x) > self.degree:
                raise TypeError("coefficient list longer than extension degree")
            cs = [int(c) % self.p for c in x]
            return tuple(cs + [0] * (self.degree - len(cs)))
        if isinstance(x, int):
            return self.from_int(x)
        raise TypeError(f"cannot interpret {x!r} as an element of {self.label()}")

    def vec_dot(self, xs, ys):
        d = self.degree
        acc = [0] * (2 * d - 1)
        for a, b in zip(xs, ys):
            for i, ai in enumerate(a):
                if ai:
                    for j, bj in enumerate(b):
                        acc[i + j] += ai * bj
        return self._fold(acc)

    def row_submul(self, dst, src, c, start=0):
        for j in range(start, len(dst)):
            dst[j] = self.sub(dst[j], self.mul(c, src[j]))

    def row_scale(self, row, c, start=0):
        for j in range(start, len(row)):
            row[j] = self.mul(row[j], c)

    def elements(self):
        p, d = self.p, self.degree
        for code in range(self.order):
            coeffs = []
            c = code
            for _ in range(d):
                coeffs.append(c % p)
                c //= p
            yield tuple(coeffs)

    def random_value(self, rng):
        return tuple(rng.randrange(self.p) for _ in range(self.degree))

    def format_value(self, a):
        return "[" + ",".join(str(c) for c in a) + "]"

    def parse_value(self, text):
        t = text.strip()
        if not (t.startswith("[") and t.endswith("]")):
            raise ValueError(f"bad {self.label()} literal {text!r}")
        try:
            cs = [int(c) % self.p for c in t[1:-1].split(",") if c.strip() != ""]
        except ValueError as exc:
            raise ValueError(f"bad {self.label()} literal {text!r}") from exc
        if len(cs) > self.degree:
            raise ValueError(f"too many coefficients in {text!r}")
        return tuple(cs + [0] * (self.degree - len(cs)))

    def label(self):
        return f"GF({self.p}^{self.degree})"

    def __eq__(self, other):
        return (
            isinstance(other, ExtensionField)
            and other.p == self.p
            and other.modulus == self.modulus
        )

    def __hash__(self):
        return hash(("GF", self.p, self.modulus))


QQ = RationalField()


def GF(p: int, d: int = 1, modulus=None) -> Field:
    """GF(p^d); for d >= 2 the modulus defaults to the canonical irreducible."""
    if d == 1 and modulus is None:
        return PrimeField(p)
    return ExtensionField(p, modulus=modulus, degree=d if modulus is None else None)


def parse_field_label(text: str) -> Field:
    """Parse "Q", "GF(p)" or "GF(p^d)" into a field object."""
    t = text.strip()
    if t == "Q":
        return QQ
    if t.startswith("GF(") and t.endswith(")"):
        inner = t[3:-1]
        if "^" in inner:
            p_text, d_text = inner.split("^", 1)
        else:
            p_text, d_text = inner, "1"
        try:
            p, d = int(p_text), int(d_text)
        except ValueError as exc:
            raise ValueError(f"bad field label {text!r}") from exc
        return GF(p, d)
    raise ValueError(f"bad field label {text!r}")


def check_same_field(f1: Field, f2: Field):
    if f1 != f2:
        raise FieldMismatchError(f"mixed fields: {f1.label()} vs {f2.label()}")
