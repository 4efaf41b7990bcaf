"""Exact coefficient domains.

Elements are plain Python objects with arithmetic operators, so polynomial
code never dispatches through the domain for ``+``/``*``.  The domain object
supplies conversion, printing and the few operations operators cannot
express (inverse, parameters, valuation).

============================  ==========================  =====================
kind                          element type                notes
============================  ==========================  =====================
``Rationals``                 ``fractions.Fraction``      lowest terms, den > 0
``Integers``                  ``int``                     not a field
``PrimeField(p)``             :class:`FpElement`
``RationalFunctionField(p)``  :class:`FptElement`         F_p(t), monic den
``PadicInts(p, K)``           :class:`PadicInt`           Z/p^K Z + valuation
============================  ==========================  =====================
"""
from __future__ import annotations

from fractions import Fraction

from sympy import isprime

from .errors import ValidationError

DEFAULT_PRECISION = 12


def vp(n, p):
    """p-adic valuation of a nonzero integer or Fraction (``None`` for 0)."""
    if isinstance(n, Fraction):
        if n == 0:
            return None
        return vp(n.numerator, p) - vp(n.denominator, p)
    n = int(n)
    if n == 0:
        return None
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def factorial_valuation(n, p):
    """Legendre's formula for v_p(n!)."""
    v, q = 0, p
    while q <= n:
        v += n // q
        q *= p
    return v


def rational_to_mod(c, modulus, p):
    """Image of a p-integral rational in Z/modulus Z (modulus a power of p)."""
    if isinstance(c, int):
        return c % modulus
    if isinstance(c, Fraction):
        if c.denominator % p == 0:
            from .errors import BadPrime

            raise BadPrime(f"coefficient {c} is not {p}-integral")
        return c.numerator * pow(c.denominator, -1, modulus) % modulus
    if isinstance(c, PadicInt):
        return c.value % modulus
    raise TypeError(f"cannot reduce {c!r} modulo {modulus}")


# ---------------------------------------------------------------------------
# F_p
# ---------------------------------------------------------------------------


class FpElement:
    __slots__ = ("v", "p")

    def __init__(self, v, p):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, FpElement):
            if other.p != self.p:
                raise ValueError("mixing different prime fields")
            return other.v
        if isinstance(other, int):
            return other % self.p
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p) % self.p
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElement(-self.v, self.p)

    def inverse(self):
        if self.v == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return FpElement(pow(self.v, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o == 0:
            raise ZeroDivisionError("division by 0 in F_p")
        return FpElement(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FpElement(o, self.p) / self

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        return FpElement(pow(self.v, n, self.p), self.p)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.v == o

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"FpElement({self.v}, {self.p})"


# ---------------------------------------------------------------------------
# F_p(t): univariate helpers on tuples of residues, lowest degree first
# ---------------------------------------------------------------------------


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def _uadd(a, b, p):
    n = max(len(a), len(b))
    return _trim(((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(n))


def _uneg(a, p):
    return tuple((-x) % p for x in a)


def _umul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(c % p for c in out)


def _udivmod(a, b, p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = a[-1] * inv % p
        shift = len(a) - len(b)
        q[shift] = c
        for i, y in enumerate(b):
            a[shift + i] = (a[shift + i] - c * y) % p
        a = list(_trim(a))
    return _trim(q), _trim(a)


def _umonic(a, p):
    inv = pow(a[-1], -1, p)
    return tuple(x * inv % p for x in a)


def _ugcd(a, b, p):
    while b:
        a, b = b, _udivmod(a, b, p)[1]
    return _umonic(a, p) if a else ()


def _uformat(a, name):
    if not a:
        return "0"
    parts = []
    for k in range(len(a) - 1, -1, -1):
        c = a[k]
        if not c:
            continue
        if k == 0:
            mono = str(c)
        else:
            var = name if k == 1 else f"{name}^{k}"
            mono = var if c == 1 else f"{c}*{var}"
        parts.append(mono)
    return " + ".join(parts)


class FptElement:
    """Element num/den of F_p(t), den monic and coprime to num."""

    __slots__ = ("num", "den", "p")

    def __init__(self, num, den=(1,), p=2, _normalized=False):
        self.p = p
        if _normalized:
            self.num, self.den = num, den
            return
        num = _trim(x % p for x in num)
        den = _trim(x % p for x in den)
        if not den:
            raise ZeroDivisionError("zero denominator in F_p(t)")
        if not num:
            self.num, self.den = (), (1,)
            return
        g = _ugcd(num, den, p)
        if len(g) > 1:
            num = _udivmod(num, g, p)[0]
            den = _udivmod(den, g, p)[0]
        inv = pow(den[-1], -1, p)
        self.num = tuple(x * inv % p for x in num)
        self.den = tuple(x * inv % p for x in den)

    def _coerce(self, other):
        if isinstance(other, FptElement):
            return other
        if isinstance(other, (int, Fraction, FpElement)):
            v = FpElement(0, self.p)._coerce(other)
            return FptElement((v,), (1,), self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.p
        if self.den == o.den:
            return FptElement(_uadd(self.num, o.num, p), self.den, p)
        num = _uadd(_umul(self.num, o.den, p), _umul(o.num, self.den, p), p)
        return FptElement(num, _umul(self.den, o.den, p), p)

    __radd__ = __add__

    def __neg__(self):
        return FptElement(_uneg(self.num, self.p), self.den, self.p, _normalized=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.p
        return FptElement(_umul(self.num, o.num, p), _umul(self.den, o.den, p), p)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of 0 in F_p(t)")
        return FptElement(self.den, self.num, self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = FptElement((1,), (1,), self.p)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den, self.p))

    def __bool__(self):
        return bool(self.num)

    def __repr__(self):
        return f"FptElement({self.num}, {self.den}, p={self.p})"


# ---------------------------------------------------------------------------
# Z/p^K Z with valuation floor
# ---------------------------------------------------------------------------


class PadicInt:
    """Residue modulo p^K with its valuation floor.

    The residue pins the valuation of every lift when it is below K, so
    ``floor`` is that valuation, or K for the zero residue.  The ``floor``
    argument is accepted for symmetry with the arithmetic but can never raise
    the floor above what the residue determines.
    """

    __slots__ = ("value", "p", "K", "floor")

    def __init__(self, value, p, K, floor=None):
        mod = p**K
        self.value = value % mod
        self.p = p
        self.K = K
        v = vp(self.value, p)
        exact = K if v is None else min(v, K)
        self.floor = exact

    def _coerce(self, other):
        if isinstance(other, PadicInt):
            if (other.p, other.K) != (self.p, self.K):
                raise ValueError("mixing p-adic precisions")
            return other
        if isinstance(other, (int, Fraction)):
            return PadicInt(rational_to_mod(other, self.p**self.K, self.p), self.p, self.K)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return PadicInt(self.value + o.value, self.p, self.K, min(self.floor, o.floor))

    __radd__ = __add__

    def __neg__(self):
        return PadicInt(-self.value, self.p, self.K, self.floor)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return PadicInt(self.value - o.value, self.p, self.K, min(self.floor, o.floor))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return PadicInt(self.value * o.value, self.p, self.K, self.floor + o.floor)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        return PadicInt(pow(self.value, n, self.p**self.K), self.p, self.K, self.floor * n)

    def inverse(self):
        if self.value % self.p == 0:
            raise ZeroDivisionError("non-unit in Z/p^K")
        return PadicInt(pow(self.value, -1, self.p**self.K), self.p, self.K)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, PadicInt) else other
        if o is NotImplemented:
            return False
        return self.value == o.value

    def __hash__(self):
        return hash((self.value, self.p, self.K))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"PadicInt({self.value}, p={self.p}, K={self.K}, floor={self.floor})"


# ---------------------------------------------------------------------------
# Domain descriptors
# ---------------------------------------------------------------------------


class CoefficientDomain:
    kind = "abstract"
    is_field = False
    ordered = False
    characteristic = 0
    p = None
    K = None
    parameter_names = ()

    def zero(self):
        return self.convert(0)

    def one(self):
        return self.convert(1)

    def convert(self, x):
        raise NotImplementedError

    def parameter(self, name):
        raise KeyError(name)

    def inv(self, c):
        return self.one() / c

    def format(self, c):
        return str(c)

    def is_atomic(self, c):
        """True if ``c`` prints without parentheses inside a product."""
        return True

    def spec(self):
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self._key() == other._key()

    def __hash__(self):
        return hash((type(self).__name__, self._key()))

    def _key(self):
        return ()

    def __repr__(self):
        return self.spec()


class Rationals(CoefficientDomain):
    kind = "Rationals"
    is_field = True
    ordered = True

    def convert(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        raise TypeError(f"cannot convert {x!r} to a rational")

    def format(self, c):
        if c.denominator == 1:
            return str(c.numerator)
        return f"{c.numerator}/{c.denominator}"

    def spec(self):
        return "Q"


class Integers(CoefficientDomain):
    kind = "Integers"
    ordered = True

    def convert(self, x):
        if isinstance(x, int):
            return x
        if isinstance(x, Fraction) and x.denominator == 1:
            return x.numerator
        raise TypeError(f"cannot convert {x!r} to an integer")

    def inv(self, c):
        if c in (1, -1):
            return c
        raise ZeroDivisionError(f"{c} is not a unit in Z")

    def spec(self):
        return "Z"


class PrimeField(CoefficientDomain):
    kind = "PrimeField"
    is_field = True

    def __init__(self, p):
        if not isprime(p):
            raise ValidationError(f"{p} is not prime", field="coefficient_field")
        self.p = p
        self.characteristic = p

    def _key(self):
        return (self.p,)

    def convert(self, x):
        if isinstance(x, FpElement):
            return x
        return FpElement(FpElement(0, self.p)._coerce(x), self.p)

    def format(self, c):
        return str(c.v)

    def spec(self):
        return f"Fp:{self.p}"

    def elements(self):
        return [FpElement(v, self.p) for v in range(self.p)]


class RationalFunctionField(CoefficientDomain):
    kind = "RationalFunctionField"
    is_field = True

    def __init__(self, p, name="t"):
        if not isprime(p):
            raise ValidationError(f"{p} is not prime", field="coefficient_field")
        self.p = p
        self.name = name
        self.characteristic = p
        self.parameter_names = (name,)

    def _key(self):
        return (self.p, self.name)

    def convert(self, x):
        if isinstance(x, FptElement):
            return x
        return FptElement((FpElement(0, self.p)._coerce(x),), (1,), self.p)

    def parameter(self, name):
        if name != self.name:
            raise KeyError(name)
        return FptElement((0, 1), (1,), self.p)

    def format(self, c):
        num = _uformat(c.num, self.name)
        if c.den == (1,):
            return num
        den = _uformat(c.den, self.name)
        if sum(1 for x in c.num if x) > 1:
            num = f"({num})"
        if sum(1 for x in c.den if x) > 1 or (len(c.den) > 1 and c.den[-1] != 1):
            den = f"({den})"
        return f"{num}/{den}"

    def is_atomic(self, c):
        return c.den == (1,) and sum(1 for x in c.num if x) <= 1

    def spec(self):
        return f"Fp({self.name}):{self.p}"


class PadicInts(CoefficientDomain):
    kind = "PadicInts"

    def __init__(self, p, K=DEFAULT_PRECISION):
        if not isprime(p):
            raise ValidationError(f"{p} is not prime")
        if K < 1:
            raise ValidationError("precision K must be >= 1")
        self.p = p
        self.K = K

    def _key(self):
        return (self.p, self.K)

    def convert(self, x):
        if isinstance(x, PadicInt):
            return x
        return PadicInt(rational_to_mod(x, self.p**self.K, self.p), self.p, self.K)

    def inv(self, c):
        return c.inverse()

    def format(self, c):
        return str(c.value)

    def spec(self):
        return f"Zp:{self.p}:{self.K}"


QQ = Rationals()
ZZ = Integers()


def parse_domain(text):
    """Domain from a job-file string: ``Q``, ``Z``, ``Fp:p``, ``Fp(t):p``, ``Zp:p:K``."""
    text = text.strip()
    try:
        if text == "Q":
            return QQ
        if text == "Z":
            return ZZ
        if text.startswith("Fp(") and "):" in text:
            name, p = text[3:].split("):")
            return RationalFunctionField(int(p), name.strip())
        if text.startswith("Fp:"):
            return PrimeField(int(text[3:]))
        if text.startswith("Zp:"):
            parts = text.split(":")
            K = int(parts[2]) if len(parts) > 2 else DEFAULT_PRECISION
            return PadicInts(int(parts[1]), K)
    except ValueError as exc:
        raise ValidationError(f"bad coefficient field {text!r}: {exc}", field="coefficient_field")
    raise ValidationError(f"unknown coefficient field {text!r}", field="coefficient_field")
