"""Sparse multivariate polynomials over the domains in :mod:`idealorbit.domains`.

A monomial is a tuple of exponents.  A polynomial is an immutable map from
monomials to nonzero coefficients; its leading term is taken with respect to
the monomial order attached to its ring.
"""
from __future__ import annotations

from fractions import Fraction

from .domains import QQ, CoefficientDomain
from .errors import ArityMismatch, DegreeOverflow, RingMismatch, ValidationError


class MonomialOrder:
    """A term order given by a sort key; larger key means larger monomial.

    ``kind`` is ``"lex"``, ``"grevlex"`` or ``"elim"``; the elimination order
    compares the first ``block`` variables by grevlex and breaks ties with
    grevlex on the rest, so any monomial involving the first block beats every
    monomial free of it.
    """

    __slots__ = ("kind", "block", "key")

    def __init__(self, kind, block=0):
        if kind not in ("lex", "grevlex", "elim"):
            raise ValidationError(f"unknown monomial order {kind!r}")
        self.kind = kind
        self.block = block
        if kind == "lex":
            self.key = _lex_key
        elif kind == "grevlex":
            self.key = _grevlex_key
        else:
            k = block
            self.key = lambda e: (_grevlex_key(e[:k]), _grevlex_key(e[k:]))

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.kind, self.block) == (other.kind, other.block)

    def __hash__(self):
        return hash((self.kind, self.block))

    def __repr__(self):
        if self.kind == "elim":
            return f"Elimination({self.block})"
        return {"lex": "Lex", "grevlex": "GrevLex"}[self.kind]


def _lex_key(e):
    return e


def _grevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


LEX = MonomialOrder("lex")
GREVLEX = MonomialOrder("grevlex")


def Elimination(block):
    return MonomialOrder("elim", block)


def parse_order(text):
    text = (text or "grevlex").strip().lower()
    if text == "lex":
        return LEX
    if text == "grevlex":
        return GREVLEX
    if text.startswith("elim:"):
        return Elimination(int(text[5:]))
    raise ValidationError(f"unknown monomial order {text!r}", field="order")


def monomial_divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def monomial_lcm(a, b):
    return tuple(x if x > y else y for x, y in zip(a, b))


def monomial_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def monomial_div(a, b):
    return tuple(x - y for x, y in zip(a, b))


class PolyRing:
    """Ring descriptor: coefficient domain, variable names, monomial order."""

    def __init__(self, domain: CoefficientDomain = QQ, variables=("x",), order=GREVLEX):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValidationError(f"duplicate variable names in {variables}", field="variables")
        for v in variables:
            if v in domain.parameter_names:
                raise ValidationError(f"variable {v!r} clashes with a field parameter", field="variables")
        self.domain = domain
        self.variables = variables
        self.order = order
        self.nvars = len(variables)
        self._index = {v: i for i, v in enumerate(variables)}

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.domain == other.domain
            and self.variables == other.variables
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.domain, self.variables, self.order))

    def __repr__(self):
        return f"PolyRing({self.domain.spec()}, {list(self.variables)}, {self.order!r})"

    def with_order(self, order):
        if order is None or order == self.order:
            return self
        return PolyRing(self.domain, self.variables, order)

    def index(self, name):
        return self._index[name]

    def zero(self):
        return Polynomial(self, {})

    def one(self):
        return self.const(1)

    def const(self, c):
        c = self.domain.convert(c)
        if not c:
            return self.zero()
        return Polynomial(self, {(0,) * self.nvars: c})

    def var(self, name_or_index):
        i = name_or_index if isinstance(name_or_index, int) else self._index[name_or_index]
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): self.domain.one()})

    def gens(self):
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, exps, coeff=1):
        c = self.domain.convert(coeff)
        return Polynomial(self, {tuple(exps): c} if c else {})

    def from_dict(self, terms):
        conv = self.domain.convert
        out = {}
        for e, c in terms.items():
            c = conv(c)
            if c:
                out[tuple(e)] = c
        return Polynomial(self, out)

    def parse(self, text):
        from .parser import parse_poly

        return parse_poly(text, self)

    def __call__(self, x):
        if isinstance(x, Polynomial):
            return x.with_ring(self)
        if isinstance(x, str):
            return self.parse(x)
        return self.const(x)


class Polynomial:
    """Immutable sparse polynomial.

    >>> R = PolyRing(QQ, ("x", "y"))
    >>> p = R.parse("(x+y)*(x-y)")
    >>> str(p)
    'x^2 - y^2'
    """

    __slots__ = ("ring", "terms", "_lm", "_hash")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._lm = None
        self._hash = None

    # -- structure ---------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_coeff(self):
        return self.terms.get((0,) * self.ring.nvars, self.ring.domain.zero())

    def lm(self):
        """Leading monomial under the ring's order."""
        if self._lm is None:
            if not self.terms:
                raise ValueError("zero polynomial has no leading monomial")
            self._lm = max(self.terms, key=self.ring.order.key)
        return self._lm

    def lc(self):
        return self.terms[self.lm()]

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def degree(self, var):
        i = var if isinstance(var, int) else self.ring.index(var)
        return max((e[i] for e in self.terms), default=-1)

    def variables_used(self):
        used = set()
        for e in self.terms:
            used.update(i for i, x in enumerate(e) if x)
        return used

    def sorted_terms(self):
        """Terms in decreasing monomial order."""
        key = self.ring.order.key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def coefficients(self):
        return list(self.terms.values())

    def with_ring(self, ring: PolyRing):
        if ring is self.ring:
            return self
        if ring.domain != self.ring.domain or ring.variables != self.ring.variables:
            raise RingMismatch(f"cannot view {self.ring} element in {ring}")
        return Polynomial(ring, self.terms)

    def map_coeffs(self, fn, ring=None):
        ring = ring or self.ring
        out = {}
        for e, c in self.terms.items():
            c2 = fn(c)
            if c2:
                out[e] = c2
        return Polynomial(ring, out)

    def monic(self):
        if not self.terms:
            return self
        inv = self.ring.domain.inv(self.lc())
        return self.scale(inv)

    # -- arithmetic --------------------------------------------------------

    def _check(self, other):
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                if other.ring.domain == self.ring.domain and other.ring.variables == self.ring.variables:
                    return other.terms
                raise RingMismatch(f"operands live in {self.ring} and {other.ring}")
            return other.terms
        try:
            c = self.ring.domain.convert(other)
        except TypeError:
            return None
        return {(0,) * self.ring.nvars: c} if c else {}

    def __add__(self, other):
        t = self._check(other)
        if t is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in t.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        t = self._check(other)
        if t is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in t.items():
            s = out.get(e)
            if s is None:
                out[e] = -c
            else:
                s = s - c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Polynomial(self.ring, out)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        t = self._check(other)
        if t is None:
            return NotImplemented
        a, b = self.terms, t
        if len(a) < len(b):
            a, b = b, a
        out = {}
        get = out.get
        for e2, c2 in b.items():
            for e1, c1 in a.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = get(e)
                out[e] = c1 * c2 if s is None else s + c1 * c2
        return Polynomial(self.ring, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def scale(self, c):
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, {e: x * c for e, x in self.terms.items() if x * c})

    def mul_term(self, mono, c):
        """Multiply by ``c * x^mono``."""
        return Polynomial(
            self.ring,
            {tuple(x + y for x, y in zip(e, mono)): v * c for e, v in self.terms.items() if v * c},
        )

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers need a non-negative integer exponent")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        """Division by a nonzero constant only."""
        if isinstance(other, Polynomial):
            if not other.is_constant() or not other:
                raise ZeroDivisionError("division by a non-constant or zero polynomial")
            other = other.constant_coeff()
        c = self.ring.domain.convert(other)
        if not c:
            raise ZeroDivisionError("division by zero")
        return self.scale(self.ring.domain.inv(c))

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring.variables == other.ring.variables and self.terms == other.terms
        try:
            c = self.ring.domain.convert(other)
        except TypeError:
            return NotImplemented
        return self.terms == ({(0,) * self.ring.nvars: c} if c else {})

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- calculus and composition -------------------------------------------

    def diff(self, var):
        i = var if isinstance(var, int) else self.ring.index(var)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                c2 = c * k
                if c2:
                    e2 = list(e)
                    e2[i] = k - 1
                    out[tuple(e2)] = c2
        return Polynomial(self.ring, out)

    def substitute(self, images, degree_cap=None):
        """``P(images[0], ..., images[d-1])``; images share one ring."""
        return substitute(self, images, degree_cap=degree_cap)

    def evaluate(self, point, one=None):
        return evaluate(self, point, one=one)

    # -- printing ----------------------------------------------------------

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Polynomial({format_poly(self)!r})"


def substitute(p: Polynomial, images, degree_cap=None):
    images = list(images)
    if len(images) != p.ring.nvars:
        raise ArityMismatch(f"expected {p.ring.nvars} images, got {len(images)}")
    if not images:
        target = p.ring
    else:
        target = images[0].ring
        for im in images:
            if im.ring.variables != target.variables or im.ring.domain != target.domain:
                raise RingMismatch("substitution images must share one ring")
    if degree_cap is not None:
        bound = max(
            (sum(k * max(im.total_degree(), 0) for k, im in zip(e, images)) for e in p.terms),
            default=0,
        )
        if bound > degree_cap:
            raise DegreeOverflow(f"substitution degree {bound} exceeds cap {degree_cap}")
    conv = target.domain.convert
    powers = [{0: target.one(), 1: im} for im in images]

    def power(i, k):
        cache = powers[i]
        if k not in cache:
            half = power(i, k // 2)
            sq = half * half
            cache[k] = sq * images[i] if k % 2 else sq
        return cache[k]

    acc = {}
    for e, c in p.terms.items():
        term = None
        for i, k in enumerate(e):
            if k:
                f = power(i, k)
                term = f if term is None else term * f
        c = conv(c)
        if term is None:
            items = [((0,) * target.nvars, c)]
        else:
            items = [(m, v * c) for m, v in term.terms.items()]
        for m, v in items:
            s = acc.get(m)
            acc[m] = v if s is None else s + v
    return Polynomial(target, {m: v for m, v in acc.items() if v})


def evaluate(p: Polynomial, point, one=None):
    """Evaluate at a point whose entries support ``+``, ``*`` and ``*scalar``.

    ``one`` is the multiplicative identity of the target structure; it
    defaults to the coefficient domain's one.
    """
    point = list(point)
    if len(point) != p.ring.nvars:
        raise ArityMismatch(f"expected a point with {p.ring.nvars} entries, got {len(point)}")
    if one is None:
        one = p.ring.domain.one()
    powers = [{1: s} for s in point]

    def power(i, k):
        cache = powers[i]
        if k not in cache:
            half = power(i, k // 2)
            sq = half * half
            cache[k] = sq * point[i] if k % 2 else sq
        return cache[k]

    total = None
    for e, c in p.terms.items():
        term = None
        for i, k in enumerate(e):
            if k:
                f = power(i, k)
                term = f if term is None else term * f
        term = one * c if term is None else term * c
        total = term if total is None else total + term
    return one * 0 if total is None else total


# ---------------------------------------------------------------------------
# canonical printer
# ---------------------------------------------------------------------------


def _format_monomial(e, names):
    parts = []
    for k, name in zip(e, names):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def format_poly(p: Polynomial) -> str:
    """Canonical text: decreasing monomial order, explicit ``*`` and ``^``."""
    if not p.terms:
        return "0"
    dom = p.ring.domain
    names = p.ring.variables
    out = []
    for i, (e, c) in enumerate(p.sorted_terms()):
        negative = dom.ordered and c < 0
        if negative:
            c = -c
        mono = _format_monomial(e, names)
        if not mono:
            body = dom.format(c)
        elif c == 1:
            body = mono
        else:
            cs = dom.format(c)
            if not dom.is_atomic(c):
                cs = f"({cs})"
            body = f"{cs}*{mono}"
        if i == 0:
            out.append(("-" if negative else "") + body)
        else:
            out.append((" - " if negative else " + ") + body)
    return "".join(out)


def as_fraction(c):
    """Rational value of a coefficient when it has one (used by prime checks)."""
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    return None
