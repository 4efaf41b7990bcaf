"""Buchberger's algorithm and the ideal operations built on it.

Bases are reduced and monic.  Pair bookkeeping follows the Gebauer-Moller
update, which realizes both the coprime-leading-monomial criterion and the
chain criterion; pairs are selected by the normal strategy (smallest lcm).
"""
from __future__ import annotations

import heapq
import threading

from .errors import NotAField, RingMismatch
from .polynomial import (
    Elimination,
    PolyRing,
    Polynomial,
    monomial_div,
    monomial_divides,
    monomial_lcm,
)


class Ideal:
    """Ideal of a polynomial ring given by generators (zeros dropped)."""

    def __init__(self, ring: PolyRing, generators=()):
        gens = []
        for g in generators:
            if isinstance(g, str):
                g = ring.parse(g)
            elif not isinstance(g, Polynomial):
                g = ring.const(g)
            g = g.with_ring(ring)
            if g:
                gens.append(g)
        self.ring = ring
        self.generators = tuple(gens)

    def __repr__(self):
        return "Ideal(" + ", ".join(str(g) for g in self.generators) + ")"

    def __eq__(self, other):
        return isinstance(other, Ideal) and self.ring == other.ring and self.generators == other.generators

    def __hash__(self):
        return hash((self.ring, self.generators))

    def __add__(self, other):
        if other.ring.variables != self.ring.variables or other.ring.domain != self.ring.domain:
            raise RingMismatch("ideal sum needs a common ring")
        return Ideal(self.ring, self.generators + tuple(g.with_ring(self.ring) for g in other.generators))

    def is_zero(self):
        return not self.generators

    def groebner(self, order=None):
        return groebner_basis(self, order)

    def __contains__(self, p):
        return self.groebner().contains(p)

    def map(self, fn):
        return Ideal(self.ring, [fn(g) for g in self.generators])


class GroebnerBasis:
    def __init__(self, ring: PolyRing, basis):
        self.ring = ring
        self.basis = tuple(basis)
        self.leading = tuple(g.lm() for g in self.basis)

    def __iter__(self):
        return iter(self.basis)

    def __len__(self):
        return len(self.basis)

    def __repr__(self):
        return "GroebnerBasis([" + ", ".join(str(g) for g in self.basis) + f"], {self.ring.order!r})"

    def is_unit(self):
        return any(not any(m) for m in self.leading)

    def reduce(self, p):
        return normal_form(p, self)

    def contains(self, p):
        return not normal_form(p, self)

    def s_pairs_reduce_to_zero(self):
        """Buchberger's criterion checked directly on every pair."""
        for i in range(len(self.basis)):
            for j in range(i + 1, len(self.basis)):
                if normal_form(s_polynomial(self.basis[i], self.basis[j]), self):
                    return False
        return True

    def is_reduced(self):
        for i, g in enumerate(self.basis):
            if g.lc() != 1:
                return False
            for j, m in enumerate(self.leading):
                if i != j and any(monomial_divides(m, e) for e in g.terms):
                    return False
        return True

    def is_zero_dimensional(self):
        """Every variable has a pure power among the leading monomials."""
        if self.is_unit():
            return True
        n = self.ring.nvars
        found = [False] * n
        for m in self.leading:
            support = [i for i, k in enumerate(m) if k]
            if len(support) == 1:
                found[support[0]] = True
        return all(found)

    def standard_monomials(self, limit=100_000):
        """Monomials not divisible by any leading monomial (finite case only)."""
        if self.is_unit():
            return []
        n = self.ring.nvars
        zero = (0,) * n
        seen = {zero}
        frontier = [zero]
        out = []
        while frontier:
            m = frontier.pop()
            if any(monomial_divides(lm, m) for lm in self.leading):
                continue
            out.append(m)
            if len(out) > limit:
                raise ValueError("too many standard monomials")
            for i in range(n):
                e = list(m)
                e[i] += 1
                e = tuple(e)
                if e not in seen:
                    seen.add(e)
                    frontier.append(e)
        key = self.ring.order.key
        return sorted(out, key=key)


def s_polynomial(f: Polynomial, g: Polynomial) -> Polynomial:
    mf, mg = f.lm(), g.lm()
    lcm = monomial_lcm(mf, mg)
    dom = f.ring.domain
    a = f.mul_term(monomial_div(lcm, mf), dom.inv(f.lc()))
    b = g.mul_term(monomial_div(lcm, mg), dom.inv(g.lc()))
    return a - b


def _reduce_terms(terms, ring, divisors, full=True):
    """Reduce a term dict by ``divisors`` (list of (lm, lc_inv, poly)).

    Uses a max-heap of pending monomials so every step takes the current
    largest term.
    """
    key = ring.order.key
    p = dict(terms)
    heap = [(_neg(key(e)), e) for e in p]
    heapq.heapify(heap)
    queued = set(p)
    remainder = {}
    while heap:
        _, m = heapq.heappop(heap)
        queued.discard(m)
        c = p.pop(m, None)
        if c is None or not c:
            continue
        for lm, inv, g in divisors:
            if monomial_divides(lm, m):
                q = monomial_div(m, lm)
                factor = c * inv
                for e, v in g.terms.items():
                    if e == lm:
                        continue
                    e2 = tuple(x + y for x, y in zip(e, q))
                    s = p.get(e2)
                    s = -(v * factor) if s is None else s - v * factor
                    if s:
                        p[e2] = s
                        if e2 not in queued:
                            queued.add(e2)
                            heapq.heappush(heap, (_neg(key(e2)), e2))
                    else:
                        p.pop(e2, None)
                break
        else:
            remainder[m] = c
            if not full:
                remainder.update(p)
                break
    return remainder


def _neg(k):
    if isinstance(k, tuple):
        return tuple(_neg(x) for x in k)
    return -k


def normal_form(p: Polynomial, G) -> Polynomial:
    """Fully reduced remainder of ``p`` by a Groebner basis (or polynomial list)."""
    basis = G.basis if isinstance(G, GroebnerBasis) else tuple(G)
    ring = G.ring if isinstance(G, GroebnerBasis) else (basis[0].ring if basis else p.ring)
    if p.ring.variables != ring.variables or p.ring.domain != ring.domain:
        raise RingMismatch(f"cannot reduce an element of {p.ring} by a basis of {ring}")
    if not p or not basis:
        return p.with_ring(ring)
    dom = ring.domain
    divisors = [(g.lm(), dom.inv(g.lc()), g) for g in basis]
    return Polynomial(ring, _reduce_terms(p.terms, ring, divisors))


_cache: dict = {}
_cache_lock = threading.Lock()


def groebner_basis(ideal: Ideal, order=None) -> GroebnerBasis:
    ring = ideal.ring.with_order(order)
    key = (ring, frozenset(ideal.generators))
    hit = _cache.get(key)
    if hit is not None:
        return hit
    gb = buchberger(ideal, order)
    with _cache_lock:
        if len(_cache) > 4096:
            _cache.clear()
        _cache[key] = gb
    return gb


def buchberger(ideal: Ideal, order=None) -> GroebnerBasis:
    """Reduced Groebner basis of ``ideal`` under ``order`` (default: the ring's)."""
    ring = ideal.ring.with_order(order)
    if not ring.domain.is_field:
        raise NotAField(f"Groebner bases need a field, got {ring.domain.spec()}")
    polys = []
    for g in ideal.generators:
        g = g.with_ring(ring).monic()
        if g:
            polys.append(g)
    if not polys:
        return GroebnerBasis(ring, [])
    key = ring.order.key
    # small leading terms first makes later inserts reduce against them
    polys.sort(key=lambda f: key(f.lm()))

    store: list[Polynomial] = []
    G: list[int] = []
    B: set = set()

    def lm(i):
        return store[i].lm()

    def update(h):
        nonlocal G, B
        store.append(h)
        hi = len(store) - 1
        mh = lm(hi)
        C = [gi for gi in G]
        D = []
        while C:
            g1 = C.pop()
            l1 = monomial_lcm(mh, lm(g1))
            coprime = all(a == 0 or b == 0 for a, b in zip(mh, lm(g1)))
            if coprime:
                D.append(g1)
                continue
            dominated = False
            for g2 in C + D:
                if monomial_divides(monomial_lcm(mh, lm(g2)), l1):
                    dominated = True
                    break
            if not dominated:
                D.append(g1)
        E = set()
        for g in D:
            if not all(a == 0 or b == 0 for a, b in zip(mh, lm(g))):
                E.add((min(g, hi), max(g, hi)))
        B_new = set()
        for a, b in B:
            lab = monomial_lcm(lm(a), lm(b))
            if (
                not monomial_divides(mh, lab)
                or monomial_lcm(lm(a), mh) == lab
                or monomial_lcm(mh, lm(b)) == lab
            ):
                B_new.add((a, b))
        B = B_new | E
        G = [g for g in G if not monomial_divides(mh, lm(g))] + [hi]

    for f in polys:
        h = normal_form(f, [store[i] for i in G]) if G else f
        if h:
            update(h.monic())

    def pair_key(pr):
        l = monomial_lcm(lm(pr[0]), lm(pr[1]))
        return (sum(l), key(l), pr)

    while B:
        pr = min(B, key=pair_key)
        B.discard(pr)
        s = s_polynomial(store[pr[0]], store[pr[1]])
        h = normal_form(s, [store[i] for i in G])
        if h:
            update(h.monic())

    return _reduce_basis(ring, [store[i] for i in G])


def _reduce_basis(ring, polys):
    key = ring.order.key
    polys = sorted(polys, key=lambda f: key(f.lm()))
    minimal = []
    for i, f in enumerate(polys):
        m = f.lm()
        if any(monomial_divides(g.lm(), m) for j, g in enumerate(polys) if j != i and (g.lm() != m or j < i)):
            continue
        minimal.append(f)
    reduced = []
    for i, f in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1 :]
        r = normal_form(f, others) if others else f
        reduced.append(r.monic())
    reduced.sort(key=lambda f: key(f.lm()))
    return GroebnerBasis(ring, reduced)


# ---------------------------------------------------------------------------
# ideal operations
# ---------------------------------------------------------------------------


def contains(I: Ideal, J: Ideal) -> bool:
    """``I`` contains ``J``: every generator of ``J`` reduces to 0 modulo GB(I)."""
    if I.ring.variables != J.ring.variables or I.ring.domain != J.ring.domain:
        raise RingMismatch("containment needs a common ring")
    gb = groebner_basis(I)
    return all(gb.contains(g) for g in J.generators)


def member(p: Polynomial, I: Ideal) -> bool:
    return groebner_basis(I).contains(p)


def _reorder(p: Polynomial, ring: PolyRing, perm):
    """Rewrite ``p`` in ``ring`` whose variable j is old variable perm[j]."""
    out = {}
    for e, c in p.terms.items():
        out[tuple(e[i] for i in perm)] = c
    return Polynomial(ring, out)


def eliminate(I: Ideal, keep) -> Ideal:
    """Generators of ``I`` intersected with the subring on the ``keep`` variables."""
    ring = I.ring
    if not ring.domain.is_field:
        raise NotAField("elimination needs a field")
    keep_idx = [ring.index(v) if isinstance(v, str) else v for v in keep]
    keep_set = set(keep_idx)
    drop_idx = [i for i in range(ring.nvars) if i not in keep_set]
    if not drop_idx:
        return Ideal(ring, groebner_basis(I).basis)
    perm = drop_idx + sorted(keep_set)
    names = [ring.variables[i] for i in perm]
    elim_ring = PolyRing(ring.domain, names, Elimination(len(drop_idx)))
    gens = [_reorder(g, elim_ring, perm) for g in I.generators]
    gb = buchberger(Ideal(elim_ring, gens))
    inverse = [0] * ring.nvars
    for j, i in enumerate(perm):
        inverse[i] = j
    k = len(drop_idx)
    out = []
    for g in gb.basis:
        if all(not any(e[:k]) for e in g.terms):
            out.append(_reorder(g, ring, inverse))
    return Ideal(ring, out)


def preimage_ideal(tau, I: Ideal) -> Ideal:
    """``{p : tau(p) in I}`` via tag variables ``y_i - F_i(x)`` and elimination."""
    ring = I.ring
    if not ring.domain.is_field:
        raise NotAField("preimages need a field")
    d = ring.nvars
    tags = []
    taken = set(ring.variables)
    for v in ring.variables:
        name = f"{v}_pre"
        while name in taken:
            name += "_"
        taken.add(name)
        tags.append(name)
    big = PolyRing(ring.domain, tuple(ring.variables) + tuple(tags), Elimination(d))

    def lift(p):
        return Polynomial(big, {e + (0,) * d: c for e, c in p.terms.items()})

    gens = [lift(g) for g in I.generators]
    for i, F in enumerate(tau.images):
        y = big.var(d + i)
        gens.append(y - lift(F))
    gb = buchberger(Ideal(big, gens))
    out = []
    for g in gb.basis:
        if all(not any(e[:d]) for e in g.terms):
            out.append(Polynomial(ring, {e[d:]: c for e, c in g.terms.items()}))
    return Ideal(ring, out)


# ---------------------------------------------------------------------------
# arithmetic in R/L by normal forms (no finiteness assumption)
# ---------------------------------------------------------------------------


class ResidueRing:
    """The quotient ring R/L with elements stored as normal forms."""

    def __init__(self, ideal: Ideal, order=None):
        self.ideal = ideal
        self.gb = groebner_basis(ideal, order)
        self.ring = self.gb.ring
        dom = self.ring.domain
        self._divisors = [(g.lm(), dom.inv(g.lc()), g) for g in self.gb.basis]

    def reduce_terms(self, terms):
        if not self._divisors:
            return terms
        return _reduce_terms(terms, self.ring, self._divisors)

    def __call__(self, p):
        if isinstance(p, Polynomial):
            p = p.with_ring(self.ring)
            return Residue(self, self.reduce_terms(p.terms))
        return self.const(p)

    def const(self, c):
        return self(self.ring.const(c))

    def one(self):
        return self.const(1)

    def zero(self):
        return Residue(self, {})

    def gens(self):
        return [self(x) for x in self.ring.gens()]


class Residue:
    __slots__ = ("parent", "terms")

    def __init__(self, parent: ResidueRing, terms):
        self.parent = parent
        self.terms = terms

    def poly(self):
        return Polynomial(self.parent.ring, self.terms)

    def _other(self, other):
        if isinstance(other, Residue):
            return other
        if isinstance(other, Polynomial):
            return self.parent(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return self + self.parent.const(other)
        return Residue(self.parent, (self.poly() + o.poly()).terms)

    __radd__ = __add__

    def __neg__(self):
        return Residue(self.parent, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, Residue) else -self.parent.ring.domain.convert(other))

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            c = self.parent.ring.domain.convert(other)
            return Residue(self.parent, self.poly().scale(c).terms)
        prod = self.poly() * o.poly()
        return Residue(self.parent, self.parent.reduce_terms(prod.terms))

    __rmul__ = __mul__

    def __pow__(self, n):
        result = self.parent.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        o = self._other(other)
        if o is None:
            o = self.parent.const(other)
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"Residue({self.poly()})"
