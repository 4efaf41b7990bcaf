"""Algebraic versus geometric inclusion for an endomorphism ``tau``.

For ideals ``I``, ``J`` of ``F_p[x_1..x_d]`` five relations are compared:

a. ``tau^{-1}(I) ⊇ J``                (preimage ideal, Groebner)
b. ``I ⊇ tau(J)``                     (membership of images of generators)
c. ``V(I) ⊆ V(tau(J))``               (point enumeration)
d. ``f_tau(V(I)) ⊆ V(J)``             (image of the point set)
e. ``V(I) ⊆ f_tau^{-1}(V(J))``        (preimage of the point set)

Always a ⇔ b, c ⇔ d ⇔ e and b ⇒ c; the converse c ⇒ b can fail for
non-radical ``I``.  Each relation is computed by its own route so the
equivalences act as a cross-check of the Groebner and dynamics code.
Endomorphisms without inverse are fine here.
"""
from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass

from .domains import PrimeField, rational_to_mod
from .dynamics import PolyMap, dyn_eval
from .errors import EnumerationTooLarge, ValidationError
from .groebner import Ideal, contains, groebner_basis, preimage_ideal
from .polynomial import PolyRing, Polynomial, evaluate

DEFAULT_ENUMERATION_CAP = 200_000


@dataclass
class RelationVerdict:
    a: bool
    b: bool
    c: bool
    d: bool
    e: bool
    points_I: int
    points_J: int
    points_tau_J: int

    def consistent(self):
        return self.a == self.b and self.c == self.d == self.e and (not self.b or self.c)

    def to_dict(self):
        return asdict(self)


def to_prime_field(poly: Polynomial, ring: PolyRing) -> Polynomial:
    """Reduce rational coefficients into a prime-field ring with the same variables."""
    p = ring.domain.p
    out = {}
    for e, c in poly.terms.items():
        v = rational_to_mod(c, p, p) if not hasattr(c, "v") else c.v
        if v:
            out[e] = ring.domain.convert(v)
    return Polynomial(ring, out)


def _over_fp(tau, I, J, p):
    ring = tau.ring
    if ring.domain.kind == "PrimeField":
        if ring.domain.p != p:
            raise ValidationError(f"ring is over F_{ring.domain.p}, not F_{p}")
        return tau, I, J
    if ring.domain.kind != "Rationals":
        raise ValidationError("relations need rational or prime-field coefficients", field="coefficient_field")
    fring = PolyRing(PrimeField(p), ring.variables, ring.order)
    conv = lambda f: to_prime_field(f, fring)  # noqa: E731
    tau2 = PolyMap(fring, [conv(f) for f in tau.images], verify=False)
    return tau2, Ideal(fring, [conv(g) for g in I.generators]), Ideal(fring, [conv(g) for g in J.generators])


def check_relations(tau: PolyMap, I: Ideal, J: Ideal, p: int, cap=DEFAULT_ENUMERATION_CAP) -> RelationVerdict:
    d = tau.nvars
    if p**d > cap:
        raise EnumerationTooLarge(f"{p}^{d} points exceed the enumeration cap {cap}")
    tau, I, J = _over_fp(tau, I, J, p)
    ring = tau.ring
    tauJ = [tau(g) for g in J.generators]

    a = contains(preimage_ideal(tau, I), J)
    gbI = groebner_basis(I)
    b = all(gbI.contains(h) for h in tauJ)

    elements = ring.domain.elements()
    points = list(itertools.product(elements, repeat=d))

    def vanishes(polys, s):
        return all(not evaluate(f, s) for f in polys)

    V_I = [s for s in points if vanishes(I.generators, s)]
    V_J = {s for s in points if vanishes(J.generators, s)}
    V_tauJ = {s for s in points if vanishes(tauJ, s)}

    c = all(s in V_tauJ for s in V_I)
    image = {dyn_eval(tau, s) for s in V_I}
    d_flag = image <= V_J
    pre = {s for s in points if dyn_eval(tau, s) in V_J}
    e = set(V_I) <= pre
    return RelationVerdict(a, b, c, d_flag, e, len(V_I), len(V_J), len(V_tauJ))
