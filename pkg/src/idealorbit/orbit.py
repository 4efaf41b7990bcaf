"""Orbit containment sets ``S(I, J) = {n : sigma^n(I) ⊇ J}``.

Three stages:

``scan``
    decides every ``n`` in a window exactly.  Since ``sigma`` is an
    automorphism, ``sigma^n(I) ⊇ J`` holds iff ``sigma^{-n}(J) ⊆ I``, i.e. iff
    every generator ``D`` of ``J`` vanishes at ``f_{sigma^{-n}}(s)`` in
    ``R/(I + Q)``, where ``s`` is the point of residue classes of the
    variables.  One Groebner basis serves the whole window.  The ``direct``
    strategy instead builds a basis of ``sigma^n(I) + Q`` for each ``n``.
``fit_sml``
    looks for a finite union of residue classes plus a finite set.
``certify``
    the p-adic argument: per residue class of ``T = -S`` modulo a period
    ``P``, an analytic arc through the class, composed with each generator
    of ``J``, is either zero to the working precision or has finitely many
    zeros by Strassman's bound.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from sympy import isprime, nextprime

from .arc import build_arc, compose_series, arc_eval
from .domains import QQ
from .dynamics import PolyMap, check_invariant, dyn_eval, iterate
from .errors import (
    BadPrime,
    Indeterminate,
    InternalDefect,
    NotZeroDimensional,
    ValidationError,
)
from .groebner import Ideal, ResidueRing, contains, groebner_basis
from .polynomial import evaluate
from .quotient import (
    build_quotient,
    cycle_length,
    cycle_points,
    identity_jacobian_exponent,
    reduce_mod_pk,
)
from .strassman import Bound, ZeroSeries, series_verdict

SML_FIT = "SML_FIT"
NO_FIT = "NO_FIT"
INCONCLUSIVE = "INCONCLUSIVE"

DEFAULT_CONFIDENCE_RADIUS = 60
DEFAULT_MAX_PRECISION = 48


def _with_modulus(sigma, I, J, Q):
    if Q is None:
        Q = sigma.modulo
    if Q is not None and Q.is_zero():
        Q = None
    if Q is not None:
        check_invariant(sigma, Q)
        I = I + Q
    return I, J, Q


# ---------------------------------------------------------------------------
# scan
# ---------------------------------------------------------------------------


def _orbit_bits(sigma, I, J, N):
    """``{n: bit}`` for ``|n| <= N`` by iterating points in ``R/I``."""
    RR = ResidueRing(I)
    one = RR.one()
    s = tuple(RR.gens())
    gens = [g.with_ring(RR.ring) for g in J.generators]

    def holds(point):
        return all(not evaluate(D, point, one=one) for D in gens)

    bits = {0: holds(s)}
    forward = sigma.inverse()
    point = s
    for n in range(1, N + 1):
        point = dyn_eval(forward, point, one=one)
        bits[n] = holds(point)
    point = s
    for n in range(1, N + 1):
        point = dyn_eval(sigma, point, one=one)
        bits[-n] = holds(point)
    return bits


def contains_at(sigma, I, J, n, Q=None):
    """Direct test of ``sigma^n(I) + Q ⊇ J`` from a fresh Groebner basis."""
    image = iterate(sigma, n).apply_ideal(I)
    if Q is not None:
        image = image + Q
    return contains(image, J)


def scan(sigma: PolyMap, I: Ideal, J: Ideal, N: int, Q: Ideal = None, strategy="orbit"):
    """Bits of ``S(I, J)`` on ``[-N, N]`` as a dict ``n -> bool``."""
    if not sigma.has_inverse():
        from .errors import NoInverse

        raise NoInverse("scanning needs a verified inverse")
    if N < 0:
        raise ValidationError("window radius must be non-negative", field="window")
    L, J, Q = _with_modulus(sigma, I, J, Q)
    if strategy == "orbit":
        return _orbit_bits(sigma, L, J, N)
    if strategy == "direct":
        return {n: contains_at(sigma, I, J, n, Q) for n in range(-N, N + 1)}
    raise ValidationError(f"unknown scan strategy {strategy!r}", field="options.strategy")


def reflect(bits):
    """Bits of ``T = {n : sigma^n(J) ⊆ I}`` from bits of ``S``."""
    return {-n: b for n, b in bits.items()}


# ---------------------------------------------------------------------------
# structure fitting
# ---------------------------------------------------------------------------


@dataclass
class SMLFit:
    status: str
    period: int | None = None
    progressions: list = field(default_factory=list)
    exceptional: list = field(default_factory=list)


def fit_sml(bits, N=None, tail_fraction=0.5, characteristic=0, confidence_radius=DEFAULT_CONFIDENCE_RADIUS):
    """Smallest period ``a <= N // 4`` that explains both tails of the window.

    The tails are ``|n| > N * (1 - tail_fraction)``.  Every residue class
    must take a single value across both tails; the classes where it is
    ``True`` are the progressions, and every window position disagreeing
    with them (necessarily in the core) is exceptional.
    """
    if N is None:
        N = max(abs(n) for n in bits)
    cut = N * (1 - tail_fraction)
    tail = [n for n in range(-N, N + 1) if abs(n) > cut]
    for a in range(1, N // 4 + 1):
        seen = {}
        ok = True
        for n in tail:
            r = n % a
            b = bits[n]
            if seen.setdefault(r, b) != b:
                ok = False
                break
        if not ok or len(seen) < a:
            continue
        progressions = sorted(r for r, b in seen.items() if b)
        prog = set(progressions)
        exceptional = sorted(n for n in range(-N, N + 1) if bits[n] != (n % a in prog))
        return SMLFit(SML_FIT, a, progressions, exceptional)
    if characteristic > 0 or N >= confidence_radius:
        return SMLFit(NO_FIT)
    return SMLFit(INCONCLUSIVE)


# ---------------------------------------------------------------------------
# prime selection
# ---------------------------------------------------------------------------


def _denominators(polys):
    out = set()
    for f in polys:
        for c in f.terms.values():
            if isinstance(c, Fraction) and c.denominator != 1:
                out.add(c.denominator)
    return out


def good_prime(sigma, I, J, Q=None, start=5, cap=100_000):
    """Smallest prime ``p >= max(5, start)`` dividing no denominator of the data.

    The data are the images of ``sigma`` and its inverse, the generators of
    ``I``, ``J`` and ``Q``, and the reduced Groebner bases of ``I + Q`` and ``Q``.
    """
    if sigma.ring.domain != QQ:
        raise ValidationError("prime selection needs rational coefficients", field="coefficient_field")
    polys = list(sigma.images) + list(sigma.inverse_images or ())
    polys += list(I.generators) + list(J.generators)
    L = I
    if Q is not None:
        polys += list(Q.generators) + list(groebner_basis(Q).basis)
        L = I + Q
    polys += list(groebner_basis(L).basis)
    dens = _denominators(polys)
    p = max(5, start)
    if not isprime(p):
        p = nextprime(p)
    while p <= cap:
        if all(d % p for d in dens):
            return p
        p = nextprime(p)
    raise BadPrime(f"no good prime below {cap}")


# ---------------------------------------------------------------------------
# certification
# ---------------------------------------------------------------------------

FULL = "FULL"
FINITE = "FINITE"
INDETERMINATE = "INDETERMINATE"


@dataclass
class ClassCertificate:
    """Verdict for ``{n in S : n ≡ residue (mod modulus)}``."""

    residue: int
    modulus: int
    verdict: str
    precision: int
    bound: int | None = None
    zeros: list = field(default_factory=list)
    generator_verdicts: list = field(default_factory=list)
    complete: bool = False

    def describe(self, p):
        if self.verdict == FULL:
            return f"{self.residue} mod {self.modulus}: FULL at {p}^{self.precision}"
        if self.verdict == FINITE:
            return f"{self.residue} mod {self.modulus}: FINITE (at most {self.bound}) zeros {self.zeros}"
        return f"{self.residue} mod {self.modulus}: INDETERMINATE"


@dataclass
class Certification:
    prime: int
    precision: int
    cycle_length: int
    jacobian_exponent: int
    period: int
    classes: list

    def verdict_for(self, n):
        c = self.classes[n % self.period]
        return c


def _certify_once(sigma, L, J, p, K, t_bits):
    S0 = build_quotient(L)
    Sp = reduce_mod_pk(S0, p, 1)
    s = Sp.generators()
    a = cycle_length(sigma, Sp, s)
    m = identity_jacobian_exponent(sigma, Sp, cycle_points(sigma, Sp, s, a), a)
    P = a * m
    SK = reduce_mod_pk(S0, p, K)
    one = SK.one()
    point = SK.generators()
    gens = [g.with_ring(S0.ring) for g in J.generators]
    classes = []
    for k in range(P):
        arc = build_arc(sigma, SK, point, p, K, power=P)
        verdicts = [series_verdict(compose_series(D, arc)) for D in gens]
        if all(isinstance(v, ZeroSeries) for v in verdicts):
            verdict, bound = FULL, None
        elif any(isinstance(v, Bound) for v in verdicts):
            verdict = FINITE
            bound = min(v.N for v in verdicts if isinstance(v, Bound))
        else:
            verdict, bound = INDETERMINATE, None
        zeros = []
        if verdict == FINITE:
            zeros = sorted(n for n, b in t_bits.items() if b and (n - k) % P == 0)
            for n in zeros:
                z = (n - k) // P
                value = arc_eval(arc, z)
                if any(evaluate(D, value, one=one) for D in gens):
                    raise InternalDefect(f"scan zero n = {n} is not a zero of the arc mod {p}^{K}")
            if len(zeros) > bound:
                raise InternalDefect(f"class {k} mod {P}: {len(zeros)} zeros exceed Strassman bound {bound}")
        classes.append(
            ClassCertificate(
                residue=k,
                modulus=P,
                verdict=verdict,
                precision=K,
                bound=bound,
                zeros=zeros,
                generator_verdicts=[str(v) for v in verdicts],
                complete=verdict == FINITE and len(zeros) == bound,
            )
        )
        point = dyn_eval(sigma, point, one=one)
    return Certification(p, K, a, m, P, classes)


def certify(sigma, I, J, N, p=None, K=12, Q=None, bits=None, max_precision=DEFAULT_MAX_PRECISION):
    """Per-class certificates for ``S(I, J)`` (classes are reported in ``S``).

    Raises :class:`NotZeroDimensional` when ``I + Q`` has an infinite
    quotient, and :class:`Indeterminate` if some class stays undecided up to
    ``max_precision``.
    """
    L, J, Q = _with_modulus(sigma, I, J, Q)
    if not groebner_basis(L).is_zero_dimensional():
        raise NotZeroDimensional("certification needs a zero-dimensional I + Q")
    if p is None:
        p = good_prime(sigma, I, J, Q)
    if bits is None:
        bits = _orbit_bits(sigma, L, J, N)
    t_bits = reflect(bits)
    precision = K
    while True:
        cert = _certify_once(sigma, L, J, p, precision, t_bits)
        if all(c.verdict != INDETERMINATE for c in cert.classes):
            break
        if precision * 2 > max_precision:
            raise Indeterminate(f"some classes stay undecided at precision {p}^{precision}")
        precision *= 2
    # T-class k corresponds to S-class -k
    P = cert.period
    s_classes = []
    for c in cert.classes:
        s_classes.append(
            ClassCertificate(
                residue=(-c.residue) % P,
                modulus=P,
                verdict=c.verdict,
                precision=c.precision,
                bound=c.bound,
                zeros=sorted(-n for n in c.zeros),
                generator_verdicts=c.generator_verdicts,
                complete=c.complete,
            )
        )
    s_classes.sort(key=lambda c: c.residue)
    cert.classes = s_classes
    return cert


def check_certificate(cert: Certification, bits):
    """Every FULL class is all-true in the window; FINITE zeros are exactly the true bits."""
    P = cert.period
    for c in cert.classes:
        members = [n for n in bits if n % P == c.residue]
        true = sorted(n for n in members if bits[n])
        if c.verdict == FULL and len(true) != len(members):
            return False
        if c.verdict == FINITE and true != c.zeros:
            return False
    return True


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------

DIRECTION_NOTE = (
    "sigma^n(I) contains J iff sigma^(-n)(J) is contained in I; "
    "certification runs on T = {n : sigma^n(J) ⊆ I} and reports S = -T"
)


@dataclass
class OrbitReport:
    window: int
    bits: dict
    fit: SMLFit
    certification: Certification | None = None
    certification_note: str | None = None
    direction_note: str = DIRECTION_NOTE

    @property
    def status(self):
        return self.fit.status

    def members(self):
        return sorted(n for n, b in self.bits.items() if b)

    def to_dict(self):
        out = {
            "window": [-self.window, self.window],
            "bits": "".join("1" if self.bits[n] else "0" for n in range(-self.window, self.window + 1)),
            "members": self.members(),
            "status": self.fit.status,
            "period": self.fit.period,
            "progressions": self.fit.progressions,
            "exceptional": self.fit.exceptional,
            "direction_note": self.direction_note,
            "summary": self.render_text(),
        }
        if self.certification is not None:
            cert = self.certification
            out["certificates"] = {
                "prime": cert.prime,
                "precision": cert.precision,
                "cycle_length": cert.cycle_length,
                "jacobian_exponent": cert.jacobian_exponent,
                "period": cert.period,
                "classes": [asdict(c) for c in cert.classes],
                "semantics": f"FULL means zero modulo {cert.prime}^{cert.precision}, not an unconditional proof",
            }
        if self.certification_note:
            out["certification_note"] = self.certification_note
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False)

    def render_text(self):
        fit = self.fit
        if fit.status == SML_FIT:
            if fit.progressions:
                body = " ∪ ".join(f"({r} mod {fit.period})" for r in fit.progressions)
            else:
                body = "∅"
            if fit.exceptional:
                body += f", exceptions {{{', '.join(str(n) for n in fit.exceptional)}}}"
            else:
                body += ", no exceptions"
            text = f"S = {body}"
        elif fit.status == NO_FIT:
            text = f"no SML structure fits; S ∩ [-{self.window}, {self.window}] = {{{', '.join(map(str, self.members()))}}}"
        else:
            text = f"inconclusive on [-{self.window}, {self.window}]; widen the window"
        cert = self.certification
        if cert is not None:
            full = [c.residue for c in cert.classes if c.verdict == FULL]
            finite = [c.residue for c in cert.classes if c.verdict == FINITE]
            parts = []
            if full:
                parts.append(
                    f"certified FULL at {cert.prime}^{cert.precision} for classes {{{','.join(map(str, full))}}} mod {cert.period}"
                )
            if finite:
                parts.append(f"FINITE for classes {{{','.join(map(str, finite))}}} mod {cert.period}")
            text += ", " + "; ".join(parts)
        return text


def analyze(sigma, I, J, N, Q=None, certify_classes=False, p=None, K=12, strategy="orbit",
            characteristic=None, confidence_radius=DEFAULT_CONFIDENCE_RADIUS, tail_fraction=0.5):
    """Scan, fit and (optionally) certify in one call."""
    bits = scan(sigma, I, J, N, Q=Q, strategy=strategy)
    if characteristic is None:
        characteristic = sigma.ring.domain.characteristic
    fit = fit_sml(bits, N, tail_fraction=tail_fraction, characteristic=characteristic,
                  confidence_radius=confidence_radius)
    report = OrbitReport(N, bits, fit)
    if certify_classes:
        try:
            report.certification = certify(sigma, I, J, N, p=p, K=K, Q=Q, bits=bits)
        except NotZeroDimensional as exc:
            report.certification_note = f"scan only: {exc}"
    return report
