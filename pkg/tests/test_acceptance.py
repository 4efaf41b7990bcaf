"""Acceptance criteria 1-9.

Each test logs one ``PASS``/``FAIL`` line; the lines are repeated in the
pytest terminal summary under "acceptance criteria".  Running this file
directly (``python3 tests/test_acceptance.py``) runs only these tests.
"""
import random
import sys
import time
from fractions import Fraction

import pytest

from idealorbit.arc import arc_eval, arc_floor, build_arc
from idealorbit.domains import QQ, PrimeField
from idealorbit.dynamics import PolyMap, compose, dyn_eval, jacobian, jacobian_at
from idealorbit.errors import SmallPrime
from idealorbit.gallery import GALLERY, load_fixture, load_job
from idealorbit.groebner import Ideal, contains, groebner_basis, normal_form, s_polynomial
from idealorbit.orbit import FINITE, FULL, NO_FIT, SML_FIT, certify, check_certificate, fit_sml, good_prime, scan
from idealorbit.polynomial import PolyRing
from idealorbit.quotient import build_quotient, reduce_mod_pk
from idealorbit.relations import check_relations
from idealorbit.strassman import Bound, PadicPowerSeries, mahler_coordinate_verdict, strassman_bound

from helpers import random_map, random_point, random_poly


def _scan_job(name, N=None):
    job = load_job(name)
    N = job.window if N is None else N
    start = time.perf_counter()
    bits = scan(job.automorphism, job.ideal_I, job.ideal_J, N, Q=job.defining_ideal)
    return job, bits, time.perf_counter() - start


def _residue_bits(bits, period, residues):
    return {n: (n % period in residues) for n in bits}


# ---------------------------------------------------------------------------
# 1. five-variable example over Q
# ---------------------------------------------------------------------------


def test_criterion_1_five_variable_example(record_criterion):
    def body():
        job, bits, elapsed = _scan_job("five_variable_radical", 40)
        assert bits == _residue_bits(bits, 4, {0, 3})
        fit = fit_sml(bits, 40)
        assert (fit.status, fit.period, fit.progressions, fit.exceptional) == (SML_FIT, 4, [0, 3], [])

        expected = load_fixture("five_variable_radical")["expected"]
        ring = job.ring
        rad_I = Ideal(ring, [ring.parse(g) for g in expected["radical_I"]])
        rad_J = Ideal(ring, [ring.parse(g) for g in expected["radical_J"]])
        # the radicals are verified, not computed: I ⊆ rad I, and every
        # generator of rad I has a power in I (so rad I ⊆ sqrt(I))
        assert contains(rad_I, job.ideal_I) and contains(rad_J, job.ideal_J)
        gb_I, gb_J = groebner_basis(job.ideal_I), groebner_basis(job.ideal_J)
        for g in rad_I.generators:
            assert any(gb_I.contains(g**k) for k in (1, 2)), g
        for g in rad_J.generators:
            assert any(gb_J.contains(g**k) for k in (1, 2)), g
        for w in expected["nilpotency_witnesses"]:
            assert gb_J.contains(ring.parse(w)) and gb_I.contains(ring.parse(w))
        assert not gb_J.contains(ring.parse("x")) and not gb_J.contains(ring.parse("y"))

        radical_bits = scan(job.automorphism, rad_I, rad_J, 40)
        assert all(radical_bits.values())
        mixed_bits = scan(job.automorphism, job.ideal_I, rad_J, 40)
        assert not any(mixed_bits.values())
        assert elapsed < 60
        return f"S = 0,3 mod 4 on [-40, 40] in {elapsed:.2f}s"

    record_criterion(1, "five-variable example reproduces 0,3 mod 4 with radical checks", body)


# ---------------------------------------------------------------------------
# 2. quotient by (x, y)^3
# ---------------------------------------------------------------------------


def test_criterion_2_cube_quotient_example(record_criterion):
    def body():
        _, bits, elapsed = _scan_job("swap_truncated", 30)
        assert bits == _residue_bits(bits, 2, {1})
        fit = fit_sml(bits, 30)
        assert (fit.status, fit.period, fit.progressions, fit.exceptional) == (SML_FIT, 2, [1], [])
        assert elapsed < 10
        return f"S = 1 mod 2 on [-30, 30] in {elapsed:.2f}s"

    record_criterion(2, "swap on Q[x,y,z]/(x,y)^3 gives the odd integers", body)


# ---------------------------------------------------------------------------
# 3. Laurent variables through partner variables
# ---------------------------------------------------------------------------


def test_criterion_3_laurent_example(record_criterion):
    def body():
        _, bits, elapsed = _scan_job("laurent_nilpotent", 40)
        assert bits == _residue_bits(bits, 4, {0, 3})
        fit = fit_sml(bits, 40)
        assert (fit.status, fit.period, fit.progressions, fit.exceptional) == (SML_FIT, 4, [0, 3], [])
        assert elapsed < 60
        return f"S = 0,3 mod 4 on [-40, 40] in {elapsed:.2f}s"

    record_criterion(3, "Laurent and nilpotent example gives 0,3 mod 4", body)


# ---------------------------------------------------------------------------
# 4. positive characteristic
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("p", [2, 3])
def test_criterion_4_positive_characteristic(record_criterion, p):
    def body():
        job, bits, elapsed = _scan_job(f"frobenius_powers_p{p}")
        N = job.window
        assert N >= p**3
        powers = set()
        k = 0
        while p**k <= N:
            powers.add(-(p**k))
            k += 1
        assert {n for n, b in bits.items() if b} == powers
        fit = fit_sml(bits, N, characteristic=p)
        assert fit.status == NO_FIT
        assert elapsed < 30
        return f"p={p}: members {sorted(powers)}, NO_FIT, {elapsed:.2f}s"

    record_criterion(4, f"Lech example over F_{p}(t) has no progression structure", body)


# ---------------------------------------------------------------------------
# 5. arc fidelity
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("image, start", [("x+5", 0), ("6*x", 1)])
def test_criterion_5_arc_fidelity(record_criterion, image, start):
    def body():
        ring = PolyRing(QQ, ("x",))
        S = reduce_mod_pk(build_quotient(Ideal(ring, ["x"])), 5, 12)
        rho = PolyMap(ring, [image], verify=False)
        s0 = (S.scalar(start),)
        arc = build_arc(rho, S, s0, 5, 12)
        point = s0
        for n in range(21):
            assert arc_eval(arc, n) == point, n
            point = dyn_eval(rho, point, one=S.one())
        series = arc.series[0]
        for k in range(len(series.coeffs)):
            assert series.valuation_floor(k) >= min(arc_floor(k), 12), k
        return f"{image}: 21 iterates agree mod 5^12, degree {series.degree}"

    record_criterion(5, f"arc of x -> {image} matches iteration and valuation floors", body)


# ---------------------------------------------------------------------------
# 6. Strassman oracle
# ---------------------------------------------------------------------------


def test_criterion_6_strassman(record_criterion):
    def body():
        linear = strassman_bound(PadicPowerSeries.exact([Fraction(5), Fraction(1)], 5, 12))
        assert linear == Bound(1)
        window = range(-10, 11)
        zeros = [n for n in window if (5 + n) % 5**12 == 0]
        assert zeros == [-5]
        geometric = strassman_bound(PadicPowerSeries.exact([Fraction(5**k) for k in range(12)], 5, 12))
        assert geometric == Bound(0)
        mahler = mahler_coordinate_verdict([5**k for k in range(24)], 5, 12)
        assert mahler == Bound(0)
        return "5+z: Bound(1) with zero -5; 5^k: Bound(0)"

    record_criterion(6, "Strassman bounds on 5+z and the geometric series", body)


# ---------------------------------------------------------------------------
# 7. certification consistency
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", ["rotation_linear", "translation"])
def test_criterion_7_certification(record_criterion, name):
    def body():
        job = load_job(name)
        bits = scan(job.automorphism, job.ideal_I, job.ideal_J, job.window)
        cert = certify(job.automorphism, job.ideal_I, job.ideal_J, job.window, p=5, K=12, bits=bits)
        assert check_certificate(cert, bits)
        for c in cert.classes:
            members = [n for n in bits if n % cert.period == c.residue]
            if c.verdict == FULL:
                assert all(bits[n] for n in members)
            else:
                assert c.verdict == FINITE
                assert c.zeros == sorted(n for n in members if bits[n])
        verdicts = ", ".join(f"{c.residue}:{c.verdict}" for c in cert.classes)
        return f"{name}: period {cert.period}, {verdicts}"

    record_criterion(7, f"certificates agree with scan bits on {name}", body)


# ---------------------------------------------------------------------------
# 8. property suites
# ---------------------------------------------------------------------------


def _fixture_ideals():
    for name in GALLERY:
        data = load_fixture(name)
        if "variables" not in data or data.get("coefficient_field", "Q").startswith("Fp(t)"):
            continue
        job = load_job(name)
        for key in ("ideal_I", "ideal_J", "defining_ideal"):
            if data.get(key):
                yield f"{name}.{key}", job.ideal(key)
        if job.defining_ideal is not None:
            yield f"{name}.I+Q", job.ideal_I + job.defining_ideal


def test_criterion_8_property_suites(record_criterion):
    def body():
        rng = random.Random(8)
        # S-pairs of every fixture basis reduce to zero
        bases = 0
        for label, ideal in _fixture_ideals():
            gb = groebner_basis(ideal)
            G = gb.basis
            for i in range(len(G)):
                for j in range(i + 1, len(G)):
                    assert not normal_form(s_polynomial(G[i], G[j]), gb), label
            bases += 1

        # chain rule and point-map composition over F_7
        R = PolyRing(PrimeField(7), ("x", "y", "z"))
        for _ in range(100):
            t1, t2 = random_map(rng, R), random_map(rng, R)
            s = random_point(rng, R)
            lhs = jacobian_at(compose(t2, t1), s)
            rhs = jacobian_at(t1, dyn_eval(t2, s)) @ jacobian_at(t2, s)
            assert lhs == rhs
            symbolic = jacobian(compose(t2, t1))
            assert symbolic == jacobian(t1).substitute(t2.images) @ jacobian(t2)
        for _ in range(100):
            t1, t2 = random_map(rng, R), random_map(rng, R)
            s = random_point(rng, R)
            assert dyn_eval(compose(t2, t1), s) == dyn_eval(t1, dyn_eval(t2, s))

        # relations over F_5 with d <= 2
        for trial in range(200):
            d = 1 + trial % 2
            F = PolyRing(PrimeField(5), ("x", "y")[:d])
            tau = PolyMap(F, [random_poly(rng, F, 3, 2) for _ in range(d)], verify=False)
            I = Ideal(F, [random_poly(rng, F, 3, 2) for _ in range(rng.randint(1, 2))])
            J = Ideal(F, [random_poly(rng, F, 3, 2) for _ in range(rng.randint(1, 2))])
            v = check_relations(tau, I, J, 5)
            assert v.a == v.b and v.c == v.d == v.e and (v.c or not v.b), (tau, I, J, v)

        # the counterexample: geometric inclusion without algebraic inclusion
        F1 = PolyRing(PrimeField(5), ("x",))
        v = check_relations(PolyMap(F1, ["x^3"]), Ideal(F1, ["x^4"]), Ideal(F1, ["x"]), 5)
        assert (v.b, v.c) == (False, True)
        return f"{bases} fixture bases, 100 chain-rule pairs, 100 compositions, 200 relation instances"

    record_criterion(8, "property suites hold with zero violations", body)


# ---------------------------------------------------------------------------
# 9. refusals and prime selection
# ---------------------------------------------------------------------------


def _denominators(job):
    out = set()
    for key in ("sigma", "sigma_inv", "ideal_I", "ideal_J", "defining_ideal"):
        for f in job.polys(key, required=False) or []:
            out.update(c.denominator for c in f.terms.values())
    return out


def test_criterion_9_refusals(record_criterion):
    def body():
        ring = PolyRing(QQ, ("x",))
        S = build_quotient(Ideal(ring, ["x"]))
        rho = PolyMap(ring, ["x+6"], verify=False)
        for p in (2, 3):
            Sp = reduce_mod_pk(S, p, 6)
            with pytest.raises(SmallPrime):
                build_arc(rho, Sp, (Sp.scalar(0),), p, 6)
        with pytest.raises(SmallPrime):
            build_arc(rho, reduce_mod_pk(S, 2, 6), (reduce_mod_pk(S, 2, 6).scalar(0),), 2, 6, experimental=True)
        S3 = reduce_mod_pk(S, 3, 6)
        arc = build_arc(PolyMap(ring, ["x+3"], verify=False), S3, (S3.scalar(0),), 3, 6, experimental=True)
        assert not arc.certifying

        chosen = {}
        for name in GALLERY:
            data = load_fixture(name)
            if data.get("coefficient_field", "Q") != "Q" or "sigma_inv" not in data:
                continue
            job = load_job(name)
            J = job.ideal("ideal_J", required=False) or job.ideal_I
            p = good_prime(job.automorphism, job.ideal_I, J, job.defining_ideal)
            assert p >= 5 and all(d % p for d in _denominators(job))
            chosen[name] = p

        job = load_job("translation")
        R = job.ring
        sigma = PolyMap(R, ["x+1/5"], ["x-1/5"])
        # sigma carries denominator 5; I and J add more
        for dens, expected in (([7], 11), ([5, 7], 11), ([5 * 7 * 11, 13], 17)):
            I = Ideal(R, [R.parse("x") - R.const(Fraction(1, dens[0]))])
            J = Ideal(R, [R.parse("x") - R.const(Fraction(1, d)) for d in dens[1:]] or [R.parse("x")])
            assert good_prime(sigma, I, J) == expected
        return f"p=2 and p=3 refused; good primes {sorted(set(chosen.values()))} on {len(chosen)} fixtures"

    record_criterion(9, "small primes are refused and good_prime avoids denominators", body)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
