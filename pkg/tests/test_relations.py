import random

import pytest

from idealorbit.domains import QQ, PrimeField
from idealorbit.dynamics import PolyMap, identity
from idealorbit.errors import EnumerationTooLarge, ValidationError
from idealorbit.gallery import load_job
from idealorbit.groebner import Ideal
from idealorbit.polynomial import PolyRing
from idealorbit.relations import check_relations, to_prime_field

from helpers import random_map, random_poly

F5XY = PolyRing(PrimeField(5), ("x", "y"))


def test_cube_counterexample():
    job = load_job("relations_counterexample")
    v = check_relations(job.sigma(require_inverse=False, verify=False), job.ideal_I, job.ideal("ideal_J"), 5)
    assert (v.a, v.b, v.c, v.d, v.e) == (False, False, True, True, True)
    assert v.consistent()
    assert (v.points_I, v.points_J, v.points_tau_J) == (1, 1, 1)


def test_identity_relates_an_ideal_to_itself():
    I = Ideal(F5XY, ["x^2 - y", "y^3"])
    v = check_relations(identity(F5XY), I, I, 5)
    assert all((v.a, v.b, v.c, v.d, v.e))


def test_field_equations_make_the_geometric_test_exact():
    # I contains x^5 - x and y^5 - y, so it is radical with only rational points
    rng = random.Random(55)
    field_eqs = ["x^5 - x", "y^5 - y"]
    for _ in range(40):
        # two-term quadratic maps keep the elimination behind the preimage cheap
        tau = random_map(rng, F5XY, 2, 2)
        I = Ideal(F5XY, [random_poly(rng, F5XY, 2, 2)] + [F5XY.parse(f) for f in field_eqs])
        J = Ideal(F5XY, [random_poly(rng, F5XY, 2, 2)])
        v = check_relations(tau, I, J, 5)
        assert v.consistent()
        assert v.b == v.c


def test_rational_input_is_reduced_mod_p():
    R = PolyRing(QQ, ("x",))
    tau = PolyMap(R, ["x/2 + 1"], verify=False)
    v = check_relations(tau, Ideal(R, ["x - 2"]), Ideal(R, ["x - 2"]), 5)
    # 2/2 + 1 = 2, so the single point is fixed
    assert v.c and v.b
    assert str(to_prime_field(R.parse("x/2 + 1/3"), PolyRing(PrimeField(7), ("x",)))) in ("4*x + 5", "4x + 5")


def test_enumeration_cap_and_field_checks():
    R = PolyRing(PrimeField(7), tuple("abcdefg"))
    with pytest.raises(EnumerationTooLarge):
        check_relations(identity(R), Ideal(R, ["a"]), Ideal(R, ["a"]), 7)
    with pytest.raises(ValidationError):
        check_relations(identity(F5XY), Ideal(F5XY, ["x"]), Ideal(F5XY, ["x"]), 7)
