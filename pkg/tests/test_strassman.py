from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from idealorbit.arc import binom
from idealorbit.domains import vp
from idealorbit.errors import Indeterminate
from idealorbit.strassman import (
    Bound,
    IndeterminateVerdict,
    PadicPowerSeries,
    ZeroSeries,
    extended_strassman,
    mahler_coordinate_verdict,
    mahler_to_power,
    require,
    stirling_first,
    strassman_bound,
)


def _agree(a, b, k):
    v = vp(a - b, 5)
    return v is None or v >= k


def test_stirling_numbers():
    # z(z-1)(z-2) = z^3 - 3z^2 + 2z
    assert [stirling_first(3, k) for k in range(4)] == [0, 2, -3, 1]
    assert stirling_first(5, 5) == 1 and stirling_first(5, 0) == 0


def test_linear_mahler_series_converts_exactly():
    g = mahler_to_power([0, 5], 5, 12)
    assert g.approx == [0, 5]
    assert g.valuation(1) == 1 and g.valuation(0) is None


def test_binomial_expansion_of_six_to_the_z():
    K = 12
    g = mahler_to_power([5**k for k in range(2 * K)], 5, K)
    assert g.approx[0] == 1
    # c_1 = log(6) = 5 - 5^2/2 + 5^3/3 - ... to the available precision
    log6 = sum(Fraction((-1) ** (n + 1) * 5**n, n) for n in range(1, 40))
    assert _agree(g.approx[1], log6, g.error[1])
    for z in range(3):
        assert _agree(g.evaluate(z), 6**z, 3)


def test_zero_series():
    assert mahler_coordinate_verdict([0, 5**12, 0], 5, 12) == ZeroSeries(12)
    g = PadicPowerSeries.exact([0, 0], 5, 12)
    assert strassman_bound(g) == ZeroSeries(12)
    assert g.tail_floor(10) == 12


def test_bound_examples():
    assert strassman_bound(PadicPowerSeries.exact([5, 1], 5, 12)) == Bound(1)
    assert strassman_bound(PadicPowerSeries.exact([5**k for k in range(12)], 5, 12)) == Bound(0)
    assert mahler_coordinate_verdict([5**k for k in range(24)], 5, 12) == Bound(0)


def test_undetermined_coefficients_give_indeterminate():
    # the constant term is zero mod p^K but z has valuation K as well
    verdict = strassman_bound(PadicPowerSeries.exact([0, 5**12], 5, 12))
    assert isinstance(verdict, (ZeroSeries, IndeterminateVerdict))
    g = PadicPowerSeries(5, 6, [5**3, 5**3], [2, 6], lambda j: 6)
    assert isinstance(strassman_bound(g), IndeterminateVerdict)
    with pytest.raises(Indeterminate):
        require(strassman_bound(g))


def test_extended_strassman_takes_the_smallest_bound():
    assert extended_strassman([Bound(3), ZeroSeries(8), Bound(1)]) == Bound(1)
    assert extended_strassman([ZeroSeries(8), ZeroSeries(6)]) == ZeroSeries(6)
    assert isinstance(extended_strassman([ZeroSeries(8), IndeterminateVerdict("x")]), IndeterminateVerdict)


@given(st.lists(st.integers(-10**6, 10**6), min_size=1, max_size=12))
def test_error_valuations_are_nondecreasing(b):
    g = mahler_to_power([5 * x for x in b], 5, 10)
    errors = g.error + [g.tail_floor(len(g) + k) for k in range(40)]
    assert all(a <= b for a, b in zip(errors, errors[1:]))


@pytest.mark.parametrize("K", [6, 12, 20])
def test_power_series_reproduces_the_mahler_values(K):
    # arc-type coefficients: v(b_k) >= ceil((k+1)/2)
    b = [(3 + 7 * k) * 5 ** ((k + 2) // 2) for k in range(2 * K - 1)]
    b[0] = 11
    g = mahler_to_power(b, 5, K)
    slack = K - g.error_at()
    assert 0 <= slack <= K // 2 + 2
    for z in range(6):
        mahler = sum(bk * binom(z, k) for k, bk in enumerate(b))
        assert _agree(g.evaluate(z), mahler, K - slack)


def test_bounds_are_stable_as_precision_grows():
    families = {
        "six_to_the_z": lambda K: [5**k for k in range(2 * K)],
        "translate": lambda K: [3, 5],
        "arc_like": lambda K: [1, 5, 50, 125, 5**3 * 7, 5**4],
        "small_constant": lambda K: [5**3],
    }
    for name, coeffs in families.items():
        seen_bound = None
        zero_until = None
        for K in range(2, 17):
            v = mahler_coordinate_verdict(coeffs(K), 5, K)
            if isinstance(v, Bound):
                assert seen_bound in (None, v.N), name
                seen_bound = v.N
            elif isinstance(v, ZeroSeries):
                # zero modulo p^K is only possible below every rigorous bound
                assert seen_bound is None, name
                zero_until = K
        if name == "small_constant":
            assert zero_until == 3 and seen_bound == 0


@pytest.mark.parametrize(
    "roots",
    [[0], [3, -7], [1, 6, 11], [-25, 0, 25], [2, 4, 8, 16], [-3, 5, 12, -20, 21]],
)
def test_polynomials_with_integer_roots(roots):
    z = sympy.Symbol("z")
    coeffs = [int(c) for c in reversed(sympy.Poly(sympy.prod([z - r for r in roots]), z).all_coeffs())]
    K = 14
    power = strassman_bound(PadicPowerSeries.exact(coeffs, 5, K))
    assert power == Bound(len(roots))
    f = sympy.lambdify(z, sympy.prod([z - r for r in roots]))
    values = [int(f(n)) for n in range(len(roots) + 1)]
    mahler = []
    row = values
    while row:
        mahler.append(row[0])
        row = [row[i + 1] - row[i] for i in range(len(row) - 1)]
    verdict = mahler_coordinate_verdict(mahler, 5, K)
    assert isinstance(verdict, Bound) and verdict.N >= len(set(roots))
