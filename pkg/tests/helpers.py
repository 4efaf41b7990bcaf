"""Random generators shared by the property and acceptance tests."""
from fractions import Fraction

from hypothesis import strategies as st

from idealorbit.domains import QQ
from idealorbit.dynamics import PolyMap


def exponents(nvars, max_deg):
    return st.tuples(*[st.integers(0, max_deg) for _ in range(nvars)])


def rationals(max_num=6, max_den=4):
    return st.builds(Fraction, st.integers(-max_num, max_num), st.integers(1, max_den))


def polys(ring, max_terms=4, max_deg=3, coeffs=None):
    """Random polynomials of ``ring`` as a hypothesis strategy."""
    if coeffs is None:
        coeffs = rationals() if ring.domain == QQ else st.integers(-10, 10)
    return st.dictionaries(exponents(ring.nvars, max_deg), coeffs, max_size=max_terms).map(ring.from_dict)


def random_poly(rng, ring, max_terms=4, max_deg=2, span=6):
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        e = tuple(rng.randint(0, max_deg) for _ in range(ring.nvars))
        terms[e] = rng.randint(-span, span)
    return ring.from_dict(terms)


def random_map(rng, ring, max_terms=3, max_deg=2):
    return PolyMap(ring, [random_poly(rng, ring, max_terms, max_deg) for _ in range(ring.nvars)])


def random_point(rng, ring):
    return tuple(ring.domain.convert(rng.randint(0, 50)) for _ in range(ring.nvars))


def random_triangular_automorphism(rng, ring, span=3):
    """``x_i -> u_i x_i + g_i(x_{i+1}, ...)`` with unit ``u_i``; the inverse is built by back substitution."""
    from idealorbit.dynamics import compose

    d = ring.nvars
    maps = []
    for i in range(d):
        u = rng.choice([c for c in (1, -1, 2, 3) if ring.domain.convert(c)])
        tail = {}
        for _ in range(rng.randint(0, 2)):
            e = [0] * d
            for j in range(i + 1, d):
                e[j] = rng.randint(0, 2)
            tail[tuple(e)] = rng.randint(-span, span)
        g = ring.from_dict(tail)
        xi = ring.gens()[i]
        images = list(ring.gens())
        inverse = list(ring.gens())
        images[i] = xi.scale(ring.domain.convert(u)) + g
        inverse[i] = (xi - g).scale(ring.domain.inv(ring.domain.convert(u)))
        maps.append(PolyMap(ring, images, inverse))
    sigma = maps[0]
    for m in maps[1:]:
        sigma = compose(m, sigma)
    return sigma
