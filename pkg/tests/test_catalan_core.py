import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catalan_basis.catalan_core import (
    ArrangementParams,
    Derivation,
    derivation_delta,
    euler,
    generator_F,
    h_poly,
    hyperplanes,
    phi_poly,
    psi,
    psi_coned,
)
from catalan_basis.exact_poly import Polynomial, substitute
from catalan_basis.factorial_kit import binom, p_poly, p_ratio_poly

from oracles import h_at_point


# -- psi and the hyperplanes ----------------------------------------------------


def test_params_validation():
    with pytest.raises(ValueError):
        ArrangementParams(0, 1)
    with pytest.raises(ValueError):
        ArrangementParams(1, -1)


def test_psi_small():
    P = ArrangementParams(1, 0)
    x1, z = Polynomial.gens(P.vars)
    assert psi(P) == x1
    P = ArrangementParams(2, 0)
    x1, x2, z = Polynomial.gens(P.vars)
    assert psi(P) == x1 * x2 * (x1 + x2) * (x1 - x2)


def test_psi_coned_degree_32():
    assert psi_coned(ArrangementParams(3, 2)).degree() == 46


@pytest.mark.parametrize("ell,m", [(1, 0), (2, 1), (3, 2), (2, 2)])
def test_hyperplane_count_and_product(ell, m):
    P = ArrangementParams(ell, m)
    fams = hyperplanes(P)
    forms = [f for fam in fams for f in fam.factors]
    assert len(forms) == 1 + ell * (2 * m + 1) + 2 * binom(ell, 2) * (2 * m + 1)
    prod = Polynomial.constant(P.vars, 1)
    for f in forms:
        prod = prod * f.poly
    assert prod == psi_coned(P)
    for a, b in itertools.combinations(forms, 2):
        assert not a.is_proportional(b)


def test_hyperplanes_11():
    fams = hyperplanes(ArrangementParams(1, 1))
    assert [str(f) for fam in fams for f in fam.factors] == ["z", "x_1 - z", "x_1", "x_1 + z"]
    assert len([f for fam in hyperplanes(ArrangementParams(2, 1)) for f in fam.factors]) == 13


# -- h --------------------------------------------------------------------------


def test_h_base_cases():
    x = Polynomial.variable(("x",), "x")
    assert h_poly(0, 0, 0, "x", ()) == x.scale(2)
    assert h_poly(0, 1, 0, "x", ()) == (x**3 - x).scale(Fraction(8, 3))


@pytest.mark.parametrize("u", range(5))
def test_h_1_0_u(u):
    got = h_poly(1, 0, u, "x", ("y",))
    assert got == p_poly("x", u, ("x", "y")).scale(Fraction(2, 2 * u + 1))


def test_h_rejects_bad_input():
    with pytest.raises(ValueError):
        h_poly(1, 0, 0, "x", ("x",))
    with pytest.raises(ValueError):
        h_poly(2, 0, 0, "x", ("y",))
    with pytest.raises(ValueError):
        h_poly(1, 0, -1, "x", ("y",))


# non-integers keep the oracle away from the integer roots of P(y, .)
points = st.fractions(min_value=-6, max_value=6, max_denominator=5).filter(lambda q: q.denominator > 1)


@settings(max_examples=40, deadline=None)
@given(
    ell=st.integers(0, 3),
    m=st.integers(0, 2),
    u=st.integers(0, 3),
    xv=points,
    yv=st.lists(points, min_size=3, max_size=3),
)
def test_h_matches_scalar_oracle(ell, m, u, xv, yv):
    ys = tuple(f"y_{i}" for i in range(1, ell + 1))
    h = h_poly(ell, m, u, "x", ys)
    pt = {"x": xv, **dict(zip(ys, yv))}
    assert h.evaluate(pt) == h_at_point(ell, m, u, xv, yv[:ell])


@pytest.mark.parametrize("ell,m,u", [(e, m, u) for e in range(4) for m in range(3) for u in range(3)])
def test_h_parity_and_degree(ell, m, u):
    ys = tuple(f"y_{i}" for i in range(1, ell + 1))
    h = h_poly(ell, m, u, "x", ys)
    assert h.parity_flip("x") == -h
    for y in ys:
        assert h.parity_flip(y) == h
    assert h.degree() == 2 * m * (ell + 1) + 2 * u + 1


@pytest.mark.parametrize("ell,m", [(e, m) for e in range(1, 4) for m in range(3)])
def test_h_symmetric_in_y(ell, m):
    ys = tuple(f"y_{i}" for i in range(1, ell + 1))
    h = h_poly(ell, m, 1, "x", ys)
    for perm in itertools.permutations(ys):
        assert h.rename(dict(zip(ys, perm))) == h


# -- generators -----------------------------------------------------------------


def test_generator_F_examples():
    P1 = ArrangementParams(1, 0)
    x1, _ = Polynomial.gens(P1.vars)
    assert generator_F(P1, 0, 1) == x1.scale(2)
    P2 = ArrangementParams(2, 0)
    x1, x2, _ = Polynomial.gens(P2.vars)
    assert generator_F(P2, 1, 1) == (x1 * (x1 * x1 - 1)).scale(Fraction(2, 3))
    with pytest.raises(IndexError):
        generator_F(P2, 0, 3)


@pytest.mark.parametrize("m,u", [(m, u) for m in range(3) for u in range(3)])
def test_generator_exchange_symmetry(m, u):
    P = ArrangementParams(2, m)
    swap = {"x_1": "x_2", "x_2": "x_1"}
    assert generator_F(P, u, 2) == generator_F(P, u, 1).rename(swap)


def test_derivation_examples():
    P1 = ArrangementParams(1, 0)
    d = derivation_delta(P1, 0)
    x1, z = Polynomial.gens(P1.vars)
    assert d.coeffs == (x1.scale(2),)
    assert d.coeff_z.is_zero()
    P2 = ArrangementParams(2, 0)
    x1, x2, z = Polynomial.gens(P2.vars)
    d = derivation_delta(P2, 1)
    assert d.coeffs == (
        (x1 * (x1 * x1 - z * z)).scale(Fraction(2, 3)),
        (x2 * (x2 * x2 - z * z)).scale(Fraction(2, 3)),
    )
    e = euler(2)
    assert e.column() == [z, x1, x2]


@pytest.mark.parametrize("ell,m,u", [(e, m, u) for e in range(1, 4) for m in range(3) for u in range(e + 1)])
def test_derivation_homogeneous_and_dehomogenizes(ell, m, u):
    P = ArrangementParams(ell, m)
    d = derivation_delta(P, u)
    deg = 2 * m * ell + 2 * u + 1
    for i, c in enumerate(d.coeffs, start=1):
        assert c.is_homogeneous(deg) and c.degree() == deg
        assert substitute(c, "z", 1) == generator_F(P, u, i)


def test_derivation_json_round_trip():
    d = derivation_delta(ArrangementParams(2, 1), 1)
    assert Derivation.from_dict(d.to_dict()) == d


def test_euler_apply():
    P = ArrangementParams(2, 1)
    for fam in hyperplanes(P):
        for f in fam.factors:
            # the Euler derivation maps every homogeneous linear form to itself
            assert euler(P).apply(f.poly) == f.poly


# -- Phi ------------------------------------------------------------------------


def test_phi_k0():
    for m in range(4):
        for v in range(3):
            want = p_ratio_poly("y", v + m, v, ("y", "z")) * p_ratio_poly("z", v + m, v, ("y", "z"))
            assert phi_poly(m, 0, v, "y", "z") == want


def test_phi_vanishes_beyond_2m():
    for m in range(4):
        assert phi_poly(m, 2 * m + 1, 1, "y", "z").is_zero()


def test_phi_110():
    y, z = Polynomial.gens(("y", "z"))
    assert phi_poly(1, 1, 0, "y", "z") == (z * z - 4) + (y * y - 1)


@pytest.mark.parametrize("m", range(4))
def test_phi_symmetric(m):
    for k in range(2 * m + 1):
        for v in range(4):
            p = phi_poly(m, k, v, "y", "z")
            assert p.rename({"y": "z", "z": "y"}) == p
