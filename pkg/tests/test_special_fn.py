import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from besselweyl import functions as fn
from besselweyl import special_fn as sf
from besselweyl.errors import BranchError, DomainError

mpmath.mp.dps = 40

orders = st.floats(-1.95, 1.95)
radii = st.floats(-3, 1.9).map(lambda e: 10 ** e)
angles = st.floats(-math.pi, math.pi)


def envelope(z):
    return math.exp(abs(z.imag)) / max(1.0, abs(z)) ** 0.5


@given(orders, radii, angles)
def test_bessel_against_mpmath(mu, r, th):
    z = r * cmath.exp(1j * th)
    for ours, ref in ((sf.bessel_j, mpmath.besselj), (sf.bessel_y, mpmath.bessely),
                      (sf.hankel1, mpmath.hankel1)):
        exact = complex(ref(mu, z))
        assert abs(ours(mu, z) - exact) <= 1e-12 * max(abs(exact), envelope(z))


@pytest.mark.parametrize("mu", [0.0, 1.0, -1.0, 0.5, 0.3])
def test_series_and_asymptotic_paths_agree(mu):
    for z in (26 + 3j, -27 + 1j, 30j, 28.0):
        for f in (sf.bessel_j, sf.bessel_y, sf.hankel1):
            a = f(mu, z, method="series")
            b = f(mu, z, method="asymptotic")
            assert abs(a - b) <= 1e-11 * max(abs(b), envelope(z))


def test_scaled_variants():
    z = 3 + 40j
    assert sf.bessel_j(0.3, z, scaled=True) == pytest.approx(sf.bessel_j(0.3, z) * math.exp(-40), rel=1e-12)
    assert sf.hankel1(0.3, z, scaled=True) == pytest.approx(sf.hankel1(0.3, z) * math.exp(40), rel=1e-12)


def test_half_integer_closed_forms():
    for z in (0.7, 2 + 1j, -3 + 0.5j):
        s = cmath.sqrt(2 / (math.pi * z))
        assert sf.bessel_j(0.5, z) == pytest.approx(s * cmath.sin(z), rel=1e-13)
        assert sf.bessel_j(-0.5, z) == pytest.approx(s * cmath.cos(z), rel=1e-13)


@given(st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False))
def test_cut_sqrt_branch(z):
    r = sf.cut_sqrt(z)
    assert r.imag >= 0
    assert abs(r * r - z) <= 1e-12 * max(1.0, abs(z))
    assert 0 <= sf.cut_arg(z) < 2 * math.pi


def test_cut_power_negative_axis():
    assert sf.cut_power(-4.0, 0.5) == pytest.approx(2j)
    assert sf.cut_power(-8.0, 1 / 3) == pytest.approx(2 * cmath.exp(1j * math.pi / 3))
    with pytest.raises(DomainError):
        sf.cut_power(0.0, 0.5)


def test_cut_complex_sides():
    above = sf.CutComplex.above(2.0)
    assert above.on_cut and above.boundary_side is sf.Side.ABOVE
    assert sf.CutComplex.coerce(2.0).boundary_side is sf.Side.NONE
    assert not sf.CutComplex.coerce(2 + 1j).on_cut


def test_gamma():
    for x in (0.3, 1.7, -0.4, -1.5):
        assert sf.gamma(x) == pytest.approx(float(mpmath.gamma(x)), rel=1e-14)
    for x in (0, -1, -2):
        with pytest.raises(DomainError):
            sf.gamma(x)


def test_order_regimes():
    assert sf.Order(0).regime is sf.Regime.LOG_CASE
    assert sf.Order(0.5).regime is sf.Regime.REGULAR
    assert sf.Order(0.3).regime is sf.Regime.GENERIC
    with pytest.raises(DomainError):
        sf.Order(1.0)


@given(st.floats(-0.99, 1.99), st.complex_numbers(max_magnitude=900, allow_nan=False))
def test_entire_part_reproduces_j(mu, s):
    w = sf.cut_sqrt(s) if s != 0 else 0j
    if abs(w) < 1e-3:
        return
    j = sf.bessel_j(mu, w)
    assert abs(sf.bessel_entire(mu, s) * (w / 2) ** mu - j) <= 1e-12 * max(abs(j), envelope(w))


def test_entire_part_real_on_real_axis():
    for s in (-400.0, -3.0, 0.0, 5.0, 900.0):
        assert sf.bessel_entire(0.3, s).imag == 0
        assert sf.bessel_entire_log(s).imag == 0


@given(st.complex_numbers(min_magnitude=1e-3, max_magnitude=900, allow_nan=False))
def test_entire_log_part(s):
    w = sf.cut_sqrt(s)
    lhs = math.pi / 2 * complex(mpmath.bessely(0, w))
    rhs = (cmath.log(w / 2) + sf.EULER_GAMMA) * complex(mpmath.besselj(0, w)) + sf.bessel_entire_log(s)
    assert abs(lhs - rhs) <= 1e-12 * max(abs(lhs), envelope(w) * (1 + abs(cmath.log(w))))


@pytest.mark.parametrize("mu", [0.0, 0.25, 0.5, 0.9, 1.5])
def test_zeros_against_mpmath(mu):
    zs = sf.bessel_zeros(mu, 8)
    for k, z in enumerate(zs, 1):
        assert z == pytest.approx(float(mpmath.besseljzero(mu, k)), rel=1e-13)


def test_negative_order_zero_is_checked_by_value():
    for z in sf.bessel_zeros(-0.3, 4):
        assert abs(sf.bessel_j(-0.3, z)) < 1e-13


def test_bracket_domain():
    f = fn.power(1.0)
    with pytest.raises(DomainError):
        sf.bracket(f, f, 0.0)


@given(st.floats(0.01, 0.99))
def test_bracket_of_the_two_powers(nu):
    r = sf.bracket_limit_at_zero(fn.power(0.5 + nu), fn.power(0.5 - nu))
    assert r.converged and abs(r.value + 2 * nu) < 1e-12


def _f(mu, z):
    return fn.bessel_fn("J", mu, z)


@given(st.floats(0.02, 0.98), st.floats(0.05, 5.0),
       st.complex_numbers(min_magnitude=0.1, max_magnitude=30, allow_nan=False))
def test_wronskian_recurrences(nu, x, z):
    k = sf.cut_sqrt(z)
    p, m = fn.power(0.5 + nu), fn.power(0.5 - nu)
    cases = [
        (sf.bracket(_f(nu, z), p, x), k * x ** (0.5 + nu) * _f(nu + 1, z).value(x)),
        (sf.bracket(_f(-nu, z), p, x), -k * x ** (0.5 + nu) * _f(-nu - 1, z).value(x)),
        (sf.bracket(_f(nu, z), m, x), -k * x ** (0.5 - nu) * _f(nu - 1, z).value(x)),
        (sf.bracket(_f(-nu, z), m, x), k * x ** (0.5 - nu) * _f(1 - nu, z).value(x)),
    ]
    scale = math.exp(abs((x * k).imag)) * max(1.0, abs(k)) * max(1.0, x) * max(1.0, x ** -nu)
    for lhs, rhs in cases:
        assert abs(lhs - rhs) <= 1e-10 * scale


def test_bessel_deriv_against_mpmath():
    for kind, ref in (("J", mpmath.besselj), ("Y", mpmath.bessely), ("H", mpmath.hankel1)):
        for mu in (0.0, 0.4, -0.7):
            z = 1.3 + 0.4j
            d = complex(mpmath.diff(lambda t: ref(mu, t), z))
            assert sf.bessel_deriv(kind, mu, z) == pytest.approx(d, rel=1e-12)


def test_out_of_range_order():
    with pytest.raises(DomainError):
        sf.bessel_j(2.5, 1.0)
    with pytest.raises(DomainError):
        sf.bessel_y(0.3, 0.0)


def test_branch_error_type():
    assert issubclass(BranchError, ValueError)
