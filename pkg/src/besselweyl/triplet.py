"""Boundary triplet (C, Gamma_0, Gamma_1) at the singular endpoint x = 0.

    Gamma_0 f = [f, x^{1/2+nu}]_0
    Gamma_1 f = -(2 nu)^{-1} [f, x^{1/2-nu}]_0     (nu in (0, 1))
    Gamma_1 f = [f, x^{1/2} log x]_0                (nu = 0)

The same maps serve (0, b) and the half-line; on (0, b) the maximal domain
carries the condition f(b) = 0, which kills the bracket at b.
"""
from dataclasses import dataclass
import cmath
import math

import numpy as np

from . import functions as fn
from . import special_fn as sf
from .errors import BranchError, DegenerateNormalizationError, DomainError, LimitNonConvergenceError
from .oracle import quad_detail
from .special_fn import EULER_GAMMA, Regime, as_order, bracket, bracket_limit_at_zero
from .types import IntervalSpec, as_interval

__all__ = [
    "BoundaryValues", "DeficiencyElement", "IntervalSpec", "boundary_values",
    "closed_form_boundary_values", "deficiency_element", "gamma0", "gamma1",
    "green_identity_residual", "green_identity_terms", "remainder_exponents",
    "singular_basis",
]


@dataclass(frozen=True)
class BoundaryValues:
    g0: complex
    g1: complex

    def weyl_ratio(self):
        return self.g1 / self.g0


def remainder_exponents(order):
    """Powers of x in the bracket remainders for solutions of tau y = z y."""
    o = as_order(order)
    if o.regime is Regime.LOG_CASE:
        return (2.0, 2.0, 2.0, 4.0, 4.0, 4.0)
    nu = o.nu
    return tuple(sorted({2 - 2 * nu, 2.0, 2 + 2 * nu, 4 - 2 * nu, 4.0, 4 + 2 * nu}))


def _limit(f, g, order, tol, exponents, what):
    ex = remainder_exponents(order) if exponents is None else exponents
    res = bracket_limit_at_zero(f, g, tol, exponents=ex)
    if not res.converged:
        raise LimitNonConvergenceError(
            f"{what} of {getattr(f, 'name', f)}: bracket limit did not settle "
            f"(change {res.est_error:.2e} > tol {tol:g})")
    return res.value


def gamma0(f, order, tol=1e-9, *, exponents=None):
    o = as_order(order)
    return _limit(f, fn.power(0.5 + o.nu), o, tol, exponents, "Gamma_0")


def gamma1(f, order, tol=1e-9, *, exponents=None):
    o = as_order(order)
    if o.regime is Regime.LOG_CASE:
        return _limit(f, fn.power_log(0.5), o, tol, exponents, "Gamma_1")
    return -_limit(f, fn.power(0.5 - o.nu), o, tol, exponents, "Gamma_1") / (2 * o.nu)


def boundary_values(f, order, tol=1e-9, **kw):
    return BoundaryValues(gamma0(f, order, tol, **kw), gamma1(f, order, tol, **kw))


def singular_basis(order, scale=1.0):
    """(principal, non-principal) singular functions times the cutoff xi.

    nu > 0: x^{1/2+nu} xi, x^{1/2-nu} xi; nu = 0: x^{1/2} xi, x^{1/2} log(x) xi.
    """
    o = as_order(order)
    xi = fn.cutoff(scale)
    if o.regime is Regime.LOG_CASE:
        return fn.power(0.5) * xi, fn.power_log(0.5) * xi
    return fn.power(0.5 + o.nu) * xi, fn.power(0.5 - o.nu) * xi


# ---------------------------------------------------------------------------
# deficiency elements


@dataclass(frozen=True)
class DeficiencyElement:
    order: sf.Order
    interval: IntervalSpec
    z: sf.CutComplex
    fn: fn.SmoothFn

    def evaluator(self, x):
        return complex(self.fn.value(x)), complex(self.fn.deriv(x))

    def __call__(self, x):
        return self.fn.value(x)

    @property
    def name(self):
        return self.fn.name

    def value(self, x):
        return self.fn.value(x)

    def deriv(self, x):
        return self.fn.deriv(x)

    def second(self, x):
        return self.fn.second(x)


def deficiency_element(order, interval, z):
    """Solution of tau f = z f in L^2 with the far-end condition built in.

    Finite b, nu > 0:  x^{1/2}(J_nu(x k) - J_nu(b k)/J_{-nu}(b k) J_{-nu}(x k))
    Finite b, nu = 0:  x^{1/2}(J_0(x k) - J_0(b k)/Y_0(b k) Y_0(x k))
    Half-line:         x^{1/2}(J_nu(x k) + i Y_nu(x k))
    with k = sqrt(z) on the cut plane (Im k >= 0).
    """
    o = as_order(order)
    iv = as_interval(interval)
    zc = sf.CutComplex.coerce(z)
    zv = zc.value
    if zv == 0:
        raise DomainError("deficiency element needs z != 0")
    if not iv.is_finite:
        if zc.on_cut and zc.boundary_side is sf.Side.NONE:
            raise BranchError("z on the cut [0, inf) needs a boundary side")
        f = fn.bessel_fn("H", o.nu, zc, name=f"f_z[H_{o.nu:g}]")
        return DeficiencyElement(o, iv, zc, f)
    k = sf.cut_sqrt(zv)
    w = iv.b * k
    if o.regime is Regime.LOG_CASE:
        den = sf.bessel_y(0, w, scaled=True)
        num = sf.bessel_j(0, w, scaled=True)
        second = fn.bessel_fn("Y", 0.0, zc)
    else:
        den = sf.bessel_j(-o.nu, w, scaled=True)
        num = sf.bessel_j(o.nu, w, scaled=True)
        second = fn.bessel_fn("J", -o.nu, zc)
    if abs(den) < 1e-14 * max(abs(num), 1.0):
        raise DegenerateNormalizationError(f"normalising Bessel value vanishes at b sqrt(z) = {w}")
    ratio = num / den
    f = fn.bessel_fn("J", o.nu, zc) - ratio * second
    return DeficiencyElement(o, iv, zc, f.truncated(iv.b))


def closed_form_boundary_values(order, interval, z):
    """Gamma_0 f_z and Gamma_1 f_z for the deficiency elements above, in closed form."""
    o = as_order(order)
    iv = as_interval(interval)
    zv = sf.CutComplex.coerce(z).value
    nu = o.nu
    k = sf.cut_sqrt(zv)
    if iv.is_finite:
        w = iv.b * k
        if o.regime is Regime.LOG_CASE:
            r = sf.bessel_j(0, w, scaled=True) / sf.bessel_y(0, w, scaled=True)
            g0 = 2 / math.pi * r
            g1 = 1 - 2 / math.pi * r * (cmath.log(k / 2) + EULER_GAMMA)
            return BoundaryValues(g0, g1)
        r = sf.bessel_j(nu, w, scaled=True) / sf.bessel_j(-nu, w, scaled=True)
        g0 = 2 ** (1 + nu) / sf.gamma(-nu) * r * sf.cut_power(zv, -nu / 2)
        g1 = sf.cut_power(zv, nu / 2) / (nu * 2 ** nu * sf.gamma(nu))
        return BoundaryValues(g0, g1)
    if o.regime is Regime.LOG_CASE:
        return BoundaryValues(-2j / math.pi, 1 + 2j / math.pi * (cmath.log(k / 2) + EULER_GAMMA))
    s = math.sin(nu * math.pi)
    g0 = -1j * nu * 2 ** (nu + 1) / (s * sf.gamma(1 - nu)) * sf.cut_power(zv, -nu / 2)
    g1 = (1 + 1j * math.cos(nu * math.pi) / s) * sf.cut_power(zv, nu / 2) / (2 ** nu * sf.gamma(1 + nu))
    return BoundaryValues(g0, g1)


# ---------------------------------------------------------------------------
# Green identity


def _upper_limit(f, g, interval):
    X = min(getattr(f, "fn", f).support, getattr(g, "fn", g).support, interval.b)
    if math.isfinite(X):
        return X
    # both decay (half-line deficiency elements): go out until the bracket is negligible
    X = 1.0
    while abs(bracket(f, g, X)) > 1e-15 and X < 1e4:
        X *= 2
    return X


def green_identity_terms(f, g, order, interval, tol=1e-9):
    """(lhs, rhs) of (A*f, g) - (f, A*g) = Gamma_1 f conj(Gamma_0 g) - Gamma_0 f conj(Gamma_1 g).

    The left side is integrated by graded quadrature from 0, using the
    analytic tau-action of the test functions where they provide one.
    """
    o = as_order(order)
    iv = as_interval(interval)
    X = _upper_limit(f, g, iv)

    ff, gf = getattr(f, "fn", f), getattr(g, "fn", g)
    nu = o.nu

    def integrand(x):
        return ff.apply_tau(nu, x) * np.conj(gf.value(x)) - ff.value(x) * np.conj(gf.apply_tau(nu, x))

    bps = tuple(p for p in set(ff.breakpoints) | set(gf.breakpoints) if 0 < p < X)
    lhs = complex(quad_detail(integrand, 0.0, X, tol=tol * 1e-2, breakpoints=bps).value)
    bf = boundary_values(f, o, tol)
    bg = boundary_values(g, o, tol)
    rhs = bf.g1 * np.conj(bg.g0) - bf.g0 * np.conj(bg.g1)
    return lhs, complex(rhs)


def green_identity_residual(f, g, order, interval, tol=1e-9):
    lhs, rhs = green_identity_terms(f, g, order, interval, tol)
    return abs(lhs - rhs)
