"""Closed-form test functions with exact first and second derivatives.

A :class:`SmoothFn` carries ``f, f', f''`` as numpy-vectorised callables, so
it can be fed to the bracket (which needs f, f'), to the Green identity
(which needs f'') and sampled onto quadrature meshes.  Sums and products
propagate derivatives by the Leibniz rule.
"""
from dataclasses import dataclass, field
from typing import Callable
import math

import numpy as np

from . import special_fn as sf


@dataclass(frozen=True)
class SmoothFn:
    f: Callable
    df: Callable
    d2f: Callable
    name: str = "f"
    support: float = math.inf  # f == 0 on [support, inf)
    breakpoints: tuple = field(default=())  # points where f'' may jump
    tau: Callable = None  # (nu, x) -> tau_nu f(x) without cancellation, if known

    def value(self, x):
        return self.f(x)

    def deriv(self, x):
        return self.df(x)

    def second(self, x):
        return self.d2f(x)

    def __call__(self, x):
        return self.f(x)

    def apply_tau(self, nu, x):
        """tau_nu f = -f'' + (nu^2 - 1/4) f / x^2."""
        if self.tau is not None:
            return self.tau(nu, x)
        x = _arr(x)
        return -self.d2f(x) + (nu * nu - 0.25) / x ** 2 * self.f(x)

    def _combine(self, other, f, df, d2f, name, support, tau):
        return SmoothFn(f, df, d2f, name, support,
                        tuple(sorted(set(self.breakpoints) | set(other.breakpoints))), tau)

    def __add__(self, other):
        if not isinstance(other, SmoothFn):
            return NotImplemented
        a, b = self, other
        return self._combine(
            other,
            lambda x: a.f(x) + b.f(x),
            lambda x: a.df(x) + b.df(x),
            lambda x: a.d2f(x) + b.d2f(x),
            f"({a.name} + {b.name})", max(a.support, b.support),
            lambda nu, x: a.apply_tau(nu, x) + b.apply_tau(nu, x))

    def __neg__(self):
        return -1.0 * self

    def __sub__(self, other):
        return self + (-1.0) * other

    def __mul__(self, other):
        a = self
        if isinstance(other, SmoothFn):
            b = other
            return self._combine(
                other,
                lambda x: a.f(x) * b.f(x),
                lambda x: a.df(x) * b.f(x) + a.f(x) * b.df(x),
                lambda x: a.d2f(x) * b.f(x) + 2 * a.df(x) * b.df(x) + a.f(x) * b.d2f(x),
                f"{a.name}*{b.name}", min(a.support, b.support),
                # tau(ab) = (tau a) b - 2 a' b' - a b''
                lambda nu, x: a.apply_tau(nu, x) * b.f(x) - 2 * a.df(x) * b.df(x) - a.f(x) * b.d2f(x))
        c = complex(other) if isinstance(other, complex) else float(other)
        return SmoothFn(lambda x: c * a.f(x), lambda x: c * a.df(x),
                        lambda x: c * a.d2f(x), f"{other:g}*{a.name}",
                        a.support, a.breakpoints, lambda nu, x: c * a.apply_tau(nu, x))

    __rmul__ = __mul__

    def truncated(self, support):
        """Same function, declared to vanish beyond ``support``."""
        return SmoothFn(self.f, self.df, self.d2f, self.name, support, self.breakpoints, self.tau)


def _arr(x):
    return np.asarray(x, dtype=float)


def power(p, name=None):
    """x**p."""
    p = float(p)
    # tau_nu x^p = (nu^2 - (p - 1/2)^2) x^(p-2), zero for p = 1/2 +- nu
    return SmoothFn(
        lambda x: _arr(x) ** p,
        lambda x: p * _arr(x) ** (p - 1),
        lambda x: p * (p - 1) * _arr(x) ** (p - 2),
        name or f"x^{p:g}",
        tau=lambda nu, x: (nu * nu - (p - 0.5) ** 2) * _arr(x) ** (p - 2))


def power_log(p, name=None):
    """x**p * log(x)."""
    p = float(p)

    def d1(x):
        x = _arr(x)
        return x ** (p - 1) * (p * np.log(x) + 1)

    def d2(x):
        x = _arr(x)
        return x ** (p - 2) * (p * (p - 1) * np.log(x) + 2 * p - 1)

    def tau(nu, x):
        x = _arr(x)
        return x ** (p - 2) * ((nu * nu - (p - 0.5) ** 2) * np.log(x) - (2 * p - 1))

    return SmoothFn(lambda x: _arr(x) ** p * np.log(_arr(x)), d1, d2,
                    name or f"x^{p:g}log(x)", tau=tau)


def log_power(alpha, name=None):
    """x**(1/2) * (-log x)**(-alpha) on (0, 1)."""
    a = float(alpha)

    def f(x):
        x = _arr(x)
        return np.sqrt(x) * (-np.log(x)) ** -a

    def d1(x):
        x = _arr(x)
        L = -np.log(x)
        return (0.5 * L ** -a + a * L ** (-a - 1)) / np.sqrt(x)

    def d2(x):
        x = _arr(x)
        L = -np.log(x)
        return (-0.25 * L ** -a + a * (a + 1) * L ** (-a - 2)) / x ** 1.5

    return SmoothFn(f, d1, d2, name or f"x^0.5|log x|^-{a:g}", 1.0)


def polynomial(coeffs, name=None):
    """sum_k coeffs[k] x**k."""
    P = np.polynomial.Polynomial(coeffs)
    d1, d2 = P.deriv(1), P.deriv(2)
    return SmoothFn(lambda x: P(_arr(x)), lambda x: d1(_arr(x)),
                    lambda x: d2(_arr(x)), name or "poly")


def sine(k, name=None):
    k = float(k)
    return SmoothFn(lambda x: np.sin(k * _arr(x)),
                    lambda x: k * np.cos(k * _arr(x)),
                    lambda x: -k * k * np.sin(k * _arr(x)),
                    name or f"sin({k:g}x)")


def constant(c=1.0):
    c = float(c)
    return SmoothFn(lambda x: np.full_like(_arr(x), c),
                    lambda x: np.zeros_like(_arr(x)),
                    lambda x: np.zeros_like(_arr(x)), f"{c:g}")


def cutoff(scale=1.0):
    """C^2 cutoff: 1 on [0, scale/2], 0 on [3 scale/4, inf), quintic smoothstep between."""
    s = float(scale)
    lo, hi = 0.5 * s, 0.75 * s
    width = hi - lo

    def t_of(x):
        return np.clip((_arr(x) - lo) / width, 0.0, 1.0)

    def f(x):
        t = t_of(x)
        return 1.0 - t ** 3 * (10 - 15 * t + 6 * t * t)

    def d1(x):
        t = t_of(x)
        return -30 * t * t * (1 - t) ** 2 / width

    def d2(x):
        t = t_of(x)
        return -60 * t * (1 - t) * (1 - 2 * t) / width ** 2

    return SmoothFn(f, d1, d2, "xi" if s == 1.0 else f"xi_{s:g}", hi, (lo, hi))


def bessel_fn(kind, mu, z, name=None):
    """x ↦ x^{1/2} G_mu(x sqrt(z)) for G in {"J", "Y", "H"} (H = J + iY).

    sqrt(z) is the cut square root (Im >= 0).  The second derivative comes
    from the Bessel equation: f'' = ((mu^2 - 1/4)/x^2 - z) f.
    """
    mu = float(mu)
    zc = sf.CutComplex.coerce(z)
    zv = zc.value
    k = sf.cut_sqrt(zv)
    G = np.vectorize(lambda w: sf.bessel(kind, mu, w), otypes=[complex])
    dG = np.vectorize(lambda w: sf.bessel_deriv(kind, mu, w), otypes=[complex])
    c = mu * mu - 0.25

    def f(x):
        x = _arr(x)
        return np.sqrt(x) * G(x * k)

    def d1(x):
        x = _arr(x)
        return 0.5 / np.sqrt(x) * G(x * k) + np.sqrt(x) * k * dG(x * k)

    def d2(x):
        x = _arr(x)
        return (c / x ** 2 - zv) * f(x)

    def tau(nu, x):
        x = _arr(x)
        return (zv + (nu * nu - mu * mu) / x ** 2) * f(x)

    return SmoothFn(f, d1, d2, name or f"x^0.5 {kind}_{mu:g}(x sqrt z)", tau=tau)
