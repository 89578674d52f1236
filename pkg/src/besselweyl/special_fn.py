"""Bessel functions of real order and complex argument, branch conventions,
and the Wronskian bracket [f, g]_x with its x -> 0 limit.

Evaluation strategy: ascending series for |w| <= SWITCH_RADIUS, Hankel
asymptotic expansions beyond.  The series is summed in extended precision
(mpmath) whenever the cancellation between terms would cost more than a few
digits in double precision; on the real axis near |w| = 25 that loss is
about e^|w| / |J|, far beyond what compensated summation can recover.
"""
from dataclasses import dataclass
from enum import Enum
import cmath
import math

import mpmath

from ._numerics import extrapolate_geometric
from .errors import BesselEvaluationError, DomainError

EULER_GAMMA = 0.57721566490153286061
SWITCH_RADIUS = 25.0
_LN10 = math.log(10.0)


class Regime(Enum):
    LOG_CASE = "log_case"
    GENERIC = "generic"
    REGULAR = "regular"


@dataclass(frozen=True)
class Order:
    """The parameter nu in [0, 1) of the Bessel expression."""
    nu: float

    def __post_init__(self):
        if not 0.0 <= self.nu < 1.0:
            raise DomainError(f"order nu={self.nu} outside [0, 1)")

    @property
    def coupling(self):
        return self.nu ** 2 - 0.25

    @property
    def regime(self):
        if self.nu == 0.0:
            return Regime.LOG_CASE
        if self.nu == 0.5:
            return Regime.REGULAR
        return Regime.GENERIC

    def __float__(self):
        return float(self.nu)


def as_order(order):
    return order if isinstance(order, Order) else Order(float(order))


class Side(Enum):
    NONE = "none"
    ABOVE = "above"


@dataclass(frozen=True)
class CutComplex:
    """Point of the plane slit along [0, +inf).

    ``boundary_side=ABOVE`` marks a point x > 0 as the boundary value from the
    upper half-plane (arg = 0).  Off the positive axis the side is irrelevant.
    """
    re: float
    im: float = 0.0
    boundary_side: Side = Side.NONE

    @classmethod
    def above(cls, x):
        return cls(float(x), 0.0, Side.ABOVE)

    @classmethod
    def coerce(cls, z):
        if isinstance(z, CutComplex):
            return z
        z = complex(z)
        return cls(z.real, z.imag)

    @property
    def value(self):
        return complex(self.re, self.im)

    @property
    def on_cut(self):
        return self.im == 0.0 and self.re > 0.0

    @property
    def arg(self):
        return cut_arg(self.value)

    def sqrt(self):
        return cut_power(self.value, 0.5)

    def power(self, p):
        return cut_power(self.value, p)

    def __complex__(self):
        return self.value


_BELOW_TWO_PI = math.nextafter(2.0 * math.pi, 0.0)


def cut_arg(z):
    """Argument in [0, 2pi); points of the positive axis get 0."""
    z = complex(z)
    a = math.atan2(z.imag, z.real)
    if a < 0.0:
        # stay below 2 pi: points just under the positive axis keep their side
        a = min(a + 2.0 * math.pi, _BELOW_TWO_PI)
    return a


def cut_power(z, p):
    """z**p on the plane cut along R_+, with z**p = x**p for z = x > 0."""
    z = complex(z)
    if z == 0:
        raise DomainError("cut_power: z = 0")
    return cmath.exp(p * complex(math.log(abs(z)), cut_arg(z)))


def cut_sqrt(z):
    """Square root with Im >= 0 (boundary value from above on R_+)."""
    if complex(z) == 0:
        return 0j
    return cut_power(z, 0.5)


def cut_log(z):
    z = complex(z)
    if z == 0:
        raise DomainError("cut_log: z = 0")
    return complex(math.log(abs(z)), cut_arg(z))


def gamma(x):
    """Real Gamma function; raises at the poles 0, -1, -2, ..."""
    x = float(x)
    if x <= 0 and x == math.floor(x):
        raise DomainError(f"Gamma pole at {x}")
    return math.gamma(x)


# ---------------------------------------------------------------------------
# series


class _Float:
    """Arithmetic context for the double-precision series path."""
    pi = math.pi
    euler = EULER_GAMMA
    eps = 1e-17

    @staticmethod
    def c(z):
        return complex(z)

    @staticmethod
    def gamma(x):
        return math.gamma(float(x))

    @staticmethod
    def log(z):
        return cmath.log(z)

    @staticmethod
    def cospi(x):
        return math.cos(math.pi * x)

    @staticmethod
    def sinpi(x):
        return math.sin(math.pi * x)

    @staticmethod
    def expjpi(x):
        return cmath.exp(1j * math.pi * x)


class _MP:
    """Arithmetic context backed by mpmath at the current working precision."""
    @property
    def pi(self):
        return mpmath.mp.pi

    @property
    def euler(self):
        return mpmath.mp.euler

    @property
    def eps(self):
        return float(mpmath.mp.eps) / 4

    @staticmethod
    def c(z):
        return mpmath.mpc(z)

    @staticmethod
    def gamma(x):
        return mpmath.gamma(mpmath.mpf(x))

    @staticmethod
    def log(z):
        return mpmath.log(z)

    @staticmethod
    def cospi(x):
        return mpmath.cospi(mpmath.mpf(x))

    @staticmethod
    def sinpi(x):
        return mpmath.sinpi(mpmath.mpf(x))

    @staticmethod
    def expjpi(x):
        return mpmath.expjpi(mpmath.mpf(x))


_MPCTX = _MP()


def _is_int(mu):
    return mu == math.floor(mu)


def _series_sum(mu, w, ctx):
    """sum_k (-w^2/4)^k / (k! (mu+1)_k), the entire part of J_mu."""
    return _q_sum(mu, -(w * w) / 4, ctx)


def _q_sum(mu, q, ctx):
    s = term = ctx.c(1)
    big = abs(term)
    k = 0
    kmin = math.sqrt(abs(complex(q))) + 2
    while True:
        k += 1
        term = term * q / (k * (mu + k))
        s += term
        a = abs(term)
        big = max(big, a)
        if k > kmin and a <= ctx.eps * min(abs(s), big):
            break
        if k > 2000:
            raise BesselEvaluationError(f"series for J_{mu} did not converge at q={complex(q)}")
    return s


def _j_series(mu, w, ctx):
    if _is_int(mu) and mu < 0:
        n = int(-mu)
        return (-1) ** n * _j_series(-mu, w, ctx)
    return (w / 2) ** mu / ctx.gamma(mu + 1) * _series_sum(mu, w, ctx)


def _harmonic_series(w, ctx, n):
    """sum_k (psi(k+1) + psi(k+1+n)) (-w^2/4)^k / (k! (k+n)!) for n in {0, 1}."""
    q = -(w * w) / 4
    term = ctx.c(1) / math.factorial(n)
    hk = ctx.c(0)  # H_k
    hkn = ctx.c(n)  # H_{k+n}, n in {0, 1}
    s = term * (2 * -ctx.euler + hk + hkn)
    big = abs(s) + 1e-300
    k = 0
    kmin = math.sqrt(abs(complex(q))) + 2
    while True:
        k += 1
        term = term * q / (k * (k + n))
        hk += ctx.c(1) / k
        hkn += ctx.c(1) / (k + n)
        t = term * (2 * -ctx.euler + hk + hkn)
        s += t
        a = abs(t)
        big = max(big, a)
        if k > kmin and a <= ctx.eps * min(abs(s), big):
            break
        if k > 2000:
            raise BesselEvaluationError("Y series did not converge")
    return s


def _y_int_series(n, w, ctx):
    """Y_0 and Y_1 from the logarithmic ascending series."""
    jn = _j_series(n, w, ctx)
    lg = ctx.log(w / 2)
    if n == 0:
        # (2/pi) log(w/2) J0 - (1/pi) sum 2 psi(k+1) (-w^2/4)^k / k!^2
        return (2 / ctx.pi) * lg * jn - (1 / ctx.pi) * _harmonic_series(w, ctx, 0)
    return (-2 / (ctx.pi * w) + (2 / ctx.pi) * lg * jn
            - (1 / ctx.pi) * (w / 2) * _harmonic_series(w, ctx, 1))


def _y_series(mu, w, ctx):
    if _is_int(mu):
        n = int(mu)
        if n < 0:
            return (-1) ** (-n) * _y_int_series(-n, w, ctx)
        return _y_int_series(n, w, ctx)
    return (_j_series(mu, w, ctx) * ctx.cospi(mu) - _j_series(-mu, w, ctx)) / ctx.sinpi(mu)


def _h1_series(mu, w, ctx):
    if _is_int(mu):
        return _j_series(mu, w, ctx) + 1j * _y_series(mu, w, ctx)
    # J + iY = (J_{-mu} - e^{-i pi mu} J_mu) / (i sin(pi mu))
    return (_j_series(-mu, w, ctx) - ctx.expjpi(-mu) * _j_series(mu, w, ctx)) / (1j * ctx.sinpi(mu))


def _digits_lost(kind, mu, w):
    r, y = abs(w), abs(w.imag)
    if kind == "j":
        loss = (r - y) / _LN10
    elif kind == "y":
        loss = (r - y) / _LN10
    else:
        loss = (r + w.imag) / _LN10
    if kind != "j" and not _is_int(mu):
        loss += max(0.0, -math.log10(abs(math.sin(math.pi * mu))))
    return loss


def _eval_series(fn, kind, mu, w):
    loss = _digits_lost(kind, mu, w)
    if loss < 2.5:
        return complex(fn(mu, w, _Float))
    with mpmath.workdps(int(20 + loss)):
        # the order goes in exactly: mu + k rounded in double costs ~1e-16
        # relative, which the cancellation would amplify
        return complex(fn(mpmath.mpf(mu), mpmath.mpc(w), _MPCTX))


# ---------------------------------------------------------------------------
# Hankel asymptotics


def _hankel_coeff_sums(mu, w):
    """P+ = sum i^k a_k / w^k and P- = sum (-i)^k a_k / w^k."""
    m4 = 4.0 * mu * mu
    pp = pm = 1.0 + 0j
    a = 1.0 + 0j
    prev = math.inf
    for k in range(1, 200):
        a = a * (m4 - (2 * k - 1) ** 2) / (k * 8.0 * w)
        mag = abs(a)
        if mag == 0.0:
            break
        if mag > prev:  # asymptotic series started to diverge
            break
        pp += a * (1j ** k)
        pm += a * ((-1j) ** k)
        if mag < 1e-17 * abs(pp):
            break
        prev = mag
    return pp, pm


def _hankel_pair(mu, w, scale_exp):
    """(H1, H2) * exp(-scale_exp) for Re w >= 0 (asymptotic regime)."""
    pp, pm = _hankel_coeff_sums(mu, w)
    omega = w - mu * math.pi / 2 - math.pi / 4
    amp = cmath.sqrt(2.0 / (math.pi * w))
    h1 = amp * cmath.exp(1j * omega - scale_exp) * pp
    h2 = amp * cmath.exp(-1j * omega - scale_exp) * pm
    return h1, h2


def _j_asym(mu, w, scale_exp):
    if w.real < 0:
        # J_mu(w' e^{+-i pi}) = e^{+-i pi mu} J_mu(w')
        s = 1 if w.imag >= 0 else -1
        return cmath.exp(s * 1j * math.pi * mu) * _j_asym(mu, -w, scale_exp)
    h1, h2 = _hankel_pair(mu, w, scale_exp)
    return 0.5 * (h1 + h2)


def _y_asym(mu, w, scale_exp):
    if w.real < 0:
        s = 1 if w.imag >= 0 else -1
        wp = -w
        return (cmath.exp(-s * 1j * math.pi * mu) * _y_asym(mu, wp, scale_exp)
                + s * 2j * math.cos(math.pi * mu) * _j_asym(mu, wp, scale_exp))
    h1, h2 = _hankel_pair(mu, w, scale_exp)
    return (h1 - h2) / 2j


def _h1_asym(mu, w, scale_exp):
    pp, _ = _hankel_coeff_sums(mu, w)
    omega = w - mu * math.pi / 2 - math.pi / 4
    return cmath.sqrt(2.0 / (math.pi * w)) * cmath.exp(1j * omega - scale_exp) * pp


# ---------------------------------------------------------------------------
# public evaluators


def _check_order(mu):
    mu = float(mu)
    if not abs(mu) < 2.0:
        raise DomainError(f"order {mu} outside (-2, 2)")
    return mu


def bessel_j(order, z, *, scaled=False, method="auto"):
    """J_order(z) for real |order| < 2 and complex z (principal branch).

    ``scaled=True`` returns J * exp(-|Im z|).  ``method`` forces "series" or
    "asymptotic" (used to compare the two paths).
    """
    mu = _check_order(order)
    w = complex(z)
    if w == 0:
        if mu == 0:
            return 1.0 + 0j
        if mu > 0 or _is_int(mu):
            return 0j
        raise DomainError(f"J_{mu}(0) is infinite")
    scale = abs(w.imag) if scaled else 0.0
    if method == "series" or (method == "auto" and abs(w) <= SWITCH_RADIUS):
        v = _eval_series(_j_series, "j", mu, w)
        return v * math.exp(-scale) if scale else v
    if _is_int(mu) and mu < 0:
        return (-1) ** int(-mu) * bessel_j(-mu, w, scaled=scaled, method=method)
    return _j_asym(mu, w, scale)


def bessel_y(order, z, *, scaled=False, method="auto"):
    """Y_order(z), second kind; Y_0 from the logarithmic series."""
    mu = _check_order(order)
    w = complex(z)
    if w == 0:
        raise DomainError("Y is singular at z = 0")
    scale = abs(w.imag) if scaled else 0.0
    if method == "series" or (method == "auto" and abs(w) <= SWITCH_RADIUS):
        v = _eval_series(_y_series, "y", mu, w)
        return v * math.exp(-scale) if scale else v
    return _y_asym(mu, w, scale)


def hankel1(order, z, *, scaled=False, method="auto"):
    """J + iY as one combination; decays like exp(-Im z) in the upper half-plane.

    ``scaled=True`` returns H1 * exp(+Im z) (bounded for Im z >= 0).
    """
    mu = _check_order(order)
    w = complex(z)
    if w == 0:
        raise DomainError("H1 is singular at z = 0")
    scale = -w.imag if scaled else 0.0
    if method == "series" or (method == "auto" and abs(w) <= SWITCH_RADIUS):
        v = _eval_series(_h1_series, "h", mu, w)
        return v * math.exp(-scale) if scale else v
    if w.real < 0 and w.imag < 0:
        return bessel_j(mu, w) * math.exp(-scale) + 1j * bessel_y(mu, w) * math.exp(-scale)
    return _h1_asym(mu, w, scale)


_EVALUATORS = {"J": bessel_j, "Y": bessel_y, "H": hankel1}


def bessel(kind, order, z, **kw):
    return _EVALUATORS[kind](order, z, **kw)


def bessel_deriv(kind, order, z):
    """d/dz of J, Y or H1 via the order recurrences, staying inside |order| < 2."""
    mu = float(order)
    w = complex(z)
    g = _EVALUATORS[kind]
    if mu >= 0:
        return g(mu - 1, w) - mu / w * g(mu, w)
    return -g(mu + 1, w) + mu / w * g(mu, w)


# ---------------------------------------------------------------------------
# entire parts


def _entire_series(mu, s, ctx):
    return _q_sum(mu, -s / 4, ctx) / ctx.gamma(mu + 1)


def _entire_log_series(s, ctx):
    q = -s / 4
    term = ctx.c(1)
    hk = ctx.c(0)
    acc = ctx.c(0)
    big = 0.0
    k = 0
    kmin = math.sqrt(abs(complex(q))) + 2
    while True:
        k += 1
        term = term * q / (k * k)
        hk += ctx.c(1) / k
        t = term * hk
        acc -= t
        a = abs(t)
        big = max(big, a)
        if k > kmin and a <= ctx.eps * min(abs(acc), big):
            return acc
        if k > 2000:
            raise BesselEvaluationError("log series did not converge")


def _entire_eval(fn, s, args=()):
    w = cut_sqrt(s) if s != 0 else 0j
    loss = (abs(w) - abs(w.imag)) / _LN10
    if loss < 2.5:
        return complex(fn(*args, complex(s), _Float)), w
    with mpmath.workdps(int(20 + loss)):
        return complex(fn(*[mpmath.mpf(a) for a in args], mpmath.mpc(s), _MPCTX)), w


def bessel_entire(order, s, *, scaled=False):
    """E_mu(s) = sum_k (-s/4)^k / (k! Gamma(mu+k+1)), so J_mu(w) = (w/2)^mu E_mu(w^2).

    Entire in s, hence free of branch choices; real for real s.  With
    ``scaled`` the result is multiplied by exp(-|Im sqrt(s)|).
    """
    mu = _check_order(order)
    s = complex(s)
    w = cut_sqrt(s) if s != 0 else 0j
    if abs(w) <= SWITCH_RADIUS:
        v, _ = _entire_eval(_entire_series, s, (mu,))
        return v * math.exp(-abs(w.imag)) if scaled else v
    v = bessel_j(mu, w, scaled=True) * (w / 2) ** -mu
    return v if scaled else v * math.exp(abs(w.imag))


def bessel_entire_log(s, *, scaled=False):
    """S(s) = sum_{k>=1} (-1)^(k+1) H_k (s/4)^k / k!^2, the entire part of Y_0:

    (pi/2) Y_0(w) = (log(w/2) + gamma) J_0(w) + S(w^2).
    """
    s = complex(s)
    w = cut_sqrt(s) if s != 0 else 0j
    if abs(w) <= SWITCH_RADIUS:
        v, _ = _entire_eval(_entire_log_series, s)
        return v * math.exp(-abs(w.imag)) if scaled else v
    v = (math.pi / 2 * bessel_y(0, w, scaled=True)
         - (cmath.log(w / 2) + EULER_GAMMA) * bessel_j(0, w, scaled=True))
    return v if scaled else v * math.exp(abs(w.imag))


def bessel_zeros(order, count, *, step=0.3):
    """First ``count`` positive zeros of J_order (real order in (-1, 2))."""
    from scipy.optimize import brentq

    mu = _check_order(order)

    def g(t):
        return bessel_entire(mu, t * t).real

    out = []
    t0, g0 = 0.0, g(0.0)
    while len(out) < count:
        t1 = t0 + step
        g1 = g(t1)
        if g0 * g1 < 0:
            out.append(brentq(g, t0, t1, xtol=1e-15, rtol=1e-15, maxiter=200))
        elif g1 == 0.0:
            out.append(t1)
        t0, g0 = t1, g1
    return out


# ---------------------------------------------------------------------------
# brackets


@dataclass(frozen=True)
class BracketValue:
    value: complex
    converged: bool
    est_error: float


def bracket(f, g, x):
    """[f, g]_x = f(x) conj(g'(x)) - f'(x) conj(g(x)).

    ``f`` and ``g`` are anything with ``value(x)`` and ``deriv(x)`` methods
    (see :mod:`besselweyl.functions`).
    """
    if not x > 0:
        raise DomainError(f"bracket needs x > 0, got {x}")
    fv, fd = f.value(x), f.deriv(x)
    gv, gd = g.value(x), g.deriv(x)
    return fv * _conj(gd) - fd * _conj(gv)


def _conj(v):
    return complex(v).conjugate()


def bracket_limit_at_zero(f, g, tol=1e-10, *, x0=1e-2, ratio=0.5, max_terms=40,
                          exponents=(2.0, 4.0)):
    """lim_{x->0} [f, g]_x by Richardson extrapolation along x_j = x0 ratio^j.

    ``exponents`` are the powers of x expected in the remainder; the default
    is extrapolation in x^2.  Raises LimitDivergenceError on divergence.
    """
    name = f"[{getattr(f, 'name', 'f')}, {getattr(g, 'name', 'g')}]_0"
    res = extrapolate_geometric(lambda x: bracket(f, g, x), h0=x0, ratio=ratio,
                                exponents=tuple(exponents), tol=tol,
                                max_terms=max_terms, name=name)
    return BracketValue(res.value, res.converged, res.error)
