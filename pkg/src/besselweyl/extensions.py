"""Self-adjoint extensions A_h = ker(Gamma_1 - h Gamma_0), h in R, and
A_inf = ker Gamma_0 (Friedrichs).

Eigenvalues of A_h on (0, b) are the real roots of M_{nu,b}(lam) = h.  The
poles of M (zeros of J_nu(b sqrt(lam))) are the Friedrichs eigenvalues and
M increases from -inf to +inf between consecutive poles, so every gap holds
exactly one root, and (-inf, first pole) holds one more, negative iff
h < h_K = M(0).
"""
from dataclasses import dataclass
import math

from scipy.optimize import brentq

from . import functions as fn
from . import special_fn as sf
from .errors import BracketingError, DomainError, LimitNonConvergenceError, PoleError
from .special_fn import Regime, as_order, bracket_limit_at_zero
from .triplet import remainder_exponents
from .types import ExtensionParam, Method, SpectrumResult, as_interval, as_param
from .weyl import weyl_finite, weyl_limits, weyl_value

KREIN_TOL = 1e-9


def krein_parameter(order, interval):
    """h_K = M(0-); +inf on the half-line at nu = 0 (Krein = Friedrichs there)."""
    return weyl_limits(order, interval)[0]


def _krein_window(h_k, tol):
    return tol * max(1.0, abs(h_k))


@dataclass(frozen=True)
class ExtensionReport:
    h: float
    krein_parameter: float
    is_friedrichs: bool
    is_krein: bool
    nonnegative: bool
    negative_count: int
    krein_tol: float


def classify_extension(order, interval, h, krein_tol=KREIN_TOL):
    """Friedrichs / Krein identification and the nonnegativity threshold h >= h_K.

    ``is_krein`` uses the window |h - h_K| <= krein_tol * max(1, |h_K|).
    """
    p = as_param(h)
    h_k = krein_parameter(order, interval)
    if p.is_infinite:
        return ExtensionReport(p.h, h_k, True, h_k == math.inf, True, 0, krein_tol)
    if h_k == math.inf:
        return ExtensionReport(p.h, h_k, False, False, False, 1, krein_tol)
    is_krein = abs(p.h - h_k) <= _krein_window(h_k, krein_tol)
    nonneg = is_krein or p.h > h_k
    return ExtensionReport(p.h, h_k, False, is_krein, nonneg, 0 if nonneg else 1, krein_tol)


# ---------------------------------------------------------------------------
# negative eigenvalue


def negative_root(order, interval, h, *, max_power=200):
    """The root of M(-x) = h with x > 0, or None when h >= M(0-).

    M(-x) decreases from M(0-) to -inf as x grows, so brackets x in
    [4^(m-1), 4^m] are expanded until the sign changes.
    """
    o = as_order(order)
    iv = as_interval(interval)
    h = float(h)
    h_k = krein_parameter(o, iv)
    if h >= h_k:
        return None

    def g(x):
        return weyl_value(o, iv, complex(-x, 0.0)).real - h

    lo = 4.0 ** -30
    g_lo = g(lo)
    if g_lo <= 0:
        # h is below M(0-) only by a hair: the root sits below 4^-30
        raise BracketingError(f"negative root below {lo:g} (h = {h}, h_K = {h_k})")
    for m in range(-29, max_power + 1):
        hi = 4.0 ** m
        g_hi = g(hi)
        if g_hi < 0:
            x = brentq(g, lo, hi, xtol=1e-300, rtol=1e-15, maxiter=500)
            return -x
        lo, g_lo = hi, g_hi
    raise BracketingError(
        f"no sign change of M(-x) - h on [4^-30, 4^{max_power}]: last M - h = {g_lo:.3e}")


def count_negative_eigenvalues(order, b, h, krein_tol=KREIN_TOL):
    """Number of negative eigenvalues of A_h, found by the negative-axis search.

    Values within the Krein window of h_K count as h = h_K.
    """
    iv = as_interval(b)
    p = as_param(h)
    if p.is_infinite:
        return 0
    h_k = krein_parameter(order, iv)
    if h_k != math.inf and abs(p.h - h_k) <= _krein_window(h_k, krein_tol):
        return 0
    return 0 if negative_root(order, iv, p.h) is None else 1


# ---------------------------------------------------------------------------
# secular equation


def _secular(o, b, h):
    """lam -> numerator of M_{nu,b}(lam) - h; continuous across the poles."""
    if o.regime is Regime.LOG_CASE:
        lb = math.log(b)

        def F(lam):
            s = b * b * lam
            return (sf.bessel_entire_log(s, scaled=True) + (lb - h) * sf.bessel_entire(0, s, scaled=True)).real
        return F
    nu = o.nu
    c = sf.gamma(1 - nu) / (2 * nu * sf.gamma(1 + nu)) * b ** (-2 * nu)

    def F(lam):
        s = b * b * lam
        return (-c * sf.bessel_entire(-nu, s, scaled=True) - h * sf.bessel_entire(nu, s, scaled=True)).real
    return F


def friedrichs_eigenvalues(order, b, k):
    nu = as_order(order).nu
    return [(j / b) ** 2 for j in sf.bessel_zeros(nu, k)]


def _root(F, lo, hi):
    f_lo, f_hi = F(lo), F(hi)
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    if f_lo * f_hi > 0:
        raise BracketingError(f"secular function has equal signs on [{lo:.6g}, {hi:.6g}]: "
                              f"F = ({f_lo:.3e}, {f_hi:.3e})")
    return brentq(F, lo, hi, xtol=1e-15 * max(1.0, abs(hi)), rtol=1e-15, maxiter=500)


def eigenvalues(order, b, h, k, krein_tol=KREIN_TOL):
    """First ``k`` eigenvalues of A_h on (0, b) from the secular equation M(lam) = h.

    Residuals are |M(lam) - h| for finite h and |J_nu(b sqrt(lam))| for h = inf.
    """
    o = as_order(order)
    iv = as_interval(b)
    if not iv.is_finite:
        raise DomainError("eigenvalues need a finite interval (0, b)")
    b = iv.b
    if k < 1:
        raise DomainError("k must be positive")
    p = as_param(h)
    if p.is_infinite:
        poles = friedrichs_eigenvalues(o, b, k)
        res = [abs(sf.bessel_j(o.nu, b * math.sqrt(lam))) for lam in poles]
        return SpectrumResult(tuple(poles), tuple(res), Method.SECULAR, 0)

    h = p.h
    poles = friedrichs_eigenvalues(o, b, k)
    F = _secular(o, b, h)
    h_k = krein_parameter(o, b)
    roots = []
    if abs(h - h_k) <= _krein_window(h_k, krein_tol) and abs(F(0.0)) < 1e-10 * max(1.0, abs(h)):
        roots.append(0.0)
    elif h < h_k:
        roots.append(negative_root(o, b, h))
    else:
        roots.append(_root(F, 0.0, poles[0]))
    for p0, p1 in zip(poles[:-1], poles[1:]):
        if len(roots) == k:
            break
        roots.append(_root(F, p0, p1))
    res = []
    for lam in roots:
        try:
            res.append(abs(weyl_finite(o, b, lam) - h))
        except PoleError:
            res.append(math.inf)
    return SpectrumResult(tuple(roots), tuple(res), Method.SECULAR, sum(r < 0 for r in roots))


# ---------------------------------------------------------------------------
# domain membership


@dataclass(frozen=True)
class Membership:
    member: bool
    residual: float
    condition: str


def _condition(o, iv, extension):
    """(g, description) such that the extension's domain is [f, g]_0 = 0."""
    half = fn.power(0.5)
    if isinstance(extension, str) and extension.lower() == "friedrichs":
        extension = math.inf
    if isinstance(extension, str) and extension.lower() == "krein":
        h_k = krein_parameter(o, iv)
        if h_k == math.inf:
            return _condition(o, iv, math.inf)
        if not iv.is_finite:
            return fn.power(0.5 - o.nu), "[f, x^(1/2-nu)]_0 = 0"
        if o.regime is Regime.LOG_CASE:
            lb = math.log(iv.b)
            return fn.power_log(0.5) - lb * half, f"[f, x^(1/2) log(x/{iv.b:g})]_0 = 0"
        g = iv.b ** (-2 * o.nu) * fn.power(0.5 + o.nu) - fn.power(0.5 - o.nu)
        return g, f"[f, b^(-2nu) x^(1/2+nu) - x^(1/2-nu)]_0 = 0 (b = {iv.b:g})"
    p = as_param(extension)
    if p.is_infinite:
        return fn.power(0.5 + o.nu), "Gamma_0 f = [f, x^(1/2+nu)]_0 = 0"
    h = p.h
    if o.regime is Regime.LOG_CASE:
        return fn.power_log(0.5) - h * half, f"Gamma_1 f - {h:g} Gamma_0 f = 0"
    g = (-1 / (2 * o.nu)) * fn.power(0.5 - o.nu) - h * fn.power(0.5 + o.nu)
    return g, f"Gamma_1 f - {h:g} Gamma_0 f = 0"


def domain_membership(f, order, interval, extension, tol=1e-8):
    """Whether f satisfies the boundary condition of ``extension`` at 0.

    ``extension`` is "friedrichs", "krein", a number h or an
    :class:`ExtensionParam`.  The condition is one bracket limit at 0.
    """
    o = as_order(order)
    iv = as_interval(interval)
    g, desc = _condition(o, iv, extension)
    res = bracket_limit_at_zero(f, g, tol * 1e-2, exponents=remainder_exponents(o))
    if not res.converged:
        raise LimitNonConvergenceError(f"{desc}: bracket limit did not settle ({res.est_error:.2e})")
    r = abs(res.value)
    return Membership(r < tol, r, desc)
