"""Weyl functions of the Bessel triplet, their limits on the negative axis,
boundary densities and the Nevanlinna integral representation.

On (0, b) the Weyl function is written through the entire functions
E_mu(s) = (w/2)^-mu J_mu(w), s = w^2 = b^2 z:

    M_{nu,b}(z) = -K b^{-2nu} E_{-nu}(b^2 z) / E_nu(b^2 z),   K = Gamma(1-nu) / (2 nu Gamma(1+nu))
    M_{0,b}(z)  = log b + S(b^2 z) / E_0(b^2 z)

which is algebraically the Bessel-ratio formula but needs no branch of
sqrt(z), so z = 0 and the negative axis are ordinary points.
"""
from dataclasses import dataclass, field
import cmath
import math

import numpy as np

from . import special_fn as sf
from ._numerics import extrapolate_geometric
from .errors import (BranchError, DomainError, LimitDivergenceError, LimitNonConvergenceError, PoleError,
                     QuadratureError)
from .oracle import quad_detail
from .special_fn import EULER_GAMMA, Regime, as_order
from .types import IntervalSpec, as_interval

POLE_THRESHOLD = 1e-13


@dataclass(frozen=True)
class WeylEval:
    z: sf.CutComplex
    value: complex
    interval: IntervalSpec
    order: sf.Order


def halfline_constant(order):
    """C_nu = Gamma(1-nu) / (2 nu 4^nu Gamma(1+nu)), so M_{nu,inf}(z) = e^{i(1-nu)pi} C_nu z^nu."""
    nu = as_order(order).nu
    return sf.gamma(1 - nu) / (2 * nu * 4 ** nu * sf.gamma(1 + nu))


def _nearest_pole(nu, b, w):
    zeros = sf.bessel_zeros(nu, max(2, int(abs(w) / math.pi) + 3))
    j = min(zeros, key=lambda t: abs(t - w))
    return (j / b) ** 2


def weyl_finite(order, b, z):
    """M_{nu,b}(z); raises PoleError within relative 1e-13 of an eigenvalue of ker Gamma_0."""
    o = as_order(order)
    if not b > 0:
        raise DomainError(f"b must be positive, got {b}")
    zc = sf.CutComplex.coerce(z)
    zv = zc.value
    s = b * b * zv
    w = sf.cut_sqrt(s) if s != 0 else 0j
    if o.regime is Regime.LOG_CASE:
        e0 = sf.bessel_entire(0, s, scaled=True)
        S = sf.bessel_entire_log(s, scaled=True)
        if abs(e0) < POLE_THRESHOLD * abs(S):
            raise PoleError(f"z = {zv} is at a pole of M_0,{b:g}", _nearest_pole(0.0, b, w))
        m = math.log(b) + S / e0
    else:
        nu = o.nu
        ep = sf.bessel_entire(nu, s, scaled=True)
        em = sf.bessel_entire(-nu, s, scaled=True)
        if abs(ep) * max(1.0, abs(s / 4) ** nu) < POLE_THRESHOLD * abs(em):
            raise PoleError(f"z = {zv} is at a pole of M_{nu:g},{b:g}", _nearest_pole(nu, b, w))
        k = sf.gamma(1 - nu) / (2 * nu * sf.gamma(1 + nu))
        m = -k * b ** (-2 * nu) * em / ep
    if zv.imag == 0:
        m = complex(m.real, 0.0)
    return complex(m)


def weyl_halfline(order, z):
    """M_{nu,inf}(z) = e^{i(1-nu)pi} C_nu z^nu, or -log(sqrt(z)/2) + i pi/2 - gamma at nu = 0."""
    o = as_order(order)
    zc = sf.CutComplex.coerce(z)
    if zc.on_cut and zc.boundary_side is sf.Side.NONE:
        raise BranchError(f"z = {zc.value} lies on the cut; pass CutComplex.above(x)")
    zv = zc.value
    if o.regime is Regime.LOG_CASE:
        if zv == 0:
            raise DomainError("M_0,inf has a logarithmic singularity at z = 0")
        m = -cmath.log(sf.cut_sqrt(zv) / 2) + 1j * math.pi / 2 - EULER_GAMMA
    else:
        if zv == 0:
            return 0j
        m = cmath.exp(1j * (1 - o.nu) * math.pi) * halfline_constant(o) * sf.cut_power(zv, o.nu)
    if zv.imag == 0 and zv.real < 0:
        m = complex(m.real, 0.0)
    return complex(m)


def weyl(order, interval, z):
    """Dispatch on the interval; returns a :class:`WeylEval`."""
    o = as_order(order)
    iv = as_interval(interval)
    zc = sf.CutComplex.coerce(z)
    v = weyl_finite(o, iv.b, zc) if iv.is_finite else weyl_halfline(o, zc)
    return WeylEval(zc, v, iv, o)


def weyl_value(order, interval, z):
    return weyl(order, interval, z).value


def weyl_limits(order, interval):
    """(M(0-), M(-inf)) in closed form; +inf / -inf as floats."""
    o = as_order(order)
    iv = as_interval(interval)
    if iv.is_finite:
        m0 = math.log(iv.b) if o.nu == 0 else -iv.b ** (-2 * o.nu) / (2 * o.nu)
    else:
        m0 = math.inf if o.nu == 0 else 0.0
    return m0, -math.inf


def numerical_limit_at_zero(order, interval, tol=1e-12):
    """lim M(-x), x -> 0+, extrapolated from samples at x = 4^-j.

    M is analytic at 0 on (0, b); on the half-line M(-x) = -C_nu x^nu is a
    single power, and at nu = 0 it grows like -log(x)/2, reported as +inf.
    """
    o = as_order(order)
    iv = as_interval(interval)
    if iv.is_finite:
        exps = (1.0, 2.0, 3.0, 4.0, 5.0, 6.0)
    elif o.nu > 0:
        exps = (o.nu,)
    else:
        try:
            extrapolate_geometric(lambda x: weyl_value(o, iv, complex(-x, 0.0)).real,
                                  h0=1e-2, ratio=0.25, exponents=(1.0,), tol=tol)
        except LimitDivergenceError:
            return math.inf
        raise LimitNonConvergenceError("M_0,inf(0-) unexpectedly finite")
    res = extrapolate_geometric(lambda x: weyl_value(o, iv, complex(-x, 0.0)).real,
                                h0=1e-2, ratio=0.25, exponents=exps, tol=tol)
    if not res.converged:
        raise LimitNonConvergenceError(f"M(0-) extrapolation error {res.error:.2e}")
    return float(res.value.real)


def weyl_on_negative_axis(order, interval, x):
    """Real value M(-x) for x > 0 (below the spectrum of ker Gamma_0)."""
    if not x > 0:
        raise DomainError("x must be positive")
    return weyl_value(order, interval, complex(-x, 0.0)).real


# ---------------------------------------------------------------------------
# boundary density


def density_closed_form(order, t):
    """Sigma'_nu(t) = t^nu / (2^{2nu+1} Gamma(1+nu)^2) for t > 0, zero for t < 0."""
    nu = as_order(order).nu
    if t < 0:
        return 0.0
    if t == 0:
        return 0.5 if nu == 0 else 0.0
    return t ** nu / (2 ** (2 * nu + 1) * sf.gamma(1 + nu) ** 2)


def stated_density(order, t):
    """Derivative of the stated spectral function t^{nu+1} / (2^{2nu+1} Gamma(1+nu)^2).

    Differs from :func:`density_closed_form` by the factor (nu + 1); kept to
    report the discrepancy.
    """
    nu = as_order(order).nu
    return (nu + 1) * density_closed_form(order, t)


@dataclass(frozen=True)
class DensitySample:
    t: float
    sigma_prime: float
    eps_used: tuple
    est_error: float
    closed_form: float

    def __post_init__(self):
        if self.sigma_prime < 0:
            raise ValueError("density must be nonnegative")


DEFAULT_EPS = tuple(1e-2 * 4.0 ** -k for k in range(7))


def _richardson(values, ratio, exponents):
    """Neville-type table for values at h_k = h0 ratio^k; returns (best, error)."""
    rows = []
    for k, v in enumerate(values):
        row = [v]
        for m in range(1, k + 1):
            q = ratio ** exponents[m - 1]
            row.append((row[m - 1] - q * rows[k - 1][m - 1]) / (1 - q))
        rows.append(row)
    best = rows[-1][-1]
    err = abs(rows[-1][-1] - rows[-1][-2]) if len(rows[-1]) > 1 else math.inf
    return best, err


def spectral_density(order, t, eps_schedule=DEFAULT_EPS, tol=1e-8):
    """Fatou limit (1/pi) Im M_{nu,inf}(t + i eps), Richardson-extrapolated in eps."""
    o = as_order(order)
    eps = tuple(float(e) for e in eps_schedule)
    if len(eps) < 2:
        raise ValueError("need at least two eps values")
    ratio = eps[1] / eps[0]
    if any(abs(b / a - ratio) > 1e-12 for a, b in zip(eps[:-1], eps[1:])):
        raise ValueError("eps schedule must be geometric")
    vals = [weyl_halfline(o, complex(t, e)).imag / math.pi for e in eps]
    if t == 0 and o.nu > 0:
        exps = [o.nu * (m + 1) for m in range(len(eps))]  # Im M(i eps) is a pure power of eps
    else:
        exps = list(range(1, len(eps) + 1))
    best, err = _richardson(vals, ratio, exps)
    scale = max(1.0, abs(best))
    if err > tol * scale:
        raise LimitNonConvergenceError(f"Fatou limit at t={t}: extrapolation error {err:.2e}")
    if t < 0 or abs(best) <= tol * scale:
        best = 0.0 if abs(best) <= tol * scale else best
    if best < 0:
        raise LimitNonConvergenceError(f"negative density {best:.3e} at t={t}")
    return DensitySample(float(t), float(best), eps, float(err), density_closed_form(o, t))


# ---------------------------------------------------------------------------
# Nevanlinna representation


def representation_constant(order):
    """Real constant A in M(z) = A + D int_0^inf (1/(t-z) - t/(1+t^2)) t^nu dt.

    nu > 0: A = -C_nu cos(nu pi/2), from
    int_0^inf t^nu (1/(t-z) - t/(1+t^2)) dt = (pi / sin(pi nu)) (cos(pi nu/2) - (-z)^nu);
    nu = 0: A = log 2 - gamma (evaluate at z = i).
    """
    o = as_order(order)
    if o.nu == 0:
        return math.log(2) - EULER_GAMMA
    return -halfline_constant(o) * math.cos(o.nu * math.pi / 2)


def stated_constant(order):
    """The constant as stated alongside the representation (A_0 carries an extra -pi/4)."""
    o = as_order(order)
    if o.nu == 0:
        return -math.pi / 4 - EULER_GAMMA + math.log(2)
    return -halfline_constant(o) * math.cos(o.nu * math.pi / 2)


@dataclass(frozen=True)
class QuadSpec:
    cutoff: float = 1e4
    tol: float = 1e-11


@dataclass(frozen=True)
class NevanlinnaFit:
    fitted_constant: float
    quadrature_error: float
    stated_constant: float
    discrepancy: float
    imag_residual: float = 0.0
    z: complex = 0j
    integral: complex = field(default=0j)


def _tail(nu, z, T):
    """int_T^inf (1/(t-z) - t/(1+t^2)) t^nu dt by the 1/t expansion (|z| < T)."""
    out = 0j
    zk = 1.0 + 0j
    for k in range(1, 400):
        zk *= z
        ck = zk - ((-1) ** (k // 2) if k % 2 == 0 else 0.0)
        term = ck * T ** (nu - k) / (k - nu)
        out += term
        if abs(term) < 1e-18 * max(1.0, abs(out)) and k > 2:
            return out
    raise QuadratureError("tail expansion did not converge (|z| too close to the cutoff)")


def representation_integral(order, z, quad_spec=QuadSpec()):
    """(value, error estimate) of D int_0^inf (1/(t-z) - t/(1+t^2)) t^nu dt."""
    o = as_order(order)
    nu = o.nu
    z = complex(z)
    if z.imag == 0:
        raise DomainError("representation integral needs Im z != 0")
    T = quad_spec.cutoff
    if abs(z) > 0.5 * T:
        raise DomainError(f"|z| = {abs(z):g} too large for cutoff {T:g}")
    D = density_closed_form(o, 1.0)  # = 1 / (2^{2nu+1} Gamma(1+nu)^2)

    def g(t):
        return (1.0 / (t - z) - t / (1.0 + t * t)) * t ** nu

    bps = set(np.geomspace(max(abs(z), 1e-3), T, 16)[:-1])
    if z.real > 0:
        bps |= {max(z.real - abs(z.imag), 0.0), z.real, z.real + abs(z.imag)}
    bps = tuple(sorted(p for p in bps if 0 < p < T))
    r = quad_detail(g, 0.0, T, tol=quad_spec.tol, breakpoints=bps)
    val = D * (r.value + _tail(nu, z, T))
    return complex(val), D * r.error


def nevanlinna_reconstruct(order, z, quad_spec=QuadSpec()):
    """Fit the real constant of the representation at z and compare with the stated one."""
    o = as_order(order)
    integral, err = representation_integral(o, z, quad_spec)
    m = weyl_halfline(o, z)
    diff = m - integral
    a = float(diff.real)
    s = stated_constant(o)
    return NevanlinnaFit(a, float(err), s, a - s, float(abs(diff.imag)), complex(z), integral)


# ---------------------------------------------------------------------------
# b -> inf


@dataclass(frozen=True)
class ConvergenceRow:
    b: float
    gap: float
    flagged: bool = False
    note: str = ""


def convergence_table(order, z, b_list):
    """Rows (b, |M_{nu,b}(z) - M_{nu,inf}(z)|); pole collisions give flagged rows."""
    o = as_order(order)
    bs = [float(b) for b in b_list]
    if any(b2 <= b1 for b1, b2 in zip(bs[:-1], bs[1:])):
        raise ValueError("b_list must be increasing")
    m_inf = weyl_halfline(o, z)
    rows = []
    for b in bs:
        try:
            rows.append(ConvergenceRow(b, abs(weyl_finite(o, b, z) - m_inf)))
        except PoleError as e:
            rows.append(ConvergenceRow(b, math.nan, True, f"pole near lambda={e.nearest_eigenvalue:.6g}"))
    return rows


def strictly_decreasing(rows):
    gaps = [r.gap for r in rows if not r.flagged]
    return all(b < a for a, b in zip(gaps[:-1], gaps[1:]))
