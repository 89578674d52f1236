"""Brute-force oracles: graded quadrature, singular-ODE shooting and
truncated-interval finite differences.

Nothing here uses the Weyl-function formulas; these routines are the
independent side of every cross-check.
"""
from dataclasses import dataclass, field
import math

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import eigh_tridiagonal
from scipy.optimize import brentq

from ._numerics import divergence_suspected, dyadic_sums, geometric_tail, log_mesh, panel_mesh
from .errors import BracketingError, DivergentIntegralError, QuadratureError, ShootingError
from .special_fn import as_order
from .types import Method, SpectrumResult


# ---------------------------------------------------------------------------
# quadrature


@dataclass(frozen=True)
class QuadResult:
    value: complex
    error: float
    tail: complex
    evaluations: int


def _vectorised(f):
    def g(x):
        try:
            y = np.asarray(f(x))
            if y.shape == x.shape:
                return y
        except (TypeError, ValueError):
            pass
        return np.array([f(float(t)) for t in x])
    return g


def _mesh(a, b, grading, split, breakpoints):
    if grading == "log":
        if a != 0:
            raise ValueError("log grading needs a = 0")
        return log_mesh(b, split=split, panels=6 * split)
    return panel_mesh(a, b, breakpoints=breakpoints, levels=60, order=20,
                      panels_per_segment=4 * split, split=split)


def quad_detail(f, a, b, grading="power", tol=1e-10, *, breakpoints=(), max_split=8):
    """Integral of ``f`` over [a, b] with an integrable singularity at ``a``.

    ``grading="power"`` clusters Gauss panels dyadically toward a (for
    |x - a|^(-1+delta)); ``grading="log"`` uses a doubly-exponential map
    (for |log x|^-p / x type behaviour at a = 0).  Panels are doubled until
    two successive values agree to ``tol``; the part below the deepest
    panel is added as a geometric tail.
    """
    if not b > a:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    g = _vectorised(f)
    prev = None
    n_eval = 0
    split = 1
    while split <= max_split:
        mesh = _mesh(a, b, grading, split, breakpoints)
        vals = g(mesh.nodes)
        n_eval += len(mesh.nodes)
        if not np.all(np.isfinite(vals)):
            raise DivergentIntegralError("integrand is not finite on the mesh")
        contribs = dyadic_sums(mesh, vals)
        if divergence_suspected(contribs):
            raise DivergentIntegralError(
                f"dyadic contributions near x = {a} do not decay (last: {abs(contribs[-1]):.3e})")
        tail = geometric_tail(contribs)
        value = contribs.sum() + tail
        if prev is not None:
            err = abs(value - prev)
            if err < tol * max(1.0, abs(value)):
                return QuadResult(value, err, tail, n_eval)
        prev = value
        split *= 2
    raise QuadratureError(f"no convergence to {tol:g} after panel doubling (last change {err:.3e})")


def quad(f, a, b, grading="power", tol=1e-10, **kw):
    """Value of :func:`quad_detail`, as a float when the integrand is real."""
    v = quad_detail(f, a, b, grading, tol, **kw).value
    return float(v.real) if np.isrealobj(v) or v.imag == 0 else complex(v)


# ---------------------------------------------------------------------------
# shooting


@dataclass(frozen=True)
class ShootingSpec:
    """Initial data c1 * y_+ + c2 * y_- at the singular endpoint.

    y_+ ~ x^{1/2+nu} and y_- ~ x^{1/2-nu} (log case: x^{1/2} and
    x^{1/2} log x) are the exact solutions with these leading terms; their
    Frobenius series supply the data at x0.
    """
    order: object
    b: float
    lam: float
    init: tuple = (1.0, 0.0)
    x0: float = None
    rtol: float = 1e-12
    atol: float = 1e-14
    max_step: float = field(default=np.inf)

    def start(self):
        return 1e-4 * self.b if self.x0 is None else self.x0


def frobenius(order, lam, x, which, terms=12):
    """Value and derivative at x of the Frobenius solution ``which`` in {"+", "-"}."""
    nu = as_order(order).nu
    x = float(x)
    if nu == 0:
        # a_k: x^{1/2} series; b_k: companion of the logarithmic solution
        a, bk = [1.0], [0.0]
        for k in range(1, terms):
            a.append(-lam * a[-1] / (4 * k * k))
            bk.append(-(lam * bk[-1] + 4 * k * a[-1]) / (4 * k * k))
        lg = math.log(x)
        y = dy = 0.0
        for k in range(terms):
            s = 0.5 + 2 * k
            if which == "+":
                y += a[k] * x ** s
                dy += a[k] * s * x ** (s - 1)
            else:
                y += a[k] * x ** s * lg + bk[k] * x ** s
                dy += a[k] * (s * x ** (s - 1) * lg + x ** (s - 1)) + bk[k] * s * x ** (s - 1)
        return y, dy
    mu = nu if which == "+" else -nu
    y = dy = 0.0
    c = 1.0
    for k in range(terms):
        if k:
            c *= -lam / (4 * k * (k + mu))
        s = 0.5 + mu + 2 * k
        y += c * x ** s
        dy += c * s * x ** (s - 1)
    return y, dy


def shoot(spec):
    """(u(b), u'(b)) for -u'' + (nu^2 - 1/4) u / x^2 = lam u from series data at x0."""
    nu = as_order(spec.order).nu
    x0 = spec.start()
    c1, c2 = spec.init
    yp, dyp = frobenius(nu, spec.lam, x0, "+")
    ym, dym = frobenius(nu, spec.lam, x0, "-")
    y0 = [c1 * yp + c2 * ym, c1 * dyp + c2 * dym]
    q = nu * nu - 0.25
    lam = spec.lam

    def rhs(x, y):
        return [y[1], (q / (x * x) - lam) * y[0]]

    sol = solve_ivp(rhs, (x0, spec.b), y0, method="DOP853", rtol=spec.rtol,
                    atol=spec.atol * max(1.0, abs(y0[0]) + abs(y0[1])),
                    max_step=spec.max_step)
    if sol.status != 0:
        raise ShootingError(f"integration failed at lam={lam}: {sol.message}")
    return float(sol.y[0, -1]), float(sol.y[1, -1])


def _init_for(nu, boundary):
    """Initial coefficients (c1, c2) for Friedrichs or Gamma_1 = h Gamma_0."""
    if boundary in ("friedrichs", math.inf):
        return (1.0, 0.0)
    h = float(boundary)
    c1 = -h if nu == 0 else 2 * nu * h
    scale = max(1.0, abs(c1))
    return (c1 / scale, 1.0 / scale)


def oracle_eigenvalues(order, b, boundary, k, *, lam_floor=None, dt=0.25):
    """First ``k`` eigenvalues by shooting from the singular end to x = b.

    ``boundary`` is "friedrichs" (principal solution) or a number h, the
    boundary condition Gamma_1 f = h Gamma_0 f at 0.  Eigenvalues are roots
    of lam -> u(b; lam), bracketed by a scan in t = b sqrt|lam|; the
    negative axis is scanned down to ``lam_floor`` (default -(250/b)^2).
    """
    nu = as_order(order).nu
    init = _init_for(nu, boundary)

    def u_at_b(lam):
        return shoot(ShootingSpec(nu, b, lam, init))[0]

    lam_floor = -(250.0 / b) ** 2 if lam_floor is None else lam_floor
    roots = []
    if boundary not in ("friedrichs", math.inf):
        # negative axis: t = b sqrt(-lam), coarse geometric then linear scan
        ts = np.concatenate([np.geomspace(b * math.sqrt(-lam_floor), 1.0, 40), np.linspace(1.0, 0.0, 9)[1:]])
        lams = -(ts / b) ** 2
        roots += _scan_roots(u_at_b, lams)
    t = 0.0
    f_lo = u_at_b(0.0)
    if f_lo == 0.0:
        roots.append(0.0)
    while len(roots) < k:
        lo, hi = (t / b) ** 2, ((t + dt) / b) ** 2
        f_hi = u_at_b(hi)
        if f_lo * f_hi < 0:
            roots.append(brentq(u_at_b, lo, hi, xtol=1e-14 * max(1.0, hi), rtol=1e-15, maxiter=200))
        f_lo = f_hi
        t += dt
        if t > 10 * math.pi * (k + 5):
            raise BracketingError(f"found only {len(roots)} of {k} roots below lam={hi:.4g}")
    roots = sorted(set(roots))[:k]
    res = tuple(abs(u_at_b(r)) for r in roots)
    return SpectrumResult(tuple(roots), res, Method.SHOOTING, sum(r < 0 for r in roots))


def _scan_roots(g, lams):
    out = []
    vals = [g(l) for l in lams]
    for l0, l1, v0, v1 in zip(lams[:-1], lams[1:], vals[:-1], vals[1:]):
        if v0 * v1 < 0:
            out.append(brentq(g, l0, l1, xtol=1e-14 * max(1.0, abs(l0)), rtol=1e-15, maxiter=200))
    return out


# ---------------------------------------------------------------------------
# finite differences


def fd_eigenvalues(order, b, delta, k, *, n=4000, grading=2.0):
    """Lowest ``k`` eigenvalues of the Dirichlet problem on (delta, b).

    Nonuniform 3-point stencil on x = delta + (b - delta) s^grading, made
    symmetric by the diagonal similarity with the dual cell widths; the
    tridiagonal matrix goes to LAPACK bisection with a tiny absolute
    tolerance (the default eps*||T|| would swamp the low eigenvalues, since
    the cells near delta make ||T|| huge).  As delta -> 0 the values
    approach the Friedrichs eigenvalues on (0, b).
    """
    nu = as_order(order).nu
    s = np.linspace(0.0, 1.0, n + 2)
    x = delta + (b - delta) * s ** grading
    h = np.diff(x)
    xi = x[1:-1]
    hl, hr = h[:-1], h[1:]
    w = 0.5 * (hl + hr)
    diag = (1.0 / hl + 1.0 / hr) / w + (nu * nu - 0.25) / xi ** 2
    off = -1.0 / (hr[:-1] * np.sqrt(w[:-1] * w[1:]))
    ev = eigh_tridiagonal(diag, off, eigvals_only=True, select="i", select_range=(0, k - 1),
                          lapack_driver="stebz", tol=1e-300)
    ev = np.sort(ev)
    return SpectrumResult(tuple(float(v) for v in ev), tuple(0.0 for _ in ev), Method.FD,
                          int(np.sum(ev < 0)))
