"""Quadratic forms of the Bessel operator and the Hardy-type estimates behind them.

    s_{nu,b}[u] = int |u'|^2 + (nu^2 - 1/4) int |u|^2 / x^2        (nu in (0, 1))
    s_{0,b}[u]  = int |u' - u / (2x)|^2                             (nu = 0)

Test functions live on composite Gauss meshes graded toward x = 0
(:class:`GridFunction`); every integral goes through the dyadic divergence
audit before a geometric tail is added.
"""
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable
import math

import numpy as np

from ._numerics import divergence_suspected, dyadic_sums, gauss_legendre, geometric_tail, log_mesh, panel_mesh
from .errors import DivergentIntegralError, DomainError
from .oracle import quad
from .special_fn import Regime, as_order
from .types import as_interval


@lru_cache(maxsize=None)
def _reference_matrices(order):
    """(D, S) on the Gauss nodes of [-1, 1]: differentiation and integration from -1."""
    t, _ = gauss_legendre(order)
    L = np.polynomial.legendre
    V = L.legvander(t, order - 1)
    Vd = np.column_stack([L.legval(t, L.legder(np.eye(order)[j])) for j in range(order)])
    Vi = np.column_stack([L.legval(t, L.legint(np.eye(order)[j], lbnd=-1)) for j in range(order)])
    Vinv = np.linalg.inv(V)
    return Vd @ Vinv, Vi @ Vinv


@dataclass(frozen=True)
class GridFunction:
    """A function sampled at the nodes of a graded Gauss mesh on (0, X]."""
    mesh: object
    values: np.ndarray
    derivs: np.ndarray
    second: np.ndarray = None
    grading: str = "power"
    name: str = "u"

    def __post_init__(self):
        if np.any(np.diff(self.nodes) <= 0):
            raise ValueError("grid nodes must be strictly increasing")

    @property
    def nodes(self):
        return self.mesh.nodes

    @property
    def weights(self):
        return self.mesh.weights

    @property
    def end(self):
        return float(self.mesh.edges[-1])

    @classmethod
    def sample(cls, f, X=None, *, grading="power", breakpoints=(), levels=60, order=20,
               panels=8, depth=12):
        """Sample a :class:`~besselweyl.functions.SmoothFn` (f, f', f'') on (0, X].

        X defaults to the support of f.  ``grading="log"`` uses the
        doubly-exponential mesh for |log x|-type behaviour at 0.
        """
        X = f.support if X is None else X
        if not 0 < X < math.inf:
            raise DomainError("need a finite right end X")
        if grading == "log":
            mesh = log_mesh(X, depth=depth, order=order, panels=panels)
        else:
            bps = tuple(set(breakpoints) | set(getattr(f, "breakpoints", ())))
            mesh = panel_mesh(0.0, X, breakpoints=bps, levels=levels, order=order, panels_per_segment=panels)
        x = mesh.nodes
        with np.errstate(over="ignore", divide="ignore"):
            # f'' may overflow at the deepest log-mesh nodes; forms never use it there
            d2 = np.asarray(f.second(x))
        return cls(mesh, np.asarray(f.value(x)), np.asarray(f.deriv(x)), d2,
                   grading, getattr(f, "name", "u"))

    @classmethod
    def from_values(cls, mesh, values, derivs=None, *, grading="power", name="u"):
        """Grid function from node values; missing derivatives come from
        per-panel spectral differentiation."""
        values = np.asarray(values)
        if derivs is None:
            derivs = spectral_derivative(mesh, values)
        return cls(mesh, values, np.asarray(derivs), None, grading, name)

    def integrate(self, integrand, what="integral"):
        """int_0^X of node values ``integrand`` with the dyadic divergence audit."""
        contribs = dyadic_sums(self.mesh, np.asarray(integrand))
        if divergence_suspected(contribs):
            raise DivergentIntegralError(
                f"{what} of {self.name}: dyadic contributions near 0 do not decay")
        return contribs.sum() + geometric_tail(contribs)

    def cumulative(self, integrand):
        """int_0^{x_i} of ``integrand`` at every node (spectral per panel)."""
        return cumulative_integral(self.mesh, np.asarray(integrand))


def _panel_scale(mesh):
    """dx/dt at each node for the affine-or-mapped panel coordinate t in [-1, 1]."""
    _, gw = gauss_legendre(mesh.order)
    return mesh.weights / np.tile(gw, len(mesh.nodes) // mesh.order)


def spectral_derivative(mesh, values):
    D, _ = _reference_matrices(mesh.order)
    p = mesh.order
    v = np.asarray(values).reshape(-1, p)
    dv = (v @ D.T).ravel()
    return dv / _panel_scale(mesh)


def cumulative_integral(mesh, integrand):
    """int_0^{x_i} at every node: spectral within panels, geometric tail below the mesh."""
    _, S = _reference_matrices(mesh.order)
    _, gw = gauss_legendre(mesh.order)
    p = mesh.order
    integrand = np.asarray(integrand)
    g = (integrand * _panel_scale(mesh)).reshape(-1, p)
    within = g @ S.T
    offsets = np.concatenate([[0.0], np.cumsum(g @ gw)[:-1]])
    below = geometric_tail(dyadic_sums(mesh, integrand))
    return (within + offsets[:, None]).ravel() + below


# ---------------------------------------------------------------------------
# forms


def kinetic(u):
    return float(u.integrate(np.abs(u.derivs) ** 2, "int |u'|^2"))


def inverse_square(u):
    return float(u.integrate(np.abs(u.values) ** 2 / u.nodes ** 2, "int |u|^2/x^2"))


def _check_interval(iv, u):
    if iv.is_finite and u.end > iv.b * (1 + 1e-12):
        raise DomainError(f"grid extends to {u.end:g} beyond b = {iv.b:g}")


def form_value(order, interval, u):
    """s_{nu,b}[u] (or the half-line form) by graded quadrature."""
    o = as_order(order)
    iv = as_interval(interval)
    _check_interval(iv, u)
    x = u.nodes
    if o.regime is Regime.LOG_CASE:
        return float(u.integrate(np.abs(u.derivs - u.values / (2 * x)) ** 2, "s_0"))
    c = o.nu ** 2 - 0.25
    return float(u.integrate(np.abs(u.derivs) ** 2 + c * np.abs(u.values) ** 2 / x ** 2,
                             f"s_{o.nu:g}"))


@dataclass(frozen=True)
class PotentialSpec:
    """q with q(x) >= beta / x^2 - mu (beta > -1/4, mu >= 0)."""
    q: Callable
    beta: float
    mu: float = 0.0

    def __post_init__(self):
        if not self.beta > -0.25:
            raise DomainError("beta must exceed -1/4")
        if self.mu < 0:
            raise DomainError("mu must be nonnegative")

    def audit(self, x):
        x = np.asarray(x, dtype=float)
        qv = np.asarray(self.q(x), dtype=float)
        lower = self.beta / x ** 2 - self.mu
        bad = qv < lower - 1e-12 * np.maximum(1.0, np.abs(lower))
        if np.any(bad):
            i = int(np.argmax(bad))
            raise DomainError(f"q({x[i]:.3g}) = {qv[i]:.6g} below beta/x^2 - mu = {lower[i]:.6g}")
        return True


def form_general_q(pot, u):
    """int |u'|^2 + int q |u|^2 for a potential satisfying the lower bound."""
    pot.audit(u.nodes)
    q = np.asarray(pot.q(u.nodes), dtype=float)
    return float(u.integrate(np.abs(u.derivs) ** 2 + q * np.abs(u.values) ** 2, "t_q"))


@dataclass(frozen=True)
class HardyResult:
    lhs: float
    rhs: float
    holds: bool


def hardy_check(u, *, zero_tol=1e-6):
    """int |u|^2 / x^2 <= 4 int |u'|^2 on the grid of u."""
    scale = max(np.max(np.abs(u.values)), 1e-300)
    if abs(u.values[0]) > zero_tol * scale:
        raise DomainError(f"{u.name} does not vanish at 0 (u(x_min) = {u.values[0]:.3g})")
    rhs = 4 * kinetic(u)
    try:
        lhs = inverse_square(u)
    except DivergentIntegralError:
        return HardyResult(math.inf, rhs, False)
    return HardyResult(lhs, rhs, lhs <= rhs * (1 + 1e-8))


# ---------------------------------------------------------------------------
# homogeneous kernels


@dataclass(frozen=True)
class KernelSlice:
    """t -> K(1, t) of a kernel homogeneous of degree -1; zero beyond ``support``."""
    K1: Callable
    support: float = math.inf
    breakpoints: tuple = field(default=())

    def __mul__(self, c):
        k = self.K1
        return KernelSlice(lambda t: c * k(t), self.support, self.breakpoints)

    __rmul__ = __mul__


def homogeneous_kernel_norm(k, p, tol=1e-11):
    """int_0^inf |K(1, t)| t^(-1/p) dt, the L^p norm of the integral operator."""
    if not 1 < p < math.inf:
        raise DomainError("p must lie in (1, inf)")
    a = 1.0 / p
    top = min(k.support, 1.0)
    bps = tuple(t for t in k.breakpoints if 0 < t < top)
    val = quad(lambda t: np.abs(k.K1(t)) * t ** -a, 0.0, top, tol=tol, breakpoints=bps)
    if k.support > 1.0:
        # t = 1/s on (1, support): |K(1, 1/s)| s^(a - 2) ds on (1/support, 1)
        lo = 1.0 / k.support
        bps = tuple(1.0 / t for t in k.breakpoints if 1 < t < k.support)
        if lo == 0.0:
            val += quad(lambda s: np.abs(k.K1(1.0 / s)) * s ** (a - 2), 0.0, 1.0, tol=tol, breakpoints=bps)
        else:
            val += quad(lambda s: np.abs(k.K1(1.0 / s)) * s ** (a - 2), lo, 1.0, tol=tol,
                        breakpoints=bps)
    return float(val)


def qi2_matrix(n, grading=6.0):
    """Symmetrised matrix of (Q I^2 u)(x) = x^-2 int_0^x (x - t) u(t) dt on (0, 1].

    Cells [e_{j-1}, e_j] with e_j = (j/n)^grading, collocation at midpoints
    m_i; the diagonal cell is integrated exactly up to m_i.  The similarity
    W^(1/2) A W^(-1/2) with cell widths W makes the Euclidean norm the
    L^2(0, 1) norm.
    """
    if n < 2:
        raise DomainError("n too small")
    e = (np.arange(n + 1) / n) ** grading
    w = np.diff(e)
    m = 0.5 * (e[:-1] + e[1:])
    A = (m[:, None] - m[None, :]) * w[None, :] / m[:, None] ** 2
    A = np.tril(A, -1)
    A[np.diag_indices(n)] = (m - e[:-1]) ** 2 / (2 * m ** 2)
    sw = np.sqrt(w)
    return sw[:, None] * A / sw[None, :]


def qi2_matrix_norm(n, grading=6.0, *, tol=1e-10, max_iter=20000):
    """Top singular value of :func:`qi2_matrix` by power iteration on B^T B.

    Approaches 4/3 from below as n grows; the maximisers behave like
    x^(-1/2), so convergence in n is slow.
    """
    if n < 64:
        raise DomainError("n must be at least 64")
    B = qi2_matrix(n, grading)
    v = np.ones(n) / math.sqrt(n)
    sigma = 0.0
    for _ in range(max_iter):
        y = B.T @ (B @ v)
        s_new = math.sqrt(np.linalg.norm(y))
        v = y / np.linalg.norm(y)
        if abs(s_new - sigma) <= tol * s_new:
            return s_new
        sigma = s_new
    return sigma


# ---------------------------------------------------------------------------
# H^2_0 decay estimates


@dataclass(frozen=True)
class DecayReport:
    holds: bool
    min_ratio_first: float   # min over nodes of bound / |f'|
    min_ratio_second: float  # min over nodes of bound / |f|


def decay_estimate_check(f, *, rel=1e-9):
    """|f'(x)| <= ||f''||_{L^2(0,x)} x^(1/2) and |f(x)| <= (2/3) ||f''||_{L^2(0,x)} x^(3/2)."""
    if f.second is None:
        raise DomainError("decay estimates need f'' on the grid")
    x = f.nodes
    scale = max(np.max(np.abs(f.values)), 1e-300)
    if abs(f.values[0]) > 1e-6 * scale or abs(f.derivs[0]) > 1e-6 * max(np.max(np.abs(f.derivs)), 1e-300):
        raise DomainError("decay estimates need f(0) = f'(0) = 0")
    f.integrate(np.abs(f.second) ** 2, "int |f''|^2")  # audit: f must lie in H^2 near 0
    norm2 = np.sqrt(np.maximum(f.cumulative(np.abs(f.second) ** 2), 0.0))
    b1 = norm2 * np.sqrt(x)
    b2 = (2.0 / 3.0) * norm2 * x ** 1.5
    df, fv = np.abs(f.derivs), np.abs(f.values)
    tiny = 1e-300
    ok1 = df <= b1 * (1 + rel) + tiny
    ok2 = fv <= b2 * (1 + rel) + tiny
    r1 = np.min(np.where(df > tiny, b1 / np.maximum(df, tiny), np.inf))
    r2 = np.min(np.where(fv > tiny, b2 / np.maximum(fv, tiny), np.inf))
    return DecayReport(bool(ok1.all() and ok2.all()), float(r1), float(r2))
