"""Shared numerical plumbing: Gauss panel meshes and limit extrapolation."""
from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np

from .errors import LimitDivergenceError


@lru_cache(maxsize=None)
def gauss_legendre(order):
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@dataclass(frozen=True)
class PanelMesh:
    """Gauss nodes on a union of panels.

    ``level[i]`` is the dyadic depth k of node i when it lies in a panel of
    the geometric cluster toward the left endpoint ([a + L 2^-(k+1), a + L 2^-k]),
    and -1 for nodes in ordinary panels.  ``edges`` lists all panel
    boundaries; ``panel[i]`` is the panel index of node i.
    """
    nodes: np.ndarray
    weights: np.ndarray
    level: np.ndarray
    panel: np.ndarray
    edges: np.ndarray
    order: int
    levels: int


def panel_mesh(a, b, *, breakpoints=(), levels=100, order=20,
               panels_per_segment=4, singular_left=True, max_width=None, split=1):
    """Build a composite Gauss mesh on [a, b].

    With ``singular_left`` the first segment [a, c] gets dyadic panels
    accumulating at a (``levels`` of them, each cut into ``split`` pieces),
    so integrands like (x - a)^(-1 + delta) are resolved down to
    (c - a) 2^-levels.  Remaining segments are split uniformly.
    """
    cuts = sorted({float(a), float(b), *(float(p) for p in breakpoints if a < p < b)})
    panels = []  # (lo, hi, level)
    for s, (lo, hi) in enumerate(zip(cuts[:-1], cuts[1:])):
        if s == 0 and singular_left:
            length = hi - lo
            # top dyad [lo + L/2, hi] is split like an ordinary segment
            m = panels_per_segment
            if max_width is not None:
                m = max(m, math.ceil(0.5 * length / max_width))
            top = np.linspace(lo + 0.5 * length, hi, m + 1)
            for k in range(1, levels):
                p0, p1 = lo + length * 2.0 ** -(k + 1), lo + length * 2.0 ** -k
                e = np.linspace(p0, p1, split + 1)
                panels.extend((e[i], e[i + 1], k) for i in range(split - 1, -1, -1))
            panels.reverse()
            panels.extend((p, q, 0) for p, q in zip(top[:-1], top[1:]))
        else:
            m = panels_per_segment
            if max_width is not None:
                m = max(m, math.ceil((hi - lo) / max_width))
            e = np.linspace(lo, hi, m + 1)
            panels.extend((p, q, -1) for p, q in zip(e[:-1], e[1:]))
    gx, gw = gauss_legendre(order)
    lo = np.array([p[0] for p in panels])
    hi = np.array([p[1] for p in panels])
    lev = np.array([p[2] for p in panels])
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    nodes = (mid[:, None] + half[:, None] * gx[None, :]).ravel()
    weights = (half[:, None] * gw[None, :]).ravel()
    level = np.repeat(lev, order)
    panel = np.repeat(np.arange(len(panels)), order)
    edges = np.concatenate([lo, hi[-1:]])
    return PanelMesh(nodes, weights, level, panel, edges, order, levels if singular_left else 0)


def log_mesh(b, *, depth=12, order=20, panels=6, split=1, floor=1e-280):
    """Gauss mesh on (0, b] for integrands with logarithmic endpoint behaviour.

    Uses x = b exp(-c (1/tau - 1)), tau in (0, 1], with c chosen so that the
    deepest tau-dyad ends at x = ``floor``.  Integrands like
    (-log x)^-p / x become algebraic in tau, and their tau-dyad contributions
    decay geometrically, so :func:`geometric_tail` covers what lies below.
    ``level`` holds the tau-dyad index (0 for tau in [1/2, 1]).
    """
    tau_min = 2.0 ** -depth
    c = math.log(b / floor) / (1.0 / tau_min - 1.0)
    gx, gw = gauss_legendre(order)
    pan = []
    e = np.linspace(0.5, 1.0, panels + 1)
    pan.extend((p, q, 0) for p, q in zip(e[:-1], e[1:]))
    for k in range(1, depth):
        e = np.linspace(2.0 ** -(k + 1), 2.0 ** -k, split + 1)
        pan.extend((p, q, k) for p, q in zip(e[:-1], e[1:]))
    pan.sort()
    lo = np.array([p[0] for p in pan])
    hi = np.array([p[1] for p in pan])
    lev = np.array([p[2] for p in pan])
    half, mid = 0.5 * (hi - lo), 0.5 * (hi + lo)
    tau = (mid[:, None] + half[:, None] * gx[None, :]).ravel()
    wt = (half[:, None] * gw[None, :]).ravel()
    x = b * np.exp(-c * (1.0 / tau - 1.0))
    jac = x * c / tau ** 2
    edges = b * np.exp(-c * (1.0 / np.concatenate([lo, hi[-1:]]) - 1.0))
    return PanelMesh(x, wt * jac, np.repeat(lev, order), np.repeat(np.arange(len(pan)), order),
                     edges, order, depth)


def dyadic_sums(mesh, integrand_values):
    """Per-dyad integrals I_k, k = 0..levels-1 (k = 0 includes ordinary panels)."""
    vals = mesh.weights * integrand_values
    k = np.where(mesh.level < 0, 0, mesh.level)
    out = np.zeros(max(mesh.levels, 1), dtype=vals.dtype)
    np.add.at(out, k, vals)
    return out


def geometric_tail(contribs):
    """Estimate sum of the omitted contributions beyond the last dyad.

    Assumes the deepest contributions decay geometrically, which is exact for
    pure power behaviour at the endpoint.
    """
    if len(contribs) < 3:
        return 0.0
    c1, c2 = contribs[-2], contribs[-1]
    if c1 == 0 or abs(c2) < 1e-300:
        return 0.0
    rho = c2 / c1
    if not abs(rho) < 1:
        return 0.0
    return c2 * rho / (1 - rho)


def divergence_suspected(contribs, *, window=6, rate=0.01):
    """True when each of the deepest ``window`` dyads still adds more than
    ``rate`` of the running total (partial sums taken from level 0 down),
    or when the deepest dyads do not shrink at all (a logarithmic divergence
    hidden behind a large partial sum)."""
    c = np.abs(np.asarray(contribs))
    if len(c) < window + 1:
        return False
    partial = np.abs(np.cumsum(np.asarray(contribs)))
    tail = range(len(c) - window, len(c))
    if all(c[k] > rate * max(partial[k], 1e-300) for k in tail):
        return True
    deep = c[-window:]
    # rounding noise also stagnates, so only contributions above 1e-12 of the total count
    return bool(deep[0] > 1e-12 * partial[-1] and np.all(deep[1:] >= deep[:-1] * (1 - 1e-9)))


@dataclass(frozen=True)
class Extrapolated:
    value: complex
    error: float
    converged: bool
    terms: int


def extrapolate_geometric(sample, *, h0, ratio, exponents, tol, max_terms=40,
                          name="sequence"):
    """Limit of sample(h) as h -> 0 along h_j = h0 * ratio**j.

    Richardson elimination of the error terms h**p, p in ``exponents`` (in
    order; repeat an exponent to remove h**p * log(h)).  Stops once two
    successive diagonal estimates agree to ``tol`` (relative to max(1, |value|))
    or when roundoff makes them drift apart again; returns the best estimate.
    Raises LimitDivergenceError when the raw sequence blows up or its
    increments fail to decay.
    """
    rows = []
    raw = []
    diag = []
    errs = []
    best_i = None
    rising = 0
    for j in range(max_terms):
        h = h0 * ratio ** j
        t = complex(sample(h))
        if not (math.isfinite(t.real) and math.isfinite(t.imag)):
            raise LimitDivergenceError(f"{name}: non-finite value at h={h:.3e}")
        raw.append(t)
        row = [t]
        for m in range(1, min(j, len(exponents)) + 1):
            q = ratio ** exponents[m - 1]
            row.append((row[m - 1] - q * rows[j - 1][m - 1]) / (1 - q))
        rows.append(row)
        diag.append(row[-1])
        if j >= 6 and _blowing_up(raw):
            raise LimitDivergenceError(f"{name}: sequence grows like a negative power of h")
        if j == 0:
            continue
        err = abs(diag[-1] - diag[-2])
        errs.append(err)
        scale = max(1.0, abs(diag[-1]))
        if best_i is None or err < errs[best_i]:
            best_i = len(errs) - 1
            rising = 0
        else:
            rising += 1
        if j > len(exponents) and err < tol * scale and len(errs) >= 2 and errs[-2] < tol * scale:
            break
        if j > len(exponents) + 2 and rising >= 4:
            break
    value = diag[best_i + 1]
    err = errs[best_i]
    converged = err < tol * max(1.0, abs(value))
    if not converged and _increments_stagnate(raw):
        raise LimitDivergenceError(f"{name}: increments do not decay (logarithmic divergence?)")
    return Extrapolated(value, err, converged, len(raw))


def _blowing_up(raw):
    tail = [abs(v) for v in raw[-7:]]
    if tail[-1] < 1e3 * (abs(raw[0]) + 1.0):
        return False
    return all(b > 1.1 * a for a, b in zip(tail[:-1], tail[1:]))


def _increments_stagnate(raw):
    if len(raw) < 8:
        return False
    d = [abs(b - a) for a, b in zip(raw[-7:-1], raw[-6:])]
    return all(y >= 0.995 * x for x, y in zip(d[:-1], d[1:])) and d[-1] > 1e-6
