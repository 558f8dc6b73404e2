"""Deterministic adaptive Gauss-Legendre integration.

The integrands in this package are smooth apart from power-law zeros at
interval edges and mild exponential peaking, so panel bisection with a
full-rule/half-rule error estimate converges quickly.  Node placement
depends only on panel coordinates and panels are split worst-first with
first-index tie breaking, which makes every result bit-reproducible.

Integrands may be vector valued: a callable returning shape
``(npoints, m)`` integrates m components in one adaptive pass over a
shared subdivision, so related numerators and denominators see exactly
the same nodes.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import ToleranceNotMet

__all__ = [
    "QuadSpec",
    "gauss_legendre",
    "integrate_1d",
    "integrate_2d_triangular",
    "integrate_3d_theta",
]


@dataclass(frozen=True)
class QuadSpec:
    """Accuracy and cost controls for the adaptive integrators."""

    rel_tol: float = 1e-7
    abs_tol: float = 1e-10
    max_subdivisions: int = 64
    base_rule: int = 32  # nodes per panel; the half rule supplies the error estimate

    def __post_init__(self):
        if self.rel_tol <= 0.0 or self.abs_tol <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.base_rule < 4:
            raise ValueError("base_rule must be at least 4")
        if self.max_subdivisions < 0:
            raise ValueError("max_subdivisions must be non-negative")


DEFAULT_SPEC = QuadSpec()


@lru_cache(maxsize=64)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-1, 1], cached and read-only."""
    x, w = np.polynomial.legendre.leggauss(int(n))
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _converged(value, err, spec: QuadSpec) -> bool:
    bound = np.maximum(spec.abs_tol, spec.rel_tol * np.abs(value))
    return bool(np.all(err <= bound))


def _zero_like(f: Callable, probe_args) -> tuple:
    out = np.asarray(f(*probe_args), dtype=float)
    zero = np.zeros(out.shape[1:]) if out.ndim > 1 else 0.0
    return zero, zero


# =====================================================================
# 1-D
# =====================================================================

def _eval_1d(f, a: float, b: float, n: int):
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    x_hi, w_hi = gauss_legendre(n)
    x_lo, w_lo = gauss_legendre(n // 2)
    y_hi = np.asarray(f(mid + half * x_hi), dtype=float)
    y_lo = np.asarray(f(mid + half * x_lo), dtype=float)
    hi = half * np.tensordot(w_hi, y_hi, axes=(0, 0))
    lo = half * np.tensordot(w_lo, y_lo, axes=(0, 0))
    return hi, np.abs(hi - lo)


def integrate_1d(f, a: float, b: float, spec: QuadSpec | None = None):
    """Integrate ``f`` over [a, b]; returns ``(value, error_estimate)``.

    ``f`` maps a node array of shape (n,) to values of shape (n,) or
    (n, m); the result mirrors the trailing shape.
    """
    spec = spec or DEFAULT_SPEC
    if b < a:
        raise ValueError("integration bounds must satisfy a <= b")
    if a == b:
        return _zero_like(f, (np.asarray([a], dtype=float),))
    panels = [(a, b, *_eval_1d(f, a, b, spec.base_rule))]
    splits = 0
    while True:
        value = sum(p[2] for p in panels)
        err = sum(p[3] for p in panels)
        if not np.all(np.isfinite(value)):
            raise ToleranceNotMet("integrand produced non-finite values")
        if _converged(value, err, spec):
            return value, err
        if splits >= spec.max_subdivisions:
            raise ToleranceNotMet(
                f"tolerance not met after {spec.max_subdivisions} subdivisions "
                f"(error estimate {np.max(err):.3e})")
        k = max(range(len(panels)), key=lambda q: float(np.max(panels[q][3])))
        pa, pb = panels[k][0], panels[k][1]
        pm = 0.5 * (pa + pb)
        panels[k:k + 1] = [
            (pa, pm, *_eval_1d(f, pa, pm, spec.base_rule)),
            (pm, pb, *_eval_1d(f, pm, pb, spec.base_rule)),
        ]
        splits += 1


# =====================================================================
# 2-D (rectangle engine + triangular mapping)
# =====================================================================

def _eval_2d(f, xa, xb, ya, yb, n: int):
    vals = []
    for m in (n, n // 2):
        x, wx = gauss_legendre(m)
        xm, xh = 0.5 * (xa + xb), 0.5 * (xb - xa)
        ym, yh = 0.5 * (ya + yb), 0.5 * (yb - ya)
        xs = np.repeat(xm + xh * x, m)
        ys = np.tile(ym + yh * x, m)
        w = (np.outer(wx, wx) * (xh * yh)).ravel()
        y = np.asarray(f(xs, ys), dtype=float)
        vals.append(np.tensordot(w, y, axes=(0, 0)))
    hi, lo = vals
    return hi, np.abs(hi - lo)


def _integrate_2d_rect(f, xa, xb, ya, yb, spec: QuadSpec):
    w0 = xb - xa
    h0 = yb - ya
    panels = [(xa, xb, ya, yb, *_eval_2d(f, xa, xb, ya, yb, spec.base_rule))]
    splits = 0
    while True:
        value = sum(p[4] for p in panels)
        err = sum(p[5] for p in panels)
        if not np.all(np.isfinite(value)):
            raise ToleranceNotMet("integrand produced non-finite values")
        if _converged(value, err, spec):
            return value, err
        if splits >= spec.max_subdivisions:
            raise ToleranceNotMet(
                f"tolerance not met after {spec.max_subdivisions} subdivisions "
                f"(error estimate {np.max(err):.3e})")
        k = max(range(len(panels)), key=lambda q: float(np.max(panels[q][5])))
        pxa, pxb, pya, pyb = panels[k][:4]
        # bisect the axis that is least refined relative to its original span
        if (pxb - pxa) / w0 >= (pyb - pya) / h0:
            pm = 0.5 * (pxa + pxb)
            children = [(pxa, pm, pya, pyb), (pm, pxb, pya, pyb)]
        else:
            pm = 0.5 * (pya + pyb)
            children = [(pxa, pxb, pya, pm), (pxa, pxb, pm, pyb)]
        panels[k:k + 1] = [
            (ca, cb, cc, cd, *_eval_2d(f, ca, cb, cc, cd, spec.base_rule))
            for ca, cb, cc, cd in children
        ]
        splits += 1


def integrate_2d_triangular(f, inner, outer, spec: QuadSpec | None = None):
    """Integrate ``f(r, l)`` over l in [outer[0], outer[1]] and
    r in [inner[0](l), inner[1](l)].

    Inner bounds may be floats or callables of the outer variable, which
    covers both rectangles and r <= l triangles.  ``f`` receives flat
    node arrays and may return shape (n,) or (n, m).  Returns
    ``(value, error_estimate)``.
    """
    spec = spec or DEFAULT_SPEC
    oa, ob = outer
    if ob < oa:
        raise ValueError("outer bounds must satisfy lo <= hi")
    lo, hi = inner
    lo_f = lo if callable(lo) else (lambda l, _v=float(lo): np.full_like(l, _v))
    hi_f = hi if callable(hi) else (lambda l, _v=float(hi): np.full_like(l, _v))
    if oa == ob:
        l0 = np.asarray([oa], dtype=float)
        return _zero_like(f, (np.asarray(lo_f(l0), dtype=float), l0))

    def g(t, l):
        r_lo = np.asarray(lo_f(l), dtype=float)
        width = np.asarray(hi_f(l), dtype=float) - r_lo
        y = np.asarray(f(r_lo + t * width, l), dtype=float)
        return y * (width[:, None] if y.ndim > 1 else width)

    return _integrate_2d_rect(g, 0.0, 1.0, oa, ob, spec)


# =====================================================================
# 3-D with a fixed angular rule
# =====================================================================

def integrate_3d_theta(f, theta, outer, inner, spec: QuadSpec | None = None,
                       theta_rule: int = 16):
    """Integrate ``f(theta, l, r)`` over the box
    theta in [theta[0], theta[1]], l in outer, r in inner(l).

    The theta dimension uses a fixed Gauss rule of ``theta_rule`` nodes
    (the integrands here are nearly constant over the narrow angular
    span); the (r, l) plane is handled adaptively.  ``f`` must broadcast
    a leading theta axis: it is called with theta of shape (t, 1) against
    l, r of shape (1, n) and must return (t, n) or (t, n, m).
    """
    ta, tb = theta
    x, w = gauss_legendre(theta_rule)
    tm, th = 0.5 * (ta + tb), 0.5 * (tb - ta)
    nodes = tm + th * x
    weights = w * th

    def g(r, l):
        vals = np.asarray(f(nodes[:, None], l[None, :], r[None, :]), dtype=float)
        return np.tensordot(weights, vals, axes=(0, 0))

    return integrate_2d_triangular(g, inner, outer, spec)
