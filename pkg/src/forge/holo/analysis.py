"""Contour-based analysis of expressions near the puncture ``z = 0``."""

from __future__ import annotations

from dataclasses import dataclass, field

import math

import numpy as np

from ..errors import (DegenerateMap, MultivaluedError, QuadratureNonConvergence,
                      RadiusDependence)
from .expr import Const, Expr, has_branch

DEFAULT_RADII = tuple(2.0 ** -j for j in range(4, 15))


def circle_points(r: float, n: int) -> np.ndarray:
    """``n`` uniform points on ``|z| = r`` with angles in ``(-pi, pi]``."""
    theta = -np.pi + 2 * np.pi * (np.arange(n) + 1) / n
    return r * np.exp(1j * theta)


def check_single_valued(e: Expr, r: float, delta: float = 1e-6) -> None:
    """Raise :class:`MultivaluedError` if ``e`` jumps across the slit at radius ``r``.

    The jump between the two sides of the negative real axis is compared with
    the variation over one extra angular step on the upper side.
    """
    if not has_branch(e):
        return
    th = np.array([np.pi - 2 * delta, np.pi - delta, -np.pi + delta])
    v = e(r * np.exp(1j * th))
    step = abs(v[1] - v[0])
    jump = abs(v[1] - v[2])
    scale = max(abs(v[1]), abs(v[2]), 1e-300)
    if not np.all(np.isfinite(v)) or jump > 10 * step + 1e-12 * scale:
        raise MultivaluedError(
            f"{e} is not single-valued on |z| = {r:g} (jump {jump:.3e} across the slit)")


def laurent_coefficient(e: Expr, k: int, r: float, tol: float = 1e-10,
                        n0: int = 64, n_max: int = 2 ** 16) -> complex:
    """Laurent coefficient ``a_k`` from the trapezoidal rule on ``|z| = r``.

    The node count doubles from ``n0`` until two successive values agree to
    ``tol`` (absolute); past ``n_max`` nodes this raises
    :class:`QuadratureNonConvergence`.
    """
    check_single_valued(e, r)
    prev = None
    n = n0
    while n <= n_max:
        z = circle_points(r, n)
        a = complex(np.mean(e(z) * z ** (-k)))
        if not np.isfinite(a):
            raise QuadratureNonConvergence(f"non-finite samples of {e} on |z| = {r:g}")
        if prev is not None and abs(a - prev) <= tol:
            return a
        prev = a
        n *= 2
    raise QuadratureNonConvergence(
        f"a_{k} of {e} at r = {r:g} did not settle to {tol:g} within {n_max} nodes")


def loop_period(core: Expr, r: float, tol: float = 1e-9,
                factors=(1.0, 0.75, 0.5)) -> complex:
    """``∮_{|z|=r} core(z) dz``, cross-checked on three radii."""
    vals = [2j * np.pi * laurent_coefficient(core, -1, r * f) for f in factors]
    spread = max(abs(v - vals[0]) for v in vals)
    if spread > tol * max(1.0, abs(vals[0])):
        raise RadiusDependence(
            f"period of {core} varies by {spread:.3e} across radii {[r * f for f in factors]}")
    return vals[0]


@dataclass
class SingularityVerdict:
    kind: str  # removable | pole | essential | inconclusive
    order: int | None
    slope: float
    residual: float
    radii: list = field(default_factory=list)
    log_max: list = field(default_factory=list)
    note: str = ""

    def __str__(self):
        if self.kind == "pole":
            return f"pole({self.order})"
        return self.kind

    def as_dict(self):
        return {"kind": self.kind, "order": self.order, "slope": self.slope,
                "residual": self.residual, "radii": list(self.radii),
                "log_max": list(self.log_max), "note": self.note}


def max_modulus(e: Expr, radii, n_theta: int = 512) -> np.ndarray:
    out = []
    for r in radii:
        out.append(np.max(np.abs(e(circle_points(r, n_theta)))))
    return np.array(out)


def classify_singularity(e: Expr, radii=DEFAULT_RADII, n_theta: int = 512,
                         slope_tol: float = 0.1, residual_bound: float = 0.1
                         ) -> SingularityVerdict:
    """Classify the isolated singularity of ``e`` at 0 from max-modulus growth.

    ``log M(r)`` is regressed on ``log(1/r)``.  A straight line with integer
    slope ``k >= 1`` is a pole of order ``k``; slope ``<= slope_tol`` means
    bounded (removable).  A poor linear fit whose local slopes keep growing
    means super-polynomial growth, i.e. an essential singularity.  When the
    full-range fit is poor only because lower-order terms bend the curve at
    the larger radii, a straight fit on the innermost radii decides.  Anything
    else is reported as inconclusive rather than guessed.
    """
    radii = np.asarray(sorted(radii, reverse=True), dtype=float)
    check_single_valued(e, radii[0])
    check_single_valued(e, radii[-1])
    with np.errstate(all="ignore"):
        M = max_modulus(e, radii, n_theta)
        logM = np.log(M)
    x = np.log(1 / radii)
    finite = np.isfinite(logM)
    if np.any(np.isnan(M)):
        return SingularityVerdict("inconclusive", None, np.nan, np.nan, list(radii),
                                  logM.tolist(), "undefined samples on probe circles")
    if not np.all(finite):
        # overflow at small radii: growth beyond any pole order reachable here
        if finite.any() and np.all(M[finite] > 0) and np.isposinf(logM[-1]) and finite[0]:
            # a pole reaching overflow this early would need order >= k_min
            j = int(np.argmin(finite))
            k_min = (math.log(np.finfo(float).max) - logM[j - 1]) / (x[j] - x[j - 1])
            if k_min > 2 * len(radii):
                return SingularityVerdict("essential", None, np.inf, np.inf, list(radii),
                                          logM.tolist(),
                                          f"max modulus overflows double range (a pole would need order >= {k_min:.0f})")
        if np.all(M == 0):
            return SingularityVerdict("removable", None, -np.inf, 0.0, list(radii),
                                      logM.tolist(), "identically zero")
        return SingularityVerdict("inconclusive", None, np.nan, np.nan, list(radii),
                                  logM.tolist(), "non-finite max modulus")
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, logM, rcond=None)
    slope = float(coef[0])
    residual = float(np.max(np.abs(A @ coef - logM)))
    local = np.diff(logM) / np.diff(x)
    if residual <= residual_bound:
        if slope <= slope_tol:
            return SingularityVerdict("removable", 0, slope, residual, list(radii), logM.tolist())
        k = int(round(slope))
        if k >= 1 and abs(slope - k) <= slope_tol:
            return SingularityVerdict("pole", k, slope, residual, list(radii), logM.tolist())
        return SingularityVerdict("inconclusive", None, slope, residual, list(radii),
                                  logM.tolist(), "non-integer growth exponent")
    n = len(local)
    head, tail = local[: n // 3].mean(), local[-(n // 3):].mean()
    if np.all(np.diff(local[n // 3:]) > 0) and tail > 2 * max(head, 0.5):
        return SingularityVerdict("essential", None, slope, residual, list(radii),
                                  logM.tolist(), "super-polynomial max-modulus growth")
    # lower-order terms can bend the curve at the larger radii; judge by the innermost ones
    m = max(4, n // 3 + 1)
    At = A[-m:]
    ct, *_ = np.linalg.lstsq(At, logM[-m:], rcond=None)
    st = float(ct[0])
    rt = float(np.max(np.abs(At @ ct - logM[-m:])))
    if rt <= 0.1 * residual_bound:
        kt = int(round(st))
        note = f"from the {m} innermost radii (full-range residual {residual:.3g})"
        if st <= slope_tol:
            return SingularityVerdict("removable", 0, st, rt, list(radii), logM.tolist(), note)
        if kt >= 1 and abs(st - kt) <= slope_tol:
            return SingularityVerdict("pole", kt, st, rt, list(radii), logM.tolist(), note)
    return SingularityVerdict("inconclusive", None, slope, residual, list(radii),
                              logM.tolist(), "growth neither polynomial nor clearly super-polynomial")


def schwarzian(g: Expr) -> Expr:
    """``S(g) = (g''/g')' - (g''/g')**2 / 2`` as an expression."""
    g1 = g.diff()
    if isinstance(g1, Const) and g1.value == 0:
        raise DegenerateMap(f"{g} is constant")
    probe = g1(np.array([0.31 + 0.17j, -0.23 + 0.41j, 0.05 - 0.37j]))
    if np.all(probe == 0):
        raise DegenerateMap(f"{g} has vanishing derivative")
    h = g1.diff() / g1
    return h.diff() - 0.5 * h * h


_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)


def _legendre_panels(a, b, width):
    """Composite Gauss-Legendre nodes/weights between per-point bounds a, b."""
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    n_pan = max(1, int(np.ceil(np.max(np.abs(b - a)) / width))) if a.size else 1
    edges = a[..., None] + (b - a)[..., None] * np.linspace(0, 1, n_pan + 1)
    lo, hi = edges[..., :-1], edges[..., 1:]
    mid = 0.5 * (lo + hi)[..., None]
    half = 0.5 * (hi - lo)[..., None]
    t = (mid + half * _GL_X).reshape(a.shape + (-1,))
    w = (half * _GL_W).reshape(a.shape + (-1,)) * np.ones_like(t)
    return t, w


def path_integral(f: Expr, z0: complex, z, route: str = "radial-arc",
                  width: float = 0.25) -> np.ndarray:
    """``∫ f(w) dw`` from ``z0`` to each ``z`` along the canonical path.

    ``radial-arc`` runs radially from ``z0`` out (or in) to ``|z|`` and then
    along the circle ``|w| = |z|``; ``arc-radial`` does the arc at ``|z0|``
    first.  The angle is tracked continuously, turning by the principal
    difference ``arg z - arg z0`` in ``(-pi, pi]``.
    """
    z = np.asarray(z, dtype=complex)
    s0, a0 = np.log(abs(z0)), np.angle(z0)
    s1 = np.log(np.abs(z))
    da = np.angle(z * np.exp(-1j * a0))
    a1 = a0 + da
    s0 = np.full(z.shape, s0)
    a0 = np.full(z.shape, a0)

    def radial(sa, sb, ang):
        t, w = _legendre_panels(sa, sb, width)
        pts = np.exp(t + 1j * ang[..., None])
        return np.sum(f(pts) * pts * w, axis=-1)

    def arc(rad_log, aa, ab):
        t, w = _legendre_panels(aa, ab, width)
        pts = np.exp(rad_log[..., None] + 1j * t)
        return np.sum(f(pts) * 1j * pts * w, axis=-1)

    if route == "radial-arc":
        return radial(s0, s1, a0) + arc(s1, a0, a1)
    if route == "arc-radial":
        return arc(s0, a0, a1) + radial(s0, s1, a1)
    raise ValueError(f"unknown route {route!r}")
