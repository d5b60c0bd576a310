"""Metrics on 2-domains, path lengths toward punctures, and curvature.

Conformal metrics are written ``D(z) |dz|^2`` with ``D`` a product of real
weights times a sum of squared one-form magnitudes; general metrics on the
``(u, v)`` plane are given by components ``E, F, G``.

Lengths toward a puncture are computed on truncations ``eps_k = r0 10^-k``
after substituting ``r = r0 exp(-s)``; whether a length diverges is decided
by an explicit rule on the increments (see :func:`classify_growth`).  The
outcome of every divergence test is evidence, not a proof: only finitely
many rays and spirals are probed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import (MetricDegenerate, QuadratureFailure, StepUnderflow)
from .holo.expr import Expr, as_expr

EVIDENCE_NOTE = "evidence, not proof: divergence was probed on finitely many rays/spirals only"

GROWTH_RANK = {"bounded": 0, "undetermined": 1, "log": 2, "power": 3, "superpolynomial": 4}


# ---------------------------------------------------------------------------
# metric objects

@dataclass(frozen=True)
class AbsOneForm:
    """Magnitude ``|z|^mu |log z|^n |core(z)|`` of a one-form per unit ``|dz|``.

    ``|log z|`` uses the continuous argument ``arg`` when one is supplied
    (path integrals), otherwise the principal angle.
    """
    core: Expr
    mu: float = 0.0
    n: int = 0

    def magnitude(self, z, arg=None):
        z = np.asarray(z, dtype=complex)
        with np.errstate(all="ignore"):
            val = np.abs(self.core(z))
            r = np.abs(z)
            if self.mu:
                val = val * r ** self.mu
            if self.n:
                a = np.angle(z) if arg is None else arg
                val = val * np.hypot(np.log(r), a) ** self.n
        return val

    def scaled(self, c: complex) -> "AbsOneForm":
        return AbsOneForm(as_expr(c) * self.core, self.mu, self.n)

    def with_log_weight(self, n: int) -> "AbsOneForm":
        return AbsOneForm(self.core, self.mu, self.n + int(n))


@dataclass(frozen=True)
class ModulusWeight:
    """Real factor ``|a + b |h(z)|^2| ** power``."""
    h: Expr
    a: float = 1.0
    b: float = 1.0
    power: float = 2.0

    def __call__(self, z):
        with np.errstate(all="ignore"):
            return np.abs(self.a + self.b * np.abs(self.h(z)) ** 2) ** self.power


@dataclass(frozen=True)
class ConformalMetric:
    terms: tuple
    weights: tuple = ()
    factor: float = 1.0
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "weights", tuple(self.weights))

    def density(self, z, arg=None):
        z = np.asarray(z, dtype=complex)
        d = np.zeros(z.shape)
        for t in self.terms:
            d = d + t.magnitude(z, arg) ** 2
        for w in self.weights:
            d = d * w(z)
        return self.factor * d

    def line_element(self, z, dz, arg=None):
        return np.sqrt(self.density(z, arg)) * np.abs(dz)

    def quadratic(self, u, v, du, dv):
        return self.density(np.asarray(u) + 1j * np.asarray(v)) * (du ** 2 + dv ** 2)

    def scaled(self, c: float) -> "ConformalMetric":
        """The metric ``c^2 m``, whose lengths are ``c`` times those of ``m``."""
        return ConformalMetric(self.terms, self.weights, self.factor * c * c, self.name)


@dataclass(frozen=True)
class RiemannMetric2:
    """``E du^2 + 2 F du dv + G dv^2``; callables of (u, v)."""
    E: Callable
    F: Callable
    G: Callable
    form: Callable | None = None
    name: str = ""

    def quadratic(self, u, v, du, dv):
        if self.form is not None:
            return self.form(u, v, du, dv)
        return self.E(u, v) * du ** 2 + 2 * self.F(u, v) * du * dv + self.G(u, v) * dv ** 2

    def components(self, u, v):
        u = np.asarray(u, float)
        v = np.asarray(v, float)
        shape = np.broadcast(u, v).shape
        return tuple(np.broadcast_to(np.asarray(c(u, v), float), shape) for c in (self.E, self.F, self.G))

    def is_positive_definite(self, u, v) -> bool:
        E, F, G = self.components(u, v)
        return bool(np.all(E > 0) and np.all(G > 0) and np.all(E * G - F * F > 0))


def disk_points(r0: float, n: int, r_min: float = 0.0) -> np.ndarray:
    """Cartesian ``n x n`` grid over ``[-r0, r0]^2`` restricted to ``r_min < |z| < r0``."""
    x = np.linspace(-r0, r0, n)
    Z = x[None, :] + 1j * x[:, None]
    m = (np.abs(Z) < r0) & (np.abs(Z) > r_min)
    return Z[m]


# ---------------------------------------------------------------------------
# quadrature

_XK = np.array([0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                0.207784955007898467600689403773245, 0.0])
_WK = np.array([0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                0.204432940075298892414161999234649, 0.209482141084727828012999174891714])
_WG = np.array([0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                0.381830050505118944950369775488975, 0.417959183673469387755102040816327])
_NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
_WEIGHTS_K = np.concatenate([_WK[:-1], _WK[::-1]])
_WEIGHTS_G = np.zeros(15)
_WEIGHTS_G[1::2] = np.concatenate([_WG[:-1], _WG[::-1]])


def integrate(f, a: float, b: float, tol: float = 1e-11, rtol: float = 1e-13,
              max_panels: int = 20000):
    """Vectorized adaptive Gauss-Kronrod (7/15) quadrature of ``f`` on ``[a, b]``.

    ``f`` maps an array of abscissae to values.  Returns ``(value, error)``;
    a non-finite sample makes the value ``inf``.
    """
    lo = np.array([a], float)
    hi = np.array([b], float)
    total = 0.0
    err = 0.0
    width = b - a
    if width == 0:
        return 0.0, 0.0
    n_done = 0
    while lo.size:
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        x = mid[:, None] + half[:, None] * _NODES
        y = np.asarray(f(x), float)
        if not np.all(np.isfinite(y)):
            return math.inf, math.inf
        k = half * (y @ _WEIGHTS_K)
        g = half * (y @ _WEIGHTS_G)
        e = np.abs(k - g)
        ok = (e <= np.maximum(tol * (hi - lo) / width, rtol * np.abs(k))) | (half < 1e-14 * max(1.0, abs(width)))
        total += float(np.sum(k[ok]))
        err += float(np.sum(e[ok]))
        n_done += int(ok.sum())
        lo, hi, mid = lo[~ok], hi[~ok], mid[~ok]
        lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])
        if n_done + lo.size > max_panels:
            raise QuadratureFailure(f"adaptive quadrature exceeded {max_panels} panels on [{a}, {b}]")
    return total, err


# ---------------------------------------------------------------------------
# paths

@dataclass(frozen=True)
class PathSpec:
    """A path toward an end.

    kind ``ray``: ``z = r e^{i theta0}``, ``r`` from ``r0`` down to 0.
    kind ``spiral``: ``z = r e^{i (theta0 + kappa ln r)}`` with the argument
    tracked continuously, ``r`` from ``r0`` down to 0.
    kind ``segment``: ``(u, v) = p0 + t d`` for ``t`` in ``[0, T]``; ``T`` may
    be ``inf`` (improper endpoint at infinity).
    kind ``samples``: polyline through the complex points ``points``.
    """
    kind: str
    theta0: float = 0.0
    r0: float = 1.0
    kappa: float = 0.0
    p0: tuple = (0.0, 0.0)
    d: tuple = (1.0, 0.0)
    T: float = math.inf
    points: tuple = ()

    @classmethod
    def ray(cls, theta0=0.0, r0=1.0):
        return cls("ray", theta0=float(theta0), r0=float(r0))

    @classmethod
    def spiral(cls, kappa, theta0=0.0, r0=1.0):
        return cls("spiral", theta0=float(theta0), r0=float(r0), kappa=float(kappa))

    @classmethod
    def segment(cls, p0=(0.0, 0.0), d=(1.0, 0.0), T=math.inf):
        return cls("segment", p0=tuple(map(float, p0)), d=tuple(map(float, d)), T=float(T))

    @classmethod
    def samples(cls, points):
        return cls("samples", points=tuple(complex(p) for p in points))

    @property
    def improper(self):
        return self.kind in ("ray", "spiral") or (self.kind == "segment" and math.isinf(self.T))

    def z_of_s(self, s):
        """Point, tangent ``dz/ds`` and continuous argument at ``r = r0 e^-s``."""
        r = self.r0 * np.exp(-s)
        if self.kind == "ray":
            arg = np.full(np.shape(s), self.theta0)
            z = r * np.exp(1j * arg)
            return z, -z, arg
        arg = self.theta0 + self.kappa * np.log(r)
        z = r * np.exp(1j * arg)
        return z, -z * (1 + 1j * self.kappa), arg


@dataclass
class PathLength:
    value: float | None
    error: float
    divergent: bool
    growth: str
    table: list  # (epsilon, partial length)
    constants: dict = field(default_factory=dict)
    converged: bool = False

    @property
    def finite(self):
        return self.value is not None


def _line_integrand(metric, path: PathSpec):
    if path.kind in ("ray", "spiral"):
        def f(s):
            z, dz, arg = path.z_of_s(s)
            return metric.line_element(z, dz, arg)
        return f
    if path.kind == "segment":
        (u0, v0), (du, dv) = path.p0, path.d

        def f(t):
            q = metric.quadratic(u0 + t * du, v0 + t * dv, du, dv)
            return np.sqrt(np.maximum(q, 0.0))
        return f
    raise ValueError(path.kind)


def _check_degenerate(f, pieces, frac=0.05):
    samples = []
    for a, b in pieces:
        if math.isfinite(b):
            samples.append(f(np.linspace(a, b, 65)[1:-1]))
    if samples:
        v = np.concatenate(samples)
        if np.mean(v == 0) > frac:
            raise MetricDegenerate("metric density vanishes on a set of positive measure along the path")


def classify_growth(scale, partial, floor: float = 1e-3, slack: float = 1e-6):
    """Decide divergence from partial lengths at a geometric truncation schedule.

    ``scale`` is ``1/eps_k`` for paths into a puncture (``T_k`` for paths to
    infinity), ``partial`` the lengths ``L_k``.  Divergent iff the last three
    increments are non-decreasing (relative slack ``slack``) and all exceed
    ``floor``.  The growth model is chosen by regression: ``L ~ b + c S^p``
    (``log``; ``S = ln scale``) against ``L ~ b + c scale^a`` (``power``);
    increments whose log-slopes keep growing are ``superpolynomial``.
    """
    scale = np.asarray(scale, float)
    L = np.asarray(partial, float)
    inc = np.diff(np.concatenate([[0.0], L]))
    if not np.all(np.isfinite(L)):
        return True, "superpolynomial", {"reason": "partial length overflow"}
    last = inc[-3:]
    nondecr = np.all(last[1:] >= last[:-1] * (1 - slack))
    divergent = bool(nondecr and np.all(last > floor))
    if not divergent:
        return False, "bounded", {}
    S = np.log(scale)
    sel = slice(2, None) if len(L) >= 6 else slice(0, None)
    Ls, Ss, incs = L[sel], S[sel], inc[sel]
    norm = max(np.max(np.abs(Ls)), 1e-300)

    # power model from the increments
    ld = np.log(np.maximum(incs, 1e-300))
    a = float(np.polyfit(Ss, ld, 1)[0])
    local = np.diff(ld) / np.diff(Ss)
    if len(local) >= 3 and np.all(np.diff(local) > 0) and local[-1] > 2 * max(local[0], 0.5) and local[-1] > 1:
        return True, "superpolynomial", {"local_exponents": local.tolist()}
    Xp = np.vstack([np.ones_like(Ss), scale[sel] ** a]).T if a > 0 else None
    res_pow = math.inf
    cp = None
    if Xp is not None and np.all(np.isfinite(Xp)):
        cp, *_ = np.linalg.lstsq(Xp, Ls, rcond=None)
        res_pow = float(np.max(np.abs(Xp @ cp - Ls)) / norm)

    def log_fit(p):
        X = np.vstack([np.ones_like(Ss), Ss ** p]).T
        c, *_ = np.linalg.lstsq(X, Ls, rcond=None)
        return float(np.max(np.abs(X @ c - Ls)) / norm), c

    opt = minimize_scalar(lambda p: log_fit(p)[0], bounds=(0.05, 12.0), method="bounded",
                          options={"xatol": 1e-10})
    p = float(opt.x)
    res_log, cl = log_fit(p)
    if min(res_log, res_pow) > 0.05:
        return True, "undetermined", {"residual_log": res_log, "residual_power": res_pow}
    if res_log <= res_pow:
        return True, "log", {"p": p, "c": float(cl[1]), "b": float(cl[0]), "residual": res_log}
    return True, "power", {"a": a, "c": float(cp[1]), "b": float(cp[0]), "residual": res_pow}


def path_length(metric, path: PathSpec, tol: float = 1e-9, decades: int = 8,
                max_decades: int = 30, floor: float = 1e-3) -> PathLength:
    """Length of ``path`` in ``metric``; improper endpoints by truncation.

    Partial lengths are accumulated over the geometric schedule (decades in
    ``r`` toward a puncture, decades in ``t`` toward infinity).  Finite
    lengths are extrapolated with a geometric tail estimate and the schedule
    is extended (up to ``max_decades``) until the tail is below ``tol``.
    """
    if path.kind == "samples":
        pts = np.asarray(path.points, complex)
        total, err = 0.0, 0.0
        for p, q in zip(pts[:-1], pts[1:]):
            dz = q - p
            v, e = integrate(lambda t: metric.line_element(p + t * dz, dz), 0.0, 1.0, tol=tol * 1e-2)
            total += v
            err += e
        return PathLength(total, err, False, "bounded", [(0.0, total)], converged=True)

    f = _line_integrand(metric, path)
    if path.kind == "segment" and not path.improper:
        _check_degenerate(f, [(0.0, path.T)])
        v, e = integrate(f, 0.0, path.T, tol=tol * 1e-2)
        return PathLength(v, e, False, "bounded", [(path.T, v)], converged=True)

    if path.kind == "segment":
        def bounds(k):  # t from 10^(k-2) to 10^(k-1); first piece starts at 0
            return (0.0 if k == 1 else 10.0 ** (k - 2), 10.0 ** (k - 1))

        def scale_of(k):
            return 10.0 ** (k - 1)
    else:
        ln10 = math.log(10.0)

        def bounds(k):
            return ((k - 1) * ln10, k * ln10)

        def scale_of(k):
            return 10.0 ** k / path.r0

    _check_degenerate(f, [bounds(k) for k in (1, 2)])
    partial = []
    scales = []
    total = 0.0
    qerr = 0.0
    piece_tol = tol * 1e-2
    for k in range(1, decades + 1):
        v, e = integrate(f, *bounds(k), tol=piece_tol)
        total += v
        qerr += e
        partial.append(total)
        scales.append(scale_of(k))
    divergent, growth, consts = classify_growth(scales, partial, floor)
    eps = [1.0 / s for s in scales]
    if divergent:
        return PathLength(None, qerr, True, growth, list(zip(eps, partial)), consts)

    k = decades
    while True:
        inc = np.diff(np.concatenate([[0.0], partial]))
        q = inc[-1] / inc[-2] if inc[-2] > 0 else 0.0
        tail = inc[-1] * q / (1 - q) if 0 <= q < 1 else math.inf
        err = abs(tail) + qerr
        if err <= tol:
            value = partial[-1] + tail
            return PathLength(value, err, False, "bounded", list(zip(eps, partial)),
                              {"tail": tail, "ratio": q, "decades": k}, converged=True)
        if k >= max_decades:
            return PathLength(None, err, False, "undetermined", list(zip(eps, partial)),
                              {"tail": tail, "ratio": q, "decades": k})
        k += 1
        v, e = integrate(f, *bounds(k), tol=piece_tol)
        total += v
        qerr += e
        partial.append(total)
        scales.append(scale_of(k))
        eps.append(1.0 / scales[-1])


# ---------------------------------------------------------------------------
# divergence tests

@dataclass
class DivergenceVerdict:
    divergent: bool
    growth: str
    table: list  # rows (ray_angle, epsilon, partial_length)
    constants: dict = field(default_factory=dict)
    paths: list = field(default_factory=list)  # (label, PathLength)
    note: str = EVIDENCE_NOTE

    def __post_init__(self):
        if self.divergent and self.growth == "bounded":
            raise ValueError("divergent verdict needs an unbounded growth model")

    def summary(self):
        return {"divergent": self.divergent, "growth": self.growth,
                "constants": _jsonable(self.constants), "note": self.note,
                "paths": [{"path": lab, "divergent": pl.divergent, "growth": pl.growth,
                           "length": pl.value, "constants": _jsonable(pl.constants)}
                          for lab, pl in self.paths]}


def _jsonable(d):
    out = {}
    for k, v in d.items():
        if isinstance(v, (np.floating, np.integer)):
            v = v.item()
        elif isinstance(v, np.ndarray):
            v = v.tolist()
        out[k] = v
    return out


def ray_angles(n_rays: int, offset: float = 0.0) -> np.ndarray:
    """``n_rays`` equally spaced angles in ``(-pi, pi)``, off the slit."""
    th = -math.pi + 2 * math.pi * (np.arange(n_rays) + 0.5) / n_rays + offset
    return np.angle(np.exp(1j * th))


def _aggregate(results, table):
    divergent = all(pl.divergent for _, pl in results)
    worst = min(results, key=lambda lp: GROWTH_RANK[lp[1].growth])
    growth = worst[1].growth
    if divergent and growth == "bounded":  # pragma: no cover
        growth = "undetermined"
    return DivergenceVerdict(divergent, growth, table, dict(worst[1].constants), list(results))


def radial_divergence_test(m, n_rays: int = 8, r0: float = 1.0, offset: float = 0.0,
                           **kw) -> DivergenceVerdict:
    """Lengths along ``n_rays`` rays into the puncture.

    Divergent iff every ray diverges; the reported growth model is the
    weakest one seen over the rays.
    """
    results, table = [], []
    for th in ray_angles(n_rays, offset):
        pl = path_length(m, PathSpec.ray(th, r0), **kw)
        results.append((f"ray theta={th:.6f}", pl))
        table.extend((float(th), e, L) for e, L in pl.table)
    return _aggregate(results, table)


def weighted_divergence_test(form: AbsOneForm, n: int, n_rays: int = 4,
                             kappas=(1.0, 3.0), r0: float = 1.0, **kw) -> DivergenceVerdict:
    """Experimental probe for the density ``|form| |log z|^n``.

    Runs radial rays and logarithmic spirals, on which ``|log z|`` grows
    faster than on rays.  Results are evidence about the weighted integral,
    not a resolution of whether divergence forces a pole.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    m = ConformalMetric([form.with_log_weight(n)], name=f"|omega| |log z|^{n}")
    results, table = [], []
    for th in ray_angles(n_rays):
        pl = path_length(m, PathSpec.ray(th, r0), **kw)
        results.append((f"ray theta={th:.6f}", pl))
        table.extend((float(th), e, L) for e, L in pl.table)
    for kappa in kappas:
        pl = path_length(m, PathSpec.spiral(kappa, 0.0, r0), **kw)
        results.append((f"spiral kappa={kappa:g}", pl))
        table.extend((float("nan"), e, L) for e, L in pl.table)
    v = _aggregate(results, table)
    v.note = "experimental probe; " + EVIDENCE_NOTE
    return v


# ---------------------------------------------------------------------------
# curvature

def _brioschi(metric: RiemannMetric2, u, v, h):
    def comp(du, dv):
        return metric.components(u + du, v + dv)

    E0, F0, G0 = comp(0, 0)
    Eup, Fup, Gup = comp(h, 0)
    Eum, Fum, Gum = comp(-h, 0)
    Evp, Fvp, Gvp = comp(0, h)
    Evm, Fvm, Gvm = comp(0, -h)
    Fpp = comp(h, h)[1]
    Fpm = comp(h, -h)[1]
    Fmp = comp(-h, h)[1]
    Fmm = comp(-h, -h)[1]
    Eu, Ev = (Eup - Eum) / (2 * h), (Evp - Evm) / (2 * h)
    Fu, Fv = (Fup - Fum) / (2 * h), (Fvp - Fvm) / (2 * h)
    Gu, Gv = (Gup - Gum) / (2 * h), (Gvp - Gvm) / (2 * h)
    Evv = (Evp - 2 * E0 + Evm) / h ** 2
    Guu = (Gup - 2 * G0 + Gum) / h ** 2
    Fuv = (Fpp - Fpm - Fmp + Fmm) / (4 * h * h)
    det = E0 * G0 - F0 * F0
    if np.any(det <= 0):
        raise MetricDegenerate("EG - F^2 <= 0 near the evaluation point")
    a11 = -0.5 * Evv + Fuv - 0.5 * Guu
    detA = (a11 * (E0 * G0 - F0 * F0)
            - 0.5 * Eu * ((Fv - 0.5 * Gu) * G0 - F0 * 0.5 * Gv)
            + (Fu - 0.5 * Ev) * ((Fv - 0.5 * Gu) * F0 - E0 * 0.5 * Gv))
    detB = (-0.5 * Ev * (0.5 * Ev * G0 - F0 * 0.5 * Gu)
            + 0.5 * Gu * (0.5 * Ev * F0 - E0 * 0.5 * Gu))
    return (detA - detB) / det ** 2


def _conformal_K(metric: ConformalMetric, z, h):
    z = np.asarray(z, complex)
    with np.errstate(all="ignore"):
        D0 = metric.density(z)
        l0 = np.log(D0)
        lap = (np.log(metric.density(z + h)) + np.log(metric.density(z - h))
               + np.log(metric.density(z + 1j * h)) + np.log(metric.density(z - 1j * h)) - 4 * l0) / h ** 2
    if np.any(~np.isfinite(l0)) or np.any(D0 <= 0):
        raise MetricDegenerate("conformal density vanishes or blows up at the evaluation point")
    return -lap / (2 * D0)


def gauss_curvature(m, p, h: float = 1e-3):
    """Gaussian curvature at ``p`` by central differences with one Richardson level.

    ``m`` is a :class:`RiemannMetric2` (``p = (u, v)``, Brioschi formula) or
    a :class:`ConformalMetric` (``p`` complex, ``K = -Δ log D / (2 D)``).
    """
    if h < 1e-7:
        raise StepUnderflow(f"finite-difference step {h:g} too small for double precision")
    if isinstance(m, RiemannMetric2):
        u, v = p
        k1 = _brioschi(m, np.asarray(u, float), np.asarray(v, float), h)
        k2 = _brioschi(m, np.asarray(u, float), np.asarray(v, float), h / 2)
    else:
        z = np.asarray(p, complex)
        if np.any(np.abs(z) <= 2 * h) and _touches_puncture(m):
            raise StepUnderflow("stencil reaches the puncture; use a smaller step")
        k1 = _conformal_K(m, z, h)
        k2 = _conformal_K(m, z, h / 2)
    K = (4 * k2 - k1) / 3
    return K.item() if np.ndim(K) == 0 else K


def _touches_puncture(m):
    """Branch cuts, z^mu / log weights, or a density that blows up or vanishes at 0."""
    from .holo.expr import has_branch
    if any(has_branch(t.core) or t.mu or t.n for t in m.terms):
        return True
    with np.errstate(all="ignore"):
        d0 = m.density(np.array([0j]))
    return not (np.all(np.isfinite(d0)) and np.all(d0 > 0))


@dataclass
class TotalCurvature:
    value: float
    table: list  # (epsilon, cumulative total curvature)
    increments: list
    finite_indicator: bool
    tol: float


_GLS, _GLSW = np.polynomial.legendre.leggauss(48)


def total_curvature(m: ConformalMetric, r0: float, eps: float, n_theta: int = 128,
                    h: float = 1e-2, tol: float = 1e-6, per_decade: bool = True) -> TotalCurvature:
    """``∫∫ |K| dA`` over the annulus ``eps <= |z| <= r0``.

    Works in log-polar coordinates ``(s, theta)``, ``z = e^{s + i theta}``,
    where the metric is ``D r^2 (ds^2 + dtheta^2)`` and
    ``|K| dA = |Δ_{s,theta} log(D r^2)| / 2 ds dtheta``; finite differences
    there are scale-free near the puncture.  The table lists cumulative
    values as the inner radius shrinks geometrically (per decade).
    """
    s_hi, s_lo = math.log(r0), math.log(eps)
    if per_decade:
        n_pieces = max(1, int(math.ceil((s_hi - s_lo) / math.log(10.0) - 1e-12)))
    else:
        n_pieces = 1
    edges = [max(s_hi - k * math.log(10.0), s_lo) if per_decade else s_lo for k in range(1, n_pieces + 1)]
    theta = -math.pi + 2 * math.pi * (np.arange(n_theta) + 0.5) / n_theta

    def W(s, t):
        z = np.exp(s + 1j * t)
        with np.errstate(all="ignore"):
            return np.log(m.density(z)) + 2 * s

    def lap(s, t, hh):
        return (W(s + hh, t) + W(s - hh, t) + W(s, t + hh) + W(s, t - hh) - 4 * W(s, t)) / hh ** 2

    table, incs = [], []
    cum = 0.0
    top = s_hi
    for lo in edges:
        mid, half = 0.5 * (top + lo), 0.5 * (top - lo)
        S = mid + half * _GLS
        SS, TT = np.meshgrid(S, theta, indexing="ij")
        L1 = lap(SS, TT, h)
        L2 = lap(SS, TT, h / 2)
        integrand = np.abs((4 * L2 - L1) / 3) / 2
        if not np.all(np.isfinite(integrand)):
            raise MetricDegenerate("density degenerates inside the annulus")
        piece = abs(half) * float(_GLSW @ integrand.mean(axis=1)) * 2 * math.pi
        cum += piece
        incs.append(piece)
        table.append((math.exp(lo), cum))
        top = lo
    finite = len(incs) >= 2 and all(d < tol for d in incs[-2:])
    return TotalCurvature(cum, table, incs, finite, tol)
