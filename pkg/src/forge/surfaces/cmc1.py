"""Metric bundle of CMC-1 faces in de Sitter space, and the two end models.

Only metric-level objects are produced; no immersion is constructed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateGaussMap, ModelDomainTooSmall
from ..holo import schwarzian
from ..holo.analysis import circle_points
from ..holo.expr import Const, Expr, Z, const, log
from ..metric import AbsOneForm, ConformalMetric, ModulusWeight, disk_points


def _nonconstant(e: Expr, what: str):
    d = e.diff()
    probe = d(np.array([0.31 + 0.17j, -0.23 + 0.41j, 0.05 - 0.37j]))
    if (isinstance(d, Const) and d.value == 0) or np.all(probe == 0):
        raise DegenerateGaussMap(f"{what} = {e} is constant")
    return d


@dataclass(frozen=True)
class Cmc1Data:
    """Secondary Gauss map ``g``, Weierstrass form ``omega`` (core), hyperbolic
    Gauss map ``G``, Hopf differential ``Q`` (core).  One of ``omega``/``Q``
    may be omitted; they are tied by ``Q = omega dg``."""
    g: Expr
    omega: Expr | None = None
    G: Expr | None = None
    Q: Expr | None = None
    r0: float = 1.0

    def __post_init__(self):
        dg = _nonconstant(self.g, "g")
        if self.omega is None and self.Q is None:
            raise DegenerateGaussMap("need omega or Q")
        if self.omega is None:
            object.__setattr__(self, "omega", self.Q / dg)
        if self.Q is None:
            object.__setattr__(self, "Q", self.omega * dg)

    @property
    def dg(self):
        return self.g.diff()


@dataclass
class Cmc1Metrics:
    ds2: ConformalMetric
    dhat_s2: ConformalMetric
    ds2_sharp: ConformalMetric | None
    dsigma2: ConformalMetric

    def as_dict(self):
        return {"ds2": self.ds2, "dhat_s2": self.dhat_s2, "ds2_sharp": self.ds2_sharp,
                "dsigma2": self.dsigma2}


def cmc1_metric_bundle(d: Cmc1Data) -> Cmc1Metrics:
    g, w, dg = d.g, d.omega, d.dg
    ds2 = ConformalMetric([AbsOneForm(w)], [ModulusWeight(g, 1, -1, 2)],
                          name="ds2 = (1 - |g|^2)^2 |omega|^2")
    dhat = ConformalMetric([AbsOneForm(w)], [ModulusWeight(g, 1, 1, 2)],
                           name="dhat_s2 = (1 + |g|^2)^2 |omega|^2")
    sharp = None
    if d.G is not None:
        dG = _nonconstant(d.G, "G")
        sharp = ConformalMetric([AbsOneForm(d.Q / dG)], [ModulusWeight(d.G, 1, 1, 2)],
                                name="ds2_sharp = (1 + |G|^2)^2 |Q/dG|^2")
    dsigma = ConformalMetric([AbsOneForm(2 * dg)], [ModulusWeight(g, 1, -1, -2)],
                             name="dsigma2 = 4 |dg|^2 / (1 - |g|^2)^2")
    return Cmc1Metrics(ds2, dhat, sharp, dsigma)


def cmc1_identity_check(d: Cmc1Data, n: int = 96, rtol: float = 1e-9, margin: float = 1e-6):
    """``ds2 * dsigma2 = 4 |Q|^2`` pointwise (relative), away from ``|g| = 1``."""
    m = cmc1_metric_bundle(d)
    Zs = disk_points(d.r0, n, r_min=1e-3 * d.r0)
    Zs = Zs[np.abs(np.abs(d.g(Zs)) - 1) > margin]
    lhs = m.ds2.density(Zs) * m.dsigma2.density(Zs)
    rhs = 4 * np.abs(d.Q(Zs)) ** 2
    fin = np.isfinite(lhs) & np.isfinite(rhs) & (rhs > 0)
    rel = np.abs(lhs[fin] - rhs[fin]) / rhs[fin]
    worst = float(rel.max()) if rel.size else 0.0
    return {"max_relative_error": worst, "passed": worst <= rtol, "n_points": int(fin.sum())}


def swap_gauss_map(d: Cmc1Data) -> Cmc1Data:
    """``(g, omega) -> (1/g, -g^2 omega)``; ``Q`` and ``ds2`` are unchanged."""
    return Cmc1Data(1 / d.g, -(d.g * d.g) * d.omega, d.G, d.Q, d.r0)


def cmc1_elliptic_check(d: Cmc1Data, n: int = 128, eps: float | None = None, rtol: float = 1e-12):
    """Chain ``dhat_s2 <= 4 |omega|^2 <= (4/eps^2) ds2`` on a disk grid.

    The Gauss map is replaced by ``1/g`` when ``|g| > 1`` at the sampled
    median.  ``eps`` defaults to the fitted ``1 - max |g|^2``.
    """
    Zs = disk_points(d.r0, n, r_min=1e-3 * d.r0)
    swapped = False
    if np.median(np.abs(d.g(Zs))) > 1:
        d = swap_gauss_map(d)
        swapped = True
    g2 = np.abs(d.g(Zs)) ** 2
    eps_fit = float(1 - g2.max())
    if eps is None:
        eps = eps_fit
    if not eps > 0:
        return {"passed": False, "eps": eps, "eps_fitted": eps_fit, "swapped": swapped,
                "note": "|g|^2 reaches 1 on the grid"}
    m = cmc1_metric_bundle(d)
    hat = m.dhat_s2.density(Zs)
    w2 = np.abs(d.omega(Zs)) ** 2
    ds = m.ds2.density(Zs)
    first = bool(np.all(hat <= 4 * w2 * (1 + rtol)))
    second = bool(np.all(4 * w2 <= 4 / eps ** 2 * ds * (1 + rtol)))
    return {"passed": first and second, "hat_le_4omega": first, "4omega_le_ds": second,
            "eps": eps, "eps_fitted": eps_fit, "swapped": swapped, "n_points": int(len(Zs))}


def hopf_and_schwarzian_identity(g: Expr, G: Expr, Q: Expr | None = None, omega: Expr | None = None,
                                 points=None):
    """Residual ``2Q - S(g) + S(G)`` at ``points``; ``Q = omega dg`` when not given."""
    dg = _nonconstant(g, "g")
    _nonconstant(G, "G")
    if Q is None:
        if omega is None:
            raise DegenerateGaussMap("need Q or omega")
        Q = omega * dg
    if points is None:
        points = disk_points(0.9, 17, r_min=0.05)
    res = 2 * Q(points) - schwarzian(g)(points) + schwarzian(G)(points)
    return np.asarray(res)


# ---------------------------------------------------------------------------
# parabolic model

@dataclass
class ParabolicModel:
    h: Expr
    eps: int
    g: Expr
    dg: Expr
    dg_closed: Expr

    def closed_form_error(self, z):
        a, b = self.dg(z), self.dg_closed(z)
        return np.abs(a - b) / np.maximum(np.abs(b), 1e-300)

    def one_minus_g2_closed(self, z):
        z = np.asarray(z, complex)
        hv = self.h(z)
        return 4 * (hv.real + self.eps * np.log(np.abs(z))) / np.abs(np.log(z) + self.eps * (hv + 1)) ** 2


def cmc1_parabolic_g(h: Expr, eps: int) -> ParabolicModel:
    """``g = (ghat - i)/(ghat + i)`` with ``ghat = i (h + eps log z)``."""
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    ghat = const(1j) * (h + eps * log(Z))
    g = (ghat - const(1j)) / (ghat + const(1j))
    H = h + eps * log(Z)
    closed = 2 * (Z * h.diff() + eps) / (Z * (H + 1) ** 2)
    return ParabolicModel(h, eps, g, g.diff(), closed)


def cmc1_parabolic_model(h: Expr, eps: int, r_min: float = 1e-8, r_max: float = 1e-2,
                         n_theta: int = 256, per_decade: int = 4, stability: float = 0.2):
    """Symbolic ``g``, ``g'`` and the boundary-behaviour report.

    ``c1`` is the supremum of ``|g'| |z| |log z|^2`` and ``c2`` the infimum
    of ``|1 - |g|^2| |log z|`` over annuli ``r_k <= |z| <= r_max`` with
    ``r_k`` shrinking one decade at a time down to ``r_min``.  Both must vary
    by at most ``stability`` (relative) across the nested annuli.
    """
    model = cmc1_parabolic_g(h, eps)
    n_dec = int(round(math.log10(r_max / r_min)))
    radii = np.logspace(math.log10(r_max), math.log10(r_min), n_dec * per_decade + 1)
    rows = []
    for r in radii:
        z = circle_points(r, n_theta)
        L = np.log(z)
        q1 = np.abs(model.dg(z)) * r * np.abs(L) ** 2
        q2 = np.abs(1 - np.abs(model.g(z)) ** 2) * np.abs(L)
        lim = np.abs(h(z) + eps * L + 1) / np.abs(L)
        rows.append((r, float(q1.max()), float(q2.min()), float(np.abs(model.g(z)).max()),
                     float(np.abs(np.abs(model.g(z)) - 1).max()), float(np.abs(lim - 1).max())))
    c1_win, c2_win, windows = [], [], []
    for k in range(1, n_dec + 1):
        rk = r_max * 10.0 ** (-k)
        sel = [row for row in rows if row[0] >= rk * (1 - 1e-9)]
        c1_win.append(max(row[1] for row in sel))
        c2_win.append(min(row[2] for row in sel))
        windows.append(rk)
    spread1 = (max(c1_win) - min(c1_win)) / min(c1_win)
    spread2 = (max(c2_win) - min(c2_win)) / min(c2_win)
    z_probe = circle_points(r_max, 64)
    closed_err = float(np.max(model.closed_form_error(z_probe)))
    identity_err = float(np.max(np.abs((1 - np.abs(model.g(z_probe)) ** 2) - model.one_minus_g2_closed(z_probe))))
    report = {
        "c1": c1_win[-1], "c2": c2_win[-1],
        "c1_windows": list(zip(windows, c1_win)), "c2_windows": list(zip(windows, c2_win)),
        "c1_spread": spread1, "c2_spread": spread2, "stability": stability,
        "stable": spread1 <= stability and spread2 <= stability,
        "g_modulus_deviation": [(row[0], row[4]) for row in rows],
        "limit_ratio_deviation": [(row[0], row[5]) for row in rows],
        "dg_closed_form_error": closed_err, "one_minus_g2_identity_error": identity_err,
    }
    if not report["stable"]:
        raise ModelDomainTooSmall(
            f"bound constants not stable on [{r_min:g}, {r_max:g}]: spreads {spread1:.3f}, {spread2:.3f}")
    return model, report
