"""Improper affine maps from a holomorphic pair (F, G)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateData, ExactnessViolation, QuadratureFailure
from ..holo import loop_period, path_integral
from ..holo.expr import Expr
from ..metric import AbsOneForm, ConformalMetric, disk_points


@dataclass(frozen=True)
class ImproperAffineData:
    F: Expr
    G: Expr
    z0: complex = 0.5
    r0: float = 1.0

    @property
    def dF(self):
        return self.F.diff()

    @property
    def dG(self):
        return self.G.diff()


def verify_affine_conditions(d: ImproperAffineData, n: int = 64, tol: float = 1e-9):
    """Check exactness of ``Re(F dG)`` and positivity of ``|dF|^2 + |dG|^2``.

    Returns the period of ``F dG`` around the puncture.
    """
    period = loop_period(d.F * d.dG, abs(d.z0))
    if abs(period.real) > tol:
        raise ExactnessViolation(period)
    Z = disk_points(d.r0, n)
    with np.errstate(all="ignore"):
        s = np.abs(d.dF(Z)) ** 2 + np.abs(d.dG(Z)) ** 2
    bad = ~(s > 0)
    if np.any(bad):
        raise DegenerateData(f"|dF|^2 + |dG|^2 vanishes at {Z[bad][0]:.6g}")
    return period


class ImproperAffineMap:
    """Evaluator ``z -> (x, y, w)`` in C x R for accepted data."""

    def __init__(self, d: ImproperAffineData, period: complex):
        self.data = d
        self.period = period
        self._FdG = d.F * d.dG

    def integral(self, z, route="radial-arc"):
        return path_integral(self._FdG, self.data.z0, z, route=route)

    def __call__(self, z):
        z = np.asarray(z, complex)
        F, G = self.data.F(z), self.data.G(z)
        I = self.integral(z)
        h = G + np.conj(F)
        w = 0.5 * (np.abs(G) ** 2 - np.abs(F) ** 2) + np.real(G * F - 2 * I)
        return np.stack([h.real, h.imag, w], axis=-1)

    def path_independence(self, z):
        """Largest ``|Re|`` difference of the integral over the two canonical routes."""
        a = self.integral(z, "radial-arc")
        b = self.integral(z, "arc-radial")
        return float(np.max(np.abs(np.real(a - b))))

    def normal(self, z):
        """``nu = (conj F - G, 1)`` as (Re, Im, 1)."""
        z = np.asarray(z, complex)
        c = np.conj(self.data.F(z)) - self.data.G(z)
        return np.stack([c.real, c.imag, np.ones(c.shape)], axis=-1)


def build_improper_affine(d: ImproperAffineData, check_points=None, tol: float = 1e-9):
    period = verify_affine_conditions(d, tol=tol)
    f = ImproperAffineMap(d, period)
    if check_points is None:
        check_points = disk_points(d.r0, 9, r_min=0.05 * d.r0)
    diff = f.path_independence(check_points)
    if diff > tol * max(1.0, float(np.max(np.abs(f(check_points))))):
        raise QuadratureFailure(f"Re of the F dG integral differs by {diff:.3e} between homotopic routes")
    return f


@dataclass
class AffineMetrics:
    ds2: ConformalMetric
    dtau2: ConformalMetric
    indicator: object  # z -> |dF/dG| - 1
    ratio: object  # z -> |dF/dG|
    normal: object


def improper_affine_metrics(d: ImproperAffineData) -> AffineMetrics:
    dF, dG = d.dF, d.dG
    ds2 = ConformalMetric([AbsOneForm(dF + dG)], name="ds2 = |dF + dG|^2")
    r2 = math.sqrt(2.0)
    dtau2 = ConformalMetric([AbsOneForm(r2 * dF), AbsOneForm(r2 * dG)],
                            name="dtau2 = 2(|dF|^2 + |dG|^2)")

    def ratio(z):
        with np.errstate(all="ignore"):
            return np.abs(dF(z)) / np.abs(dG(z))

    def indicator(z):
        return ratio(z) - 1.0

    def normal(z):
        z = np.asarray(z, complex)
        c = np.conj(d.F(z)) - d.G(z)
        return np.stack([c.real, c.imag, np.ones(c.shape)], axis=-1)

    return AffineMetrics(ds2, dtau2, indicator, ratio, normal)


def affine_chain_check(d: ImproperAffineData, n: int = 128, r_min: float = 0.0,
                       delta_region: float = 0.25, rtol: float = 1e-12):
    """Pointwise inequality suite on a disk grid.

    Forward chain ``ds2 <= (|dF| + |dG|)^2 <= dtau2`` at every grid point.
    Reverse bound ``ds2 >= (1 - delta)^2 / 2 (|dF|^2 + |dG|^2)`` where the
    smaller-to-larger ratio of ``|dF|, |dG|`` is below ``delta``; ``delta`` is
    fitted as the largest such ratio over ``|z| <= delta_region r0``.
    """
    Z = disk_points(d.r0, n, r_min=max(r_min, 1e-12))
    with np.errstate(all="ignore"):
        a = np.abs(d.dF(Z))
        b = np.abs(d.dG(Z))
        ds = np.abs(d.dF(Z) + d.dG(Z)) ** 2
    mid = (a + b) ** 2
    tau = 2 * (a * a + b * b)
    fin = np.isfinite(ds) & np.isfinite(tau)
    slack = rtol * np.maximum(tau, 1e-300)
    forward = bool(np.all((ds <= mid + slack) & (mid <= tau + slack) | ~fin))
    q = np.minimum(a, b) / np.maximum(a, b)
    near = (np.abs(Z) <= delta_region * d.r0) & fin
    delta = float(np.max(q[near])) if np.any(near) else float("nan")
    reverse = None
    n_rev = 0
    if delta < 1:
        sel = (q <= delta) & fin
        n_rev = int(sel.sum())
        lower = (1 - delta) ** 2 / 2 * (a * a + b * b)
        reverse = bool(np.all(ds[sel] >= lower[sel] * (1 - rtol)))
    return {"forward_chain": forward, "reverse_bound": reverse, "delta": delta,
            "n_points": int(fin.sum()), "n_reverse_points": n_rev}
