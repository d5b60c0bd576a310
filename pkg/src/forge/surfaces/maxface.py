"""Maxfaces: projections of null holomorphic curves into Minkowski 3-space.

Convention: ``F' = ((1 - g^2) omega, i (1 + g^2) omega, 2 g omega)``, so
``omega = (F1' - i F2') / 2`` and ``g = F3' / (F1' - i F2')``.  The projection
``p_L(zeta) = Re(-i zeta3, zeta1, zeta2)`` sends the curve to a surface whose
first coordinate is timelike.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataError, NotSpacelike, NullityViolation
from ..holo import loop_period, path_integral
from ..holo.expr import Expr, const
from ..metric import AbsOneForm, ConformalMetric, ModulusWeight, disk_points

LORENTZ = np.array([-1.0, 1.0, 1.0])


def p_L(zeta) -> np.ndarray:
    """``Re(-i zeta3, zeta1, zeta2)`` for ``zeta`` of shape (..., 3)."""
    zeta = np.asarray(zeta, complex)
    return np.stack([np.real(-1j * zeta[..., 2]), np.real(zeta[..., 0]), np.real(zeta[..., 1])], axis=-1)


@dataclass(frozen=True)
class MaxfaceData:
    """Null curve data.  Either primitives ``F`` or derivatives ``dF`` (or both)."""
    F: tuple | None = None
    dF: tuple | None = None
    g: Expr | None = None
    omega: Expr | None = None
    z0: complex = 0.5
    r0: float = 1.0

    @classmethod
    def from_weierstrass(cls, g: Expr, omega: Expr, z0=0.5, r0=1.0):
        dF = ((1 - g * g) * omega, const(1j) * (1 + g * g) * omega, 2 * g * omega)
        return cls(F=None, dF=dF, g=g, omega=omega, z0=z0, r0=r0)

    def derivatives(self):
        if self.dF is not None:
            return self.dF
        return tuple(f.diff() for f in self.F)

    def weierstrass(self):
        if self.g is not None and self.omega is not None:
            return self.g, self.omega
        d1, d2, d3 = self.derivatives()
        a = d1 - const(1j) * d2
        return d3 / a, a / 2


def nullity_residual(d: MaxfaceData, n: int = 48, rtol: float = 1e-10):
    """Relative residual ``|sum F_k'^2| / sum |F_k'|^2`` on a disk grid; raises on failure."""
    Z = disk_points(d.r0, n, r_min=0.02 * d.r0)
    d1, d2, d3 = (np.asarray(f(Z)) for f in d.derivatives())
    num = np.abs(d1 ** 2 + d2 ** 2 + d3 ** 2)
    den = np.abs(d1) ** 2 + np.abs(d2) ** 2 + np.abs(d3) ** 2
    rel = np.where(den > 0, num / np.where(den > 0, den, 1), num)
    fin = np.isfinite(rel)
    k = int(np.argmax(np.where(fin, rel, -1)))
    worst = float(rel[k])
    if worst > rtol:
        raise NullityViolation(worst, complex(Z[k]))
    return worst


def induced_metric(d: MaxfaceData, z):
    """First fundamental form ``(E, F, G)`` of ``p_L o F`` in (u, v), ``z = u + i v``."""
    z = np.asarray(z, complex)
    phi = np.stack([-1j * np.asarray(d.derivatives()[2](z), complex),
                    np.asarray(d.derivatives()[0](z), complex),
                    np.asarray(d.derivatives()[1](z), complex)], axis=-1)
    fu = phi.real
    fv = -phi.imag
    E = np.sum(LORENTZ * fu * fu, axis=-1)
    F = np.sum(LORENTZ * fu * fv, axis=-1)
    G = np.sum(LORENTZ * fv * fv, axis=-1)
    return E, F, G


def spacelike_check(d: MaxfaceData, n: int = 64, margin: float = 1e-3):
    """Induced form must be positive definite wherever ``|g|`` is away from 1."""
    g, _ = d.weierstrass()
    Z = disk_points(d.r0, n, r_min=0.02 * d.r0)
    E, F, G = induced_metric(d, Z)
    regular = np.abs(np.abs(g(Z)) - 1) > margin
    ok = (E > 0) & (G > 0) & (E * G - F * F > 0)
    bad = regular & ~ok & np.isfinite(E)
    if np.any(bad):
        raise NotSpacelike(f"induced form not positive definite at z = {Z[bad][0]:.6g}")
    return {"n_points": int(regular.sum()), "positive_definite": True}


class Maxface:
    def __init__(self, d: MaxfaceData):
        self.data = d

    def __call__(self, z):
        z = np.asarray(z, complex)
        if self.data.F is not None:
            zeta = np.stack([np.asarray(f(z), complex) * np.ones(z.shape) for f in self.data.F], axis=-1)
        else:
            zeta = np.stack([path_integral(f, self.data.z0, z) for f in self.data.dF], axis=-1)
        return p_L(zeta)

    def real_periods(self):
        """Real parts of the periods of ``p_L`` around the puncture (zero iff well defined)."""
        d1, d2, d3 = self.data.derivatives()
        r = abs(self.data.z0)
        zeta = np.array([loop_period(d1, r), loop_period(d2, r), loop_period(d3, r)])
        return p_L(zeta)


def build_maxface(d: MaxfaceData, n: int = 48, rtol: float = 1e-10):
    if d.F is None and d.dF is None:
        raise DataError("maxface data needs F or dF")
    residual = nullity_residual(d, n, rtol)
    spacelike_check(d, n)
    return Maxface(d), residual


def maxface_sigma_metric(g: Expr, omega: Expr) -> ConformalMetric:
    """``(1 + |g|^2)^2 |omega|^2``."""
    return ConformalMetric([AbsOneForm(omega)], [ModulusWeight(g, 1.0, 1.0, 2.0)],
                           name="dsigma2 = (1 + |g|^2)^2 |omega|^2")


def maxface_ds2(g: Expr, omega: Expr) -> ConformalMetric:
    """Induced metric ``(1 - |g|^2)^2 |omega|^2`` (degenerate on ``|g| = 1``)."""
    return ConformalMetric([AbsOneForm(omega)], [ModulusWeight(g, 1.0, -1.0, 2.0)],
                           name="ds2 = (1 - |g|^2)^2 |omega|^2")
