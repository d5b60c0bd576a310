"""Flat fronts in hyperbolic space through their canonical forms.

``omega = z^mu omega_hat dz`` and ``theta = rho omega`` with
``rho = z^nu rho_hat``; ``mu, nu`` lie in ``[0, 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import RangeViolation, SingularOnDomain
from ..holo.expr import Expr, Z
from ..metric import AbsOneForm, ConformalMetric, disk_points


@dataclass(frozen=True)
class FlatFrontData:
    omega_hat: Expr
    rho_hat: Expr
    mu: float = 0.0
    nu: float = 0.0
    r0: float = 1.0

    def __post_init__(self):
        for name in ("mu", "nu"):
            v = getattr(self, name)
            if not 0 <= v < 1:
                raise RangeViolation(f"{name} = {v} is outside [0, 1)")

    def rho_abs(self, z):
        z = np.asarray(z, complex)
        with np.errstate(all="ignore"):
            return np.abs(z) ** self.nu * np.abs(self.rho_hat(z))


def _normalize(expo, core):
    """Write ``z^expo core`` with the exponent shifted into ``[0, 1)``."""
    k = int(np.floor(expo))
    expo -= k
    if k:
        core = core * Z ** k
    if expo >= 1 - 1e-15:
        expo, core = 0.0, core * Z
    return float(expo) + 0.0, core


def exchange_roles(d: FlatFrontData) -> FlatFrontData:
    """Swap ``omega`` and ``theta``, so ``rho -> 1/rho``."""
    mu, oh = _normalize(d.mu + d.nu, d.omega_hat * d.rho_hat)
    nu, rh = _normalize(-d.nu, 1 / d.rho_hat)
    return FlatFrontData(oh, rh, mu, nu, d.r0)


def _ppow(z, arg, mu):
    if arg is None:
        arg = np.angle(z)
    return np.abs(z) ** mu * np.exp(1j * mu * arg)


@dataclass(frozen=True)
class FrontMetric:
    """First fundamental form ``|omega + conj(theta)|^2``.

    Not conformal: the length element depends on the direction ``dz``.
    Powers ``z^mu`` follow the continuous argument supplied by the path.
    """
    data: FlatFrontData
    name: str = "ds2 = |omega + conj(theta)|^2"

    def line_element(self, z, dz, arg=None):
        d = self.data
        z = np.asarray(z, complex)
        with np.errstate(all="ignore"):
            w = _ppow(z, arg, d.mu) * d.omega_hat(z) * dz
            t = _ppow(z, arg, d.nu) * d.rho_hat(z) * w
            return np.abs(w + np.conj(t))

    def quadratic(self, u, v, du, dv):
        return self.line_element(np.asarray(u) + 1j * np.asarray(v), du + 1j * dv) ** 2


@dataclass
class FlatFrontMetrics:
    dtau2: ConformalMetric
    ds2: FrontMetric
    data: FlatFrontData  # after any role exchange
    exchanged: bool
    indicator: object  # |rho| - 1
    notes: list = field(default_factory=list)


def flat_front_metrics(d: FlatFrontData, n: int = 64) -> FlatFrontMetrics:
    Zs = disk_points(d.r0, n, r_min=1e-3 * d.r0)
    exchanged = False
    if np.median(d.rho_abs(Zs)) > 1:
        d = exchange_roles(d)
        exchanged = True
    dtau2 = ConformalMetric([AbsOneForm(d.omega_hat, d.mu), AbsOneForm(d.omega_hat * d.rho_hat, d.mu + d.nu)],
                            name="dtau2 = |omega|^2 + |theta|^2")
    notes = ["roles of omega and theta exchanged (median |rho| > 1)"] if exchanged else []
    return FlatFrontMetrics(dtau2, FrontMetric(d), d, exchanged, lambda z: d.rho_abs(z) - 1, notes)


def require_immersion(d: FlatFrontData, n: int = 64, r_min: float = 0.0, tol: float = 1e-9):
    """The immersion assumption: ``|rho| = 1`` nowhere on the sampled grid, and no sign change."""
    Zs = disk_points(d.r0, n, r_min=max(r_min, 1e-3 * d.r0))
    v = d.rho_abs(Zs) - 1
    v = v[np.isfinite(v)]
    if np.any(np.abs(v) <= tol) or (np.any(v > 0) and np.any(v < 0)):
        raise SingularOnDomain("|rho| = 1 is attained on the sampled domain")


def flat_front_bound_check(d: FlatFrontData, n: int = 128, rtol: float = 1e-12):
    """``|omega|^2 + |theta|^2 <= 2 |omega|^2`` where ``|rho| < 1``."""
    m = flat_front_metrics(d)
    dd = m.data
    Zs = disk_points(dd.r0, n, r_min=1e-3 * dd.r0)
    rho = dd.rho_abs(Zs)
    sel = rho < 1
    w2 = (np.abs(Zs) ** dd.mu * np.abs(dd.omega_hat(Zs))) ** 2
    tau = m.dtau2.density(Zs)
    ok = bool(np.all(tau[sel] <= 2 * w2[sel] * (1 + rtol)))
    return {"passed": ok, "n_points": int(sel.sum()), "exchanged": m.exchanged}
