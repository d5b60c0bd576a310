"""Flat surfaces in the unit 3-sphere from a Chebyshev angle ``w = phi(u) + psi(v)``.

First fundamental form ``du^2 + 2 cos w du dv + dv^2``, second fundamental
form ``2 sin w du dv``.  The immersion is recovered by integrating the
Gauss-Weingarten system for the frame ``(f, f_u, f_v, n)`` in R^4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .. import _kernels
from ..errors import CompatibilityResidual, IntegrationBlowup, RangeViolation
from ..metric import RiemannMetric2, gauss_curvature


@dataclass(frozen=True)
class FlatS3Data:
    phi: Callable
    psi: Callable
    dphi: Callable
    dpsi: Callable
    name: str = ""

    def omega(self, u, v):
        return self.phi(np.asarray(u, float)) + self.psi(np.asarray(v, float))

    def omega_u(self, u, v):
        return self.dphi(np.asarray(u, float)) + 0 * np.asarray(v, float)

    def omega_v(self, u, v):
        return self.dpsi(np.asarray(v, float)) + 0 * np.asarray(u, float)

    def half_sin(self, u, v):
        """``sin(w/2)``, kept separate for accuracy when ``w`` is small."""
        return np.sin(0.5 * self.omega(u, v))


def _bump(x):
    return np.arcsin(np.exp(-x * x) / 2)


def _dbump(x):
    e = np.exp(-x * x)
    return -x * e / np.sqrt(1 - e * e / 4)


def counterexample() -> FlatS3Data:
    """``w = arcsin(e^{-u^2}/2) + arcsin(e^{-v^2}/2)``."""
    return FlatS3Data(_bump, _bump, _dbump, _dbump, "counterexample")


def constant_profile(w0: float = math.pi / 2) -> FlatS3Data:
    half = 0.5 * w0
    return FlatS3Data(lambda x: 0 * x + half, lambda x: 0 * x + half,
                      lambda x: 0 * x, lambda x: 0 * x, f"constant {w0:g}")


def check_range(d: FlatS3Data, rect, n: int = 101):
    u0, u1, v0, v1 = rect
    U, V = np.meshgrid(np.linspace(u0, u1, n), np.linspace(v0, v1, n), indexing="ij")
    w = d.omega(U, V)
    if not (np.all(w > 0) and np.all(w < math.pi)):
        raise RangeViolation(f"w leaves (0, pi) on the rectangle: range [{w.min():g}, {w.max():g}]")


@dataclass
class FlatS3Forms:
    I: RiemannMetric2
    II: RiemannMetric2
    III: RiemannMetric2
    dtau2: RiemannMetric2  # the weak metric du^2 + dv^2
    I_plus_III: RiemannMetric2

    def det_ratio(self, u, v):
        """``det II / det I`` from the closed forms."""
        d = self._data
        w = d.omega(u, v)
        s = np.sin(w)
        return -(s * s) / (s * s)


def flat_s3_forms(d: FlatS3Data) -> FlatS3Forms:
    one = lambda u, v: np.ones(np.broadcast(np.asarray(u), np.asarray(v)).shape)  # noqa: E731
    zero = lambda u, v: np.zeros(np.broadcast(np.asarray(u), np.asarray(v)).shape)  # noqa: E731

    def stable(u, v, du, dv):
        s = d.half_sin(u, v)
        return (du + dv) ** 2 - 4 * s * s * du * dv

    I = RiemannMetric2(one, lambda u, v: np.cos(d.omega(u, v)), one, form=stable,
                       name="I = du^2 + 2 cos w du dv + dv^2")
    II = RiemannMetric2(zero, lambda u, v: np.sin(d.omega(u, v)), zero, name="II = 2 sin w du dv")
    # III = II I^{-1} II = du^2 - 2 cos w du dv + dv^2
    III = RiemannMetric2(one, lambda u, v: -np.cos(d.omega(u, v)), one, name="III")
    tau = RiemannMetric2(one, zero, one, name="dtau2 = du^2 + dv^2")
    two = lambda u, v: 2 * one(u, v)  # noqa: E731
    sumf = RiemannMetric2(two, zero, two, name="I + III = 2(du^2 + dv^2)")
    forms = FlatS3Forms(I, II, III, tau, sumf)
    forms._data = d
    return forms


def flatness_checks(d: FlatS3Data, points, h: float = 1e-3):
    forms = flat_s3_forms(d)
    pts = np.asarray(points, float)
    det = np.array([forms.det_ratio(u, v) for u, v in pts])
    K = np.array([gauss_curvature(forms.I, (u, v), h) for u, v in pts])
    return {"det_ratio_error": float(np.max(np.abs(det + 1))), "max_abs_K": float(np.max(np.abs(K)))}


# ---------------------------------------------------------------------------
# frame integration

@dataclass
class S3Mesh:
    u: np.ndarray
    v: np.ndarray
    f: np.ndarray  # (nu, nv, 4)
    frames: np.ndarray  # (nu, nv, 4, 4) rows f, f_u, f_v, n
    drift: float

    def sphere_error(self):
        return float(np.max(np.abs(np.linalg.norm(self.f, axis=-1) - 1)))

    def tangency_error(self):
        F = self.frames
        a = np.abs(np.einsum("...i,...i->...", F[..., 0, :], F[..., 1, :]))
        b = np.abs(np.einsum("...i,...i->...", F[..., 0, :], F[..., 2, :]))
        return float(max(a.max(), b.max()))

    def stereographic(self):
        """Projection from ``(0, 0, 0, -1)`` onto R^3."""
        f = self.f
        return f[..., :3] / (1 + f[..., 3:4])


def _initial_frame(w):
    X = np.zeros((4, 4))
    X[0, 0] = 1.0
    X[1, 1] = 1.0
    X[2, 1] = math.cos(w)
    X[2, 2] = math.sin(w)
    X[3, 3] = 1.0
    return X


def _march_both(X0, centre_index, coords, wfun, dwfun, axis):
    """March from the centre to both ends of ``coords``; returns frames at all coords."""
    n_total = len(coords)
    nl = X0.shape[0]
    out = np.empty((n_total, nl, 4, 4))
    out[centre_index] = X0
    drift = 0.0
    h = coords[1] - coords[0]
    halves = np.linspace(coords[0], coords[-1], 2 * (n_total - 1) + 1)
    fwd = halves[2 * centre_index:]
    if len(fwd) > 1:
        w, dw = wfun(fwd), dwfun(fwd)
        X, dr = _kernels.frame_march(X0, w, dw, h, axis)
        out[centre_index:] = X
        drift = max(drift, dr)
    bwd = halves[: 2 * centre_index + 1][::-1]
    if len(bwd) > 1:
        w, dw = wfun(bwd), dwfun(bwd)
        X, dr = _kernels.frame_march(X0, w, dw, -h, axis)
        out[: centre_index + 1] = X[::-1]
        drift = max(drift, dr)
    return out, drift


def flat_s3_integrate(d: FlatS3Data, rect=(-2.0, 2.0, -2.0, 2.0), step: float = 1e-2,
                      residual_tol: float = 1e-6) -> S3Mesh:
    """Integrate the frame along the central v-line, then along every u-line."""
    check_range(d, rect)
    u0, u1, v0, v1 = rect
    nu = int(round((u1 - u0) / step))
    nv = int(round((v1 - v0) / step))
    u = np.linspace(u0, u1, nu + 1)
    v = np.linspace(v0, v1, nv + 1)
    iu = int(np.argmin(np.abs(u - 0.5 * (u0 + u1))))
    iv = int(np.argmin(np.abs(v - 0.5 * (v0 + v1))))
    uc, vc = u[iu], v[iv]
    X0 = _initial_frame(float(d.omega(uc, vc)))[None]
    residual = compatibility_residual(d, rect)
    if residual > residual_tol:
        raise CompatibilityResidual(f"Gauss-Codazzi residual {residual:.3e} exceeds {residual_tol:g}")

    vline, dr1 = _march_both(X0, iv, v, lambda s: d.omega(uc, s)[:, None],
                             lambda s: d.omega_v(uc, s)[:, None], 1)
    Xv = vline[:, 0]  # (nv+1, 4, 4)

    def wu(s):
        return d.omega(s[:, None], v[None, :])

    def dwu(s):
        return d.omega_u(s[:, None], v[None, :])

    frames, dr2 = _march_both(Xv, iu, u, wu, dwu, 0)  # (nu+1, nv+1, 4, 4)
    if not np.all(np.isfinite(frames)):
        raise IntegrationBlowup("frame integration produced non-finite values")
    return S3Mesh(u, v, frames[..., 0, :].copy(), frames, max(dr1, dr2))


def compatibility_residual(d: FlatS3Data, rect, n: int = 41, h: float = 1e-3):
    """Max entry of ``d_v A_u - d_u A_v + [A_u, A_v]`` over a sample grid."""
    u0, u1, v0, v1 = rect
    U, V = np.meshgrid(np.linspace(u0, u1, n), np.linspace(v0, v1, n), indexing="ij")
    U, V = U.ravel(), V.ravel()

    def Au(uu, vv):
        return _kernels._coeff_numpy(d.omega(uu, vv), d.omega_u(uu, vv), 0)

    def Av(uu, vv):
        return _kernels._coeff_numpy(d.omega(uu, vv), d.omega_v(uu, vv), 1)

    dAu_v = (-Au(U, V + 2 * h) + 8 * Au(U, V + h) - 8 * Au(U, V - h) + Au(U, V - 2 * h)) / (12 * h)
    dAv_u = (-Av(U + 2 * h, V) + 8 * Av(U + h, V) - 8 * Av(U - h, V) + Av(U - 2 * h, V)) / (12 * h)
    A, B = Au(U, V), Av(U, V)
    R = dAu_v - dAv_u + A @ B - B @ A
    return float(np.max(np.abs(R)))


def mesh_metric_error(d: FlatS3Data, mesh: S3Mesh):
    """Induced ``E, F, G`` from fourth-order central differences against ``I``."""
    f = mesh.f
    hu = mesh.u[1] - mesh.u[0]
    hv = mesh.v[1] - mesh.v[0]
    fu = (-f[4:, 2:-2] + 8 * f[3:-1, 2:-2] - 8 * f[1:-3, 2:-2] + f[:-4, 2:-2]) / (12 * hu)
    fv = (-f[2:-2, 4:] + 8 * f[2:-2, 3:-1] - 8 * f[2:-2, 1:-3] + f[2:-2, :-4]) / (12 * hv)
    E = np.sum(fu * fu, axis=-1)
    F = np.sum(fu * fv, axis=-1)
    G = np.sum(fv * fv, axis=-1)
    U, V = np.meshgrid(mesh.u[2:-2], mesh.v[2:-2], indexing="ij")
    c = np.cos(d.omega(U, V))
    return float(max(np.max(np.abs(E - 1)), np.max(np.abs(F - c)), np.max(np.abs(G - 1))))
