"""Tagged union over the surface classes, plus mesh export."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DataError
from .affine import build_improper_affine, improper_affine_metrics
from .cmc1 import cmc1_metric_bundle
from .flat_s3 import flat_s3_forms, flat_s3_integrate
from .flatfront import flat_front_metrics
from .maxface import build_maxface, maxface_ds2, maxface_sigma_metric

KINDS = ("improper_affine", "maxface", "cmc1", "flat_front", "flat_s3")


@dataclass
class SurfaceModel:
    kind: str
    data: object
    r0: float = 1.0
    options: dict = field(default_factory=dict)  # cmc1: model, eps_model, h
    punctured: bool = True

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DataError(f"unknown surface class {self.kind!r}")


@dataclass
class MetricPair:
    weak: object
    weak_name: str
    strong: object
    strong_name: str
    indicator: object  # z -> real, zero on the singular set (None: no singular set)
    indicator_name: str
    notes: list = field(default_factory=list)


def model_metrics(model: SurfaceModel) -> MetricPair:
    k, d = model.kind, model.data
    if k == "improper_affine":
        m = improper_affine_metrics(d)
        return MetricPair(m.dtau2, "dtau2", m.ds2, "ds2", m.indicator, "|dF/dG| - 1")
    if k == "maxface":
        g, w = d.weierstrass()
        return MetricPair(maxface_sigma_metric(g, w), "dsigma2", maxface_ds2(g, w), "ds2",
                          lambda z: np.abs(g(z)) - 1, "|g| - 1")
    if k == "cmc1":
        b = cmc1_metric_bundle(d)
        weak, name = (b.ds2_sharp, "ds2_sharp") if b.ds2_sharp is not None else (b.dhat_s2, "dhat_s2")
        return MetricPair(weak, name, b.ds2, "ds2", lambda z: np.abs(d.g(z)) - 1, "|g| - 1")
    if k == "flat_front":
        m = flat_front_metrics(d)
        return MetricPair(m.dtau2, "dtau2", m.ds2, "ds2", m.indicator, "|rho| - 1", list(m.notes))
    f = flat_s3_forms(d)
    return MetricPair(f.dtau2, "dtau2", f.I, "ds2", None, "none (immersion)",
                      ["weak metric du^2 + dv^2; the sum I + III = 2(du^2 + dv^2) "
                       "differs by a constant factor and gives the same verdict"])


def governing_forms(model: SurfaceModel):
    """Holomorphic objects whose pole order at the end is estimated."""
    k, d = model.kind, model.data
    if k == "improper_affine":
        return {"dF": d.dF, "dG": d.dG}
    if k == "maxface":
        g, w = d.weierstrass()
        return {"omega": w, "g": g}
    if k == "cmc1":
        from ..holo.expr import Z
        return {"Q/(z^2 dz)": d.Q / (Z * Z)}
    if k == "flat_front":
        m = flat_front_metrics(d)
        return {"omega_hat": m.data.omega_hat}
    return {}


# ---------------------------------------------------------------------------
# meshes

def write_obj(path, V, header=()):
    """Write a quad grid of vertices ``V`` (n, m, 3) as a triangulated OBJ."""
    V = np.asarray(V, float)
    n, m, _ = V.shape
    idx = np.arange(n * m).reshape(n, m) + 1
    with open(path, "w") as fh:
        for line in header:
            fh.write(f"# {line}\n")
        for p in V.reshape(-1, 3):
            fh.write(f"v {p[0]:.12g} {p[1]:.12g} {p[2]:.12g}\n")
        for i in range(n - 1):
            for j in range(m - 1):
                a, b, c, e = idx[i, j], idx[i + 1, j], idx[i + 1, j + 1], idx[i, j + 1]
                fh.write(f"f {a} {b} {c}\n")
                fh.write(f"f {a} {c} {e}\n")
    return n * m


def model_mesh(model: SurfaceModel, n: int = 64, r_min_frac: float = 0.05, rect=None, step=None):
    """Vertex grid and header lines for ``model``; CMC-1 and flat fronts have no immersion here."""
    k, d = model.kind, model.data
    if k == "flat_s3":
        rect = rect or model.options.get("rect", (-2.0, 2.0, -2.0, 2.0))
        step = step or model.options.get("step", 2e-2)
        mesh = flat_s3_integrate(d, rect, step)
        return mesh.stereographic(), ["flat immersion into S^3 in R^4",
                                       "projection: stereographic from (0,0,0,-1), x_i = f_i / (1 + f_4)",
                                       f"rectangle {tuple(rect)} step {step}"]
    r = np.geomspace(r_min_frac * model.r0, model.r0, n)
    th = np.linspace(-math.pi + 1e-9, math.pi - 1e-9, 2 * n)
    Zg = r[:, None] * np.exp(1j * th[None, :])
    if k == "improper_affine":
        f = build_improper_affine(d)
        return f(Zg), ["improper affine map into C x R = R^3", "coordinates (Re h, Im h, w), h = G + conj(F)"]
    if k == "maxface":
        f, _ = build_maxface(d)
        return f(Zg), ["maxface in Minkowski space", "coordinates p_L = Re(-i F3, F1, F2); x0 is timelike"]
    raise DataError(f"no immersion is constructed for class {k!r}; only its metrics are available")
