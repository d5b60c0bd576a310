"""Zero contours of singular-set indicators on a square grid."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .._kernels import marching_squares
from ..errors import GridTooCoarse


@dataclass
class SingularCurve:
    polylines: list  # complex arrays of vertices (z = u + i v)
    indicator: str
    grid: int
    extent: tuple  # (xmin, xmax, ymin, ymax)
    closed: list = field(default_factory=list)

    @property
    def empty(self):
        return not self.polylines

    def vertices(self):
        if not self.polylines:
            return np.zeros(0, complex)
        return np.concatenate(self.polylines)

    def min_radius(self, centre=0j):
        v = self.vertices()
        return float(np.min(np.abs(v - centre))) if v.size else float("inf")

    def compact_near(self, r_check, centre=0j):
        """No contour vertex within ``r_check`` of the end (on the probed grid)."""
        return self.min_radius(centre) >= r_check

    def summary(self):
        return {"indicator": self.indicator, "grid": self.grid, "extent": list(self.extent),
                "n_curves": len(self.polylines), "closed": list(self.closed),
                "n_vertices": int(self.vertices().size),
                "min_radius": None if self.empty else self.min_radius()}


def _chain(seg, ids):
    """Join segments sharing edge crossings into polylines."""
    m = len(seg)
    by_edge = {}
    for k in range(m):
        for e in ids[k]:
            by_edge.setdefault(int(e), []).append(k)
    used = np.zeros(m, bool)
    lines, closed = [], []
    for start in range(m):
        if used[start]:
            continue
        used[start] = True
        pts = [seg[start, 0] + 1j * seg[start, 1], seg[start, 2] + 1j * seg[start, 3]]
        ends = [int(ids[start, 0]), int(ids[start, 1])]
        # grow forward from ends[1], then backward from ends[0]
        for side in (1, 0):
            edge = ends[side]
            while True:
                nxt = [k for k in by_edge.get(edge, ()) if not used[k]]
                if not nxt:
                    break
                k = nxt[0]
                used[k] = True
                if int(ids[k, 0]) == edge:
                    p, edge = seg[k, 2] + 1j * seg[k, 3], int(ids[k, 1])
                else:
                    p, edge = seg[k, 0] + 1j * seg[k, 1], int(ids[k, 0])
                if side == 1:
                    pts.append(p)
                else:
                    pts.insert(0, p)
            ends[side] = edge
        is_closed = ends[0] == ends[1] and len(pts) > 2
        if is_closed:
            pts[-1] = pts[0]
        lines.append(np.array(pts))
        closed.append(bool(is_closed))
    return lines, closed


def extract_zero_set(indicator, extent, n: int, name: str = "", mask=None) -> SingularCurve:
    """Zero contour of ``indicator(z)`` on an ``n x n`` grid.

    ``mask(z)`` (optional) marks grid points outside the domain; their
    values are replaced by NaN and no segment touches them.
    """
    x0, x1, y0, y1 = extent
    x = np.linspace(x0, x1, n)
    y = np.linspace(y0, y1, n)
    Z = x[None, :] + 1j * y[:, None]
    with np.errstate(all="ignore"):
        V = np.asarray(indicator(Z), float)
    if mask is not None:
        V = np.where(mask(Z), V, np.nan)
    seg, ids = marching_squares(V, x, y)
    lines, closed = _chain(seg, ids)
    return SingularCurve(lines, name, n, tuple(extent), closed)


def singular_set_extract(indicator, extent, n: int = 512, name: str = "", mask=None,
                         check_refinement: bool = True) -> SingularCurve:
    """Extract the singular set and guard against under-resolution.

    The contour topology (number of curves and which are closed) must agree
    with the one found on the half-resolution grid, else
    :class:`GridTooCoarse` is raised.
    """
    curve = extract_zero_set(indicator, extent, n, name, mask)
    if check_refinement and n >= 16:
        coarse = extract_zero_set(indicator, extent, n // 2, name, mask)
        if sorted(coarse.closed) != sorted(curve.closed):
            raise GridTooCoarse(
                f"singular set topology changes between grids {n // 2} and {n}: "
                f"{len(coarse.polylines)} vs {len(curve.polylines)} curves")
    return curve
