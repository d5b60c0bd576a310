"""Hot loops: marching squares and the RK4 frame march.

Each kernel has a pure-numpy implementation (``*_numpy``) and, when numba is
importable, an ``@njit`` one (``*_numba``).  The public names dispatch to the
numba version unless ``FORGE_DISABLE_JIT=1`` is set in the environment before
import.  Both paths return identical results up to floating rounding.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and os.environ.get("FORGE_DISABLE_JIT", "0") not in ("1", "true", "yes")


def _njit(fn):
    if not HAVE_NUMBA:
        return None
    return numba.njit(cache=True)(fn)


# ---------------------------------------------------------------------------
# marching squares
#
# values[j, i] sits at (x[i], y[j]).  Cell (j, i) has corners
# c0=(j,i), c1=(j,i+1), c2=(j+1,i+1), c3=(j+1,i).  Edge ids:
# horizontal edge from (j,i) to (j,i+1) -> 2*(j*nx+i); vertical edge from
# (j,i) to (j+1,i) -> 2*(j*nx+i)+1.  A corner is "inside" when value >= 0.
# Output rows: x0, y0, x1, y1 and the two endpoint edge ids, ordered by cell
# then by segment within the cell.

def _ms_py(values, x, y):  # body shared by the numba build
    ny, nx = values.shape
    cap = 2 * (ny - 1) * (nx - 1)
    seg = np.empty((cap, 4))
    ids = np.empty((cap, 2), dtype=np.int64)
    m = 0
    ex = np.empty(4)
    ey = np.empty(4)
    eid = np.empty(4, dtype=np.int64)
    for j in range(ny - 1):
        for i in range(nx - 1):
            v0 = values[j, i]
            v1 = values[j, i + 1]
            v2 = values[j + 1, i + 1]
            v3 = values[j + 1, i]
            if not (np.isfinite(v0) and np.isfinite(v1) and np.isfinite(v2) and np.isfinite(v3)):
                continue
            b0 = v0 >= 0
            b1 = v1 >= 0
            b2 = v2 >= 0
            b3 = v3 >= 0
            # edge order: bottom(0-1), right(1-2), top(3-2), left(0-3)
            cross0 = b0 != b1
            cross1 = b1 != b2
            cross2 = b3 != b2
            cross3 = b0 != b3
            n = 0
            if cross0:
                t = v0 / (v0 - v1)
                ex[0] = x[i] + t * (x[i + 1] - x[i])
                ey[0] = y[j]
                eid[0] = 2 * (j * nx + i)
                n += 1
            if cross1:
                t = v1 / (v1 - v2)
                ex[1] = x[i + 1]
                ey[1] = y[j] + t * (y[j + 1] - y[j])
                eid[1] = 2 * (j * nx + i + 1) + 1
                n += 1
            if cross2:
                t = v3 / (v3 - v2)
                ex[2] = x[i] + t * (x[i + 1] - x[i])
                ey[2] = y[j + 1]
                eid[2] = 2 * ((j + 1) * nx + i)
                n += 1
            if cross3:
                t = v0 / (v0 - v3)
                ex[3] = x[i]
                ey[3] = y[j] + t * (y[j + 1] - y[j])
                eid[3] = 2 * (j * nx + i) + 1
                n += 1
            if n == 2:
                a = -1
                b = -1
                for k in range(4):
                    hit = (cross0 and k == 0) or (cross1 and k == 1) or (cross2 and k == 2) or (cross3 and k == 3)
                    if hit:
                        if a < 0:
                            a = k
                        else:
                            b = k
                seg[m, 0] = ex[a]
                seg[m, 1] = ey[a]
                seg[m, 2] = ex[b]
                seg[m, 3] = ey[b]
                ids[m, 0] = eid[a]
                ids[m, 1] = eid[b]
                m += 1
            elif n == 4:
                centre = 0.25 * (v0 + v1 + v2 + v3)
                if (centre >= 0) == b0:
                    p0, q0, p1, q1 = 0, 1, 3, 2
                else:
                    p0, q0, p1, q1 = 0, 3, 1, 2
                seg[m, 0] = ex[p0]
                seg[m, 1] = ey[p0]
                seg[m, 2] = ex[q0]
                seg[m, 3] = ey[q0]
                ids[m, 0] = eid[p0]
                ids[m, 1] = eid[q0]
                m += 1
                seg[m, 0] = ex[p1]
                seg[m, 1] = ey[p1]
                seg[m, 2] = ex[q1]
                seg[m, 3] = ey[q1]
                ids[m, 0] = eid[p1]
                ids[m, 1] = eid[q1]
                m += 1
    return seg[:m].copy(), ids[:m].copy()


def marching_squares_numpy(values, x, y):
    values = np.asarray(values, float)
    ny, nx = values.shape
    v0 = values[:-1, :-1]
    v1 = values[:-1, 1:]
    v2 = values[1:, 1:]
    v3 = values[1:, :-1]
    ok = np.isfinite(v0) & np.isfinite(v1) & np.isfinite(v2) & np.isfinite(v3)
    b0, b1, b2, b3 = v0 >= 0, v1 >= 0, v2 >= 0, v3 >= 0
    cross = np.stack([b0 != b1, b1 != b2, b3 != b2, b0 != b3], axis=-1) & ok[..., None]
    J, I = np.meshgrid(np.arange(ny - 1), np.arange(nx - 1), indexing="ij")
    xi, xi1 = x[I], x[I + 1]
    yj, yj1 = y[J], y[J + 1]
    with np.errstate(all="ignore"):
        t0 = v0 / (v0 - v1)
        t1 = v1 / (v1 - v2)
        t2 = v3 / (v3 - v2)
        t3 = v0 / (v0 - v3)
    ex = np.stack([xi + t0 * (xi1 - xi), xi1, xi + t2 * (xi1 - xi), xi], axis=-1)
    ey = np.stack([yj, yj + t1 * (yj1 - yj), yj1, yj + t3 * (yj1 - yj)], axis=-1)
    eid = np.stack([2 * (J * nx + I), 2 * (J * nx + I + 1) + 1,
                    2 * ((J + 1) * nx + I), 2 * (J * nx + I) + 1], axis=-1).astype(np.int64)
    count = cross.sum(axis=-1)
    cell = (J * (nx - 1) + I)

    # two-crossing cells: first and second crossing edge in edge order
    two = count == 2
    order = np.argsort(~cross, axis=-1, kind="stable")
    a2, b2_ = order[..., 0][two], order[..., 1][two]
    sel = np.nonzero(two)
    pa = (sel[0], sel[1], a2)
    pb = (sel[0], sel[1], b2_)
    segs = [np.stack([ex[pa], ey[pa], ex[pb], ey[pb]], axis=-1)]
    idl = [np.stack([eid[pa], eid[pb]], axis=-1)]
    keys = [cell[two] * 2]

    # saddles
    four = count == 4
    if np.any(four):
        sj, si = np.nonzero(four)
        centre = 0.25 * (v0 + v1 + v2 + v3)[four]
        same = (centre >= 0) == b0[four]
        p0 = np.zeros_like(sj)
        q0 = np.where(same, 1, 3)
        p1 = np.where(same, 3, 1)
        q1 = np.full_like(sj, 2)
        for (p, q, off) in ((p0, q0, 0), (p1, q1, 1)):
            segs.append(np.stack([ex[sj, si, p], ey[sj, si, p], ex[sj, si, q], ey[sj, si, q]], axis=-1))
            idl.append(np.stack([eid[sj, si, p], eid[sj, si, q]], axis=-1))
            keys.append(cell[four] * 2 + off)
    seg = np.concatenate(segs).reshape(-1, 4)
    ids = np.concatenate(idl).reshape(-1, 2)
    key = np.concatenate(keys)
    perm = np.argsort(key, kind="stable")
    return seg[perm], ids[perm]


_ms_numba = _njit(_ms_py)


def marching_squares_numba(values, x, y):
    if _ms_numba is None:  # pragma: no cover
        raise RuntimeError("numba is not available")
    return _ms_numba(np.ascontiguousarray(values, dtype=float),
                     np.ascontiguousarray(x, dtype=float),
                     np.ascontiguousarray(y, dtype=float))


def marching_squares(values, x, y):
    """Zero-level segments of ``values`` sampled on the grid ``x`` by ``y``."""
    if USE_NUMBA:
        return marching_squares_numba(values, x, y)
    return marching_squares_numpy(values, x, y)


# ---------------------------------------------------------------------------
# frame march
#
# Frame rows: f, f_u, f_v, n in R^4 for a flat Chebyshev net in S^3 with
# I = du^2 + 2 cos w du dv + dv^2 and II = 2 sin w du dv.  Marching along u
# (axis=0) or v (axis=1) solves X' = A X with A given below; after every
# RK4 step the frame (f, f_u, (f_v - cos w f_u)/sin w, n) is replaced by the
# nearest orthogonal matrix.

def _coeff_py(w, dw, axis, A):
    c = np.cos(w)
    s = np.sin(w)
    cot = c / s
    for a in range(4):
        for b in range(4):
            A[a, b] = 0.0
    if axis == 0:
        A[0, 1] = 1.0
        A[1, 0] = -1.0
        A[1, 1] = cot * dw
        A[1, 2] = -dw / s
        A[2, 0] = -c
        A[2, 3] = s
        A[3, 1] = cot
        A[3, 2] = -1.0 / s
    else:
        A[0, 2] = 1.0
        A[1, 0] = -c
        A[1, 3] = s
        A[2, 0] = -1.0
        A[2, 1] = -dw / s
        A[2, 2] = cot * dw
        A[3, 1] = -1.0 / s
        A[3, 2] = cot


_march_numba_impl = None
if HAVE_NUMBA:
    _coeff_nb = numba.njit(cache=True)(_coeff_py)

    @numba.njit(cache=True)
    def _mm(A, X, out):
        for a in range(4):
            for b in range(4):
                acc = 0.0
                for c in range(4):
                    acc += A[a, c] * X[c, b]
                out[a, b] = acc

    @numba.njit(cache=True)
    def _axpy(X, t, K, out):
        for a in range(4):
            for b in range(4):
                out[a, b] = X[a, b] + t * K[a, b]

    @numba.njit(cache=True)
    def _gram(Y, out):  # Y @ Y.T
        for a in range(4):
            for b in range(4):
                acc = 0.0
                for c in range(4):
                    acc += Y[a, c] * Y[b, c]
                out[a, b] = acc

    @numba.njit(cache=True)
    def _march_numba_impl(X0, w, dw, h, axis):
        nsteps = (w.shape[0] - 1) // 2
        nl = X0.shape[0]
        out = np.empty((nsteps + 1, nl, 4, 4))
        drift = 0.0
        A1 = np.empty((4, 4))
        A2 = np.empty((4, 4))
        A3 = np.empty((4, 4))
        k1 = np.empty((4, 4))
        k2 = np.empty((4, 4))
        k3 = np.empty((4, 4))
        k4 = np.empty((4, 4))
        T = np.empty((4, 4))
        Y = np.empty((4, 4))
        P = np.empty((4, 4))
        for l in range(nl):
            X = X0[l].copy()
            out[0, l] = X
            for k in range(nsteps):
                _coeff_nb(w[2 * k, l], dw[2 * k, l], axis, A1)
                _coeff_nb(w[2 * k + 1, l], dw[2 * k + 1, l], axis, A2)
                _coeff_nb(w[2 * k + 2, l], dw[2 * k + 2, l], axis, A3)
                _mm(A1, X, k1)
                _axpy(X, 0.5 * h, k1, T)
                _mm(A2, T, k2)
                _axpy(X, 0.5 * h, k2, T)
                _mm(A2, T, k3)
                _axpy(X, h, k3, T)
                _mm(A3, T, k4)
                for a in range(4):
                    for b in range(4):
                        X[a, b] += (h / 6.0) * (k1[a, b] + 2.0 * k2[a, b] + 2.0 * k3[a, b] + k4[a, b])
                wn = w[2 * k + 2, l]
                c = np.cos(wn)
                s = np.sin(wn)
                for b in range(4):
                    Y[0, b] = X[0, b]
                    Y[1, b] = X[1, b]
                    Y[2, b] = (X[2, b] - c * X[1, b]) / s
                    Y[3, b] = X[3, b]
                _gram(Y, P)
                for a in range(4):
                    for b in range(4):
                        e = abs(P[a, b] - (1.0 if a == b else 0.0))
                        if e > drift:
                            drift = e
                for _ in range(2):
                    _gram(Y, P)
                    for a in range(4):
                        for b in range(4):
                            P[a, b] = 0.5 * ((3.0 if a == b else 0.0) - P[a, b])
                    _mm(P, Y, T)
                    Y[:, :] = T
                for b in range(4):
                    X[0, b] = Y[0, b]
                    X[1, b] = Y[1, b]
                    X[2, b] = c * Y[1, b] + s * Y[2, b]
                    X[3, b] = Y[3, b]
                out[k + 1, l] = X
        return out, drift


def _coeff_numpy(w, dw, axis):
    c, s = np.cos(w), np.sin(w)
    cot = c / s
    A = np.zeros(w.shape + (4, 4))
    if axis == 0:
        A[..., 0, 1] = 1.0
        A[..., 1, 0] = -1.0
        A[..., 1, 1] = cot * dw
        A[..., 1, 2] = -dw / s
        A[..., 2, 0] = -c
        A[..., 2, 3] = s
        A[..., 3, 1] = cot
        A[..., 3, 2] = -1.0 / s
    else:
        A[..., 0, 2] = 1.0
        A[..., 1, 0] = -c
        A[..., 1, 3] = s
        A[..., 2, 0] = -1.0
        A[..., 2, 1] = -dw / s
        A[..., 2, 2] = cot * dw
        A[..., 3, 1] = -1.0 / s
        A[..., 3, 2] = cot
    return A


def frame_march_numpy(X0, w, dw, h, axis):
    """Vectorized over lines: every line advances one step at a time."""
    X = np.array(X0, dtype=float)
    nsteps = (w.shape[0] - 1) // 2
    out = np.empty((nsteps + 1,) + X.shape)
    out[0] = X
    drift = 0.0
    I4 = np.eye(4)
    for k in range(nsteps):
        A1 = _coeff_numpy(w[2 * k], dw[2 * k], axis)
        A2 = _coeff_numpy(w[2 * k + 1], dw[2 * k + 1], axis)
        A3 = _coeff_numpy(w[2 * k + 2], dw[2 * k + 2], axis)
        k1 = A1 @ X
        k2 = A2 @ (X + 0.5 * h * k1)
        k3 = A2 @ (X + 0.5 * h * k2)
        k4 = A3 @ (X + h * k3)
        X = X + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        c = np.cos(w[2 * k + 2])[:, None]
        s = np.sin(w[2 * k + 2])[:, None]
        Y = X.copy()
        Y[:, 2] = (X[:, 2] - c * X[:, 1]) / s
        YY = Y @ np.swapaxes(Y, -1, -2)
        drift = max(drift, float(np.max(np.abs(YY - I4))))
        for _ in range(2):
            Y = 0.5 * (3.0 * I4 - Y @ np.swapaxes(Y, -1, -2)) @ Y
        X = Y.copy()
        X[:, 2] = c * Y[:, 1] + s * Y[:, 2]
        out[k + 1] = X
    return out, drift


def frame_march_numba(X0, w, dw, h, axis):
    if _march_numba_impl is None:  # pragma: no cover
        raise RuntimeError("numba is not available")
    return _march_numba_impl(np.ascontiguousarray(X0, dtype=float),
                             np.ascontiguousarray(w, dtype=float),
                             np.ascontiguousarray(dw, dtype=float), float(h), int(axis))


def frame_march(X0, w, dw, h, axis):
    """RK4 march of frames ``X0`` (lines, 4, 4).

    ``w`` and ``dw`` have shape (2*nsteps+1, lines): the angle function and
    its derivative along the marching direction at whole and half steps.
    Returns frames of shape (nsteps+1, lines, 4, 4) and the largest departure
    from orthonormality removed by the per-step re-projection (two
    Newton-Schulz polar iterations on ``(f, f_u, (f_v - cos w f_u)/sin w, n)``).
    """
    if USE_NUMBA:
        return frame_march_numba(X0, w, dw, h, axis)
    return frame_march_numpy(X0, w, dw, h, axis)
