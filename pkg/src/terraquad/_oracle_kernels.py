"""Compiled projection for the numeric oracle; shares no code with the solver kernels."""
import math

import numpy as np
from numba import njit


@njit(cache=True, error_model="numpy")
def project_rows(Z, xs, ys):
    """Row-wise feasible repair of (a, bx, by, cx, cy, d); returns (area, params)."""
    m = Z.shape[0]
    n = xs.shape[0]
    area = np.empty(m)
    P = np.empty((m, 6))
    x0, xn = xs[0], xs[n - 1]
    for r in range(m):
        a = min(max(Z[r, 0], x0), xn)
        d = min(max(Z[r, 5], x0), xn)
        if a > d:
            a, d = d, a
        bx = min(max(Z[r, 1], a), d)
        cx = min(max(Z[r, 3], a), d)
        if bx > cx:
            bx, cx = cx, bx
        by = abs(Z[r, 2])
        cy = abs(Z[r, 4])
        if cx > a:
            by = max(by, cy * (bx - a) / (cx - a))
        else:
            by = max(by, 0.0)
        if d > bx:
            cy = max(cy, by * (d - cx) / (d - bx))
        else:
            cy = max(cy, 0.0)
        k = math.inf
        for i in range(n):
            X = xs[i]
            if not (X > a and X < d):
                continue
            if X <= bx:
                p = by * (X - a) / (bx - a)
            elif X <= cx:
                p = by + (cy - by) * (X - bx) / (cx - bx)
            else:
                p = cy * (d - X) / (d - cx)
            if math.isfinite(p) and p > 0:
                k = min(k, ys[i] / p)
        if by > 0:
            k = min(k, np.interp(bx, xs, ys) / by)
        if cy > 0:
            k = min(k, np.interp(cx, xs, ys) / cy)
        if not math.isfinite(k):
            k = 0.0
        by *= k
        cy *= k
        area[r] = 0.5 * ((bx - a) * by + (cx - bx) * (by + cy) + (d - cx) * cy)
        P[r, 0] = a
        P[r, 1] = bx
        P[r, 2] = by
        P[r, 3] = cx
        P[r, 4] = cy
        P[r, 5] = d
    return area, P
