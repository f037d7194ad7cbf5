"""Compiled inner loops of the quadrilateral solver.

Chord tables are float64 arrays with one row per candidate edge and the
columns listed in COLS. Results come back per outer index (right edge for
the extremal pass, pivot vertex for the balanced pass) and are reduced in
Python so the reduction order is fixed regardless of thread count.
"""
import warnings

import numpy as np
from numba import njit, prange

# the bundled TBB is too old; numba falls back to another layer on its own
warnings.filterwarnings("ignore", message="The TBB threading layer")

COLS = ("A", "B", "C", "foot_x", "tip_x", "tip_y", "tip_edge", "i", "j")
CA, CB, CC, CFOOT, CTX, CTY, CEDGE, CI, CJ = range(9)

KIND_NONE = 0
KIND_EXTREMAL = 1
KIND_BALANCED = 2
KIND_EDGE_DIRECT = 3
KIND_TRIANGLE = 4

TIE_REL = 1e-12


@njit(cache=True, inline="always")
def _cross(ox, oy, ax, ay, bx, by):
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


@njit(cache=True, inline="always")
def _quad_area(ax, bx, by, cx, cy, dx):
    # alpha=(ax,0), delta=(dx,0); half the cross product of the diagonals
    return 0.5 * abs((cx - ax) * by - (bx - dx) * cy)


@njit(cache=True, inline="always")
def _better(a, ax, bx, best_a, best_ax, best_bx):
    tol = TIE_REL * max(1.0, abs(best_a))
    if a > best_a + tol:
        return True
    if a < best_a - tol:
        return False
    if ax != best_ax:
        return ax < best_ax
    return bx < best_bx


@njit(cache=True, inline="always")
def _meet(A, B, C, px, py, qx, qy):
    """Parameter s with p + s (q - p) on the line A x + B y + C = 0."""
    den = A * (qx - px) + B * (qy - py)
    if den == 0.0:
        return np.nan
    return -(A * px + B * py + C) / den


@njit(cache=True)
def _edge_top(px, py, qx, qy, l, r):
    """Corners beta, gamma for the top line through p, q.

    ok iff both corners sit above the base and the top slope lies strictly
    between the side slopes, so the corners land on the two chords.
    """
    st = (qy - py) / (qx - px)
    if not (-r[CA] / r[CB] < st < -l[CA] / l[CB]):
        return False, 0.0, 0.0, 0.0, 0.0
    s = _meet(l[CA], l[CB], l[CC], px, py, qx, qy)
    u = _meet(r[CA], r[CB], r[CC], px, py, qx, qy)
    if s != s or u != u:
        return False, 0.0, 0.0, 0.0, 0.0
    bx = px + s * (qx - px)
    by = py + s * (qy - py)
    gx = px + u * (qx - px)
    gy = py + u * (qy - py)
    return by > 0.0 and gy > 0.0 and bx < gx, bx, by, gx, gy


@njit(cache=True, inline="always")
def _down_dir(A, B):
    # unit direction along A x + B y + C = 0 pointing to decreasing y
    dx, dy = B, -A
    if dy > 0.0:
        dx, dy = -dx, -dy
    return dx, dy


@njit(cache=True)
def _balanced_top(ux, uy, ox, oy, l, r):
    """Chord through u with u as midpoint, ends on the rays from o down l and r."""
    d1x, d1y = _down_dir(l[CA], l[CB])
    d2x, d2y = _down_dir(r[CA], r[CB])
    det = d1x * d2y - d1y * d2x
    if det == 0.0:
        return False, 0.0, 0.0, 0.0, 0.0
    mx = 2.0 * (ux - ox)
    my = 2.0 * (uy - oy)
    s = (mx * d2y - my * d2x) / det
    t = (d1x * my - d1y * mx) / det
    if not (s > 0.0 and t > 0.0):
        return False, 0.0, 0.0, 0.0, 0.0
    bx = ox + s * d1x
    by = oy + s * d1y
    gx = ox + t * d2x
    gy = oy + t * d2y
    return by > 0.0 and gy > 0.0 and bx < gx, bx, by, gx, gy


@njit(cache=True)
def _search_wedge(hx, hy, base, sgn, E, l, r, ox, oy, ax, dx, direct, out):
    """Best top chord over a lower hull H(k) = h[base + sgn k], k = 0..E.

    out receives (area, bx, by, gx, gy, kind) of the best candidate;
    returns the number of candidate evaluations.
    """
    evals = 0
    lo = 0
    hi = E - 1
    while lo < hi:
        mid = (lo + hi) // 2
        i0 = base + sgn * mid
        i1 = i0 + sgn
        i2 = i1 + sgn
        ok1, b1x, b1y, g1x, g1y = _edge_top(hx[i0], hy[i0], hx[i1], hy[i1], l, r)
        ok2, b2x, b2y, g2x, g2y = _edge_top(hx[i1], hy[i1], hx[i2], hy[i2], l, r)
        evals += 2
        up1 = hy[i1] - hy[i0]
        up2 = hy[i2] - hy[i1]
        if not ok1 and up1 < 0.0:
            lo = mid + 1
        elif not ok2 and up2 > 0.0:
            hi = mid
        elif not ok1:
            hi = mid
        elif not ok2:
            lo = mid + 1
        else:
            a1 = _quad_area(ax, b1x, b1y, g1x, g1y, dx)
            a2 = _quad_area(ax, b2x, b2y, g2x, g2y, dx)
            if a1 < a2:
                lo = mid + 1
            else:
                hi = mid
    ks = lo
    best = -1.0
    for k in range(max(0, ks - 1), min(E, ks + 2)):
        i0 = base + sgn * k
        i1 = i0 + sgn
        ok, bx, by, gx, gy = _edge_top(hx[i0], hy[i0], hx[i1], hy[i1], l, r)
        evals += 1
        if ok:
            a = _quad_area(ax, bx, by, gx, gy, dx)
            if best < 0.0 or _better(a, ax, bx, best, ax, out[1]):
                best = a
                out[0] = a
                out[1] = bx
                out[2] = by
                out[3] = gx
                out[4] = gy
                out[5] = KIND_EDGE_DIRECT if direct else KIND_EXTREMAL
    for k in range(max(1, ks), min(E - 1, ks + 1) + 1):
        i0 = base + sgn * (k - 1)
        i1 = i0 + sgn
        i2 = i1 + sgn
        ok, bx, by, gx, gy = _balanced_top(hx[i1], hy[i1], ox, oy, l, r)
        evals += 1
        if not ok:
            continue
        s_in = (hy[i1] - hy[i0]) / (hx[i1] - hx[i0])
        s_out = (hy[i2] - hy[i1]) / (hx[i2] - hx[i1])
        s = (gy - by) / (gx - bx)
        if s < s_in or s > s_out:
            continue
        a = _quad_area(ax, bx, by, gx, gy, dx)
        if best < 0.0 or _better(a, ax, bx, best, ax, out[1]):
            best = a
            out[0] = a
            out[1] = bx
            out[2] = by
            out[3] = gx
            out[4] = gy
            out[5] = KIND_BALANCED
    if best < 0.0:
        out[0] = -1.0
        out[5] = KIND_NONE
    return evals


@njit(cache=True)
def _apex(l, r):
    det = l[CA] * r[CB] - r[CA] * l[CB]
    x = (l[CB] * r[CC] - r[CB] * l[CC]) / det
    y = (r[CA] * l[CC] - l[CA] * r[CC]) / det
    return x, y


@njit(cache=True)
def _andrew_lower(px, py, xs, ys, a, b, qx, qy, hx, hy):
    """Lower hull of p, v_a..v_b, q into hx/hy; returns the point count."""
    m = 0
    for k in range(a - 1, b + 2):
        if k == a - 1:
            x, y = px, py
        elif k == b + 1:
            x, y = qx, qy
        else:
            x, y = xs[k], ys[k]
        while m >= 2 and _cross(hx[m - 2], hy[m - 2], hx[m - 1], hy[m - 1], x, y) <= 0.0:
            m -= 1
        hx[m] = x
        hy[m] = y
        m += 1
    return m


@njit(cache=True)
def _extremal_one(xs, ys, L, r, paranoid, res, tri, counts):
    n = xs.shape[0]
    qx, qy = r[CTX], r[CTY]
    b = int(r[CEDGE])
    dxf = r[CFOOT]
    sx = np.empty(n + 3)
    sy = np.empty(n + 3)
    sx[0] = qx
    sy[0] = qy
    size = 1
    nxt = b  # next vertex to push, moving left
    out = np.empty(6)
    res[0] = -1.0
    tri[0] = -1.0
    pairs = 0
    evals = 0
    for li in range(L.shape[0]):
        l = L[li]
        axf = l[CFOOT]
        if axf >= dxf:
            continue
        pairs += 1
        px, py = l[CTX], l[CTY]
        ox, oy = _apex(l, r)
        a_edge = int(l[CEDGE])
        if px >= qx or a_edge > b:
            if oy > 0.0:
                a = 0.5 * (dxf - axf) * oy
                if tri[0] < 0.0 or _better(a, axf, ox, tri[0], tri[1], tri[2]):
                    tri[0] = a
                    tri[1] = axf
                    tri[2] = ox
                    tri[3] = oy
                    tri[4] = dxf
            continue
        while nxt > a_edge:
            wx, wy = xs[nxt], ys[nxt]
            while size >= 2 and _cross(wx, wy, sx[size - 1], sy[size - 1],
                                       sx[size - 2], sy[size - 2]) <= 0.0:
                size -= 1
            sx[size] = wx
            sy[size] = wy
            size += 1
            nxt -= 1
        direct = a_edge == b and not (px == xs[a_edge] and qx == xs[b + 1])
        if paranoid:
            hx = np.empty(n + 3)
            hy = np.empty(n + 3)
            m = _andrew_lower(px, py, xs, ys, a_edge + 1, b, qx, qy, hx, hy)
            evals += _search_wedge(hx, hy, 0, 1, m - 1, l, r, ox, oy, axf, dxf, direct, out)
        else:
            # first k (left to right) where the hull turns away from p
            mlast = size - 1
            lo = 0
            hi = mlast
            while lo < hi:
                mid = (lo + hi) // 2
                i0 = size - 1 - mid
                if _cross(px, py, sx[i0], sy[i0], sx[i0 - 1], sy[i0 - 1]) > 0.0:
                    hi = mid
                else:
                    lo = mid + 1
            t = lo
            slot = size - t
            keepx, keepy = sx[slot], sy[slot]
            sx[slot] = px
            sy[slot] = py
            evals += _search_wedge(sx, sy, slot, -1, mlast - t + 1, l, r, ox, oy, axf, dxf,
                                   direct, out)
            sx[slot] = keepx
            sy[slot] = keepy
        if out[0] >= 0.0:
            if res[0] < 0.0 or _better(out[0], axf, out[1], res[0], res[1], res[2]):
                res[0] = out[0]
                res[1] = axf
                res[2] = out[1]
                res[3] = out[2]
                res[4] = out[3]
                res[5] = out[4]
                res[6] = dxf
                res[7] = out[5]
    counts[0] = pairs
    counts[1] = evals


@njit(cache=True, parallel=True)
def extremal_pass(xs, ys, L, R, paranoid):
    """L sorted by tip x descending. Rows of res: area, ax, bx, by, gx, gy, dx, kind."""
    nr = R.shape[0]
    res = np.full((nr, 8), -1.0)
    tri = np.full((nr, 5), -1.0)
    counts = np.zeros((nr, 2), dtype=np.int64)
    for k in prange(nr):
        _extremal_one(xs, ys, L, R[k], paranoid, res[k], tri[k], counts[k])
    return res, tri, counts


# --- balanced left edge ---------------------------------------------------

@njit(cache=True)
def pivot_tables(xs, ys, v):
    """Per-pivot data: cap on beta.x - x_v, running min slope from v, last vertex below 2 y_v."""
    n = xs.shape[0]
    yv = ys[v]
    h2 = 2.0 * yv
    cap = xs[v] - xs[0]
    for w in range(v - 1, -1, -1):
        dlt = xs[v] - xs[w]
        if dlt >= cap:
            break
        if ys[w] < yv:
            cap = min(cap, yv * dlt / (yv - ys[w]))
    ms = np.full(n, np.inf)
    lb = np.full(n, -1, dtype=np.int64)
    lb[v] = v
    for k in range(v + 1, n):
        s = (ys[k] - yv) / (xs[k] - xs[v])
        ms[k] = min(ms[k - 1], s)
        lb[k] = k if ys[k] < h2 else lb[k - 1]
    return cap, ms, lb


@njit(cache=True)
def last_vertex(xs, r):
    """Index of the rightmost vertex at or left of the tip of r."""
    j = int(r[CEDGE])
    return j + 1 if r[CTX] == xs[j + 1] else j


@njit(cache=True)
def pivot_range(xs, ys, v, r, cap, ms, lb):
    """Admissible beta.x interval on y = 2 y_v for pivot v and right edge r.

    Returns (lo, hi, c, w); lo >= hi means v is not a pivot for r.
    """
    yv = ys[v]
    h2 = 2.0 * yv
    j = last_vertex(xs, r)
    bad = (np.inf, -np.inf, np.nan, -1)
    if j <= v or r[CTY] <= h2 or r[CTX] <= xs[v]:
        return bad
    w = lb[j]
    c = xs[w] + (h2 - ys[w]) * (xs[w + 1] - xs[w]) / (ys[w + 1] - ys[w])
    if w == v:
        lo = c
    else:
        m = ms[w]
        if m <= 0.0:
            return bad
        lo = max(c, xs[v] + yv / m)
    br = -(r[CB] * h2 + r[CC]) / r[CA]
    hi = min(br, xs[v] + cap)
    return lo, hi, c, w


@njit(cache=True)
def _bal_edge(x0, y0, x1, y1, v, yv, h2, r, qx, qy):
    """beta.x, gamma, and validity flags of the top line through two hull vertices."""
    s = (y1 - y0) / (x1 - x0)
    bx = x0 - (y0 - h2) / s
    u = _meet(r[CA], r[CB], r[CC], x0, y0, x1, y1)
    gx = x0 + u * (x1 - x0)
    gy = y0 + u * (y1 - y0)
    return s, bx, gx, gy


@njit(cache=True)
def _bal_search(hx, hy, m, xs, ys, v, r, lo_b, hi_b, out):
    """Best top over hull edges 0..m-2 meeting the balanced constraints."""
    yv = ys[v]
    h2 = 2.0 * yv
    xv = xs[v]
    qx, qy = r[CTX], r[CTY]
    dxf = r[CFOOT]
    E = m - 1
    evals = 0
    # first edge with positive slope and beta.x >= lo_b (both flip false -> true)
    a = 0
    b = E
    while a < b:
        k = (a + b) // 2
        s, bx, gx, gy = _bal_edge(hx[k], hy[k], hx[k + 1], hy[k + 1], v, yv, h2, r, qx, qy)
        evals += 1
        if s > 0.0 and bx >= lo_b:
            b = k
        else:
            a = k + 1
    k_lo = a
    # last edge with beta.x <= hi_b, T(x_q) < q.y and slope(T) < slope(L)
    a = k_lo
    b = E
    while a < b:
        k = (a + b) // 2
        s, bx, gx, gy = _bal_edge(hx[k], hy[k], hx[k + 1], hy[k + 1], v, yv, h2, r, qx, qy)
        evals += 1
        tq = hy[k] + s * (qx - hx[k])
        if bx <= hi_b and tq <= qy + 1e-12 * max(1.0, qy) and s * (bx - xv) < yv:
            a = k + 1
        else:
            b = k
    k_hi = a - 1
    if k_hi < k_lo:
        out[0] = -1.0
        return evals
    a = k_lo
    b = k_hi
    while a < b:
        k = (a + b) // 2
        s1, b1, g1x, g1y = _bal_edge(hx[k], hy[k], hx[k + 1], hy[k + 1], v, yv, h2, r, qx, qy)
        s2, b2, g2x, g2y = _bal_edge(hx[k + 1], hy[k + 1], hx[k + 2], hy[k + 2], v, yv, h2,
                                     r, qx, qy)
        evals += 2
        a1 = _quad_area(2.0 * xv - b1, b1, h2, g1x, g1y, dxf)
        a2 = _quad_area(2.0 * xv - b2, b2, h2, g2x, g2y, dxf)
        if a1 < a2:
            a = k + 1
        else:
            b = k
    best = -1.0
    for k in range(max(k_lo, a - 1), min(k_hi, a + 1) + 1):
        s, bx, gx, gy = _bal_edge(hx[k], hy[k], hx[k + 1], hy[k + 1], v, yv, h2, r, qx, qy)
        evals += 1
        ax = 2.0 * xv - bx
        ar = _quad_area(ax, bx, h2, gx, gy, dxf)
        if best < 0.0 or _better(ar, ax, bx, best, out[1], out[2]):
            best = ar
            out[0] = ar
            out[1] = ax
            out[2] = bx
            out[3] = h2
            out[4] = gx
            out[5] = gy
            out[6] = dxf
            out[7] = KIND_EXTREMAL
    out[0] = best
    return evals


@njit(cache=True)
def _balanced_one(xs, ys, R, v, paranoid, res, counts):
    n = xs.shape[0]
    cap, ms, lb = pivot_tables(xs, ys, v)
    hx = np.empty(n + 1)
    hy = np.empty(n + 1)
    m = 0
    cur_w = -1
    nxt = 0
    out = np.empty(8)
    res[0] = -1.0
    pivots = 0
    evals = 0
    for ri in range(R.shape[0]):
        r = R[ri]
        lo_b, hi_b, c, w = pivot_range(xs, ys, v, r, cap, ms, lb)
        if not lo_b < hi_b:
            continue
        pivots += 1
        j = last_vertex(xs, r)
        if paranoid:
            m = 0
            for k in range(w + 1, j + 1):
                while m >= 2 and _cross(hx[m - 2], hy[m - 2], hx[m - 1], hy[m - 1],
                                        xs[k], ys[k]) <= 0.0:
                    m -= 1
                hx[m] = xs[k]
                hy[m] = ys[k]
                m += 1
        else:
            if w != cur_w:
                cur_w = w
                m = 0
                nxt = w + 1
            while nxt <= j:
                while m >= 2 and _cross(hx[m - 2], hy[m - 2], hx[m - 1], hy[m - 1],
                                        xs[nxt], ys[nxt]) <= 0.0:
                    m -= 1
                hx[m] = xs[nxt]
                hy[m] = ys[nxt]
                m += 1
                nxt += 1
        if m < 2:
            continue
        evals += _bal_search(hx, hy, m, xs, ys, v, r, lo_b, hi_b, out)
        if out[0] >= 0.0:
            if res[0] < 0.0 or _better(out[0], out[1], out[2], res[0], res[1], res[2]):
                for k in range(8):
                    res[k] = out[k]
    counts[0] = pivots
    counts[1] = evals


@njit(cache=True, parallel=True)
def balanced_pass(xs, ys, R, paranoid):
    """R sorted by last_vertex ascending. Rows of res: area, ax, bx, by, gx, gy, dx, kind."""
    n = xs.shape[0]
    res = np.full((n, 8), -1.0)
    counts = np.zeros((n, 2), dtype=np.int64)
    for v in prange(1, n - 1):
        _balanced_one(xs, ys, R, v, paranoid, res[v], counts[v])
    return res, counts


# --- candidate edges ------------------------------------------------------

@njit(cache=True)
def prefix_parents(xs, ys):
    """Parent of each vertex in the geodesic tree from v1 (lower hull of each prefix)."""
    n = xs.shape[0]
    parent = np.full(n, -1, dtype=np.int64)
    st = np.empty(n, dtype=np.int64)
    m = 0
    for j in range(n):
        while m >= 2 and _cross(xs[st[m - 2]], ys[st[m - 2]], xs[st[m - 1]], ys[st[m - 1]],
                                xs[j], ys[j]) <= 0.0:
            m -= 1
        if m > 0:
            parent[j] = st[m - 1]
        st[m] = j
        m += 1
    return parent


@njit(cache=True)
def left_candidate_rows(xs, ys):
    """Rising tree edges extended to the base and to their first exit, one row each."""
    n = xs.shape[0]
    parent = prefix_parents(xs, ys)
    rows = np.empty((n, 9))
    c = 0
    for j in range(1, n - 1):
        i = parent[j]
        if ys[j] <= ys[i]:
            continue
        A = ys[j] - ys[i]
        B = xs[i] - xs[j]
        nrm = np.hypot(A, B)
        A /= nrm
        B /= nrm
        C = -(A * xs[i] + B * ys[i])
        foot = xs[i] if i == 0 else -C / A
        k = j + 1
        while k < n - 1 and ys[k] + (A * xs[k] + C) / B >= 0.0:
            k += 1
        if k - 1 == j:
            tx, ty, e = xs[j], ys[j], j
        else:
            f0 = ys[k - 1] + (A * xs[k - 1] + C) / B
            f1 = ys[k] + (A * xs[k] + C) / B
            s = f0 / (f0 - f1)
            tx = xs[k - 1] + s * (xs[k] - xs[k - 1])
            ty = ys[k - 1] + s * (ys[k] - ys[k - 1])
            e = k - 1
        rows[c, 0] = A
        rows[c, 1] = B
        rows[c, 2] = C
        rows[c, 3] = foot
        rows[c, 4] = tx
        rows[c, 5] = ty
        rows[c, 6] = e
        rows[c, 7] = i
        rows[c, 8] = j
        c += 1
    return rows[:c].copy()


@njit(cache=True)
def right_candidate_rows(xs, ys):
    """Falling candidates from the mirrored sweep, in original coordinates."""
    n = xs.shape[0]
    x_end = xs[0] + xs[n - 1]
    mx = x_end - xs[::-1]
    my = ys[::-1].copy()
    m = left_candidate_rows(mx, my)
    rows = np.empty_like(m)
    for k in range(m.shape[0]):
        a = n - 1 - int(m[k, 8])
        b = n - 1 - int(m[k, 7])
        A = ys[b] - ys[a]
        B = xs[a] - xs[b]
        nrm = np.hypot(A, B)
        A /= nrm
        B /= nrm
        rows[k, 0] = A
        rows[k, 1] = B
        rows[k, 2] = -(A * xs[a] + B * ys[a])
        # snap to exact vertices so shared tips compare equal across sides
        rows[k, 3] = xs[n - 1] if b == n - 1 else x_end - m[k, 3]
        if m[k, 4] == mx[int(m[k, 8])]:
            rows[k, 4] = xs[a]
        else:
            rows[k, 4] = x_end - m[k, 4]
        rows[k, 5] = m[k, 5]
        rows[k, 6] = n - 2 - m[k, 6]
        rows[k, 7] = a
        rows[k, 8] = b
    return rows
