"""Deliberately naive reference implementations used as test oracles.

Nothing here imports the code under test; every routine is written from the
textbook definition with explicit loops.
"""
import math

import numpy as np


def dct_basis(n):
    """Orthonormal DCT-II basis from the definition, one basis vector per row."""
    m = np.empty((n, n))
    for k in range(n):
        a = math.sqrt(1.0 / n) if k == 0 else math.sqrt(2.0 / n)
        for i in range(n):
            m[k, i] = a * math.cos(math.pi * (2 * i + 1) * k / (2 * n))
    return m


def dense_dct2(x):
    x = np.asarray(x, dtype=float)
    h, w = x.shape
    bh, bw = dct_basis(h), dct_basis(w)
    out = np.zeros((h, w))
    for u in range(h):
        for v in range(w):
            s = 0.0
            for i in range(h):
                for j in range(w):
                    s += bh[u, i] * bw[v, j] * x[i, j]
            out[u, v] = s
    return out


def loop_gradient(x):
    h, w = x.shape
    dh = np.zeros((h, w))
    dv = np.zeros((h, w))
    for i in range(h):
        for j in range(w):
            if i < h - 1:
                dh[i, j] = x[i + 1, j] - x[i, j]
            if j < w - 1:
                dv[i, j] = x[i, j + 1] - x[i, j]
    return dh, dv


def loop_tv(x):
    dh, dv = loop_gradient(x)
    total = 0.0
    for i in range(x.shape[0]):
        for j in range(x.shape[1]):
            total += math.sqrt(dh[i, j] ** 2 + dv[i, j] ** 2)
    return total


def smoothed_tv(x, eps):
    dh, dv = loop_gradient(x)
    return float(np.sum(np.sqrt(dh ** 2 + dv ** 2 + eps ** 2)))


def central_fd(f, x, h=1e-5):
    g = np.zeros_like(x)
    for idx in np.ndindex(x.shape):
        xp = x.copy()
        xm = x.copy()
        xp[idx] += h
        xm[idx] -= h
        g[idx] = (f(xp) - f(xm)) / (2 * h)
    return g


def naive_gaussian(img, sigma, truncate=4.0):
    """Separable Gaussian blur with replicated borders, explicit loops."""
    if sigma <= 0:
        return np.array(img, dtype=float)
    r = int(truncate * sigma + 0.5)
    k = [math.exp(-0.5 * (t / sigma) ** 2) for t in range(-r, r + 1)]
    s = sum(k)
    k = [v / s for v in k]
    h, w = img.shape
    tmp = np.zeros((h, w))
    for i in range(h):
        for j in range(w):
            tmp[i, j] = sum(k[t + r] * img[i, min(max(j + t, 0), w - 1)] for t in range(-r, r + 1))
    out = np.zeros((h, w))
    for i in range(h):
        for j in range(w):
            out[i, j] = sum(k[t + r] * tmp[min(max(i + t, 0), h - 1), j] for t in range(-r, r + 1))
    return out


def naive_hog(img, cell=8, block=2, stride=1, nbins=9, signed=False, clip=0.2, sigma=0.0, eps=1e-6):
    img = naive_gaussian(np.asarray(img, dtype=float), sigma)
    h, w = img.shape
    span = 360.0 if signed else 180.0
    bw = span / nbins
    cy, cx = h // cell, w // cell
    hist = [[[0.0] * nbins for _ in range(cx)] for _ in range(cy)]
    for i in range(cy * cell):
        for j in range(cx * cell):
            gx = img[i, min(j + 1, w - 1)] - img[i, max(j - 1, 0)]
            gy = img[min(i + 1, h - 1), j] - img[max(i - 1, 0), j]
            mag = math.sqrt(gx * gx + gy * gy)
            ang = math.degrees(math.atan2(gy, gx)) % span
            if ang >= span:
                ang -= span
            pos = ang / bw
            lo = math.floor(pos)
            frac = pos - lo
            hist[i // cell][j // cell][lo % nbins] += mag * (1 - frac)
            hist[i // cell][j // cell][(lo + 1) % nbins] += mag * frac
    out = []
    for by in range(0, cy - block + 1, stride):
        for bx in range(0, cx - block + 1, stride):
            v = []
            for yy in range(by, by + block):
                for xx in range(bx, bx + block):
                    v.extend(hist[yy][xx])
            n = math.sqrt(sum(t * t for t in v) + eps * eps)
            v = [min(t / n, clip) for t in v]
            n = math.sqrt(sum(t * t for t in v) + eps * eps)
            out.extend(t / n for t in v)
    return np.array(out)


def grid_hinge_minimum(X, y, c, w_range=(-3, 3), w_steps=121):
    """Lattice scan of 0.5|w|^2 + C*sum(hinge) over (w1, w2), exact in b.

    For fixed w the hinge sum is piecewise linear and convex in b, so its
    minimum sits at one of the breakpoints b = y_i - w.x_i.
    """
    ws = np.linspace(*w_range, w_steps)
    best = math.inf
    for a in ws:
        W = np.stack([np.full_like(ws, a), ws], axis=1)            # (k, 2)
        s = W @ X.T                                                  # (k, n)
        cand = y[None, :] - s                                        # breakpoints
        m = y[None, :, None] * (s[:, :, None] + cand[:, None, :])    # (k, n, n)
        vals = 0.5 * (W ** 2).sum(axis=1)[:, None] + c * np.maximum(0.0, 1.0 - m).sum(axis=1)
        best = min(best, float(vals.min()))
    return best


def nearest_centroid(centroids, x):
    return min(centroids, key=lambda lab: float(np.sum((centroids[lab] - x) ** 2)))
