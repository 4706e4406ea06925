# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled twins of the kernels in ``_fallback.py``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport floor, sqrt
from libc.stdlib cimport malloc, free

cnp.import_array()


cdef inline bint _before(double sa, Py_ssize_t ba, Py_ssize_t ra,
                         double sb, Py_ssize_t bb, Py_ssize_t rb):
    # ordering key (-score, pred_node, pred_rank)
    if sa != sb:
        return sa > sb
    if ba != bb:
        return ba < bb
    return ra < rb


def kbest_paths(mi, mj, gain, int k):
    cdef Py_ssize_t n = len(mi)
    if n == 0 or k <= 0:
        return []
    cdef long[:] I = np.ascontiguousarray(mi, dtype=np.int_)
    cdef long[:] J = np.ascontiguousarray(mj, dtype=np.int_)
    cdef double[:] G = np.ascontiguousarray(gain, dtype=np.float64)
    cdef double[:, :] score = np.zeros((n, k))
    cdef long[:, :] pnode = np.full((n, k), -1, dtype=np.int_)
    cdef long[:, :] prank = np.full((n, k), -1, dtype=np.int_)
    cdef long[:] cnt = np.zeros(n, dtype=np.int_)
    cdef Py_ssize_t a, b, r, pos, m, t
    cdef double s, g
    # sorted insertion buffer of size k
    cdef double* bs = <double*> malloc(k * sizeof(double))
    cdef long* bb = <long*> malloc(k * sizeof(long))
    cdef long* br = <long*> malloc(k * sizeof(long))
    try:
        for a in range(n):
            m = 1
            bs[0] = 0.0
            bb[0] = -1
            br[0] = -1
            for b in range(a):
                if I[b] < I[a] and J[b] < J[a]:
                    for r in range(cnt[b]):
                        s = score[b, r]
                        # find insertion point
                        pos = m
                        while pos > 0 and _before(s, b, r, bs[pos - 1], bb[pos - 1], br[pos - 1]):
                            pos -= 1
                        if pos >= k:
                            continue
                        if m < k:
                            m += 1
                        t = m - 1
                        while t > pos:
                            bs[t] = bs[t - 1]
                            bb[t] = bb[t - 1]
                            br[t] = br[t - 1]
                            t -= 1
                        bs[pos] = s
                        bb[pos] = b
                        br[pos] = r
            g = G[a]
            for t in range(m):
                score[a, t] = bs[t] + g
                pnode[a, t] = bb[t]
                prank[a, t] = br[t]
            cnt[a] = m
    finally:
        free(bs)
        free(bb)
        free(br)
    finals = [(score[a, r], a, r) for a in range(n) for r in range(cnt[a])]
    finals.sort(key=lambda e: (-e[0], e[1], e[2]))
    out = []
    cdef long ca, cr, na
    for sc, a0, r0 in finals[:k]:
        path = []
        ca = a0
        cr = r0
        while ca >= 0:
            path.append(ca)
            na = pnode[ca, cr]
            cr = prank[ca, cr]
            ca = na
        out.append((sc, tuple(reversed(path))))
    return out


cdef inline double _bilinear(double[:, :] img, Py_ssize_t H, Py_ssize_t W,
                             double u, double v) nogil:
    cdef Py_ssize_t u0, v0, u1, v1
    cdef double fu, fv
    if u < 0.0:
        u = 0.0
    elif u > W - 1.0:
        u = W - 1.0
    if v < 0.0:
        v = 0.0
    elif v > H - 1.0:
        v = H - 1.0
    u0 = <Py_ssize_t> floor(u)
    v0 = <Py_ssize_t> floor(v)
    if W > 1 and u0 > W - 2:
        u0 = W - 2
    if H > 1 and v0 > H - 2:
        v0 = H - 2
    fu = u - u0
    fv = v - v0
    u1 = u0 + 1 if u0 + 1 < W else W - 1
    v1 = v0 + 1 if v0 + 1 < H else H - 1
    return ((img[v0, u0] * (1.0 - fu) + img[v0, u1] * fu) * (1.0 - fv)
            + (img[v1, u0] * (1.0 - fu) + img[v1, u1] * fu) * fv)


def sample_patches(image, centers, int w, int h):
    cdef double[:, :] img = np.ascontiguousarray(image, dtype=np.float64)
    cdef double[:, :] C = np.ascontiguousarray(np.atleast_2d(centers), dtype=np.float64)
    cdef Py_ssize_t N = C.shape[0], H = img.shape[0], W = img.shape[1]
    out_arr = np.empty((N, h * w))
    cdef double[:, :] out = out_arr
    cdef Py_ssize_t n, r, c
    with nogil:
        for n in range(N):
            for r in range(h):
                for c in range(w):
                    out[n, r * w + c] = _bilinear(img, H, W,
                                                  C[n, 0] + c - w / 2.0,
                                                  C[n, 1] + r - h / 2.0)
    return out_arr


def sq_residuals(image, centers, int w, int h, mean, basis):
    cdef double[:, :] img = np.ascontiguousarray(image, dtype=np.float64)
    cdef double[:, :] C = np.ascontiguousarray(np.atleast_2d(centers), dtype=np.float64)
    cdef double[:] mu = np.ascontiguousarray(mean, dtype=np.float64)
    cdef double[:, :] U = np.ascontiguousarray(basis, dtype=np.float64)
    cdef Py_ssize_t N = C.shape[0], H = img.shape[0], W = img.shape[1]
    cdef Py_ssize_t P = h * w, d = U.shape[1]
    out_arr = np.empty(N)
    cdef double[:] out = out_arr
    cdef double[:] x = np.empty(P)
    cdef double[:] coef = np.empty(max(d, 1))
    cdef Py_ssize_t n, r, c, p, q
    cdef double acc, e
    with nogil:
        for n in range(N):
            for r in range(h):
                for c in range(w):
                    x[r * w + c] = _bilinear(img, H, W, C[n, 0] + c - w / 2.0,
                                             C[n, 1] + r - h / 2.0) - mu[r * w + c]
            for q in range(d):
                acc = 0.0
                for p in range(P):
                    acc = acc + U[p, q] * x[p]
                coef[q] = acc
            acc = 0.0
            for p in range(P):
                e = x[p]
                for q in range(d):
                    e = e - U[p, q] * coef[q]
                acc = acc + e * e
            out[n] = acc
    return out_arr


def ncc_map(image, template):
    cdef double[:, :] img = np.ascontiguousarray(image, dtype=np.float64)
    t_arr = np.ascontiguousarray(template, dtype=np.float64)
    cdef Py_ssize_t th = t_arr.shape[0], tw = t_arr.shape[1]
    cdef Py_ssize_t H = img.shape[0], W = img.shape[1]
    cdef Py_ssize_t OH = H - th + 1, OW = W - tw + 1
    tz_arr = t_arr - t_arr.mean()
    cdef double[:, :] tz = tz_arr
    cdef double tn = sqrt((tz_arr * tz_arr).sum())
    out_arr = np.zeros((max(OH, 0), max(OW, 0)))
    cdef double[:, :] out = out_arr
    cdef Py_ssize_t a, b, i, j
    cdef double m, s2, num, val, den, cnt = th * tw
    with nogil:
        for a in range(OH):
            for b in range(OW):
                m = 0.0
                for i in range(th):
                    for j in range(tw):
                        m = m + img[a + i, b + j]
                m = m / cnt
                s2 = 0.0
                num = 0.0
                for i in range(th):
                    for j in range(tw):
                        val = img[a + i, b + j] - m
                        s2 = s2 + val * val
                        num = num + val * tz[i, j]
                den = sqrt(s2) * tn
                if den > 1e-12:
                    out[a, b] = num / den
    return out_arr
