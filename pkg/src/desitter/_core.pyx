# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the loops in ``_core_py``.

Same signatures and return conventions; each point runs its own scalar loop
and stops as soon as it has converged.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, log, cos, sin, ceil, INFINITY

cnp.import_array()

cdef double EULER_GAMMA = 0.57721566490153286061
cdef double PI = 3.141592653589793238462643
cdef double TWO_OVER_PI = 2.0 / 3.141592653589793238462643
cdef double INV_SQRT2 = 0.70710678118654752440


cdef inline double cabs_(double complex z) nogil:
    return sqrt(z.real * z.real + z.imag * z.imag)


def kummer_series(b, c, z, int max_terms, double tol):
    """Maclaurin series of Kummer's function and its derivative."""
    cdef double complex cb = complex(b), cc = complex(c)
    cdef double complex[::1] zz = np.ascontiguousarray(z, dtype=np.complex128).ravel()
    cdef Py_ssize_t n = zz.shape[0], i
    val_a = np.empty(n, dtype=np.complex128)
    der_a = np.empty(n, dtype=np.complex128)
    done_a = np.zeros(n, dtype=bool)
    cdef double complex[::1] val = val_a
    cdef double complex[::1] der = der_a
    cdef cnp.npy_bool[::1] done = done_a
    cdef double complex zi, v, dv, t, d
    cdef double absz
    cdef int k
    with nogil:
        for i in range(n):
            zi = zz[i]
            absz = cabs_(zi)
            v = 1.0
            t = 1.0
            d = cb / cc
            dv = d
            for k in range(max_terms):
                t = t * ((cb + k) / ((cc + k) * (k + 1))) * zi
                d = d * ((cb + k + 1) / ((cc + k + 1) * (k + 1))) * zi
                v = v + t
                dv = dv + d
                if cabs_(t) <= tol * cabs_(v) and cabs_(d) <= tol * cabs_(dv) and (k + 1) > absz:
                    done[i] = True
                    break
            val[i] = v
            der[i] = dv
    shape = np.shape(z)
    return val_a.reshape(shape), der_a.reshape(shape), done_a.reshape(shape)


def kummer_continue(b, c, z_from, w, dw, z_to, double h_max, double tol, int max_terms):
    """Carry ``(w, w')`` along straight segments by Taylor stepping."""
    cdef double complex cb = complex(b), cc = complex(c)
    cdef double complex[::1] zf = np.ascontiguousarray(z_from, dtype=np.complex128).ravel()
    cdef double complex[::1] zt = np.broadcast_to(np.asarray(z_to, dtype=np.complex128), np.shape(z_from)).ravel().copy()
    w_a = np.array(w, dtype=np.complex128, copy=True).ravel()
    dw_a = np.array(dw, dtype=np.complex128, copy=True).ravel()
    ok_a = np.ones(zf.shape[0], dtype=bool)
    cdef double complex[::1] ww = w_a
    cdef double complex[::1] dd = dw_a
    cdef cnp.npy_bool[::1] ok = ok_a
    cdef Py_ssize_t n = zf.shape[0], i
    cdef double complex seg, h, zc, e0, e1, e2, sw, sd
    cdef double dist, rmin, proj, hcap, r2
    cdef long nsteps, j
    cdef int k
    cdef bint conv
    with nogil:
        for i in range(n):
            seg = zt[i] - zf[i]
            dist = cabs_(seg)
            if dist == 0:
                continue
            rmin = cabs_(zf[i])
            r2 = cabs_(zt[i])
            if r2 < rmin:
                rmin = r2
            proj = -(zf[i].real * seg.real + zf[i].imag * seg.imag) / (dist * dist)
            if proj > 0 and proj < 1:
                rmin = cabs_(zf[i] + proj * seg)
            hcap = 0.5 * rmin
            if h_max < hcap:
                hcap = h_max
            nsteps = <long>ceil(dist / hcap)
            h = seg / nsteps
            zc = zf[i]
            for j in range(nsteps):
                e0 = ww[i]
                e1 = dd[i] * h
                sw = e0 + e1
                sd = e1
                conv = False
                for k in range(max_terms):
                    e2 = h * ((k + cb) * h * e0 - (k + 1) * (k + cc - zc) * e1) / (zc * (k + 2) * (k + 1))
                    sw = sw + e2
                    sd = sd + (k + 2) * e2
                    if cabs_(e1) + cabs_(e2) <= tol * (cabs_(sw) + cabs_(sd)):
                        conv = True
                        break
                    e0 = e1
                    e1 = e2
                if not conv:
                    ok[i] = False
                ww[i] = sw
                dd[i] = sd / h
                zc = zc + h
    shape = np.shape(w)
    return w_a.reshape(shape), dw_a.reshape(shape), ok_a.reshape(np.shape(z_from))


def asymptotic_sum(p, q, x, double tol, int max_terms):
    """``S(x) = sum_s (p)_s (q)_s / s! x^{-s}`` and ``dS/dx``."""
    cdef double complex cp = complex(p), cq = complex(q)
    cdef double complex[::1] xx = np.ascontiguousarray(x, dtype=np.complex128).ravel()
    cdef Py_ssize_t n = xx.shape[0], i
    sv_a = np.empty(n, dtype=np.complex128)
    sd_a = np.empty(n, dtype=np.complex128)
    ok_a = np.zeros(n, dtype=bool)
    cdef double complex[::1] sv = sv_a
    cdef double complex[::1] sdv = sd_a
    cdef cnp.npy_bool[::1] ok = ok_a
    cdef double complex inv, term, nxt, s_val, s_der
    cdef double prev, mag
    cdef int s
    with nogil:
        for i in range(n):
            inv = 1.0 / xx[i]
            s_val = 1.0
            s_der = 0.0
            term = 1.0
            prev = INFINITY
            for s in range(max_terms):
                nxt = term * ((cp + s) * (cq + s) / (s + 1)) * inv
                mag = cabs_(nxt)
                if mag > prev:
                    break
                s_val = s_val + nxt
                s_der = s_der - (s + 1) * nxt * inv
                prev = mag
                term = nxt
                if mag <= tol * cabs_(s_val):
                    ok[i] = True
                    break
            sv[i] = s_val
            sdv[i] = s_der
    shape = np.shape(x)
    return sv_a.reshape(shape), sd_a.reshape(shape), ok_a.reshape(shape)


cdef void _series(double x, double* out) nogil:
    cdef double q = 0.25 * x * x
    cdef double j0 = 1.0, j1 = 1.0
    cdef double y0s = -2.0 * EULER_GAMMA
    cdef double y1s = -EULER_GAMMA + (1.0 - EULER_GAMMA)
    cdef double t0 = 1.0, t1 = 1.0, harm = 0.0, h
    cdef int k
    for k in range(1, 80):
        t0 = -t0 * q / (k * k)
        t1 = -t1 * q / (k * (k + 1))
        j0 = j0 + t0
        j1 = j1 + t1
        harm += 1.0 / k
        h = -EULER_GAMMA + harm
        y0s = y0s + 2.0 * h * t0
        y1s = y1s + (h + (h + 1.0 / (k + 1))) * t1
        if (t0 if t0 > 0 else -t0) < 1e-17 * (j0 if j0 > 0 else -j0) and k > 2 * sqrt(q):
            break
    cdef double half = 0.5 * x
    cdef double lg = log(half)
    j1 = half * j1
    out[0] = j0
    out[1] = j1
    out[2] = TWO_OVER_PI * lg * j0 - y0s / PI
    out[3] = -TWO_OVER_PI / x + TWO_OVER_PI * lg * j1 - half * y1s / PI


cdef void _hankel_pq(double x, double nu2, double* p, double* qq) nogil:
    cdef double mu = 4.0 * nu2
    cdef double term = 1.0, mag, prev = INFINITY
    cdef double inv8x = 1.0 / (8.0 * x)
    cdef int k
    p[0] = 1.0
    qq[0] = 0.0
    for k in range(1, 60):
        term = term * (mu - (2 * k - 1) * (2 * k - 1)) * inv8x / k
        mag = term if term > 0 else -term
        if not (mag < prev):
            break
        if k % 2 == 1:
            qq[0] += term if (k // 2) % 2 == 0 else -term
        else:
            p[0] += term if (k // 2) % 2 == 0 else -term
        prev = mag
        if not (mag > 1e-17):
            break


cdef void _hankel(double x, double* out) nogil:
    cdef double p0, q0, p1, q1
    _hankel_pq(x, 0.0, &p0, &q0)
    _hankel_pq(x, 1.0, &p1, &q1)
    cdef double amp = sqrt(TWO_OVER_PI / x)
    cdef double cx = cos(x), sx = sin(x)
    cdef double c0 = (cx + sx) * INV_SQRT2
    cdef double s0 = (sx - cx) * INV_SQRT2
    cdef double c1 = (sx - cx) * INV_SQRT2
    cdef double s1 = -(sx + cx) * INV_SQRT2
    out[0] = amp * (p0 * c0 - q0 * s0)
    out[1] = amp * (p1 * c1 - q1 * s1)
    out[2] = amp * (p0 * s0 + q0 * c0)
    out[3] = amp * (p1 * s1 + q1 * c1)


def bessel_01(x, double switch):
    """``J0, J1, Y0, Y1`` for positive ``x``; series below ``switch``."""
    cdef double[::1] xx = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef Py_ssize_t n = xx.shape[0], i
    arrs = [np.empty(n) for _ in range(4)]
    cdef double[::1] a0 = arrs[0], a1 = arrs[1], a2 = arrs[2], a3 = arrs[3]
    cdef double buf[4]
    with nogil:
        for i in range(n):
            if xx[i] < switch:
                _series(xx[i], buf)
            else:
                _hankel(xx[i], buf)
            a0[i] = buf[0]
            a1[i] = buf[1]
            a2[i] = buf[2]
            a3[i] = buf[3]
    shape = np.shape(x)
    return tuple(a.reshape(shape) for a in arrs)
