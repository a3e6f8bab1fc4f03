"""Pure numpy implementation of the hot numerical loops.

Every routine here has a twin in the compiled ``_core`` extension with the
same signature. Inputs are 1-D ``complex128`` (or ``float64`` for Bessel)
arrays; the loops run over series terms or integration steps and are
vectorised across points, so per-point early termination is emulated by
masking.
"""

import numpy as np

EULER_GAMMA = 0.57721566490153286061
TWO_OVER_PI = 2.0 / np.pi
INV_SQRT2 = 1.0 / np.sqrt(2.0)


def kummer_series(b, c, z, max_terms, tol):
    """Maclaurin series of Kummer's function and of its derivative.

    Returns ``(value, derivative, converged)``. A point counts as converged
    once both the value and derivative terms have fallen below ``tol``
    relative to the partial sums past the peak term.
    """
    z = np.asarray(z, dtype=np.complex128)
    b = complex(b)
    c = complex(c)
    val = np.ones_like(z)
    term = np.ones_like(z)
    dterm = np.full_like(z, b / c)
    der = dterm.copy()
    done = np.zeros(z.shape, dtype=bool)
    absz = np.abs(z)
    for k in range(max_terms):
        live = ~done
        if not live.any():
            break
        zl = z[live]
        t = term[live] * ((b + k) / ((c + k) * (k + 1))) * zl
        d = dterm[live] * ((b + k + 1) / ((c + k + 1) * (k + 1))) * zl
        term[live] = t
        dterm[live] = d
        v = val[live] + t
        dv = der[live] + d
        val[live] = v
        der[live] = dv
        small = (np.abs(t) <= tol * np.abs(v)) & (np.abs(d) <= tol * np.abs(dv))
        small &= (k + 1) > absz[live]
        idx = np.flatnonzero(live)
        done[idx[small]] = True
    return val, der, done


def kummer_continue(b, c, z_from, w, dw, z_to, h_max, tol, max_terms):
    """Carry ``(w, w')`` along straight segments by Taylor stepping.

    Kummer's equation ``z w'' + (c - z) w' - b w = 0`` is expanded about the
    current point, where the local power series has radius equal to the
    distance to the origin. Steps are capped at ``h_max`` and at half that
    radius. Each point takes its own number of equal steps.
    """
    b = complex(b)
    c = complex(c)
    z_from = np.asarray(z_from, dtype=np.complex128)
    z_to = np.asarray(z_to, dtype=np.complex128)
    w = np.array(w, dtype=np.complex128)
    dw = np.array(dw, dtype=np.complex128)
    seg = z_to - z_from
    dist = np.abs(seg)
    rmin = np.minimum(np.abs(z_from), np.abs(z_to))
    # the segment may pass closer to the origin than either endpoint
    with np.errstate(invalid="ignore", divide="ignore"):
        proj = -np.real(z_from * np.conj(seg)) / np.where(dist > 0, dist**2, 1.0)
    inside = (proj > 0) & (proj < 1)
    rmin = np.where(inside, np.abs(z_from + proj * seg), rmin)
    hcap = np.minimum(h_max, 0.5 * rmin)
    nsteps = np.where(dist > 0, np.ceil(dist / hcap), 0).astype(np.int64)
    h = np.where(nsteps > 0, seg / np.maximum(nsteps, 1), 0)
    ok = np.ones(z_from.shape, dtype=bool)
    za = z_from.copy()
    for j in range(int(nsteps.max(initial=0))):
        live = np.flatnonzero(nsteps > j)
        hl = h[live]
        zc = za[live]
        e0 = w[live].copy()
        e1 = dw[live] * hl
        sw = e0 + e1
        sd = e1.copy()
        conv = np.zeros(live.shape, dtype=bool)
        for k in range(max_terms):
            e2 = hl * ((k + b) * hl * e0 - (k + 1) * (k + c - zc) * e1) / (zc * (k + 2) * (k + 1))
            e2 = np.where(conv, 0, e2)
            sw = sw + e2
            sd = sd + (k + 2) * e2
            scale = np.abs(sw) + np.abs(sd)
            conv |= (np.abs(e1) + np.abs(e2)) <= tol * scale
            e0, e1 = e1, e2
            if conv.all():
                break
        ok[live] &= conv
        w[live] = sw
        dw[live] = sd / hl
        za[live] = zc + hl
    return w, dw, ok


def asymptotic_sum(p, q, x, tol, max_terms):
    """Sum ``S(x) = sum_s (p)_s (q)_s / s! x^{-s}`` and ``dS/dx``.

    Terms are added while they decrease; ``ok`` reports whether the last
    term used dropped below ``tol`` relative to the sum.
    """
    p = complex(p)
    q = complex(q)
    x = np.asarray(x, dtype=np.complex128)
    s_val = np.ones_like(x)
    s_der = np.zeros_like(x)
    term = np.ones_like(x)
    prev = np.full(x.shape, np.inf)
    active = np.ones(x.shape, dtype=bool)
    ok = np.zeros(x.shape, dtype=bool)
    inv = 1.0 / x
    for s in range(max_terms):
        nxt = term * ((p + s) * (q + s) / (s + 1)) * inv
        mag = np.abs(nxt)
        growing = mag > prev
        active &= ~growing
        if not active.any():
            break
        nxt = np.where(active, nxt, 0)
        s_val = s_val + nxt
        s_der = s_der - (s + 1) * nxt * inv
        prev = np.where(active, mag, prev)
        term = nxt
        fin = active & (mag <= tol * np.abs(s_val))
        ok |= fin
        active &= ~fin
    return s_val, s_der, ok


def _bessel_series(x):
    q = 0.25 * x * x
    j0 = np.ones_like(x)
    j1 = np.ones_like(x)
    y0s = np.full_like(x, -2.0 * EULER_GAMMA)
    y1s = np.full_like(x, -EULER_GAMMA + (1.0 - EULER_GAMMA))
    t0 = np.ones_like(x)
    t1 = np.ones_like(x)
    harm = 0.0
    for k in range(1, 80):
        t0 = -t0 * q / (k * k)
        t1 = -t1 * q / (k * (k + 1))
        j0 = j0 + t0
        j1 = j1 + t1
        harm += 1.0 / k
        y0s = y0s + 2.0 * (-EULER_GAMMA + harm) * t0
        y1s = y1s + ((-EULER_GAMMA + harm) + (-EULER_GAMMA + harm + 1.0 / (k + 1))) * t1
        if np.all(np.abs(t0) < 1e-17 * np.abs(j0)) and k > 2 * np.sqrt(np.max(q, initial=0.0)):
            break
    half = 0.5 * x
    lg = np.log(half)
    j1 = half * j1
    y0 = TWO_OVER_PI * lg * j0 - y0s / np.pi
    y1 = -TWO_OVER_PI / x + TWO_OVER_PI * lg * j1 - half * y1s / np.pi
    return j0, j1, y0, y1


def _hankel_pq(x, nu2):
    # P and Q of the Hankel expansion with mu = 4 nu^2
    mu = 4.0 * nu2
    p = np.ones_like(x)
    qq = np.zeros_like(x)
    term = np.ones_like(x)
    inv8x = 1.0 / (8.0 * x)
    active = np.ones(x.shape, dtype=bool)
    prev = np.full(x.shape, np.inf)
    for k in range(1, 60):
        term = term * (mu - (2 * k - 1) ** 2) * inv8x / k
        mag = np.abs(term)
        active &= mag < prev
        if not active.any():
            break
        contrib = np.where(active, term, 0.0)
        if k % 2 == 1:
            qq = qq + (1 if (k // 2) % 2 == 0 else -1) * contrib
        else:
            p = p + (1 if (k // 2) % 2 == 0 else -1) * contrib
        prev = np.where(active, mag, prev)
        active &= mag > 1e-17
    return p, qq


def _bessel_hankel(x):
    p0, q0 = _hankel_pq(x, 0.0)
    p1, q1 = _hankel_pq(x, 1.0)
    amp = np.sqrt(TWO_OVER_PI / x)
    cx = np.cos(x)
    sx = np.sin(x)
    c0 = (cx + sx) * INV_SQRT2
    s0 = (sx - cx) * INV_SQRT2
    c1 = (sx - cx) * INV_SQRT2
    s1 = -(sx + cx) * INV_SQRT2
    j0 = amp * (p0 * c0 - q0 * s0)
    y0 = amp * (p0 * s0 + q0 * c0)
    j1 = amp * (p1 * c1 - q1 * s1)
    y1 = amp * (p1 * s1 + q1 * c1)
    return j0, j1, y0, y1


def bessel_01(x, switch):
    """``J0, J1, Y0, Y1`` for positive ``x``; series below ``switch``."""
    x = np.asarray(x, dtype=np.float64)
    out = [np.empty_like(x) for _ in range(4)]
    lo = x < switch
    if lo.any():
        for o, v in zip(out, _bessel_series(x[lo])):
            o[lo] = v
    hi = ~lo
    if hi.any():
        for o, v in zip(out, _bessel_hankel(x[hi])):
            o[hi] = v
    return tuple(out)
