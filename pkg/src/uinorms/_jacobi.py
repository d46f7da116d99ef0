"""Compiled Jacobi kernels.

Both kernels use the same complex plane rotation. For a Hermitian 2x2 pivot
``[[a, g], [conj(g), b]]`` with ``g = |g| e``, the rotation

    J = [[c, s e], [-s conj(e), c]]

is a phase change that makes the pivot real, a real symmetric Jacobi
rotation, and the inverse phase change. ``J* H J`` is diagonal with entries
``a - t|g|`` and ``b + t|g|``.
"""

import math

import numba
import numpy as np

# relative column norm below which a column counts as zero in the one-sided kernel
NOISE_REL = 1e-15


@numba.njit(cache=True)
def _rotation(app, aqq, g):
    theta = (aqq - app) / (2.0 * g)
    if abs(theta) > 1e150:
        t = 0.5 / theta
    else:
        t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
        if theta < 0.0:
            t = -t
    c = 1.0 / math.sqrt(t * t + 1.0)
    return t, c, t * c


@numba.njit(cache=True)
def hermitian_jacobi(a, tol, max_sweeps):
    """Cyclic Jacobi eigen-iteration on a Hermitian matrix, in place.

    Returns ``(eigenvalues, eigenvectors, sweeps, off, converged)`` where
    ``off`` is the off-diagonal Frobenius mass at exit. Eigenvalues are in
    pivot order, unsorted.
    """
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    fro = 0.0
    for i in range(n):
        for j in range(n):
            fro += a[i, j].real ** 2 + a[i, j].imag ** 2
    fro = math.sqrt(fro)
    off = 0.0
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += a[i, j].real ** 2 + a[i, j].imag ** 2
        off = math.sqrt(off)
        if off <= tol * fro:
            w = np.empty(n)
            for i in range(n):
                w[i] = a[i, i].real
            return w, v, sweep, off, True
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                g = abs(apq)
                if g == 0.0:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                t, c, s = _rotation(app, aqq, g)
                e = apq / g
                se = s * e
                sec = s * e.conjugate()
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - sec * akq
                    a[k, q] = se * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - se * aqk
                    a[q, k] = sec * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = app - t * g
                a[q, q] = aqq + t * g
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - sec * vkq
                    v[k, q] = se * vkp + c * vkq
    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i].real
    return w, v, max_sweeps, off, False


@numba.njit(cache=True)
def one_sided_jacobi(g, want_v, tol, max_sweeps):
    """Hestenes one-sided Jacobi on the columns of ``g`` (rows >= cols), in place.

    Columns are rotated until every pair is orthogonal to relative precision
    ``tol``. On exit the column norms of ``g`` are the singular values and,
    when ``want_v`` is set, ``v`` holds the accumulated right rotations.
    Returns ``(v, sweeps, converged)``.
    """
    m, n = g.shape
    if want_v:
        v = np.eye(n, dtype=np.complex128)
    else:
        v = np.zeros((0, 0), dtype=np.complex128)
    # columns whose squared norm falls below this are rounding noise; rotating
    # them against each other never reaches relative orthogonality
    fro2 = 0.0
    for k in range(m):
        for j in range(n):
            fro2 += g[k, j].real * g[k, j].real + g[k, j].imag * g[k, j].imag
    noise = NOISE_REL * NOISE_REL * fro2
    for sweep in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                alpha = 0.0
                beta = 0.0
                gamma = 0.0 + 0.0j
                for k in range(m):
                    gp = g[k, p]
                    gq = g[k, q]
                    alpha += gp.real * gp.real + gp.imag * gp.imag
                    beta += gq.real * gq.real + gq.imag * gq.imag
                    gamma += gp.conjugate() * gq
                ag = abs(gamma)
                if ag == 0.0 or ag <= tol * math.sqrt(alpha * beta) or min(alpha, beta) <= noise:
                    continue
                rotated = True
                t, c, s = _rotation(alpha, beta, ag)
                e = gamma / ag
                se = s * e
                sec = s * e.conjugate()
                for k in range(m):
                    gp = g[k, p]
                    gq = g[k, q]
                    g[k, p] = c * gp - sec * gq
                    g[k, q] = se * gp + c * gq
                if want_v:
                    for k in range(n):
                        vp = v[k, p]
                        vq = v[k, q]
                        v[k, p] = c * vp - sec * vq
                        v[k, q] = se * vp + c * vq
        if not rotated:
            return v, sweep + 1, True
    return v, max_sweeps, False
