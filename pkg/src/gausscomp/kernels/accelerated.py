"""Numba mirror of :mod:`gausscomp.kernels.reference`.

Same contract, explicit loops, one ``prange`` over replications.  Every
iteration writes only its own row of the output, so results are independent
of the thread count.  fastmath stays off: the exact-sign guarantee of the
pairwise derivative relies on IEEE ordering of the clamped summands.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange


@njit(parallel=True, cache=True)
def _eval(u1, u2, u3, u4, t, betas, norms, kappa, beta, s, c3, variant, sqrt_n,
          want_psi, want_dstd, want_dcomp, want_max, out, bad):
    R, l, m = u1.shape
    sq_t = np.sqrt(t)
    sq_1t = np.sqrt(1.0 - t)
    for r in prange(R):
        V = np.empty((l, m))
        B = np.empty(l)
        logA = np.empty(l)
        w = np.empty(l)
        zero_b = False
        for i in range(l):
            acc = 0.0
            for j in range(m):
                vij = sq_t * u1[r, i, j] + sq_1t * u2[r, j]
                V[i, j] = vij
                acc += vij * vij
            B[i] = np.sqrt(acc)
            if B[i] == 0.0:
                zero_b = True
        if zero_b:
            bad[r] = True
            for k in range(4):
                out[r, k] = np.nan
            continue
        for i in range(l):
            e = s * B[i] + sq_1t * u3[r, i]
            if variant != 0:
                e += sq_t * u4[r]
            logA[i] = betas[i] * e
        shift = logA[0]
        for i in range(1, l):
            if logA[i] > shift:
                shift = logA[i]
        total = 0.0
        for i in range(l):
            w[i] = np.exp(logA[i] - shift)
            total += w[i]
        logZ = shift + np.log(total)
        for i in range(l):
            w[i] /= total

        if want_psi:
            if variant == 2:
                out[r, 0] = np.exp(c3 * logZ)
            else:
                out[r, 0] = logZ / (beta * sqrt_n)

        if want_dstd:
            gfac = sq_1t / sq_t - sq_t / sq_1t
            acc = 0.0
            for i in range(l):
                g = 0.0
                for j in range(m):
                    g += (u1[r, i, j] * u1[r, i, j] - u2[r, j] * u2[r, j]
                          + u1[r, i, j] * u2[r, j] * gfac)
                dB = g / (2.0 * B[i])
                if variant == 0:
                    acc += w[i] * (s * dB - u3[r, i] / (2.0 * sq_1t))
                else:
                    drift = s * dB + u4[r] / (2.0 * sq_t) - u3[r, i] / (2.0 * sq_1t)
                    if variant == 1:
                        acc += w[i] * norms[i] * drift
                    else:
                        acc += betas[i] * w[i] * drift
            if variant == 2:
                out[r, 1] = c3 * np.exp(c3 * logZ) * acc
            else:
                out[r, 1] = acc / sqrt_n

        if want_dcomp:
            q = 0.0
            for i in range(l):
                for p in range(i + 1, l):
                    dot = 0.0
                    for j in range(m):
                        dot += V[i, j] * V[p, j]
                    rho = dot / (B[i] * B[p])
                    if rho > 1.0:
                        rho = 1.0
                    elif rho < -1.0:
                        rho = -1.0
                    q += 2.0 * w[i] * w[p] * kappa[i, p] * (1.0 - rho)
            if variant == 2:
                out[r, 2] = -(beta * beta * c3 * (1.0 - c3) / 2.0) * np.exp(c3 * logZ) * q
            else:
                out[r, 2] = -(beta / (2.0 * sqrt_n)) * q

        if want_max:
            out[r, 3] = shift / beta


def eval_batch(u1, u2, u3, u4, t, betas, norms, kappa, beta, s, c3, variant, sqrt_n, want):
    R = u1.shape[0]
    out = np.full((R, 4), np.nan)
    bad = np.zeros(R, dtype=np.bool_)
    _eval(u1, u2, u3, u4, t, betas, norms, kappa, beta, s, c3, variant, sqrt_n,
          want[0], want[1], want[2], want[3], out, bad)
    return out, bad
