"""Vectorized NumPy implementation of the per-draw kernel.

This is the authoritative backend: the accelerated one mirrors it loop for
loop.  Shapes: u1 (R, l, m), u2 (R, m), u3 (R, l), u4 (R,).  Output is an
(R, 4) array in :data:`gausscomp.kernels.COLUMNS` order with NaN in columns
that were not requested, plus a boolean skip mask.

Per-draw quantities, with V_i = sqrt(t) u1[i] + sqrt(1-t) u2 and
B_i = ||V_i||:

* psi: logZ / (beta sqrt(n)) for the spherical/general variants,
  exp(c3 logZ) for the lifted one.
* dpsi_standard: d/dt of the same per-draw value, via the chain rule through
  dB_i/dt; carries 1/sqrt(t) and 1/sqrt(1-t) factors.
* dpsi_computed: the pairwise form
  -beta/(2 sqrt(n)) * sum_{i,p} w_i w_p kappa_ip (1 - rho_ip), where
  rho_ip = V_i.V_p / (B_i B_p); the lifted variant carries
  -beta^2 c3 (1-c3)/2 * exp(c3 logZ) instead of the leading factor.  Each
  summand is nonnegative by Cauchy-Schwarz, so the per-draw sign is exact.
* max_score: max_i logA_i / beta, the beta -> infinity limit of the
  beta-scaled log-partition (unscaled by sqrt(n)).
"""

from __future__ import annotations

import numpy as np


def eval_batch(u1, u2, u3, u4, t, betas, norms, kappa, beta, s, c3, variant, sqrt_n, want):
    want_psi, want_dstd, want_dcomp, want_max = want
    R, l, m = u1.shape
    sq_t = np.sqrt(t)
    sq_1t = np.sqrt(1.0 - t)

    V = sq_t * u1 + sq_1t * u2[:, None, :]
    B = np.sqrt(np.einsum("rim,rim->ri", V, V))
    bad = np.any(B == 0.0, axis=1)

    expo = s * B + sq_1t * u3
    if variant != 0:
        expo = expo + sq_t * u4[:, None]
    logA = betas[None, :] * expo
    shift = logA.max(axis=1)
    expA = np.exp(logA - shift[:, None])
    total = expA.sum(axis=1)
    w = expA / total[:, None]
    logZ = shift + np.log(total)

    out = np.full((R, 4), np.nan)

    if want_psi:
        out[:, 0] = np.exp(c3 * logZ) if variant == 2 else logZ / (beta * sqrt_n)

    if want_dstd:
        gfac = sq_1t / sq_t - sq_t / sq_1t
        gsum = np.einsum(
            "rim->ri", u1 * u1 - (u2 * u2)[:, None, :] + u1 * u2[:, None, :] * gfac
        )
        with np.errstate(divide="ignore", invalid="ignore"):
            dB = gsum / (2.0 * B)
        if variant == 0:
            inner = w * (s * dB - u3 / (2.0 * sq_1t))
        else:
            drift = s * dB + u4[:, None] / (2.0 * sq_t) - u3 / (2.0 * sq_1t)
            if variant == 1:
                inner = w * norms[None, :] * drift
            else:
                inner = betas[None, :] * w * drift
        acc = inner.sum(axis=1)
        out[:, 1] = c3 * np.exp(c3 * logZ) * acc if variant == 2 else acc / sqrt_n

    if want_dcomp:
        dots = np.matmul(V, V.transpose(0, 2, 1))
        with np.errstate(divide="ignore", invalid="ignore"):
            rho = dots / (B[:, :, None] * B[:, None, :])
        np.clip(rho, -1.0, 1.0, out=rho)
        # kappa's diagonal is exactly zero, so rho_ii rounding never leaks in.
        q = np.einsum("ri,rp,ip,rip->r", w, w, kappa, 1.0 - rho)
        if variant == 2:
            out[:, 2] = -(beta * beta * c3 * (1.0 - c3) / 2.0) * np.exp(c3 * logZ) * q
        else:
            out[:, 2] = -(beta / (2.0 * sqrt_n)) * q

    if want_max:
        out[:, 3] = shift / beta

    if bad.any():
        out[bad] = np.nan
    return out, bad
