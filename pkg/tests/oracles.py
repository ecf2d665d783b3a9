"""Independent oracles used by the test suite.

Everything here deliberately avoids the library's own evaluation paths:
closed forms, 1-D quadrature against the chi density, naive direct
summation, and plain-Python per-draw recomputation.  Expected values frozen
into tests were produced by these.
"""

import math

import numpy as np
from scipy.integrate import quad


def chi_mean(m: int) -> float:
    """E chi_m = sqrt(2) Gamma((m+1)/2) / Gamma(m/2)."""
    return math.sqrt(2.0) * math.gamma((m + 1) / 2) / math.gamma(m / 2)


def chi_pdf(x: float, m: int) -> float:
    return x ** (m - 1) * math.exp(-x * x / 2.0) / (2 ** (m / 2 - 1) * math.gamma(m / 2))


def chi_exp_moment(c: float, m: int) -> float:
    """E exp(c chi_m) by adaptive quadrature against the chi density.

    The integrand is assembled in log space so the e^(cx) factor cannot
    overflow before the Gaussian tail kills it.
    """
    log_norm = (m / 2 - 1) * math.log(2.0) + math.lgamma(m / 2)

    def integrand(x):
        if x <= 0.0:
            return 0.0
        return math.exp(c * x + (m - 1) * math.log(x) - x * x / 2.0 - log_norm)

    val, err = quad(integrand, 0.0, np.inf, limit=200)
    assert err < 1e-6 * max(1.0, abs(val))
    return val


def lifted_flat_value(betas, s: int, m: int) -> float:
    """Closed form of E Z at c3 = 1: sum_i e^(beta_i^2 / 2) E e^(beta_i s chi_m)."""
    return sum(math.exp(b * b / 2.0) * chi_exp_moment(b * s, m) for b in betas)


def brute_force_draw(u1, u2, u3, u4, t, betas, norms, gram, beta, s, c3, variant, n):
    """Plain-Python recomputation of all four per-draw functionals.

    Direct summation (no log-sum-exp shift), explicit loops, and the
    Cauchy-Schwarz gap recomputed from scratch.  Only safe for small
    exponents; that is the point.
    """
    l, m = u1.shape
    sq_t, sq_1t = math.sqrt(t), math.sqrt(1.0 - t)
    V = [[sq_t * u1[i][j] + sq_1t * u2[j] for j in range(m)] for i in range(l)]
    B = [math.sqrt(sum(V[i][j] ** 2 for j in range(m))) for i in range(l)]
    logA = []
    for i in range(l):
        e = s * B[i] + sq_1t * u3[i]
        if variant != 0:
            e += sq_t * u4
        logA.append(betas[i] * e)
    Z = sum(math.exp(a) for a in logA)
    w = [math.exp(a) / Z for a in logA]
    logZ = math.log(Z)
    sqrt_n = math.sqrt(n)

    psi = Z**c3 if variant == 2 else logZ / (beta * sqrt_n)

    gfac = sq_1t / sq_t - sq_t / sq_1t
    acc = 0.0
    for i in range(l):
        g = sum(u1[i][j] ** 2 - u2[j] ** 2 + u1[i][j] * u2[j] * gfac for j in range(m))
        dB = g / (2.0 * B[i])
        if variant == 0:
            acc += w[i] * (s * dB - u3[i] / (2.0 * sq_1t))
        elif variant == 1:
            acc += w[i] * norms[i] * (s * dB + u4 / (2.0 * sq_t) - u3[i] / (2.0 * sq_1t))
        else:
            acc += betas[i] * w[i] * (s * dB + u4 / (2.0 * sq_t) - u3[i] / (2.0 * sq_1t))
    dstd = c3 * Z**c3 * acc if variant == 2 else acc / sqrt_n

    q = 0.0
    for i in range(l):
        for p in range(l):
            if i == p:
                continue
            kappa = norms[i] * norms[p] - norms[i] * norms[p] * gram[i][p]
            dot = sum(V[i][j] * V[p][j] for j in range(m))
            rho = dot / (B[i] * B[p])
            q += w[i] * w[p] * kappa * (1.0 - rho)
    if variant == 2:
        dcomp = -(beta * beta * c3 * (1.0 - c3) / 2.0) * Z**c3 * q
    else:
        dcomp = -(beta / (2.0 * sqrt_n)) * q

    return psi, dstd, dcomp, max(logA) / beta
