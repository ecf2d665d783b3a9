"""Gaussian integration-by-parts identity checks.

For jointly Gaussian g and smooth f, E[g_k f(g)] = sum_j E[g_k g_j] E[df/dg_j].
Applied to the per-draw softmax ratios this yields, for each projected block
of the randomness, an identity between a raw expectation (lhs) and its
expanded form (rhs).  Both sides are estimated by Monte Carlo on common
random numbers and compared in units of their combined standard error.

Each identity is named by what it integrates by parts:

=================  =======================================  ==============
id                 lhs expectation                          differentiated
=================  =======================================  ==============
u1u2_by_u1         A_i u1[i,j] u2[j] / (Z^(1-c3) B_i)       u1[., j]
u1u2_by_u2         same lhs                                 u2[j]
u1_sq              A_i u1[i,j]^2 / (Z^(1-c3) B_i)           u1[., j]
u2_sq              A_i u2[j]^2  / (Z^(1-c3) B_i)            u2[j]
u3_linear          A_i u3[i] / Z^(1-c3)                     u3[.]
u4_linear          A_i u4 / Z^(1-c3)                        u4
=================  =======================================  ==============

The spherical and general variants are the c3 = 0 special case (Z^(1-c3) = Z
and the cross-sum factor 1 - c3 = 1); u4_linear exists only when the model
couples u4.  Blocks sharing one underlying Gaussian (u1 rows across set
elements, u3 entries) pick up the normalized Gram matrix as the covariance;
the shared u2 and u4 blocks do not.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UnknownIdentityError, ValidationError
from .model import ModelParams, Variant, VectorSet
from .sampling import DrawBatch

IDENTITY_IDS = ("u1u2_by_u1", "u1u2_by_u2", "u1_sq", "u2_sq", "u3_linear", "u4_linear")


def identity_ids(variant: Variant) -> tuple:
    """Identity ids applicable to a variant."""
    if variant is Variant.SPHERICAL:
        return IDENTITY_IDS[:-1]
    return IDENTITY_IDS


@dataclass(frozen=True)
class IdentityState:
    """Shared per-draw quantities, computed once per (draws, params, t)."""

    t: float
    sq_t: float
    sq_1t: float
    V: np.ndarray      # (R, l, m) interpolated vectors
    B: np.ndarray      # (R, l)
    w: np.ndarray      # (R, l) softmax weights
    zc3: np.ndarray    # (R,) exp(c3 logZ); ones unless lifted
    c3: float
    betas: np.ndarray  # (l,)
    gram: np.ndarray   # (l, l)
    s: float
    bad: np.ndarray    # (R,) zero-norm skip mask


def prepare_state(draws: DrawBatch, vset: VectorSet, params: ModelParams, t: float) -> IdentityState:
    if not (0.0 < t < 1.0):
        raise ValidationError(f"identity checks need t strictly inside (0, 1), got {t}")
    params.check_set(vset)
    sq_t, sq_1t = np.sqrt(t), np.sqrt(1.0 - t)
    V = sq_t * draws.u1 + sq_1t * draws.u2[:, None, :]
    B = np.sqrt(np.einsum("rim,rim->ri", V, V))
    bad = np.any(B == 0.0, axis=1)
    expo = params.s * B + sq_1t * draws.u3
    if params.variant.uses_u4:
        expo = expo + sq_t * draws.u4[:, None]
    logA = params.betas[None, :] * expo
    shift = logA.max(axis=1)
    expA = np.exp(logA - shift[:, None])
    total = expA.sum(axis=1)
    w = expA / total[:, None]
    c3 = params.c3 or 0.0
    logZ = shift + np.log(total)
    zc3 = np.exp(c3 * logZ) if c3 != 0.0 else np.ones_like(logZ)
    return IdentityState(
        t=float(t), sq_t=sq_t, sq_1t=sq_1t, V=V, B=B, w=w, zc3=zc3, c3=c3,
        betas=params.betas, gram=vset.gram_unit, s=float(params.s), bad=bad,
    )


def _cross_sum(st: IdentityState, coeffs: np.ndarray, j: int) -> np.ndarray:
    """sum_p coeffs[p] * w_p * V[p, j] / B_p, per draw."""
    return (st.w * st.V[:, :, j] / st.B) @ coeffs


def _diag_weight(st: IdentityState, i: int) -> np.ndarray:
    """A_i / Z^(1-c3), per draw."""
    return st.w[:, i] * st.zc3


def _pair_prefactor(st: IdentityState, i: int) -> np.ndarray:
    """(1-c3) * A_i A_p / Z^(2-c3) with the w_p factor left for the cross
    sum: the pair weight equals w_i * w_p * exp(c3 logZ)."""
    return (1.0 - st.c3) * st.w[:, i] * st.zc3


def _ratio_pair(st, i, j, own_u, own_scale, gram_row):
    """Shared rhs shape for the four B-ratio identities."""
    Bi = st.B[:, i]
    Wi = _diag_weight(st, i)
    e_ij = st.V[:, i, j] / Bi
    diag_core = (st.betas[i] * st.s - 1.0 / Bi) * e_ij * own_u * own_scale
    coeffs = (st.gram[i] * st.betas) if gram_row else st.betas
    cross = _pair_prefactor(st, i) * st.s * own_scale * own_u * _cross_sum(st, coeffs, j) / Bi
    return Wi, diag_core, cross


def _u1u2_lhs(st, draws, i, j):
    return _diag_weight(st, i) * draws.u1[:, i, j] * draws.u2[:, j] / st.B[:, i]


def _eval_u1u2_by_u1(st, draws, i, j):
    lhs = _u1u2_lhs(st, draws, i, j)
    Wi, diag_core, cross = _ratio_pair(st, i, j, draws.u2[:, j], st.sq_t, gram_row=True)
    return lhs, Wi / st.B[:, i] * diag_core - cross


def _eval_u1u2_by_u2(st, draws, i, j):
    lhs = _u1u2_lhs(st, draws, i, j)
    Wi, diag_core, cross = _ratio_pair(st, i, j, draws.u1[:, i, j], st.sq_1t, gram_row=False)
    return lhs, Wi / st.B[:, i] * diag_core - cross


def _eval_u1_sq(st, draws, i, j):
    u1ij = draws.u1[:, i, j]
    lhs = _diag_weight(st, i) * u1ij * u1ij / st.B[:, i]
    Wi, diag_core, cross = _ratio_pair(st, i, j, u1ij, st.sq_t, gram_row=True)
    return lhs, Wi / st.B[:, i] * (1.0 + diag_core) - cross


def _eval_u2_sq(st, draws, i, j):
    u2j = draws.u2[:, j]
    lhs = _diag_weight(st, i) * u2j * u2j / st.B[:, i]
    Wi, diag_core, cross = _ratio_pair(st, i, j, u2j, st.sq_1t, gram_row=False)
    return lhs, Wi / st.B[:, i] * (1.0 + diag_core) - cross


def _eval_u3_linear(st, draws, i, j):
    # j is irrelevant: u3 has one entry per set element.
    lhs = _diag_weight(st, i) * draws.u3[:, i]
    cross = _pair_prefactor(st, i) * (st.w @ (st.gram[i] * st.betas))
    rhs = st.sq_1t * (st.betas[i] * _diag_weight(st, i) - cross)
    return lhs, rhs


def _eval_u4_linear(st, draws, i, j):
    lhs = _diag_weight(st, i) * draws.u4
    cross = _pair_prefactor(st, i) * (st.w @ st.betas)
    rhs = st.sq_t * (st.betas[i] * _diag_weight(st, i) - cross)
    return lhs, rhs


_EVALUATORS = {
    "u1u2_by_u1": _eval_u1u2_by_u1,
    "u1u2_by_u2": _eval_u1u2_by_u2,
    "u1_sq": _eval_u1_sq,
    "u2_sq": _eval_u2_sq,
    "u3_linear": _eval_u3_linear,
    "u4_linear": _eval_u4_linear,
}


def evaluate_identity(
    st: IdentityState,
    draws: DrawBatch,
    variant: Variant,
    identity_id: str,
    i: int,
    j: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Per-draw (lhs, rhs) arrays for one identity at fixed element i, coordinate j."""
    if identity_id not in _EVALUATORS:
        raise UnknownIdentityError(f"unknown identity id {identity_id!r}; known: {IDENTITY_IDS}")
    if identity_id not in identity_ids(variant):
        raise UnknownIdentityError(f"identity {identity_id!r} does not apply to {variant.value}")
    R, l, m = draws.u1.shape
    if not (0 <= i < l):
        raise ValidationError(f"set element index {i} outside [0, {l})")
    if not (0 <= j < m):
        raise ValidationError(f"coordinate index {j} outside [0, {m})")
    return _EVALUATORS[identity_id](st, draws, i, j)
