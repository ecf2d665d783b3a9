"""Domain types and the per-draw interpolation kernel.

The objects here describe one Monte Carlo replication of the interpolated
Gaussian model: a finite set of directions ``x^(1), ..., x^(l)`` in R^n, an
m x n Gaussian matrix G coupled through the interpolation time ``t`` to an
independent Gaussian surrogate (an m-vector u2, an n-vector h and a scalar
u4).  Everything downstream (estimators, quadrature, limit checks) is built
from the quantities computed in :func:`interpolation_state`:

    B[i]    = || sqrt(t) * G xhat^(i) + sqrt(1-t) * u2 ||_2
    logA[i] = beta_i * (s * B[i] [+ sqrt(t) * u4] + sqrt(1-t) * h.xhat^(i))
    logZ    = logsumexp(logA)
    w[i]    = softmax weight A^(i) / Z

where xhat^(i) = x^(i) / ||x^(i)|| and beta_i = beta * ||x^(i)||.  The
spherical variant assumes unit-norm vectors and omits the u4 term.

Functions in this module operate on a single replication and are written for
clarity; the batched hot paths live in :mod:`gausscomp.kernels`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateDirectionError,
    ReplicationSkip,
    ValidationError,
    VariantMismatchError,
)

UNIT_NORM_TOL = 1e-12
GRAM_RANGE_TOL = 1e-12
KAPPA_CLAMP_TOL = 1e-12


class Variant(enum.Enum):
    """Model flavor: which functional the per-draw state feeds."""

    SPHERICAL = "spherical"  # unit-norm set, log-partition scaled by 1/(beta sqrt(n))
    GENERAL = "general"      # arbitrary norms, extra sqrt(t)*u4 coupling
    LIFTED = "lifted"        # general exponent, functional is Z**c3 instead of log Z

    @property
    def code(self) -> int:
        return _VARIANT_CODES[self]

    @property
    def uses_u4(self) -> bool:
        return self is not Variant.SPHERICAL


_VARIANT_CODES = {Variant.SPHERICAL: 0, Variant.GENERAL: 1, Variant.LIFTED: 2}


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class VectorSet:
    """A finite set of directions, stored as columns of an n x l matrix.

    ``gram_unit`` is the Gram matrix of the normalized columns; ``kappa`` is
    the Cauchy-Schwarz gap ||x^(i)|| * ||x^(p)|| - x^(i).x^(p) >= 0 with the
    diagonal pinned to exactly zero and sub-roundoff negatives clamped.
    """

    vectors: np.ndarray      # (n, l)
    norms: np.ndarray        # (l,)
    gram_unit: np.ndarray    # (l, l)
    unit_flag: bool
    kappa: np.ndarray = field(repr=False, default=None)

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def l(self) -> int:
        return self.vectors.shape[1]

    @property
    def directions(self) -> np.ndarray:
        """Normalized columns, shape (n, l)."""
        return _frozen(self.vectors / self.norms)


def build_set(matrix) -> VectorSet:
    """Validate an n x l real matrix and derive the cached set quantities.

    Raises on non-finite entries and on zero columns; clamps the normalized
    Gram entries into [-1, 1] (they can overshoot by rounding only).
    """
    m = np.asarray(matrix, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ValidationError(f"expected a 2-D matrix with n, l >= 1, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError("vector-set matrix contains non-finite entries")
    norms = np.linalg.norm(m, axis=0)
    if np.any(norms == 0.0):
        cols = np.flatnonzero(norms == 0.0).tolist()
        raise DegenerateDirectionError(f"zero column(s) at index {cols}: no direction defined")
    unit = m / norms
    gram = unit.T @ unit
    gram = 0.5 * (gram + gram.T)
    overshoot = np.max(np.abs(gram)) - 1.0
    if overshoot > GRAM_RANGE_TOL:
        raise ValidationError(f"normalized Gram entry outside [-1, 1] by {overshoot:.3e}")
    np.clip(gram, -1.0, 1.0, out=gram)
    np.fill_diagonal(gram, 1.0)
    kappa = norms[:, None] * norms[None, :] * (1.0 - gram)
    if kappa.min() < -KAPPA_CLAMP_TOL:
        raise ValidationError("Cauchy-Schwarz gap is negative beyond roundoff")
    np.clip(kappa, 0.0, None, out=kappa)
    np.fill_diagonal(kappa, 0.0)
    unit_flag = bool(np.all(np.abs(norms - 1.0) <= UNIT_NORM_TOL))
    return VectorSet(
        vectors=_frozen(m),
        norms=_frozen(norms),
        gram_unit=_frozen(gram),
        unit_flag=unit_flag,
        kappa=_frozen(kappa),
    )


def load_set(path) -> VectorSet:
    """Read a vector set from plain text: n rows of l reals, '#' comments allowed."""
    try:
        m = np.loadtxt(path, comments="#", dtype=np.float64, ndmin=2)
    except ValueError as exc:
        raise ValidationError(f"cannot parse vector-set file {path}: {exc}") from exc
    return build_set(m)


def save_set(vset: VectorSet, path, header: str = "") -> None:
    """Write the stored vectors in the text format read back by :func:`load_set`."""
    lines = []
    for text in header.splitlines():
        lines.append(f"# {text}")
    for row in vset.vectors:
        lines.append(" ".join(f"{v:.17g}" for v in row))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


@dataclass(frozen=True)
class ModelParams:
    """Variant, inverse temperature and derived per-vector scales.

    ``betas[i] = beta * ||x^(i)||`` for the general and lifted variants and
    exactly ``beta`` for the spherical one (whose set must be unit-norm).
    ``m`` is the row dimension of the Gaussian matrix G.
    """

    variant: Variant
    m: int
    beta: float
    s: int
    c3: float | None
    betas: np.ndarray

    @property
    def l(self) -> int:
        return self.betas.shape[0]

    def check_set(self, vset: VectorSet) -> None:
        if vset.l != self.l:
            raise VariantMismatchError(
                f"parameters were built for l={self.l}, set has l={vset.l}"
            )
        if self.variant is Variant.SPHERICAL:
            if not vset.unit_flag:
                raise VariantMismatchError("spherical variant requires a unit-norm set")
        elif not np.array_equal(self.betas, self.beta * vset.norms):
            raise VariantMismatchError("betas do not equal beta * norms for this set")


def make_params(
    vset: VectorSet,
    variant: Variant | str = Variant.SPHERICAL,
    *,
    m: int,
    beta: float,
    s: int,
    c3: float | None = None,
) -> ModelParams:
    """Build :class:`ModelParams` for a set, validating the variant's preconditions."""
    variant = Variant(variant)
    if not (beta > 0 and np.isfinite(beta)):
        raise ValidationError(f"beta must be a positive real, got {beta}")
    if s not in (-1, 1):
        raise ValidationError(f"s must be -1 or +1, got {s}")
    if m < 1:
        raise ValidationError(f"m must be >= 1, got {m}")
    if variant is Variant.LIFTED:
        if c3 is None or not np.isfinite(c3):
            raise ValidationError("lifted variant requires a finite c3")
    elif c3 is not None:
        raise ValidationError(f"c3 is only meaningful for the lifted variant, got {c3}")
    if variant is Variant.SPHERICAL:
        if not vset.unit_flag:
            raise VariantMismatchError("spherical variant requires a unit-norm set")
        betas = np.full(vset.l, float(beta))
    else:
        betas = float(beta) * vset.norms
    return ModelParams(
        variant=variant,
        m=int(m),
        beta=float(beta),
        s=int(s),
        c3=None if c3 is None else float(c3),
        betas=_frozen(betas),
    )


@dataclass(frozen=True)
class ReplicationDraw:
    """One joint sample of the model randomness, stored in projected form.

    ``u1[i, j] = (G xhat^(i))_j`` and ``u3[i] = h . xhat^(i)`` are exact linear
    images of one shared G and one shared h, so the cross-correlations
    ``E u1[i, j] u1[p, j] = gram_unit[i, p]`` hold by construction.  The raw
    G and h are discarded after projection.
    """

    u1: np.ndarray  # (l, m)
    u2: np.ndarray  # (m,)
    u3: np.ndarray  # (l,)
    u4: float


@dataclass(frozen=True)
class InterpolationState:
    """Per-draw kernel quantities at one interpolation time."""

    t: float
    B: np.ndarray     # (l,) interpolated norms
    logA: np.ndarray  # (l,) exponents
    logZ: float
    w: np.ndarray     # (l,) softmax weights, sum to 1


def _check_t(t: float) -> float:
    if not (0.0 <= t <= 1.0):
        raise ValidationError(f"t must lie in [0, 1], got {t}")
    return float(t)


def interpolation_state(
    draw: ReplicationDraw, vset: VectorSet, params: ModelParams, t: float
) -> InterpolationState:
    """Compute B, logA, logZ and the softmax weights for one draw.

    logZ and w always go through a max-shifted log-sum-exp: exponents grow
    like beta * max_norm * (chi_m + normals) and are unsafe to exponentiate
    directly once squared in downstream ratios.
    """
    t = _check_t(t)
    params.check_set(vset)
    sq_t, sq_1t = np.sqrt(t), np.sqrt(1.0 - t)
    v = sq_t * draw.u1 + sq_1t * draw.u2[None, :]
    B = np.sqrt(np.sum(v * v, axis=1))
    expo = params.s * B + sq_1t * draw.u3
    if params.variant.uses_u4:
        expo = expo + sq_t * draw.u4
    logA = params.betas * expo
    shift = logA.max()
    expA = np.exp(logA - shift)
    total = expA.sum()
    logZ = shift + np.log(total)
    return InterpolationState(t=t, B=B, logA=logA, logZ=float(logZ), w=expA / total)


def mixed_overlap(draw: ReplicationDraw, t: float, i: int, p: int) -> float:
    """Cosine between the interpolated vectors of set elements i and p.

    Returns rho_ip = v^(i).v^(p) / (B^(i) B^(p)) with v^(i) = sqrt(t) u1[i]
    + sqrt(1-t) u2, clamped into [-1, 1] (Cauchy-Schwarz holds exactly; only
    rounding can overshoot).
    """
    t = _check_t(t)
    sq_t, sq_1t = np.sqrt(t), np.sqrt(1.0 - t)
    vi = sq_t * draw.u1[i] + sq_1t * draw.u2
    vp = sq_t * draw.u1[p] + sq_1t * draw.u2
    bi = np.linalg.norm(vi)
    bp = np.linalg.norm(vp)
    if bi == 0.0 or bp == 0.0:
        raise ReplicationSkip(f"zero interpolated norm at t={t} (elements {i}, {p})")
    return float(np.clip(vi @ vp / (bi * bp), -1.0, 1.0))
