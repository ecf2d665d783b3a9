"""Extreme-value limits and the comparison-inequality checks.

As beta grows the softmax concentrates on its argmax and the beta-scaled
log-partition converges, draw by draw, to the maximum score

    max_i ||x^(i)|| * (s B_i [+ sqrt(t) u4] + sqrt(1-t) h.xhat^(i)).

Evaluating that maximum at t=1 gives the E-max of the Gaussian-matrix
process; at t=0 it gives the decoupled surrogate E max_i (s ||x|| ||u2|| +
h.x).  The classical max (s=+1) and minmax (s=-1) comparison inequalities
fall out as the two endpoint orderings of a curve that is monotone in t, and
their lifted (exponential-moment) counterparts likewise.  This module
estimates both sides of each inequality on common random numbers and reports
the oriented margin in standard-error units.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError, VariantMismatchError
from .model import ModelParams, Variant, VectorSet, make_params
from .sampling import (
    GENERATOR_NAME,
    DrawBatch,
    Estimate,
    SeedPlan,
    aggregate,
    evaluate_grid,
    generate_draws,
)


class BoundDirection(enum.Enum):
    LHS_LEQ_RHS = "lhs<=rhs"
    LHS_GEQ_RHS = "lhs>=rhs"


@dataclass(frozen=True)
class BoundReport:
    """One inequality check: two estimates, an orientation and a verdict."""

    name: str
    lhs: Estimate
    rhs: Estimate
    direction: BoundDirection
    margin: float  # oriented slack; positive when the inequality holds with room
    passed: bool
    metadata: dict

    def as_dict(self) -> dict:
        return {
            "check": self.name,
            "lhs": self.lhs.as_dict(),
            "rhs": self.rhs.as_dict(),
            "direction": self.direction.value,
            "margin": self.margin,
            "pass": self.passed,
            "metadata": self.metadata,
        }


def _report(name, lhs, rhs, direction, metadata) -> BoundReport:
    margin = rhs.mean - lhs.mean if direction is BoundDirection.LHS_LEQ_RHS else lhs.mean - rhs.mean
    noise = 3.0 * float(np.hypot(lhs.std_error, rhs.std_error))
    return BoundReport(
        name=name,
        lhs=lhs,
        rhs=rhs,
        direction=direction,
        margin=float(margin),
        passed=bool(margin >= -noise),
        metadata=metadata,
    )


def _score_params(vset: VectorSet, s: int, general: bool, m: int | None) -> ModelParams:
    variant = Variant.GENERAL if general else Variant.SPHERICAL
    # The max score is invariant in beta, so any positive value works here.
    return make_params(vset, variant, m=m if m is not None else vset.n, beta=1.0, s=s)


def _max_scores(vset, params, plan, ts, draws=None) -> np.ndarray:
    grid = evaluate_grid(vset, params, plan, ts, ("max_score",), draws=draws)
    if grid.skipped.any():
        scores = grid.values["max_score"].copy()
        scores[grid.skipped] = np.nan
        return scores
    return grid.values["max_score"]


def interpolated_max(
    vset: VectorSet,
    s: int,
    t: float,
    plan: SeedPlan,
    general: bool = False,
    m: int | None = None,
    draws: DrawBatch | None = None,
) -> Estimate:
    """E max over the set of the interpolated scores, scaled by 1/sqrt(n).

    This is the beta -> infinity pointwise limit of the direct functional:
    at t=1 it is E max_i (s ||G x^(i)|| [+ ||x^(i)|| u4]) / sqrt(n); at t=0
    the surrogate E max_i (s ||x^(i)|| ||u2|| + h.x^(i)) / sqrt(n).
    """
    params = _score_params(vset, s, general, m)
    scores = _max_scores(vset, params, plan, [t], draws=draws)[0]
    return aggregate(scores / np.sqrt(vset.n), np.isnan(scores))


def slepian_gordon_check(
    vset: VectorSet,
    s: int,
    plan: SeedPlan,
    general: bool = False,
    m: int | None = None,
) -> BoundReport:
    """Endpoint comparison of the max-form (s=+1) or min-form (s=-1) process.

    s=+1: E max_i ||G x|| (+ norm-weighted u4) <= the decoupled surrogate.
    s=-1: the min-form restatement E min_i (||G x|| - ||x|| u4) >=
    E min_i (||x|| ||u2|| - h.x), evaluated via the negated max scores.
    """
    params = _score_params(vset, s, general, m)
    draws = generate_draws(plan, vset, params.m)
    scores = _max_scores(vset, params, plan, [1.0, 0.0], draws=draws)
    sqrt_n = np.sqrt(vset.n)
    meta = _meta(vset, plan, s=s, general=general)
    if s == 1:
        lhs = aggregate(scores[0] / sqrt_n, np.isnan(scores[0]))
        rhs = aggregate(scores[1] / sqrt_n, np.isnan(scores[1]))
        return _report("slepian", lhs, rhs, BoundDirection.LHS_LEQ_RHS, meta)
    lhs = aggregate(-scores[0] / sqrt_n, np.isnan(scores[0]))
    rhs = aggregate(-scores[1] / sqrt_n, np.isnan(scores[1]))
    return _report("gordon", lhs, rhs, BoundDirection.LHS_GEQ_RHS, meta)


def _exp_estimate(exponents: np.ndarray) -> Estimate:
    """Mean and SE of exp(exponents) through an unconditional max shift."""
    bad = np.isnan(exponents)
    vals = exponents[~bad]
    shift = vals.max()
    shifted = np.exp(vals - shift)
    scale = float(np.exp(shift))
    n = vals.size
    return Estimate(
        mean=scale * float(np.mean(shifted)),
        std_error=scale * float(np.std(shifted, ddof=1) / np.sqrt(n)),
        n=n,
        skipped=int(np.count_nonzero(bad)),
    )


def lifted_exp_functional(
    vset: VectorSet,
    s: int,
    c3s: float,
    t: float,
    plan: SeedPlan,
    m: int | None = None,
    draws: DrawBatch | None = None,
) -> Estimate:
    """E exp(c3s * max score) at interpolation time t (norm-weighted scores).

    The beta -> infinity limit of the lifted functional under the scaling
    c3 = c3s / beta: t=1 is the Gaussian-matrix side, t=0 the surrogate side.
    Computed by a max-shifted log-mean-exp; the shift is unconditional.
    """
    if not (c3s > 0):
        raise ValidationError(f"c3s must be positive, got {c3s}")
    params = _score_params(vset, s, general=True, m=m)
    scores = _max_scores(vset, params, plan, [t], draws=draws)[0]
    return _exp_estimate(c3s * scores)


def lifted_bound_check(
    vset: VectorSet,
    s: int,
    c3s: float,
    plan: SeedPlan,
    m: int | None = None,
) -> BoundReport:
    """Lifted endpoint comparison: E e^(c3s max) at t=1 vs the surrogate t=0."""
    if not (c3s > 0):
        raise ValidationError(f"c3s must be positive, got {c3s}")
    params = _score_params(vset, s, general=True, m=m)
    draws = generate_draws(plan, vset, params.m)
    scores = _max_scores(vset, params, plan, [1.0, 0.0], draws=draws)
    lhs = _exp_estimate(c3s * scores[0])
    rhs = _exp_estimate(c3s * scores[1])
    name = "lifted-slepian" if s == 1 else "lifted-gordon"
    meta = _meta(vset, plan, s=s, c3s=c3s)
    return _report(name, lhs, rhs, BoundDirection.LHS_LEQ_RHS, meta)


def chain_bound_check(
    vset: VectorSet,
    s: int,
    c3s: float,
    plan: SeedPlan,
    m: int | None = None,
) -> BoundReport:
    """E max_i s||G x^(i)|| against the shifted log-exponential surrogate.

    Unit-norm sets only: E max_i (s ||G x^(i)||) <=
    (1/c3s) log E exp(c3s max_i (s ||u2|| + h.x^(i))) - c3s/2, both sides
    unscaled by sqrt(n).  The rhs standard error comes from the delta method
    through the log.
    """
    if not vset.unit_flag:
        raise VariantMismatchError("the chain bound assumes unit-norm set elements")
    if not (c3s > 0):
        raise ValidationError(f"c3s must be positive, got {c3s}")
    params = _score_params(vset, s, general=False, m=m)
    draws = generate_draws(plan, vset, params.m)
    scores = _max_scores(vset, params, plan, [1.0, 0.0], draws=draws)
    lhs = aggregate(scores[0], np.isnan(scores[0]))
    raw = _exp_estimate(c3s * scores[1])
    rhs = Estimate(
        mean=float(np.log(raw.mean) / c3s - c3s / 2.0),
        std_error=float(raw.std_error / (c3s * raw.mean)),
        n=raw.n,
        skipped=raw.skipped,
    )
    meta = _meta(vset, plan, s=s, c3s=c3s)
    return _report("chain", lhs, rhs, BoundDirection.LHS_LEQ_RHS, meta)


def adjusted_value(psi_star: float, beta: float, c3: float, n: int) -> float:
    """Map a lifted value onto the log-partition scale.

    (log(psi_star) / (beta c3) - beta c3 / 2) / sqrt(n); strictly increasing
    in psi_star, and the exact inverse of the lifting of an additive shift.
    """
    if not (psi_star > 0):
        raise ValidationError(f"adjusted value needs psi_star > 0, got {psi_star}")
    bc = beta * c3
    if bc == 0.0:
        raise ValidationError("adjusted value needs beta * c3 != 0")
    return float((np.log(psi_star) / bc - bc / 2.0) / np.sqrt(n))


def _meta(vset: VectorSet, plan: SeedPlan, **extra) -> dict:
    meta = {
        "seed": plan.master_seed,
        "samples": plan.replications,
        "generator": GENERATOR_NAME,
        "n": vset.n,
        "l": vset.l,
        "unit_set": vset.unit_flag,
    }
    meta.update(extra)
    return meta
