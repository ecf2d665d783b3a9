"""Seeded replication streams, draw generation and deterministic aggregation.

Randomness layout
-----------------
Replication ``r`` owns the Philox4x64-10 stream with key ``master_seed`` and
256-bit counter ``r * 2**64``; streams never overlap and are statistically
independent by construction.  Standard normals are produced by inverse CDF:
the top 53 bits of each raw 64-bit word, offset by half an ulp so the uniform
is strictly inside (0, 1), mapped through ``scipy.special.ndtri``.

Within one replication the generation order is fixed: the m x n matrix G in
row-major order, then the m-vector u2, then the n-vector h, then the scalar
u4.  ``GENERATOR_NAME`` is echoed into every output artifact so a result file
documents how to regenerate itself.

Aggregation is a fixed-shape reduction over the values in replication-index
order, so estimates are bit-identical no matter how the per-replication work
was scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .errors import AggregationError, SkipBudgetError, ValidationError
from .model import ModelParams, ReplicationDraw, VectorSet

GENERATOR_NAME = "philox4x64-10/inverse-cdf"

# Fraction of skipped (zero-norm) replications above which a run aborts.
SKIP_BUDGET = 1e-4

_U64_SHIFT = np.uint64(11)
_U64_SCALE = 2.0**-53


@dataclass(frozen=True)
class SeedPlan:
    """Master seed plus replication count; the whole experiment's randomness."""

    master_seed: int
    replications: int

    def __post_init__(self):
        if not (0 <= int(self.master_seed) < 2**64):
            raise ValidationError(f"master_seed must be a 64-bit integer, got {self.master_seed}")
        if int(self.replications) < 2:
            raise ValidationError("need at least 2 replications to form a standard error")


def _normals_from_raw(raw: np.ndarray) -> np.ndarray:
    u = ((raw >> _U64_SHIFT).astype(np.float64) + 0.5) * _U64_SCALE
    return ndtri(u)


class ReplicationStream:
    """The random source owned by one replication index."""

    def __init__(self, plan: SeedPlan, index: int):
        if not (0 <= index < plan.replications):
            raise ValidationError(
                f"replication index {index} outside [0, {plan.replications})"
            )
        self.plan = plan
        self.index = int(index)
        counter = np.zeros(4, dtype=np.uint64)
        counter[1] = self.index
        self._bitgen = np.random.Philox(key=int(plan.master_seed), counter=counter)

    def raw(self, count: int) -> np.ndarray:
        return self._bitgen.random_raw(count)

    def normals(self, count: int) -> np.ndarray:
        return _normals_from_raw(self.raw(count))


def replication_stream(plan: SeedPlan, index: int) -> ReplicationStream:
    """Return the stream fully determined by (master_seed, index)."""
    return ReplicationStream(plan, index)


@dataclass(frozen=True)
class DrawBatch:
    """Projected draws for a contiguous range of replication indices."""

    u1: np.ndarray  # (R, l, m)
    u2: np.ndarray  # (R, m)
    u3: np.ndarray  # (R, l)
    u4: np.ndarray  # (R,)
    start: int = 0

    @property
    def n_draws(self) -> int:
        return self.u2.shape[0]

    def draw(self, index: int) -> ReplicationDraw:
        """Single-replication view (index relative to the batch start)."""
        return ReplicationDraw(
            u1=self.u1[index], u2=self.u2[index], u3=self.u3[index], u4=float(self.u4[index])
        )


def raw_normals(plan: SeedPlan, count: int, start: int = 0, stop: int | None = None) -> np.ndarray:
    """First ``count`` normals of each replication stream in [start, stop).

    One bit generator is reused with its counter re-seated per replication,
    which is bit-identical to constructing each stream afresh but an order of
    magnitude faster.
    """
    stop = plan.replications if stop is None else stop
    if not (0 <= start < stop <= plan.replications):
        raise ValidationError(f"bad replication range [{start}, {stop})")
    n = stop - start
    raw = np.empty((n, count), dtype=np.uint64)
    bitgen = np.random.Philox(key=int(plan.master_seed))
    state = bitgen.state
    counter = state["state"]["counter"]
    for k in range(n):
        counter[:] = 0
        counter[1] = start + k
        state["buffer_pos"] = 4  # buffer exhausted: regenerate at this counter
        bitgen.state = state
        raw[k] = bitgen.random_raw(count)
    return _normals_from_raw(raw)


def generate_draws(
    plan: SeedPlan, vset: VectorSet, m: int, start: int = 0, stop: int | None = None
) -> DrawBatch:
    """Sample and project the raw Gaussian randomness for a replication range.

    Raw G and h are never kept: only u1 = (G xhat^(i))_j and u3 = h.xhat^(i)
    enter any downstream formula, and the projected form is O(l*m) per draw.
    """
    n = vset.n
    count = m * n + m + n + 1
    z = raw_normals(plan, count, start, stop)
    mn = m * n
    G = z[:, :mn].reshape(-1, m, n)
    u2 = z[:, mn : mn + m]
    h = z[:, mn + m : mn + m + n]
    u4 = z[:, -1]
    directions = vset.vectors / vset.norms
    u1 = np.ascontiguousarray(np.matmul(G, directions).transpose(0, 2, 1))
    u3 = h @ directions
    return DrawBatch(u1=u1, u2=np.ascontiguousarray(u2), u3=u3, u4=u4, start=start)


@dataclass(frozen=True)
class Estimate:
    """Monte Carlo mean with its standard error."""

    mean: float
    std_error: float
    n: int
    skipped: int = 0

    def as_dict(self) -> dict:
        return {
            "mean": self.mean,
            "std_error": self.std_error,
            "n": self.n,
            "skipped": self.skipped,
        }


def aggregate(values: np.ndarray, skipped_mask: np.ndarray | None = None) -> Estimate:
    """Reduce per-replication values (in index order) to an Estimate.

    The reduction is a fixed pairwise tree over index order, so the result
    does not depend on how the values were computed or scheduled.  Non-finite
    values outside the skip mask are a hard error naming the replication.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 1:
        raise AggregationError(f"expected a 1-D value array, got shape {values.shape}")
    if skipped_mask is not None:
        skipped = int(np.count_nonzero(skipped_mask))
        values = values[~skipped_mask]
    else:
        skipped = 0
    bad = ~np.isfinite(values)
    if bad.any():
        raise AggregationError(f"non-finite value at replication index {int(np.argmax(bad))}")
    n = values.size
    if n < 2:
        raise AggregationError(f"need at least 2 usable replications, have {n}")
    mean = float(np.mean(values))
    std_error = float(np.std(values, ddof=1) / np.sqrt(n))
    return Estimate(mean=mean, std_error=std_error, n=n, skipped=skipped)


# Functional names understood by the grid evaluator.  "max_score" is the
# per-draw max_i logA[i] / beta, i.e. the beta -> infinity pointwise limit of
# beta-scaled log Z, unscaled by sqrt(n).
FUNCTIONALS = ("psi", "dpsi_standard", "dpsi_computed", "max_score")


@dataclass(frozen=True)
class GridValues:
    """Per-draw functional values over a t-grid, on common random numbers."""

    ts: np.ndarray
    values: dict  # name -> (K, R) array
    skipped: np.ndarray  # (K, R) bool

    def estimate(self, name: str, k: int) -> Estimate:
        return aggregate(self.values[name][k], self.skipped[k])

    def estimates(self, name: str) -> list:
        return [self.estimate(name, k) for k in range(len(self.ts))]


def evaluate_grid(
    vset: VectorSet,
    params: ModelParams,
    plan: SeedPlan,
    ts,
    want,
    draws: DrawBatch | None = None,
) -> GridValues:
    """Evaluate per-draw functionals at every t in ``ts`` on shared draws.

    Each replication's draw is generated once and reused across the whole
    grid (common random numbers), so curve differences and route comparisons
    are estimated with strongly reduced variance.  Pass ``draws`` to share a
    batch across several calls.
    """
    from . import kernels  # local import: kernels pulls in numba lazily

    params.check_set(vset)
    ts = np.atleast_1d(np.asarray(ts, dtype=np.float64))
    for name in want:
        if name not in FUNCTIONALS:
            raise ValidationError(f"unknown functional {name!r}; expected one of {FUNCTIONALS}")
    if draws is None:
        draws = generate_draws(plan, vset, params.m)
    values = {name: np.empty((ts.size, draws.n_draws)) for name in want}
    skipped = np.zeros((ts.size, draws.n_draws), dtype=bool)
    for k, t in enumerate(ts):
        out, bad = kernels.evaluate(draws, vset, params, float(t), want)
        for name in want:
            values[name][k] = out[name]
        skipped[k] = bad
        frac = bad.mean()
        if frac > SKIP_BUDGET:
            raise SkipBudgetError(
                f"{frac:.2%} of replications skipped at t={t}; budget is {SKIP_BUDGET:.2%}"
            )
    return GridValues(ts=ts, values=values, skipped=skipped)


def paired_run(
    vset: VectorSet,
    params: ModelParams,
    plan: SeedPlan,
    t_grid,
    functional: str,
    draws: DrawBatch | None = None,
) -> list:
    """Estimates of one functional over a sorted t-grid on common draws."""
    t_grid = np.atleast_1d(np.asarray(t_grid, dtype=np.float64))
    if np.any(np.diff(t_grid) < 0):
        raise ValidationError("t_grid must be sorted ascending")
    if np.any((t_grid < 0.0) | (t_grid > 1.0)):
        raise ValidationError("t_grid entries must lie in [0, 1]")
    if functional == "dpsi_standard":
        from .estimators import check_standard_window

        for t in t_grid:
            check_standard_window(float(t))
    grid = evaluate_grid(vset, params, plan, t_grid, (functional,), draws=draws)
    return grid.estimates(functional)
