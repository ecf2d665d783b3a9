"""Monte Carlo estimators of the interpolating functionals and their t-derivatives.

Two independent derivative routes are exposed:

* ``dpsi_standard`` differentiates the per-draw functional directly (chain
  rule through the interpolated norms).  Its per-sample value carries
  1/sqrt(t) and 1/sqrt(1-t) factors, so it refuses the endpoint window.
* ``dpsi_computed`` is the pairwise closed form obtained by integrating the
  same derivative by parts; it is defined on all of [0, 1] and every per-draw
  value has a provable sign.

Agreement of the two routes on common random numbers is the package's main
cross-validation device; :func:`verify_ibp` checks the individual
integration-by-parts identities the computed route is assembled from.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import identities
from .errors import EndpointSingularityError
from .model import ModelParams, VectorSet
from .sampling import DrawBatch, Estimate, SeedPlan, aggregate, evaluate_grid, generate_draws

STANDARD_T_WINDOW = (0.01, 0.99)


class DerivativeRoute(enum.Enum):
    STANDARD = "standard"
    COMPUTED = "computed"


def check_standard_window(t: float) -> float:
    lo, hi = STANDARD_T_WINDOW
    if not (lo <= t <= hi):
        raise EndpointSingularityError(
            f"standard route needs t in [{lo}, {hi}], got {t}; "
            "use the computed route near the endpoints"
        )
    return float(t)


def _point(vset, params, t, plan, functional, draws=None) -> Estimate:
    grid = evaluate_grid(vset, params, plan, [t], (functional,), draws=draws)
    return grid.estimate(functional, 0)


def psi_direct(
    vset: VectorSet, params: ModelParams, t: float, plan: SeedPlan, draws: DrawBatch | None = None
) -> Estimate:
    """Direct estimate of the functional at one t.

    Per-draw value: logZ / (beta sqrt(n)) for the spherical/general variants,
    Z^c3 for the lifted one.
    """
    return _point(vset, params, t, plan, "psi", draws)


def dpsi_standard(
    vset: VectorSet, params: ModelParams, t: float, plan: SeedPlan, draws: DrawBatch | None = None
) -> Estimate:
    """Standard-route derivative estimate; t restricted to the open window."""
    check_standard_window(t)
    return _point(vset, params, t, plan, "dpsi_standard", draws)


def dpsi_computed(
    vset: VectorSet, params: ModelParams, t: float, plan: SeedPlan, draws: DrawBatch | None = None
) -> Estimate:
    """Pairwise-form derivative estimate; valid on all of [0, 1]."""
    return _point(vset, params, t, plan, "dpsi_computed", draws)


def derivative(vset, params, t, plan, route: DerivativeRoute, draws=None) -> Estimate:
    if DerivativeRoute(route) is DerivativeRoute.STANDARD:
        return dpsi_standard(vset, params, t, plan, draws)
    return dpsi_computed(vset, params, t, plan, draws)


def verify_ibp(
    vset: VectorSet,
    params: ModelParams,
    t: float,
    identity_id: str,
    i: int,
    j: int,
    plan: SeedPlan,
    draws: DrawBatch | None = None,
) -> tuple[Estimate, Estimate]:
    """Estimate both sides of one integration-by-parts identity.

    Returns (lhs, rhs) estimated on common random numbers; they agree within
    a few combined standard errors when the identity holds.
    """
    if draws is None:
        draws = generate_draws(plan, vset, params.m)
    state = identities.prepare_state(draws, vset, params, t)
    lhs, rhs = identities.evaluate_identity(state, draws, params.variant, identity_id, i, j)
    return aggregate(lhs, state.bad), aggregate(rhs, state.bad)


@dataclass(frozen=True)
class IbpResult:
    identity: str
    t: float
    i: int
    j: int
    lhs: Estimate
    rhs: Estimate

    @property
    def z(self) -> float:
        scale = np.hypot(self.lhs.std_error, self.rhs.std_error)
        diff = self.lhs.mean - self.rhs.mean
        if scale == 0.0:
            return 0.0 if diff == 0.0 else np.inf
        return diff / scale


def ibp_suite(
    vset: VectorSet,
    params: ModelParams,
    plan: SeedPlan,
    ts,
    i_indices=None,
    j_indices=None,
) -> list[IbpResult]:
    """Run every identity applicable to the variant over a (t, i, j) lattice.

    Draws and the per-(t) state are shared across identities, which keeps the
    full sweep at the cost of a single estimator run.
    """
    if i_indices is None:
        i_indices = sorted({0, vset.l - 1})
    if j_indices is None:
        j_indices = sorted({0, params.m - 1})
    draws = generate_draws(plan, vset, params.m)
    results = []
    for t in np.atleast_1d(ts):
        state = identities.prepare_state(draws, vset, params, float(t))
        for ident in identities.identity_ids(params.variant):
            for i in i_indices:
                for j in j_indices:
                    lhs, rhs = identities.evaluate_identity(
                        state, draws, params.variant, ident, i, j
                    )
                    results.append(
                        IbpResult(
                            identity=ident,
                            t=float(t),
                            i=i,
                            j=j,
                            lhs=aggregate(lhs, state.bad),
                            rhs=aggregate(rhs, state.bad),
                        )
                    )
    return results
