"""Hot per-draw evaluation kernels with selectable backends.

Two implementations of the same batched kernel exist:

* ``reference`` -- vectorized NumPy; always available, authoritative.
* ``accelerated`` -- numba ``@njit(parallel=True)`` loops; the default when
  numba imports, and the one that scales across worker threads.

The environment variable ``GAUSSCOMP_BACKEND`` (``numpy`` or ``numba``)
selects the backend at import time; :func:`set_backend` overrides it at run
time (used by tests and the benchmark).  Both backends are IEEE-strict (no
fastmath) and agree to floating-point roundoff; each is individually
deterministic for a fixed input regardless of thread count, because every
replication writes only its own output slot.
"""

from __future__ import annotations

import os
import warnings

import numpy as np

from ..errors import ValidationError
from ..model import ModelParams, VectorSet

BACKEND_ENV = "GAUSSCOMP_BACKEND"

# Output column order shared by both backends.
COLUMNS = ("psi", "dpsi_standard", "dpsi_computed", "max_score")

_active: str | None = None


def _resolve_default() -> str:
    choice = os.environ.get(BACKEND_ENV, "").strip().lower()
    if choice in ("numpy", "numba"):
        return choice
    if choice:
        raise ValidationError(f"{BACKEND_ENV} must be 'numpy' or 'numba', got {choice!r}")
    try:
        from . import accelerated  # noqa: F401
        return "numba"
    except ImportError:
        warnings.warn("numba unavailable; falling back to the NumPy kernel backend")
        return "numpy"


def active_backend() -> str:
    global _active
    if _active is None:
        set_backend(_resolve_default())
    return _active


def set_backend(name: str) -> None:
    global _active
    name = name.strip().lower()
    if name == "numba":
        from . import accelerated  # noqa: F401  (raises ImportError if missing)
    elif name != "numpy":
        raise ValidationError(f"unknown backend {name!r}; expected 'numpy' or 'numba'")
    _active = name


def set_worker_threads(workers: int) -> None:
    """Bound the accelerated backend's thread pool; no-op for NumPy."""
    if workers < 1:
        raise ValidationError(f"workers must be >= 1, got {workers}")
    if active_backend() == "numba":
        import numba

        numba.set_num_threads(min(workers, numba.config.NUMBA_NUM_THREADS))


def evaluate(draws, vset: VectorSet, params: ModelParams, t: float, want) -> tuple[dict, np.ndarray]:
    """Per-draw values of the requested functionals at one t.

    Returns ``(values, bad)`` where ``values[name]`` is a length-R array and
    ``bad`` flags replications with a zero interpolated norm (skipped, NaN).
    """
    if not (0.0 <= t <= 1.0):
        raise ValidationError(f"t must lie in [0, 1], got {t}")
    unknown = set(want) - set(COLUMNS)
    if unknown:
        raise ValidationError(f"unknown functionals {sorted(unknown)}")
    if "dpsi_standard" in want and not (0.0 < t < 1.0):
        raise ValidationError("the standard derivative kernel needs 0 < t < 1")
    flags = tuple(name in want for name in COLUMNS)
    if active_backend() == "numba":
        from .accelerated import eval_batch
    else:
        from .reference import eval_batch
    out, bad = eval_batch(
        draws.u1,
        draws.u2,
        draws.u3,
        draws.u4,
        float(t),
        params.betas,
        vset.norms,
        vset.kappa,
        float(params.beta),
        float(params.s),
        float(params.c3 or 0.0),
        params.variant.code,
        float(np.sqrt(vset.n)),
        flags,
    )
    values = {name: out[:, k] for k, name in enumerate(COLUMNS) if flags[k]}
    return values, bad
