"""Exception types shared across the package."""


class GausscompError(Exception):
    """Base class for package-specific errors."""


class ValidationError(GausscompError, ValueError):
    """Bad input: wrong domain, malformed file, inconsistent parameters."""


class DegenerateDirectionError(ValidationError):
    """A vector-set column has zero norm and defines no direction."""


class VariantMismatchError(ValidationError):
    """Model parameters are inconsistent with the vector set they are applied to."""


class EndpointSingularityError(ValidationError):
    """The standard derivative route was requested outside its admissible t-window.

    The per-sample formula carries 1/sqrt(t) and 1/sqrt(1-t) factors; use the
    computed route near the endpoints instead.
    """


class UnknownIdentityError(ValidationError):
    """No integration-by-parts identity is registered under the requested id."""


class AggregationError(GausscompError):
    """A non-finite per-replication value reached the aggregator."""


class SkipBudgetError(GausscompError):
    """Too many replications were skipped.

    Zero interpolated norms are probability-zero events under continuous
    sampling, so more than a trace amount of them indicates a structural bug
    rather than numerical bad luck.
    """


class ReplicationSkip(GausscompError):
    """Signal: discard the current replication (zero interpolated norm)."""
