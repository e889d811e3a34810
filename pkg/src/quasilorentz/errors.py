class PrecisionRangeError(ValueError):
    """Point index outside the range where float64 positions stay accurate."""


class ResourceLimitError(RuntimeError):
    """Request would exceed a configured size limit (points, trajectories)."""


class InsufficientDataError(ValueError):
    """Too few usable curve points for a tail fit."""
