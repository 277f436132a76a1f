"""Global tolerances.

``ZERO_TOL`` is the absolute floor used for scalar zero tests.  ``RANK_TOL``
is the relative singular-value cut shared by rank, regularity and defect
computations so that they never disagree with each other.
"""

import os

ZERO_TOL = 1e-12
RANK_TOL = 1e-9
BASIS_TOL = 1e-9

TOL_ENV_VAR = "QCAYLEY_TOL"


def default_tol() -> float:
    """Return ``RANK_TOL`` unless overridden through ``QCAYLEY_TOL``."""
    raw = os.environ.get(TOL_ENV_VAR)
    if raw is None or raw.strip() == "":
        return RANK_TOL
    value = float(raw)
    if not value > 0:
        raise ValueError(f"{TOL_ENV_VAR} must be positive, got {raw!r}")
    return value
