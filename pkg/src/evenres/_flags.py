"""Process-wide switches read from the environment."""
import os

_TRUE = {"1", "true", "yes", "on"}


def _env_flag(name):
    return os.environ.get(name, "").strip().lower() in _TRUE


#: Disable numba and run the pure-numpy series kernels instead.
DISABLE_NUMBA = _env_flag("EVENRES_DISABLE_NUMBA")

#: Evaluate principal-branch Bessel/Hankel values with mpmath (slow).
EXTENDED_PRECISION = _env_flag("EVENRES_EXTENDED_PRECISION")


def extended_precision():
    # re-read so tests and the CLI can toggle it after import
    return _env_flag("EVENRES_EXTENDED_PRECISION")
