"""Backend selection for the hot LP kernel.

The environment variable ``KOLMOREP_BACKEND`` picks the implementation:

* ``numba`` - the @njit kernel (error if numba is unavailable)
* ``numpy`` - the pure-numpy fallback
* ``auto`` (default) - numba when importable, numpy otherwise
"""

import os

STATUS_FEASIBLE = 0
STATUS_INFEASIBLE = 1
STATUS_ITERATION_LIMIT = 2

_ENV_VAR = "KOLMOREP_BACKEND"


def _select():
    choice = os.environ.get(_ENV_VAR, "auto").strip().lower()
    if choice not in ("auto", "numba", "numpy"):
        raise RuntimeError(f"{_ENV_VAR} must be 'auto', 'numba', or 'numpy', got {choice!r}")
    if choice in ("auto", "numba"):
        try:
            from . import simplex_numba

            return "numba", simplex_numba.phase1_simplex
        except ImportError:
            if choice == "numba":
                raise
    from . import simplex_numpy

    return "numpy", simplex_numpy.phase1_simplex


BACKEND_NAME, phase1_simplex = _select()
