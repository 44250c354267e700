"""Backend selection for the numerical hot spots.

The compiled extension is used when it was built; otherwise the numpy
fallback is imported. Set ``PROPBO_PURE_PYTHON=1`` to force the fallback.
"""
import logging
import os

logger = logging.getLogger(__name__)

BACKEND = "python"

if os.environ.get("PROPBO_PURE_PYTHON", "") not in ("", "0"):
    from ._kernels_py import class1_value_grad, lp_iterate, ls_iterate, rbf, sq_dists
else:
    try:
        from ._kernels import class1_value_grad, lp_iterate, ls_iterate, rbf, sq_dists

        BACKEND = "compiled"
    except ImportError:  # extension not built
        logger.debug("compiled kernels unavailable, using numpy fallback")
        from ._kernels_py import class1_value_grad, lp_iterate, ls_iterate, rbf, sq_dists

__all__ = ["BACKEND", "class1_value_grad", "lp_iterate", "ls_iterate", "rbf", "sq_dists"]
