"""Backend selection for the integration kernels.

The compiled extension is preferred when importable; the pure-Python
implementation is the fallback.  Set CIRCKEP_BACKEND=python (or =compiled)
to force a choice.
"""

import os

from . import kinds  # noqa: F401  (re-exported for convenience)

_requested = os.environ.get("CIRCKEP_BACKEND", "").strip().lower()
if _requested not in ("", "compiled", "python"):
    raise RuntimeError(
        f"CIRCKEP_BACKEND must be 'compiled' or 'python', got {_requested!r}"
    )

_impl = None
if _requested != "python":
    try:
        from . import _speedups as _impl
    except ImportError:
        _impl = None
        if _requested == "compiled":
            raise ImportError(
                "CIRCKEP_BACKEND=compiled but the extension is not built; "
                "reinstall with a C compiler or unset the variable"
            )
if _impl is None:
    from . import pykernel as _impl

BACKEND_NAME = "compiled" if _impl.__name__.endswith("_speedups") else "python"

rhs_eval = _impl.rhs_eval
integrate_kernel = _impl.integrate_kernel
