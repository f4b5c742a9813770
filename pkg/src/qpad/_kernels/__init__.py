"""Backend selection for the numeric kernels.

The compiled extension is preferred when built; the numpy fallback is
always available.  ``QPAD_BACKEND=python`` forces the fallback,
``QPAD_BACKEND=compiled`` insists on the extension (import error if it is
missing).  ``BACKEND`` records the active choice.
"""

import os

from . import pyback

_choice = os.environ.get("QPAD_BACKEND", "").strip().lower()
if _choice == "python":
    _impl = pyback
    BACKEND = "python"
elif _choice in ("", "compiled"):
    try:
        from . import _core as _impl

        BACKEND = "compiled"
    except ImportError:
        if _choice == "compiled":
            raise ImportError(
                "QPAD_BACKEND=compiled but qpad._kernels._core is not built; "
                "reinstall with Cython and a C compiler available"
            ) from None
        _impl = pyback
        BACKEND = "python"
else:
    raise ValueError(f"QPAD_BACKEND must be 'python' or 'compiled', got {_choice!r}")

fwht = _impl.fwht
aghp_points = _impl.aghp_points
pauli_mix = _impl.pauli_mix
qudit_core_mix = _impl.qudit_core_mix
jacobi_eigvals = _impl.jacobi_eigvals


def available_backends():
    """Names of the importable backends, preferred first."""
    out = []
    try:
        from . import _core  # noqa: F401

        out.append("compiled")
    except ImportError:
        pass
    out.append("python")
    return out
