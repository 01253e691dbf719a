"""Backend selection for the relaxation kernels.

The compiled extension and _pykernels implement the same functions with
bit-identical arithmetic; whichever is available is used.  Setting
HODGEGEN_PURE_PYTHON=1 before import forces the fallback (used by the
benchmark and the backend-equality tests).  BACKEND reports the choice.
"""

from __future__ import annotations

import os

from . import _pykernels

_impl = _pykernels
if not os.environ.get("HODGEGEN_PURE_PYTHON"):
    try:
        from . import _cykernels as _impl  # type: ignore[no-redef]
    except ImportError:
        pass

BACKEND = "python" if _impl is _pykernels else "compiled"

matvec = _impl.matvec
sweep = _impl.sweep
run = _impl.run
