"""Pick the compiled univariate kernel when it was built, else the Python one.

Setting ``PFCERT_PURE_PYTHON=1`` forces the fallback (used by the tests and
the benchmark to exercise both).
"""

import os

if os.environ.get("PFCERT_PURE_PYTHON", "") not in ("", "0"):
    from pfcert.exact import _upoly_py as kernel
    COMPILED = False
else:
    try:
        from pfcert.exact import _upoly as kernel
        COMPILED = True
    except ImportError:  # extension not built
        from pfcert.exact import _upoly_py as kernel
        COMPILED = False

BACKEND = "cython" if COMPILED else "python"

__all__ = ["kernel", "COMPILED", "BACKEND"]
