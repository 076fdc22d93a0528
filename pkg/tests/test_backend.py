import os
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pfcert.exact import _upoly_py as py_kernel
from pfcert.exact._backend import BACKEND, COMPILED

compiled = pytest.importorskip("pfcert.exact._upoly") if COMPILED else None

coeffs = st.lists(st.integers(-50, 50), max_size=6).map(py_kernel.strip)
nonzero = coeffs.filter(bool)


def test_backend_flag():
    assert BACKEND in ("cython", "python")
    assert BACKEND == ("cython" if COMPILED else "python")


@pytest.mark.skipif(not COMPILED, reason="compiled kernel not built")
@given(coeffs, coeffs, st.integers(-5, 5))
def test_kernels_agree(a, b, c):
    for name in ("mul", "gcd_poly", "content", "primitive", "derivative"):
        fn_c, fn_p = getattr(compiled, name), getattr(py_kernel, name)
        args = (a,) if name in ("content", "primitive", "derivative") else (a, b)
        assert fn_c(*args) == fn_p(*args)
    assert compiled.add_scaled(a, c, b, 2) == py_kernel.add_scaled(a, c, b, 2)
    assert compiled.scale(a, c) == py_kernel.scale(a, c)
    assert compiled.evaluate(a, c) == py_kernel.evaluate(a, c)


@pytest.mark.skipif(not COMPILED, reason="compiled kernel not built")
@given(coeffs, nonzero)
def test_division_kernels_agree(a, b):
    assert compiled.pseudo_divmod(a, b) == py_kernel.pseudo_divmod(a, b)
    assert compiled.divides_exact(a, b) == py_kernel.divides_exact(a, b)
    prod = py_kernel.mul(a, b)
    assert compiled.divides_exact(prod, b) == (a if prod else [])


def test_pure_python_fallback_end_to_end():
    code = (
        "from pfcert.exact._backend import BACKEND; assert BACKEND == 'python';"
        "from pfcert.cli import load_family; from pfcert.forms import picard_fuchs;"
        "D, _ = picard_fuchs(load_family('legendre')); print(D)"
    )
    env = dict(os.environ, PFCERT_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
    assert out.stdout.strip() == "(4*t^2 - 4*t)*D^2 + (8*t - 4)*D + 1"
