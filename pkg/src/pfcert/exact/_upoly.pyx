# cython: language_level=3, boundscheck=False, wraparound=False
"""Dense univariate integer polynomial kernels (compiled).

Same contract as ``_upoly_py``: lists of Python ints indexed by power, no
trailing zeros, arguments never mutated. Coefficients stay arbitrary
precision; the gain comes from typed loops and list access.
"""

from math import gcd


cpdef list strip(list a):
    cdef Py_ssize_t n = len(a)
    while n and a[n - 1] == 0:
        n -= 1
    return a[:n]


cpdef list add_scaled(list a, object ca, list b, object cb):
    cdef Py_ssize_t la = len(a), lb = len(b), i
    cdef list out
    if la < lb:
        out = [ca * x for x in a] + [0] * (lb - la)
    else:
        out = [ca * x for x in a]
    if cb == 1:
        for i in range(lb):
            out[i] = out[i] + b[i]
    else:
        for i in range(lb):
            out[i] = out[i] + cb * b[i]
    return strip(out)


cpdef list mul(list a, list b):
    cdef Py_ssize_t la = len(a), lb = len(b), i, j
    cdef list out
    cdef object bj
    if not la or not lb:
        return []
    if la < lb:
        a, b = b, a
        la, lb = lb, la
    out = [0] * (la + lb - 1)
    for j in range(lb):
        bj = b[j]
        if bj:
            for i in range(la):
                out[i + j] = out[i + j] + a[i] * bj
    return out


cpdef list scale(list a, object c):
    if not c:
        return []
    return [c * x for x in a]


cpdef object content(list a):
    cdef object g = 0
    for x in a:
        g = gcd(g, x)
        if g == 1:
            break
    return g


cpdef list exact_div_int(list a, object c):
    return [x // c for x in a]


cpdef list primitive(list a):
    if not a:
        return []
    cdef object g = content(a)
    if a[len(a) - 1] < 0:
        g = -g
    if g == 1:
        return list(a)
    return [x // g for x in a]


cpdef tuple pseudo_divmod(list a, list b):
    cdef Py_ssize_t db = len(b) - 1, da = len(a) - 1, k, i, steps
    cdef object lb, c
    cdef list r, q
    if db < 0:
        raise ZeroDivisionError("polynomial division by zero")
    if da < db:
        return [], list(a), 1
    lb = b[db]
    r = list(a)
    q = [0] * (da - db + 1)
    steps = da - db + 1
    for k in range(da - db, -1, -1):
        c = r[k + db]
        for i in range(da - db + 1):
            q[i] = q[i] * lb
        q[k] = c
        for i in range(da + 1):
            r[i] = r[i] * lb
        if c:
            for i in range(db + 1):
                r[k + i] = r[k + i] - c * b[i]
    return q, strip(r[:db] if db else []), lb ** steps


cpdef object divides_exact(list a, list b):
    cdef Py_ssize_t db = len(b) - 1, da, k, i
    cdef object lb, c, qk, rem
    cdef list r, q
    if db < 0:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return []
    da = len(a) - 1
    if da < db:
        return None
    lb = b[db]
    r = list(a)
    q = [0] * (da - db + 1)
    for k in range(da - db, -1, -1):
        c = r[k + db]
        if c:
            qk, rem = divmod(c, lb)
            if rem:
                return None
            q[k] = qk
            for i in range(db + 1):
                r[k + i] = r[k + i] - qk * b[i]
    for i in range(db):
        if r[i]:
            return None
    return q


cpdef list gcd_poly(list a, list b):
    cdef list r
    if not a:
        return primitive(b)
    if not b:
        return primitive(a)
    a, b = primitive(a), primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        if len(b) == 1:
            return [1]
        _, r, _ = pseudo_divmod(a, b)
        a, b = b, primitive(r)
    return primitive(a)


cpdef object evaluate(list a, object x):
    cdef object acc = 0
    cdef Py_ssize_t i
    for i in range(len(a) - 1, -1, -1):
        acc = acc * x + a[i]
    return acc


cpdef list derivative(list a):
    cdef Py_ssize_t i
    return [i * a[i] for i in range(1, len(a))]
