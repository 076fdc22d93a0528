"""Dense univariate integer polynomial kernels (pure-Python fallback).

Polynomials are lists of Python ints indexed by power, with no trailing
zeros; the zero polynomial is the empty list. Every function returns a new
list and never mutates its arguments.
"""

from math import gcd


def strip(a):
    n = len(a)
    while n and a[n - 1] == 0:
        n -= 1
    return a[:n]


def add_scaled(a, ca, b, cb):
    """Return ca*a + cb*b."""
    la, lb = len(a), len(b)
    if la < lb:
        out = [ca * x for x in a] + [0] * (lb - la)
        for i in range(lb):
            out[i] += cb * b[i]
    else:
        out = [ca * x for x in a]
        for i in range(lb):
            out[i] += cb * b[i]
    return strip(out)


def mul(a, b):
    if not a or not b:
        return []
    la, lb = len(a), len(b)
    if la < lb:
        a, b, la, lb = b, a, lb, la
    out = [0] * (la + lb - 1)
    for j in range(lb):
        bj = b[j]
        if bj:
            for i in range(la):
                out[i + j] += a[i] * bj
    return out


def scale(a, c):
    if not c:
        return []
    return [c * x for x in a]


def content(a):
    g = 0
    for x in a:
        g = gcd(g, x)
        if g == 1:
            break
    return g


def exact_div_int(a, c):
    return [x // c for x in a]


def primitive(a):
    """Primitive part with positive leading coefficient."""
    if not a:
        return []
    g = content(a)
    if a[-1] < 0:
        g = -g
    if g == 1:
        return list(a)
    return [x // g for x in a]


def pseudo_divmod(a, b):
    """lc(b)^(deg a - deg b + 1) * a = q*b + r over the integers."""
    db = len(b) - 1
    if db < 0:
        raise ZeroDivisionError("polynomial division by zero")
    da = len(a) - 1
    if da < db:
        return [], list(a), 1
    lb = b[db]
    r = list(a)
    q = [0] * (da - db + 1)
    steps = da - db + 1
    for k in range(da - db, -1, -1):
        c = r[k + db]
        q = [x * lb for x in q]
        q[k] = c
        r = [x * lb for x in r]
        if c:
            for i in range(db + 1):
                r[k + i] -= c * b[i]
    return q, strip(r[:db] if db else []), lb ** steps


def divides_exact(a, b):
    """Exact quotient a/b over Z[t], or None when b does not divide a in Z[t]."""
    db = len(b) - 1
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
                r[k + i] -= qk * b[i]
    for i in range(db):
        if r[i]:
            return None
    return q


def gcd_poly(a, b):
    """Primitive gcd over Z[t] (hence over Q[t]) with positive leading coefficient."""
    if not a:
        return primitive(b)
    if not b:
        return primitive(a)
    ca, cb = content(a), content(b)
    a, b = primitive(a), primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        if len(b) == 1:
            return [1]
        _, r, _ = pseudo_divmod(a, b)
        a, b = b, primitive(r)
    return primitive(a)


def evaluate(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def derivative(a):
    return [i * a[i] for i in range(1, len(a))]
