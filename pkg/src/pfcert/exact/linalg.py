"""Exact linear algebra over Q(t).

Two eliminators share one pivoting policy:

* columns are processed left to right, a column with no usable entry is a
  free column (its unknown is set to 0);
* among usable rows the pivot is the entry of smallest t-degree, ties going
  to the first row;
* elimination is fraction free over Q[t] (``row <- p*row - a*pivot_row``)
  and every updated row is divided by the gcd of its entries right away.

``solve_exact`` is the dense entry point. ``SparseEliminator`` factors one
sparse matrix once and replays the recorded row operations on any number of
right-hand sides, which is how the pole-order reduction uses it.
"""

from __future__ import annotations

from pfcert.exact.parampoly import ParamPoly, ParamRat, as_paramrat, parampoly_gcd

_ONE_POLY = ParamPoly([1])


class DimensionError(ValueError):
    pass


class ExactMatrix:
    """Rectangular matrix of ParamRat entries (immutable)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries, cols=None):
        rows = [tuple(as_paramrat(x) for x in r) for r in entries]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise DimensionError("ragged matrix")
        self.rows = len(rows)
        self.cols = cols
        self.entries = tuple(rows)

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, columns, nrows: int) -> "ExactMatrix":
        return cls([[col[i] for col in columns] for i in range(nrows)], len(columns))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def apply(self, x):
        if len(x) != self.cols:
            raise DimensionError(f"vector of length {len(x)} against {self.cols} columns")
        out = []
        for row in self.entries:
            acc = ParamRat()
            for a, b in zip(row, x):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return out

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols})"


def _lcm_den(values) -> ParamPoly:
    acc = _ONE_POLY
    for v in values:
        if v and not v.is_poly():
            d = v.den
            g = parampoly_gcd(acc, d)
            acc = (acc * d).exact_div(g)
    return acc


def _row_gcd(entries) -> ParamPoly:
    g = None
    for e in entries:
        if e:
            g = e if g is None else parampoly_gcd(g, e)
            if g.is_constant():
                return _ONE_POLY
    return g if g is not None else _ONE_POLY


def _normalize_row(row: dict):
    """Divide a sparse row by the gcd of its entries; returns the divisor."""
    g = _row_gcd(row.values())
    if g.is_constant():
        return _ONE_POLY
    for k in row:
        row[k] = row[k].exact_div(g)
    return g


def _pick(cands, col, rows):
    best = None
    best_key = None
    for r in cands:
        key = (rows[r][col].degree, -r)
        if best_key is None or key < best_key:
            best, best_key = r, key
    return best


def solve_exact(A: ExactMatrix, b):
    """Solve A x = b over Q(t).

    Returns one solution (free unknowns set to 0) as a list of ParamRat, or
    ``None`` when the system is inconsistent.
    """
    if len(b) != A.rows:
        raise DimensionError(f"right-hand side has {len(b)} entries, matrix has {A.rows} rows")
    b = [as_paramrat(x) for x in b]
    n = A.cols
    rows = []
    for i in range(A.rows):
        full = list(A.entries[i]) + [b[i]]
        L = _lcm_den(full)
        row = {}
        for j, v in enumerate(full):
            if v:
                w = v * ParamRat.from_poly(L)
                row[j] = w.num
        _normalize_row(row)
        rows.append(row)

    pivots = []
    order = list(range(len(rows)))
    rank = 0
    for col in range(n):
        cands = [order[k] for k in range(rank, len(order)) if col in rows[order[k]]]
        if not cands:
            continue
        p = _pick(cands, col, rows)
        k = order.index(p)
        order[rank], order[k] = order[k], order[rank]
        prow = rows[p]
        piv = prow[col]
        for s in cands:
            if s == p:
                continue
            srow = rows[s]
            a = srow[col]
            new = {}
            for j in set(srow) | set(prow):
                v = srow.get(j)
                w = prow.get(j)
                x = (v * piv if v is not None else ParamPoly()) - (w * a if w is not None else ParamPoly())
                if x:
                    new[j] = x
            _normalize_row(new)
            rows[s] = new
        pivots.append((p, col))
        rank += 1

    for k in range(rank, len(order)):
        if n in rows[order[k]]:
            return None

    x = [ParamRat() for _ in range(n)]
    for p, col in reversed(pivots):
        row = rows[p]
        acc = ParamRat.from_poly(row[n]) if n in row else ParamRat()
        for j, v in row.items():
            if j != col and j != n and x[j]:
                acc = acc - ParamRat.from_poly(v) * x[j]
        x[col] = acc / ParamRat.from_poly(row[col])
    return x


def rank_exact(A: ExactMatrix) -> int:
    """Rank over Q(t) of the matrix (same elimination as ``solve_exact``)."""
    cols = {}
    for i, row in enumerate(A.entries):
        for j, v in enumerate(row):
            if v:
                cols.setdefault(j, {})[i] = v
    elim = SparseEliminator(A.rows, [cols.get(j, {}) for j in range(A.cols)])
    return elim.rank


class SparseEliminator:
    """Factor a sparse matrix given by columns, reusable for many right sides.

    ``columns[c]`` maps row index to a nonzero ParamRat. After construction
    ``pivot_rows`` and ``free_rows`` partition the rows: ``free_rows`` are the
    rows that never received a pivot, i.e. a complement of the column space
    spanned by unit vectors.
    """

    def __init__(self, nrows: int, columns):
        self.nrows = nrows
        self.ncols = len(columns)
        # clear each column to Q[t]; the unknown of column c is scaled by col_scale[c]
        self.col_scale = []
        rows = [dict() for _ in range(nrows)]
        col_rows = []
        for c, col in enumerate(columns):
            L = _lcm_den(col.values())
            Lr = ParamRat.from_poly(L)
            self.col_scale.append(Lr)
            members = set()
            for r, v in col.items():
                v = as_paramrat(v)
                if v:
                    rows[r][c] = (v * Lr).num
                    members.add(r)
            col_rows.append(members)
        self.ops = []
        scale = [ParamRat(1) for _ in range(nrows)]
        used = [False] * nrows
        pivots = []
        for col in range(self.ncols):
            cands = sorted(r for r in col_rows[col] if not used[r])
            if not cands:
                continue
            p = _pick(cands, col, rows)
            prow = rows[p]
            piv = prow[col]
            for s in cands:
                if s == p:
                    continue
                srow = rows[s]
                a = srow[col]
                new = {}
                for j, v in srow.items():
                    new[j] = v * piv
                for j, w in prow.items():
                    v = new.get(j)
                    x = -(w * a) if v is None else v - w * a
                    new[j] = x
                new = {j: v for j, v in new.items() if v}
                g = _normalize_row(new)
                for j in srow:
                    if j not in new:
                        col_rows[j].discard(s)
                for j in new:
                    col_rows[j].add(s)
                rows[s] = new
                self.ops.append((s, p, piv, a, g))
                sc = scale[s] * ParamRat.from_poly(piv)
                scale[s] = sc if g.is_constant() else sc / ParamRat.from_poly(g)
            used[p] = True
            pivots.append((p, col))
        self.rows = rows
        self.pivots = pivots
        self.rank = len(pivots)
        self.pivot_rows = [p for p, _ in pivots]
        self.free_rows = [r for r in range(nrows) if not used[r]]
        self.free_scale = {r: scale[r] for r in self.free_rows}

    def transform(self, rhs):
        """Apply the recorded row operations to a right-hand side."""
        v = [as_paramrat(x) for x in rhs]
        for s, p, piv, a, g in self.ops:
            vp = v[p]
            vs = v[s]
            if not vs and not vp:
                continue
            new = vs * ParamRat.from_poly(piv) if vs else ParamRat()
            if vp:
                new = new - vp * ParamRat.from_poly(a)
            if not g.is_constant():
                new = new / ParamRat.from_poly(g)
            v[s] = new
        return v

    def solve(self, rhs):
        """Split rhs = M x + (complement part).

        Returns ``(x, residual)`` where ``x`` lists the unknowns (free columns
        0) and ``residual`` maps each free row to its coefficient, so that
        ``rhs = sum_c x[c]*column_c + sum_r residual[r]*e_r`` exactly.
        """
        if len(rhs) != self.nrows:
            raise DimensionError("right-hand side length mismatch")
        v = self.transform(rhs)
        residual = {}
        for r in self.free_rows:
            if v[r]:
                residual[r] = v[r] / self.free_scale[r]
        x = [ParamRat() for _ in range(self.ncols)]
        for p, col in reversed(self.pivots):
            row = self.rows[p]
            acc = v[p]
            for j, e in row.items():
                if j != col and x[j]:
                    acc = acc - ParamRat.from_poly(e) * x[j]
            x[col] = acc / ParamRat.from_poly(row[col])
        for c in range(self.ncols):
            if x[c] and self.col_scale[c] != 1:
                x[c] = x[c] * self.col_scale[c]
        return x, residual
