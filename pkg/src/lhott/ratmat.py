"""Exact rational matrices.

Everything downstream reduces to linear algebra over the rationals, so this
module is the numeric kernel of the package: immutable dense matrices of
`fractions.Fraction` plus the elimination routines that everything else
leans on.

Two conventions are load-bearing for determinism and must not drift:

* `rref_sparse` produces the (unique) reduced row echelon form of the row
  space, so every basis derived from it is canonical regardless of the
  order in which rows were fed in.
* quotient bases (``coker``) use the non-pivot standard coordinates of the
  column space's echelon form, and kernel bases (``nullspace``) use the
  free-column parameterization.  Both come with explicit sections / left
  inverses so downstream code never has to solve for them again.

Matrix products skip zero entries; the big presentations that show up in
practice (fiber incidence systems) are extremely sparse and this is what
keeps them cheap without a separate sparse type.
"""

from fractions import Fraction

F0 = Fraction(0)
F1 = Fraction(1)


def _frac(x):
    return x if type(x) is Fraction else Fraction(x)


class Mat:
    """Immutable matrix of Fractions; rows is a tuple of row tuples."""

    __slots__ = ("rows", "nrows", "ncols", "_hash")

    def __init__(self, rows, ncols=None):
        rows = tuple(tuple(_frac(a) for a in row) for row in rows)
        self.rows = rows
        self.nrows = len(rows)
        if rows:
            self.ncols = len(rows[0])
            if any(len(r) != self.ncols for r in rows):
                raise ValueError("ragged rows")
            if ncols is not None and ncols != self.ncols:
                raise ValueError("ncols disagrees with rows")
        else:
            if ncols is None:
                raise ValueError("empty matrix needs explicit ncols")
            self.ncols = ncols
        self._hash = None

    @staticmethod
    def identity(n):
        return Mat(tuple(tuple(F1 if i == j else F0 for j in range(n))
                         for i in range(n)), ncols=n)

    @staticmethod
    def zero(nrows, ncols):
        row = (F0,) * ncols
        return Mat((row,) * nrows, ncols=ncols)

    @staticmethod
    def from_entries(nrows, ncols, entries):
        """entries: dict (i, j) -> value."""
        rows = [[F0] * ncols for _ in range(nrows)]
        for (i, j), v in entries.items():
            rows[i][j] = _frac(v)
        return Mat(rows, ncols=ncols)

    @staticmethod
    def column(values):
        return Mat(tuple((_frac(v),) for v in values), ncols=1)

    @staticmethod
    def row_vector(values):
        return Mat((tuple(_frac(v) for v in values),), ncols=len(values))

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return (self.nrows == other.nrows and self.ncols == other.ncols
                and self.rows == other.rows)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nrows, self.ncols, self.rows))
        return self._hash

    def __repr__(self):
        return "Mat(%d x %d)" % (self.nrows, self.ncols)

    def __add__(self, other):
        self._same_shape(other)
        return Mat(tuple(tuple(a + b for a, b in zip(ra, rb))
                         for ra, rb in zip(self.rows, other.rows)),
                   ncols=self.ncols)

    def __sub__(self, other):
        self._same_shape(other)
        return Mat(tuple(tuple(a - b for a, b in zip(ra, rb))
                         for ra, rb in zip(self.rows, other.rows)),
                   ncols=self.ncols)

    def __neg__(self):
        return Mat(tuple(tuple(-a for a in row) for row in self.rows),
                   ncols=self.ncols)

    def scale(self, c):
        c = _frac(c)
        return Mat(tuple(tuple(c * a for a in row) for row in self.rows),
                   ncols=self.ncols)

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch %s @ %s" % (self.shape, other.shape))
        orows = other.rows
        zero_row = [F0] * other.ncols
        out = []
        for row in self.rows:
            acc = zero_row[:]
            for k, a in enumerate(row):
                if a:
                    brow = orows[k]
                    for j, b in enumerate(brow):
                        if b:
                            acc[j] += a * b
            out.append(tuple(acc))
        return Mat(tuple(out), ncols=other.ncols)

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch %s vs %s" % (self.shape, other.shape))

    @property
    def T(self):
        return Mat(tuple(zip(*self.rows)) if self.rows else (),
                   ncols=self.nrows)

    def is_zero(self):
        return all(not a for row in self.rows for a in row)

    def is_identity(self):
        if self.nrows != self.ncols:
            return False
        return all(self.rows[i][j] == (F1 if i == j else F0)
                   for i in range(self.nrows) for j in range(self.ncols))

    def kron(self, other):
        """Kronecker product; blocks follow the row-major convention."""
        out = []
        for arow in self.rows:
            for brow in other.rows:
                out.append(tuple(a * b for a in arow for b in brow))
        return Mat(tuple(out), ncols=self.ncols * other.ncols)

    def col_slice(self, j0, j1):
        return Mat(tuple(row[j0:j1] for row in self.rows), ncols=j1 - j0)

    def row_slice(self, i0, i1):
        return Mat(self.rows[i0:i1], ncols=self.ncols)

    def rank(self):
        ech = rref_sparse(_dense_rows_to_sparse(self.rows), self.ncols)
        return len(ech)

    def inverse(self):
        if self.nrows != self.ncols:
            raise SingularMatrix("not square")
        n = self.nrows
        aug = []
        for i, row in enumerate(self.rows):
            d = {j: a for j, a in enumerate(row) if a}
            d[n + i] = F1
            aug.append(d)
        ech = rref_sparse(aug, 2 * n)
        if sorted(ech) != list(range(n)):
            raise SingularMatrix("matrix is singular")
        rows = []
        for p in range(n):
            erow = ech[p]
            rows.append(tuple(erow.get(n + j, F0) for j in range(n)))
        return Mat(tuple(rows), ncols=n)

    def is_invertible(self):
        return self.nrows == self.ncols and self.rank() == self.nrows

    def to_lists(self):
        return [list(row) for row in self.rows]


class SingularMatrix(ValueError):
    pass


def hstack(mats, nrows=None):
    mats = list(mats)
    if not mats:
        return Mat((), ncols=0) if nrows is None else Mat.zero(nrows, 0)
    nrows = mats[0].nrows
    if any(m.nrows != nrows for m in mats):
        raise ValueError("hstack: row counts differ")
    return Mat(tuple(tuple(a for m in mats for a in m.rows[i])
                     for i in range(nrows)),
               ncols=sum(m.ncols for m in mats))


def vstack(mats, ncols=None):
    mats = list(mats)
    if not mats:
        if ncols is None:
            raise ValueError("vstack of nothing needs ncols")
        return Mat((), ncols=ncols)
    ncols = mats[0].ncols
    if any(m.ncols != ncols for m in mats):
        raise ValueError("vstack: column counts differ")
    return Mat(tuple(row for m in mats for row in m.rows), ncols=ncols)


def block_diag(mats):
    mats = list(mats)
    nr = sum(m.nrows for m in mats)
    nc = sum(m.ncols for m in mats)
    rows = [[F0] * nc for _ in range(nr)]
    i0 = j0 = 0
    for m in mats:
        for i, row in enumerate(m.rows):
            out = rows[i0 + i]
            for j, a in enumerate(row):
                if a:
                    out[j0 + j] = a
        i0 += m.nrows
        j0 += m.ncols
    return Mat(rows, ncols=nc)


def _dense_rows_to_sparse(rows):
    return [{j: a for j, a in enumerate(row) if a} for row in rows]


def rref_sparse(rows, ncols):
    """Reduced row echelon form of the span of `rows`.

    rows: iterable of dict {col: Fraction}, consumed.
    Returns {pivot_col: row_dict} with each row normalized (pivot entry 1)
    and fully reduced against all other pivots.  RREF of a row space is
    unique, so the result is canonical whatever the input order.
    """
    echelon = {}
    for row in rows:
        row = dict(row)
        while row:
            lead = min(row)
            known = echelon.get(lead)
            if known is None:
                coef = row.pop(lead)
                if coef != F1:
                    row = {c: v / coef for c, v in row.items()}
                # clear the tail at existing pivot columns (only pivots to the
                # right of `lead` can occur, and their rows don't touch `lead`)
                for p in list(echelon):
                    k = row.get(p)
                    if k:
                        for c, v in echelon[p].items():
                            nv = row.get(c, F0) - k * v
                            if nv:
                                row[c] = nv
                            else:
                                row.pop(c, None)
                row[lead] = F1
                for erow in echelon.values():
                    k = erow.get(lead)
                    if k:
                        for c, v in row.items():
                            nv = erow.get(c, F0) - k * v
                            if nv:
                                erow[c] = nv
                            else:
                                erow.pop(c, None)
                echelon[lead] = row
                break
            coef = row[lead]
            for c, v in known.items():
                nv = row.get(c, F0) - coef * v
                if nv:
                    row[c] = nv
                else:
                    row.pop(c, None)
    return echelon


def nullspace(rows, ncols):
    """Kernel of the linear map given by sparse `rows` acting on ℚ^ncols.

    Returns (basis, free_cols): basis is a Mat whose columns are the kernel
    basis in free-column form (entry 1 at the free column, pivot entries
    filled in from the echelon rows), free_cols the picked coordinates.
    Reading off the free coordinates is a left inverse of the basis.
    """
    ech = rref_sparse(rows, ncols)
    pivots = sorted(ech)
    free = [j for j in range(ncols) if j not in ech]
    entries = {}
    for r, j in enumerate(free):
        entries[(j, r)] = F1
        for p in pivots:
            v = ech[p].get(j)
            if v:
                entries[(p, r)] = -v
    return Mat.from_entries(ncols, len(free), entries), free


def picker(coords, ncols):
    """Matrix extracting the listed coordinates: rows e_j for j in coords."""
    return Mat.from_entries(len(coords), ncols,
                            {(r, j): F1 for r, j in enumerate(coords)})


def coker(cols, nrows):
    """Quotient of ℚ^nrows by the span of the sparse column vectors `cols`.

    Returns (proj, sect): proj maps ℚ^nrows onto the quotient presented on
    the non-pivot coordinates of the span's echelon basis, sect is the
    standard-basis section with proj @ sect = identity.
    """
    ech = rref_sparse(cols, nrows)
    pivots = sorted(ech)
    free = [j for j in range(nrows) if j not in ech]
    entries = {}
    for r, j in enumerate(free):
        entries[(r, j)] = F1
        for p in pivots:
            v = ech[p].get(j)
            if v:
                entries[(r, p)] = -v
    proj = Mat.from_entries(len(free), nrows, entries)
    sect = Mat.from_entries(nrows, len(free),
                            {(j, r): F1 for r, j in enumerate(free)})
    return proj, sect


def solve(a, b):
    """Solve a @ x = b exactly; returns x or None when inconsistent.

    When the system is underdetermined the free variables are set to zero,
    which keeps the answer canonical; call a.rank() == a.ncols if uniqueness
    matters.
    """
    n = a.ncols
    aug = []
    for i in range(a.nrows):
        row = {j: v for j, v in enumerate(a.rows[i]) if v}
        for j in range(b.ncols):
            v = b.rows[i][j]
            if v:
                row[n + j] = v
        aug.append(row)
    ech = rref_sparse(aug, n + b.ncols)
    if any(p >= n for p in ech):
        return None
    entries = {}
    for p, erow in ech.items():
        for c, v in erow.items():
            if c >= n and v:
                entries[(p, c - n)] = v
    return Mat.from_entries(n, b.ncols, entries)
