"""Exact linear algebra over the Gaussian rationals.

Scalars are numbers ``a + b*i`` with arbitrary-precision rational parts, so
every rank, kernel and intersection below is exact; no floating point is
involved anywhere.  Matrices are dense and stored column-major because all
the canonical forms here are column based: a subspace is represented by its
reduced column echelon basis (leading entry of each column is 1, pivot rows
strictly increasing, pivot rows cleared in all other columns), which is
unique per subspace and therefore usable for equality tests.
"""

import re as _re_module

try:
    from gmpy2 import mpq as _rat
except ImportError:  # pragma: no cover - gmpy2 is optional, Fraction works too
    from fractions import Fraction as _rat

_R0 = _rat(0)
_R1 = _rat(1)


class LinAlgError(ValueError):
    """Raised for dimension mismatches, singular solves and bad scalars."""


_RAT_TOKEN = _re_module.compile(r"^[+-]?\d+(?:/\d+)?$")


def _parse_rational(token):
    token = "".join(token.split())
    if token in ("", "+"):
        return _R1
    if token == "-":
        return -_R1
    if not _RAT_TOKEN.match(token):
        raise LinAlgError(f"invalid rational literal {token!r}")
    if "/" in token:
        num, den = token.split("/")
        if int(den) == 0:
            raise LinAlgError(f"zero denominator in {token!r}")
        return _rat(int(num), int(den))
    return _rat(int(token))


class ExactScalar:
    """A Gaussian rational ``re + im*i``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is type(_R0) else _rat(re)
        self.im = im if type(im) is type(_R0) else _rat(im)

    @classmethod
    def _raw(cls, re, im):
        # Internal fast path: both arguments must already be rationals.
        s = object.__new__(cls)
        s.re = re
        s.im = im
        return s

    @classmethod
    def parse(cls, text):
        """Parse ``"p/q"``, ``"p/q+r/s i"``, ``"r/s i"``, ``"i"`` and friends."""
        s = text.strip()
        if not s:
            raise LinAlgError("empty scalar literal")
        if s.endswith("i"):
            body = s[:-1].rstrip()
            split_at = None
            for idx in range(len(body) - 1, 0, -1):
                if body[idx] in "+-" and body[idx - 1] not in "+-/":
                    split_at = idx
                    break
            if split_at is None:
                return cls._raw(_R0, _parse_rational(body))
            re_part = _parse_rational(body[:split_at])
            im_part = _parse_rational(body[split_at:])
            return cls._raw(re_part, im_part)
        return cls._raw(_parse_rational(s), _R0)

    def is_zero(self):
        return not (self.re or self.im)

    def __bool__(self):
        return bool(self.re or self.im)

    def __add__(self, other):
        return ExactScalar._raw(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        return ExactScalar._raw(self.re - other.re, self.im - other.im)

    def __neg__(self):
        return ExactScalar._raw(-self.re, -self.im)

    def __mul__(self, other):
        a, b, c, d = self.re, self.im, other.re, other.im
        return ExactScalar._raw(a * c - b * d, a * d + b * c)

    def inverse(self):
        n = self.re * self.re + self.im * self.im
        if not n:
            raise LinAlgError("division by zero scalar")
        return ExactScalar._raw(self.re / n, -self.im / n)

    def __truediv__(self, other):
        return self * other.inverse()

    def conjugate(self):
        return ExactScalar._raw(self.re, -self.im)

    def __eq__(self, other):
        if not isinstance(other, ExactScalar):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im} i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)} i"

    def __repr__(self):
        return f"ExactScalar({self})"


SC_ZERO = ExactScalar._raw(_R0, _R0)
SC_ONE = ExactScalar._raw(_R1, _R0)
SC_I = ExactScalar._raw(_R0, _R1)
SC_MINUS_ONE = ExactScalar._raw(-_R1, _R0)
SC_MINUS_I = ExactScalar._raw(_R0, -_R1)


def scalar(re=0, im=0):
    if isinstance(re, ExactScalar):
        if im:
            raise LinAlgError("cannot combine a scalar with an extra "
                              "imaginary part")
        return re
    return ExactScalar(re, im)


def _sub_scaled(a, f, b):
    """Elementwise ``a - f*b`` for columns, skipping zero entries of b."""
    fre, fim = f.re, f.im
    out = []
    raw = ExactScalar._raw
    for x, y in zip(a, b):
        yre, yim = y.re, y.im
        if yre or yim:
            out.append(raw(x.re - (fre * yre - fim * yim),
                           x.im - (fre * yim + fim * yre)))
        else:
            out.append(x)
    return out


def _scale(col, f):
    fre, fim = f.re, f.im
    raw = ExactScalar._raw
    out = []
    for y in col:
        yre, yim = y.re, y.im
        if yre or yim:
            out.append(raw(fre * yre - fim * yim, fre * yim + fim * yre))
        else:
            out.append(y)
    return out


class Matrix:
    """Dense exact matrix, stored as a list of columns."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows, cols, columns):
        self.rows = rows
        self.cols = cols
        self._data = columns
        if len(columns) != cols:
            raise LinAlgError("column count mismatch")
        for c in columns:
            if len(c) != rows:
                raise LinAlgError("column length mismatch")

    @classmethod
    def from_rows(cls, rowdata, rows=None, cols=None):
        if rows is None:
            rows = len(rowdata)
        if cols is None:
            cols = len(rowdata[0]) if rowdata else 0
        columns = [[rowdata[i][j] for i in range(rows)] for j in range(cols)]
        return cls(rows, cols, columns)

    @classmethod
    def from_columns(cls, rows, coldata):
        return cls(rows, len(coldata), [list(c) for c in coldata])

    @classmethod
    def zero(cls, rows, cols):
        return cls(rows, cols, [[SC_ZERO] * rows for _ in range(cols)])

    @classmethod
    def identity(cls, n):
        cols = []
        for j in range(n):
            c = [SC_ZERO] * n
            c[j] = SC_ONE
            cols.append(c)
        return cls(n, n, cols)

    def entry(self, i, j):
        return self._data[j][i]

    def column(self, j):
        return list(self._data[j])

    def columns(self):
        return [list(c) for c in self._data]

    def to_rows(self):
        return [[self._data[j][i] for j in range(self.cols)]
                for i in range(self.rows)]

    def column_slice(self, indices):
        return Matrix(self.rows, len(indices),
                      [list(self._data[j]) for j in indices])

    def hstack(self, other):
        if other.rows != self.rows:
            raise LinAlgError("hstack row mismatch")
        return Matrix(self.rows, self.cols + other.cols,
                      [list(c) for c in self._data] +
                      [list(c) for c in other._data])

    def transpose(self):
        return Matrix(self.cols, self.rows,
                      [[self._data[j][i] for j in range(self.cols)]
                       for i in range(self.rows)])

    def conjugate_entries(self):
        return Matrix(self.rows, self.cols,
                      [[x.conjugate() for x in c] for c in self._data])

    def negate(self):
        return Matrix(self.rows, self.cols,
                      [[-x for x in c] for c in self._data])

    def apply(self, vec):
        """Matrix times a column vector given as a list of scalars."""
        if len(vec) != self.cols:
            raise LinAlgError("vector length mismatch")
        out = [SC_ZERO] * self.rows
        for j, f in enumerate(vec):
            if f.re or f.im:
                out = _sub_scaled(out, -f, self._data[j])
        return out

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise LinAlgError("matmul dimension mismatch")
        return Matrix(self.rows, other.cols,
                      [self.apply(c) for c in other._data])

    def __add__(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise LinAlgError("matrix addition shape mismatch")
        return Matrix(self.rows, self.cols,
                      [[x + y for x, y in zip(a, b)]
                       for a, b in zip(self._data, other._data)])

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.rows == other.rows and self.cols == other.cols
                and self._data == other._data)

    def is_zero(self):
        return all(x.is_zero() for c in self._data for x in c)

    def __repr__(self):
        body = "; ".join(
            " ".join(str(self.entry(i, j)) for j in range(self.cols))
            for i in range(self.rows))
        return f"Matrix({self.rows}x{self.cols}: {body})"


def _echelon(columns, top_rows):
    """Reduced column echelon on stacked columns.

    Only the first ``top_rows`` entries take part in pivoting; trailing
    entries just come along for the ride (used for kernel and solve
    bookkeeping).  Returns ``(pivots, leftover)`` where ``pivots`` is a list
    of ``(pivot_row, column)`` sorted by pivot row and ``leftover`` contains
    the columns whose leading block was eliminated to zero.
    """
    work = [list(c) for c in columns]
    out = []
    for r in range(top_rows):
        pivot_idx = None
        for j, c in enumerate(work):
            if c[r].re or c[r].im:
                pivot_idx = j
                break
        if pivot_idx is None:
            continue
        col = work.pop(pivot_idx)
        piv = col[r]
        if not (piv.re == _R1 and not piv.im):
            col = _scale(col, piv.inverse())
        for k in range(len(work)):
            f = work[k][r]
            if f.re or f.im:
                work[k] = _sub_scaled(work[k], f, col)
        for k in range(len(out)):
            f = out[k][1][r]
            if f.re or f.im:
                out[k] = (out[k][0], _sub_scaled(out[k][1], f, col))
        out.append((r, col))
    return out, work


def rce(m):
    """Canonical reduced column echelon form (zero columns dropped)."""
    pivots, _ = _echelon(m._data, m.rows)
    return Matrix(m.rows, len(pivots), [c for _, c in pivots])


def rank(m):
    pivots, _ = _echelon(m._data, m.rows)
    return len(pivots)


class Subspace:
    """A subspace of the standard space of a given ambient dimension.

    The basis matrix is always in reduced column echelon form, so two equal
    subspaces compare equal as objects.
    """

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim, basis):
        self.ambient_dim = ambient_dim
        self.basis = basis

    @classmethod
    def from_columns(cls, ambient_dim, columns):
        m = columns if isinstance(columns, Matrix) else \
            Matrix.from_columns(ambient_dim, columns)
        if m.rows != ambient_dim:
            raise LinAlgError("ambient dimension mismatch")
        return cls(ambient_dim, rce(m))

    @classmethod
    def zero(cls, ambient_dim):
        return cls(ambient_dim, Matrix(ambient_dim, 0, []))

    @classmethod
    def full(cls, ambient_dim):
        return cls(ambient_dim, Matrix.identity(ambient_dim))

    @property
    def dim(self):
        return self.basis.cols

    def pivot_rows(self):
        rows = []
        for j in range(self.basis.cols):
            col = self.basis._data[j]
            for i in range(self.basis.rows):
                if col[i].re or col[i].im:
                    rows.append(i)
                    break
        return rows

    def reduce_vector(self, vec, _pivots=None):
        """Residual of ``vec`` after subtracting its component in this space."""
        v = list(vec)
        pivots = self.pivot_rows() if _pivots is None else _pivots
        for prow, col in zip(pivots, self.basis._data):
            f = v[prow]
            if f.re or f.im:
                v = _sub_scaled(v, f, col)
        return v

    def contains_vector(self, vec):
        return all(x.is_zero() for x in self.reduce_vector(vec))

    def contains(self, other):
        if other.ambient_dim != self.ambient_dim:
            raise LinAlgError("ambient dimension mismatch")
        pivots = self.pivot_rows()
        return all(
            all(x.is_zero() for x in self.reduce_vector(col, pivots))
            for col in other.basis._data)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ambient_dim == other.ambient_dim
                and self.basis == other.basis)

    def __repr__(self):
        return f"Subspace(dim {self.dim} of {self.ambient_dim})"


def kernel_basis(m):
    """Kernel of a matrix, as a canonical subspace of the source."""
    stacked = []
    for j in range(m.cols):
        unit = [SC_ZERO] * m.cols
        unit[j] = SC_ONE
        stacked.append(list(m._data[j]) + unit)
    _, leftover = _echelon(stacked, m.rows)
    cols = [c[m.rows:] for c in leftover]
    return Subspace.from_columns(m.cols, Matrix.from_columns(m.cols, cols))


def image_basis(m):
    """Column span of a matrix, as a canonical subspace of the target."""
    return Subspace(m.rows, rce(m))


def solve(a, b):
    """Any exact solution ``X`` of ``A @ X = B``; raises if none exists."""
    if a.rows != b.rows:
        raise LinAlgError("solve: row mismatch")
    stacked = []
    for j in range(a.cols):
        unit = [SC_ZERO] * a.cols
        unit[j] = SC_ONE
        stacked.append(list(a._data[j]) + unit)
    pivots, _ = _echelon(stacked, a.rows)
    xcols = []
    for j in range(b.cols):
        v = list(b._data[j]) + [SC_ZERO] * a.cols
        for prow, col in pivots:
            f = v[prow]
            if f.re or f.im:
                v = _sub_scaled(v, f, col)
        if any(x.re or x.im for x in v[:a.rows]):
            raise LinAlgError("solve: inconsistent system")
        xcols.append([-x for x in v[a.rows:]])
    return Matrix(a.cols, b.cols, xcols)


def inverse(a):
    if a.rows != a.cols:
        raise LinAlgError("inverse of a non-square matrix")
    return solve(a, Matrix.identity(a.rows))


def subspace_sum(u, v):
    if u.ambient_dim != v.ambient_dim:
        raise LinAlgError("subspace_sum: ambient dimension mismatch")
    return Subspace.from_columns(u.ambient_dim, u.basis.hstack(v.basis))


def subspace_intersect(u, v):
    """Zassenhaus-style intersection via the kernel of ``[U | -V]``."""
    if u.ambient_dim != v.ambient_dim:
        raise LinAlgError("subspace_intersect: ambient dimension mismatch")
    joint = u.basis.hstack(v.basis.negate())
    ker = kernel_basis(joint)
    cols = []
    for j in range(ker.basis.cols):
        coeffs = ker.basis._data[j][:u.basis.cols]
        cols.append(u.basis.apply(coeffs))
    return Subspace.from_columns(u.ambient_dim,
                                 Matrix.from_columns(u.ambient_dim, cols))


def quotient_dim(u, w):
    """Dimension of ``U/W``; requires ``W`` to be a subspace of ``U``."""
    if not u.contains(w):
        raise LinAlgError("quotient_dim: denominator not contained in numerator")
    return u.dim - w.dim


def complete_basis(inner, outer):
    """Columns extending a basis of ``inner`` to one of ``outer``.

    Both arguments are subspaces with ``inner`` contained in ``outer``.  The
    result is canonical: it consists of the echelon basis columns of
    ``outer`` whose pivot rows are not pivot rows of ``inner``.
    """
    if inner.ambient_dim != outer.ambient_dim:
        raise LinAlgError("complete_basis: ambient dimension mismatch")
    if not outer.contains(inner):
        raise LinAlgError("complete_basis: inner space not contained in outer")
    inner_pivots = set(inner.pivot_rows())
    keep = [j for j, prow in enumerate(outer.pivot_rows())
            if prow not in inner_pivots]
    return outer.basis.column_slice(keep)


def preimage(m, w):
    """The subspace ``{x : m @ x in W}`` of the source of ``m``."""
    if w.ambient_dim != m.rows:
        raise LinAlgError("preimage: ambient dimension mismatch")
    joint = m.hstack(w.basis.negate())
    ker = kernel_basis(joint)
    cols = [ker.basis._data[j][:m.cols] for j in range(ker.basis.cols)]
    return Subspace.from_columns(m.cols, Matrix.from_columns(m.cols, cols))
