"""Sparse associative arrays keyed by strings.

An :class:`AssociativeArray` maps ``(row key, column key)`` pairs to positive
numbers. Absent pairs are zero. Keys are kept sorted by code point (which for
UTF-8 text is the same as byte order), so iteration and serialized output are
deterministic.

Internally the values live in a :mod:`scipy.sparse` CSR matrix whose row and
column indices point into sorted numpy string arrays. Every public operation
returns a new array; instances are never mutated after construction.
"""
from __future__ import annotations

import io
from typing import IO, Iterable, Iterator, NamedTuple, Sequence

import numpy as np
import scipy.sparse as sp

__all__ = [
    "Triple",
    "AssociativeArray",
    "TripleFormatError",
    "dumps",
    "loads",
    "write_triples",
    "read_triples",
    "format_value",
]

# Key used for the collapsed dimension of a reduction, as D4M prints it.
SUM_KEY = "1"


class Triple(NamedTuple):
    row: str
    col: str
    val: float


class TripleFormatError(ValueError):
    """Raised when a triple file line cannot be parsed."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _keys(values: Iterable[str] = ()) -> np.ndarray:
    arr = np.asarray(list(values), dtype=str)
    if arr.size == 0:
        arr = np.empty(0, dtype="<U1")
    return arr


class AssociativeArray:
    """Immutable sparse array with string row and column keys.

    Build instances with :meth:`from_triples` (or :meth:`from_arrays` when the
    keys are already in columnar form).  Supports ``+`` (entry-wise sum),
    ``@`` (matrix product over matching inner keys) and ``.T``.
    """

    __slots__ = ("_rows", "_cols", "_mat", "_csc")

    def __init__(self, rows: np.ndarray, cols: np.ndarray, mat: sp.csr_matrix):
        # Trusted constructor: keys sorted and unique, no empty rows/cols,
        # no explicit zeros.  Use the classmethods from outside this module.
        self._rows = rows
        self._cols = cols
        self._mat = mat
        self._csc = None

    # ------------------------------------------------------------------
    # construction
    @classmethod
    def empty(cls) -> "AssociativeArray":
        return cls(_keys(), _keys(), sp.csr_matrix((0, 0), dtype=np.float64))

    @classmethod
    def from_triples(cls, triples: Iterable[Sequence]) -> "AssociativeArray":
        """Build an array from ``(row, col, val)`` triples.

        Duplicate ``(row, col)`` pairs are summed.  Raises :class:`ValueError`
        naming the index of the first triple with an empty key or a
        non-positive value.
        """
        rows, cols, vals = [], [], []
        for i, t in enumerate(triples):
            r, c, v = t
            if not isinstance(r, str) or not r:
                raise ValueError(f"triple {i}: empty or non-string row key {r!r}")
            if not isinstance(c, str) or not c:
                raise ValueError(f"triple {i}: empty or non-string column key {c!r}")
            if not v > 0:
                raise ValueError(f"triple {i}: value must be positive, got {v!r}")
            rows.append(r)
            cols.append(c)
            vals.append(v)
        return cls.from_arrays(rows, cols, vals)

    @classmethod
    def from_arrays(cls, rows, cols, vals=None) -> "AssociativeArray":
        """Columnar constructor; ``vals`` defaults to all ones.

        Keys are not validated here beyond what numpy enforces, so callers
        are responsible for non-empty keys and positive values.
        """
        rows = np.asarray(rows, dtype=str)
        cols = np.asarray(cols, dtype=str)
        if rows.shape != cols.shape:
            raise ValueError("rows and cols must have the same length")
        if vals is None:
            vals = np.ones(rows.shape[0], dtype=np.float64)
        else:
            vals = np.asarray(vals, dtype=np.float64)
            if vals.shape != rows.shape:
                raise ValueError("vals must match rows and cols in length")
        if rows.size == 0:
            return cls.empty()
        row_keys, ri = np.unique(rows, return_inverse=True)
        col_keys, ci = np.unique(cols, return_inverse=True)
        mat = sp.coo_matrix(
            (vals, (ri.ravel(), ci.ravel())), shape=(row_keys.size, col_keys.size)
        ).tocsr()
        mat.sum_duplicates()
        return _compact(row_keys, col_keys, mat)

    # ------------------------------------------------------------------
    # shape and access
    @property
    def row_keys(self) -> np.ndarray:
        return self._rows

    @property
    def col_keys(self) -> np.ndarray:
        return self._cols

    @property
    def num_rows(self) -> int:
        return int(self._rows.size)

    @property
    def num_cols(self) -> int:
        return int(self._cols.size)

    @property
    def nnz(self) -> int:
        return int(self._mat.nnz)

    @property
    def shape(self) -> tuple[int, int]:
        return self.num_rows, self.num_cols

    @property
    def matrix(self) -> sp.csr_matrix:
        """The underlying CSR matrix (do not modify)."""
        return self._mat

    def total(self) -> float:
        return float(self._mat.data.sum())

    def __len__(self) -> int:
        return self.nnz

    def __bool__(self) -> bool:
        return self.nnz > 0

    def __iter__(self) -> Iterator[Triple]:
        return self.triples()

    def triples(self) -> Iterator[Triple]:
        """Yield entries sorted by ``(row, col)``."""
        m = self._mat
        indptr, indices, data = m.indptr, m.indices, m.data
        for i in range(self.num_rows):
            r = str(self._rows[i])
            for k in range(indptr[i], indptr[i + 1]):
                yield Triple(r, str(self._cols[indices[k]]), float(data[k]))

    def get(self, row: str, col: str, default: float = 0.0) -> float:
        i = _find(self._rows, row)
        j = _find(self._cols, col)
        if i < 0 or j < 0:
            return default
        v = self._mat[i, j]
        return float(v) if v else default

    def __getitem__(self, key):
        row, col = key
        return self.get(row, col)

    def to_dict(self) -> dict[tuple[str, str], float]:
        return {(t.row, t.col): t.val for t in self.triples()}

    def to_dense(self, row_keys=None, col_keys=None) -> np.ndarray:
        """Dense matrix over the given key orders (defaults to own keys)."""
        row_keys = self._rows if row_keys is None else np.asarray(row_keys, dtype=str)
        col_keys = self._cols if col_keys is None else np.asarray(col_keys, dtype=str)
        out = np.zeros((len(row_keys), len(col_keys)))
        rpos = {str(k): i for i, k in enumerate(row_keys)}
        cpos = {str(k): j for j, k in enumerate(col_keys)}
        for r, c, v in self.triples():
            out[rpos[r], cpos[c]] = v
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, AssociativeArray):
            return NotImplemented
        if self.shape != other.shape or self.nnz != other.nnz:
            return False
        if not (np.array_equal(self._rows, other._rows)
                and np.array_equal(self._cols, other._cols)):
            return False
        diff = self._mat != other._mat
        return diff.nnz == 0

    __hash__ = None

    def __repr__(self) -> str:
        return f"AssociativeArray({self.num_rows}x{self.num_cols}, nnz={self.nnz})"

    def __str__(self) -> str:
        return dumps(self)

    # ------------------------------------------------------------------
    # algebra
    def add(self, other: "AssociativeArray") -> "AssociativeArray":
        """Entry-wise sum over the union of keys.

        When the operands share no row or column key this is a plain
        concatenation: ``nnz(A + B) == nnz(A) + nnz(B)``.
        """
        if not other:
            return self
        if not self:
            return other
        rows = np.union1d(self._rows, other._rows)
        cols = np.union1d(self._cols, other._cols)
        a = _reindex(self, rows, cols)
        b = _reindex(other, rows, cols)
        return _compact(rows, cols, (a + b).tocsr())

    __add__ = add

    def transpose(self) -> "AssociativeArray":
        return AssociativeArray(self._cols, self._rows, self._mat.T.tocsr())

    @property
    def T(self) -> "AssociativeArray":
        return self.transpose()

    def multiply(self, other: "AssociativeArray") -> "AssociativeArray":
        """Matrix product, matching ``self.col_keys`` to ``other.row_keys``.

        Inner keys present in only one operand contribute nothing.
        """
        inner, ia, ib = np.intersect1d(
            self._cols, other._rows, assume_unique=True, return_indices=True
        )
        if inner.size == 0:
            return AssociativeArray.empty()
        prod = (self._mat[:, ia] @ other._mat[ib, :]).tocsr()
        return _compact(self._rows, other._cols, prod)

    __matmul__ = multiply

    def row_sums(self) -> "AssociativeArray":
        """Single-column array: total of each row, under column key ``"1"``."""
        if not self:
            return AssociativeArray.empty()
        sums = np.asarray(self._mat.sum(axis=1)).ravel()
        mat = sp.csr_matrix(sums.reshape(-1, 1))
        return _compact(self._rows, _keys([SUM_KEY]), mat)

    def col_sums(self) -> "AssociativeArray":
        """Single-row array: total of each column, under row key ``"1"``."""
        if not self:
            return AssociativeArray.empty()
        sums = np.asarray(self._mat.sum(axis=0)).ravel()
        mat = sp.csr_matrix(sums.reshape(1, -1))
        return _compact(_keys([SUM_KEY]), self._cols, mat)

    def row_degrees(self) -> dict[str, int]:
        """Number of stored entries in each row."""
        counts = np.diff(self._mat.indptr)
        return {str(k): int(n) for k, n in zip(self._rows, counts)}

    def col_degrees(self) -> dict[str, int]:
        """Number of stored entries in each column."""
        counts = np.bincount(self._mat.indices, minlength=self.num_cols)
        return {str(k): int(n) for k, n in zip(self._cols, counts)}

    def col_prefix_range(self, prefix: str) -> tuple[int, int]:
        """Half-open index range of the columns whose key starts with ``prefix``.

        Sorted keys make the matching columns contiguous, so this is two
        binary searches.
        """
        if not prefix:
            raise ValueError("prefix must be non-empty")
        lo = int(np.searchsorted(self._cols, prefix, side="left"))
        last = ord(prefix[-1])
        if last < 0x10FFFF:
            upper = prefix[:-1] + chr(last + 1)
            hi = int(np.searchsorted(self._cols, upper, side="left"))
        else:
            hi = lo
            while hi < self.num_cols and str(self._cols[hi]).startswith(prefix):
                hi += 1
        return lo, hi

    def select_col_prefix(self, prefix: str) -> "AssociativeArray":
        """Sub-array of the columns whose key starts with ``prefix``."""
        lo, hi = self.col_prefix_range(prefix)
        if lo == hi:
            return AssociativeArray.empty()
        sub = self._col_major()[:, lo:hi].tocsr()
        return _compact(self._rows, self._cols[lo:hi], sub)

    def threshold(self, t: float) -> "AssociativeArray":
        """Keep only entries with value strictly greater than ``t``."""
        if not self:
            return self
        m = self._mat.copy()
        m.data[m.data <= t] = 0
        m.eliminate_zeros()
        if m.nnz == self.nnz:
            return self
        return _compact(self._rows, self._cols, m)

    def __gt__(self, t):
        if isinstance(t, AssociativeArray):
            return NotImplemented
        return self.threshold(t)

    def _col_major(self) -> sp.csc_matrix:
        if self._csc is None:
            self._csc = self._mat.tocsc()
        return self._csc

    def validate(self) -> None:
        """Check the structural invariants; raises ``AssertionError``."""
        m = self._mat
        assert m.shape == (self.num_rows, self.num_cols)
        assert np.all(m.data > 0), "non-positive stored value"
        assert self.num_rows == 0 or np.all(self._rows[1:] > self._rows[:-1])
        assert self.num_cols == 0 or np.all(self._cols[1:] > self._cols[:-1])
        assert np.all(np.diff(m.indptr) > 0), "phantom row key"
        assert np.all(np.bincount(m.indices, minlength=self.num_cols) > 0), "phantom column key"
        assert all(len(k) > 0 for k in self._rows) and all(len(k) > 0 for k in self._cols)
        probe = m.copy()
        probe.sum_duplicates()
        assert probe.nnz == m.nnz, "duplicate (row, col) entries"


def _find(keys: np.ndarray, key: str) -> int:
    i = int(np.searchsorted(keys, key))
    if i < keys.size and keys[i] == key:
        return i
    return -1


def _reindex(a: AssociativeArray, rows: np.ndarray, cols: np.ndarray) -> sp.csr_matrix:
    coo = a.matrix.tocoo()
    ri = np.searchsorted(rows, a.row_keys)[coo.row]
    ci = np.searchsorted(cols, a.col_keys)[coo.col]
    return sp.csr_matrix((coo.data, (ri, ci)), shape=(rows.size, cols.size))


def _compact(rows: np.ndarray, cols: np.ndarray, mat) -> AssociativeArray:
    """Drop zeros, then any row or column key left without entries."""
    mat = sp.csr_matrix(mat, dtype=np.float64)
    if mat.nnz and np.any(mat.data <= 0):
        mat.data[mat.data <= 0] = 0
    mat.eliminate_zeros()
    mat.sort_indices()
    if mat.nnz == 0:
        return AssociativeArray.empty()
    keep_r = np.diff(mat.indptr) > 0
    keep_c = np.bincount(mat.indices, minlength=mat.shape[1]) > 0
    if not keep_r.all():
        mat = mat[keep_r]
        rows = rows[keep_r]
    if not keep_c.all():
        mat = mat[:, keep_c]
        cols = cols[keep_c]
        mat.sort_indices()
    return AssociativeArray(rows, cols, mat)


# ----------------------------------------------------------------------
# triple interchange format: row<TAB>col<TAB>value, sorted by (row, col)

_ESCAPES = {"\\": "\\\\", "\t": "\\t", "\n": "\\n", "\r": "\\r"}
_UNESCAPES = {"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}


def _escape(key: str) -> str:
    if not any(ch in key for ch in _ESCAPES):
        return key
    return "".join(_ESCAPES.get(ch, ch) for ch in key)


def _unescape(field: str, lineno: int) -> str:
    if "\\" not in field:
        return field
    out = []
    it = iter(field)
    for ch in it:
        if ch != "\\":
            out.append(ch)
            continue
        nxt = next(it, None)
        if nxt not in _UNESCAPES:
            raise TripleFormatError(lineno, f"bad escape sequence in {field!r}")
        out.append(_UNESCAPES[nxt])
    return "".join(out)


def format_value(v: float) -> str:
    """Integral values print as integers, others with ``repr`` precision."""
    f = float(v)
    if f.is_integer():
        return str(int(f))
    return repr(f)


def write_triples(a: AssociativeArray, fh: IO[str]) -> int:
    """Write ``a`` in triple format; returns the number of lines written."""
    m = a.matrix
    cols = [_escape(str(c)) for c in a.col_keys]
    vals = [format_value(v) for v in m.data]
    lines = []
    indptr, indices = m.indptr, m.indices
    for i, r in enumerate(a.row_keys):
        r = _escape(str(r))
        for k in range(indptr[i], indptr[i + 1]):
            lines.append(f"{r}\t{cols[indices[k]]}\t{vals[k]}\n")
    fh.write("".join(lines))
    return len(lines)


def read_triples(fh: IO[str]) -> AssociativeArray:
    rows, cols, vals = [], [], []
    for lineno, line in enumerate(fh, start=1):
        line = line.rstrip("\n")
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise TripleFormatError(lineno, f"expected 3 tab-separated fields, got {len(parts)}")
        r, c, v = parts
        try:
            val = float(v)
        except ValueError:
            raise TripleFormatError(lineno, f"bad value {v!r}") from None
        if not r or not c:
            raise TripleFormatError(lineno, "empty key")
        if not val > 0:
            raise TripleFormatError(lineno, f"value must be positive, got {v!r}")
        rows.append(_unescape(r, lineno))
        cols.append(_unescape(c, lineno))
        vals.append(val)
    return AssociativeArray.from_arrays(rows, cols, vals)


def dumps(a: AssociativeArray) -> str:
    buf = io.StringIO()
    write_triples(a, buf)
    return buf.getvalue()


def loads(text: str) -> AssociativeArray:
    return read_triples(io.StringIO(text))
