"""Dense exact linear algebra over QQ or GF(p).

Matrices are small (at most a few hundred rows), so everything is a plain
row-major list of field elements and Gauss-Jordan elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence

from weylith.errors import InvalidInputError


@dataclass(frozen=True)
class DenseMatrix:
    rows: int
    cols: int
    entries: tuple  # row-major, length rows * cols

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise InvalidInputError(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]], cols: int | None = None, field=None) -> "DenseMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise InvalidInputError("ragged rows")
        conv = field if field is not None else _default_scalar
        return cls(len(rows), cols, tuple(conv(x) for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int, field=None) -> "DenseMatrix":
        z = field.zero if field is not None else Fraction(0)
        return cls(rows, cols, (z,) * (rows * cols))

    @classmethod
    def identity(cls, n: int, field=None) -> "DenseMatrix":
        z = field.zero if field is not None else Fraction(0)
        o = field.one if field is not None else Fraction(1)
        return cls(n, n, tuple(o if i == j else z for i in range(n) for j in range(n)))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Any]], nrows: int, field=None) -> "DenseMatrix":
        if not columns:
            return cls.zeros(nrows, 0, field)
        return cls.from_rows([[c[i] for c in columns] for i in range(nrows)], len(columns), field)

    def __getitem__(self, ij: tuple[int, int]):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def column(self, j: int) -> list:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def to_rows(self) -> list[list]:
        return [self.row(i) for i in range(self.rows)]

    def columns(self) -> list[list]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "DenseMatrix":
        return DenseMatrix(self.cols, self.rows, tuple(self[i, j] for j in range(self.cols) for i in range(self.rows)))

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.entries)

    def __matmul__(self, other: "DenseMatrix") -> "DenseMatrix":
        if self.cols != other.rows:
            raise InvalidInputError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        sample = self.entries[0] if self.entries else other.entries[0] if other.entries else Fraction(0)
        zero = _zero_like(sample)
        out = []
        ocols = other.columns()
        for i in range(self.rows):
            nz = [(k, x) for k, x in enumerate(self.row(i)) if x != 0]
            for c in ocols:
                s = zero
                for k, x in nz:
                    y = c[k]
                    if y != 0:
                        s = s + x * y
                out.append(s)
        return DenseMatrix(self.rows, other.cols, tuple(out))

    def __add__(self, other: "DenseMatrix") -> "DenseMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise InvalidInputError("shape mismatch in addition")
        return DenseMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "DenseMatrix":
        return DenseMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def __sub__(self, other: "DenseMatrix") -> "DenseMatrix":
        return self + (-other)

    def apply(self, vec: Sequence[Any]) -> list:
        if len(vec) != self.cols:
            raise InvalidInputError("vector length mismatch")
        nz = [(k, x) for k, x in enumerate(vec) if x != 0]
        zero = _zero_like(self.entries[0]) if self.entries else Fraction(0)
        out = []
        for i in range(self.rows):
            base = i * self.cols
            s = zero
            for k, x in nz:
                y = self.entries[base + k]
                if y != 0:
                    s = s + y * x
            out.append(s)
        return out

    def rank(self) -> int:
        return len(rref(self)[1])

    def map(self, fn) -> "DenseMatrix":
        return DenseMatrix(self.rows, self.cols, tuple(fn(x) for x in self.entries))


def _default_scalar(x):
    if isinstance(x, (int, str)):
        return Fraction(x)
    return x


def _zero_like(x):
    return x - x


def _rref_inplace(a: list[list], ncols: int) -> list[int]:
    """Gauss-Jordan on a list of rows; returns pivot columns."""
    m = len(a)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        piv = None
        for i in range(r, m):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        prow = a[r]
        inv = 1 / prow[c]
        nz = [j for j in range(c, ncols) if prow[j] != 0]
        for j in nz:
            prow[j] = prow[j] * inv
        for i in range(m):
            if i == r:
                continue
            row = a[i]
            f = row[c]
            if f == 0:
                continue
            for j in nz:
                row[j] = row[j] - f * prow[j]
        pivots.append(c)
        r += 1
    return pivots


def rref(m: DenseMatrix) -> tuple[DenseMatrix, tuple[int, ...]]:
    """Reduced row-echelon form and the (strictly increasing) pivot columns."""
    a = m.to_rows()
    pivots = _rref_inplace(a, m.cols)
    return DenseMatrix(m.rows, m.cols, tuple(x for r in a for x in r)), tuple(pivots)


def kernel_columns(rows: list[list], ncols: int, zero=None, one=None) -> list[list]:
    """Right null space basis as a list of column vectors (list form of :func:`kernel_basis`)."""
    return kernel_with_free(rows, ncols, zero, one)[0]


def kernel_with_free(rows: list[list], ncols: int, zero=None, one=None) -> tuple[list[list], list[int]]:
    """Kernel basis plus the free column carrying each vector's unit entry.

    A kernel vector v equals sum_f v[f] * basis_f, so its coordinates are
    simply its values at the free positions.
    """
    a = [list(r) for r in rows]
    pivots = _rref_inplace(a, ncols)
    if zero is None:
        sample = next((x for r in rows for x in r), Fraction(0))
        zero = _zero_like(sample)
        one = zero + 1
    pivset = set(pivots)
    basis = []
    free = [f for f in range(ncols) if f not in pivset]
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for i, pc in enumerate(pivots):
            x = a[i][f]
            if x != 0:
                v[pc] = -x
        basis.append(v)
    return basis, free


def kernel_basis(m: DenseMatrix, field=None) -> DenseMatrix:
    """Columns spanning the right null space.

    Free variables are taken in increasing column order, each with a 1 in its
    own position and 0 in the other free positions.
    """
    if field is not None:
        zero, one = field.zero, field.one
    else:
        zero = _zero_like(m.entries[0]) if m.entries else Fraction(0)
        one = zero + 1
    cols = kernel_columns(m.to_rows(), m.cols, zero, one)
    return DenseMatrix.from_columns(cols, m.cols, field)


def determinant(m: DenseMatrix):
    """Exact determinant by Gaussian elimination with pivot swaps."""
    if m.rows != m.cols:
        raise InvalidInputError("determinant of a non-square matrix")
    n = m.rows
    a = m.to_rows()
    if n == 0:
        return Fraction(1)
    det = a[0][0] - a[0][0] + 1
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return det - det
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        x = a[c][c]
        det = det * x
        inv = 1 / x
        for r in range(c + 1, n):
            y = a[r][c]
            if y != 0:
                f = y * inv
                a[r] = [u - f * v for u, v in zip(a[r], a[c])]
    return det


def rank_of_rows(rows: Iterable[Sequence[Any]], ncols: int) -> int:
    a = [list(r) for r in rows]
    return len(_rref_inplace(a, ncols))


class EchelonSpan:
    """Incrementally maintained row-echelon basis of a subspace of K^n.

    ``reduce(v)`` returns the remainder of ``v`` modulo the span; ``add(v)``
    inserts ``v`` if it is independent and reports whether it was.
    """

    def __init__(self, n: int):
        self.n = n
        self._rows: dict[int, list] = {}  # pivot column -> normalized row

    def __len__(self):
        return len(self._rows)

    def reduce(self, v: Sequence[Any]) -> list:
        v = list(v)
        for c in sorted(self._rows):
            x = v[c]
            if x != 0:
                row = self._rows[c]
                for j in range(c, self.n):
                    y = row[j]
                    if y != 0:
                        v[j] = v[j] - x * y
        return v

    def add(self, v: Sequence[Any]) -> bool:
        v = self.reduce(v)
        piv = next((j for j, x in enumerate(v) if x != 0), None)
        if piv is None:
            return False
        inv = 1 / v[piv]
        v = [x * inv for x in v]
        for c, row in self._rows.items():
            x = row[piv]
            if x != 0:
                self._rows[c] = [a - x * b for a, b in zip(row, v)]
        self._rows[piv] = v
        return True

    def contains(self, v: Sequence[Any]) -> bool:
        return all(x == 0 for x in self.reduce(v))
