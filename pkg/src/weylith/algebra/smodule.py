"""Graded S-modules (S = Sym W) realized as based vector spaces per degree.

Each module exposes ``dim(d)`` and ``action(t, d)``, the matrix of
multiplication by the variable w_t from M_d to M_{d+1}.  Pieces are computed
on demand and memoised; memoisation is an idempotent fill.
"""

from __future__ import annotations

from typing import Sequence

from weylith.errors import InvalidInputError, WindowTooNarrowError
from weylith.kernel.field import QQ
from weylith.kernel.linalg import DenseMatrix, _rref_inplace, kernel_with_free
from weylith.kernel.poly import monomials_of_degree
from weylith.kernel.wedge import wedge_basis


class DegreewiseSModule:
    def __init__(self, dimW: int, window: tuple[int, int], field=QQ):
        if dimW < 2:
            raise InvalidInputError(f"dim W must be at least 2, got {dimW}")
        lo, hi = window
        if lo > hi:
            raise InvalidInputError(f"empty window {window}")
        self.dimW = dimW
        self.window = (lo, hi)
        self.field = field
        self._dims: dict[int, int] = {}
        self._actions: dict[tuple[int, int], DenseMatrix] = {}

    def _check(self, d: int) -> None:
        lo, hi = self.window
        if not lo <= d <= hi:
            raise WindowTooNarrowError(f"degree {d} outside the realized window [{lo}, {hi}]")

    def dim(self, d: int) -> int:
        self._check(d)
        if d not in self._dims:
            self._dims[d] = self._dim(d)
        return self._dims[d]

    def action(self, t: int, d: int) -> DenseMatrix:
        if not 0 <= t < self.dimW:
            raise InvalidInputError(f"no variable w{t} in dimension {self.dimW}")
        self._check(d)
        self._check(d + 1)
        key = (t, d)
        if key not in self._actions:
            m = self._action(t, d)
            if (m.rows, m.cols) != (self.dim(d + 1), self.dim(d)):
                raise AssertionError("action matrix has the wrong shape")
            self._actions[key] = m
        return self._actions[key]

    def commutes(self, d: int) -> bool:
        """w_t w_u = w_u w_t on M_d -> M_{d+2}."""
        for t in range(self.dimW):
            for u in range(t + 1, self.dimW):
                lhs = self.action(t, d + 1) @ self.action(u, d)
                rhs = self.action(u, d + 1) @ self.action(t, d)
                if lhs != rhs:
                    return False
        return True

    def _dim(self, d: int) -> int:
        raise NotImplementedError

    def _action(self, t: int, d: int) -> DenseMatrix:
        raise NotImplementedError


def _bump(exps: tuple[int, ...], t: int) -> tuple[int, ...]:
    e = list(exps)
    e[t] += 1
    return tuple(e)


class PresentedModule(DegreewiseSModule):
    """coker( ⊕_j S(-c_j) -> ⊕_i S(-g_i) ).

    ``gen_degrees[i]`` is the degree of the i-th generator; each relation is
    (degree c_j, column of polynomials {exponents: coeff}) with entry i
    homogeneous of degree c_j - g_i.  With no relations this is a free module.
    """

    def __init__(self, dimW, window, gen_degrees: Sequence[int], relations: Sequence[tuple[int, Sequence[dict]]] = (), field=QQ):
        super().__init__(dimW, window, field)
        self.gen_degrees = tuple(gen_degrees)
        self.relations = []
        for deg, col in relations:
            if len(col) != len(self.gen_degrees):
                raise InvalidInputError("relation length does not match the number of generators")
            for i, poly in enumerate(col):
                for e, c in poly.items():
                    if len(e) != dimW:
                        raise InvalidInputError("polynomial in the wrong number of variables")
                    if sum(e) != deg - self.gen_degrees[i]:
                        raise InvalidInputError(
                            f"relation entry {i} is not homogeneous of degree {deg - self.gen_degrees[i]}"
                        )
            self.relations.append((deg, [{e: field(c) for e, c in p.items()} for p in col]))
        self._reduced: dict[int, tuple] = {}

    def _free_basis(self, d: int) -> list[tuple[int, tuple[int, ...]]]:
        return [(i, m) for i, g in enumerate(self.gen_degrees) for m in monomials_of_degree(self.dimW, d - g)]

    def _reduction(self, d: int):
        if d not in self._reduced:
            basis = self._free_basis(d)
            index = {b: k for k, b in enumerate(basis)}
            rows = []
            for deg, col in self.relations:
                for m in monomials_of_degree(self.dimW, d - deg):
                    v = [self.field.zero] * len(basis)
                    for i, poly in enumerate(col):
                        for e, c in poly.items():
                            k = index[(i, tuple(a + b for a, b in zip(e, m)))]
                            v[k] = v[k] + c
                    rows.append(v)
            pivots = _rref_inplace(rows, len(basis))
            rows = rows[: len(pivots)]
            pivset = set(pivots)
            free = [k for k in range(len(basis)) if k not in pivset]
            self._reduced[d] = (basis, index, list(zip(pivots, rows)), free)
        return self._reduced[d]

    def _dim(self, d: int) -> int:
        return len(self._reduction(d)[3])

    def normal_form(self, d: int, v: Sequence) -> list:
        """Coordinates of the class of a free-module vector in the chosen basis of M_d."""
        _, _, piv_rows, free = self._reduction(d)
        v = list(v)
        for c, row in piv_rows:
            x = v[c]
            if x != 0:
                for j, y in enumerate(row):
                    if y != 0:
                        v[j] = v[j] - x * y
        return [v[k] for k in free]

    def _action(self, t: int, d: int) -> DenseMatrix:
        basis, _, _, free = self._reduction(d)
        nbasis, nindex, _, _ = self._reduction(d + 1)
        cols = []
        for k in free:
            i, m = basis[k]
            v = [self.field.zero] * len(nbasis)
            v[nindex[(i, _bump(m, t))]] = self.field.one
            cols.append(self.normal_form(d + 1, v))
        return DenseMatrix.from_columns(cols, self.dim(d + 1), self.field)


class VeroneseModule(DegreewiseSModule):
    """Sections of O_{P^1}(deg*k + twist) on the degree-``deg`` rational normal curve.

    W is the space of binary forms of degree ``deg`` with basis
    w_t = x^t y^(deg - t); piece k has basis x^i y^(D - i), D = deg*k + twist.
    """

    def __init__(self, deg: int, twist: int, window, field=QQ):
        if deg < 1:
            raise InvalidInputError(f"Veronese degree must be >= 1, got {deg}")
        super().__init__(deg + 1, window, field)
        self.deg = deg
        self.twist = twist

    def _dim(self, d: int) -> int:
        return max(0, self.deg * d + self.twist + 1)

    def _action(self, t: int, d: int) -> DenseMatrix:
        n, m = self.dim(d), self.dim(d + 1)
        rows = [[self.field.zero] * n for _ in range(m)]
        for i in range(n):
            rows[i + t][i] = self.field.one
        return DenseMatrix.from_rows(rows, n, self.field) if m else DenseMatrix.zeros(0, n, self.field)


class KoszulKernelModule(DegreewiseSModule):
    """Γ_*(Ω^a(a)) as ker( /\\^a W (x) S -> /\\^(a-1) W (x) S(1) ).

    The Koszul map sends w_I (x) f to sum_j (-1)^j w_{I - i_j} (x) w_{i_j} f.
    Piece k is the kernel in internal degree k, i.e. H^0(Ω^a(a + k)).
    """

    def __init__(self, a: int, dimW: int, window, field=QQ):
        super().__init__(dimW, window, field)
        if not 0 <= a <= dimW - 1:
            raise InvalidInputError(f"omega index a={a} outside [0, {dimW - 1}]")
        self.a = a
        self._kernels: dict[int, tuple] = {}

    def ambient_basis(self, k: int, a: int | None = None) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        a = self.a if a is None else a
        return [(I, m) for I in wedge_basis(self.dimW, a) for m in monomials_of_degree(self.dimW, k)]

    def koszul_rows(self, k: int) -> list[list]:
        """Rows of the Koszul map in internal degree k."""
        src = self.ambient_basis(k)
        tgt = self.ambient_basis(k + 1, self.a - 1)
        tindex = {b: i for i, b in enumerate(tgt)}
        rows = [[self.field.zero] * len(src) for _ in range(len(tgt))]
        for col, (I, m) in enumerate(src):
            for j, i in enumerate(I):
                rest = I[:j] + I[j + 1:]
                r = tindex[(rest, _bump(m, i))]
                rows[r][col] = rows[r][col] + (1 if j % 2 == 0 else -1)
        return rows

    def _kernel(self, k: int):
        if k not in self._kernels:
            n = len(self.ambient_basis(k)) if k >= 0 else 0
            if n == 0:
                self._kernels[k] = ([], [])
            elif self.a == 0:
                basis = [[self.field.one if i == j else self.field.zero for i in range(n)] for j in range(n)]
                self._kernels[k] = (basis, list(range(n)))
            else:
                self._kernels[k] = kernel_with_free(self.koszul_rows(k), n, self.field.zero, self.field.one)
        return self._kernels[k]

    def kernel_vectors(self, k: int) -> list[list]:
        return self._kernel(k)[0]

    def _dim(self, d: int) -> int:
        return len(self._kernel(d)[0])

    def _action(self, t: int, d: int) -> DenseMatrix:
        basis, _ = self._kernel(d)
        nbasis, nfree = self._kernel(d + 1)
        src = self.ambient_basis(d)
        tindex = {b: i for i, b in enumerate(self.ambient_basis(d + 1))}
        cols = []
        for v in basis:
            w = [self.field.zero] * len(tindex)
            for (I, m), c in zip(src, v):
                if c != 0:
                    w[tindex[(I, _bump(m, t))]] = c
            cols.append([w[i] for i in nfree])
        return DenseMatrix.from_columns(cols, len(nbasis), self.field)


def koszul_kernel_module(a: int, dimW: int, window: tuple[int, int], field=QQ) -> KoszulKernelModule:
    return KoszulKernelModule(a, dimW, window, field)
