"""Graded modules over the exterior algebra E = /\\ W*, realized degree by degree.

Grading: E_{-k} = /\\^k W*, so every covector lowers degree by one.  The
dualizing module Ê is free of rank one over E with its generator in degree
dim W; the twist Ê(a) has its generator g_a in degree ``dimW - a`` and
occupies degrees ``-a .. dimW - a``.

A homomorphism of degree 0 between direct sums of twisted Ê's is a matrix of
exterior forms: the entry in row k, column j is the form eps with
g_j |-> g'_k * eps, homogeneous of exterior degree a_j - b_k.  E acts on the
right, so composition is the ordinary matrix product with forms multiplied
as (later map) ^ (earlier map).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Any, Sequence

from weylith.errors import InvalidInputError, WindowTooNarrowError
from weylith.kernel.field import QQ
from weylith.kernel.linalg import DenseMatrix, EchelonSpan, kernel_columns, _rref_inplace
from weylith.kernel.wedge import (
    ext_add,
    ext_degree,
    ext_mul,
    ext_to_vector,
    indices_of,
    mask_of,
    mono_mul,
    popcount,
    wedge_basis,
)


@lru_cache(maxsize=None)
def _masks(n: int, k: int) -> tuple[int, ...]:
    return tuple(mask_of(I) for I in wedge_basis(n, k))


@lru_cache(maxsize=4096)
def _slice_basis(dimW: int, twists: tuple[int, ...], d: int) -> tuple[tuple[int, int], ...]:
    out = []
    for j, a in enumerate(twists):
        k = dimW - a - d
        for m in _masks(dimW, k):
            out.append((j, m))
    return tuple(out)


@lru_cache(maxsize=4096)
def _slice_index(dimW: int, twists: tuple[int, ...], d: int) -> dict[tuple[int, int], int]:
    return {b: i for i, b in enumerate(_slice_basis(dimW, twists, d))}


class DegreewiseEModule:
    """Finite-dimensional graded E-module given by pieces and covector actions.

    Subclasses provide ``degree_range``, ``piece_dim(d)`` and
    ``action(t, d)``: the matrix of right multiplication by w_t*,
    piece(d) -> piece(d - 1).
    """

    dimW: int
    field: Any
    complete: bool = True  # False when pieces above the window may be missing

    def degree_range(self) -> tuple[int, int]:
        raise NotImplementedError

    def piece_dim(self, d: int) -> int:
        raise NotImplementedError

    def action(self, t: int, d: int) -> DenseMatrix:
        raise NotImplementedError


@dataclass(frozen=True, eq=True)
class FreeEModule(DegreewiseEModule):
    """Direct sum of twisted dualizing modules, one twist per generator."""

    dimW: int
    twists: tuple[int, ...]
    field: Any = dc_field(default=QQ, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "twists", tuple(int(a) for a in self.twists))

    @property
    def rank(self) -> int:
        return len(self.twists)

    def generator_degree(self, j: int) -> int:
        return self.dimW - self.twists[j]

    def degree_range(self) -> tuple[int, int]:
        if not self.twists:
            return (0, -1)
        return (min(-a for a in self.twists), max(self.dimW - a for a in self.twists))

    def slice_basis(self, d: int) -> tuple[tuple[int, int], ...]:
        return _slice_basis(self.dimW, self.twists, d)

    def slice_index(self, d: int) -> dict:
        return _slice_index(self.dimW, self.twists, d)

    def piece_dim(self, d: int) -> int:
        return len(self.slice_basis(d))

    def summands(self) -> list[tuple[int, int]]:
        """(twist, multiplicity) groups in generator order."""
        out: list[list[int]] = []
        for a in self.twists:
            if out and out[-1][0] == a:
                out[-1][1] += 1
            else:
                out.append([a, 1])
        return [(a, m) for a, m in out]

    def right_mult_vector(self, v: Sequence, d: int, t: int) -> list:
        """Multiply a slice-d vector by w_t* on the right; lands in slice d-1."""
        tgt = self.slice_index(d - 1)
        out = [self.field.zero] * len(tgt)
        bit = 1 << t
        for (j, m), c in zip(self.slice_basis(d), v):
            if c == 0:
                continue
            sg = mono_mul(m, bit)
            if sg == 0:
                continue
            i = tgt[(j, m | bit)]
            out[i] = out[i] + (c if sg > 0 else -c)
        return out

    def action(self, t: int, d: int) -> DenseMatrix:
        src = self.slice_basis(d)
        cols = []
        for i in range(len(src)):
            e = [self.field.zero] * len(src)
            e[i] = self.field.one
            cols.append(self.right_mult_vector(e, d, t))
        return DenseMatrix.from_columns(cols, self.piece_dim(d - 1), self.field)

    def vector_to_forms(self, v: Sequence, d: int) -> list[dict]:
        """Split a slice vector into one exterior form per generator."""
        forms: list[dict] = [{} for _ in self.twists]
        for (j, m), c in zip(self.slice_basis(d), v):
            if c != 0:
                forms[j][m] = c
        return forms


@dataclass(frozen=True, eq=False)
class ExteriorMap:
    """Degree-0 homomorphism between free E-modules (matrix of exterior forms)."""

    source: FreeEModule
    target: FreeEModule
    entries: tuple  # entries[k][j]: form {mask: coeff}, row k = target gen, column j = source gen

    def __post_init__(self):
        if len(self.entries) != self.target.rank or any(len(r) != self.source.rank for r in self.entries):
            raise InvalidInputError("entry matrix shape does not match the free modules")
        if self.source.dimW != self.target.dimW:
            raise InvalidInputError("source and target live over different exterior algebras")

    @property
    def field(self):
        return self.source.field

    @property
    def dimW(self) -> int:
        return self.source.dimW

    @classmethod
    def zero(cls, source: FreeEModule, target: FreeEModule) -> "ExteriorMap":
        return cls(source, target, tuple(tuple({} for _ in range(source.rank)) for _ in range(target.rank)))

    def entry(self, k: int, j: int) -> dict:
        return self.entries[k][j]

    def check_homogeneous(self) -> None:
        for k, b in enumerate(self.target.twists):
            for j, a in enumerate(self.source.twists):
                eps = self.entries[k][j]
                deg = ext_degree(eps)
                if deg is not None and deg != a - b:
                    raise InvalidInputError(
                        f"entry ({k},{j}) has exterior degree {deg}, expected {a - b}"
                    )

    def is_zero(self) -> bool:
        return all(not eps for row in self.entries for eps in row)

    def is_minimal(self) -> bool:
        """No nonzero entry between summands of equal twist (no units)."""
        for k, b in enumerate(self.target.twists):
            for j, a in enumerate(self.source.twists):
                if a == b and self.entries[k][j]:
                    return False
        return True

    def slice_rows(self, d: int) -> list[list]:
        """Matrix (as rows) of the map on the degree-d slices."""
        src = self.source.slice_basis(d)
        tgt_index = self.target.slice_index(d)
        rows = [[self.field.zero] * len(src) for _ in range(len(tgt_index))]
        for col, (j, T) in enumerate(src):
            for k in range(self.target.rank):
                eps = self.entries[k][j]
                for S, c in eps.items():
                    sg = mono_mul(S, T)
                    if sg == 0:
                        continue
                    r = tgt_index[(k, S | T)]
                    rows[r][col] = rows[r][col] + (c if sg > 0 else -c)
        return rows

    def slice_matrix(self, d: int) -> DenseMatrix:
        return DenseMatrix.from_rows(self.slice_rows(d), self.source.piece_dim(d), self.field)

    def __matmul__(self, other: "ExteriorMap") -> "ExteriorMap":
        """self o other."""
        if other.target != self.source:
            raise InvalidInputError("maps are not composable")
        out = []
        for l in range(self.target.rank):
            row = []
            for j in range(other.source.rank):
                acc: dict = {}
                for k in range(self.source.rank):
                    d_lk = self.entries[l][k]
                    e_kj = other.entries[k][j]
                    if d_lk and e_kj:
                        acc = ext_add(acc, ext_mul(d_lk, e_kj))
                row.append(acc)
            out.append(tuple(row))
        return ExteriorMap(other.source, self.target, tuple(out))

    def blocks(self) -> list[tuple[int, int, list[list[dict]]]]:
        """(a, b, matrix of forms) per pair of source/target summand groups."""
        out = []
        tpos = 0
        for b, mb in self.target.summands():
            spos = 0
            for a, ma in self.source.summands():
                mat = [list(self.entries[tpos + r][spos:spos + ma]) for r in range(mb)]
                out.append((a, b, mat))
                spos += ma
            tpos += mb
        return out

    def block(self, a: int, b: int) -> list[list[dict]]:
        for aa, bb, mat in self.blocks():
            if (aa, bb) == (a, b):
                return mat
        return []

    def block_vectors(self, a: int, b: int) -> list[list[list]]:
        """Block entries as coordinate vectors in ``wedge_basis(dimW, a - b)``."""
        k = a - b
        zero = self.field.zero
        return [[ext_to_vector(eps, self.dimW, k, zero) if k >= 0 else [] for eps in row] for row in self.block(a, b)]


class SubEModule(DegreewiseEModule):
    """Submodule of a free E-module given by a basis of every degree slice."""

    def __init__(self, ambient: FreeEModule, bases: dict[int, list[list]]):
        self.ambient = ambient
        self.dimW = ambient.dimW
        self.field = ambient.field
        self.bases = bases
        self._solvers: dict[int, tuple] = {}
        self._actions: dict[tuple[int, int], DenseMatrix] = {}

    def degree_range(self) -> tuple[int, int]:
        return self.ambient.degree_range()

    def piece_dim(self, d: int) -> int:
        return len(self.bases.get(d, ()))

    def basis_vector(self, d: int, i: int) -> list:
        return self.bases[d][i]

    def _solver(self, d: int):
        if d not in self._solvers:
            B = self.bases.get(d, [])
            n = self.ambient.piece_dim(d)
            # pivot coordinates of the row space of B^T pick an invertible square submatrix
            rows = [list(v) for v in B]
            pivots = _rref_inplace([list(r) for r in rows], n)
            square = [[v[p] for v in B] for p in pivots]  # square[p_idx][basis_idx]
            k = len(B)
            aug = [row + [self.field.one if i == r else self.field.zero for i in range(k)] for r, row in enumerate(square)]
            _rref_inplace(aug, 2 * k)
            inv = [row[k:] for row in aug]
            self._solvers[d] = (pivots, inv)
        return self._solvers[d]

    def coordinates(self, d: int, v: Sequence) -> list:
        pivots, inv = self._solver(d)
        vp = [v[p] for p in pivots]
        return [sum((inv[i][j] * vp[j] for j in range(len(vp)) if vp[j] != 0), self.field.zero) for i in range(len(inv))]

    def action(self, t: int, d: int) -> DenseMatrix:
        key = (t, d)
        if key not in self._actions:
            cols = []
            for v in self.bases.get(d, []):
                w = self.ambient.right_mult_vector(v, d, t)
                cols.append(self.coordinates(d - 1, w))
            self._actions[key] = DenseMatrix.from_columns(cols, self.piece_dim(d - 1), self.field)
        return self._actions[key]


def kernel_submodule(phi: ExteriorMap) -> SubEModule:
    """ker(phi) as a submodule of phi.source, computed slice by slice."""
    lo, hi = phi.source.degree_range()
    f = phi.field
    bases = {}
    for d in range(lo, hi + 1):
        n = phi.source.piece_dim(d)
        if n == 0:
            continue
        rows = phi.slice_rows(d)
        if rows:
            bases[d] = kernel_columns(rows, n, f.zero, f.one)
        else:
            bases[d] = [[f.one if i == j else f.zero for i in range(n)] for j in range(n)]
    return SubEModule(phi.source, bases)


@dataclass
class MinimalGenerators:
    """Minimal generators of an E-module, found from the top degree down."""

    module: DegreewiseEModule
    generators: list[tuple[int, list]]  # (degree, coordinates in piece(degree))

    def multiplicities(self) -> list[tuple[int, int]]:
        counts: dict[int, int] = {}
        for d, _ in self.generators:
            counts[d] = counts.get(d, 0) + 1
        return sorted(counts.items(), reverse=True)

    def twists(self) -> list[int]:
        """Twist of the free summand covering each generator: Ê(dimW - degree)."""
        return [self.module.dimW - d for d, _ in self.generators]


def e_minimal_generators(mod: DegreewiseEModule) -> MinimalGenerators:
    """Minimal generating set, scanning degrees from the top downward.

    In degree d the part generated from above is the span of
    piece(d+1) * w_t*; new generators are the standard basis vectors of
    piece(d) that extend that span, taken in order.
    """
    if isinstance(mod, SubEModule):
        return _submodule_generators(mod)
    lo, hi = mod.degree_range()
    f = mod.field
    gens: list[tuple[int, list]] = []
    for d in range(hi, lo - 1, -1):
        n = mod.piece_dim(d)
        if n == 0:
            continue
        span = EchelonSpan(n)
        if d + 1 <= hi and mod.piece_dim(d + 1):
            for t in range(mod.dimW):
                for col in mod.action(t, d + 1).columns():
                    span.add(col)
                    if len(span) == n:
                        break
                if len(span) == n:
                    break
        for i in range(n):
            if len(span) == n:
                break
            e = [f.zero] * n
            e[i] = f.one
            if span.add(e):
                if d == hi and not mod.complete:
                    raise WindowTooNarrowError(
                        f"generator found at the window boundary d={d}; widen the window"
                    )
                gens.append((d, e))
    return MinimalGenerators(mod, gens)


def _submodule_generators(sub: SubEModule) -> MinimalGenerators:
    """Same scan for a submodule, done in ambient coordinates (no coordinate solves)."""
    amb = sub.ambient
    f = sub.field
    lo, hi = sub.degree_range()
    gens: list[tuple[int, list]] = []
    for d in range(hi, lo - 1, -1):
        basis = sub.bases.get(d, [])
        n = len(basis)
        if n == 0:
            continue
        span = EchelonSpan(amb.piece_dim(d))
        for v in sub.bases.get(d + 1, []):
            for t in range(amb.dimW):
                span.add(amb.right_mult_vector(v, d + 1, t))
            if len(span) == n:
                break
        for i, v in enumerate(basis):
            if len(span) == n:
                break
            if span.add(v):
                gens.append((d, [f.one if j == i else f.zero for j in range(n)]))
    return MinimalGenerators(sub, gens)


def generated_dims(mod: DegreewiseEModule, gens: MinimalGenerators) -> dict[int, int]:
    """Dimension of the submodule generated by ``gens`` in each degree (surjectivity check)."""
    lo, hi = mod.degree_range()
    by_deg: dict[int, list[list]] = {}
    for d, v in gens.generators:
        by_deg.setdefault(d, []).append(v)
    dims = {}
    prev: list[list] = []
    for d in range(hi, lo - 1, -1):
        n = mod.piece_dim(d)
        span = EchelonSpan(n)
        for v in prev:
            for t in range(mod.dimW):
                span.add(mod.action(t, d + 1).apply(v))
        for v in by_deg.get(d, []):
            span.add(v)
        dims[d] = len(span)
        prev = [row for row in _span_rows(span)]
    return dims


def _span_rows(span: EchelonSpan) -> list[list]:
    return [span._rows[c] for c in sorted(span._rows)]


def cover_map(sub: SubEModule, gens: MinimalGenerators) -> ExteriorMap:
    """The free cover  ⊕ Ê(dimW - deg) -> ambient  sending generators to their vectors."""
    amb = sub.ambient
    f = amb.field
    twists = tuple(gens.twists())
    source = FreeEModule(amb.dimW, twists, f)
    columns = []
    for d, coords in gens.generators:
        v = [f.zero] * amb.piece_dim(d)
        for c, bv in zip(coords, sub.bases[d]):
            if c != 0:
                for i, x in enumerate(bv):
                    if x != 0:
                        v[i] = v[i] + c * x
        columns.append(amb.vector_to_forms(v, d))
    entries = tuple(tuple(columns[j][k] for j in range(len(columns))) for k in range(amb.rank))
    return ExteriorMap(source, amb, entries)


def linear_form(coeffs: Sequence[Any]) -> dict:
    """sum_t coeffs[t] * w_t* as an exterior form."""
    return {1 << t: c for t, c in enumerate(coeffs) if c != 0}


def form_from_indices(indices: Sequence[int], coeff: Any = 1) -> dict:
    return {mask_of(indices): coeff}


__all__ = [
    "DegreewiseEModule",
    "ExteriorMap",
    "FreeEModule",
    "MinimalGenerators",
    "SubEModule",
    "cover_map",
    "e_minimal_generators",
    "form_from_indices",
    "generated_dims",
    "indices_of",
    "kernel_submodule",
    "linear_form",
    "popcount",
]
