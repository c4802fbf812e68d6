"""The polynomial ring A_ell = Sym(K^ell (x) W*) with variables x_{s,t}.

Variable (s, t) is e_s (x) w_t*; its position in an exponent tuple is
``s * dimW + t``.  Monomials are ordered graded-lexicographically with
x_{0,0} > x_{0,1} > ... > x_{ell-1,dimW-1}.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Any, Iterable, Sequence

from weylith.errors import InvalidInputError
from weylith.kernel.field import QQ, scalar_to_str


def monomial_key(exps: Sequence[int]) -> tuple:
    return (sum(exps), tuple(-e for e in exps))


@lru_cache(maxsize=None)
def monomials_of_degree(nvars: int, k: int) -> tuple[tuple[int, ...], ...]:
    """All exponent vectors of total degree k, in graded-lex order."""
    if k < 0:
        return ()
    out = []
    for combo in combinations_with_replacement(range(nvars), k):
        e = [0] * nvars
        for v in combo:
            e[v] += 1
        out.append(tuple(e))
    out.sort(key=monomial_key)
    return tuple(out)


class PolyRing:
    def __init__(self, ell: int, dimW: int, field=QQ):
        # ell = 0 is allowed: the ring without variables is the ground field
        if ell < 0 or dimW < 1:
            raise InvalidInputError(f"bad polynomial ring shape ell={ell}, dimW={dimW}")
        self.ell = ell
        self.dimW = dimW
        self.nvars = ell * dimW
        self.field = field

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and (self.ell, self.dimW, self.field) == (other.ell, other.dimW, other.field)
        )

    def __hash__(self):
        return hash((self.ell, self.dimW, self.field))

    def __repr__(self):
        return f"PolyRing(ell={self.ell}, dimW={self.dimW}, field={self.field!r})"

    def var_index(self, s: int, t: int) -> int:
        if not (0 <= s < self.ell and 0 <= t < self.dimW):
            raise InvalidInputError(f"variable x_{{{s},{t}}} outside ring {self!r}")
        return s * self.dimW + t

    def var(self, s: int, t: int) -> "PolyA":
        e = [0] * self.nvars
        e[self.var_index(s, t)] = 1
        return PolyA(self, {tuple(e): self.field.one})

    def const(self, c: Any) -> "PolyA":
        c = self.field(c)
        if c == 0:
            return self.zero()
        return PolyA(self, {(0,) * self.nvars: c})

    def zero(self) -> "PolyA":
        return PolyA(self, {})

    def one(self) -> "PolyA":
        return self.const(1)

    def monomials(self, k: int) -> tuple[tuple[int, ...], ...]:
        return monomials_of_degree(self.nvars, k)

    def monomial(self, exps: Sequence[int], coeff: Any = 1) -> "PolyA":
        if len(exps) != self.nvars:
            raise InvalidInputError("exponent vector length does not match the ring")
        return PolyA(self, {tuple(exps): self.field(coeff)})

    def var_name(self, v: int) -> str:
        return f"x{v // self.dimW}_{v % self.dimW}"


class PolyA:
    """Exact polynomial; ``terms`` maps exponent tuples to nonzero coefficients."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = {k: v for k, v in terms.items() if v != 0}

    def _check(self, other: "PolyA"):
        if self.ring.nvars != other.ring.nvars or self.ring.dimW != other.ring.dimW:
            raise InvalidInputError(f"variable-shape mismatch: {self.ring!r} vs {other.ring!r}")

    def _lift(self, other: Any) -> "PolyA":
        if isinstance(other, PolyA):
            self._check(other)
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            c = out.get(k)
            out[k] = v if c is None else c + v
        return PolyA(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return PolyA(self.ring, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, PolyA):
            c = self.ring.field(other)
            if c == 0:
                return self.ring.zero()
            return PolyA(self.ring, {k: v * c for k, v in self.terms.items()})
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = out.get(e)
                v = c1 * c2
                out[e] = v if c is None else c + v
        return PolyA(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise InvalidInputError("negative power")
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, PolyA):
            return self.ring.nvars == other.ring.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.const(other) if other != 0 else not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {sum(e) for e in self.terms}

    def degree(self) -> int | None:
        d = self.degrees()
        return max(d) if d else None

    def is_homogeneous(self, k: int | None = None) -> bool:
        d = self.degrees()
        if not d:
            return True
        if len(d) > 1:
            return False
        return k is None or d == {k}

    def constant_term(self):
        return self.terms.get((0,) * self.ring.nvars, self.ring.field.zero)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Any]]:
        """Highest degree first; lex-largest exponent vector first within a degree."""
        return sorted(self.terms.items(), key=lambda kv: (-sum(kv[0]), tuple(-e for e in kv[0])))

    def evaluate(self, point: Sequence[Sequence[Any]], field=None):
        """Substitute x_{s,t} -> point[s][t]; a ring homomorphism A_ell -> K."""
        ring = self.ring
        if len(point) != ring.ell or any(len(row) != ring.dimW for row in point):
            raise InvalidInputError(f"point shape does not match ({ring.ell}, {ring.dimW})")
        field = field or ring.field
        flat = [field(x) for row in point for x in row]
        total = field.zero
        for e, c in self.terms.items():
            v = field(c)
            for i, k in enumerate(e):
                if k:
                    v = v * flat[i] ** k
            total = total + v
        return total

    def homogeneous_part(self, k: int) -> "PolyA":
        return PolyA(self.ring, {e: c for e, c in self.terms.items() if sum(e) == k})

    def to_json(self) -> list:
        return [[scalar_to_str(c), list(e)] for e, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, ring: PolyRing, data: Iterable) -> "PolyA":
        terms = {}
        for coeff, exps in data:
            if len(exps) != ring.nvars:
                raise InvalidInputError("exponent vector length does not match the ring")
            terms[tuple(int(x) for x in exps)] = ring.field(coeff)
        return cls(ring, terms)

    def __repr__(self):
        return f"PolyA({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                self.ring.var_name(v) + (f"^{k}" if k > 1 else "") for v, k in enumerate(e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def poly_matmul(A: Sequence[Sequence[PolyA]], B: Sequence[Sequence[PolyA]], ring: PolyRing) -> list[list[PolyA]]:
    """Product of polynomial matrices given as lists of rows."""
    if not A or not B:
        ncols = len(B[0]) if B else 0
        return [[ring.zero() for _ in range(ncols)] for _ in A]
    inner = len(B)
    if any(len(r) != inner for r in A):
        raise InvalidInputError("shape mismatch in polynomial matrix product")
    ncols = len(B[0])
    out = []
    for row in A:
        nz = [(k, x) for k, x in enumerate(row) if x.terms]
        out_row = []
        for j in range(ncols):
            s = ring.zero()
            for k, x in nz:
                y = B[k][j]
                if y.terms:
                    s = s + x * y
            out_row.append(s)
        out.append(out_row)
    return out


def poly_det(M: Sequence[Sequence[PolyA]], ring: PolyRing) -> PolyA:
    """Determinant by Laplace expansion along rows with memoised column minors.

    Cost is O(n 2^n) polynomial products, fine for n <= 12.
    """
    n = len(M)
    if any(len(r) != n for r in M):
        raise InvalidInputError("determinant of a non-square matrix")
    if n == 0:
        return ring.one()
    # minor[cols] = det of rows (n - |cols|).. n-1 restricted to column set cols
    memo: dict[int, PolyA] = {0: ring.one()}

    def minor(colmask: int, depth: int) -> PolyA:
        if colmask in memo:
            return memo[colmask]
        row = n - depth
        total = ring.zero()
        sign = 1
        for j in range(n):
            if not colmask >> j & 1:
                continue
            x = M[row][j]
            if x.terms:
                sub = minor(colmask & ~(1 << j), depth - 1)
                if sub.terms:
                    term = x * sub
                    total = total + term if sign > 0 else total - term
            sign = -sign
        memo[colmask] = total
        return total

    return minor((1 << n) - 1, n)
