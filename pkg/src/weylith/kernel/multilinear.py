"""The two multilinear maps behind the W_ell functor.

* ``comultiply``: /\\^a K^l -> /\\^b K^l (x) /\\^(a-b) K^l,
  v_I |-> sum sgn(J, J') v_J (x) v_J'.
* ``cauchy_embed``: /\\^k K^l (x) /\\^k W* -> Sym^k(K^l (x) W*),
  sending v_S (x) w_T to the generic minor det(x_{s_i, t_j}).
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations

from weylith.errors import InvalidInputError
from weylith.kernel.field import QQ
from weylith.kernel.linalg import DenseMatrix
from weylith.kernel.poly import PolyA, PolyRing, monomials_of_degree
from weylith.kernel.wedge import indices_of, splittings, wedge_basis, word_sign


def comultiply(a: int, b: int, ell: int, field=QQ) -> DenseMatrix:
    """Matrix of the comultiplication in wedge bases.

    Rows are pairs (J, J') with J running over ``wedge_basis(ell, b)`` (outer)
    and J' over ``wedge_basis(ell, a - b)`` (inner); columns are I in
    ``wedge_basis(ell, a)``.
    """
    if b < 0 or b > a:
        raise InvalidInputError(f"comultiplication needs 0 <= b <= a, got a={a}, b={b}")
    src = wedge_basis(ell, a)
    left = wedge_basis(ell, b)
    right = wedge_basis(ell, a - b)
    row_of = {(J, Jp): i for i, (J, Jp) in enumerate((J, Jp) for J in left for Jp in right)}
    entries = [[field.zero] * len(src) for _ in range(len(left) * len(right))]
    for col, I in enumerate(src):
        for J, Jp, sg in splittings(I, b):
            entries[row_of[(J, Jp)]][col] = field(sg)
    return DenseMatrix.from_rows(entries, len(src), field) if entries else DenseMatrix.zeros(0, len(src), field)


@lru_cache(maxsize=None)
def _minor_terms(S: tuple[int, ...], T: tuple[int, ...], ell: int, dimW: int) -> tuple:
    """Terms (exponent tuple, sign) of det(x_{S_i, T_j})."""
    nvars = ell * dimW
    terms: dict[tuple[int, ...], int] = {}
    for perm in permutations(range(len(T))):
        e = [0] * nvars
        for i, j in enumerate(perm):
            e[S[i] * dimW + T[j]] += 1
        key = tuple(e)
        terms[key] = terms.get(key, 0) + word_sign(perm)
    return tuple((k, v) for k, v in terms.items() if v)


def generic_minor(S, T, ring: PolyRing) -> PolyA:
    """det(x_{s,t})_{s in S, t in T} as an element of the ring."""
    S, T = tuple(S), tuple(T)
    if len(S) != len(T):
        raise InvalidInputError("minor needs equally many rows and columns")
    if any(not 0 <= s < ring.ell for s in S) or any(not 0 <= t < ring.dimW for t in T):
        raise InvalidInputError("minor index outside the ring's variable grid")
    f = ring.field
    return PolyA(ring, {e: f(c) for e, c in _minor_terms(S, T, ring.ell, ring.dimW)})


def cauchy_embed(k: int, ell: int, dimW: int, field=QQ) -> DenseMatrix:
    """Matrix of the Cauchy embedding.

    Columns: pairs (S, T), S in ``wedge_basis(ell, k)`` outer, T in
    ``wedge_basis(dimW, k)`` inner.  Rows: degree-k monomials of A_ell in
    graded-lex order.  The map is injective, so the rank equals the number of
    columns.
    """
    if k < 0:
        raise InvalidInputError("negative wedge degree")
    nvars = ell * dimW
    monos = monomials_of_degree(nvars, k)
    row_of = {m: i for i, m in enumerate(monos)}
    pairs = [(S, T) for S in wedge_basis(ell, k) for T in wedge_basis(dimW, k)]
    cols = []
    for S, T in pairs:
        col = [field.zero] * len(monos)
        for e, c in _minor_terms(S, T, ell, dimW):
            col[row_of[e]] = field(c)
        cols.append(col)
    return DenseMatrix.from_columns(cols, len(monos), field)


def cauchy_apply(S, form: dict, ring: PolyRing) -> PolyA:
    """Image of v_S (x) form, where ``form`` is an exterior form {mask: coeff} of degree |S|."""
    out: dict = {}
    f = ring.field
    S = tuple(S)
    for mask, c in form.items():
        T = indices_of(mask)
        if len(T) != len(S):
            raise InvalidInputError("wedge degrees of the two factors differ")
        for e, sg in _minor_terms(S, T, ring.ell, ring.dimW):
            v = f(c) * sg
            old = out.get(e)
            out[e] = v if old is None else old + v
    return PolyA(ring, out)
