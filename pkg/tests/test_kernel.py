from fractions import Fraction
from itertools import combinations

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from weylith.errors import InvalidInputError
from weylith.kernel import (
    QQ,
    DenseMatrix,
    PolyRing,
    PrimeField,
    cauchy_embed,
    comultiply,
    determinant,
    field_from_name,
    generic_minor,
    kernel_basis,
    poly_det,
    rref,
    shuffle_sign,
    wedge_basis,
)
from weylith.kernel.wedge import ext_mul, mono_mul, splittings


def M(rows):
    return DenseMatrix.from_rows(rows)


# -- fields ------------------------------------------------------------------


def test_rationals_lowest_terms():
    x = QQ("6/4")
    assert (x.numerator, x.denominator) == (3, 2)
    assert QQ(Fraction(-2, -4)) == Fraction(1, 2)


def test_prime_field_residues():
    F = PrimeField(101)
    assert F(-1).value == 100
    assert F(Fraction(1, 2)) * 2 == F.one
    assert field_from_name("GF(101)") == F
    assert field_from_name("QQ") is QQ
    with pytest.raises(InvalidInputError):
        PrimeField(100)


# -- rref / kernel -------------------------------------------------------------


def test_rref_examples():
    I = M([[1, 0], [0, 1]])
    assert rref(I) == (I, (0, 1))
    r, piv = rref(M([[2, 4], [1, 2]]))
    assert r.to_rows() == [[1, 2], [0, 0]] and piv == (0,)
    z = DenseMatrix.zeros(3, 3)
    assert rref(z) == (z, ())


def test_kernel_examples():
    k = kernel_basis(M([[1, 2]]))
    assert k.to_rows() == [[-2], [1]]
    assert kernel_basis(M([[1, 2], [3, 4]])).cols == 0
    assert kernel_basis(DenseMatrix.zeros(2, 2)) == DenseMatrix.identity(2)


small_ints = st.integers(min_value=-3, max_value=3)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(1, 6), st.data())
def test_kernel_rank_nullity(rows, cols, data):
    entries = data.draw(st.lists(st.lists(small_ints, min_size=cols, max_size=cols), min_size=rows, max_size=rows))
    m = M(entries)
    k = kernel_basis(m)
    assert (m @ k).is_zero() if k.cols else True
    assert m.rank() + k.cols == cols
    assert k.rank() == k.cols


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.data())
def test_determinant_matches_sympy(n, data):
    entries = data.draw(st.lists(st.lists(small_ints, min_size=n, max_size=n), min_size=n, max_size=n))
    assert determinant(M(entries)) == sympy.Matrix(entries).det()


# -- wedge signs ---------------------------------------------------------------


def test_shuffle_sign_examples():
    assert shuffle_sign((0,), (1,)) == 1
    assert shuffle_sign((1,), (0,)) == -1
    assert shuffle_sign((0, 2), (1,)) == -1
    with pytest.raises(InvalidInputError):
        shuffle_sign((0, 1), (1,))
    with pytest.raises(InvalidInputError):
        shuffle_sign((0,), (2,))


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 7), st.data())
def test_shuffle_sign_swap_rule(a, data):
    I = tuple(sorted(data.draw(st.sets(st.integers(0, a - 1), max_size=a))))
    Ip = tuple(x for x in range(a) if x not in I)
    assert shuffle_sign(I, Ip) * shuffle_sign(Ip, I) == (-1) ** (len(I) * len(Ip))


def test_exterior_multiplication_anticommutes():
    for s in range(4):
        for t in range(4):
            assert mono_mul(1 << s, 1 << t) == (0 if s == t else (1 if s < t else -1))
    x = {0b001: 1, 0b010: 2}
    assert ext_mul(x, x) == {}


# -- comultiplication ----------------------------------------------------------


def test_comultiply_examples():
    assert comultiply(2, 2, 3) == DenseMatrix.identity(3)
    # e0^e1 |-> e0 (x) e1 - e1 (x) e0 ; rows (J, J') = (0,0),(0,1),(1,0),(1,1)
    assert comultiply(2, 1, 2).column(0) == [0, 1, -1, 0]
    assert comultiply(3, 1, 2).cols == 0
    with pytest.raises(InvalidInputError):
        comultiply(1, 2, 3)


def _split_dict(a, b, ell):
    """Comultiplication as {I: {(J, J'): coeff}} read off the matrix."""
    m = comultiply(a, b, ell)
    rows = [(J, Jp) for J in wedge_basis(ell, b) for Jp in wedge_basis(ell, a - b)]
    out = {}
    for c, I in enumerate(wedge_basis(ell, a)):
        out[I] = {rows[r]: m[r, c] for r in range(m.rows) if m[r, c] != 0}
    return out


@pytest.mark.parametrize("ell", [1, 2, 3, 4])
def test_comultiply_coassociative(ell):
    for a in range(ell + 1):
        for b in range(a + 1):
            for c in range(b + 1):
                ab = _split_dict(a, b, ell)
                bc = _split_dict(b, c, ell)
                ac = _split_dict(a, c, ell)
                cb = _split_dict(a - c, b - c, ell)
                for I in wedge_basis(ell, a):
                    left, right = {}, {}
                    for (J, Jp), x in ab[I].items():
                        for (K, Kp), y in bc[J].items():
                            left[(K, Kp, Jp)] = left.get((K, Kp, Jp), 0) + x * y
                    for (K, L), x in ac[I].items():
                        for (Kp, Jp), y in cb[L].items():
                            right[(K, Kp, Jp)] = right.get((K, Kp, Jp), 0) + x * y
                    assert {k: v for k, v in left.items() if v} == {k: v for k, v in right.items() if v}


def test_splittings_partition_the_index():
    for J, Jp, sg in splittings((0, 2, 3), 1):
        assert sorted(J + Jp) == [0, 2, 3] and sg in (1, -1)


# -- Cauchy embedding ----------------------------------------------------------


def test_cauchy_examples():
    R = PolyRing(2, 3)
    for s in range(2):
        for t in range(3):
            assert generic_minor((s,), (t,), R) == R.var(s, t)
    assert generic_minor((0, 1), (0, 1), R) == R.var(0, 0) * R.var(1, 1) - R.var(0, 1) * R.var(1, 0)
    assert cauchy_embed(2, 1, 3).cols == 0


@pytest.mark.parametrize("ell,dimW", [(e, w) for e in range(1, 5) for w in range(1, 5)])
def test_cauchy_injective(ell, dimW):
    for k in range(0, min(ell, dimW, 3) + 1):
        m = cauchy_embed(k, ell, dimW)
        assert m.rank() == m.cols == len(wedge_basis(ell, k)) * len(wedge_basis(dimW, k))


# -- polynomials -----------------------------------------------------------------


def test_poly_examples():
    R = PolyRing(2, 2)
    x00, x11 = R.var(0, 0), R.var(1, 1)
    assert x00 * 1 == x00
    assert (x00 + x11) ** 2 == x00 ** 2 + 2 * x00 * x11 + x11 ** 2
    minor = generic_minor((0, 1), (0, 1), R)
    assert minor.evaluate([[1, 0], [0, 1]]) == 1
    with pytest.raises(InvalidInputError):
        x00 + PolyRing(1, 3).var(0, 0)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(small_ints, min_size=2, max_size=2), min_size=2, max_size=2), st.data())
def test_evaluation_is_a_ring_map(point, data):
    R = PolyRing(2, 2)
    vars_ = [R.var(s, t) for s in range(2) for t in range(2)]

    def rand_poly():
        p = R.zero()
        for _ in range(data.draw(st.integers(0, 3))):
            term = R.const(data.draw(small_ints))
            for v in data.draw(st.lists(st.sampled_from(vars_), max_size=2)):
                term = term * v
            p = p + term
        return p

    p, q = rand_poly(), rand_poly()
    assert (p * q).evaluate(point) == p.evaluate(point) * q.evaluate(point)
    assert (p + q).evaluate(point) == p.evaluate(point) + q.evaluate(point)


def test_poly_det_matches_generic_minor():
    R = PolyRing(3, 3)
    X = [[R.var(s, t) for t in range(3)] for s in range(3)]
    assert poly_det(X, R) == generic_minor((0, 1, 2), (0, 1, 2), R)


def test_poly_json_roundtrip():
    R = PolyRing(2, 3)
    p = R.var(0, 1) * R.var(1, 2) * Fraction(3, 2) - R.var(0, 0) ** 2
    from weylith.kernel import PolyA

    assert PolyA.from_json(R, p.to_json()) == p
    assert p.to_json() == [["-1", [2, 0, 0, 0, 0, 0]], ["3/2", [0, 1, 0, 0, 0, 1]]]


def test_wedge_basis_order_is_lexicographic():
    assert wedge_basis(4, 2) == tuple(combinations(range(4), 2))
