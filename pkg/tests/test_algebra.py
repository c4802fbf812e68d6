from math import comb

import pytest

from oracles import h_builtin
from weylith.algebra import (
    ExteriorMap,
    FreeEModule,
    SheafSpec,
    bgg_term,
    cover_map,
    e_minimal_generators,
    generated_dims,
    kernel_submodule,
    koszul_kernel_module,
    parse_polynomial,
    parse_sheaf,
    realize,
)
from weylith.errors import InvalidInputError, ParseError, WindowTooNarrowError

BUILTINS = [
    SheafSpec.twist_sheaf(0, 3),
    SheafSpec.twist_sheaf(-2, 3),
    SheafSpec.twist_sheaf(1, 4),
    SheafSpec.omega(1, 3),
    SheafSpec.omega(2, 3),
    SheafSpec.omega(1, 4),
    SheafSpec.omega(2, 4),
    SheafSpec.veronese(2, 0),
    SheafSpec.veronese(2, -3),
    SheafSpec.veronese(3, 1),
]


def test_realize_examples():
    S = realize(SheafSpec.twist_sheaf(0, 3), (0, 4))
    assert [S.dim(k) for k in range(5)] == [comb(k + 2, 2) for k in range(5)]
    assert S.dim(2) == 6
    V = realize(SheafSpec.veronese(2, 0), (0, 4))
    assert [V.dim(k) for k in range(5)] == [2 * k + 1 for k in range(5)]
    O0 = realize(SheafSpec.omega(0, 3), (-2, 4))
    assert [O0.dim(k) for k in range(-2, 5)] == [S.dim(k) if k >= 0 else 0 for k in range(-2, 5)]


def test_window_is_enforced():
    S = realize(SheafSpec.twist_sheaf(0, 3), (0, 2))
    with pytest.raises(WindowTooNarrowError):
        S.dim(3)
    q = SheafSpec.quotient(["w0^3"], 3, regularity=2)
    with pytest.raises(WindowTooNarrowError):
        realize(q, (0, 2))


@pytest.mark.parametrize("spec", BUILTINS, ids=lambda s: s.label())
def test_builtin_pieces_match_closed_forms(spec):
    r = spec.regularity_bound()
    M = realize(spec, (r - 3, r + 4))
    for k in range(r, r + 5):
        assert M.dim(k) == h_builtin(spec, 0, k)


@pytest.mark.parametrize("spec", BUILTINS, ids=lambda s: s.label())
def test_smodule_actions_commute(spec):
    r = spec.regularity_bound()
    M = realize(spec, (r - 2, r + 4))
    for d in range(r - 2, r + 3):
        assert M.commutes(d)


def test_koszul_kernel_examples():
    K = koszul_kernel_module(1, 3, (0, 4))
    # internal degree k is H^0(Ω^1(1 + k)); degree 2 gives H^0(Ω^1(3)) = 8
    assert [K.dim(k) for k in range(4)] == [0, 3, 8, 15]
    top = koszul_kernel_module(2, 3, (0, 4))
    assert [top.dim(k) for k in range(5)] == [0, 1, 3, 6, 10]  # Ω^2(2) = O(-1)
    with pytest.raises(InvalidInputError):
        koszul_kernel_module(3, 3, (0, 2))


@pytest.mark.parametrize("a,dimW", [(1, 3), (2, 3), (1, 4), (2, 4), (3, 4)])
def test_koszul_kernel_is_killed_by_the_differential(a, dimW):
    K = koszul_kernel_module(a, dimW, (0, 3))
    for k in range(4):
        rows = K.koszul_rows(k)
        for v in K.kernel_vectors(k):
            assert all(sum(r[i] * v[i] for i in range(len(v))) == 0 for r in rows)


def test_bgg_term_examples():
    S = realize(SheafSpec.twist_sheaf(0, 3), (-2, 3))
    phi = bgg_term(S, 0)
    assert phi.source.twists == (0,) and phi.target.twists == (-1, -1, -1)
    assert [phi.entry(k, 0) for k in range(3)] == [{1: 1}, {2: 1}, {4: 1}]
    empty = bgg_term(S, -2)
    assert empty.source.rank == 0 and empty.is_zero()
    S1 = realize(SheafSpec.twist_sheaf(1, 3), (-3, 3))
    shifted = bgg_term(S1, -1)
    assert shifted.entries == phi.entries
    assert shifted.source.twists == (1,)


@pytest.mark.parametrize("spec", BUILTINS[:6], ids=lambda s: s.label())
def test_bgg_squares_to_zero(spec):
    r = spec.regularity_bound()
    M = realize(spec, (r - 1, r + 4))
    for p in range(r, r + 2):
        assert (bgg_term(M, p + 1) @ bgg_term(M, p)).is_zero()


def _check_e_module(mod):
    lo, hi = mod.degree_range()
    n = mod.dimW
    for d in range(lo + 2, hi + 1):
        for t in range(n):
            sq = mod.action(t, d - 1) @ mod.action(t, d)
            assert sq.is_zero()
            for u in range(t + 1, n):
                tu = mod.action(t, d - 1) @ mod.action(u, d)
                ut = mod.action(u, d - 1) @ mod.action(t, d)
                assert tu == -ut


@pytest.mark.parametrize("dimW", [2, 3, 4])
def test_free_e_modules_anticommute(dimW):
    _check_e_module(FreeEModule(dimW, (0, 1, -1)))


def test_kernel_submodule_is_an_e_module():
    S = realize(SheafSpec.twist_sheaf(0, 3), (-1, 3))
    K = kernel_submodule(bgg_term(S, 0))
    _check_e_module(K)


def test_minimal_generators_examples():
    F = FreeEModule(3, (2,))
    gens = e_minimal_generators(F)
    assert gens.multiplicities() == [(1, 1)] and gens.twists() == [2]
    assert e_minimal_generators(FreeEModule(3, ())).generators == []
    # kernel of Ê -> Ê(-1) (x) W for S at p = 0 is covered by Ê(3): h^2(O(-3)) = 1
    S = realize(SheafSpec.twist_sheaf(0, 3), (-1, 3))
    K = kernel_submodule(bgg_term(S, 0))
    g = e_minimal_generators(K)
    assert g.twists() == [3]
    cover = cover_map(K, g)
    assert (bgg_term(S, 0) @ cover).is_zero()
    dims = generated_dims(K, g)
    assert all(dims[d] == K.piece_dim(d) for d in dims)


def test_minimal_generators_reject_incomplete_windows():
    class Truncated(FreeEModule):
        complete = False

    with pytest.raises(WindowTooNarrowError):
        e_minimal_generators(Truncated(3, (0,)))


def test_exterior_map_composition_matches_slices():
    S = realize(SheafSpec.twist_sheaf(0, 3), (-1, 4))
    a, b = bgg_term(S, 0), bgg_term(S, 1)
    comp = b @ a
    for d in range(-2, 5):
        lhs = comp.slice_matrix(d)
        rhs = b.slice_matrix(d) @ a.slice_matrix(d)
        assert lhs == rhs


def test_exterior_map_homogeneity_check():
    src, tgt = FreeEModule(3, (1,)), FreeEModule(3, (0,))
    ExteriorMap(src, tgt, (({1: 1},),)).check_homogeneous()
    with pytest.raises(InvalidInputError):
        ExteriorMap(src, tgt, (({3: 1},),)).check_homogeneous()


# -- sheaf specs ---------------------------------------------------------------


def test_parse_short_forms():
    assert parse_sheaf("twist:-2", 3) == SheafSpec.twist_sheaf(-2, 3)
    assert parse_sheaf("omega:1", 4) == SheafSpec.omega(1, 4)
    assert parse_sheaf("veronese:3,1") == SheafSpec.veronese(3, 1)
    assert parse_sheaf('{"kind": "omega", "a": 2, "dimW": 4}') == SheafSpec.omega(2, 4)
    q = parse_sheaf("quotient:w0*w1 - w2^2", 3, regularity=1)
    assert q.generators == ("w0*w1 - w2^2",)


@pytest.mark.parametrize("text,dimW", [
    ("nope:1", 3), ("omega:7", 3), ("veronese:0", None), ("veronese:2", 4), ("twist:x", 3),
    ("omega:1", None), ("quotient:w0", 3), ("{bad json", 3),
])
def test_parse_rejects_bad_specs(text, dimW):
    with pytest.raises(InvalidInputError):
        parse_sheaf(text, dimW)


def test_parse_polynomial():
    assert dict(parse_polynomial("3*w0^2*w1 - w2^3", 3)) == {(2, 1, 0): 3, (0, 0, 3): -1}
    for bad in ("w0 + w1^2", "w0/2", "w3", "import os"):
        with pytest.raises(ParseError if bad != "w0 + w1^2" else InvalidInputError):
            SheafSpec.quotient([bad], 3, regularity=2)


def test_presentation_spec():
    # coker( S(-1) -> S ) by w0: the hyperplane w0 = 0, i.e. O of a P^1
    spec = SheafSpec.presentation([["w0"]], [0], [1], 3, regularity=0)
    M = realize(spec, (-1, 4))
    assert [M.dim(k) for k in range(5)] == [1, 2, 3, 4, 5]
    with pytest.raises(InvalidInputError):
        SheafSpec.presentation([["w0^2"]], [0], [1], 3, regularity=0)


def test_spec_dict_roundtrip():
    for spec in BUILTINS + [SheafSpec.quotient(["w0*w1"], 3, regularity=2, dsupp=1)]:
        assert SheafSpec.from_dict(spec.to_dict()) == spec


def test_default_regularities():
    assert SheafSpec.twist_sheaf(3, 3).regularity_bound() == -3
    assert SheafSpec.omega(0, 3).regularity_bound() == 0
    assert SheafSpec.omega(2, 4).regularity_bound() == 1
    # O_P1(-5) on the conic: need 2(r-1) - 5 >= -1, so r = 3
    assert SheafSpec.veronese(2, -5).regularity_bound() == 3
    assert SheafSpec.veronese(2, -6).regularity_bound() == 4
