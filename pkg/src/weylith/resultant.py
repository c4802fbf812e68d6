"""Specializing Weyman complexes at points of W^ell, and resultants of binary forms.

A point is an ell x dimW array f with x_{s,t} |-> f[s][t].  For the Veronese
pipeline W is the space of binary forms of degree d with basis
w_t = x^t y^(d-t), so row s of f is the coefficient list (low to high in x)
of a binary form.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Any, Sequence

from weylith.algebra.sheaves import SheafSpec
from weylith.errors import InvalidInputError, InvariantViolation
from weylith.kernel.field import QQ, scalar_to_str
from weylith.kernel.linalg import DenseMatrix, determinant, rank_of_rows
from weylith.kernel.poly import PolyA, PolyRing, poly_det
from weylith.kernel.wedge import word_sign
from weylith.weyman import WeymanComplex, trial_rng, verify_complex, weyman_complex


@dataclass(frozen=True)
class SpecPoint:
    f: tuple[tuple[Any, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "f", tuple(tuple(row) for row in self.f))
        widths = {len(row) for row in self.f}
        if len(widths) > 1:
            raise InvalidInputError("ragged point array")

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.f), len(self.f[0]) if self.f else 0)


@dataclass(frozen=True)
class SpecializedComplex:
    ranks: dict  # p -> rank
    maps: dict  # p -> DenseMatrix

    def products_vanish(self) -> bool:
        for p, m in self.maps.items():
            nxt = self.maps.get(p + 1)
            if nxt is not None and m.rows and nxt.rows and m.cols and not (nxt @ m).is_zero():
                return False
        return True


def specialize(wc: WeymanComplex, point: SpecPoint | Sequence[Sequence[Any]], field=None) -> SpecializedComplex:
    pt = point if isinstance(point, SpecPoint) else SpecPoint(point)
    if pt.shape != (wc.ell, wc.spec.dimW):
        raise InvalidInputError(f"point has shape {pt.shape}, the complex needs ({wc.ell}, {wc.spec.dimW})")
    field = field or wc.ring.field
    ranks = {p: t.rank for p, t in wc.terms.items()}
    maps = {}
    for p, m in wc.maps.items():
        vals = m.evaluate(pt.f, field)
        maps[p] = DenseMatrix.from_rows(vals, m.source.rank, field) if vals else DenseMatrix.zeros(0, m.source.rank, field)
    sc = SpecializedComplex(ranks, maps)
    if not sc.products_vanish():
        raise InvariantViolation("specialized differentials do not compose to zero")
    return sc


def cohomology_dims(sc: SpecializedComplex) -> dict[int, int]:
    """dim ker d^p - rank d^{p-1} at every position."""
    if not sc.products_vanish():
        raise InvariantViolation("input is not a complex: consecutive products are nonzero")
    out = {}
    for p, n in sorted(sc.ranks.items()):
        out_rank = sc.maps[p].rank() if p in sc.maps and sc.maps[p].rows and n else 0
        in_map = sc.maps.get(p - 1)
        in_rank = in_map.rank() if in_map is not None and in_map.rows and in_map.cols else 0
        out[p] = n - out_rank - in_rank
    return out


def two_term_position(wc: WeymanComplex) -> int:
    """The p with W^p -> W^{p+1} the only nonzero terms; their ranks must match."""
    nz = wc.nonzero_positions()
    if len(nz) != 2 or nz[1] != nz[0] + 1:
        raise InvalidInputError(f"expected two adjacent nonzero terms, found positions {nz}")
    p = nz[0]
    if wc.rank(p) != wc.rank(p + 1):
        raise InvalidInputError(f"ranks {wc.rank(p)} and {wc.rank(p + 1)} differ")
    return p


def det_two_term(wc: WeymanComplex) -> PolyA:
    """Determinant of the square differential of a two-term minimal complex."""
    p = two_term_position(wc)
    rep = verify_complex(wc)
    if not rep.checks.get("minimal", False):
        raise InvariantViolation("differential has constant entries; the complex is not minimal")
    m = wc.maps[p]
    return poly_det([list(r) for r in m.rows], wc.ring)


def _check_forms(f: Sequence, g: Sequence) -> int:
    if len(f) != len(g) or len(f) < 2:
        raise InvalidInputError("binary forms must have the same degree d >= 1")
    return len(f) - 1


def sylvester_rows(f: Sequence, g: Sequence) -> list[list]:
    """2d x 2d Sylvester matrix; f, g coefficient lists low to high in x."""
    d = _check_forms(f, g)
    hi_f, hi_g = list(reversed(f)), list(reversed(g))
    zero = f[0] - f[0]
    rows = []
    for coeffs in (hi_f, hi_g):
        for shift in range(d):
            row = [zero] * (2 * d)
            row[shift:shift + d + 1] = coeffs
            rows.append(row)
    return rows


def sylvester_resultant(f: Sequence, g: Sequence, field=QQ):
    f = [field(x) for x in f]
    g = [field(x) for x in g]
    rows = sylvester_rows(f, g)
    return determinant(DenseMatrix.from_rows(rows, len(rows), field))


def symbolic_sylvester(d: int, ring: PolyRing) -> PolyA:
    """Sylvester determinant with f_t = x_{0,t}, g_t = x_{1,t}, expanded by the Leibniz formula."""
    if ring.ell != 2 or ring.dimW != d + 1:
        raise InvalidInputError("symbolic Sylvester needs the ring with ell=2, dimW=d+1")
    f = [ring.var(0, t) for t in range(d + 1)]
    g = [ring.var(1, t) for t in range(d + 1)]
    rows = sylvester_rows(f, g)
    n = 2 * d
    total = ring.zero()
    for perm in permutations(range(n)):
        term = ring.one()
        for i, j in enumerate(perm):
            x = rows[i][j]
            if x.is_zero():
                term = None
                break
            term = term * x
        if term is not None:
            total = total + term if word_sign(perm) > 0 else total - term
    return total


@dataclass(frozen=True)
class ResultantPipeline:
    """The ell = 2 Weyman complex of the degree-d rational normal curve and its determinant."""

    d: int
    complex: WeymanComplex
    det: PolyA
    unit: Fraction  # det = unit * Sylvester, fixed at the witness point (x^d, y^d)

    def matrix_at(self, f: Sequence, g: Sequence, field=QQ) -> DenseMatrix:
        p = two_term_position(self.complex)
        sc = specialize(self.complex, [list(f), list(g)], field)
        return sc.maps[p]

    def value(self, f: Sequence, g: Sequence, field=QQ):
        """Sylvester-normalized resultant computed from the complex."""
        return self.det.evaluate([list(f), list(g)], field) / field(self.unit)


def witness_point(d: int) -> tuple[list[int], list[int]]:
    """f = x^d, g = y^d, whose Sylvester resultant is 1."""
    return [0] * d + [1], [1] + [0] * d


@lru_cache(maxsize=8)
def resultant_pipeline(d: int) -> ResultantPipeline:
    if d < 2:
        raise InvalidInputError("the ell = 2 pipeline needs d >= 2 (ell <= dim W - 1 = d)")
    wc = weyman_complex(SheafSpec.veronese(d, 0), 2)
    det = det_two_term(wc)
    f, g = witness_point(d)
    syl = sylvester_resultant(f, g)
    val = det.evaluate([f, g])
    if syl == 0 or val == 0:
        raise InvariantViolation("witness point lies on the resultant locus")
    return ResultantPipeline(d, wc, det, Fraction(val) / Fraction(syl))


@dataclass
class VanishingReport:
    d: int
    field: str
    trials: int
    seed: int
    singular: int = 0
    disagreements: list[dict] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.disagreements

    def to_dict(self) -> dict:
        return {
            "d": self.d, "field": self.field, "trials": self.trials, "seed": self.seed,
            "singular": self.singular, "passed": self.passed, "disagreements": self.disagreements,
        }


def _mul_binary(u: Sequence, v: Sequence) -> list:
    out = [u[0] - u[0]] * (len(u) + len(v) - 1)
    for i, a in enumerate(u):
        for j, b in enumerate(v):
            out[i + j] = out[i + j] + a * b
    return out


def random_pair(d: int, rng, field=QQ, common_factor: bool = False, bound: int = 5) -> tuple[list, list]:
    """Random binary d-forms; with ``common_factor`` both share a random linear factor."""

    def coeff():
        if field is QQ:
            return field(rng.randint(-bound, bound))
        return field(rng.randrange(field.p))

    if not common_factor:
        return [coeff() for _ in range(d + 1)], [coeff() for _ in range(d + 1)]
    lin = [coeff(), coeff()]
    while lin[0] == 0 and lin[1] == 0:
        lin = [coeff(), coeff()]
    f = _mul_binary(lin, [coeff() for _ in range(d)])
    g = _mul_binary(lin, [coeff() for _ in range(d)])
    return f, g


def resultant_vanishing_probe(d: int, trials: int, field=QQ, seed: int = 0) -> VanishingReport:
    """Singular specialized differential  <=>  Sylvester resultant zero, on random pairs.

    Odd trials force a common linear factor so both sides of the biconditional are exercised.
    """
    pipe = resultant_pipeline(d)
    p = two_term_position(pipe.complex)
    rep = VanishingReport(d, field.name, trials, seed)
    for trial in range(trials):
        rng = trial_rng(seed, trial)
        f, g = random_pair(d, rng, field, common_factor=bool(trial % 2))
        m = specialize(pipe.complex, [f, g], field).maps[p]
        singular = rank_of_rows(m.to_rows(), m.cols) < m.cols
        res_zero = sylvester_resultant(f, g, field) == 0
        rep.singular += singular
        if singular != res_zero:
            rep.disagreements.append({
                "trial": trial,
                "f": [scalar_to_str(x) for x in f],
                "g": [scalar_to_str(x) for x in g],
                "singular": singular,
                "resultant_zero": res_zero,
            })
    return rep
