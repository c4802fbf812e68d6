"""The functor W_ell from free E-modules to free graded A_ell-modules, and Weyman complexes.

W_ell(Ê(j)) = /\\^j K^ell (x) A_ell(-j).  A map phi: Ê(a) -> Ê(b) given by the
form eps of degree a - b goes to the matrix with entry

    sgn(J, J') * Psi(v_{J'} (x) eps)

from basis vector v_I (x) 1 to v_J (x) 1, where I = J u J' is the
comultiplication split and Psi turns v_S (x) w_T into the generic minor
det(x_{s,t}).  Bases are generator-major: every Tate generator contributes the
lex-ordered wedge basis of /\\^j K^ell.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field as dc_field
from math import comb

from weylith.algebra.exterior import ExteriorMap, FreeEModule
from weylith.algebra.sheaves import SheafSpec, realize
from weylith.errors import ExcludedCaseError, InvalidInputError
from weylith.kernel.field import QQ
from weylith.kernel.multilinear import cauchy_apply
from weylith.kernel.poly import PolyA, PolyRing, poly_matmul
from weylith.kernel.wedge import splittings, wedge_basis, wedge_position
from weylith.tate import CohomologyTable, TateSegment, cohomology_table, segment_to_json, tate_segment

FORMAT_VERSION = 1


@dataclass(frozen=True)
class AFreeModule:
    """Direct sum of /\\^j K^ell (x) A_ell(-j), one summand per Tate generator."""

    ell: int
    twists: tuple[int, ...]  # wedge degree j of each kept Tate generator

    def __post_init__(self):
        if any(not 0 <= j <= self.ell for j in self.twists):
            raise InvalidInputError("wedge degree outside [0, ell] in an A_ell-module")

    @property
    def rank(self) -> int:
        return sum(comb(self.ell, j) for j in self.twists)

    def basis(self) -> list[tuple[int, tuple[int, ...]]]:
        return [(g, I) for g, j in enumerate(self.twists) for I in wedge_basis(self.ell, j)]

    def degrees(self) -> list[int]:
        """Degree of each basis generator (generator of A(-j) sits in degree j)."""
        return [j for j in self.twists for _ in wedge_basis(self.ell, j)]

    def summands(self) -> list[tuple[int, int]]:
        """(wedge degree j, number of Tate generators) groups in basis order."""
        out: list[list[int]] = []
        for j in self.twists:
            if out and out[-1][0] == j:
                out[-1][1] += 1
            else:
                out.append([j, 1])
        return [(j, m) for j, m in out]

    def offsets(self) -> list[int]:
        out, pos = [], 0
        for j in self.twists:
            out.append(pos)
            pos += comb(self.ell, j)
        return out


def w_on_object(j: int, mult: int, ell: int) -> AFreeModule:
    """W_ell(Ê(j)^mult); the zero module when j is outside [0, ell]."""
    if ell < 0:
        raise InvalidInputError("ell must be nonnegative")
    if mult < 0:
        raise InvalidInputError("negative multiplicity")
    if not 0 <= j <= ell:
        return AFreeModule(ell, ())
    return AFreeModule(ell, (j,) * mult)


@dataclass(frozen=True, eq=False)
class AMap:
    """Degree-0 map of free A_ell-modules; ``rows[r][c]`` goes from source basis c to target basis r."""

    source: AFreeModule
    target: AFreeModule
    ring: PolyRing
    rows: tuple

    def entry(self, r: int, c: int) -> PolyA:
        return self.rows[r][c]

    def is_zero(self) -> bool:
        return all(x.is_zero() for row in self.rows for x in row)

    def __matmul__(self, other: "AMap") -> "AMap":
        if other.target != self.source:
            raise InvalidInputError("maps are not composable")
        prod = poly_matmul([list(r) for r in self.rows], [list(r) for r in other.rows], self.ring)
        if not self.rows:
            prod = []
        return AMap(other.source, self.target, self.ring, tuple(tuple(r) for r in prod))

    def blocks(self) -> list[tuple[int, int, list[list[PolyA]]]]:
        """(a, b, entries) per pair of source/target wedge-degree groups."""
        out = []
        tpos = 0
        for b, mb in self.target.summands():
            th = comb(self.source.ell, b) * mb
            spos = 0
            for a, ma in self.source.summands():
                sh = comb(self.source.ell, a) * ma
                out.append((a, b, [list(self.rows[tpos + r][spos:spos + sh]) for r in range(th)]))
                spos += sh
            tpos += th
        return out

    def evaluate(self, point, field=None) -> list[list]:
        return [[x.evaluate(point, field) for x in row] for row in self.rows]


def w_on_map(phi: ExteriorMap, ell: int, ring: PolyRing | None = None) -> AMap:
    """Apply W_ell to a degree-0 map of free E-modules.

    Tate generators whose twist lies outside [0, ell] are dropped on both sides.
    """
    if ell < 0:
        raise InvalidInputError("ell must be nonnegative")
    ring = ring or PolyRing(ell, phi.dimW, phi.field)
    if ring.ell != ell or ring.dimW != phi.dimW:
        raise InvalidInputError("polynomial ring does not match ell and dim W")
    phi.check_homogeneous()
    src_keep = [g for g, a in enumerate(phi.source.twists) if 0 <= a <= ell]
    tgt_keep = [k for k, b in enumerate(phi.target.twists) if 0 <= b <= ell]
    source = AFreeModule(ell, tuple(phi.source.twists[g] for g in src_keep))
    target = AFreeModule(ell, tuple(phi.target.twists[k] for k in tgt_keep))
    rows = [[ring.zero() for _ in range(source.rank)] for _ in range(target.rank)]
    s_off = source.offsets()
    t_off = target.offsets()
    for tk, k in enumerate(tgt_keep):
        b = phi.target.twists[k]
        jpos = wedge_position(ell, b)
        for sg, g in enumerate(src_keep):
            a = phi.source.twists[g]
            eps = phi.entries[k][g]
            if not eps or a < b:
                continue
            for ci, I in enumerate(wedge_basis(ell, a)):
                col = s_off[sg] + ci
                if a == b:
                    rows[t_off[tk] + ci][col] = ring.const(eps.get(0, 0))
                    continue
                for J, Jp, sign in splittings(I, b):
                    val = cauchy_apply(Jp, eps, ring)
                    rows[t_off[tk] + jpos[J]][col] = val if sign > 0 else -val
    return AMap(source, target, ring, tuple(tuple(r) for r in rows))


# -- complexes ----------------------------------------------------------------


@dataclass(frozen=True)
class WeymanComplex:
    """W_ell applied to a Tate segment.

    ``terms`` covers p in [-ell, N]; the theory says every term outside
    [-ell, d_supp] vanishes, which :func:`verify_complex` checks.
    """

    spec: SheafSpec
    ell: int
    dsupp: int
    terms: dict  # p -> AFreeModule
    maps: dict  # p -> AMap, d^p : W^p -> W^{p+1}
    ring: PolyRing
    segment: TateSegment
    table: CohomologyTable
    provenance: dict = dc_field(default_factory=dict)

    @property
    def p_range(self) -> tuple[int, int]:
        return (min(self.terms), max(self.terms))

    def nonzero_positions(self) -> list[int]:
        return [p for p in sorted(self.terms) if self.terms[p].rank]

    def rank(self, p: int) -> int:
        return self.terms[p].rank if p in self.terms else 0

    def summand_list(self, p: int) -> list[dict]:
        """(i, A-twist, rank) for each cohomology group feeding W^p."""
        out = []
        for j, m in self.terms[p].summands():
            out.append({"i": p + j, "twist": -j, "rank": comb(self.ell, j) * m})
        return out

    def to_json(self) -> dict:
        maps = []
        for p in sorted(self.maps):
            blocks = [
                {"a": a, "b": b, "entries": [[x.to_json() for x in row] for row in ent]}
                for a, b, ent in self.maps[p].blocks()
            ]
            maps.append({"p": p, "blocks": blocks})
        return {
            "format": FORMAT_VERSION,
            "ell": self.ell,
            "dimW": self.spec.dimW,
            "dsupp": self.dsupp,
            "terms": [
                {"p": p, "rank": self.terms[p].rank, "summands": self.summand_list(p)}
                for p in sorted(self.terms) if self.terms[p].rank
            ],
            "maps": [m for m in maps if any(b["entries"] and b["entries"][0] for b in m["blocks"])],
            "provenance": self.provenance,
        }


def check_ell(ell: int, dimW: int) -> None:
    if not 1 <= ell <= dimW - 1:
        raise ExcludedCaseError(
            f"ell={ell} is outside 1 <= ell <= dim W - 1 = {dimW - 1}; the construction "
            f"is excluded when ell = dim W (the incidence variety is no longer a projective bundle)"
        )


def support_dimension(spec: SheafSpec, field=QQ) -> int:
    """Degree of the Hilbert polynomial, read from dim M_k for N+2 values k > r.

    Returns -1 for the zero sheaf.  A ``dsupp`` set on the SheafSpec wins.
    """
    if spec.dsupp is not None:
        return spec.dsupp
    r = spec.regularity_bound()
    n = spec.dimW
    # the Hilbert function agrees with the polynomial strictly above the regularity
    M = realize(spec, (r, r + n + 2), field)
    vals = [M.dim(k) for k in range(r + 1, r + n + 2)]
    deg = -1
    for order in range(n):
        if any(vals):
            deg = order
        vals = [b - a for a, b in zip(vals, vals[1:])]
    return deg


def weyman_complex(spec: SheafSpec, ell: int, field=QQ, cache_dir=None) -> WeymanComplex:
    check_ell(ell, spec.dimW)
    N = spec.dimW - 1
    seg = tate_segment(spec, -ell, N, field, cache_dir=cache_dir)
    table = cohomology_table(seg)
    ring = PolyRing(ell, spec.dimW, field)
    terms: dict[int, AFreeModule] = {}
    maps: dict[int, AMap] = {}
    for p in range(-ell, N + 1):
        twists = tuple(j for j in seg.terms[p].twists if 0 <= j <= ell)
        terms[p] = AFreeModule(ell, twists)
    for p in range(-ell, N):
        maps[p] = w_on_map(seg.maps[p], ell, ring)
    seg_hash = hashlib.sha256(
        json.dumps(segment_to_json(seg), sort_keys=True, separators=(",", ":")).encode()
    ).hexdigest()
    provenance = {"spec": spec.to_dict(), "field": field.name, "segment_sha256": seg_hash}
    return WeymanComplex(spec, ell, support_dimension(spec, field), terms, maps, ring, seg, table, provenance)


@dataclass
class VerificationReport:
    checks: dict[str, bool] = dc_field(default_factory=dict)
    failures: list[str] = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def record(self, name: str, ok: bool, detail: str | None = None) -> None:
        self.checks[name] = self.checks.get(name, True) and ok
        if not ok and detail:
            self.failures.append(f"{name}: {detail}")

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checks": dict(sorted(self.checks.items())), "failures": self.failures}


def verify_complex(wc: WeymanComplex) -> VerificationReport:
    """d∘d = 0, minimality, support bounds, homogeneity and the term formula."""
    rep = VerificationReport()
    for name in ("composition_zero", "minimal", "support", "homogeneous", "term_formula"):
        rep.checks[name] = True
    for p, m in sorted(wc.maps.items()):
        sdeg = m.source.degrees()
        tdeg = m.target.degrees()
        for r, row in enumerate(m.rows):
            for c, x in enumerate(row):
                if x.is_zero():
                    continue
                if not x.is_homogeneous(sdeg[c] - tdeg[r]):
                    rep.record("homogeneous", False, f"d^{p} entry ({r},{c}) is not homogeneous of degree {sdeg[c] - tdeg[r]}")
                if x.constant_term() != 0:
                    rep.record("minimal", False, f"d^{p} entry ({r},{c}) has a constant term")
        if p + 1 in wc.maps and m.source.rank and wc.maps[p + 1].target.rank:
            if not (wc.maps[p + 1] @ m).is_zero():
                rep.record("composition_zero", False, f"d^{p + 1} o d^{p} != 0")
    for p, t in wc.terms.items():
        if t.rank and not -wc.ell <= p <= wc.dsupp:
            rep.record("support", False, f"W^{p} has rank {t.rank} outside [-{wc.ell}, {wc.dsupp}]")
        expected = sum(
            comb(wc.ell, i - p) * wc.table.h(i, p - i)
            for i in range(wc.spec.dimW)
            if 0 <= i - p <= wc.ell
        )
        if expected != t.rank:
            rep.record("term_formula", False, f"W^{p} has rank {t.rank}, cohomology predicts {expected}")
    return rep


# -- injectivity probe --------------------------------------------------------


def trial_rng(seed: int, trial: int) -> random.Random:
    """Independent deterministic stream for one trial."""
    digest = hashlib.sha256(f"{seed}:{trial}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


@dataclass
class ProbeReport:
    passed: bool
    trials: int
    seed: int
    failures: list[dict] = dc_field(default_factory=list)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "trials": self.trials, "seed": self.seed, "failures": self.failures}


def random_exterior_map(a: int, b: int, dimW: int, rng: random.Random, field=QQ, max_mult: int = 2) -> ExteriorMap:
    """Random nonzero phi: Ê(a)^h -> Ê(b)^h' with small integer coefficients."""
    h = rng.randint(1, max_mult)
    hp = rng.randint(1, max_mult)
    src = FreeEModule(dimW, (a,) * h, field)
    tgt = FreeEModule(dimW, (b,) * hp, field)
    basis = wedge_basis(dimW, a - b)
    while True:
        entries = []
        for _ in range(hp):
            row = []
            for _ in range(h):
                form = {}
                for T in basis:
                    c = rng.choice((0, 0, 1, -1, 2, -3))
                    if c:
                        form[sum(1 << t for t in T)] = field(c)
                row.append(form)
            entries.append(tuple(row))
        phi = ExteriorMap(src, tgt, tuple(entries))
        if not phi.is_zero():
            return phi


def functor_injectivity_probe(a: int, b: int, ell: int, trials: int, dimW: int | None = None, seed: int = 0, field=QQ) -> ProbeReport:
    """W_ell(phi) != 0 for random nonzero phi: Ê(a)^h -> Ê(b)^h'."""
    if not 0 <= b <= a <= ell:
        raise InvalidInputError(f"probe needs 0 <= b <= a <= ell, got a={a}, b={b}, ell={ell}")
    dimW = dimW if dimW is not None else max(ell + 1, a - b + 1, 2)
    if a - b > dimW:
        raise InvalidInputError("a - b exceeds dim W: every such phi is zero")
    ring = PolyRing(ell, dimW, field)
    failures = []
    for trial in range(trials):
        phi = random_exterior_map(a, b, dimW, trial_rng(seed, trial), field)
        if w_on_map(phi, ell, ring).is_zero():
            failures.append({"trial": trial, "entries": [[{str(m): str(c) for m, c in e.items()} for e in row] for row in phi.entries]})
    return ProbeReport(not failures, trials, seed, failures)
