"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Every check is exact (rational or modular arithmetic), so the only pinned
tolerances are the wall-clock budgets below.
"""

import time
from fractions import Fraction
from math import comb

import pytest

from oracles import h_builtin
from weylith import cli
from weylith.algebra import FreeEModule, SheafSpec, realize
from weylith.errors import ExcludedCaseError
from weylith.kernel import QQ, PolyRing, PrimeField, cauchy_embed, comultiply, wedge_basis
from weylith.kernel.wedge import ext_mul
from weylith.resultant import (
    resultant_pipeline,
    resultant_vanishing_probe,
    sylvester_resultant,
    symbolic_sylvester,
)
from weylith.weyman import functor_injectivity_probe, trial_rng, verify_complex, weyman_complex

OMEGA_BUDGET_S = 60.0
RESULTANT_BUDGET_S = 300.0
PROBE_TRIALS = 100
RANDOM_POINTS_D3 = 200
VANISHING_PAIRS = 500
PRIME = 2 ** 31 - 1


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail

    return emit


def _sweep():
    for dimW in (3, 4):
        for ell in range(1, dimW):
            yield dimW, ell


def _concentrated(wc, rank, twist):
    nz = wc.nonzero_positions()
    if rank == 0:
        return nz == []
    return nz == [0] and wc.rank(0) == rank and [j for j, _ in wc.terms[0].summands()] == [twist]


def test_criterion_1_omega_concentration(report):
    start = time.perf_counter()
    bad = []
    for dimW, ell in _sweep():
        for a in range(dimW):
            wc = weyman_complex(SheafSpec.omega(a, dimW), ell)
            if not _concentrated(wc, comb(ell, a), a):
                bad.append((dimW, ell, a, {p: wc.rank(p) for p in wc.nonzero_positions()}))
    elapsed = time.perf_counter() - start
    report(1, not bad and elapsed < OMEGA_BUDGET_S,
           f"omega(a) sweep, dimW in (3,4): {len(bad)} mismatches {bad[:3]}, {elapsed:.1f}s (< {OMEGA_BUDGET_S:.0f}s)")


def test_criterion_2_structure_sheaf(report):
    bad = []
    for dimW, ell in _sweep():
        wc = weyman_complex(SheafSpec.twist_sheaf(0, dimW), ell)
        if not _concentrated(wc, 1, 0):
            bad.append((dimW, ell))
    report(2, not bad, f"twist 0 gives A at p=0 for every (dimW, ell): mismatches {bad}")


def _suite():
    for dimW, ell in _sweep():
        for d in (-3, -1, 0, 1, 2):
            yield SheafSpec.twist_sheaf(d, dimW), ell
        for a in range(dimW):
            yield SheafSpec.omega(a, dimW), ell
        yield SheafSpec.quotient(["w0", "w1"], dimW, regularity=0), ell
        yield SheafSpec.quotient(["w0^2 + w1^2 + w2^2"], dimW, regularity=1), ell
    for d, e in ((2, 0), (2, -3), (2, 1), (3, 0), (3, -2), (3, 1)):
        for ell in range(1, d + 1):
            yield SheafSpec.veronese(d, e), ell


def test_criterion_3_complex_minimal_support(report):
    bad, count = [], 0
    for spec, ell in _suite():
        rep = verify_complex(weyman_complex(spec, ell))
        count += 1
        failed = [c for c in ("composition_zero", "minimal", "support") if not rep.checks[c]]
        if failed:
            bad.append((spec.label(), ell, failed))
    report(3, not bad, f"{count} complexes checked for d∘d=0, no constants, support in [-ell, dsupp]: failures {bad}")


def _builtins():
    for dimW, ell in _sweep():
        for d in range(-4, 3):
            yield SheafSpec.twist_sheaf(d, dimW), ell
        for a in range(dimW):
            yield SheafSpec.omega(a, dimW), ell
    for d, e in ((2, 0), (2, -3), (2, 1), (3, 0), (3, -2), (3, 1), (3, -5)):
        for ell in range(1, d + 1):
            yield SheafSpec.veronese(d, e), ell


def test_criterion_4_term_formula(report):
    bad, count = [], 0
    for spec, ell in _builtins():
        wc = weyman_complex(spec, ell)
        N = spec.dimW - 1
        for p in range(-ell - 2, N + 3):
            expected = sum(comb(ell, i - p) * h_builtin(spec, i, p - i) for i in range(max(p, 0), N + 1))
            got = wc.rank(p) if p in wc.terms else 0
            count += 1
            if got != expected:
                bad.append((spec.label(), ell, p, got, expected))
    report(4, not bad, f"{count} term ranks against closed-form cohomology: mismatches {bad[:5]}")


def test_criterion_5_functor_injectivity(report):
    bad, cases = [], 0
    for ell in range(0, 4):
        for a in range(ell + 1):
            for b in range(a + 1):
                rep = functor_injectivity_probe(a, b, ell, PROBE_TRIALS, seed=ell * 100 + a * 10 + b)
                cases += 1
                if not rep.passed:
                    bad.append((a, b, ell, len(rep.failures)))
    report(5, not bad, f"{cases} (a,b,ell) cases x {PROBE_TRIALS} random nonzero maps: zero-image cases {bad}")


def test_criterion_6_resultant(report):
    start = time.perf_counter()
    p2 = resultant_pipeline(2)
    symbolic = p2.det == symbolic_sylvester(2, PolyRing(2, 3)) * p2.unit
    p3 = resultant_pipeline(3)
    mismatches = 0
    for trial in range(RANDOM_POINTS_D3):
        rng = trial_rng(6, trial)
        f = [Fraction(rng.randint(-20, 20), rng.randint(1, 9)) for _ in range(4)]
        g = [Fraction(rng.randint(-20, 20), rng.randint(1, 9)) for _ in range(4)]
        if p3.det.evaluate([f, g]) != p3.unit * sylvester_resultant(f, g):
            mismatches += 1
    elapsed = time.perf_counter() - start
    ok = symbolic and abs(p2.unit) == 1 and abs(p3.unit) == 1 and not mismatches and elapsed < RESULTANT_BUDGET_S
    report(6, ok,
           f"d=2 symbolic identity {symbolic} (sign {p2.unit}), d=3 {RANDOM_POINTS_D3} rational points "
           f"{mismatches} mismatches (sign {p3.unit}), {elapsed:.1f}s (< {RESULTANT_BUDGET_S:.0f}s)")


def test_criterion_7_vanishing_biconditional(report):
    parts, ok = [], True
    for d in (2, 3):
        for field in (QQ, PrimeField(PRIME)):
            rep = resultant_vanishing_probe(d, VANISHING_PAIRS, field, seed=7)
            ok &= rep.passed and 0 < rep.singular < rep.trials
            parts.append(f"d={d} {field.name}: {len(rep.disagreements)} disagreements, {rep.singular} singular")
    report(7, ok, f"{VANISHING_PAIRS} pairs each; " + "; ".join(parts))


def _split(a, b, ell):
    m = comultiply(a, b, ell)
    rows = [(J, Jp) for J in wedge_basis(ell, b) for Jp in wedge_basis(ell, a - b)]
    return {I: {rows[r]: m[r, c] for r in range(m.rows) if m[r, c] != 0} for c, I in enumerate(wedge_basis(ell, a))}


def _coassociative(ell, a):
    for b in range(a + 1):
        for c in range(b + 1):
            ab, bc, ac, cb = _split(a, b, ell), _split(b, c, ell), _split(a, c, ell), _split(a - c, b - c, ell)
            for I in wedge_basis(ell, a):
                left, right = {}, {}
                for (J, Jp), x in ab[I].items():
                    for (K, Kp), y in bc[J].items():
                        left[(K, Kp, Jp)] = left.get((K, Kp, Jp), 0) + x * y
                for (K, L), x in ac[I].items():
                    for (Kp, Jp), y in cb[L].items():
                        right[(K, Kp, Jp)] = right.get((K, Kp, Jp), 0) + x * y
                if {k: v for k, v in left.items() if v} != {k: v for k, v in right.items() if v}:
                    return False
    return True


def _anticommutative(dimW):
    # monomials of the exterior algebra, and the action on a free module
    for s in range(dimW):
        for t in range(dimW):
            es, et = {1 << s: 1}, {1 << t: 1}
            for m in range(1 << dimW):
                x = {m: 1}
                if ext_mul(ext_mul(x, es), et) != {k: -v for k, v in ext_mul(ext_mul(x, et), es).items()}:
                    return False
    mod = FreeEModule(dimW, (0, 1, 2))
    lo, hi = mod.degree_range()
    for d in range(lo + 2, hi + 1):
        for t in range(dimW):
            if not (mod.action(t, d - 1) @ mod.action(t, d)).is_zero():
                return False
            for u in range(t + 1, dimW):
                if mod.action(t, d - 1) @ mod.action(u, d) != -(mod.action(u, d - 1) @ mod.action(t, d)):
                    return False
    return True


def _commutative(dimW):
    specs = [SheafSpec.twist_sheaf(d, dimW) for d in (-1, 0, 2)]
    specs += [SheafSpec.omega(a, dimW) for a in range(dimW)]
    if dimW >= 3:
        specs.append(SheafSpec.veronese(dimW - 1, 0))
    for spec in specs:
        r = spec.regularity_bound()
        M = realize(spec, (r - 1, r + 4))
        if not all(M.commutes(d) for d in range(r - 1, r + 3)):
            return False
    return True


def test_criterion_8_algebraic_sanity(report):
    failed = []
    for dimW in range(1, 5):
        if not _anticommutative(dimW):
            failed.append(("anticommutativity", dimW))
        if dimW >= 2 and not _commutative(dimW):
            failed.append(("commutativity", dimW))
    for ell in range(1, 5):
        for a in range(ell + 1):
            if not _coassociative(ell, a):
                failed.append(("coassociativity", ell, a))
        for dimW in range(1, 5):
            for k in range(min(ell, dimW) + 1):
                m = cauchy_embed(k, ell, dimW)
                if m.rank() != m.cols:
                    failed.append(("cauchy", k, ell, dimW))
    report(8, not failed, f"brute force over a<=4, ell<=4, dimW<=4: failures {failed}")


def test_criterion_9_excluded_case(report, capsys):
    results = []
    for dimW in (2, 3, 4):
        code = cli.run(["weyman", "--sheaf", "twist:0", "--dimW", str(dimW), "--ell", str(dimW), "--no-cache"])
        out, _ = capsys.readouterr()
        try:
            weyman_complex(SheafSpec.twist_sheaf(0, dimW), dimW)
            raised = False
        except ExcludedCaseError:
            raised = True
        results.append(code == 3 and out == "" and raised)
    report(9, all(results), f"ell = dimW for dimW in (2,3,4): exit code 3 with no complex emitted {results}")
