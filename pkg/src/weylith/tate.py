"""Finite windows of the Tate resolution of a coherent sheaf on P(W).

For p >= r (the regularity bound) the term is Ê(-p) (x) M_p and the
differential comes straight from the BGG functor.  Below r the resolution is
grown one step at a time: take the kernel of the lowest known differential
and cover it minimally by a free E-module.  Everything is degreewise linear
algebra over the chosen field.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Any

from weylith import cache
from weylith.algebra.bgg import bgg_term
from weylith.algebra.exterior import (
    ExteriorMap,
    FreeEModule,
    cover_map,
    e_minimal_generators,
    kernel_submodule,
)
from weylith.algebra.sheaves import SheafSpec, default_window, realize
from weylith.errors import (
    CorruptedSegmentError,
    InvalidInputError,
    InvariantViolation,
    RegularityError,
)
from weylith.kernel.field import QQ, field_from_name, scalar_to_str
from weylith.kernel.linalg import rank_of_rows
from weylith.kernel.wedge import ext_from_vector

FORMAT_VERSION = 1


@dataclass(frozen=True)
class TateSegment:
    """Terms T^p for p in [p_lo, p_hi] and differentials d^p : T^p -> T^{p+1} for p < p_hi."""

    spec: SheafSpec
    p_lo: int
    p_hi: int
    regularity: int
    terms: dict  # p -> FreeEModule
    maps: dict  # p -> ExteriorMap
    field: Any = QQ

    @property
    def dimW(self) -> int:
        return self.spec.dimW

    def term(self, p: int) -> FreeEModule:
        return self.terms[p]

    def summands(self, p: int) -> list[tuple[int, int]]:
        return self.terms[p].summands()

    def differential(self, p: int) -> ExteriorMap:
        return self.maps[p]

    def restrict(self, p_lo: int, p_hi: int) -> "TateSegment":
        if p_lo < self.p_lo or p_hi > self.p_hi:
            raise InvalidInputError("restriction must lie inside the segment")
        return TateSegment(
            self.spec, p_lo, p_hi, self.regularity,
            {p: t for p, t in self.terms.items() if p_lo <= p <= p_hi},
            {p: m for p, m in self.maps.items() if p_lo <= p < p_hi},
            self.field,
        )


class _TateChain:
    """Growable Tate resolution of one sheaf; shared by all segment requests."""

    def __init__(self, spec: SheafSpec, field):
        self.spec = spec
        self.field = field
        self.r = spec.regularity_bound()
        self.module = None
        self.window: tuple[int, int] | None = None
        self.terms: dict[int, FreeEModule] = {}
        self.maps: dict[int, ExteriorMap] = {}
        self.verified = False
        self.lock = threading.Lock()

    def _need_module(self, lo: int, hi: int):
        if self.window is None or lo < self.window[0] or hi > self.window[1]:
            wlo, whi = default_window(self.spec, lo, self.r)
            whi = max(whi, hi)
            if self.window is not None:
                wlo, whi = min(wlo, self.window[0]), max(whi, self.window[1])
            self.module = realize(self.spec, (wlo, whi), self.field)
            self.window = (wlo, whi)
        return self.module

    def _forward(self, p: int) -> ExteriorMap:
        if p not in self.maps:
            M = self._need_module(p, p + 1)
            phi = bgg_term(M, p)
            self.maps[p] = phi
            self.terms.setdefault(p, phi.source)
            self.terms.setdefault(p + 1, phi.target)
        return self.maps[p]

    def _verify(self) -> None:
        """R(M) must be exact at every p in [r+1, r+dimW]."""
        if self.verified:
            return
        r, n = self.r, self.spec.dimW
        for p in range(r, r + n + 1):
            self._forward(p)
        for p in range(r + 1, r + n + 1):
            if not is_exact_at(self.maps[p - 1], self.maps[p]):
                raise RegularityError(
                    p, f"regularity bound r={r} rejected: the BGG complex of M is not exact at p={p}"
                )
        self.verified = True

    def ensure(self, p_lo: int, p_hi: int) -> None:
        with self.lock:
            self._verify()
            for p in range(self.r, max(p_hi, self.r + 1)):
                self._forward(p)
            q = min(self.terms)
            while q > p_lo:
                kernel = kernel_submodule(self.maps[q])
                gens = e_minimal_generators(kernel)
                cover = cover_map(kernel, gens)
                self.maps[q - 1] = cover
                self.terms[q - 1] = cover.source
                q -= 1

    def segment(self, p_lo: int, p_hi: int) -> TateSegment:
        self.ensure(p_lo, p_hi)
        return TateSegment(
            self.spec, p_lo, p_hi, self.r,
            {p: self.terms[p] for p in range(p_lo, p_hi + 1)},
            {p: self.maps[p] for p in range(p_lo, p_hi)},
            self.field,
        )


@lru_cache(maxsize=64)
def _chain(spec: SheafSpec, field_name: str) -> _TateChain:
    return _TateChain(spec, field_from_name(field_name))


def is_exact_at(before: ExteriorMap, after: ExteriorMap) -> bool:
    """ker(after) == im(before) on every degree slice of the middle term."""
    mid = after.source
    lo, hi = mid.degree_range()
    for d in range(lo, hi + 1):
        n = mid.piece_dim(d)
        if n == 0:
            continue
        r_after = rank_of_rows(after.slice_rows(d), n)
        r_before = rank_of_rows(before.slice_rows(d), before.source.piece_dim(d))
        if r_after + r_before != n:
            return False
    return True


def tate_segment(
    spec: SheafSpec,
    p_lo: int,
    p_hi: int,
    field=QQ,
    cache_dir: str | Path | None = None,
    check: bool = True,
) -> TateSegment:
    """The window [p_lo, p_hi] of the Tate resolution of ``spec``.

    With ``cache_dir`` set, segments are looked up and stored on disk keyed
    by the content of (spec, window, field, format version).
    """
    if p_lo > p_hi:
        raise InvalidInputError(f"empty Tate window [{p_lo}, {p_hi}]")
    key = None
    if cache_dir is not None:
        key = cache.cache_key(
            {"kind": "tate", "spec": spec.to_dict(), "window": [p_lo, p_hi],
             "field": field.name, "format": FORMAT_VERSION}
        )
        doc = cache.load(Path(cache_dir), key)
        if doc is not None:
            try:
                cached = segment_from_json(doc)
            except (KeyError, TypeError, ValueError, InvalidInputError):
                cached = None  # unreadable entry: recompute and overwrite
            if cached is not None:
                failures = segment_failures(cached) if check else []
                if failures:
                    raise CorruptedSegmentError(f"cache entry {key} fails verification: " + "; ".join(failures))
                return cached
    seg = _chain(spec, field.name).segment(p_lo, p_hi)
    if check:
        failures = segment_failures(seg)
        if failures:
            raise InvariantViolation("; ".join(failures))
    if key is not None:
        cache.store(Path(cache_dir), key, segment_to_json(seg))
    return seg


def segment_failures(seg: TateSegment) -> list[str]:
    """Convention-independent invariants: homogeneity, d∘d = 0, minimality, regularity gate."""
    out = []
    for p, phi in sorted(seg.maps.items()):
        try:
            phi.check_homogeneous()
        except InvalidInputError as exc:
            out.append(f"d^{p}: {exc}")
        if not phi.is_minimal():
            out.append(f"d^{p} has a unit entry")
        if p + 1 in seg.maps and not (seg.maps[p + 1] @ phi).is_zero():
            out.append(f"d^{p + 1} o d^{p} != 0")
    for p, term in seg.terms.items():
        if p >= seg.regularity and set(term.twists) - {-p}:
            out.append(f"T^{p} has summands other than Ê({-p}) above the regularity bound")
    return out


# -- cohomology ---------------------------------------------------------------


@dataclass(frozen=True)
class CohomologyTable:
    """h[i][k] = dim H^i(F(k)) for every (i, k) with i + k in the segment window."""

    dimW: int
    p_lo: int
    p_hi: int
    values: dict  # (i, k) -> int

    def h(self, i: int, k: int) -> int:
        if not 0 <= i < self.dimW:
            return 0
        if not self.p_lo <= i + k <= self.p_hi:
            raise InvalidInputError(f"h^{i}(F({k})) lies outside the computed window")
        return self.values.get((i, k), 0)

    def twists(self, i: int) -> range:
        return range(self.p_lo - i, self.p_hi - i + 1)

    def row(self, i: int) -> dict[int, int]:
        return {k: self.h(i, k) for k in self.twists(i)}

    def to_json(self) -> dict:
        return {
            "dimW": self.dimW,
            "window": [self.p_lo, self.p_hi],
            "h": [
                {"i": i, "values": [{"k": k, "dim": str(self.h(i, k))} for k in self.twists(i)]}
                for i in range(self.dimW)
            ],
        }


def cohomology_table(seg: TateSegment) -> CohomologyTable:
    """Read h^i(F(p - i)) off the multiplicity of Ê(i - p) in T^p."""
    N = seg.dimW - 1
    values: dict[tuple[int, int], int] = {}
    for p in range(seg.p_lo, seg.p_hi + 1):
        for j in seg.terms[p].twists:
            i, k = p + j, -j
            if not 0 <= i <= N:
                raise CorruptedSegmentError(f"T^{p} contains Ê({j}), which would be h^{i}")
            values[(i, k)] = values.get((i, k), 0) + 1
    return CohomologyTable(seg.dimW, seg.p_lo, seg.p_hi, values)


def extract_component(seg: TateSegment, p: int, a: int, b: int) -> list[list[dict]]:
    """The (Ê(a) -> Ê(b)) block of d^p as a matrix of exterior forms; empty if absent."""
    if p not in seg.maps:
        return []
    return seg.maps[p].block(a, b)


# -- serialization ------------------------------------------------------------


def segment_to_json(seg: TateSegment) -> dict:
    n = seg.dimW
    maps = []
    for p in range(seg.p_lo, seg.p_hi):
        phi = seg.maps[p]
        blocks = []
        for a, b, _ in phi.blocks():
            if 0 <= a - b <= n:
                vecs = phi.block_vectors(a, b)
                blocks.append({
                    "a": a, "b": b,
                    "entries": [[[scalar_to_str(c) for c in v] for v in row] for row in vecs],
                })
        maps.append({"p": p, "blocks": blocks})
    return {
        "format": FORMAT_VERSION,
        "spec": seg.spec.to_dict(),
        "field": seg.field.name,
        "window": [seg.p_lo, seg.p_hi],
        "regularity": seg.regularity,
        "terms": [
            {"p": p, "summands": [{"twist": j, "multiplicity": m} for j, m in seg.terms[p].summands()]}
            for p in range(seg.p_lo, seg.p_hi + 1)
        ],
        "maps": maps,
    }


def segment_from_json(doc: dict) -> TateSegment:
    if doc.get("format") != FORMAT_VERSION:
        raise InvalidInputError(f"unsupported segment format {doc.get('format')!r}")
    spec = SheafSpec.from_dict(doc["spec"])
    field = field_from_name(doc["field"])
    p_lo, p_hi = doc["window"]
    terms = {}
    for t in doc["terms"]:
        twists = [s["twist"] for s in t["summands"] for _ in range(s["multiplicity"])]
        terms[t["p"]] = FreeEModule(spec.dimW, tuple(twists), field)
    maps = {}
    for m in doc["maps"]:
        p = m["p"]
        src, tgt = terms[p], terms[p + 1]
        entries = [[{} for _ in range(src.rank)] for _ in range(tgt.rank)]
        src_start = _group_starts(src)
        tgt_start = _group_starts(tgt)
        for blk in m["blocks"]:
            a, b = blk["a"], blk["b"]
            s0, t0 = src_start[a], tgt_start[b]
            for r, row in enumerate(blk["entries"]):
                for c, vec in enumerate(row):
                    entries[t0 + r][s0 + c] = ext_from_vector([field(x) for x in vec], spec.dimW, a - b)
        maps[p] = ExteriorMap(src, tgt, tuple(tuple(r) for r in entries))
    return TateSegment(spec, p_lo, p_hi, doc["regularity"], terms, maps, field)


def _group_starts(mod: FreeEModule) -> dict[int, int]:
    starts, pos = {}, 0
    for a, m in mod.summands():
        if a in starts:
            raise CorruptedSegmentError(f"twist {a} appears in two separate groups")
        starts[a] = pos
        pos += m
    return starts
