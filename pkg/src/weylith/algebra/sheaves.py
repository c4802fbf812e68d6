"""Sheaf specifications and their realization as degreewise S-modules."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from math import ceil
from typing import Any

from weylith.algebra.smodule import (
    DegreewiseSModule,
    KoszulKernelModule,
    PresentedModule,
    VeroneseModule,
)
from weylith.errors import InvalidInputError, ParseError
from weylith.kernel.field import QQ

KINDS = ("twist", "veronese", "omega", "quotient", "presentation")


@dataclass(frozen=True)
class SheafSpec:
    """A coherent sheaf on P(W) together with a regularity bound.

    kinds:
      twist         O(degree)
      veronese      pushforward of O_{P^1}(twist) along the degree-``degree``
                    rational normal curve; dimW = degree + 1
      omega         Ω^a(a)
      quotient      sheafification of S / (generators)
      presentation  sheafification of coker(matrix), generator degrees
                    ``row_degrees``, relation degrees ``col_degrees``
    """

    kind: str
    dimW: int
    degree: int = 0
    twist: int = 0
    a: int = 0
    generators: tuple[str, ...] = ()
    matrix: tuple[tuple[str, ...], ...] = ()
    row_degrees: tuple[int, ...] = ()
    col_degrees: tuple[int, ...] = ()
    regularity: int | None = None
    dsupp: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "matrix", tuple(tuple(r) for r in self.matrix))
        object.__setattr__(self, "row_degrees", tuple(int(x) for x in self.row_degrees))
        object.__setattr__(self, "col_degrees", tuple(int(x) for x in self.col_degrees))
        self.validate()

    @property
    def N(self) -> int:
        return self.dimW - 1

    def validate(self) -> None:
        if self.kind not in KINDS:
            raise InvalidInputError(f"unknown sheaf kind {self.kind!r}; expected one of {KINDS}")
        if self.dimW < 2:
            raise InvalidInputError(f"dim W must be at least 2, got {self.dimW}")
        if self.kind == "veronese":
            if self.degree < 1:
                raise InvalidInputError("veronese degree must be >= 1")
            if self.dimW != self.degree + 1:
                raise InvalidInputError(f"veronese({self.degree}) lives in dim W = {self.degree + 1}, not {self.dimW}")
        if self.kind == "omega" and not 0 <= self.a <= self.N:
            raise InvalidInputError(f"omega index a={self.a} outside [0, {self.N}]")
        if self.kind in ("quotient", "presentation"):
            if self.regularity is None:
                raise InvalidInputError(f"{self.kind} sheaves need an explicit regularity bound")
        if self.kind == "presentation":
            if len(self.matrix) != len(self.row_degrees):
                raise InvalidInputError("presentation needs one row degree per matrix row")
            if any(len(r) != len(self.col_degrees) for r in self.matrix):
                raise InvalidInputError("presentation needs one column degree per matrix column")
        if self.kind in ("quotient", "presentation"):
            relations(self)  # parses and checks homogeneity
        if self.dsupp is not None and not 0 <= self.dsupp <= self.N:
            raise InvalidInputError(f"dsupp={self.dsupp} outside [0, {self.N}]")

    # -- regularity ----------------------------------------------------------

    def regularity_bound(self) -> int:
        """The supplied bound, or the known regularity of a builtin."""
        if self.regularity is not None:
            return self.regularity
        if self.kind == "twist":
            return -self.degree
        if self.kind == "veronese":
            # H^1(O_{P^1}(deg*(r-1) + twist)) = 0  iff  deg*(r-1) + twist >= -1
            return 1 + ceil((-1 - self.twist) / self.degree)
        if self.kind == "omega":
            return 1 if self.a > 0 else 0
        raise InvalidInputError(f"no default regularity for {self.kind}")

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        d = {"kind": self.kind, "dimW": self.dimW}
        if self.kind == "twist":
            d["degree"] = self.degree
        elif self.kind == "veronese":
            d["degree"] = self.degree
            d["twist"] = self.twist
        elif self.kind == "omega":
            d["a"] = self.a
        elif self.kind == "quotient":
            d["generators"] = list(self.generators)
        else:
            d["matrix"] = [list(r) for r in self.matrix]
            d["row_degrees"] = list(self.row_degrees)
            d["col_degrees"] = list(self.col_degrees)
        if self.regularity is not None:
            d["regularity"] = self.regularity
        if self.dsupp is not None:
            d["dsupp"] = self.dsupp
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "SheafSpec":
        allowed = set(cls.__dataclass_fields__)
        unknown = set(d) - allowed
        if unknown:
            raise ParseError(f"unknown sheaf fields {sorted(unknown)}")
        if "kind" not in d:
            raise ParseError("sheaf spec needs a 'kind'")
        d = dict(d)
        if d["kind"] == "veronese" and "dimW" not in d:
            d["dimW"] = int(d.get("degree", 0)) + 1
        if "dimW" not in d:
            raise ParseError("sheaf spec needs 'dimW'")
        try:
            return cls(**d)
        except TypeError as exc:
            raise ParseError(str(exc)) from exc

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def label(self) -> str:
        if self.kind == "twist":
            return f"O({self.degree}) on P^{self.N}"
        if self.kind == "omega":
            return f"Omega^{self.a}({self.a}) on P^{self.N}"
        if self.kind == "veronese":
            return f"O_P1({self.twist}) on the degree-{self.degree} rational normal curve"
        return f"{self.kind} sheaf on P^{self.N}"

    # -- constructors --------------------------------------------------------

    @classmethod
    def twist_sheaf(cls, d: int, dimW: int, **kw) -> "SheafSpec":
        return cls("twist", dimW, degree=d, **kw)

    @classmethod
    def veronese(cls, d: int, twist: int = 0, **kw) -> "SheafSpec":
        return cls("veronese", d + 1, degree=d, twist=twist, **kw)

    @classmethod
    def omega(cls, a: int, dimW: int, **kw) -> "SheafSpec":
        return cls("omega", dimW, a=a, **kw)

    @classmethod
    def quotient(cls, generators, dimW: int, regularity: int, **kw) -> "SheafSpec":
        return cls("quotient", dimW, generators=tuple(generators), regularity=regularity, **kw)

    @classmethod
    def presentation(cls, matrix, row_degrees, col_degrees, dimW: int, regularity: int, **kw) -> "SheafSpec":
        return cls(
            "presentation", dimW, matrix=matrix, row_degrees=row_degrees,
            col_degrees=col_degrees, regularity=regularity, **kw,
        )


def parse_sheaf(text: str, dimW: int | None = None, regularity: int | None = None) -> SheafSpec:
    """Short form (``twist:0``, ``omega:1``, ``veronese:2,0``, ``quotient:f;g``) or JSON."""
    text = text.strip()
    extra: dict[str, Any] = {}
    if regularity is not None:
        extra["regularity"] = regularity
    if text.startswith("{"):
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad sheaf JSON: {exc}") from exc
        if dimW is not None:
            d.setdefault("dimW", dimW)
        d.update(extra)
        return SheafSpec.from_dict(d)
    kind, _, arg = text.partition(":")
    kind = kind.strip().lower()
    try:
        if kind == "veronese":
            parts = [int(x) for x in arg.split(",")] if arg else []
            if not 1 <= len(parts) <= 2:
                raise ParseError("veronese takes 'degree[,twist]'")
            deg = parts[0]
            tw = parts[1] if len(parts) > 1 else 0
            if dimW is not None and dimW != deg + 1:
                raise ParseError(f"veronese:{deg} requires dimW={deg + 1}")
            return SheafSpec.veronese(deg, tw, **extra)
        if dimW is None:
            raise ParseError(f"{kind} sheaves need --dimW")
        if kind in ("twist", "o"):
            return SheafSpec.twist_sheaf(int(arg or 0), dimW, **extra)
        if kind == "omega":
            return SheafSpec.omega(int(arg), dimW, **extra)
        if kind == "quotient":
            gens = tuple(g.strip() for g in arg.split(";") if g.strip())
            return SheafSpec("quotient", dimW, generators=gens, **extra)
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"cannot parse sheaf {text!r}: {exc}") from exc
    raise ParseError(f"unknown sheaf kind in {text!r}")


_POLY_TOKEN = re.compile(r"^[\sw0-9*^+\-()]*$")


@lru_cache(maxsize=1024)
def parse_polynomial(text: str, dimW: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Integer polynomial in w0..w{dimW-1} -> ((exponents, coeff), ...)."""
    if not _POLY_TOKEN.match(text):
        raise ParseError(f"unexpected characters in polynomial {text!r}")
    import sympy
    from sympy.polys.polyerrors import CoercionFailed, PolynomialError

    syms = sympy.symbols(f"w0:{dimW}")
    local = {str(s): s for s in syms}
    try:
        expr = sympy.sympify(text.replace("^", "**"), locals=local)
        poly = sympy.Poly(expr, *syms, domain="ZZ")
    except (sympy.SympifyError, PolynomialError, CoercionFailed, TypeError, SyntaxError) as exc:
        raise ParseError(f"cannot parse polynomial {text!r}: {exc}") from exc
    if poly.free_symbols - set(syms):
        raise ParseError(f"polynomial {text!r} uses variables outside w0..w{dimW - 1}")
    return tuple((tuple(int(e) for e in m), int(c)) for m, c in poly.terms() if c != 0)


def _homogeneous_degree(terms) -> int | None:
    degs = {sum(e) for e, _ in terms}
    if len(degs) > 1:
        raise InvalidInputError("polynomial is not homogeneous")
    return degs.pop() if degs else None


def relations(spec: SheafSpec) -> tuple[tuple[int, ...], list[tuple[int, list[dict]]]]:
    """Generator degrees and relation columns of a quotient or presentation spec."""
    if spec.kind == "quotient":
        rels = []
        for g in spec.generators:
            terms = parse_polynomial(g, spec.dimW)
            deg = _homogeneous_degree(terms)
            if deg is not None:
                rels.append((deg, [dict(terms)]))
        return (0,), rels
    if spec.kind == "presentation":
        rels = []
        for j, cdeg in enumerate(spec.col_degrees):
            col = []
            for i, rdeg in enumerate(spec.row_degrees):
                terms = parse_polynomial(spec.matrix[i][j], spec.dimW)
                deg = _homogeneous_degree(terms)
                if deg is not None and deg != cdeg - rdeg:
                    raise InvalidInputError(
                        f"entry ({i},{j}) has degree {deg}, expected {cdeg - rdeg} from the declared degrees"
                    )
                col.append(dict(terms))
            rels.append((cdeg, col))
        return spec.row_degrees, rels
    raise InvalidInputError(f"{spec.kind} sheaves have no presentation")


def default_window(spec: SheafSpec, p_lo: int, r: int | None = None) -> tuple[int, int]:
    """Internal degrees needed for a Tate window starting at p_lo with bound r."""
    r = spec.regularity_bound() if r is None else r
    n = spec.dimW
    return (min(p_lo, r) - 2 * n, r + n + 2)


def realize(spec: SheafSpec, window: tuple[int, int] | None = None, field=QQ) -> DegreewiseSModule:
    """A degreewise S-module whose sheafification is the sheaf of ``spec``."""
    if window is None:
        window = default_window(spec, spec.regularity_bound())
    if spec.kind == "twist":
        return PresentedModule(spec.dimW, window, (-spec.degree,), (), field)
    if spec.kind == "veronese":
        return VeroneseModule(spec.degree, spec.twist, window, field)
    if spec.kind == "omega":
        return KoszulKernelModule(spec.a, spec.dimW, window, field)
    gens, rels = relations(spec)
    top = max([*gens, *(d for d, _ in rels)], default=0)
    if window[1] < top:
        from weylith.errors import WindowTooNarrowError

        raise WindowTooNarrowError(f"window {window} ends below presentation degree {top}")
    return PresentedModule(spec.dimW, window, gens, rels, field)
