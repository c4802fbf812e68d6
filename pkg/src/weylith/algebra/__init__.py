"""Graded modules over Sym W and /\ W*, and builtin sheaves."""

from weylith.algebra.bgg import bgg_term
from weylith.algebra.exterior import (
    DegreewiseEModule,
    ExteriorMap,
    FreeEModule,
    MinimalGenerators,
    SubEModule,
    cover_map,
    e_minimal_generators,
    form_from_indices,
    generated_dims,
    kernel_submodule,
    linear_form,
)
from weylith.algebra.sheaves import (
    SheafSpec,
    default_window,
    parse_polynomial,
    parse_sheaf,
    realize,
)
from weylith.algebra.smodule import (
    DegreewiseSModule,
    KoszulKernelModule,
    PresentedModule,
    VeroneseModule,
    koszul_kernel_module,
)

__all__ = [
    "DegreewiseEModule",
    "DegreewiseSModule",
    "ExteriorMap",
    "FreeEModule",
    "KoszulKernelModule",
    "MinimalGenerators",
    "PresentedModule",
    "SheafSpec",
    "SubEModule",
    "VeroneseModule",
    "bgg_term",
    "cover_map",
    "default_window",
    "e_minimal_generators",
    "form_from_indices",
    "generated_dims",
    "kernel_submodule",
    "koszul_kernel_module",
    "linear_form",
    "parse_polynomial",
    "parse_sheaf",
    "realize",
]
