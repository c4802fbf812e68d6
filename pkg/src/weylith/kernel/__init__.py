"""Exact arithmetic, linear algebra, and wedge/Cauchy combinatorics."""

from weylith.kernel.field import DEFAULT_PRIME, QQ, Fp, PrimeField, RationalField, field_from_name
from weylith.kernel.linalg import DenseMatrix, EchelonSpan, determinant, kernel_basis, rank_of_rows, rref
from weylith.kernel.multilinear import cauchy_apply, cauchy_embed, comultiply, generic_minor
from weylith.kernel.poly import PolyA, PolyRing, poly_det, poly_matmul
from weylith.kernel.wedge import merge_sign, shuffle_sign, wedge_basis

__all__ = [
    "DEFAULT_PRIME",
    "QQ",
    "DenseMatrix",
    "EchelonSpan",
    "Fp",
    "PolyA",
    "PolyRing",
    "PrimeField",
    "RationalField",
    "cauchy_apply",
    "determinant",
    "cauchy_embed",
    "comultiply",
    "field_from_name",
    "generic_minor",
    "kernel_basis",
    "merge_sign",
    "poly_det",
    "poly_matmul",
    "rank_of_rows",
    "rref",
    "shuffle_sign",
    "wedge_basis",
]
