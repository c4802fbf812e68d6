"""The BGG functor R on one degree: M_p  |->  Ê(-p) (x) M_p -> Ê(-p-1) (x) M_{p+1}."""

from __future__ import annotations

from weylith.algebra.exterior import ExteriorMap, FreeEModule
from weylith.algebra.smodule import DegreewiseSModule


def bgg_term(M: DegreewiseSModule, p: int) -> ExteriorMap:
    """Differential of R(M) from position p to p+1.

    The entry linking basis vector j of M_p to basis vector k of M_{p+1} is
    the linear form  sum_t (w_t acting on M_p)[k][j] * w_t*.
    """
    n0, n1 = M.dim(p), M.dim(p + 1)
    src = FreeEModule(M.dimW, (-p,) * n0, M.field)
    tgt = FreeEModule(M.dimW, (-p - 1,) * n1, M.field)
    entries = [[{} for _ in range(n0)] for _ in range(n1)]
    if n0 and n1:
        for t in range(M.dimW):
            A = M.action(t, p)
            bit = 1 << t
            for k in range(n1):
                row = entries[k]
                for j in range(n0):
                    c = A[k, j]
                    if c != 0:
                        row[j][bit] = c
    return ExteriorMap(src, tgt, tuple(tuple(r) for r in entries))
