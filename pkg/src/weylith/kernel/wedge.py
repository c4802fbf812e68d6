"""Wedge bases, shuffle signs, and the exterior algebra on a based space.

Basis elements of a k-th exterior power of an n-dimensional based space are
strictly increasing index tuples, ordered lexicographically (the order of
``itertools.combinations``).

Elements of the exterior algebra itself (used for the ring E = /\\ W*) are
plain dicts ``{bitmask: coefficient}``; bit t of the mask stands for the
basis covector w_t*, and the monomial is the wedge product in increasing
index order.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from weylith.errors import InvalidInputError


@lru_cache(maxsize=None)
def wedge_basis(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    if k < 0 or k > n:
        return ()
    return tuple(combinations(range(n), k))


@lru_cache(maxsize=None)
def wedge_position(n: int, k: int) -> dict[tuple[int, ...], int]:
    return {I: pos for pos, I in enumerate(wedge_basis(n, k))}


def word_sign(word: Sequence[int]) -> int:
    """Sign of the permutation sorting ``word`` (inversion parity)."""
    inv = 0
    for i in range(len(word)):
        wi = word[i]
        for j in range(i + 1, len(word)):
            if wi > word[j]:
                inv += 1
    return -1 if inv & 1 else 1


def merge_sign(S: Sequence[int], T: Sequence[int]) -> int:
    """Sign relating v_S ^ v_T to v_{S u T} for disjoint increasing S, T."""
    inv = 0
    for t in T:
        for s in S:
            if s > t:
                inv += 1
    return -1 if inv & 1 else 1


def shuffle_sign(I: Sequence[int], Iprime: Sequence[int]) -> int:
    """Sign of the permutation whose bottom row is the word (I, I').

    ``I`` and ``I'`` must be disjoint with union ``{0, ..., a-1}``.
    """
    a = len(I) + len(Iprime)
    if set(I) & set(Iprime):
        raise InvalidInputError(f"index sets {tuple(I)} and {tuple(Iprime)} overlap")
    if set(I) | set(Iprime) != set(range(a)):
        raise InvalidInputError(f"{tuple(I)} and {tuple(Iprime)} do not partition range({a})")
    return word_sign(list(I) + list(Iprime))


@lru_cache(maxsize=None)
def splittings(I: tuple[int, ...], b: int) -> tuple[tuple[tuple[int, ...], tuple[int, ...], int], ...]:
    """All (J, J', sign) with J u J' = I, |J| = b, sign = sgn(J, J')."""
    out = []
    for pos in combinations(range(len(I)), b):
        J = tuple(I[p] for p in pos)
        rest = tuple(I[p] for p in range(len(I)) if p not in pos)
        out.append((J, rest, merge_sign(J, rest)))
    return tuple(out)


# -- exterior algebra elements as {mask: coeff} ------------------------------


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


@lru_cache(maxsize=None)
def indices_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@lru_cache(maxsize=1 << 16)
def mono_mul(S: int, T: int) -> int:
    """Sign of e_S ^ e_T = sign * e_{S|T}; 0 when S and T overlap."""
    if S & T:
        return 0
    inv = 0
    t = T
    i = 0
    while t:
        if t & 1:
            inv += popcount(S >> (i + 1))
        t >>= 1
        i += 1
    return -1 if inv & 1 else 1


def ext_mul(x: dict, y: dict) -> dict:
    out: dict = {}
    for S, a in x.items():
        for T, b in y.items():
            sg = mono_mul(S, T)
            if sg == 0:
                continue
            U = S | T
            c = out.get(U)
            v = a * b if sg > 0 else -(a * b)
            out[U] = v if c is None else c + v
    return {k: v for k, v in out.items() if v != 0}


def ext_add(x: dict, y: dict) -> dict:
    out = dict(x)
    for k, v in y.items():
        c = out.get(k)
        out[k] = v if c is None else c + v
    return {k: v for k, v in out.items() if v != 0}


def ext_scale(x: dict, c) -> dict:
    if c == 0:
        return {}
    return {k: v * c for k, v in x.items()}


def ext_degree(x: dict) -> int | None:
    """Exterior degree of a homogeneous element (None for zero); raises if mixed."""
    degs = {popcount(m) for m in x}
    if not degs:
        return None
    if len(degs) > 1:
        raise InvalidInputError(f"inhomogeneous exterior form with degrees {sorted(degs)}")
    return degs.pop()


def ext_to_vector(x: dict, n: int, k: int, zero) -> list:
    """Coordinates of a degree-k form in ``wedge_basis(n, k)``."""
    pos = wedge_position(n, k)
    v = [zero] * len(pos)
    for m, c in x.items():
        I = indices_of(m)
        if len(I) != k:
            raise InvalidInputError(f"form has a term of degree {len(I)}, expected {k}")
        v[pos[I]] = c
    return v


def ext_from_vector(v: Sequence, n: int, k: int) -> dict:
    return {mask_of(I): c for I, c in zip(wedge_basis(n, k), v) if c != 0}


def ext_str(x: dict, name: str = "e") -> str:
    if not x:
        return "0"
    parts = []
    for m in sorted(x, key=lambda m: (popcount(m), indices_of(m))):
        c = x[m]
        mono = "^".join(f"{name}{i}" for i in indices_of(m)) or "1"
        if mono == "1":
            parts.append(f"{c}")
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{c}*{mono}")
    return " + ".join(parts).replace("+ -", "- ")
