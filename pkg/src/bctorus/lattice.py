"""Integer lattices given by generating vectors."""

from __future__ import annotations

from typing import Iterable, Sequence


def hermite_form(vectors: Iterable[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    """Row Hermite normal form of the lattice spanned by ``vectors`` in Z^n.

    Rows are in echelon form with positive pivots, and entries above each
    pivot reduced into [0, pivot).  Two generating sets span the same
    lattice iff their forms agree.
    """
    rows = [list(v) for v in vectors if any(v)]
    out: list[list[int]] = []
    pivots: list[int] = []
    for col in range(n):
        while True:
            nz = [r for r in rows if r[col]]
            if len(nz) <= 1:
                break
            piv = min(nz, key=lambda r: abs(r[col]))
            for r in nz:
                if r is not piv:
                    q = r[col] // piv[col]
                    r[:] = [a - q * b for a, b in zip(r, piv)]
            rows = [r for r in rows if any(r)]
        nz = [r for r in rows if r[col]]
        if not nz:
            continue
        piv = nz[0]
        if piv[col] < 0:
            piv[:] = [-a for a in piv]
        rows = [r for r in rows if r is not piv]
        out.append(piv)
        pivots.append(col)
    for k, (row, col) in enumerate(zip(out, pivots)):
        for above in out[:k]:
            q = above[col] // row[col]
            if q:
                above[:] = [a - q * b for a, b in zip(above, row)]
    return [tuple(r) for r in out]


def same_lattice(a: Iterable[Sequence[int]], b: Iterable[Sequence[int]], n: int) -> bool:
    return hermite_form(a, n) == hermite_form(b, n)
