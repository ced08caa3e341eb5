"""Exact Gaussian elimination on sparse rational vectors.

Vectors are dicts from hashable, mutually comparable keys to ``Fraction``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Mapping, Sequence

Vector = dict[Hashable, Fraction]


def axpy(y: Vector, a: Fraction, x: Mapping[Hashable, Fraction]) -> None:
    """y += a * x in place, dropping zeros."""
    if not a:
        return
    for k, v in x.items():
        nv = y.get(k, 0) + a * v
        if nv:
            y[k] = nv
        else:
            y.pop(k, None)


class Echelon:
    """A subspace kept in reduced row echelon form.

    Each stored row also remembers which combination of the inserted
    vectors produced it, so membership tests can return coordinates.
    """

    def __init__(self) -> None:
        self.rows: dict[Hashable, tuple[Vector, Vector]] = {}
        self.count = 0

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v: Mapping[Hashable, Fraction]) -> tuple[Vector, Vector]:
        rem: Vector = {k: Fraction(x) for k, x in v.items() if x}
        combo: Vector = {}
        for p, (row, rc) in self.rows.items():
            c = rem.get(p)
            if c:
                axpy(rem, -c, row)
                axpy(combo, -c, rc)
        return rem, combo

    def add(self, v: Mapping[Hashable, Fraction]) -> bool:
        """Insert v; True if it enlarged the span."""
        tag = self.count
        self.count += 1
        rem, combo = self.reduce(v)
        if not rem:
            return False
        combo[tag] = combo.get(tag, 0) + 1
        p = min(rem)
        c = rem[p]
        row = {k: x / c for k, x in rem.items()}
        rc = {k: x / c for k, x in combo.items()}
        for q, (other, oc) in self.rows.items():
            d = other.get(p)
            if d:
                axpy(other, -d, row)
                axpy(oc, -d, rc)
        self.rows[p] = (row, rc)
        return True

    def contains(self, v: Mapping[Hashable, Fraction]) -> bool:
        return not self.reduce(v)[0]


def rank(vectors: Sequence[Mapping[Hashable, Fraction]]) -> int:
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return ech.rank


def solve_in_span(
    basis: Sequence[Mapping[Hashable, Fraction]], target: Mapping[Hashable, Fraction]
) -> list[Fraction] | None:
    """Coefficients c with sum c_k basis[k] = target, or None.

    ``basis`` must be linearly independent.
    """
    ech = Echelon()
    for b in basis:
        if not ech.add(b):
            raise ValueError("basis vectors are linearly dependent")
    rem, combo = ech.reduce(target)
    if rem:
        return None
    return [-combo.get(k, Fraction(0)) for k in range(len(basis))]


PRIME = (1 << 61) - 1


class ModEchelon:
    """Row echelon form over GF(p), p = 2^61 - 1.

    Rank mod p never exceeds the rational rank, so a full rank found here
    certifies full rank over Q.
    """

    def __init__(self, p: int = PRIME) -> None:
        self.p = p
        self.rows: dict[Hashable, dict[Hashable, int]] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _lift(self, v: Mapping[Hashable, Fraction]) -> dict[Hashable, int]:
        p = self.p
        out = {}
        for k, x in v.items():
            x = Fraction(x)
            r = x.numerator * pow(x.denominator, -1, p) % p
            if r:
                out[k] = r
        return out

    def add(self, v: Mapping[Hashable, Fraction]) -> bool:
        p = self.p
        rem = self._lift(v)
        # each row has leading entry 1 at its pivot, the row's smallest key
        while rem:
            piv = min(rem)
            if piv not in self.rows:
                inv = pow(rem[piv], -1, p)
                self.rows[piv] = {k: x * inv % p for k, x in rem.items()}
                return True
            c = rem[piv]
            for k, x in self.rows[piv].items():
                nv = (rem.get(k, 0) - c * x) % p
                if nv:
                    rem[k] = nv
                else:
                    rem.pop(k, None)
        return False
