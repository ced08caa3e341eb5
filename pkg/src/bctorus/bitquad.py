"""Quadratic forms over Z/2 and the groups acting on them.

Vectors of Z_2^n are plain ``int`` bitmasks: bit ``k - 1`` holds the
coordinate of the k-th basis vector.  Subsets of Z_2^n are reported as
sorted lists of such integers.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

MAX_GROUP_DIM = 5
MAX_CLASSIFY_DIM = 4


def parity(x: int) -> int:
    return x.bit_count() & 1


def to_bits(v: int, n: int) -> tuple[int, ...]:
    return tuple((v >> k) & 1 for k in range(n))


def from_bits(bits: Sequence[int]) -> int:
    out = 0
    for k, b in enumerate(bits):
        if b not in (0, 1):
            raise ValueError(f"not a bit: {b!r}")
        out |= b << k
    return out


def _as_vector(v: int | Sequence[int], n: int) -> int:
    if isinstance(v, int):
        if not 0 <= v < (1 << n):
            raise ValueError(f"vector {v} does not fit in dimension {n}")
        return v
    if len(v) != n:
        raise ValueError(f"vector of length {len(v)} in dimension {n}")
    return from_bits(v)


def span(vectors: Iterable[int]) -> frozenset[int]:
    """All Z_2-linear combinations of ``vectors``."""
    out = {0}
    for v in vectors:
        if v not in out:
            out |= {s ^ v for s in out}
    return frozenset(out)


def independent_subset(vectors: Iterable[int]) -> list[int]:
    """Greedy maximal independent subfamily, in the given order."""
    chosen: list[int] = []
    spanned = {0}
    for v in vectors:
        if v not in spanned:
            chosen.append(v)
            spanned |= {s ^ v for s in spanned}
    return chosen


@dataclass(frozen=True)
class BilForm:
    """A bilinear form on Z_2^n given by its Gram matrix."""

    n: int
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.matrix) != self.n or any(len(row) != self.n for row in self.matrix):
            raise ValueError("bilinear form matrix must be n x n")
        if any(b not in (0, 1) for row in self.matrix for b in row):
            raise ValueError("bilinear form entries must be bits")

    @classmethod
    def zero(cls, n: int) -> BilForm:
        return cls(n, tuple((0,) * n for _ in range(n)))

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> BilForm:
        """Form with a 1 at each listed (i, j), 1-based."""
        rows = [[0] * n for _ in range(n)]
        for i, j in pairs:
            rows[i - 1][j - 1] ^= 1
        return cls(n, tuple(tuple(r) for r in rows))

    @cached_property
    def _row_masks(self) -> tuple[int, ...]:
        return tuple(from_bits(row) for row in self.matrix)

    def __call__(self, u: int, v: int) -> int:
        acc = 0
        rows = self._row_masks
        k = 0
        while u:
            if u & 1:
                acc ^= rows[k]
            u >>= 1
            k += 1
        return parity(acc & v)

    def transpose(self) -> BilForm:
        return BilForm(self.n, tuple(zip(*self.matrix)))

    def __add__(self, other: BilForm) -> BilForm:
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        return BilForm(
            self.n,
            tuple(tuple(a ^ b for a, b in zip(r, s)) for r, s in zip(self.matrix, other.matrix)),
        )

    def is_alternating(self) -> bool:
        return all(self(v, v) == 0 for v in range(1 << self.n))

    def __str__(self) -> str:
        terms = [
            f"l{i + 1}l'{j + 1}"
            for i in range(self.n)
            for j in range(self.n)
            if self.matrix[i][j]
        ]
        return " + ".join(terms) if terms else "0"

    def to_json(self) -> list[list[int]]:
        return [list(row) for row in self.matrix]

    @classmethod
    def from_json(cls, rows: Sequence[Sequence[int]]) -> BilForm:
        return cls(len(rows), tuple(tuple(int(b) for b in row) for row in rows))


@dataclass(frozen=True)
class QuadForm:
    """kappa(v) = sum c_i v_i + sum_{i<j} p_ij v_i v_j over Z_2."""

    n: int
    diag: tuple[int, ...]
    polar_upper: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("negative dimension")
        if len(self.diag) != self.n:
            raise ValueError("diag must have n entries")
        if len(self.polar_upper) != self.n or any(len(r) != self.n for r in self.polar_upper):
            raise ValueError("polar_upper must be n x n")
        for i, row in enumerate(self.polar_upper):
            for j, b in enumerate(row):
                if b not in (0, 1):
                    raise ValueError("entries must be bits")
                if b and j <= i:
                    raise ValueError("polar_upper must be strictly upper triangular")
        if any(b not in (0, 1) for b in self.diag):
            raise ValueError("entries must be bits")

    @classmethod
    def zero(cls, n: int) -> QuadForm:
        return cls.from_terms(n)

    @classmethod
    def from_terms(
        cls,
        n: int,
        linear: Iterable[int] = (),
        products: Iterable[tuple[int, int]] = (),
    ) -> QuadForm:
        """Build sum of l_i (i in ``linear``) plus l_i l_j (pairs in ``products``), 1-based."""
        diag = [0] * n
        upper = [[0] * n for _ in range(n)]
        for i in linear:
            diag[i - 1] ^= 1
        for i, j in products:
            if i == j:
                # l_i^2 = l_i on Z_2
                diag[i - 1] ^= 1
                continue
            a, b = sorted((i - 1, j - 1))
            upper[a][b] ^= 1
        return cls(n, tuple(diag), tuple(tuple(r) for r in upper))

    @classmethod
    def parse(cls, text: str, n: int) -> QuadForm:
        """Parse a polynomial such as ``"l3 + l1 l2"`` or ``"0"``."""
        text = text.strip()
        if text in ("", "0"):
            return cls.zero(n)
        linear: list[int] = []
        products: list[tuple[int, int]] = []
        for term in text.split("+"):
            idx = [int(k) for k in re.findall(r"l(\d+)", term)]
            rest = re.sub(r"l\d+|[\s*]", "", term)
            if rest or not 1 <= len(idx) <= 2 or any(not 1 <= k <= n for k in idx):
                raise ValueError(f"cannot parse term {term!r}")
            if len(idx) == 1:
                linear.append(idx[0])
            else:
                products.append((idx[0], idx[1]))
        return cls.from_terms(n, linear, products)

    @cached_property
    def _polar_rows(self) -> tuple[int, ...]:
        rows = [0] * self.n
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if self.polar_upper[i][j]:
                    rows[i] |= 1 << j
                    rows[j] |= 1 << i
        return tuple(rows)

    @cached_property
    def _values(self) -> tuple[int, ...]:
        dmask = from_bits(self.diag)
        upper = [0] * self.n
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if self.polar_upper[i][j]:
                    upper[i] |= 1 << j
        out = []
        for v in range(1 << self.n):
            acc = parity(v & dmask)
            for i in range(self.n):
                if (v >> i) & 1:
                    acc ^= parity(upper[i] & v)
            out.append(acc)
        return tuple(out)

    def __call__(self, v: int) -> int:
        return self._values[v]

    def polar_value(self, u: int, v: int) -> int:
        acc = 0
        k = 0
        while u:
            if u & 1:
                acc ^= self._polar_rows[k]
            u >>= 1
            k += 1
        return parity(acc & v)

    def polar_row(self, u: int) -> int:
        """Mask of basis vectors e_k with kappa_p(u, e_k) = 1."""
        acc = 0
        k = 0
        while u:
            if u & 1:
                acc ^= self._polar_rows[k]
            u >>= 1
            k += 1
        return acc

    @cached_property
    def polar_radical(self) -> frozenset[int]:
        return frozenset(v for v in range(1 << self.n) if self.polar_row(v) == 0)

    @cached_property
    def radical(self) -> frozenset[int]:
        return frozenset(v for v in self.polar_radical if self(v) == 0)

    @cached_property
    def isotropic(self) -> frozenset[int]:
        return frozenset(v for v in range(1 << self.n) if self(v) == 0)

    def invariant_key(self) -> tuple[int, int]:
        """(dim rad, |iso|): a complete isometry invariant over Z_2."""
        return (len(self.radical).bit_length() - 1, len(self.isotropic))

    def compose(self, g: BitMatrix) -> QuadForm:
        """The form v -> kappa(g v)."""
        if g.n != self.n:
            raise ValueError("dimension mismatch")
        cols = g.cols
        diag = tuple(self(c) for c in cols)
        upper = tuple(
            tuple(self.polar_value(cols[i], cols[j]) if j > i else 0 for j in range(self.n))
            for i in range(self.n)
        )
        return QuadForm(self.n, diag, upper)

    def __str__(self) -> str:
        terms = [f"l{i + 1}" for i in range(self.n) if self.diag[i]]
        terms += [
            f"l{i + 1}l{j + 1}"
            for i in range(self.n)
            for j in range(i + 1, self.n)
            if self.polar_upper[i][j]
        ]
        return " + ".join(terms) if terms else "0"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "diag": list(self.diag),
            "polar_upper": [list(r) for r in self.polar_upper],
        }

    @classmethod
    def from_json(cls, doc: dict) -> QuadForm:
        n = int(doc["n"])
        upper = doc.get("polar_upper") or [[0] * n for _ in range(n)]
        return cls(n, tuple(int(b) for b in doc["diag"]), tuple(tuple(int(b) for b in r) for r in upper))


@dataclass(frozen=True)
class BitMatrix:
    """A linear map of Z_2^n stored by the images of the basis vectors."""

    n: int
    cols: tuple[int, ...]

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls(n, tuple(1 << k for k in range(n)))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> BitMatrix:
        n = len(rows)
        return cls(n, tuple(from_bits([rows[i][k] for i in range(n)]) for k in range(n)))

    def rows(self) -> list[list[int]]:
        return [[(self.cols[k] >> i) & 1 for k in range(self.n)] for i in range(self.n)]

    @cached_property
    def table(self) -> tuple[int, ...]:
        out = [0] * (1 << self.n)
        for v in range(1, 1 << self.n):
            low = v & -v
            out[v] = out[v ^ low] ^ self.cols[low.bit_length() - 1]
        return tuple(out)

    def __call__(self, v: int) -> int:
        return self.table[v]

    def __matmul__(self, other: BitMatrix) -> BitMatrix:
        return BitMatrix(self.n, tuple(self.table[c] for c in other.cols))

    def is_invertible(self) -> bool:
        return len(independent_subset(self.cols)) == self.n

    def inverse(self) -> BitMatrix:
        if not self.is_invertible():
            raise ValueError("matrix is singular")
        back = {w: v for v, w in enumerate(self.table)}
        return BitMatrix(self.n, tuple(back[1 << k] for k in range(self.n)))


# ---------------------------------------------------------------- operations


def qf_eval(kappa: QuadForm, v: int | Sequence[int]) -> int:
    return kappa(_as_vector(v, kappa.n))


def polar(kappa: QuadForm) -> BilForm:
    rows = tuple(
        tuple(kappa.polar_value(1 << i, 1 << j) for j in range(kappa.n)) for i in range(kappa.n)
    )
    return BilForm(kappa.n, rows)


def radical(kappa: QuadForm) -> list[int]:
    return sorted(kappa.radical)


def iso_set(kappa: QuadForm) -> list[int]:
    return sorted(kappa.isotropic)


def complement_basis(kappa: QuadForm) -> list[int]:
    """Earliest standard basis vectors completing rad(kappa) to a basis."""
    rad_basis = independent_subset(sorted(kappa.radical))
    chosen = independent_subset(rad_basis + [1 << k for k in range(kappa.n)])
    return chosen[len(rad_basis):]


def compatible_bilinear(kappa: QuadForm) -> BilForm:
    """The deterministic compatible form vanishing against the radical.

    On the complement basis b_1 < ... < b_s the form is upper triangular
    with entries kappa_p(b_i, b_j); vectors are split along
    complement + radical before evaluation.
    """
    n = kappa.n
    comp = complement_basis(kappa)
    rad_basis = independent_subset(sorted(kappa.radical))
    basis = comp + rad_basis
    # coordinates of each standard vector in the adapted basis
    coord_of: dict[int, int] = {}
    for combo in range(1 << n):
        vec = 0
        for k in range(n):
            if (combo >> k) & 1:
                vec ^= basis[k]
        coord_of[vec] = combo
    s = len(comp)
    comp_part = [coord_of[1 << k] & ((1 << s) - 1) for k in range(n)]

    def on_complement(x: int, y: int) -> int:
        acc = 0
        for a in range(s):
            if not (x >> a) & 1:
                continue
            for b in range(a + 1, s):
                if (y >> b) & 1:
                    acc ^= kappa.polar_value(comp[a], comp[b])
        return acc

    rows = tuple(tuple(on_complement(comp_part[i], comp_part[j]) for j in range(n)) for i in range(n))
    return BilForm(n, rows)


def is_compatible(kappa: QuadForm, kappa_b: BilForm) -> bool:
    p = polar(kappa)
    return kappa_b.n == kappa.n and (kappa_b + kappa_b.transpose()) == p


def _check_group_dim(n: int) -> None:
    if n > MAX_GROUP_DIM:
        raise ValueError(f"dimension {n} exceeds enumeration bound {MAX_GROUP_DIM}")


def iter_isometries(src: QuadForm, dst: QuadForm) -> Iterator[BitMatrix]:
    """All g in GL(n,2) with dst(g v) = src(v), columns in lexicographic order."""
    if src.n != dst.n:
        raise ValueError("dimension mismatch")
    n = src.n
    cols: list[int] = []

    def extend(k: int, spanned: frozenset[int]) -> Iterator[BitMatrix]:
        if k == n:
            yield BitMatrix(n, tuple(cols))
            return
        for w in range(1, 1 << n):
            if w in spanned or dst(w) != src.diag[k]:
                continue
            if any(dst.polar_value(cols[i], w) != src.polar_upper[i][k] for i in range(k)):
                continue
            cols.append(w)
            yield from extend(k + 1, spanned | {s ^ w for s in spanned})
            cols.pop()

    yield from extend(0, frozenset({0}))


def orthogonal_group(kappa: QuadForm) -> list[BitMatrix]:
    _check_group_dim(kappa.n)
    return list(iter_isometries(kappa, kappa))


@lru_cache(maxsize=None)
def general_linear_group(n: int) -> tuple[BitMatrix, ...]:
    _check_group_dim(n)
    return tuple(iter_isometries(QuadForm.zero(n), QuadForm.zero(n)))


def _closure_size(gens: Sequence[BitMatrix], n: int) -> int:
    seen = {BitMatrix.identity(n).cols}
    frontier = list(seen)
    while frontier:
        nxt = []
        for cols in frontier:
            h = BitMatrix(n, cols)
            for g in gens:
                c = (g @ h).cols
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return len(seen)


def generating_set(group: Sequence[BitMatrix], seed: int = 0) -> list[BitMatrix]:
    """A small generating set, grown from seeded random picks until it closes up."""
    if not group:
        return []
    n = group[0].n
    rng = random.Random(seed)
    gens: list[BitMatrix] = []
    while _closure_size(gens, n) < len(group):
        gens.append(group[rng.randrange(len(group))])
    return gens


def _find(parent: list[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def pointed_orbits(kappa: QuadForm) -> list[list[int]]:
    """Orbit representatives of O(kappa) on subsets of iso(kappa) containing 0.

    Each representative is the lexicographically least sorted list in its
    orbit; the list of representatives is itself sorted.
    """
    _check_group_dim(kappa.n)
    points = sorted(kappa.isotropic - {0})
    index = {p: k for k, p in enumerate(points)}
    gens = generating_set(orthogonal_group(kappa))
    perms = [[index[g(p)] for p in points] for g in gens]
    total = 1 << len(points)
    parent = list(range(total))
    for mask in range(total):
        for perm in perms:
            image = 0
            m, k = mask, 0
            while m:
                if m & 1:
                    image |= 1 << perm[k]
                m >>= 1
                k += 1
            a, b = _find(parent, mask), _find(parent, image)
            if a != b:
                parent[max(a, b)] = min(a, b)
    best: dict[int, tuple[int, ...]] = {}
    for mask in range(total):
        key = (0,) + tuple(points[k] for k in range(len(points)) if (mask >> k) & 1)
        root = _find(parent, mask)
        if root not in best or key < best[root]:
            best[root] = key
    return [list(key) for key in sorted(best.values())]


def orbit_representative(kappa: QuadForm, subset: Iterable[int]) -> list[int]:
    """Least sorted image of ``subset`` under O(kappa)."""
    subset = sorted(set(subset))
    return list(min(tuple(sorted(g(v) for v in subset)) for g in orthogonal_group(kappa)))


def normal_forms(n: int) -> list[QuadForm]:
    """One standard form per isometry class of dimension n.

    Hyperbolic planes l_a l_b, an anisotropic plane l_a + l_b + l_a l_b,
    and a linear term l_n, arranged so that n = 3 reproduces the usual
    table 0, l3, l2+l3+l2l3, l2l3, l3+l1l2.
    """
    forms: list[QuadForm] = []
    for a in range(n // 2 + 1):
        # kappa vanishes on the polar radical: H^a or H^(a-1) N on the last 2a coordinates
        start = n - 2 * a
        pairs = [(start + 2 * k + 1, start + 2 * k + 2) for k in range(a)]
        forms.append(QuadForm.from_terms(n, (), pairs))
        if a >= 1:
            forms.append(QuadForm.from_terms(n, (n - 1, n), pairs))
        # kappa linear and nonzero on the polar radical: H^a on the first 2a, plus l_n
        if 2 * a + 1 <= n:
            pairs = [(2 * k + 1, 2 * k + 2) for k in range(a)]
            forms.append(QuadForm.from_terms(n, (n,), pairs))
    return sorted(forms, key=lambda q: (-q.invariant_key()[0], q.invariant_key()[1]))


def all_forms(n: int) -> Iterator[QuadForm]:
    slots = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for dmask in range(1 << n):
        for pmask in range(1 << len(slots)):
            upper = [[0] * n for _ in range(n)]
            for k, (i, j) in enumerate(slots):
                upper[i][j] = (pmask >> k) & 1
            yield QuadForm(n, to_bits(dmask, n), tuple(tuple(r) for r in upper))


def isometry_classes(n: int) -> list[QuadForm]:
    """Representatives of the GL(n,2)-orbits of quadratic forms, n <= 4.

    The orbits are computed by brute force over GL(n,2); each orbit is
    labelled by the standard form it contains.  Raises if the standard
    forms fail to cover every form exactly once.
    """
    if not 1 <= n <= MAX_CLASSIFY_DIM:
        raise ValueError(f"isometry classification supports 1 <= n <= {MAX_CLASSIFY_DIM}")
    glg = general_linear_group(n)
    reps = normal_forms(n)
    covered: set[QuadForm] = set()
    for rep in reps:
        orbit = {rep.compose(g) for g in glg}
        if orbit & covered:
            raise RuntimeError(f"standard form {rep} repeats an earlier class")
        covered |= orbit
    expected = 1 << (n + n * (n - 1) // 2)
    if len(covered) != expected:
        raise RuntimeError("standard forms do not exhaust the quadratic forms")
    return reps


def find_isometry(
    kappa: QuadForm,
    kappa2: QuadForm,
    subset: Iterable[int] = (0,),
    subset2: Iterable[int] = (0,),
) -> BitMatrix | None:
    """Some g with kappa2(g v) = kappa(v) and g(subset) = subset2, or None."""
    if kappa.n != kappa2.n:
        raise ValueError("dimension mismatch")
    _check_group_dim(kappa.n)
    n = kappa.n
    src, dst = set(subset), set(subset2)
    if len(src) != len(dst) or kappa.invariant_key() != kappa2.invariant_key():
        return None
    # subset elements become checkable once their top coordinate is assigned
    by_top: list[list[int]] = [[] for _ in range(n)]
    for m in src:
        if m:
            by_top[m.bit_length() - 1].append(m)
    if (0 in src) != (0 in dst):
        return None
    cols: list[int] = []

    def image(v: int) -> int:
        out = 0
        k = 0
        while v:
            if v & 1:
                out ^= cols[k]
            v >>= 1
            k += 1
        return out

    def extend(k: int, spanned: frozenset[int]) -> BitMatrix | None:
        if k == n:
            return BitMatrix(n, tuple(cols))
        for w in range(1, 1 << n):
            if w in spanned or kappa2(w) != kappa.diag[k]:
                continue
            if any(kappa2.polar_value(cols[i], w) != kappa.polar_upper[i][k] for i in range(k)):
                continue
            cols.append(w)
            if all(image(m) in dst for m in by_top[k]):
                found = extend(k + 1, spanned | {s ^ w for s in spanned})
                if found is not None:
                    return found
            cols.pop()
        return None

    return extend(0, frozenset({0}))
