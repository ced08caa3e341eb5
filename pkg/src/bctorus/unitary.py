"""Matrices over the torus and the unitary Lie algebras they contain.

A ``MatElem`` is a sparse l x l matrix with ``TorusElem`` entries, indexed
1..l.  The adjoint is T* = G^{-1} conj(T)^t G for the Gram matrix G of the
hermitian form; F is the algebra of skew-adjoint matrices and S the
subalgebra whose trace has no central component.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, NamedTuple, Sequence

from .hermitian import HalfDeg, HermitianData, halve, is_lattice
from .linalg import solve_in_span
from .torus import (
    Scalar,
    TorusElem,
    Vec,
    center_project,
    check_same,
    tilde,
    varpi,
    vsub,
)

Root = tuple[int, ...]
Entry = tuple[int, int]


class BiDegree(NamedTuple):
    root: Root
    ext: HalfDeg


def check_same_data(a: HermitianData, b: HermitianData) -> None:
    if a is not b and a != b:
        raise ValueError("matrices over different hermitian data")


class MatElem:
    """Sparse matrix over the torus; treat as immutable."""

    __slots__ = ("data", "entries")

    def __init__(self, data: HermitianData, entries: Mapping[Entry, TorusElem] = ()):
        self.data = data
        self.entries = {k: v for k, v in dict(entries).items() if v}

    @classmethod
    def zero(cls, data: HermitianData) -> MatElem:
        return cls(data, {})

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MatElem):
            return NotImplemented
        return (self.data is other.data or self.data == other.data) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(frozenset(self.entries.items()))

    def __repr__(self) -> str:
        return f"MatElem({self})"

    def __str__(self) -> str:
        if not self.entries:
            return "0"
        return " + ".join(f"e{i},{j}({v})" for (i, j), v in sorted(self.entries.items()))

    def __getitem__(self, key: Entry) -> TorusElem:
        return self.entries.get(key, self.data.spec.zero())

    def __add__(self, other: MatElem) -> MatElem:
        check_same_data(self.data, other.data)
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out[k] + v if k in out else v
        return MatElem(self.data, out)

    def __neg__(self) -> MatElem:
        return MatElem(self.data, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other: MatElem) -> MatElem:
        return self + (-other)

    def __mul__(self, other: MatElem | Scalar) -> MatElem:
        if not isinstance(other, MatElem):
            c = Fraction(other)
            return MatElem(self.data, {k: v * c for k, v in self.entries.items()} if c else {})
        check_same_data(self.data, other.data)
        rows: dict[int, list[tuple[int, TorusElem]]] = {}
        for (k, l), b in other.entries.items():
            rows.setdefault(k, []).append((l, b))
        out: dict[Entry, TorusElem] = {}
        for (i, j), a in self.entries.items():
            for l, b in rows.get(j, ()):
                p = a * b
                key = (i, l)
                out[key] = out[key] + p if key in out else p
        return MatElem(self.data, out)

    def __rmul__(self, other: Scalar) -> MatElem:
        return self * other

    def __truediv__(self, c: Scalar) -> MatElem:
        return self * (1 / Fraction(c))

    def terms(self) -> Iterator[tuple[int, int, Vec, Fraction]]:
        for (i, j), a in sorted(self.entries.items()):
            for sigma, c in a.items():
                yield i, j, sigma, c

    def vector(self) -> dict[tuple[int, int, Vec], Fraction]:
        """Coordinates in the basis e_ij(t^s)."""
        return {(i, j, s): c for i, j, s, c in self.terms()}

    def to_json(self) -> dict:
        return {
            "l": self.data.l,
            "entries": [
                {"i": i, "j": j, "value": v.to_json()} for (i, j), v in sorted(self.entries.items())
            ],
        }

    @classmethod
    def from_json(cls, data: HermitianData, doc: Mapping) -> MatElem:
        if int(doc["l"]) != data.l:
            raise ValueError("matrix size does not match the hermitian data")
        out = {}
        for ent in doc["entries"]:
            i, j = int(ent["i"]), int(ent["j"])
            data.check_index(i)
            data.check_index(j)
            out[(i, j)] = TorusElem.from_json(data.spec, ent["value"])
        return cls(data, out)


def _coerce(data: HermitianData, alpha: TorusElem | Scalar) -> TorusElem:
    return data.spec.coerce(alpha)


# ----------------------------------------------------------- basic matrices


def e_mat(data: HermitianData, i: int, j: int, alpha: TorusElem | Scalar = 1) -> MatElem:
    data.check_index(i)
    data.check_index(j)
    return MatElem(data, {(i, j): _coerce(data, alpha)})


def star(T: MatElem) -> MatElem:
    """Adjoint: e_ij(a)* = e_{bar j, bar i}(gamma_j^-1 conj(a) gamma_i)."""
    d = T.data
    out: dict[Entry, TorusElem] = {}
    for (i, j), a in T.entries.items():
        key = (d.bar(j), d.bar(i))
        v = d.g_inv(j) * a.conj() * d.g(i)
        out[key] = out[key] + v if key in out else v
    return MatElem(d, out)


def u_mat(data: HermitianData, i: int, j: int, alpha: TorusElem | Scalar = 1) -> MatElem:
    e = e_mat(data, i, j, alpha)
    return e - star(e)


def U_op(
    data: HermitianData,
    i: int,
    alpha: TorusElem | Scalar,
    j: int,
    beta: TorusElem | Scalar = 1,
) -> MatElem:
    """The operator U(x_i.alpha, x_j.beta) = u_{i, bar j}(alpha conj(beta) gamma_j)."""
    a = _coerce(data, alpha)
    b = _coerce(data, beta)
    return u_mat(data, i, data.bar(j), a * b.conj() * data.g(j))


def bracket(T1: MatElem, T2: MatElem) -> MatElem:
    return T1 * T2 - T2 * T1


def trace(T: MatElem) -> TorusElem:
    out = T.data.spec.zero()
    for (i, j), a in T.entries.items():
        if i == j:
            out = out + a
    return out


def in_F(T: MatElem) -> bool:
    return star(T) == -T


def in_S(T: MatElem) -> bool:
    return in_F(T) and not center_project(trace(T))


def h_elem(data: HermitianData, a: int) -> MatElem:
    """h_a = U(x_a, x_{bar a}) = e_aa(1) - e_{bar a, bar a}(1), 1 <= a <= r."""
    if not 1 <= a <= data.r:
        raise IndexError(f"h_{a} needs 1 <= a <= r")
    return u_mat(data, a, a, 1)


def trace_form(T1: MatElem, T2: MatElem) -> Fraction:
    """Coefficient of t^0 in tr(T1 T2)."""
    check_same_data(T1.data, T2.data)
    total = Fraction(0)
    for (i, j), a in T1.entries.items():
        b = T2.entries.get((j, i))
        if b is not None:
            total += varpi(a * b)
    return total


def centroid_act(z: TorusElem, T: MatElem) -> MatElem:
    """Left multiplication of every entry by a central symmetric z."""
    check_same(z.spec, T.data.spec)
    if center_project(z) != z or z.conj() != z:
        raise ValueError("z must be central and symmetric")
    return MatElem(T.data, {k: z * v for k, v in T.entries.items()})


# ----------------------------------------------------------- canonical form


@dataclass(frozen=True)
class CanonicalForm:
    """T = sum_{i < bar j} u_ij(alpha_ij) + sum_i u_{i, bar i}(b_i gamma_i)."""

    alpha: dict[Entry, TorusElem]
    b: dict[int, TorusElem]

    def reassemble(self, data: HermitianData) -> MatElem:
        out = MatElem.zero(data)
        for (i, j), a in sorted(self.alpha.items()):
            out = out + u_mat(data, i, j, a)
        for i, bi in sorted(self.b.items()):
            out = out + u_mat(data, i, data.bar(i), bi * data.g(i))
        return out


def canonical_form(T: MatElem) -> CanonicalForm:
    if not in_F(T):
        raise ValueError("canonical form needs a skew-adjoint matrix")
    d = T.data
    alpha = {}
    b = {}
    for (i, j), a in T.entries.items():
        jb = d.bar(j)
        if i < jb:
            alpha[(i, j)] = a
        elif i == jb:
            # the (i, bar i) entry equals 2 b_i gamma_i
            b[i] = a * d.g_inv(i) / 2
    return CanonicalForm(alpha, b)


# ---------------------------------------------------------------- gradings


def bidegree(data: HermitianData, i: int, j: int, sigma: Sequence[int]) -> BiDegree:
    """Degree of e_ij(t^sigma)."""
    root = tuple(a - b for a, b in zip(data.eps(i), data.eps(j)))
    ext = tuple(ti - tj + 2 * s for ti, tj, s in zip(data.tau[i - 1], data.tau[j - 1], sigma))
    return BiDegree(root, ext)


def decompose(T: MatElem) -> dict[BiDegree, MatElem]:
    d = T.data
    parts: dict[BiDegree, dict[Entry, dict[Vec, Fraction]]] = {}
    for i, j, sigma, c in T.terms():
        key = bidegree(d, i, j, sigma)
        parts.setdefault(key, {}).setdefault((i, j), {})[sigma] = c
    return {
        k: MatElem(d, {e: TorusElem(d.spec, v) for e, v in ents.items()})
        for k, ents in sorted(parts.items())
    }


def homogeneous_degree(T: MatElem) -> BiDegree | None:
    parts = decompose(T)
    if len(parts) != 1:
        return None
    return next(iter(parts))


# -------------------------------------------------------------- root system


def bc_roots(r: int) -> list[Root]:
    roots = set()
    for a in range(r):
        for s in (1, -1):
            e = [0] * r
            e[a] = s
            roots.add(tuple(e))
            e[a] = 2 * s
            roots.add(tuple(e))
        for b in range(a + 1, r):
            for s in (1, -1):
                for t in (1, -1):
                    e = [0] * r
                    e[a], e[b] = s, t
                    roots.add(tuple(e))
    return sorted(roots)


def root_kind(mu: Root) -> str | None:
    """'short', 'medium' or 'long' for roots of BC_r, None otherwise."""
    nz = [x for x in mu if x]
    if len(nz) == 1 and abs(nz[0]) == 1:
        return "short"
    if len(nz) == 1 and abs(nz[0]) == 2:
        return "long"
    if len(nz) == 2 and all(abs(x) == 1 for x in nz):
        return "medium"
    return None


def is_root(mu: Root) -> bool:
    return root_kind(mu) is not None


def indivisible_roots(r: int) -> list[Root]:
    return [mu for mu in bc_roots(r) if root_kind(mu) != "long"]


def _check_halfdeg(data: HermitianData, h: Sequence[int]) -> HalfDeg:
    h = tuple(int(x) for x in h)
    if len(h) != data.n:
        raise ValueError(f"degree {h} has wrong length")
    return h


def root_space_basis(data: HermitianData, mu: Root, h: Sequence[int]) -> list[MatElem]:
    """Basis of S_mu^h for mu in BC_r (at most one element)."""
    mu = tuple(mu)
    if len(mu) != data.r:
        raise ValueError("root has wrong length")
    kind = root_kind(mu)
    if kind is None:
        raise ValueError(f"{mu} is not a root of BC_{data.r}")
    h = _check_halfdeg(data, h)
    spec = data.spec
    nz = [(a + 1, x) for a, x in enumerate(mu) if x]
    if kind == "medium":
        if not is_lattice(h):
            return []
        i, j = sorted(data.index_of_weight(a, x) for a, x in nz)
        return [U_op(data, i, spec.monomial(halve(h)), j)]
    if kind == "long":
        if not is_lattice(h) or not spec.in_lambda_minus(halve(h)):
            return []
        a, x = nz[0]
        i = data.index_of_weight(a, x)
        return [U_op(data, i, spec.monomial(halve(h)), i)]
    a, x = nz[0]
    i = data.index_of_weight(a, x)
    k = data.aniso_by_bits.get(tilde(h))
    if k is None:
        return []
    lam = halve(vsub(h, data.rho(k)))
    return [U_op(data, k, spec.monomial(lam), i)]


def zero_root_basis(data: HermitianData, h: Sequence[int]) -> list[MatElem]:
    """Basis of S_0^h, the root-zero part of degree h."""
    h = _check_halfdeg(data, h)
    spec = data.spec
    F0: list[MatElem] = []
    if is_lattice(h):
        sigma = halve(h)
        F0 += [u_mat(data, a, a, spec.monomial(sigma)) for a in range(1, data.r + 1)]
    aniso = list(data.anisotropic)
    for p, k in enumerate(aniso):
        for k2 in aniso[p:]:
            shift = vsub(h, vsub(data.rho(k), data.rho(k2)))
            if not is_lattice(shift):
                continue
            u = u_mat(data, k, k2, spec.monomial(halve(shift)))
            if u:
                F0.append(u)
    if not is_lattice(h) or not spec.is_central(halve(h)):
        return F0
    # central trace component must vanish
    sigma = halve(h)
    coeffs = [trace(b).coeff(sigma) for b in F0]
    pivot = next((p for p, c in enumerate(coeffs) if c), None)
    if pivot is None:
        return F0
    b0, c0 = F0[pivot], coeffs[pivot]
    return [b - b0 * (c / c0) if c else b for p, (b, c) in enumerate(zip(F0, coeffs)) if p != pivot]


def cell_basis(data: HermitianData, mu: Root, h: Sequence[int]) -> list[MatElem]:
    """Basis of S_mu^h for any mu; empty off BC_r and 0."""
    mu = tuple(mu)
    if not any(mu):
        return zero_root_basis(data, h)
    if not is_root(mu):
        return []
    return root_space_basis(data, mu, h)


def coroot_coeffs(mu: Root) -> tuple[int, ...]:
    """mu-check in the basis h_1..h_r: 2 mu / (mu, mu)."""
    norm = sum(x * x for x in mu)
    if root_kind(tuple(mu)) is None:
        raise ValueError(f"{mu} is not a root")
    return tuple(2 * x // norm for x in mu)


def coroot(data: HermitianData, mu: Root) -> MatElem:
    out = MatElem.zero(data)
    for a, c in enumerate(coroot_coeffs(tuple(mu)), start=1):
        if c:
            out = out + h_elem(data, a) * c
    return out


def pairing(nu: Root, mu: Root) -> int:
    """<nu | mu-check>."""
    return sum(x * c for x, c in zip(nu, coroot_coeffs(mu)))


@dataclass(frozen=True)
class Sl2Pair:
    e: MatElem
    f: MatElem
    h: MatElem


def sl2_check(data: HermitianData, mu: Root, h: Sequence[int]) -> Sl2Pair:
    """e in S_mu^h and f in S_-mu^-h with [e, f] = mu-check, verified exactly."""
    mu = tuple(mu)
    h = _check_halfdeg(data, h)
    es = root_space_basis(data, mu, h)
    fs = root_space_basis(data, tuple(-x for x in mu), tuple(-x for x in h))
    if len(es) != 1 or len(fs) != 1:
        raise ValueError(f"root space ({mu}, {h}) or its opposite is not one-dimensional")
    e, f = es[0], fs[0]
    cr = coroot(data, mu)
    ef = bracket(e, f)
    # [e, f] must be a multiple of the coroot; read the factor off h_a entries
    key = next(iter(sorted(cr.entries)))
    ratio = ef[key].coeff((0,) * data.n) / cr[key].coeff((0,) * data.n)
    if ratio == 0 or ef != cr * ratio:
        raise ValueError(f"[e, f] is not a nonzero multiple of the coroot at ({mu}, {h})")
    f = f / ratio
    return Sl2Pair(e, f, cr)


def mat_coords(T: MatElem, basis: Sequence[MatElem]) -> list[Fraction] | None:
    """Coordinates of T in a linearly independent list, or None if outside the span."""
    return solve_in_span([b.vector() for b in basis], T.vector())
