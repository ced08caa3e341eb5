"""The maximal extended affine Lie algebra E = S + C + D built on S.

D is spanned by t^sigma d_s (sigma in Gamma_m, s in Q^n with
sigma# . s = 0), C is its graded dual, and the bracket of E adds the
derivation action, the contragredient action and a 2-cocycle to the
bracket of S.

All coordinates are taken in an adapted basis of the lattice.  An
:class:`Eala` transports its input data into that basis first, so the
matrices it handles live over the transported hermitian data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .bitquad import BitMatrix, independent_subset
from .hermitian import HalfDeg, HermitianData, build_data, halve, is_lattice
from .lietorus import Slice, Window
from .linalg import solve_in_span
from .torus import TorusElem, TorusSpec, Vec, tilde, varpi
from .unitary import MatElem, bracket, decompose, h_elem, trace_form

QVec = tuple[Fraction, ...]
IntMatrix = list[list[int]]


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def qvec(v: Iterable) -> QVec:
    return tuple(Fraction(x) for x in v)


# ------------------------------------------------------------ adapted basis


def _matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def _identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def lift_unimodular(cols: Sequence[int], n: int) -> tuple[IntMatrix, IntMatrix]:
    """An integer matrix P with det +-1 reducing mod 2 to the given columns, and its inverse.

    Column-reduce the Z_2 matrix to the identity, then undo each column
    operation over Z.  Swaps and transvections lift to unimodular
    matrices, so P is invertible over Z.
    """
    work = list(cols)
    ops: list[tuple[str, int, int]] = []
    for c in range(n):
        piv = next((k for k in range(c, n) if (work[k] >> c) & 1), None)
        if piv is None:
            raise ValueError("columns are not a basis of Z_2^n")
        if piv != c:
            work[c], work[piv] = work[piv], work[c]
            ops.append(("swap", c, piv))
        for k in range(n):
            if k != c and (work[k] >> c) & 1:
                work[k] ^= work[c]
                ops.append(("add", c, k))
    # B * E_1 ... E_m = I, so P = E_m^-1 ... E_1^-1 and P^-1 = E_1 ... E_m
    P, Pinv = _identity(n), _identity(n)
    for kind, a, b in ops:
        E, Einv = _identity(n), _identity(n)
        if kind == "swap":
            for M in (E, Einv):
                M[a][a] = M[b][b] = 0
                M[a][b] = M[b][a] = 1
        else:
            # column b += column a
            E[a][b], Einv[a][b] = 1, -1
        P = _matmul(Einv, P)
        Pinv = _matmul(Pinv, E)
    return P, Pinv


def _apply(M: IntMatrix, v: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(M[i][k] * v[k] for k in range(len(v))) for i in range(len(M)))


def _bits_apply(M: IntMatrix, v: int) -> int:
    n = len(M)
    return tilde(_apply(M, [(v >> k) & 1 for k in range(n)]))


@dataclass(frozen=True)
class AdaptedBasis:
    """Lattice basis sigma_1..sigma_n fitted to the span of M.

    ``change`` has the sigma_i as columns.  ``lambda_basis`` lists the
    basis of Gamma in HalfDeg coordinates: sigma_i itself for i <= n1
    (this is half of sigma_i, doubled) and 2 sigma_i after that.
    """

    n1: int
    change: tuple[tuple[int, ...], ...]
    inverse: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.change)

    @property
    def sigmas(self) -> list[Vec]:
        return [tuple(self.change[i][j] for i in range(self.n)) for j in range(self.n)]

    @property
    def lambda_basis(self) -> list[HalfDeg]:
        return [s if j < self.n1 else tuple(2 * x for x in s) for j, s in enumerate(self.sigmas)]

    def to_adapted(self, sigma: Sequence[int]) -> Vec:
        """Lattice coordinates in the sigma basis."""
        return _apply([list(r) for r in self.inverse], sigma)

    def sharp(self, h: Sequence[int]) -> QVec:
        """Coordinates of a HalfDeg vector in the lambda basis."""
        c = self.to_adapted(h)
        return tuple(Fraction(x) if j < self.n1 else Fraction(x, 2) for j, x in enumerate(c))

    def to_json(self) -> dict:
        return {
            "n1": self.n1,
            "change": [list(r) for r in self.change],
            "lambda_basis": [list(v) for v in self.lambda_basis],
        }


def adapt_basis(data: HermitianData) -> AdaptedBasis:
    n = data.n
    chosen = independent_subset(v for v in data.M if v)
    cols = list(chosen)
    spanned = {0}
    for v in cols:
        spanned |= {s ^ v for s in spanned}
    for k in range(n):
        e = 1 << k
        if e not in spanned:
            cols.append(e)
            spanned |= {s ^ e for s in spanned}
    P, Pinv = lift_unimodular(cols, n)
    return AdaptedBasis(len(chosen), tuple(map(tuple, P)), tuple(map(tuple, Pinv)))


def sharp(basis: AdaptedBasis, h: Sequence[int]) -> QVec:
    return basis.sharp(h)


def transport(data: HermitianData, basis: AdaptedBasis) -> HermitianData:
    """The same construction written in the adapted lattice coordinates.

    kappa and M are carried through the change of basis and kappa_b is
    rebuilt by the deterministic compatible rule.
    """
    P = [list(r) for r in basis.change]
    Pinv = [list(r) for r in basis.inverse]
    n = data.n
    kappa = data.spec.kappa
    g = BitMatrix(n, tuple(_bits_apply(P, 1 << k) for k in range(n)))
    new_kappa = kappa.compose(g)
    new_M = [_bits_apply(Pinv, v) for v in data.M]
    return build_data(data.r, TorusSpec.from_form(new_kappa), new_M)


# --------------------------------------------------------- D and C sectors


@dataclass(frozen=True)
class DerElem:
    """Finite sum of t^sigma d_s, stored as {sigma: s}."""

    terms: Mapping[Vec, QVec] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", {k: v for k, v in self.terms.items() if any(v)})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: DerElem) -> DerElem:
        return DerElem(_merge(self.terms, other.terms, 1))

    def __sub__(self, other: DerElem) -> DerElem:
        return DerElem(_merge(self.terms, other.terms, -1))

    def __neg__(self) -> DerElem:
        return self.scale(-1)

    def scale(self, c: Fraction | int) -> DerElem:
        return DerElem({k: tuple(c * x for x in v) for k, v in self.terms.items()})

    def items(self) -> list[tuple[Vec, QVec]]:
        return sorted(self.terms.items())


@dataclass(frozen=True)
class DualElem:
    """Finite sum of c_sigma(s) in C^sigma, with s reduced modulo sigma#.

    Construct through :meth:`Eala.dual` so that representatives are
    canonical; equality is then plain dict equality.
    """

    terms: Mapping[Vec, QVec] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", {k: v for k, v in self.terms.items() if any(v)})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def items(self) -> list[tuple[Vec, QVec]]:
        return sorted(self.terms.items())


def _merge(a: Mapping[Vec, QVec], b: Mapping[Vec, QVec], sign: int) -> dict[Vec, QVec]:
    out = dict(a)
    for k, v in b.items():
        if k in out:
            out[k] = tuple(x + sign * y for x, y in zip(out[k], v))
        else:
            out[k] = tuple(sign * y for y in v)
    return out


@dataclass(frozen=True)
class EalaElem:
    s_part: MatElem
    c_part: DualElem
    d_part: DerElem

    def __bool__(self) -> bool:
        return bool(self.s_part) or bool(self.c_part) or bool(self.d_part)


# ------------------------------------------------------------------- Eala


class Eala:
    def __init__(self, data: HermitianData):
        self.source = data
        self.basis = adapt_basis(data)
        self.data = transport(data, self.basis)
        self.spec = self.data.spec
        self.n = data.n
        self.n1 = self.basis.n1

    # coordinates ---------------------------------------------------------
    def sharp(self, h: Sequence[int]) -> QVec:
        """lambda-coordinates of a HalfDeg vector given in adapted coordinates."""
        return tuple(Fraction(x) if j < self.n1 else Fraction(x, 2) for j, x in enumerate(h))

    def sigma_sharp(self, sigma: Sequence[int]) -> QVec:
        return self.sharp(tuple(2 * x for x in sigma))

    def in_gamma_m(self, sigma: Sequence[int]) -> bool:
        return self.spec.in_gamma_m(tuple(sigma))

    def _check_sigma(self, sigma: Sequence[int]) -> Vec:
        sigma = tuple(int(x) for x in sigma)
        if len(sigma) != self.n or not self.in_gamma_m(sigma):
            raise ValueError(f"{sigma} is not a degree of central symmetric elements")
        return sigma

    # constructors ---------------------------------------------------------
    def der(self, sigma: Sequence[int], s: Sequence) -> DerElem:
        sigma = self._check_sigma(sigma)
        s = qvec(s)
        if dot(self.sigma_sharp(sigma), s):
            raise ValueError(f"t^{sigma} d_{s} violates the skewness constraint")
        return DerElem({sigma: s})

    def project(self, sigma: Vec, s: QVec) -> QVec:
        """Canonical representative of s modulo Q sigma#."""
        ss = self.sigma_sharp(sigma)
        norm = dot(ss, ss)
        if not norm:
            return s
        c = dot(s, ss) / norm
        return tuple(x - c * y for x, y in zip(s, ss))

    def dual(self, terms: Mapping[Sequence[int], Sequence]) -> DualElem:
        out: dict[Vec, QVec] = {}
        for sigma, s in terms.items():
            sigma = self._check_sigma(sigma)
            v = qvec(s)
            if sigma in out:
                v = tuple(x + y for x, y in zip(out[sigma], v))
            out[sigma] = v
        return DualElem({k: self.project(k, v) for k, v in out.items()})

    def dual_add(self, a: DualElem, b: DualElem, sign: int = 1) -> DualElem:
        return self.dual(_merge(a.terms, b.terms, sign))

    def elem(self, T: MatElem | None = None, c: DualElem | None = None,
             d: DerElem | None = None) -> EalaElem:
        return EalaElem(T if T is not None else MatElem.zero(self.data),
                        c if c is not None else DualElem(), d if d is not None else DerElem())

    def zero(self) -> EalaElem:
        return self.elem()

    # actions --------------------------------------------------------------
    def d_act(self, sigma: Sequence[int], s: Sequence, T: MatElem) -> MatElem:
        """(t^sigma d_s)(T): scale e_ij(t^tau) by s . deg# and multiply by t^sigma."""
        sigma = self._check_sigma(sigma)
        s = qvec(s)
        if any(sigma) and dot(self.sigma_sharp(sigma), s):
            raise ValueError("derivation violates the skewness constraint")
        z = self.spec.monomial(sigma)
        d = self.data
        out: dict[tuple[int, int], TorusElem] = {}
        for i, j, tau, c in T.terms():
            ext = tuple(a - b + 2 * t for a, b, t in zip(d.tau[i - 1], d.tau[j - 1], tau))
            f = dot(s, self.sharp(ext))
            if f:
                v = z * self.spec.monomial(tau, c * f)
                out[(i, j)] = out[(i, j)] + v if (i, j) in out else v
        return MatElem(d, out)

    def der_apply(self, D: DerElem, T: MatElem) -> MatElem:
        out = MatElem.zero(self.data)
        for sigma, s in D.items():
            out = out + self.d_act(sigma, s, T)
        return out

    def d_bracket(self, d1: DerElem, d2: DerElem) -> DerElem:
        out: dict[Vec, QVec] = {}
        for sg, s in d1.items():
            sgs = self.sigma_sharp(sg)
            for rho, r in d2.items():
                rhos = self.sigma_sharp(rho)
                a, b = dot(rhos, s), dot(sgs, r)
                v = tuple(a * ri - b * si for ri, si in zip(r, s))
                key = tuple(x + y for x, y in zip(sg, rho))
                out = _merge(out, {key: v}, 1)
        return DerElem(out)

    def c_act(self, D: DerElem, c: DualElem) -> DualElem:
        out: dict[Vec, QVec] = {}
        for rho, r in D.items():
            rhos = self.sigma_sharp(rho)
            for sg, s in c.items():
                a, b = dot(self.sigma_sharp(sg), r), dot(s, r)
                v = tuple(a * si + b * x for si, x in zip(s, rhos))
                out = _merge(out, {tuple(x + y for x, y in zip(sg, rho)): v}, 1)
        return self.dual(out)

    def evaluate(self, c: DualElem, D: DerElem) -> Fraction:
        """c(D): c_sigma(s) pairs with the t^-sigma d_r term as s . r."""
        total = Fraction(0)
        for sg, s in c.items():
            r = D.terms.get(tuple(-x for x in sg))
            if r is not None:
                total += dot(s, r)
        return total

    def cocycle(self, T1: MatElem, T2: MatElem) -> DualElem:
        """varsigma(T1, T2), read off from (d T1 | T2) for d = t^-sigma d_r.

        Only pairs of terms e_ij(t^a), e_ji(t^b) with a + b in Gamma_m
        contribute, and then the value is linear in r with coefficient
        vector sign * (a + tau_i/2 - tau_j/2)#.
        """
        if T1.data != self.data or T2.data != self.data:
            raise ValueError("matrices belong to different hermitian data")
        d = self.data
        out: dict[Vec, QVec] = {}
        rows: dict[tuple[int, int], TorusElem] = T2.entries
        for (i, j), x in T1.entries.items():
            y = rows.get((j, i))
            if y is None:
                continue
            for a, c1 in x.terms.items():
                ext = tuple(p - q + 2 * t for p, q, t in zip(d.tau[i - 1], d.tau[j - 1], a))
                sh = self.sharp(ext)
                for b, c2 in y.terms.items():
                    sg = tuple(u + v for u, v in zip(a, b))
                    if not self.in_gamma_m(sg):
                        continue
                    z = self.spec.monomial(tuple(-u for u in sg))
                    coef = varpi(z * self.spec.monomial(a, c1) * self.spec.monomial(b, c2))
                    if coef:
                        out = _merge(out, {sg: tuple(coef * v for v in sh)}, 1)
        return self.dual(out)

    # bracket and form -------------------------------------------------------
    def bracket(self, x: EalaElem, y: EalaElem) -> EalaElem:
        T = (bracket(x.s_part, y.s_part) + self.der_apply(x.d_part, y.s_part)
             - self.der_apply(y.d_part, x.s_part))
        c = self.dual_add(self.c_act(x.d_part, y.c_part), self.c_act(y.d_part, x.c_part), -1)
        c = self.dual_add(c, self.cocycle(x.s_part, y.s_part))
        return EalaElem(T, c, self.d_bracket(x.d_part, y.d_part))

    def form(self, x: EalaElem, y: EalaElem) -> Fraction:
        return (trace_form(x.s_part, y.s_part) + self.evaluate(x.c_part, y.d_part)
                + self.evaluate(y.c_part, x.d_part))

    def add(self, x: EalaElem, y: EalaElem, sign: int = 1) -> EalaElem:
        return EalaElem(x.s_part + y.s_part * sign, self.dual_add(x.c_part, y.c_part, sign),
                        x.d_part + y.d_part.scale(sign))

    def scale(self, x: EalaElem, c: Fraction | int) -> EalaElem:
        return EalaElem(x.s_part * c, self.dual({k: tuple(c * a for a in v) for k, v in x.c_part.terms.items()}),
                        x.d_part.scale(c))

    # graded pieces ------------------------------------------------------------
    def d_basis(self, sigma: Sequence[int]) -> list[QVec]:
        """Basis of {s : sigma# . s = 0}."""
        sigma = self._check_sigma(sigma)
        ss = self.sigma_sharp(sigma)
        n = self.n
        unit = [tuple(Fraction(int(i == k)) for i in range(n)) for k in range(n)]
        p = next((k for k, x in enumerate(ss) if x), None)
        if p is None:
            return unit
        return [tuple(unit[k][i] - ss[k] / ss[p] * unit[p][i] for i in range(n))
                for k in range(n) if k != p]

    def c_basis(self, sigma: Sequence[int]) -> list[QVec]:
        """Canonical representatives of a basis of C^sigma."""
        sigma = self._check_sigma(sigma)
        ss = self.sigma_sharp(sigma)
        p = next((k for k, x in enumerate(ss) if x), None)
        n = self.n
        return [self.project(sigma, tuple(Fraction(int(i == k)) for i in range(n)))
                for k in range(n) if k != p]

    def gamma_m_points(self, window: Window) -> list[Vec]:
        """sigma in Gamma_m with 2 sigma in the window."""
        return [halve(h) for h in window.points(self.data)
                if is_lattice(h) and self.in_gamma_m(halve(h))]

    def cartan(self) -> list[EalaElem]:
        """Basis of H = h + C^0 + D^0."""
        zero = (0,) * self.n
        out = [self.elem(T=h_elem(self.data, a)) for a in range(1, self.data.r + 1)]
        out += [self.elem(c=self.dual({zero: s})) for s in self.c_basis(zero)]
        out += [self.elem(d=DerElem({zero: s})) for s in self.d_basis(zero)]
        return out


# ------------------------------------------------------------------ export


@dataclass
class BasisEntry:
    id: int
    sector: str
    root: tuple[int, ...]
    ext: HalfDeg
    elem: EalaElem

    def key(self) -> tuple:
        return (self.sector, self.root, self.ext)


def windowed_basis(E: Eala, window: Window | int | None) -> list[BasisEntry]:
    """Homogeneous basis of E on the window: S cells, then C and D pieces.

    ``window=None`` stands for the empty window and gives the basis of H.
    """
    zero_root = (0,) * E.data.r
    zero = (0,) * E.n
    if window is None:
        out = []
        for x in E.cartan():
            sector = "S" if x.s_part else "C" if x.c_part else "D"
            out.append(BasisEntry(len(out), sector, zero_root, zero, x))
        return out
    if isinstance(window, int):
        window = Window(window)
    sl = Slice(E.data, window)
    out: list[BasisEntry] = []
    for mu, h, x in sorted(sl.elements(), key=lambda t: (t[1], t[0])):
        out.append(BasisEntry(len(out), "S", tuple(mu), tuple(h), E.elem(T=x)))
    for sg in E.gamma_m_points(window):
        h = tuple(2 * x for x in sg)
        for s in E.c_basis(sg):
            out.append(BasisEntry(len(out), "C", zero_root, h, E.elem(c=E.dual({sg: s}))))
    for sg in E.gamma_m_points(window):
        h = tuple(2 * x for x in sg)
        for s in E.d_basis(sg):
            out.append(BasisEntry(len(out), "D", zero_root, h, E.elem(d=DerElem({sg: s}))))
    return out


def _homogeneous_vectors(E: Eala, x: EalaElem) -> dict[tuple, dict]:
    """Split x by (sector, root, ext) into coordinate vectors."""
    zero_root = (0,) * E.data.r
    out: dict[tuple, dict] = {}
    for deg, part in decompose(x.s_part).items():
        out[("S", tuple(deg.root), tuple(deg.ext))] = part.vector()
    for sg, s in x.c_part.items():
        out[("C", zero_root, tuple(2 * v for v in sg))] = dict(enumerate(s))
    for sg, s in x.d_part.items():
        out[("D", zero_root, tuple(2 * v for v in sg))] = dict(enumerate(s))
    return out


def _vec(E: Eala, b: BasisEntry) -> dict:
    return _homogeneous_vectors(E, b.elem)[b.key()]


def coordinates(E: Eala, x: EalaElem, basis: Sequence[BasisEntry]) -> dict[int, Fraction]:
    by_key: dict[tuple, list[BasisEntry]] = {}
    for b in basis:
        by_key.setdefault(b.key(), []).append(b)
    out: dict[int, Fraction] = {}
    for key, vec in _homogeneous_vectors(E, x).items():
        group = by_key.get(key)
        if not group:
            raise ValueError(f"component {key} lies outside the windowed basis")
        got = solve_in_span([_vec(E, b) for b in group], vec)
        if got is None:
            raise ValueError(f"component {key} is not in the span of the basis")
        out.update({b.id: c for b, c in zip(group, got) if c})
    return out


def _rational(c: Fraction) -> str:
    return str(Fraction(c))


def export_structure_constants(data: HermitianData, window: Window | int | None = 1) -> dict:
    """Brackets and form values on a windowed homogeneous basis.

    Brackets are listed for pairs a < b whose degree sum stays inside the
    window, so every result is expressible in the basis.  ``window=None``
    exports H alone.
    """
    if isinstance(window, int):
        window = Window(window)
    E = Eala(data)
    basis = windowed_basis(E, window)
    inside = Window(0) if window is None else window
    brackets = []
    form = []
    for a, x in enumerate(basis):
        for y in basis[a + 1:]:
            ext = tuple(p + q for p, q in zip(x.ext, y.ext))
            if ext in inside:
                z = E.bracket(x.elem, y.elem)
                if z:
                    terms = coordinates(E, z, basis)
                    brackets.append({"a": x.id, "b": y.id, "terms": [
                        {"c": k, "coef": _rational(v)} for k, v in sorted(terms.items())]})
            if not any(ext):
                value = E.form(x.elem, y.elem)
                if value:
                    form.append({"a": x.id, "b": y.id, "value": _rational(value)})
        if not any(x.ext):
            value = E.form(x.elem, x.elem)
            if value:
                form.append({"a": x.id, "b": x.id, "value": _rational(value)})
    form.sort(key=lambda f: (f["a"], f["b"]))
    return {
        "window": None if window is None else window.w,
        "data": data.to_json(),
        "adapted_basis": E.basis.to_json(),
        "basis": [
            {"id": b.id, "sector": b.sector, "root": list(b.root), "ext": list(b.ext),
             "element": _elem_json(b.elem)}
            for b in basis
        ],
        "brackets": brackets,
        "form": form,
        "dimensions": graded_dimensions(basis),
    }


def _elem_json(x: EalaElem) -> dict:
    if x.c_part or x.d_part:
        part = x.c_part if x.c_part else x.d_part
        (sg, s), = part.items()
        return {"sigma": list(sg), "s": [_rational(v) for v in s]}
    return x.s_part.to_json()


def graded_dimensions(basis: Sequence[BasisEntry]) -> list[dict]:
    counts: dict[tuple, int] = {}
    for b in basis:
        counts[b.key()] = counts.get(b.key(), 0) + 1
    return [{"sector": k[0], "root": list(k[1]), "ext": list(k[2]), "dim": v}
            for k, v in sorted(counts.items())]


@dataclass
class StructureConstants:
    """A re-imported export: basis labels plus sparse tables."""

    basis: list[dict]
    brackets: dict[tuple[int, int], dict[int, Fraction]]
    form: dict[tuple[int, int], Fraction]
    raw: dict

    def bracket(self, a: int, b: int) -> dict[int, Fraction]:
        if a == b:
            return {}
        if a < b:
            return dict(self.brackets.get((a, b), {}))
        return {k: -v for k, v in self.brackets.get((b, a), {}).items()}

    def form_value(self, a: int, b: int) -> Fraction:
        return self.form.get((min(a, b), max(a, b)), Fraction(0))

    def to_json(self) -> dict:
        return self.raw


def import_structure_constants(doc: Mapping) -> StructureConstants:
    brackets = {
        (int(e["a"]), int(e["b"])): {int(t["c"]): Fraction(t["coef"]) for t in e["terms"]}
        for e in doc["brackets"]
    }
    form = {(int(e["a"]), int(e["b"])): Fraction(e["value"]) for e in doc["form"]}
    return StructureConstants(list(doc["basis"]), brackets, form, dict(doc))

