"""Windowed verification of the Lie torus axioms, plus classification helpers.

Every check here is exact.  A window is a finite box of external degrees,
so a passing report certifies the statements on that box only.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

from .bitquad import BitMatrix, find_isometry, isometry_classes, orbit_representative
from .hermitian import HalfDeg, HermitianData, gamma_basis, halve, is_lattice
from .lattice import same_lattice
from .linalg import Echelon, ModEchelon, solve_in_span
from .report import Check, Report
from .torus import TorusElem, center_project, commutator, commutator_part, commutator_witness
from .unitary import (
    MatElem,
    Root,
    U_op,
    bc_roots,
    bracket,
    cell_basis,
    centroid_act,
    coroot,
    decompose,
    e_mat,
    h_elem,
    in_S,
    indivisible_roots,
    is_root,
    pairing,
    root_kind,
    sl2_check,
    trace,
)


@dataclass(frozen=True)
class Window:
    """HalfDeg vectors with every coordinate in [-w, w]."""

    w: int

    def __post_init__(self) -> None:
        if self.w < 0:
            raise ValueError("window bound must be nonnegative")

    def __contains__(self, h: Sequence[int]) -> bool:
        return all(abs(x) <= self.w for x in h)

    def points(self, data: HermitianData) -> list[HalfDeg]:
        pts = product(range(-self.w, self.w + 1), repeat=data.n)
        return [p for p in pts if data.in_gamma(p)]

    def doubled(self) -> Window:
        return Window(2 * self.w)


def _add(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def _neg(a: Sequence[int]) -> tuple[int, ...]:
    return tuple(-x for x in a)


def _norm(h: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    return (sum(abs(x) for x in h), tuple(h))


class Slice:
    """Homogeneous bases of S on a window, computed on demand."""

    def __init__(self, data: HermitianData, window: Window):
        self.data = data
        self.window = window
        self.zero_root: Root = (0,) * data.r
        self._cells: dict[tuple[Root, HalfDeg], list[MatElem]] = {}

    @cached_property
    def points(self) -> list[HalfDeg]:
        return self.window.points(self.data)

    @cached_property
    def roots(self) -> list[Root]:
        return [self.zero_root] + bc_roots(self.data.r)

    def basis(self, mu: Root, h: HalfDeg) -> list[MatElem]:
        key = (tuple(mu), tuple(h))
        if key not in self._cells:
            self._cells[key] = cell_basis(self.data, mu, h)
        return self._cells[key]

    def cells(self) -> list[tuple[Root, HalfDeg]]:
        """Nonzero (root, degree) cells inside the window."""
        return [(mu, h) for h in self.points for mu in self.roots if self.basis(mu, h)]

    def elements(self) -> list[tuple[Root, HalfDeg, MatElem]]:
        return [(mu, h, x) for mu, h in self.cells() for x in self.basis(mu, h)]


def root_support_type(sl: Slice) -> str:
    long_present = any(root_kind(mu) == "long" for mu, _ in sl.cells())
    return "BC_r" if long_present else "B_r"


# ------------------------------------------------------------------ axioms


def check_LT_axioms(data: HermitianData, window: Window | int = 2, seed: int = 0,
                    samples: int = 200) -> Report:
    if isinstance(window, int):
        window = Window(window)
    sl = Slice(data, window)
    report = Report(f"Lie torus axioms (w={window.w})")
    report.checks.append(_check_lt1(sl, seed, samples))
    report.checks.append(_check_lt2_i(sl))
    report.checks.append(_check_lt2_ii(sl))
    report.checks.append(_check_lt3(sl))
    report.checks.append(_check_lt4(sl))
    return report


def _check_lt1(sl: Slice, seed: int, samples: int) -> Check:
    bad = []
    elems = sl.elements()
    for mu, h, x in elems:
        parts = decompose(x)
        if list(parts) != [(mu, h)] or not in_S(x):
            bad.append(("basis", mu, h))
    rng = random.Random(seed)
    for _ in range(min(samples, len(elems) ** 2)):
        (_, _, x), (_, _, y) = rng.choice(elems), rng.choice(elems)
        for deg in decompose(bracket(x, y)):
            if any(deg.root) and not is_root(deg.root):
                bad.append(("bracket", deg.root, deg.ext))
    kind = root_support_type(sl)
    return Check("LT1", not bad, f"root support of type {kind}", bad)


def _check_lt2_i(sl: Slice) -> Check:
    zero = (0,) * sl.data.n
    missing = [mu for mu in indivisible_roots(sl.data.r) if not sl.basis(mu, zero)]
    return Check("LT2(i)", not missing, "", missing)


def _check_lt2_ii(sl: Slice) -> Check:
    bad = []
    pairs = 0
    coroots_used: set[Root] = set()
    for mu, h in sl.cells():
        if not any(mu):
            continue
        if len(sl.basis(mu, h)) != 1:
            bad.append(("dimension", mu, h))
            continue
        try:
            sl2_check(sl.data, mu, h)
        except ValueError as exc:
            bad.append(("sl2", mu, h, str(exc)))
            continue
        pairs += 1
        coroots_used.add(mu)
    # [e, f] equals the coroot exactly, so [[e, f], x] is the coroot action
    elems = sl.elements()
    for mu in sorted(coroots_used):
        cr = coroot(sl.data, mu)
        for nu, h, x in elems:
            if bracket(cr, x) != x * pairing(nu, mu):
                bad.append(("action", mu, nu, h))
    return Check("LT2(ii)", not bad, f"{pairs} sl2 pairs, {len(coroots_used)} coroots", bad)


def _check_lt3(sl: Slice) -> Check:
    data = sl.data
    big = Slice(data, sl.window.doubled())
    gens: dict[Root, dict[HalfDeg, MatElem]] = {}
    for mu in bc_roots(data.r):
        if root_kind(mu) != "short":
            continue
        for h in big.points:
            b = big.basis(mu, h)
            if b:
                gens.setdefault(mu, {})[h] = b[0]
    short = sorted(gens)
    bad = []
    for mu, h in sl.cells():
        if root_kind(mu) == "short":
            continue
        basis = sl.basis(mu, h)
        ech = Echelon()
        covered = lambda: all(ech.contains(b.vector()) for b in basis)  # noqa: E731
        done = False
        for mu1 in short:
            mu2 = tuple(a - b for a, b in zip(mu, mu1))
            if mu2 not in gens:
                continue
            for h1 in sorted(gens[mu1], key=_norm):
                h2 = tuple(a - b for a, b in zip(h, h1))
                g2 = gens[mu2].get(h2)
                if g2 is None:
                    continue
                if ech.add(bracket(gens[mu1][h1], g2).vector()) and ech.rank >= len(basis) and covered():
                    done = True
                    break
            if done:
                break
        if not done:
            bad.append((mu, h))
    return Check("LT3", not bad, "generated by short root spaces of the doubled window", bad)


def _check_lt4(sl: Slice) -> Check:
    data = sl.data
    supp = sorted({h for _, h in sl.cells()})
    full = same_lattice(supp, gamma_basis(data), data.n)
    return Check("LT4", full, f"{len(supp)} supporting degrees", [] if full else supp[:10])


# --------------------------------------------------------- support lemmas


def check_support_lemmas(data: HermitianData, window: Window | int = 2) -> Report:
    if isinstance(window, int):
        window = Window(window)
    sl = Slice(data, window)
    supp: dict[Root, set[HalfDeg]] = {mu: set() for mu in bc_roots(data.r)}
    for mu, h in sl.cells():
        if any(mu):
            supp[mu].add(h)
    report = Report(f"support lemmas (w={window.w})")

    by_len: dict[str, set[frozenset]] = {}
    for mu, s in supp.items():
        by_len.setdefault(root_kind(mu), set()).add(frozenset(s))
    uneven = [k for k, v in by_len.items() if len(v) != 1]
    report.checks.append(Check("support depends only on length", not uneven, "", uneven))

    zero = (0,) * data.n
    bad = [mu for mu in indivisible_roots(data.r)
           if zero not in supp[mu] or {_neg(h) for h in supp[mu]} != supp[mu]]
    report.checks.append(Check("indivisible supports contain 0 and are symmetric", not bad, "", bad))

    shortest = [mu for mu in bc_roots(data.r) if root_kind(mu) == "short"]
    gen_ok = all(same_lattice(sorted(supp[mu]), gamma_basis(data), data.n) for mu in shortest)
    report.checks.append(Check("short root support generates Gamma", gen_ok))

    bad = []
    count = 0
    roots = bc_roots(data.r)
    for a, mu in enumerate(roots):
        for nu in roots[a:]:
            lam = _add(mu, nu)
            if not is_root(lam):
                continue
            for s in sorted(supp[mu]):
                for t in sorted(supp[nu]):
                    u = _add(s, t)
                    if u not in supp[lam]:
                        continue
                    count += 1
                    z = bracket(sl.basis(mu, s)[0], sl.basis(nu, t)[0])
                    if not z or list(decompose(z)) != [(lam, u)]:
                        bad.append((mu, s, nu, t))
    report.checks.append(Check("brackets of root spaces fill the sum space", not bad,
                               f"{count} triples", bad))
    return report


# ------------------------------------------------------------------ centre


def centre_window_check(data: HermitianData, window: Window | int = 1) -> int:
    """Dimension of the part of S_0 on the window commuting with all windowed root spaces."""
    if isinstance(window, int):
        window = Window(window)
    sl = Slice(data, window)
    gens = sorted(
        ((h, x) for mu, h, x in sl.elements() if any(mu)),
        key=lambda hx: _norm(hx[0]),
    )
    total = 0
    for h in sl.points:
        basis = sl.basis(sl.zero_root, h)
        if not basis:
            continue
        ech = Echelon()
        for _, g in gens:
            cols = [bracket(b, g).vector() for b in basis]
            keys = sorted(set().union(*cols))
            for key in keys:
                ech.add({k: col[key] for k, col in enumerate(cols) if key in col})
            if ech.rank == len(basis):
                break
        total += len(basis) - ech.rank
    return total


# --------------------------------------------------------------- centroid


@dataclass
class CentroidShift:
    shift: HalfDeg
    unknowns: int
    solution_dim: int
    expected_dim: int
    action_solves: bool

    @property
    def passed(self) -> bool:
        return self.solution_dim == self.expected_dim and (self.expected_dim == 0 or self.action_solves)


@dataclass
class CentroidResult:
    window: int
    shifts: list[CentroidShift] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.shifts)

    def central_shifts(self) -> list[HalfDeg]:
        return [s.shift for s in self.shifts if s.solution_dim]


def centroid_window_oracle(data: HermitianData, window: Window | int = 2) -> CentroidResult:
    """Solve for graded maps T of each shift with T[x, y] = [T x, y] on the window.

    Unknowns: for every windowed cell X and shift lambda with X + lambda in
    the window, the matrix of T from the basis of X to the basis of
    X + lambda.  Equations come from brackets [x, y] with y ranging over
    degree-zero and short root basis elements.  The solution space of each
    shift is compared with the span of left multiplication by t^(lambda/2).
    """
    if data.r < 3:
        raise ValueError("the centroid oracle needs r >= 3")
    if isinstance(window, int):
        window = Window(window)
    sl = Slice(data, window)
    elems = sl.elements()
    zero = (0,) * data.n
    ys = [(mu, h, y) for mu, h, y in elems
          if h == zero or root_kind(mu) == "short"]
    ys.sort(key=lambda t: _norm(t[1]))
    vec_cache: dict[tuple[int, int], dict] = {}

    def bvec(x: MatElem, y: MatElem) -> dict:
        key = (id(x), id(y))
        if key not in vec_cache:
            vec_cache[key] = bracket(x, y).vector()
        return vec_cache[key]

    coord_cache: dict[tuple, list[Fraction]] = {}

    def coords(z, cell: tuple[Root, HalfDeg], key: tuple) -> list[Fraction]:
        """Coordinates of z (or of the thunk's result) in the cell basis."""
        if key not in coord_cache:
            vec = z().vector() if callable(z) else z.vector()
            got = solve_in_span([b.vector() for b in sl.basis(*cell)], vec)
            if got is None:
                raise RuntimeError(f"bracket left its cell {cell}")
            coord_cache[key] = got
        return coord_cache[key]

    xs = list(_indexed(sl))
    # (x, y, z cell) triples inside the window do not depend on the shift
    triples = []
    for ymu, yh, y in ys:
        row = []
        for xmu, xh, x_idx, x in xs:
            zmu, zh = _add(xmu, ymu), _add(xh, yh)
            if (any(zmu) and not is_root(zmu)) or zh not in window:
                continue
            row.append(((xmu, xh, x_idx, x), (zmu, zh)))
        triples.append(((ymu, yh, y), row))

    result = CentroidResult(window.w)
    for lam in sl.points:
        unknowns = []
        for mu, h in sl.cells():
            tgt = _add(h, lam)
            if tgt in window:
                nb = len(sl.basis(mu, tgt))
                unknowns += [(mu, h, p, q) for p in range(len(sl.basis(mu, h))) for q in range(nb)]
        expected = 1 if is_lattice(lam) and data.spec.in_gamma_m(halve(lam)) else 0
        action = _centroid_solution(sl, lam, coords) if expected else None
        ech = ModEchelon()
        solves = True
        target_rank = len(unknowns) - expected
        for yin, row in triples:
            if ech.rank >= target_rank and not expected:
                break
            for xin, zcell in row:
                if _add(xin[1], lam) not in window or _add(zcell[1], lam) not in window:
                    continue
                eq = _centroid_equation(sl, lam, xin, yin, zcell, bvec, coords)
                if eq is None:
                    continue
                if action is not None:
                    solves &= not _evaluate(eq, action)
                for r in eq.values():
                    ech.add(r)
            if expected and ech.rank >= target_rank:
                break
        result.shifts.append(CentroidShift(lam, len(unknowns), len(unknowns) - ech.rank,
                                           expected, solves if expected else False))
    return result


def _indexed(sl: Slice):
    for mu, h in sl.cells():
        for p, x in enumerate(sl.basis(mu, h)):
            yield mu, h, p, x


def _centroid_equation(sl, lam, xin, yin, zcell, bvec, coords):
    """T([x, y]) - [T x, y] as {matrix coordinate: {unknown: coefficient}}."""
    xmu, xh, p, x = xin
    ymu, yh, y = yin
    zmu, zh = zcell
    eq: dict = {}

    def put(vec: dict, unknown: tuple, c: Fraction) -> None:
        for k, v in vec.items():
            row = eq.setdefault(k, {})
            nv = row.get(unknown, 0) + c * v
            if nv:
                row[unknown] = nv
            else:
                row.pop(unknown, None)

    zkey = ("z", id(x), id(y))
    zvec = bvec(x, y)
    if zvec:
        if not sl.basis(zmu, zh):
            raise RuntimeError("bracket landed in an empty cell")
        zc = coords(lambda: bracket(x, y), (zmu, zh), zkey)
        tgt = sl.basis(zmu, _add(zh, lam))
        for s, cz in enumerate(zc):
            if cz:
                for q, bq in enumerate(tgt):
                    put(bq.vector(), (zmu, zh, s, q), cz)
    for q, bq in enumerate(sl.basis(xmu, _add(xh, lam))):
        put(bvec(bq, y), (xmu, xh, p, q), Fraction(-1))
    eq = {k: v for k, v in eq.items() if v}
    return eq or None


def _evaluate(eq: dict, sol: dict) -> bool:
    """True if some equation is violated by ``sol``."""
    return any(sum(c * sol.get(u, 0) for u, c in row.items()) != 0 for row in eq.values())


def _centroid_solution(sl: Slice, lam: HalfDeg, coords) -> dict:
    z = sl.data.spec.monomial(halve(lam))
    sol = {}
    for mu, h in sl.cells():
        tgt = _add(h, lam)
        if tgt not in sl.window or not sl.basis(mu, tgt):
            continue
        for p, b in enumerate(sl.basis(mu, h)):
            img = centroid_act(z, b)
            for q, c in enumerate(coords(img, (mu, tgt), ("act", lam, mu, h, p))):
                if c:
                    sol[(mu, h, p, q)] = c
    return sol


# ------------------------------------------------------------ invariants


@dataclass(frozen=True)
class TorusInvariants:
    kappa_class: int
    anisotropic_rank: int
    orbit_id: tuple[int, ...]


def invariants(data: HermitianData) -> TorusInvariants:
    classes = isometry_classes(data.n)
    for idx, rep in enumerate(classes):
        g = find_isometry(data.spec.kappa, rep)
        if g is not None:
            moved = orbit_representative(rep, [g(v) for v in data.M])
            return TorusInvariants(idx, data.m, tuple(moved))
    raise RuntimeError("no isometry class matched")


@dataclass(frozen=True)
class BiIsoResult:
    equivalent: bool
    reason: str
    isometry: BitMatrix | None = None

    def __bool__(self) -> bool:
        return self.equivalent


def biisomorphic(a: HermitianData, b: HermitianData) -> BiIsoResult:
    """Decide bi-isomorphism through an isometry of forms carrying M onto M'."""
    if a.r != b.r:
        return BiIsoResult(False, f"Witt index differs ({a.r} vs {b.r})")
    if a.n != b.n:
        return BiIsoResult(False, f"torus rank differs ({a.n} vs {b.n})")
    g = find_isometry(a.spec.kappa, b.spec.kappa, a.M, b.M)
    if g is None:
        return BiIsoResult(False, "no isometry carries M onto M'")
    return BiIsoResult(True, "isometry found", g)


# ----------------------------------------------------------- identities


def _rand_scalar(rng: random.Random) -> Fraction:
    return Fraction(rng.choice([-5, -4, -3, -2, -1, 1, 2, 3, 4, 5]), rng.randint(1, 4))


def _rand_monomial(data: HermitianData, rng: random.Random, w: int) -> TorusElem:
    sigma = [rng.randint(-w, w) for _ in range(data.n)]
    return data.spec.monomial(sigma, _rand_scalar(rng))


def _rand_torus(data: HermitianData, rng: random.Random, w: int) -> TorusElem:
    out = data.spec.zero()
    for _ in range(rng.randint(1, 3)):
        out = out + _rand_monomial(data, rng, w)
    return out


def identity_suite(data: HermitianData, count: int = 1000, seed: int = 0, w: int = 2) -> Report:
    """Exact checks of the U-operator identities on seeded random monomials."""
    rng = random.Random(seed)
    r2 = 2 * data.r
    hyp = list(range(1, r2 + 1))
    aniso = list(data.anisotropic)
    bar = data.bar
    report = Report(f"identity suite ({count} instances each)")

    def run(name: str, instance) -> None:
        bad = []
        done = 0
        while done < count:
            res = instance()
            if res is None:
                continue
            done += 1
            if not res[0]:
                bad.append(res[1])
        report.checks.append(Check(name, not bad, f"{done} instances", bad))

    def uskew():
        i, j = rng.choice(hyp), rng.choice(hyp)
        a = _rand_monomial(data, rng, w)
        return U_op(data, i, a, j) == -U_op(data, j, a.conj(), i), (i, j, str(a))

    def uident4():
        i, j, k = rng.choice(hyp), rng.choice(hyp), rng.choice(hyp)
        if i == j or k in (bar(i), bar(j)):
            return None
        a, b = _rand_monomial(data, rng, w), _rand_monomial(data, rng, w)
        lhs = bracket(U_op(data, i, a, j), U_op(data, bar(j), b, k))
        return lhs == U_op(data, i, a * b, k), (i, j, k, str(a), str(b))

    def uident5():
        i, j, k = rng.choice(hyp), rng.choice(hyp), rng.choice(aniso)
        if j == i:
            return None
        a, c = _rand_monomial(data, rng, w), _rand_monomial(data, rng, w)
        lhs = bracket(U_op(data, i, a, j), U_op(data, k, c, bar(i)))
        return lhs == -U_op(data, k, c * a, j), (i, j, k, str(a), str(c))

    def uident6():
        i, j = rng.choice(hyp), rng.choice(hyp)
        k, k2 = rng.choice(aniso), rng.choice(aniso)
        if j == bar(i):
            return None
        a, b = _rand_monomial(data, rng, w), _rand_monomial(data, rng, w)
        lhs = bracket(U_op(data, k, a, i), U_op(data, k2, b, j))
        return lhs == -U_op(data, i, data.xi(k, a, k2, b), j), (i, j, k, k2, str(a), str(b))

    def hi():
        i = rng.randint(1, data.r)
        c = _rand_scalar(rng)
        v0 = 2 * data.r + 1
        lhs = bracket(U_op(data, i, c, v0), U_op(data, v0, 1, bar(i)))
        return lhs == h_elem(data, i) * c, (i, c)

    def rand_mat():
        T = MatElem.zero(data)
        for _ in range(rng.randint(1, 3)):
            T = T + e_mat(data, rng.randint(1, data.l), rng.randint(1, data.l),
                          _rand_monomial(data, rng, w))
        return T

    def trace1():
        T1, T2 = rand_mat(), rand_mat()
        diff = trace(T1 * T2) - trace(T2 * T1)
        return not center_project(diff), (str(T1), str(T2))

    gens = [data.spec.gen(k, p) for k in range(1, data.n + 1) for p in (1, -1)]

    def split():
        a = _rand_torus(data, rng, w)
        z, c = center_project(a), commutator_part(a)
        ok = z + c == a and all(not commutator(z, g) for g in gens)
        total = data.spec.zero()
        for x, y in commutator_witness(a):
            total = total + commutator(x, y)
        return ok and total == c, str(a)

    run("U skew symmetry", uskew)
    run("U bracket, hyperbolic pairs", uident4)
    run("U bracket, hyperbolic with anisotropic", uident5)
    run("U bracket, anisotropic pairs", uident6)
    run("coroot from anisotropic unit vector", hi)
    run("trace congruence mod [A,A]", trace1)
    run("centre plus commutator split", split)
    return report
