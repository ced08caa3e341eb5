"""Graded hermitian form data for the unitary construction.

Index conventions are 1-based throughout: indices 1..2r carry the
hyperbolic basis, indices 2r+1..l the anisotropic one.  External degrees
are ``HalfDeg`` tuples holding twice the degree in lattice coordinates, so
the degree of x_i is the tuple tau_i itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

from .bitquad import span, to_bits
from .report import Check, Report
from .torus import TorusElem, TorusSpec, Vec, tilde

HalfDeg = tuple[int, ...]


def is_lattice(h: HalfDeg) -> bool:
    """True when h lies in the lattice itself (all doubled coordinates even)."""
    return all(x % 2 == 0 for x in h)


def halve(h: HalfDeg) -> Vec:
    if not is_lattice(h):
        raise ValueError(f"{h} is not a lattice degree")
    return tuple(x // 2 for x in h)


def double(sigma: Sequence[int]) -> HalfDeg:
    return tuple(2 * x for x in sigma)


@dataclass(frozen=True)
class HermitianData:
    """Parameters r, M, tau_i, gamma_i of the construction.

    Use :func:`build_data` for validated instances; the raw constructor
    only checks shapes so that deliberately broken data can be examined.
    """

    r: int
    spec: TorusSpec
    M: tuple[int, ...]
    tau: tuple[Vec, ...]
    gamma: tuple[TorusElem, ...]

    def __post_init__(self) -> None:
        if len(self.tau) != self.l or len(self.gamma) != self.l:
            raise ValueError("tau and gamma need one entry per index")
        if any(len(t) != self.spec.n for t in self.tau):
            raise ValueError("tau entries must have length n")

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def m(self) -> int:
        return len(self.M)

    @property
    def l(self) -> int:
        return 2 * self.r + len(self.M)

    @property
    def hyperbolic(self) -> range:
        return range(1, 2 * self.r + 1)

    @property
    def anisotropic(self) -> range:
        return range(2 * self.r + 1, self.l + 1)

    def bar(self, i: int) -> int:
        self.check_index(i)
        return 2 * self.r + 1 - i if i <= 2 * self.r else i

    def check_index(self, i: int) -> None:
        if not 1 <= i <= self.l:
            raise IndexError(f"index {i} outside 1..{self.l}")

    def rho(self, i: int) -> HalfDeg:
        """Degree of x_i, i.e. half of tau_i, in HalfDeg coordinates."""
        return self.tau[i - 1]

    def g(self, i: int) -> TorusElem:
        return self.gamma[i - 1]

    @cached_property
    def gamma_inv(self) -> tuple[TorusElem, ...]:
        return tuple(c.inverse() for c in self.gamma)

    def g_inv(self, i: int) -> TorusElem:
        return self.gamma_inv[i - 1]

    @cached_property
    def m_span(self) -> frozenset[int]:
        return span(self.M)

    @cached_property
    def aniso_by_bits(self) -> dict[int, int]:
        """Anisotropic index carrying each element of M."""
        return {tilde(self.tau[k - 1]): k for k in self.anisotropic}

    def in_gamma(self, h: HalfDeg) -> bool:
        return tilde(h) in self.m_span

    def in_gamma_an(self, h: HalfDeg) -> bool:
        return tilde(h) in self.aniso_by_bits

    def eps(self, i: int) -> tuple[int, ...]:
        """Weight of x_i in the root lattice basis eps_1..eps_r."""
        out = [0] * self.r
        if i <= self.r:
            out[i - 1] = 1
        elif i <= 2 * self.r:
            out[2 * self.r - i] = -1
        return tuple(out)

    def index_of_weight(self, a: int, sign: int) -> int:
        """Hyperbolic index with weight sign * eps_a."""
        return a if sign > 0 else 2 * self.r + 1 - a

    def xi(self, i: int, alpha: TorusElem, j: int, beta: TorusElem) -> TorusElem:
        """xi(x_i.alpha, x_j.beta) = conj(alpha) xi(x_i, x_j) beta."""
        if self.bar(i) != j:
            return self.spec.zero()
        return alpha.conj() * self.g(i) * beta

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "l": self.l,
            "M": list(self.M),
            "bar": [self.bar(i) for i in range(1, self.l + 1)],
            "tau": [list(t) for t in self.tau],
            "gamma": [c.to_json() for c in self.gamma],
        }


def lift(bits: int, n: int) -> Vec:
    """The {0,1}-coordinate preimage of a vector of Z_2^n."""
    return to_bits(bits, n)


def build_data(r: int, spec: TorusSpec, M: Iterable[int]) -> HermitianData:
    if r < 1:
        raise ValueError("the Witt index r must be at least 1")
    M = list(M)
    if len(set(M)) != len(M):
        raise ValueError("M has repeated elements")
    if 0 not in M:
        raise ValueError("M must contain 0")
    bad = [v for v in M if not 0 <= v < (1 << spec.n) or spec.kappa(v) != 0]
    if bad:
        raise ValueError(f"M is not contained in iso(kappa): offending {sorted(bad)}")
    M = sorted(M)
    zero = (0,) * spec.n
    taus = [zero] * (2 * r) + [lift(v, spec.n) for v in M]
    gammas = [spec.monomial(t) for t in taus]
    return HermitianData(r, spec, tuple(M), tuple(taus), tuple(gammas))


def gram(data: HermitianData) -> list[list[TorusElem]]:
    zero = data.spec.zero()
    return [
        [data.g(i) if data.bar(i) == j else zero for j in range(1, data.l + 1)]
        for i in range(1, data.l + 1)
    ]


def validate(data: HermitianData) -> Report:
    """Check the invariants of a compatible parameter set."""
    checks = []
    spec = data.spec
    zero = (0,) * spec.n
    first = [i for i in range(1, min(2 * data.r + 1, data.l) + 1)
             if data.tau[i - 1] != zero or data.g(i) != spec.one()]
    checks.append(Check("leading parameters trivial", not first, witnesses=first))
    aniso_bits = [tilde(data.tau[k - 1]) for k in data.anisotropic]
    checks.append(Check("anisotropic degrees enumerate M",
                        sorted(aniso_bits) == sorted(data.M) and (not aniso_bits or aniso_bits[0] == 0)))
    bad = []
    for i in range(1, data.l + 1):
        c = data.g(i)
        if not c.is_monomial() or c.degree() != data.tau[i - 1] or c.conj() != c:
            bad.append(i)
    checks.append(Check("gamma_i symmetric of degree tau_i", not bad, witnesses=bad))
    bad = [i for i in range(1, data.l + 1) if data.g(data.bar(i)) != data.g(i).conj()]
    checks.append(Check("gamma of bar index is the conjugate", not bad, witnesses=bad))
    return Report("hermitian data", checks)


def check_anisotropic(data: HermitianData) -> Report:
    """Fine grading of the anisotropic part and 2 supp contained in the lattice.

    Together these make the form anisotropic on X_an.
    """
    seen: dict[int, int] = {}
    dup = []
    for k in data.anisotropic:
        b = tilde(data.tau[k - 1])
        if b in seen:
            dup.append((seen[b], k))
        else:
            seen[b] = k
    # 2 * (1/2 tau_k) = tau_k must be an integral lattice vector of symmetric type
    off = [k for k in data.anisotropic if not data.spec.in_lambda_plus(data.tau[k - 1])]
    return Report(
        "anisotropy",
        [
            Check("anisotropic part finely graded", not dup, witnesses=dup),
            Check("twice the support is symmetric lattice", not off, witnesses=off),
        ],
    )


@dataclass(frozen=True)
class Supports:
    supp: tuple[HalfDeg, ...]
    gamma_an: tuple[HalfDeg, ...]
    anisotropic_rank: int


def supports(data: HermitianData) -> Supports:
    """Coset representatives of the module support and of the anisotropic support."""
    all_reps = sorted({lift(tilde(data.rho(i)), data.n) for i in range(1, data.l + 1)})
    an_reps = sorted({lift(tilde(data.rho(k)), data.n) for k in data.anisotropic})
    return Supports(tuple(all_reps), tuple(an_reps), len(an_reps))


def gamma_points(data: HermitianData, w: int) -> list[HalfDeg]:
    """Elements of Gamma with all HalfDeg coordinates in [-w, w]."""
    pts = product(range(-w, w + 1), repeat=data.n)
    return [p for p in pts if data.in_gamma(p)]


def gamma_basis(data: HermitianData) -> list[HalfDeg]:
    """Integral generators of Gamma in HalfDeg coordinates."""
    gens = [lift(v, data.n) for v in data.M]
    gens += [tuple(2 if k == j else 0 for k in range(data.n)) for j in range(data.n)]
    return gens
