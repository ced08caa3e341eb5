"""Quantum tori with involution over the rationals.

The algebra has basis t^s for s in Z^n with

    t^s t^u = (-1)^{kappa_b(s~, u~)} t^{s+u},    conj(t^s) = (-1)^{kappa(s~)} t^s,

where s~ is s reduced mod 2.  Elements are finitely supported maps from
exponent tuples to nonzero ``Fraction`` coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Iterator, Mapping, Sequence, Union

from .bitquad import BilForm, QuadForm, compatible_bilinear, is_compatible

Vec = tuple[int, ...]
Scalar = Union[int, Fraction]


def tilde(sigma: Sequence[int]) -> int:
    """Reduction mod 2 of a lattice vector, as a bitmask."""
    out = 0
    for k, s in enumerate(sigma):
        if s & 1:
            out |= 1 << k
    return out


def vadd(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def vneg(a: Vec) -> Vec:
    return tuple(-x for x in a)


@dataclass(frozen=True)
class TorusSpec:
    """The data (kappa, kappa_b) fixing the torus up to graded isomorphism."""

    kappa: QuadForm
    kappa_b: BilForm

    def __post_init__(self) -> None:
        if not is_compatible(self.kappa, self.kappa_b):
            raise ValueError("kappa_b is not compatible with kappa")

    @classmethod
    def from_form(cls, kappa: QuadForm) -> TorusSpec:
        return cls(kappa, compatible_bilinear(kappa))

    @property
    def n(self) -> int:
        return self.kappa.n

    @cached_property
    def _mul_sign(self) -> tuple[tuple[int, ...], ...]:
        size = 1 << self.n
        return tuple(
            tuple(-1 if self.kappa_b(u, v) else 1 for v in range(size)) for u in range(size)
        )

    @cached_property
    def _conj_sign(self) -> tuple[int, ...]:
        return tuple(-1 if self.kappa(v) else 1 for v in range(1 << self.n))

    @cached_property
    def _central_bits(self) -> frozenset[int]:
        return self.kappa.polar_radical

    def mul_sign(self, sigma: Vec, tau: Vec) -> int:
        return self._mul_sign[tilde(sigma)][tilde(tau)]

    def conj_sign(self, sigma: Vec) -> int:
        return self._conj_sign[tilde(sigma)]

    def is_central(self, sigma: Vec) -> bool:
        return tilde(sigma) in self._central_bits

    def in_lambda_plus(self, sigma: Vec) -> bool:
        return self.kappa(tilde(sigma)) == 0

    def in_lambda_minus(self, sigma: Vec) -> bool:
        return self.kappa(tilde(sigma)) == 1

    def in_gamma_m(self, sigma: Vec) -> bool:
        return tilde(sigma) in self.kappa.radical

    # constructors ------------------------------------------------------
    def monomial(self, sigma: Sequence[int], c: Scalar = 1) -> TorusElem:
        sigma = tuple(int(s) for s in sigma)
        if len(sigma) != self.n:
            raise ValueError(f"exponent {sigma} has wrong length for rank {self.n}")
        c = Fraction(c)
        return TorusElem(self, {sigma: c} if c else {})

    def one(self) -> TorusElem:
        return self.monomial((0,) * self.n)

    def zero(self) -> TorusElem:
        return TorusElem(self, {})

    def gen(self, k: int, power: int = 1) -> TorusElem:
        """t_k^power, 1-based k."""
        e = [0] * self.n
        e[k - 1] = power
        return self.monomial(e)

    def scalar(self, c: Scalar) -> TorusElem:
        return self.monomial((0,) * self.n, c)

    def coerce(self, a: TorusElem | Scalar) -> TorusElem:
        if isinstance(a, TorusElem):
            check_same(self, a.spec)
            return a
        return self.scalar(a)

    def to_json(self) -> dict:
        return {"n": self.n, "kappa": self.kappa.to_json(), "kappa_b": self.kappa_b.to_json()}

    @classmethod
    def from_json(cls, doc: Mapping) -> TorusSpec:
        kappa = QuadForm.from_json(doc["kappa"])
        if "n" in doc and int(doc["n"]) != kappa.n:
            raise ValueError("torus rank disagrees with the quadratic form")
        if doc.get("kappa_b") is None:
            return cls.from_form(kappa)
        return cls(kappa, BilForm.from_json(doc["kappa_b"]))


def check_same(a: TorusSpec, b: TorusSpec) -> None:
    if a is not b and a != b:
        raise ValueError("elements belong to different tori")


class TorusElem:
    """An element of the quantum torus; treat as immutable."""

    __slots__ = ("spec", "terms", "_hash")

    def __init__(self, spec: TorusSpec, terms: Mapping[Vec, Fraction]):
        self.spec = spec
        self.terms = {k: v for k, v in terms.items() if v}
        self._hash: int | None = None

    # basic protocol -------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, TorusElem):
            return (self.spec is other.spec or self.spec == other.spec) and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.spec.scalar(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"TorusElem({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for sigma in sorted(self.terms):
            c = self.terms[sigma]
            mono = "t^(" + ",".join(str(s) for s in sigma) + ")"
            if not any(sigma):
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    def items(self) -> Iterator[tuple[Vec, Fraction]]:
        return iter(sorted(self.terms.items()))

    def coeff(self, sigma: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(sigma), Fraction(0))

    @property
    def support(self) -> list[Vec]:
        return sorted(self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def degree(self) -> Vec:
        if len(self.terms) != 1:
            raise ValueError("degree of a non-homogeneous element")
        return next(iter(self.terms))

    # arithmetic -------------------------------------------------------------
    def _other(self, other: TorusElem | Scalar) -> TorusElem:
        return self.spec.coerce(other)

    def __add__(self, other: TorusElem | Scalar) -> TorusElem:
        other = self._other(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return TorusElem(self.spec, out)

    __radd__ = __add__

    def __neg__(self) -> TorusElem:
        return TorusElem(self.spec, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: TorusElem | Scalar) -> TorusElem:
        return self + (-self._other(other))

    def __rsub__(self, other: Scalar) -> TorusElem:
        return self._other(other) - self

    def __mul__(self, other: TorusElem | Scalar) -> TorusElem:
        if not isinstance(other, TorusElem):
            c = Fraction(other)
            return TorusElem(self.spec, {k: v * c for k, v in self.terms.items()})
        return mul(self, other)

    def __rmul__(self, other: Scalar) -> TorusElem:
        return self * other

    def __truediv__(self, c: Scalar) -> TorusElem:
        return self * (1 / Fraction(c))

    def conj(self) -> TorusElem:
        return involute(self)

    def inverse(self) -> TorusElem:
        """Inverse of a nonzero monomial c t^s."""
        if len(self.terms) != 1:
            raise ValueError("only monomials are invertible here")
        (sigma, c), = self.terms.items()
        sign = self.spec.mul_sign(sigma, sigma)
        return TorusElem(self.spec, {vneg(sigma): sign / c})

    def to_json(self) -> list[dict]:
        return [
            {"exp": list(k), "num": v.numerator, "den": v.denominator}
            for k, v in sorted(self.terms.items())
        ]

    @classmethod
    def from_json(cls, spec: TorusSpec, doc: Iterable[Mapping]) -> TorusElem:
        out: dict[Vec, Fraction] = {}
        for term in doc:
            k = tuple(int(x) for x in term["exp"])
            if len(k) != spec.n:
                raise ValueError("exponent length mismatch")
            out[k] = out.get(k, 0) + Fraction(int(term["num"]), int(term.get("den", 1)))
        return cls(spec, out)


# ------------------------------------------------------------ operations


def monomial(spec: TorusSpec, sigma: Sequence[int], c: Scalar = 1) -> TorusElem:
    return spec.monomial(sigma, c)


def mul(a: TorusElem, b: TorusElem) -> TorusElem:
    check_same(a.spec, b.spec)
    spec = a.spec
    table = spec._mul_sign
    out: dict[Vec, Fraction] = {}
    for s, c in a.terms.items():
        row = table[tilde(s)]
        for t, d in b.terms.items():
            key = tuple(x + y for x, y in zip(s, t))
            val = c * d if row[tilde(t)] > 0 else -(c * d)
            out[key] = out.get(key, 0) + val
    return TorusElem(spec, out)


def involute(a: TorusElem) -> TorusElem:
    signs = a.spec._conj_sign
    return TorusElem(a.spec, {s: (c if signs[tilde(s)] > 0 else -c) for s, c in a.terms.items()})


def center_project(a: TorusElem) -> TorusElem:
    """Component in Z(A): the monomials whose reduction is in the polar radical."""
    return TorusElem(a.spec, {s: c for s, c in a.terms.items() if a.spec.is_central(s)})


def commutator_part(a: TorusElem) -> TorusElem:
    """Component in [A, A]."""
    return TorusElem(a.spec, {s: c for s, c in a.terms.items() if not a.spec.is_central(s)})


def symmetric_part(a: TorusElem) -> TorusElem:
    return TorusElem(a.spec, {s: c for s, c in a.terms.items() if a.spec.in_lambda_plus(s)})


def skew_part(a: TorusElem) -> TorusElem:
    return TorusElem(a.spec, {s: c for s, c in a.terms.items() if a.spec.in_lambda_minus(s)})


def varpi(a: TorusElem) -> Fraction:
    """Coefficient of t^0."""
    return a.terms.get((0,) * a.spec.n, Fraction(0))


def supp_plus(spec: TorusSpec) -> Callable[[Sequence[int]], bool]:
    """Membership predicate for the lattice of symmetric degrees."""
    return lambda sigma: spec.in_lambda_plus(tuple(sigma))


def gamma_m(spec: TorusSpec) -> Callable[[Sequence[int]], bool]:
    """Membership predicate for degrees of central symmetric monomials."""
    return lambda sigma: spec.in_gamma_m(tuple(sigma))


def commutator(a: TorusElem, b: TorusElem) -> TorusElem:
    return a * b - b * a


def commutator_witness(a: TorusElem) -> list[tuple[TorusElem, TorusElem]]:
    """Pairs (x, y) with sum [x, y] = commutator_part(a).

    For a non-central monomial alpha pick a basis generator beta = t_k
    that anticommutes with it; then [alpha beta^-1, beta] = 2 alpha.
    """
    spec = a.spec
    pairs = []
    for sigma, c in sorted(commutator_part(a).terms.items()):
        row = spec.kappa.polar_row(tilde(sigma))
        k = (row & -row).bit_length()
        beta = spec.gen(k)
        alpha = spec.monomial(sigma, c)
        pairs.append((alpha * beta.inverse() / 2, beta))
    return pairs
