"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` or directly as a script.
"""

import random
import sys
import time
from contextlib import contextmanager
from itertools import product

import pytest

from bctorus.bitquad import (
    QuadForm,
    find_isometry,
    general_linear_group,
    iso_set,
    orthogonal_group,
    pointed_orbits,
    radical,
)
from bctorus.cli import affine_signature, cmd_build_check, cmd_classify
from bctorus.eala import Eala
from bctorus.hermitian import build_data
from bctorus.lietorus import Window, biisomorphic, centroid_window_oracle, identity_suite
from bctorus.torus import TorusSpec
from bctorus.linalg import rank
from bctorus.unitary import bidegree, e_mat, in_S, root_space_basis, star

from conftest import ACCEPTANCE_LINES, HomogeneousSampler

TABLE_ROWS = ["0", "l3", "l2 + l3 + l2 l3", "l2 l3", "l3 + l1 l2"]


def make(r, kappa, n, M):
    return build_data(r, TorusSpec.from_form(QuadForm.parse(kappa, n)), M)


SETUP_A = ("r=3 n=1 kappa=0 M={0}", (3, "0", 1, [0]))
SETUP_B = ("r=3 kappa=l3+l1l2 M={0,s1,s2}", (3, "l3 + l1 l2", 3, [0, 1, 2]))


@contextmanager
def criterion(label, budget=None):
    """Record one verdict line for the enclosed checks, then re-raise any failure.

    The lines are printed in the terminal summary by conftest.
    """
    start = time.perf_counter()
    failure = None
    try:
        yield
    except AssertionError as exc:
        failure = exc
    elapsed = time.perf_counter() - start
    if failure is None and budget is not None and elapsed > budget:
        failure = AssertionError(f"took {elapsed:.1f} s, budget {budget} s")
    status = "PASS" if failure is None else "FAIL"
    note = f" ({failure})" if failure is not None and str(failure) else ""
    ACCEPTANCE_LINES.append(f"[{status}] {label} [{elapsed:.2f} s]{note}")
    if failure is not None:
        raise failure


def timed(budget, fn, *args):
    start = time.perf_counter()
    out = fn(*args)
    elapsed = time.perf_counter() - start
    assert elapsed <= budget, f"{fn.__name__} took {elapsed:.1f} s, budget {budget} s"
    return out


def test_ac1_classification_n3():
    with criterion("AC1 classify-forms --n 3 gives the 5 tabulated classes", budget=1):
        doc = cmd_classify(3)
        classes = [QuadForm.from_json(c["form"]) for c in doc["classes"]]
        assert len(classes) == 5
        for got, row in zip(classes, TABLE_ROWS):
            assert find_isometry(got, QuadForm.parse(row, 3)) is not None, row


def test_ac2_example_form():
    with criterion("AC2 rad, iso and 4 pointed orbits of l3 + l1 l2", budget=1):
        kappa = QuadForm.parse("l3 + l1 l2", 3)
        assert radical(kappa) == [0]
        assert iso_set(kappa) == [0, 0b001, 0b010, 0b111]
        orbits = pointed_orbits(kappa)
        assert sorted(len(o) for o in orbits) == [1, 2, 3, 4]


def _full_report(args):
    return cmd_build_check(make(*args), 2, 0, 1000)


def test_ac3_full_verification():
    with criterion("AC3 full verification report at w=2 for Setups A and B"):
        for name, args in (SETUP_A, SETUP_B):
            reports = timed(60, _full_report, args)
            failed = [line for rep in reports for line in rep.lines() if line.startswith("[FAIL]")]
            assert not failed, (name, failed)


def test_ac4_identity_suite():
    with criterion("AC4 U-operator and trace identities, 1000 instances each, Setups A and B"):
        for name, args in (SETUP_A, SETUP_B):
            rep = identity_suite(make(*args), count=1000, seed=1)
            assert len(rep.checks) == 7
            for c in rep.checks:
                assert c.passed, (name, c.name, c.witnesses[:3])
                assert c.detail == "1000 instances"


def test_ac5_eala():
    with criterion("AC5 EALA Jacobi, invariance, dim D and abelian H, 500 triples each for A and B"):
        for name, args in (SETUP_A, SETUP_B):
            E = Eala(make(*args))
            rng = random.Random(2024)
            sampler = HomogeneousSampler(E)
            sectors = set()
            for _ in range(500):
                x, y, z = sampler.triple(rng)
                for v in (x, y, z):
                    sectors.update(k for k, part in zip("SCD", (v.s_part, v.c_part, v.d_part)) if part)
                jac = E.add(E.add(E.bracket(x, E.bracket(y, z)), E.bracket(y, E.bracket(z, x))),
                            E.bracket(z, E.bracket(x, y)))
                assert not jac, name
                assert E.form(E.bracket(x, y), z) + E.form(y, E.bracket(x, z)) == 0, name
            assert sectors == {"S", "C", "D"}
            for sg in E.gamma_m_points(Window(4)):
                assert len(E.d_basis(sg)) == (E.n - 1 if any(sg) else E.n)
            H = E.cartan()
            assert all(not E.bracket(a, b) for a in H for b in H)


def _brute_dim(data, mu, h):
    """Rank of all e - e* of bidegree (mu, h) that lie in S, found by scanning matrix units."""
    vecs = []
    for i in range(1, data.l + 1):
        for j in range(1, data.l + 1):
            num = [x - a + b for x, a, b in zip(h, data.tau[i - 1], data.tau[j - 1])]
            if any(v % 2 for v in num):
                continue
            sigma = tuple(v // 2 for v in num)
            if bidegree(data, i, j, sigma) != (mu, h):
                continue
            e = e_mat(data, i, j, data.spec.monomial(sigma))
            u = e - star(e)
            if u and in_S(u):
                vecs.append(u)
    return rank([v.vector() for v in vecs])


def test_ac6_graded_dimensions():
    with criterion("AC6 graded dimensions of S in the example match the support rule, w=2"):
        d = make(*SETUP_B[1])
        kappa = d.spec.kappa
        for h in product(range(-2, 3), repeat=3):
            lattice = all(x % 2 == 0 for x in h)
            bits = sum(((x // 2) % 2) << k for k, x in enumerate(h)) if lattice else None
            half_bits = sum((x % 2) << k for k, x in enumerate(h))
            cases = [
                ((1, 1, 0), lattice),
                ((2, 0, 0), lattice and kappa(bits) == 1),
                ((1, 0, 0), half_bits in d.M),
            ]
            for mu, expected in cases:
                fast = len(root_space_basis(d, mu, h))
                brute = _brute_dim(d, mu, h)
                assert fast == brute == int(expected), (mu, h, fast, brute)


def test_ac7_affine_signatures():
    with criterion("AC7 rank one signatures A_2r^(2), B_r^(1), D_r+1^(2) at w=2"):
        a2 = affine_signature(make(3, "l1", 1, [0]), 2)
        assert a2["type"] == "BC_r"
        assert a2["long"] == [[-2], [2]]  # odd lattice degrees only
        assert a2["short"] == [[-2], [0], [2]]
        b1 = affine_signature(make(3, "0", 1, [0]), 2)
        assert b1["type"] == "B_r" and b1["long"] == []
        assert b1["short"] == [[-2], [0], [2]]
        d2 = affine_signature(make(3, "0", 1, [0, 1]), 2)
        assert d2["type"] == "B_r" and d2["long"] == []
        assert d2["short"] == [[-2], [-1], [0], [1], [2]]


def test_ac8_centroid():
    with criterion("AC8 centroid oracle equals the action of central symmetric elements", budget=120):
        a = timed(120, centroid_window_oracle, make(*SETUP_A[1]), 2)
        assert a.passed and a.central_shifts() == [(-2,), (0,), (2,)]
        b = timed(120, centroid_window_oracle, make(*SETUP_B[1]), 2)
        assert b.passed and b.central_shifts() == [(0, 0, 0)]
        assert len(b.shifts) > 1


def test_ac9_biisomorphism():
    with criterion("AC9 n=3 catalog pairwise inequivalent, scrambled copies map back", budget=30):
        rng = random.Random(9)
        catalog = []
        for kappa in cmd_classify(3)["classes"]:
            form = QuadForm.from_json(kappa["form"])
            spec = TorusSpec.from_form(form)
            catalog += [build_data(3, spec, M) for M in kappa["orbits"]]
        for i, a in enumerate(catalog):
            for j, b in enumerate(catalog):
                assert bool(biisomorphic(a, b)) == (i == j)
        gl = general_linear_group(3)
        for i, rep in enumerate(catalog):
            group = orthogonal_group(rep.spec.kappa)
            for _ in range(5):
                g = rng.choice(group)
                copy = build_data(3, rep.spec, [g(v) for v in rep.M])
                hits = [k for k, other in enumerate(catalog) if biisomorphic(copy, other)]
                assert hits == [i]
                # also move the form itself: kappa o h^-1 with M carried by h
                h = rng.choice(gl)
                moved = TorusSpec.from_form(rep.spec.kappa.compose(h.inverse()))
                copy = build_data(3, moved, [h(v) for v in copy.M])
                hits = [k for k, other in enumerate(catalog) if biisomorphic(copy, other)]
                assert hits == [i]


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
