import pytest

from bctorus.bitquad import QuadForm
from bctorus.hermitian import build_data
from bctorus.torus import TorusSpec


def make_data(r, kappa, n, M):
    spec = TorusSpec.from_form(QuadForm.parse(kappa, n))
    return build_data(r, spec, M)


@pytest.fixture(scope="session")
def setup_a():
    """r = 3, n = 1, kappa = 0, M = {0}."""
    return make_data(3, "0", 1, [0])


@pytest.fixture(scope="session")
def setup_b():
    """r = 3, kappa = l3 + l1 l2, M = {0, s1, s2}."""
    return make_data(3, "l3 + l1 l2", 3, [0, 0b001, 0b010])


@pytest.fixture(scope="session")
def kappa_b3():
    return QuadForm.parse("l3 + l1 l2", 3)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


class HomogeneousSampler:
    """Random homogeneous elements of the EALA, with triples biased towards total degree 0.

    S cells come from the window w; C and D pieces from degrees 2 sigma with
    sigma in Gamma_m inside the doubled window.  Degree-zero-root cells that
    also carry C and D pieces get all three sectors mixed.
    """

    def __init__(self, E, w=2):
        from bctorus.lietorus import Slice, Window

        self.E = E
        self.cells = {}
        for mu, h, x in Slice(E.data, Window(w)).elements():
            self.cells.setdefault((tuple(mu), tuple(h)), []).append(x)
        zero_root = (0,) * E.data.r
        self.central = {}
        for sg in E.gamma_m_points(Window(2 * w)):
            if E.d_basis(sg):
                self.central[(zero_root, tuple(2 * x for x in sg))] = sg
        self.degrees = sorted(set(self.cells) | set(self.central))

    def element(self, rng, degree):
        from bctorus.eala import DerElem

        E = self.E
        T = c = d = None
        for x in self.cells.get(degree, []):
            if rng.random() < 0.7:
                k = rng.choice([1, -1, 2, 3])
                T = x * k if T is None else T + x * k
        sg = self.central.get(degree)
        if sg is not None:
            n = E.n
            if rng.random() < 0.6:
                v = [0] * n
                for b in E.c_basis(sg):
                    k = rng.choice([0, 1, -1, 2])
                    v = [p + k * q for p, q in zip(v, b)]
                c = E.dual({sg: v})
            if rng.random() < 0.6:
                v = [0] * n
                for b in E.d_basis(sg):
                    k = rng.choice([0, 1, -1, 2])
                    v = [p + k * q for p, q in zip(v, b)]
                d = DerElem({sg: tuple(v)})
        return E.elem(T=T, c=c, d=d)

    def triple(self, rng):
        """Two thirds of the triples have total degree zero, so every sector pairs up."""
        def neg_sum(p, q):
            return tuple(tuple(-a - b for a, b in zip(u, v)) for u, v in zip(p, q))

        for _ in range(20):
            dx, dz = rng.choice(self.degrees), rng.choice(self.degrees)
            if rng.random() < 0.5 and self.central:
                dz = rng.choice(sorted(self.central))
            dy = neg_sum(dx, dz)
            if rng.random() < 2 / 3 and dy in self.degrees:
                break
        else:
            dy = rng.choice(self.degrees)
        return tuple(self.element(rng, deg) for deg in (dx, dy, dz))
