import os

import pytest

from modules.polycalc.calculus import PVF, Form
from modules.polycalc.coiso import CoisoSetup, NormalPVF
from modules.polycalc.grammar import chart_ring

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
MANIFESTS = os.path.join(ROOT, "manifests")


def bivector(n, entries):
    """{(i, j): "coeff"} → PVF."""
    return PVF.from_json([{"indices": list(k), "coeff": c} for k, c in entries.items()], n)


def setup_of(n, codim, entries):
    return CoisoSetup(n, codim, bivector(n, entries))


def manifest_path(name):
    return os.path.join(MANIFESTS, f"{name}.json")


def z(n, i):
    return chart_ring(n).gens[i - 1]


def random_poly(rng, n, max_degree, variables=None, terms=2):
    """Nonzero sum of `terms` small-integer monomials of degree ≤ max_degree in `variables` (default all)."""
    R = chart_ring(n)
    variables = list(range(1, n + 1)) if variables is None else list(variables)
    out = R.zero
    while not out:
        for _ in range(terms):
            mono = R.one
            if variables:
                for _ in range(rng.randint(0, max_degree)):
                    mono *= R.gens[rng.choice(variables) - 1]
            out += rng.choice((-2, -1, 1, 2, 3)) * mono
    return out


def _random_terms(rng, n, indices, degree, max_coeff, terms, variables=None):
    comps = {}
    for _ in range(terms):
        I = tuple(sorted(rng.sample(indices, degree)))
        comps[I] = comps.get(I, 0) + random_poly(rng, n, max_coeff, variables)
    return comps


def random_pvf(rng, n, degree, max_coeff=2, terms=2):
    while True:
        xi = PVF(n, _random_terms(rng, n, list(range(1, n + 1)), degree, max_coeff, terms))
        if not xi.is_zero():
            return xi


def random_form(rng, n, degree, max_coeff=2, terms=2):
    while True:
        alpha = Form(n, _random_terms(rng, n, list(range(1, n + 1)), degree, max_coeff, terms))
        if not alpha.is_zero():
            return alpha


def random_normal(rng, setup, degree, max_coeff=2, terms=2):
    """Random section of ⋀^degree N with coefficients in the coordinates of Z."""
    n, p = setup.nvars, setup.codim
    while True:
        nu = NormalPVF(setup, _random_terms(rng, n, list(range(1, p + 1)), degree, max_coeff, terms,
                                            range(p + 1, n + 1)))
        if not nu.is_zero():
            return nu


def random_ideal_field(rng, setup, degree, max_coeff=2):
    """Random element of ℒ_Z: purely normal components get a factor z1."""
    n, p = setup.nvars, setup.codim
    xi = random_pvf(rng, n, degree, max_coeff)
    z1 = chart_ring(n).gens[0]
    return PVF(n, {I: c * z1 if all(i <= p for i in I) else c for I, c in xi.components.items()})


@pytest.fixture
def lagrangian():
    """Constant symplectic structure on C^4 with Z = {z1 = z2 = 0} Lagrangian."""
    return setup_of(4, 2, {(1, 3): "1", (2, 4): "1"})


@pytest.fixture
def symplectic_slice():
    """Same chart with Z = {z1 = z2 = 0} a symplectic, hence not coisotropic, slice."""
    return setup_of(4, 2, {(1, 2): "1", (3, 4): "1"})


@pytest.fixture
def so3():
    return setup_of(3, 3, {(1, 2): "z3", (2, 3): "z1", (3, 1): "-z2"})


@pytest.fixture
def obstructed_point():
    """π = z1² ∂1∧∂2 on C^2 with Z the origin."""
    return setup_of(2, 2, {(1, 2): "z1^2"})


@pytest.fixture
def hypersurface():
    return setup_of(3, 1, {(2, 3): "z1^2"})


@pytest.fixture
def small_forms():
    n = 3
    return [
        Form.function(n, z(n, 1)),
        Form.basis(n, 1),
        Form.basis(n, 2, coeff=z(n, 3)),
        Form.basis(n, 1, 3),
    ]


@pytest.fixture
def polyvector_pool():
    n = 3
    return [
        PVF.function(n, z(n, 1) * z(n, 2)),
        PVF.basis(n, 1, coeff=z(n, 2)),
        PVF.basis(n, 3, coeff=z(n, 1) ** 2),
        PVF.basis(n, 2, 3, coeff=z(n, 1)),
        PVF.basis(n, 1, 2, 3, coeff=z(n, 3)),
    ]
