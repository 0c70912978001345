"""
DGLA arenas for Maurer-Cartan calculus.

A carrier supplies the linear structure, the differential and the bracket of
one graded Lie algebra, plus finite coordinate slices so that d(y) = r can be
solved by exact linear algebra.
"""

import logging
from itertools import combinations

from sympy import QQ

from modules.polycalc.calculus import PVF, Form, holo_d, schouten
from modules.polycalc.coiso import (
    NormalPVF, in_LZ, koszul_split, lichnerowicz, normal_dpi, normal_lift, normal_project,
)
from modules.polycalc.grammar import chart_ring, format_rational

logger = logging.getLogger(__name__)


def monomials(nvars, variables, degree):
    """Exponent vectors of total degree `degree` supported on `variables` (1-based), in lex order."""
    variables = sorted(variables)
    out = []

    def rec(pos, left, exps):
        if pos == len(variables):
            if left == 0:
                out.append(tuple(exps))
            return
        i = variables[pos] - 1
        for e in range(left, -1, -1):
            exps[i] = e
            rec(pos + 1, left - e, exps)
        exps[i] = 0

    if degree < 0:
        return []
    if not variables:
        return [tuple([0] * nvars)] if degree == 0 else []
    rec(0, degree, [0] * nvars)
    return out


def coordinates(obj):
    """{(indices, exponents): coefficient} for PVF, Form or NormalPVF."""
    return {(I, m): c for I, f in obj.components.items() for m, c in f.iterterms()}


def _monomial_element(cls, nvars, I, m):
    R = chart_ring(nvars)
    return cls._raw(nvars, {I: R.from_dict({m: QQ(1)})})


class Carrier:
    """Interface shared by every arena; elements are carrier-specific values."""

    name = "carrier"

    def zero(self):
        raise NotImplementedError

    def add(self, a, b):
        return a + b

    def scale(self, c, a):
        return a * QQ.convert(c)

    def is_zero(self, a):
        return a.is_zero()

    def equal(self, a, b):
        return a == b

    def has_degree(self, a, k):
        raise NotImplementedError

    def d(self, a):
        raise NotImplementedError

    def bracket(self, a, b):
        raise NotImplementedError

    def coords(self, a):
        return coordinates(a)

    def to_json(self, a):
        return a.to_json()

    def solve_basis(self, rhs, degree=1):
        """Candidate degree-`degree` elements y among which d(y) = rhs is solved."""
        raise NotImplementedError

    has_gauge = True


class PolyvectorCarrier(Carrier):
    """⋀^{≥1}Θ[1] over a Poisson chart: d = d_π, bracket = Schouten; shifted degree = exterior degree − 1."""

    name = "polyvector"

    def __init__(self, setup, cap=None):
        setup.require_poisson()
        self.setup = setup
        self.nvars = setup.nvars
        self.cap = cap
        self.truncated = not (setup.pi.is_zero() or setup.pi.is_homogeneous_coefficients())
        if self.truncated and cap is None:
            raise ValueError("π has non-homogeneous coefficients; a coefficient-degree cap is required")

    def zero(self):
        return PVF.zero(self.nvars)

    def has_degree(self, a, k):
        return a.is_zero() or a.degrees() == [k + 1]

    def d(self, a):
        return lichnerowicz(self.setup, a)

    def bracket(self, a, b):
        return schouten(a, b)

    def _allowed(self, I, m):
        return True

    def slice_basis(self, degree, coeff_degree):
        n = self.nvars
        out = []
        for I in combinations(range(1, n + 1), degree + 1):
            for m in monomials(n, range(1, n + 1), coeff_degree):
                if self._allowed(I, m):
                    out.append(_monomial_element(PVF, n, I, m))
        return out

    def source_degrees(self, rhs):
        """Coefficient degrees of preimage candidates under d_π."""
        if self.setup.pi.is_zero():
            return []
        if self.truncated:
            return list(range(self.cap + 1))
        m = self.setup.pi_degree
        degs = {sum(mon) for c in rhs.components.values() for mon in c.itermonoms()}
        return sorted(e - m + 1 for e in degs if e - m + 1 >= 0)

    def solve_basis(self, rhs, degree=1):
        out = []
        for e in self.source_degrees(rhs):
            out.extend(self.slice_basis(degree, e))
        return out


class CoisotropicCarrier(PolyvectorCarrier):
    """The sub-DGLA ℒ^{≥1}_Z[1] of polyvector fields vanishing in ⋀*𝒩."""

    name = "coisotropic"

    def __init__(self, setup, cap=None):
        setup.require_coisotropic()
        super().__init__(setup, cap)

    def has_degree(self, a, k):
        return super().has_degree(a, k) and in_LZ(self.setup, a)

    def _allowed(self, I, m):
        p = self.setup.codim
        return any(i > p for i in I) or any(m[:p])


class NormalCarrier(Carrier):
    """
    ⋀^{≥1}𝒩 with the L∞ structure of derived brackets along the chart splitting.
    Degree-1 elements are normal vector fields; there is no gauge action here.
    """

    name = "normal"
    has_gauge = False

    def __init__(self, setup, cap=None):
        setup.require_coisotropic()
        self.setup = setup
        self.cap = cap
        self.pvf = PolyvectorCarrier(setup, cap)
        self.truncated = self.pvf.truncated

    def zero(self):
        return NormalPVF.zero(self.setup)

    def has_degree(self, a, k):
        return a.is_zero() or a.degrees() == [k]

    def d(self, a):
        return normal_dpi(self.setup, a)

    def bracket(self, a, b):
        raise ValueError("the normal complex carries higher brackets, not a DGLA bracket")

    def lift(self, a):
        return normal_lift(a)

    def project(self, xi):
        return normal_project(self.setup, xi)

    def slice_basis(self, degree, coeff_degree):
        s = self.setup
        n, p = s.nvars, s.codim
        out = []
        for I in combinations(range(1, p + 1), degree):
            for m in monomials(n, range(p + 1, n + 1), coeff_degree):
                out.append(NormalPVF._raw(s, {I: chart_ring(n).from_dict({m: QQ(1)})}))
        return out

    def solve_basis(self, rhs, degree=1):
        out = []
        for e in self.pvf.source_degrees(rhs):
            out.extend(self.slice_basis(degree, e))
        return out


class KoszulCarrier(Carrier):
    """(Ω*[1], [·,·]_π, ∂): shifted degree = form degree − 1."""

    name = "koszul"

    def __init__(self, setup):
        setup.require_poisson()
        self.setup = setup
        self.nvars = setup.nvars

    def zero(self):
        return Form.zero(self.nvars)

    def has_degree(self, a, k):
        return a.is_zero() or a.degrees() == [k + 1]

    def d(self, a):
        return holo_d(a)

    def bracket(self, a, b):
        return koszul_split(self.setup, a, b)

    def slice_basis(self, degree, coeff_degree):
        n = self.nvars
        return [
            _monomial_element(Form, n, I, m)
            for I in combinations(range(1, n + 1), degree + 1)
            for m in monomials(n, range(1, n + 1), coeff_degree)
        ]

    def solve_basis(self, rhs, degree=1):
        degs = {sum(mon) for c in rhs.components.values() for mon in c.itermonoms()}
        out = []
        for e in sorted(degs):
            out.extend(self.slice_basis(degree, e + 1))
        return out


class FinDGLACarrier(Carrier):
    """A finite-dimensional DGLA given by structure constants; elements are coordinate tuples."""

    def __init__(self, dgla):
        self.dgla = dgla
        self.name = f"findgla:{dgla.name}" if dgla.name else "findgla"

    def zero(self):
        return self.dgla.zero()

    def add(self, a, b):
        return self.dgla.add(a, b)

    def scale(self, c, a):
        return self.dgla.scale(c, a)

    def is_zero(self, a):
        return not any(a)

    def has_degree(self, a, k):
        return all(not c or self.dgla.degrees[i] == k for i, c in enumerate(a))

    def d(self, a):
        return self.dgla.d(a)

    def bracket(self, a, b):
        return self.dgla.bracket(a, b)

    def coords(self, a):
        return {i: c for i, c in enumerate(a) if c}

    def to_json(self, a):
        return [format_rational(c) for c in a]

    def solve_basis(self, rhs, degree=1):
        return [self.dgla.basis(i) for i in self.dgla.basis_of_degree(degree)]


def make_carrier(kind, setup=None, dgla=None, cap=None):
    if kind == "polyvector":
        return PolyvectorCarrier(setup, cap)
    if kind == "coisotropic":
        return CoisotropicCarrier(setup, cap)
    if kind == "normal":
        return NormalCarrier(setup, cap)
    if kind == "koszul":
        return KoszulCarrier(setup)
    if kind == "findgla":
        return FinDGLACarrier(dgla)
    raise ValueError(f"unknown carrier {kind!r}")
