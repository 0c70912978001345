"""
Split graded Lie algebras M = L ⊕ A with a square-zero derivation D, and the
higher derived brackets {a1, ..., an} = P[...[[D a1, a2], a3], ..., an] on A.
"""

import logging

from sympy import QQ

from modules.linf_voronov.brackets import GradedSpace, SymMap, tuple_space
from modules.polycalc.calculus import schouten
from modules.polycalc.coiso import NormalPVF, normal_lift, normal_project
from modules.tot_cech.dgla import FinDGLA, load_fixture
from modules.tot_cech.hfiber import hfiber_build
from modules.tot_cech.linalg import columns_to_rows, rank

logger = logging.getLogger(__name__)


class SplitGLA:
    """
    M given as a FinDGLA whose differential is D, with the basis partitioned
    into the L-part and the A-part. P kills the L coordinates.
    """

    def __init__(self, M, a_part, name=""):
        self.M = M
        self.name = name or M.name
        self.a_part = sorted(int(i) for i in a_part)
        if any(not 0 <= i < M.dim for i in self.a_part):
            raise ValueError(f"{self.name}: A-part index outside 0..{M.dim - 1}")
        self.l_part = [i for i in range(M.dim) if i not in self.a_part]
        self.space = tuple_space(M.degrees, self.name)

    def D(self, v):
        return self.M.d(v)

    def bracket(self, u, v):
        return self.M.bracket(u, v)

    def project(self, v):
        keep = set(self.a_part)
        return tuple(c if i in keep else QQ(0) for i, c in enumerate(v))

    def in_A(self, v):
        return self.project(v) == tuple(v)

    def in_L(self, v):
        return not any(self.project(v))

    def a_basis(self):
        return [self.M.basis(i) for i in self.a_part]

    def validate(self):
        """M is a DGLA, L and A are subalgebras, A is abelian and D(L) ⊆ L."""
        self.M.validate()
        for i in self.l_part:
            b = self.M.basis(i)
            if not self.in_L(self.D(b)):
                raise ValueError(f"{self.name}: D does not preserve L at basis vector {i}")
            for j in self.l_part:
                if not self.in_L(self.bracket(b, self.M.basis(j))):
                    raise ValueError(f"{self.name}: L is not a subalgebra at ({i}, {j})")
        for i in self.a_part:
            for j in self.a_part:
                if any(self.bracket(self.M.basis(i), self.M.basis(j))):
                    raise ValueError(f"{self.name}: A is not abelian at ({i}, {j})")
        return True

    def sub_dgla(self):
        """L as a FinDGLA in the basis l_part."""
        idx = self.l_part
        pos = {i: p for p, i in enumerate(idx)}
        diff = [[self.M.differential[i][j] for j in idx] for i in idx]
        brackets = {}
        for a in idx:
            for b in idx:
                vec = self.M.bracket_basis(a, b)
                if vec is not None and any(vec):
                    brackets[(pos[a], pos[b])] = [vec[k] for k in idx]
        return FinDGLA([self.M.degrees[i] for i in idx], diff, brackets, name=f"{self.name}.L")

    def inclusion(self):
        return [[QQ(1) if i == j else QQ(0) for j in self.l_part] for i in range(self.M.dim)]

    def to_json(self):
        doc = self.M.to_json()
        doc.update(name=self.name, kind="split", A=list(self.a_part))
        return doc

    @classmethod
    def from_json(cls, doc):
        name = doc.get("name", "split")
        M = FinDGLA.from_json(doc, name=name)
        return cls(M, doc["A"], name=name)


def load_split(name):
    S = SplitGLA.from_json(load_fixture(name))
    S.validate()
    return S


def derived_bracket(S, *args):
    """P[...[[D a1, a2], a3], ..., an]."""
    if not args:
        raise ValueError("a derived bracket needs at least one argument")
    for k, a in enumerate(args):
        if not S.in_A(a):
            raise ValueError(f"argument {k} is not in A")
    v = S.D(args[0])
    for a in args[1:]:
        v = S.bracket(v, a)
    return S.project(v)


def derived_brackets(S, max_arity):
    """The family q_n = {...}ⁿ_D, n = 1..max_arity, as SymMaps of degree 1 on A."""
    return [
        SymMap(S.space, n, 1, lambda *args: derived_bracket(S, *args), f"{{}}^{n}_D")
        for n in range(1, max_arity + 1)
    ]


def normal_derived_brackets(setup, max_arity):
    """
    Derived brackets of the chart splitting ⋀Θ = ℒ_Z ⊕ σ(⋀𝒩) with D = [π, ·],
    evaluated on NormalPVFs; the degree of ⋀ᵏ𝒩 is k − 1.
    """
    setup.require_coisotropic()

    def degree(nu):
        d = nu.degree
        if d is None:
            if nu.is_zero():
                return 0
            raise ValueError(f"normal field of mixed degrees {nu.degrees()}")
        return d - 1

    space = GradedSpace(f"normal({setup.nvars},{setup.codim})", lambda: NormalPVF.zero(setup), degree)

    def bracket(*args):
        v = schouten(setup.pi, normal_lift(args[0]))
        for a in args[1:]:
            v = schouten(v, normal_lift(a))
        return normal_project(setup, v)

    return [SymMap(space, n, 1, bracket, f"{{}}^{n}_π") for n in range(1, max_arity + 1)]


def quotient_cohomology(S):
    """Cohomology of (A, PD), keyed by degree of A[−1]."""
    degs = sorted({S.M.degrees[i] for i in S.a_part})
    if not degs:
        return {}

    def rank_at(p):
        src = [i for i in S.a_part if S.M.degrees[i] == p]
        if not src:
            return 0
        images = [list(S.project(S.D(S.M.basis(i)))) for i in src]
        return rank(columns_to_rows(images, S.M.dim), len(src))

    out = {}
    for p in range(degs[0] - 1, degs[-1] + 2):
        dim = sum(1 for i in S.a_part if S.M.degrees[i] == p)
        out[p + 1] = dim - rank_at(p) - rank_at(p - 1)
    return out


def fiber_comparison(S, weight=None):
    """Cohomology of K(L ↪ M) next to that of (A[−1], {·}¹_D), per degree."""
    hf = hfiber_build(S.sub_dgla(), S.M, S.inclusion(), name=f"K({S.name})")
    fiber = hf.cohomology(weight)
    linf = quotient_cohomology(S)
    degrees = sorted(set(fiber) | set(linf))
    agree = all(fiber.get(p, 0) == linf.get(p, 0) for p in degrees)
    logger.info(f"Homotopy fiber of {S.name}: {fiber}; derived-bracket complex: {linf}")
    return {
        "hfiber_cohomology": {str(p): fiber.get(p, 0) for p in degrees},
        "derived_cohomology": {str(p): linf.get(p, 0) for p in degrees},
        "agree": agree,
    }
