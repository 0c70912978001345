"""
Poisson-induced structures on the chart and the coisotropy tests for
Z = {z1 = ... = zp = 0}.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from math import factorial
from types import MappingProxyType

from sympy import QQ

from modules.polycalc.calculus import (
    PVF, Form, interior, holo_d, lie_deriv, schouten, wedge_form, wedge_pvf,
)
from modules.polycalc.grammar import in_coordinate_ideal, restrict_to_zero, format_poly

logger = logging.getLogger(__name__)


class NotPoissonError(ValueError):
    pass


class NotCoisotropicError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CoisoSetup:
    """The triple (C^n, Z = {z1 = ... = zp = 0}, π)."""

    nvars: int
    codim: int
    pi: PVF

    def __post_init__(self):
        if not 0 <= self.codim <= self.nvars:
            raise ValueError(f"codimension {self.codim} outside 0..{self.nvars}")
        if self.pi.nvars != self.nvars:
            raise ValueError(f"bivector lives on C^{self.pi.nvars}, setup on C^{self.nvars}")
        if self.pi.degrees() not in ([], [2]):
            raise ValueError(f"π must have exterior degree 2, found degrees {self.pi.degrees()}")

    @cached_property
    def poisson(self):
        return is_poisson(self.pi)

    @cached_property
    def coisotropic(self):
        return is_coisotropic(self)

    @cached_property
    def pi_degree(self):
        """Common coefficient degree of π, or None when π is zero or not homogeneous."""
        if self.pi.is_zero() or not self.pi.is_homogeneous_coefficients():
            return None
        return self.pi.coefficient_degree()

    def require_poisson(self):
        if not self.poisson:
            raise NotPoissonError("π is not Poisson: [π, π] ≠ 0")

    def require_coisotropic(self):
        self.require_poisson()
        if not self.coisotropic:
            raise NotCoisotropicError(f"Z = {{z1..z{self.codim} = 0}} is not coisotropic for π")

    @classmethod
    def from_json(cls, doc):
        """{"n", "codim", "poisson"} as used by manifests and request bodies."""
        n = int(doc["n"])
        return cls(n, int(doc.get("codim", 0)), PVF.from_json(doc.get("poisson", []), n))

    def to_json(self):
        return {
            "n": self.nvars,
            "codim": self.codim,
            "poisson": self.pi.to_json(),
        }


class NormalPVF:
    """
    Section of ⋀*N_{Z|X}: components keyed by normal index tuples (all ≤ p) with
    coefficients in z_{p+1}..z_n only.
    """

    __slots__ = ("setup", "_terms")

    def __init__(self, setup, terms=None):
        self.setup = setup
        p = setup.codim
        field = PVF(setup.nvars, terms or {})
        for I, c in field.components.items():
            if any(i > p for i in I):
                raise ValueError(f"normal component {list(I)} uses a tangent direction (p = {p})")
            if any(any(m[:p]) for m in c.itermonoms()):
                raise ValueError(f"normal coefficient {format_poly(c)} depends on z1..z{p}")
        self._terms = dict(field.components)

    @classmethod
    def _raw(cls, setup, terms):
        obj = cls.__new__(cls)
        obj.setup = setup
        obj._terms = {k: v for k, v in terms.items() if v}
        return obj

    @classmethod
    def zero(cls, setup):
        return cls._raw(setup, {})

    @property
    def components(self):
        return MappingProxyType(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def is_zero(self):
        return not self._terms

    def degrees(self):
        return sorted({len(k) for k in self._terms})

    @property
    def degree(self):
        degs = self.degrees()
        return degs[0] if len(degs) == 1 else None

    def lift(self):
        return normal_lift(self)

    def __add__(self, other):
        if not _same_chart(self.setup, other.setup):
            raise ValueError("normal fields over different setups")
        terms = dict(self._terms)
        for k, v in other._terms.items():
            terms[k] = terms[k] + v if k in terms else v
        return self._raw(self.setup, terms)

    def __neg__(self):
        return self._raw(self.setup, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        s = QQ.convert(scalar)
        return self._raw(self.setup, {k: v * s for k, v in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, NormalPVF):
            return NotImplemented
        return _same_chart(self.setup, other.setup) and self._terms == other._terms

    __hash__ = None

    def to_json(self):
        return [{"indices": list(I), "coeff": format_poly(c)} for I, c in self.items()]

    def __repr__(self):
        return f"NormalPVF({self.to_json()})"


def _same_chart(a, b):
    return a is b or (a.nvars, a.codim) == (b.nvars, b.codim)


def _same_nvars(setup, *objs):
    for obj in objs:
        if obj.nvars != setup.nvars:
            raise ValueError(f"mismatched nvars: setup on C^{setup.nvars}, argument on C^{obj.nvars}")


def _pure_degree(alpha, name="α"):
    deg = alpha.degree
    if deg is None:
        if alpha.is_zero():
            return None
        raise ValueError(f"{name} must have pure degree, found degrees {alpha.degrees()}")
    return deg


def lichnerowicz(setup, xi):
    """d_π = [π, ·]."""
    _same_nvars(setup, xi)
    return schouten(setup.pi, xi)


def hamiltonian(setup, f):
    """Hamiltonian vector field [π, f] of a function."""
    return lichnerowicz(setup, PVF.function(setup.nvars, f))


def poisson_bracket(setup, f, g):
    """{f, g}_π = 𝒊_π(∂f ∧ ∂g)."""
    n = setup.nvars
    df = holo_d(Form.function(n, f))
    dg = holo_d(Form.function(n, g))
    return interior(setup.pi, wedge_form(df, dg)).coeff()


def poisson_bracket_via_schouten(setup, f, g):
    """{f, g}_π = [[π, f], g]."""
    n = setup.nvars
    return schouten(hamiltonian(setup, f), PVF.function(n, g)).coeff()


def _koszul_homogeneous(setup, alpha, i, beta):
    pi = setup.pi
    first = lie_deriv(pi, wedge_form(alpha, beta)) - wedge_form(lie_deriv(pi, alpha), beta)
    if i % 2:
        first = -first
    return first - wedge_form(alpha, lie_deriv(pi, beta))


def koszul(setup, alpha, beta):
    """[α, β]_π = (−1)^i(𝒍_π(α∧β) − 𝒍_π(α)∧β) − α∧𝒍_π(β) for α of pure degree i."""
    _same_nvars(setup, alpha, beta)
    i = _pure_degree(alpha)
    if i is None:
        return Form.zero(setup.nvars)
    return _koszul_homogeneous(setup, alpha, i, beta)


def koszul_split(setup, alpha, beta):
    """Koszul bracket extended bilinearly over the homogeneous parts of α."""
    out = Form.zero(setup.nvars)
    for i, part in alpha.homogeneous_parts().items():
        out = out + _koszul_homogeneous(setup, part, i, beta)
    return out


def _anchor_dz(setup, i):
    n = setup.nvars
    terms = {}
    for j in range(1, n + 1):
        if j == i:
            continue
        c = interior(setup.pi, Form.basis(n, i, j)).coeff()
        if c:
            terms[(j,)] = c
    return PVF(n, terms)


def anchor(setup, alpha):
    """π^#: the O-linear algebra morphism Ω* → ⋀*Θ with π^#(dz_i) = Σ_j 𝒊_π(dz_i∧dz_j) ∂_j."""
    _same_nvars(setup, alpha)
    n = setup.nvars
    images = {}
    out = PVF.zero(n)
    for I, f in alpha.components.items():
        term = PVF.function(n, f)
        for i in I:
            if i not in images:
                images[i] = _anchor_dz(setup, i)
            term = wedge_pvf(term, images[i])
        out = out + term
    return out


def h_op(setup, alpha, beta):
    """h(α, β) = (−1)^i(𝒊_π(α∧β) − 𝒊_π(α)∧β − α∧𝒊_π(β)) for α of pure degree i."""
    _same_nvars(setup, alpha, beta)
    i = _pure_degree(alpha)
    if i is None:
        return Form.zero(setup.nvars)
    pi = setup.pi
    out = (interior(pi, wedge_form(alpha, beta))
           - wedge_form(interior(pi, alpha), beta)
           - wedge_form(alpha, interior(pi, beta)))
    return -out if i % 2 else out


def is_poisson(pi):
    if pi.degrees() not in ([], [2]):
        raise ValueError(f"expected a bivector, found exterior degrees {pi.degrees()}")
    return schouten(pi, pi).is_zero()


def is_coisotropic(setup):
    """π_ij ∈ (z1..zp) for all i < j ≤ p."""
    setup.require_poisson()
    p = setup.codim
    for I, c in setup.pi.components.items():
        if all(i <= p for i in I) and not in_coordinate_ideal(c, p):
            logger.debug(f"π_{I} = {format_poly(c)} is not in the ideal of Z")
            return False
    return True


def in_LZ(setup, xi):
    """Membership in ℒ*_Z = ker(⋀*Θ → ⋀*N)."""
    _same_nvars(setup, xi)
    p = setup.codim
    return all(
        in_coordinate_ideal(c, p)
        for I, c in xi.components.items()
        if all(i <= p for i in I)
    )


def restrict_form(setup, alpha):
    """Pull back to Z: set z1..zp = 0 and drop dz1..dzp."""
    _same_nvars(setup, alpha)
    p = setup.codim
    return Form._raw(setup.nvars, {
        I: restrict_to_zero(c, p)
        for I, c in alpha.components.items()
        if all(i > p for i in I)
    })


def in_IZ(setup, alpha):
    """Membership in ℐ*_Z, the kernel of restriction to Z."""
    return restrict_form(setup, alpha).is_zero()


def normal_project(setup, xi):
    _same_nvars(setup, xi)
    p = setup.codim
    return NormalPVF._raw(setup, {
        I: restrict_to_zero(c, p)
        for I, c in xi.components.items()
        if all(i <= p for i in I)
    })


def normal_lift(nu):
    """The lift of ν constant along the normal directions."""
    return PVF._raw(nu.setup.nvars, dict(nu.components))


def normal_dpi(setup, nu):
    setup.require_coisotropic()
    if not _same_chart(nu.setup, setup):
        raise ValueError("normal field belongs to a different chart")
    return normal_project(setup, lichnerowicz(setup, normal_lift(nu)))


def ideal_generators(setup):
    """S = {z_j, dz_i}, 1 ≤ i, j ≤ p."""
    n, p = setup.nvars, setup.codim
    gens = [Form.function(n, setup.pi.ring.gens[j - 1]) for j in range(1, p + 1)]
    gens += [Form.basis(n, i) for i in range(1, p + 1)]
    return gens


def coisotropy_characterizations(setup):
    """The four equivalent coisotropy tests, each evaluated on the ideal generators."""
    S = ideal_generators(setup)
    return {
        "bivector_in_LZ": is_coisotropic(setup),
        "koszul_closed": all(in_IZ(setup, koszul(setup, s, t)) for s in S for t in S),
        "h_closed": all(in_IZ(setup, h_op(setup, s, t)) for s in S for t in S),
        "anchor_into_LZ": all(in_LZ(setup, anchor(setup, s)) for s in S),
    }


def interior_commutator_power(setup, alpha, k):
    """The operator [𝒊_π, ·]^k (α∧) / k! as a callable on forms."""
    pi = setup.pi

    def base(beta):
        return wedge_form(alpha, beta)

    op = base
    for _ in range(k):
        op = (lambda inner: (lambda beta: interior(pi, inner(beta)) - inner(interior(pi, beta))))(op)
    scale = QQ(1, factorial(k))
    return lambda beta: op(beta) * scale
