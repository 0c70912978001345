"""
Polyvector fields and holomorphic forms on the affine chart C^n.

Both are superfunctions in odd generators (theta_i = d/dz_i for polyvectors,
dz_i for forms) with coefficients in chart_ring(n). Components are keyed by
strictly increasing index tuples; a permuted key is absorbed with its sign on
construction, a repeated index kills the term.
"""

import logging
from types import MappingProxyType

from modules.polycalc.grammar import chart_ring, format_poly, parse_poly, total_degree

logger = logging.getLogger(__name__)


def permutation_sign(indices):
    """Sign of the sorting permutation and the sorted tuple; sign 0 on repeats."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return 0, None
    sign = 1
    for i in range(len(idx)):
        for j in range(len(idx) - 1 - i):
            if idx[j] > idx[j + 1]:
                idx[j], idx[j + 1] = idx[j + 1], idx[j]
                sign = -sign
    return sign, tuple(idx)


class _Graded:
    """Common storage of PVF and Form."""

    __slots__ = ("nvars", "ring", "_terms")

    kind = "graded"

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        self.ring = chart_ring(nvars)
        acc = {}
        for indices, coeff in (terms or {}).items():
            indices = tuple(indices)
            for i in indices:
                if not 1 <= i <= nvars:
                    raise ValueError(f"index {i} outside 1..{nvars}")
            sign, key = permutation_sign(indices)
            if not sign:
                continue
            c = self.ring.ring_new(coeff) * sign
            if key in acc:
                c = acc[key] + c
            acc[key] = c
        self._terms = {k: v for k, v in acc.items() if v}

    @classmethod
    def _raw(cls, nvars, terms):
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj.ring = chart_ring(nvars)
        obj._terms = {k: v for k, v in terms.items() if v}
        return obj

    @classmethod
    def zero(cls, nvars):
        return cls._raw(nvars, {})

    @classmethod
    def function(cls, nvars, f):
        return cls(nvars, {(): f})

    @classmethod
    def basis(cls, nvars, *indices, coeff=1):
        return cls(nvars, {tuple(indices): coeff})

    @property
    def components(self):
        return MappingProxyType(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def coeff(self, *indices):
        sign, key = permutation_sign(indices)
        if not sign:
            return self.ring.zero
        return self._terms.get(key, self.ring.zero) * sign

    def is_zero(self):
        return not self._terms

    def degrees(self):
        return sorted({len(k) for k in self._terms})

    @property
    def degree(self):
        """Pure exterior degree, or None for a zero or non-homogeneous element."""
        degs = self.degrees()
        return degs[0] if len(degs) == 1 else None

    def part(self, k):
        return self._raw(self.nvars, {I: c for I, c in self._terms.items() if len(I) == k})

    def homogeneous_parts(self):
        return {k: self.part(k) for k in self.degrees()}

    def coefficient_degree(self):
        return max((total_degree(c) for c in self._terms.values()), default=-1)

    def is_homogeneous_coefficients(self):
        degs = {sum(m) for c in self._terms.values() for m in c.itermonoms()}
        return len(degs) <= 1

    def map_coefficients(self, fn):
        return self._raw(self.nvars, {I: fn(c) for I, c in self._terms.items()})

    def _check(self, other):
        if not isinstance(other, type(self)):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.nvars != self.nvars:
            raise ValueError(f"mismatched nvars: {self.nvars} vs {other.nvars}")

    def __add__(self, other):
        self._check(other)
        terms = dict(self._terms)
        for k, v in other._terms.items():
            terms[k] = terms[k] + v if k in terms else v
        return self._raw(self.nvars, terms)

    def __neg__(self):
        return self._raw(self.nvars, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        """Multiplication by a function (polynomial) or rational scalar."""
        s = self.ring.ring_new(scalar)
        return self._raw(self.nvars, {k: v * s for k, v in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, type(self)):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    __hash__ = None

    def diff(self, i):
        """Partial derivative of every coefficient in z_i (1-based)."""
        gen = self.ring.gens[i - 1]
        return self._raw(self.nvars, {k: v.diff(gen) for k, v in self._terms.items()})

    def to_json(self):
        return [{"indices": list(I), "coeff": format_poly(c)} for I, c in self.items()]

    @classmethod
    def from_json(cls, items, nvars):
        """Parse the list-of-{indices, coeff} encoding; reversed index lists are sign-normalized."""
        terms = {}
        for entry in items or []:
            indices = [int(i) for i in entry.get("indices", [])]
            sign, key = permutation_sign(indices)
            if not sign:
                raise ValueError(f"repeated index in {indices}")
            if key in terms:
                raise ValueError(f"duplicate component {list(key)}")
            for i in key:
                if not 1 <= i <= nvars:
                    raise ValueError(f"index {i} outside 1..{nvars}")
            terms[key] = parse_poly(entry.get("coeff", "0"), nvars) * sign
        return cls._raw(nvars, terms)

    def __repr__(self):
        if not self._terms:
            return f"{type(self).__name__}(0)"
        sym = "d" if self.kind == "form" else "∂"
        parts = []
        for I, c in self.items():
            basis = "∧".join(f"{sym}{i}" for i in I)
            parts.append(f"({format_poly(c)}){basis}" if basis else f"({format_poly(c)})")
        return f"{type(self).__name__}({' + '.join(parts)})"


class PVF(_Graded):
    """Polyvector field: the component keyed by I is the coefficient of ∂_{i1}∧…∧∂_{ik}."""

    __slots__ = ()
    kind = "pvf"


class Form(_Graded):
    """Holomorphic differential form: the component keyed by I is the coefficient of dz_{i1}∧…∧dz_{ik}."""

    __slots__ = ()
    kind = "form"


def _wedge(x, y):
    x._check(y)
    terms = {}
    for I, f in x._terms.items():
        for J, g in y._terms.items():
            sign, key = permutation_sign(I + J)
            if not sign:
                continue
            c = f * g
            if sign < 0:
                c = -c
            terms[key] = terms[key] + c if key in terms else c
    return x._raw(x.nvars, terms)


def wedge_pvf(xi, eta):
    if not isinstance(xi, PVF) or not isinstance(eta, PVF):
        raise TypeError("wedge_pvf expects polyvector fields")
    return _wedge(xi, eta)


def wedge_form(alpha, beta):
    if not isinstance(alpha, Form) or not isinstance(beta, Form):
        raise TypeError("wedge_form expects forms")
    return _wedge(alpha, beta)


def right_derivative(xi, i):
    """xi ∂⃖θ_i: remove θ_i from each monomial after moving it to the right end."""
    terms = {}
    for I, c in xi._terms.items():
        if i not in I:
            continue
        pos = I.index(i)
        key = I[:pos] + I[pos + 1:]
        terms[key] = c if (len(I) - 1 - pos) % 2 == 0 else -c
    return PVF._raw(xi.nvars, terms)


def _schouten_homogeneous(xi, eta, a, b):
    out = PVF.zero(xi.nvars)
    sign = -1 if ((a - 1) * (b - 1)) % 2 == 0 else 1
    for i in range(1, xi.nvars + 1):
        left = right_derivative(xi, i)
        if not left.is_zero():
            d_eta = eta.diff(i)
            if not d_eta.is_zero():
                out = out + _wedge(left, d_eta)
        right = right_derivative(eta, i)
        if not right.is_zero():
            d_xi = xi.diff(i)
            if not d_xi.is_zero():
                term = _wedge(right, d_xi)
                out = out + term if sign > 0 else out - term
    return out


def schouten(xi, eta):
    """
    Schouten-Nijenhuis bracket. For homogeneous xi, eta of exterior degrees a, b:
    [xi, eta] = Σ_i (xi ∂⃖θ_i)(∂_i eta) − (−1)^{(a−1)(b−1)} (eta ∂⃖θ_i)(∂_i xi).
    This is the graded Lie bracket of ⋀*Θ[1] with [X, f] = X(f).
    """
    if not isinstance(xi, PVF) or not isinstance(eta, PVF):
        raise TypeError("schouten expects polyvector fields")
    xi._check(eta)
    out = PVF.zero(xi.nvars)
    for a, x in xi.homogeneous_parts().items():
        for b, y in eta.homogeneous_parts().items():
            out = out + _schouten_homogeneous(x, y, a, b)
    return out


def _contract(j, I):
    """𝒊_{∂_j} dz_I as (sign, remaining index tuple), sign 0 when j ∉ I."""
    if j not in I:
        return 0, None
    pos = I.index(j)
    return (1 if pos % 2 == 0 else -1), I[:pos] + I[pos + 1:]


def interior(eta, alpha):
    """
    Interior product 𝒊_eta alpha, O-linear in eta, with 𝒊_{∂_{j1}∧…∧∂_{jk}} = 𝒊_{∂_{j1}}∘…∘𝒊_{∂_{jk}}.
    The innermost contraction is by the last index, so 𝒊_{∂1∧∂2}(dz1∧dz2) = −1.
    """
    if not isinstance(eta, PVF) or not isinstance(alpha, Form):
        raise TypeError("interior expects a polyvector field and a form")
    if eta.nvars != alpha.nvars:
        raise ValueError(f"mismatched nvars: {eta.nvars} vs {alpha.nvars}")
    terms = {}
    for J, f in eta._terms.items():
        for I, g in alpha._terms.items():
            sign, rest = 1, I
            for j in reversed(J):
                s, rest = _contract(j, rest)
                if not s:
                    break
                sign *= s
            else:
                c = f * g if sign > 0 else -(f * g)
                terms[rest] = terms[rest] + c if rest in terms else c
    return Form._raw(alpha.nvars, terms)


def holo_d(alpha):
    """Holomorphic de Rham differential: ∂(f dz_I) = Σ_j ∂_j f dz_j∧dz_I."""
    if not isinstance(alpha, Form):
        raise TypeError("holo_d expects a form")
    terms = {}
    gens = alpha.ring.gens
    for I, f in alpha._terms.items():
        for j in range(1, alpha.nvars + 1):
            if j in I:
                continue
            df = f.diff(gens[j - 1])
            if not df:
                continue
            sign, key = permutation_sign((j,) + I)
            c = df if sign > 0 else -df
            terms[key] = terms[key] + c if key in terms else c
    return Form._raw(alpha.nvars, terms)


def lie_deriv(eta, alpha):
    """𝒍_eta = [𝒊_eta, ∂] = 𝒊_eta ∂ − (−1)^k ∂ 𝒊_eta for eta of exterior degree k."""
    out = Form.zero(alpha.nvars)
    for k, part in eta.homogeneous_parts().items():
        a = interior(part, holo_d(alpha))
        b = holo_d(interior(part, alpha))
        out = out + (a - b if k % 2 == 0 else a + b)
    return out
