"""
Polynomial differential forms on the standard simplex Δ^n.

Forms are written in the reduced coordinates t1..tn (t0 = 1 − t1 − ... − tn).
Δ^0 is a point: its ring carries a single unused generator and only constants occur.
"""

import logging
from functools import lru_cache
from itertools import combinations
from math import factorial
from types import MappingProxyType

from sympy import QQ
from sympy.polys.orderings import lex
from sympy.polys.rings import ring

from modules.polycalc.calculus import permutation_sign

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def simplex_ring(n):
    names = ",".join(f"t{i}" for i in range(1, max(n, 1) + 1))
    return ring(names, QQ, lex)[0]


class SimplexForm:

    __slots__ = ("n", "ring", "_terms")

    def __init__(self, n, terms=None):
        self.n = n
        self.ring = simplex_ring(n)
        acc = {}
        for indices, coeff in (terms or {}).items():
            for i in indices:
                if not 1 <= i <= n:
                    raise ValueError(f"dt{i} is not a coordinate of Δ^{n}")
            sign, key = permutation_sign(indices)
            if not sign:
                continue
            c = self.ring.ring_new(coeff) * sign
            acc[key] = acc[key] + c if key in acc else c
        self._terms = {k: v for k, v in acc.items() if v}

    @classmethod
    def _raw(cls, n, terms):
        obj = cls.__new__(cls)
        obj.n = n
        obj.ring = simplex_ring(n)
        obj._terms = {k: v for k, v in terms.items() if v}
        return obj

    @classmethod
    def zero(cls, n):
        return cls._raw(n, {})

    @classmethod
    def constant(cls, n, c=1):
        return cls._raw(n, {(): simplex_ring(n).ring_new(QQ.convert(c))})

    @property
    def components(self):
        return MappingProxyType(self._terms)

    def is_zero(self):
        return not self._terms

    def degrees(self):
        return sorted({len(k) for k in self._terms})

    def part(self, q):
        return self._raw(self.n, {I: c for I, c in self._terms.items() if len(I) == q})

    def weight(self):
        """max(polynomial degree + form degree) over the terms; −1 for zero."""
        return max((sum(m) + len(I) for I, c in self._terms.items() for m in c.itermonoms()), default=-1)

    def __add__(self, other):
        if other.n != self.n:
            raise ValueError(f"forms on Δ^{self.n} and Δ^{other.n}")
        terms = dict(self._terms)
        for k, v in other._terms.items():
            terms[k] = terms[k] + v if k in terms else v
        return self._raw(self.n, terms)

    def __neg__(self):
        return self._raw(self.n, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        s = self.ring.ring_new(scalar)
        return self._raw(self.n, {k: v * s for k, v in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, SimplexForm):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    __hash__ = None

    def __repr__(self):
        parts = [f"({c.as_expr()})" + "".join(f"dt{i}" for i in I) for I, c in sorted(self._terms.items())]
        return f"SimplexForm[{self.n}](" + (" + ".join(parts) or "0") + ")"


def wedge(phi, psi):
    if phi.n != psi.n:
        raise ValueError(f"forms on Δ^{phi.n} and Δ^{psi.n}")
    terms = {}
    for I, f in phi._terms.items():
        for J, g in psi._terms.items():
            sign, key = permutation_sign(I + J)
            if not sign:
                continue
            c = f * g if sign > 0 else -(f * g)
            terms[key] = terms[key] + c if key in terms else c
    return SimplexForm._raw(phi.n, terms)


def d(phi):
    if phi.n == 0:
        return SimplexForm.zero(0)
    terms = {}
    gens = phi.ring.gens
    for I, f in phi._terms.items():
        for j in range(1, phi.n + 1):
            if j in I:
                continue
            df = f.diff(gens[j - 1])
            if not df:
                continue
            sign, key = permutation_sign((j,) + I)
            c = df if sign > 0 else -df
            terms[key] = terms[key] + c if key in terms else c
    return SimplexForm._raw(phi.n, terms)


def barycentric(n, i):
    """The barycentric coordinate t_i on Δ^n as a 0-form (t_0 = 1 − Σ t_j)."""
    R = simplex_ring(n)
    if i == 0:
        f = R.one
        for j in range(n):
            f -= R.gens[j]
        return SimplexForm._raw(n, {(): f})
    if not 1 <= i <= n:
        raise ValueError(f"Δ^{n} has no barycentric coordinate t{i}")
    return SimplexForm._raw(n, {(): R.gens[i - 1]})


def _one_form_of(n, poly):
    return d(SimplexForm._raw(n, {(): poly}))


@lru_cache(maxsize=None)
def _face_images(n, k):
    """Images of t1..tn under the k-th coface Δ^{n−1} → Δ^n, as polynomials on Δ^{n−1}."""
    R = simplex_ring(n - 1)
    s = [None] + (list(R.gens[:n - 1]) if n > 1 else [])
    images = []
    for j in range(1, n + 1):
        if k == 0:
            if j == 1:
                img = R.one
                for i in range(1, n):
                    img -= s[i]
            else:
                img = s[j - 1]
        elif j < k:
            img = s[j]
        elif j == k:
            img = R.zero
        else:
            img = s[j - 1]
        images.append(img)
    return tuple(images)


def face_pullback(phi, k):
    """Pull a form on Δ^n back along the coface missing vertex k."""
    n = phi.n
    if n < 1:
        raise ValueError("Δ^0 has no faces")
    if not 0 <= k <= n:
        raise ValueError(f"Δ^{n} has no face {k}")
    images = _face_images(n, k)
    target = n - 1
    R = simplex_ring(target)
    dimages = [_one_form_of(target, img) for img in images]
    out = SimplexForm.zero(target)
    for I, f in phi._terms.items():
        coeff = R.zero
        for monom, c in f.iterterms():
            term = R.ring_new(c)
            for j, e in enumerate(monom):
                if e:
                    term = term * images[j] ** e
            coeff += term
        if not coeff:
            continue
        piece = SimplexForm._raw(target, {(): coeff})
        for i in I:
            piece = wedge(piece, dimages[i - 1])
        out = out + piece
    return out


def simplex_integrate(phi):
    """∫_{Δ^n} of the top-degree part; ∫ t^a dt1…dtn = Π a_i! / (n + |a|)!. On Δ^0: evaluation."""
    n = phi.n
    if n == 0:
        c = phi._terms.get(())
        return QQ(0) if c is None else QQ.convert(c.coeff(1))
    top = phi._terms.get(tuple(range(1, n + 1)))
    total = QQ(0)
    if top is None:
        return total
    for monom, c in top.iterterms():
        num = 1
        for a in monom:
            num *= factorial(a)
        total += c * QQ(num, factorial(n + sum(monom)))
    return total


def evaluate_at_vertex(phi, i):
    """Value of the 0-form part at vertex e_i."""
    n = phi.n
    f = phi._terms.get(())
    if f is None:
        return QQ(0)
    point = [QQ(0)] * max(n, 1)
    if i > 0:
        point[i - 1] = QQ(1)
    return QQ.convert(f(*point)) if n else QQ.convert(f.coeff(1))


def whitney_form(n, indices):
    """ω_I = k! Σ_j (−1)^j t_{i_j} dt_{i_0} ∧ … ∧ (omit i_j) ∧ … ∧ dt_{i_k} on Δ^n."""
    idx = tuple(indices)
    k = len(idx) - 1
    out = SimplexForm.zero(n)
    for j, i in enumerate(idx):
        piece = barycentric(n, i)
        for l, other in enumerate(idx):
            if l != j:
                piece = wedge(piece, d(barycentric(n, other)))
        out = out + piece if j % 2 == 0 else out - piece
    return out * QQ(factorial(k))


def monomial_basis(n, q, weight):
    """Monomial forms t^a dt_I on Δ^n with |I| = q and |a| + q ≤ weight."""
    R = simplex_ring(n)
    max_poly = weight - q
    if max_poly < 0 or q > n:
        return []
    if n == 0:
        return [SimplexForm.constant(0)]
    monoms = []

    def rec(prefix, remaining, left):
        if remaining == 0:
            monoms.append(tuple(prefix))
            return
        for e in range(left + 1):
            rec(prefix + [e], remaining - 1, left - e)

    rec([], n, max_poly)
    out = []
    for I in combinations(range(1, n + 1), q):
        for m in monoms:
            out.append(SimplexForm._raw(n, {I: R.from_dict({m: QQ(1)})}))
    return out
