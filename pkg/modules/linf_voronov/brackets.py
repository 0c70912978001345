"""
Graded-symmetric multilinear maps, their unshuffle composition and the
L∞[1] relations.

Conventions: every map acts on V with the V-degree returned by space.degree.
(f ∘ g)(x1..xn) = Σ over (i, n−i)-unshuffles S of ε(S) f(g(x_S), x_rest) with
ε the Koszul sign of moving x_S to the front, and
[f, g]_NR = f ∘ g − (−1)^{|f||g|} g ∘ f. The L∞[1] relation of arity n is
Σ_{i+j=n+1} (q_j ∘ q_i)(x1..xn) = 0.
"""

import logging
import operator
from itertools import combinations, combinations_with_replacement
from math import factorial

from sympy import QQ

logger = logging.getLogger(__name__)


def _sign(e):
    return -1 if e % 2 else 1


class GradedSpace:
    """Homogeneous elements with a linear structure and a degree function."""

    def __init__(self, name, zero, degree, add=operator.add, scale=None, equal=operator.eq):
        self.name = name
        self._zero = zero
        self.degree = degree
        self.add = add
        self.scale = scale or (lambda c, a: a * QQ.convert(c))
        self.equal = equal

    def zero(self):
        return self._zero()

    def is_zero(self, a):
        return self.equal(a, self.zero())

    def sum(self, terms):
        out = self.zero()
        for t in terms:
            out = self.add(out, t)
        return out

    def shifted(self, k=1):
        """The same elements with degree lowered by k (V = L[k])."""
        return GradedSpace(f"{self.name}[{k}]", self._zero, lambda a: self.degree(a) - k,
                           self.add, self.scale, self.equal)


def tuple_space(degrees, name=""):
    """Coordinate tuples over a graded basis; degree of a homogeneous nonzero tuple."""
    dim = len(degrees)

    def degree(v):
        degs = {degrees[i] for i, c in enumerate(v) if c}
        if len(degs) > 1:
            raise ValueError(f"{name}: element is not homogeneous")
        return degs.pop() if degs else 0

    return GradedSpace(
        name,
        lambda: (QQ(0),) * dim,
        degree,
        add=lambda u, v: tuple(a + b for a, b in zip(u, v)),
        scale=lambda c, v: tuple(QQ.convert(c) * a for a in v),
    )


def koszul_sign(degrees, order):
    """ε with x_{order[0]} ⊙ ... = ε x_0 ⊙ x_1 ⊙ ... in the graded symmetric algebra."""
    s = 1
    for p in range(len(order)):
        for q in range(p + 1, len(order)):
            if order[p] > order[q]:
                s *= _sign(degrees[order[p]] * degrees[order[q]])
    return s


def unshuffles(n, i):
    """(i, n−i)-unshuffles as (front, rest) index tuples."""
    for front in combinations(range(n), i):
        rest = tuple(k for k in range(n) if k not in front)
        yield front, rest


class SymMap:
    """A graded-symmetric multilinear map V^{⊙n} → V of a fixed degree."""

    def __init__(self, space, arity, degree, fn, name=""):
        if arity < 1:
            raise ValueError("a symmetric map needs arity at least 1")
        self.space = space
        self.arity = arity
        self.degree = degree
        self.fn = fn
        self.name = name or f"q{arity}"

    def __call__(self, *args):
        if len(args) != self.arity:
            raise ValueError(f"{self.name} takes {self.arity} arguments, got {len(args)}")
        return self.fn(*args)

    def symmetry_defect(self, args):
        """First adjacent transposition breaking graded symmetry on args, or None."""
        sp = self.space
        base = self(*args)
        degs = [sp.degree(a) for a in args]
        for k in range(len(args) - 1):
            swapped = list(args)
            swapped[k], swapped[k + 1] = swapped[k + 1], swapped[k]
            value = sp.scale(_sign(degs[k] * degs[k + 1]), self(*swapped))
            if not sp.equal(base, value):
                return k
        return None

    @classmethod
    def from_table(cls, space, arity, degree, table, basis, name=""):
        """
        Extend a table on sorted basis index tuples multilinearly; elements are
        coordinate tuples in `basis` order.
        """
        degs = [space.degree(b) for b in basis]

        def fn(*args):
            out = space.zero()
            supports = [[(i, c) for i, c in enumerate(a) if c] for a in args]

            def rec(pos, idx, coef):
                nonlocal out
                if pos == len(args):
                    order = sorted(range(arity), key=lambda k: idx[k])
                    key = tuple(idx[k] for k in order)
                    value = table.get(key)
                    if value is not None:
                        sign = koszul_sign([degs[i] for i in idx], order)
                        out = space.add(out, space.scale(coef * sign, value))
                    return
                for i, c in supports[pos]:
                    rec(pos + 1, idx + [i], coef * c)

            rec(0, [], QQ(1))
            return out

        return cls(space, arity, degree, fn, name)

    def tabulate(self, basis):
        """Values on sorted basis index tuples, skipping zeros."""
        out = {}
        for key in combinations_with_replacement(range(len(basis)), self.arity):
            value = self(*(basis[i] for i in key))
            if not self.space.is_zero(value):
                out[key] = value
        return out


def compose(f, g, args):
    """(f ∘ g)(args) by unshuffles."""
    sp = f.space
    n = len(args)
    if n != f.arity + g.arity - 1:
        raise ValueError(f"{f.name} ∘ {g.name} takes {f.arity + g.arity - 1} arguments, got {n}")
    degs = [sp.degree(a) for a in args]
    out = sp.zero()
    for front, rest in unshuffles(n, g.arity):
        inner = g(*(args[k] for k in front))
        if sp.is_zero(inner):
            continue
        value = f(inner, *(args[k] for k in rest))
        out = sp.add(out, sp.scale(koszul_sign(degs, front + rest), value))
    return out


def nr_bracket(f, g, args):
    """[f, g]_NR evaluated on args."""
    sp = f.space
    if f.space is not g.space:
        raise ValueError(f"{f.name} and {g.name} act on different spaces")
    a = compose(f, g, args)
    b = compose(g, f, args)
    return sp.add(a, sp.scale(-_sign(f.degree * g.degree), b))


def linf_relation(brackets, args):
    """Σ_{i+j=n+1} (q_j ∘ q_i)(args) for brackets = [q1, q2, ...]; missing entries are zero."""
    n = len(args)
    sp = next(q for q in brackets if q is not None).space
    out = sp.zero()
    for i in range(1, n + 1):
        j = n + 1 - i
        if i > len(brackets) or j > len(brackets):
            continue
        qi, qj = brackets[i - 1], brackets[j - 1]
        if qi is None or qj is None:
            continue
        out = sp.add(out, compose(qj, qi, args))
    return out


def linf_check(brackets, arity, samples):
    """
    Check graded symmetry and the L∞[1] relations up to `arity` on all
    multisets drawn from `samples`. Returns (ok, first failure or None).
    """
    maps = [q for q in brackets if q is not None]
    if not maps:
        return True, None
    sp = maps[0].space
    for q in maps:
        for args in combinations_with_replacement(samples, q.arity):
            k = q.symmetry_defect(args)
            if k is not None:
                raise ValueError(f"{q.name} is not graded symmetric in slots {k}, {k + 1}")
    for n in range(1, arity + 1):
        for idx in combinations_with_replacement(range(len(samples)), n):
            value = linf_relation(brackets, [samples[i] for i in idx])
            if not sp.is_zero(value):
                failure = f"arity {n} relation fails on samples {list(idx)}"
                logger.info(failure)
                return False, failure
    logger.debug(f"L∞ relations hold up to arity {arity} on {len(samples)} samples")
    return True, None


class DGLAView(GradedSpace):
    """A DGLA presented by callbacks; degree is the DGLA degree."""

    def __init__(self, name, zero, degree, d, bracket, **kwargs):
        super().__init__(name, zero, degree, **kwargs)
        self.d = d
        self.bracket = bracket

    @classmethod
    def of_findgla(cls, L):
        sp = tuple_space(L.degrees, L.name)
        return cls(L.name or "findgla", sp._zero, sp.degree, L.d, L.bracket, add=sp.add, scale=sp.scale)


def decalage(view):
    """(q1, q2) on V = L[1]: q1 = −d, q2(a, b) = (−1)^{|a|}[a, b] with |a| the degree in L."""
    V = view.shifted(1)

    def q1(a):
        return view.scale(-1, view.d(a))

    def q2(a, b):
        return view.scale(_sign(view.degree(a)), view.bracket(a, b))

    return SymMap(V, 1, 1, q1, "q1"), SymMap(V, 2, 1, q2, "q2")


def mc_sum(brackets, comps, order):
    """
    Σ_n (1/n!) q_n(x, ..., x) for x = Σ_k t^k x_k, truncated at t^order;
    returned per power of t.
    """
    sp = next(q for q in brackets if q is not None).space
    out = {}

    def compositions(total, parts):
        if parts == 1:
            if total in comps:
                yield (total,)
            return
        for k in comps:
            if k < total:
                for rest in compositions(total - k, parts - 1):
                    yield (k,) + rest

    for total in range(1, order):
        acc = sp.zero()
        for n, q in enumerate(brackets, start=1):
            if q is None or n > total:
                continue
            for ks in compositions(total, n):
                acc = sp.add(acc, sp.scale(QQ(1, factorial(n)), q(*(comps[k] for k in ks))))
        if not sp.is_zero(acc):
            out[total] = acc
    return out
