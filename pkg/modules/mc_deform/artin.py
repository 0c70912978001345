"""
Truncated power series over ℚ[t]/(t^N) with coefficients in a carrier DGLA.

Only positive powers are stored: every series lives in L ⊗ m_A with m_A = (t).
"""

import logging
from dataclasses import dataclass

from sympy import QQ

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ArtinA:
    """ℚ[t]/(t^order), maximal ideal (t)."""

    order: int

    def __post_init__(self):
        if self.order < 1:
            raise ValueError(f"Artin order must be at least 1, got {self.order}")

    @property
    def powers(self):
        return range(1, self.order)

    def extend(self):
        return ArtinA(self.order + 1)


class Series:
    """Σ_k t^k x_k over ArtinA with every x_k of the same carrier degree."""

    degree = None

    __slots__ = ("carrier", "artin", "_comps")

    def __init__(self, carrier, artin, comps=None):
        self.carrier = carrier
        self.artin = artin
        clean = {}
        for k, v in (comps or {}).items():
            k = int(k)
            if k < 1:
                raise ValueError(f"series over m_A has no t^{k} component")
            if k >= artin.order or carrier.is_zero(v):
                continue
            if self.degree is not None and not carrier.has_degree(v, self.degree):
                raise ValueError(f"t^{k} component is not of degree {self.degree} in {carrier.name}")
            clean[k] = v
        self._comps = clean

    @classmethod
    def _raw(cls, carrier, artin, comps):
        obj = cls.__new__(cls)
        obj.carrier = carrier
        obj.artin = artin
        obj._comps = {k: v for k, v in comps.items() if k < artin.order and not carrier.is_zero(v)}
        return obj

    def __getitem__(self, k):
        return self._comps.get(k, self.carrier.zero())

    def items(self):
        return sorted(self._comps.items())

    def is_zero(self):
        return not self._comps

    def lowest_order(self):
        return min(self._comps, default=None)

    def with_order(self, order):
        """The same components over ℚ[t]/(t^order); components past the new order are dropped."""
        return type(self)._raw(self.carrier, ArtinA(order), dict(self._comps))

    def _check(self, other):
        if other.carrier is not self.carrier:
            raise ValueError(f"carrier mismatch: {self.carrier.name} vs {other.carrier.name}")
        if other.artin != self.artin:
            raise ValueError(f"Artin order mismatch: {self.artin.order} vs {other.artin.order}")

    def __add__(self, other):
        self._check(other)
        c = self.carrier
        comps = dict(self._comps)
        for k, v in other._comps.items():
            comps[k] = c.add(comps[k], v) if k in comps else v
        return type(self)._raw(c, self.artin, comps)

    def __neg__(self):
        return type(self)._raw(self.carrier, self.artin, {k: self.carrier.scale(-1, v) for k, v in self._comps.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = QQ.convert(c)
        return type(self)._raw(self.carrier, self.artin, {k: self.carrier.scale(c, v) for k, v in self._comps.items()})

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        if other.carrier is not self.carrier or other.artin != self.artin:
            return False
        if set(self._comps) != set(other._comps):
            return False
        return all(self.carrier.equal(v, other._comps[k]) for k, v in self._comps.items())

    __hash__ = None

    def to_json(self):
        return {str(k): self.carrier.to_json(v) for k, v in self.items()}

    def __repr__(self):
        return f"{type(self).__name__}[{self.carrier.name}, N={self.artin.order}]({self.to_json()})"


class MCElem(Series):
    """Candidate Maurer-Cartan element x = Σ t^k x_k, every x_k of degree 1."""

    __slots__ = ()
    degree = 1


class GaugeElem(Series):
    """Gauge parameter a = Σ t^k a_k ∈ L⁰ ⊗ m_A."""

    __slots__ = ()
    degree = 0


class ResidualSeries(Series):
    """Degree-2 series such as dx + ½[x, x]."""

    __slots__ = ()
    degree = 2


def series_bracket(carrier, x, y, artin, cls=Series):
    """[x, y] truncated at t^order."""
    comps = {}
    for i, a in x.items():
        for j, b in y.items():
            k = i + j
            if k >= artin.order:
                continue
            v = carrier.bracket(a, b)
            comps[k] = carrier.add(comps[k], v) if k in comps else v
    return cls._raw(carrier, artin, comps)


def series_d(carrier, x, artin, cls=Series):
    return cls._raw(carrier, artin, {k: carrier.d(v) for k, v in x.items()})
