"""
Homotopy fiber K(χ) of a DGLA morphism χ: L → M, realised as the totalization
of the two-level diagram L ⇉ M with faces χ and 0:

    K(χ) = {(l, m(t, dt)) : m(t1 = 0) = 0, m(t1 = 1) = χ(l)}.

For injective χ, integration over [0, 1] followed by reduction modulo im χ is
a quasi-isomorphism onto coker(χ)[−1].
"""

import logging

from sympy import QQ

from modules.tot_cech.dgla import FinDGLA, ScsDGLA, check_morphism, load_fixture, matrix_from_json
from modules.tot_cech.linalg import InvariantViolation, columns_to_rows, rank, rref
from modules.tot_cech.simplex import evaluate_at_vertex, simplex_integrate
from modules.tot_cech.totalization import tot_cohomology

logger = logging.getLogger(__name__)


def two_level_diagram(source, target, chi, name=None):
    check_morphism(source, target, chi, "χ")
    zero = [[QQ(0)] * source.dim for _ in range(target.dim)]
    return ScsDGLA([source, target], [[], [chi, zero]], name=name or f"K({source.name} → {target.name})")


class HFiber:

    def __init__(self, source, target, chi, name=None):
        self.source = source
        self.target = target
        self.chi = [[QQ.convert(c) for c in row] for row in chi]
        self.scs = two_level_diagram(source, target, self.chi, name)
        images = [[self.chi[i][j] for i in range(target.dim)] for j in range(source.dim)]
        self.image_rank = rank(images, target.dim)
        self.injective = self.image_rank == source.dim
        self._reduced, self._pivots = rref(images, target.dim)
        self.coker_coords = [i for i in range(target.dim) if i not in self._pivots]

    def endpoints(self, x):
        """(m at t1 = 0, m at t1 = 1) of the path component."""
        m = x.levels[1]
        e0 = [QQ(0)] * self.target.dim
        e1 = [QQ(0)] * self.target.dim
        for b, phi in m.items():
            e0[b] = evaluate_at_vertex(phi, 0)
            e1[b] = evaluate_at_vertex(phi, 1)
        return tuple(e0), tuple(e1)

    def is_member(self, x):
        e0, e1 = self.endpoints(x)
        l = x.levels[0]
        lvec = [QQ(0)] * self.source.dim
        for b, phi in l.items():
            lvec[b] = evaluate_at_vertex(phi, 0)
        chi_l = tuple(sum((self.chi[i][j] * lvec[j] for j in range(self.source.dim)), QQ(0))
                      for i in range(self.target.dim))
        return not any(e0) and e1 == chi_l

    def reduce(self, v):
        """Reduce v ∈ M modulo im χ; the result vanishes on the pivot coordinates."""
        v = list(v)
        for row, pc in zip(self._reduced, self._pivots):
            c = v[pc]
            if c:
                v = [a - c * r for a, r in zip(v, row)]
        return v

    def to_coker(self, v):
        r = self.reduce(v)
        return tuple(r[i] for i in self.coker_coords)

    def coker_degrees(self):
        return [self.target.degrees[i] for i in self.coker_coords]

    def coker_d(self, u):
        lift = [QQ(0)] * self.target.dim
        for c, i in zip(u, self.coker_coords):
            lift[i] = c
        return self.to_coker(self.target.d(tuple(lift)))

    def integrate01(self, x):
        """∫_0^1 of the path component, as an element of coker(χ)[−1]."""
        if not self.injective:
            raise ValueError("χ is not injective; coker(χ)[−1] does not model K(χ)")
        v = [QQ(0)] * self.target.dim
        for b, phi in x.levels[1].items():
            v[b] = simplex_integrate(phi)
        return self.to_coker(v)

    def shifted_coker_d(self, u):
        """Differential of coker(χ)[−1]: −d."""
        return tuple(-c for c in self.coker_d(u))

    def cohomology(self, weight=None):
        return tot_cohomology(self.scs, weight)

    def coker_cohomology(self):
        """dim H^p(coker χ) for every degree present."""
        degs = self.coker_degrees()
        if not degs:
            return {}
        out = {}
        for p in range(min(degs) - 1, max(degs) + 2):
            src = [k for k, d in enumerate(degs) if d == p]
            out[p] = len(src) - self._coker_rank(p) - self._coker_rank(p - 1)
            if out[p] < 0:
                raise InvariantViolation(f"negative cokernel cohomology in degree {p}")
        return out

    def _coker_rank(self, p):
        degs = self.coker_degrees()
        src = [k for k, d in enumerate(degs) if d == p]
        if not src:
            return 0
        images = []
        for k in src:
            u = [QQ(0)] * len(degs)
            u[k] = QQ(1)
            images.append(list(self.coker_d(tuple(u))))
        return rank(columns_to_rows(images, len(degs)), len(images))


def hfiber_build(source, target, chi, name=None):
    hf = HFiber(source, target, chi, name)
    logger.info(f"Built homotopy fiber {hf.scs.name}: χ of rank {hf.image_rank}, cokernel dimension {len(hf.coker_coords)}")
    return hf


def hfiber_cohomology(hf, weight=None):
    return hf.cohomology(weight)


def coker_cohomology(hf):
    return hf.coker_cohomology()


def check_integration_quasi_iso(hf, weight=None):
    """Compare dim H^p(K(χ)) with dim H^{p−1}(coker χ) in every degree."""
    tot = hf.cohomology(weight)
    coker = hf.coker_cohomology()
    mismatches = {p: (dim, coker.get(p - 1, 0)) for p, dim in tot.items() if dim != coker.get(p - 1, 0)}
    if mismatches:
        raise InvariantViolation(f"H(K(χ)) and H(coker χ)[−1] disagree: {mismatches}")
    return tot


def load_hfiber(name):
    """Load a {source, target, chi} fixture and build its homotopy fiber."""
    return hfiber_from_json(load_fixture(name))


def hfiber_from_json(doc):
    name = doc.get("name", "hfiber")
    source = FinDGLA.from_json(doc["source"], name=f"{name}.source")
    target = FinDGLA.from_json(doc["target"], name=f"{name}.target")
    source.validate()
    target.validate()
    chi = matrix_from_json(doc["chi"], target.dim, source.dim)
    return hfiber_build(source, target, chi, name=name)
