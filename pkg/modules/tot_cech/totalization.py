"""
Thom-Whitney totalization of a semicosimplicial DGLA and the Čech complex it
is compared against.

An element of Tot is stored per level: level n maps basis indices of L_n to
polynomial forms on Δ^n, so x_n = Σ_b x_n[b] ⊗ e_b.
"""

import logging
from itertools import combinations

from sympy import QQ

from modules.tot_cech.linalg import InvariantViolation, columns_to_rows, is_zero_matrix, mat_mul, nullspace, rank
from modules.tot_cech.simplex import (
    SimplexForm, d as form_d, face_pullback, monomial_basis, simplex_integrate, simplex_ring, wedge,
    whitney_form,
)

logger = logging.getLogger(__name__)


class TotElem:

    __slots__ = ("scs", "levels")

    def __init__(self, scs, levels=None):
        self.scs = scs
        if levels is None:
            levels = [{} for _ in scs.levels]
        if len(levels) != len(scs.levels):
            raise ValueError(f"expected {len(scs.levels)} levels, got {len(levels)}")
        self.levels = [{b: phi for b, phi in lv.items() if not phi.is_zero()} for lv in levels]

    @classmethod
    def zero(cls, scs):
        return cls(scs)

    @classmethod
    def from_level0(cls, scs, v):
        """The constant element determined by an equalizer vector v ∈ L_0."""
        levels = []
        for n in range(len(scs.levels)):
            w = scs.face_power0(n, v)
            levels.append({b: SimplexForm.constant(n, c) for b, c in enumerate(w) if c})
        return cls(scs, levels)

    def is_zero(self):
        return not any(self.levels)

    def __add__(self, other):
        levels = []
        for a, b in zip(self.levels, other.levels):
            lv = dict(a)
            for k, phi in b.items():
                lv[k] = lv[k] + phi if k in lv else phi
            levels.append(lv)
        return TotElem(self.scs, levels)

    def __neg__(self):
        return TotElem(self.scs, [{b: -phi for b, phi in lv.items()} for lv in self.levels])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        s = QQ.convert(scalar)
        return TotElem(self.scs, [{b: phi * s for b, phi in lv.items()} for lv in self.levels])

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, TotElem):
            return NotImplemented
        return self.levels == other.levels

    __hash__ = None

    def degrees(self):
        out = set()
        for n, lv in enumerate(self.levels):
            degs = self.scs.levels[n].degrees
            for b, phi in lv.items():
                out.update(q + degs[b] for q in phi.degrees())
        return sorted(out)

    def __repr__(self):
        return f"TotElem({self.levels})"


def _apply_face_to_level(scs, n, k, lv):
    """(id ⊗ ∂_k) on a level n−1 component, landing in Ω(Δ^{n−1}) ⊗ L_n."""
    m = scs.faces[n][k]
    out = {}
    for b, phi in lv.items():
        for c in range(len(m)):
            coef = m[c][b]
            if coef:
                term = phi * coef
                out[c] = out[c] + term if c in out else term
    return {c: phi for c, phi in out.items() if not phi.is_zero()}


def tot_check(x):
    """True when (∂_k^* ⊗ id) x_n = (id ⊗ ∂_k) x_{n−1} for every n ≥ 1 and face k."""
    scs = x.scs
    for n in range(1, len(scs.levels)):
        for k in range(n + 1):
            left = {b: face_pullback(phi, k) for b, phi in x.levels[n].items()}
            left = {b: phi for b, phi in left.items() if not phi.is_zero()}
            right = _apply_face_to_level(scs, n, k, x.levels[n - 1])
            if left != right:
                logger.debug(f"Compatibility fails at level {n}, face {k}")
                return False
    return True


def tot_diff(x):
    """d(φ ⊗ v) = dφ ⊗ v + (−1)^{|φ|} φ ⊗ dv."""
    scs = x.scs
    levels = []
    for n, lv in enumerate(x.levels):
        diff = scs.levels[n].differential
        out = {}
        for b, phi in lv.items():
            dphi = form_d(phi)
            if not dphi.is_zero():
                out[b] = out[b] + dphi if b in out else dphi
            for c in range(len(diff)):
                coef = diff[c][b]
                if not coef:
                    continue
                for q in phi.degrees():
                    term = phi.part(q) * (coef if q % 2 == 0 else -coef)
                    out[c] = out[c] + term if c in out else term
        levels.append(out)
    return TotElem(scs, levels)


def tot_bracket(x, y):
    """[φ ⊗ v, ψ ⊗ w] = (−1)^{|v||ψ|} (φ ∧ ψ) ⊗ [v, w]."""
    scs = x.scs
    levels = []
    for n, (lx, ly) in enumerate(zip(x.levels, y.levels)):
        L = scs.levels[n]
        out = {}
        for b, phi in lx.items():
            for c, psi in ly.items():
                vec = L.bracket_basis(b, c)
                if vec is None or not any(vec):
                    continue
                for q in psi.degrees():
                    prod = wedge(phi, psi.part(q))
                    if (L.degrees[b] * q) % 2:
                        prod = -prod
                    for e, coef in enumerate(vec):
                        if coef:
                            term = prod * coef
                            out[e] = out[e] + term if e in out else term
        levels.append(out)
    return TotElem(scs, levels)


class CochainElem:
    """Čech cochain: level n holds a coordinate vector in L_n."""

    __slots__ = ("scs", "levels")

    def __init__(self, scs, levels=None):
        self.scs = scs
        if levels is None:
            levels = [level.zero() for level in scs.levels]
        self.levels = [tuple(QQ.convert(c) for c in v) for v in levels]

    def __add__(self, other):
        return CochainElem(self.scs, [tuple(a + b for a, b in zip(u, v)) for u, v in zip(self.levels, other.levels)])

    def __sub__(self, other):
        return CochainElem(self.scs, [tuple(a - b for a, b in zip(u, v)) for u, v in zip(self.levels, other.levels)])

    def __eq__(self, other):
        if not isinstance(other, CochainElem):
            return NotImplemented
        return self.levels == other.levels

    __hash__ = None

    def is_zero(self):
        return not any(any(v) for v in self.levels)

    def __repr__(self):
        return f"CochainElem({[list(map(str, v)) for v in self.levels]})"


def cech_diff(c):
    """(δc)_n = (−1)^n d c_n + Σ_k (−1)^k ∂_k c_{n−1}."""
    scs = c.scs
    levels = []
    for n, L in enumerate(scs.levels):
        v = L.d(c.levels[n])
        if n % 2:
            v = L.scale(-1, v)
        if n:
            for k in range(n + 1):
                w = scs.face(n, k, c.levels[n - 1])
                v = L.add(v, w) if k % 2 == 0 else L.sub(v, w)
        levels.append(v)
    return CochainElem(scs, levels)


def whitney_I(x, check=True):
    """Levelwise integration over the simplices."""
    if check and not tot_check(x):
        raise ValueError("whitney_I needs an element of Tot")
    scs = x.scs
    levels = []
    for n, lv in enumerate(x.levels):
        v = [QQ(0)] * scs.levels[n].dim
        for b, phi in lv.items():
            v[b] += simplex_integrate(phi)
        levels.append(tuple(v))
    return CochainElem(scs, levels)


def _face_composite(scs, n, m, indices, v):
    """Apply the face maps L_n → L_m whose coface [n] → [m] has image `indices`."""
    missing = [j for j in range(m + 1) if j not in indices]
    level = n
    for j in missing:
        level += 1
        v = scs.face(level, j, v)
    return v


def whitney_E(c):
    """Whitney forms extension C(V) → Tot, a section of whitney_I: level m is Σ_{n ≤ m} Σ_{|I| = n+1} ω_I ⊗ ∂_I(c_n)."""
    scs = c.scs
    levels = []
    for m in range(len(scs.levels)):
        out = {}
        for n in range(m + 1):
            if not any(c.levels[n]):
                continue
            for I in combinations(range(m + 1), n + 1):
                omega = whitney_form(m, I)
                w = _face_composite(scs, n, m, I, c.levels[n])
                for b, coef in enumerate(w):
                    if coef:
                        term = omega * coef
                        out[b] = out[b] + term if b in out else term
        levels.append(out)
    return TotElem(scs, levels)


def e_map(scs, x):
    """e(x) = (1 ⊗ x, 1 ⊗ ∂_0 x, 1 ⊗ ∂_0² x, ...) for x in the equalizer of L_0 ⇉ L_1."""
    x = tuple(QQ.convert(c) for c in x)
    if not scs.is_equalizer(x):
        raise ValueError("e_map needs ∂_0 x = ∂_1 x")
    return TotElem.from_level0(scs, x)


def natural_inclusion(scs, x):
    """x ∈ L_0 viewed as a Čech cochain concentrated in level 0."""
    levels = [L.zero() for L in scs.levels]
    levels[0] = tuple(QQ.convert(c) for c in x)
    return CochainElem(scs, levels)


def _form_coords(phi):
    return {(I, m): c for I, f in phi.components.items() for m, c in f.iterterms()}


class TotSlice:
    """
    The finite-dimensional piece of Tot^p where every form has weight
    (polynomial degree + form degree) at most `weight`. Compatible elements
    form the nullspace of the face constraints on the coordinate space.
    """

    def __init__(self, scs, p, weight):
        self.scs = scs
        self.p = p
        self.weight = weight
        self.coords = []
        for n, L in enumerate(scs.levels):
            for b, deg in enumerate(L.degrees):
                q = p - deg
                if 0 <= q <= n:
                    for phi in monomial_basis(n, q, weight):
                        (key,) = _form_coords(phi)
                        self.coords.append((n, b, key))
        self.index = {c: i for i, c in enumerate(self.coords)}
        self.basis = self._compatible_basis()
        logger.debug(f"Tot^{p} slice of weight ≤ {weight}: {len(self.coords)} coordinates, dimension {len(self.basis)}")

    def __len__(self):
        return len(self.basis)

    def _constraint_columns(self):
        scs = self.scs
        keys = {}
        columns = []
        for n, b, (I, m) in self.coords:
            phi = SimplexForm._raw(n, {I: simplex_ring(n).from_dict({m: QQ(1)})})
            col = {}
            if n >= 1:
                for k in range(n + 1):
                    for key, c in _form_coords(face_pullback(phi, k)).items():
                        col[(n, k, b) + key] = col.get((n, k, b) + key, QQ(0)) + c
            if n + 1 < len(scs.levels):
                for k in range(n + 2):
                    mat = scs.faces[n + 1][k]
                    for c_idx in range(len(mat)):
                        coef = mat[c_idx][b]
                        if coef:
                            key = (n + 1, k, c_idx, I, m)
                            col[key] = col.get(key, QQ(0)) - coef
            for key in col:
                keys.setdefault(key, len(keys))
            columns.append(col)
        return keys, columns

    def _compatible_basis(self):
        keys, columns = self._constraint_columns()
        ncols = len(self.coords)
        rows = [[QQ(0)] * ncols for _ in range(len(keys))]
        for j, col in enumerate(columns):
            for key, c in col.items():
                rows[keys[key]][j] += c
        if not rows:
            return [[QQ(1) if i == j else QQ(0) for i in range(ncols)] for j in range(ncols)]
        return nullspace(rows, ncols)

    def to_elem(self, vec):
        levels = [{} for _ in self.scs.levels]
        for (n, b, (I, m)), c in zip(self.coords, vec):
            if not c:
                continue
            R = simplex_ring(n)
            phi = SimplexForm._raw(n, {I: R.from_dict({m: QQ.convert(c)})})
            lv = levels[n]
            lv[b] = lv[b] + phi if b in lv else phi
        return TotElem(self.scs, levels)

    def to_coords(self, x):
        vec = [QQ(0)] * len(self.coords)
        for n, lv in enumerate(x.levels):
            for b, phi in lv.items():
                for key, c in _form_coords(phi).items():
                    i = self.index.get((n, b, key))
                    if i is None:
                        raise ValueError(f"element leaves the weight ≤ {self.weight} slice of Tot^{self.p}")
                    vec[i] += c
        return vec

    def elements(self):
        return [self.to_elem(v) for v in self.basis]


def tot_slice(scs, p, weight=None):
    if weight is None:
        weight = len(scs.levels)
    return TotSlice(scs, p, weight)


def _differential_rank(source, target):
    images = [target.to_coords(tot_diff(x)) for x in source.elements()]
    if not images:
        return 0
    return rank(columns_to_rows(images, len(target.coords)), len(images))


def degree_range(scs):
    degs = [d for L in scs.levels for d in L.degrees]
    if not degs:
        return range(0)
    return range(min(degs), max(degs) + len(scs.levels))


def tot_cohomology(scs, weight=None, degrees=None):
    """dim H^p of the bounded totalization for each p in `degrees`."""
    degrees = list(degrees if degrees is not None else degree_range(scs))
    if not degrees:
        return {}
    lo, hi = degrees[0], degrees[-1]
    slices = {p: tot_slice(scs, p, weight) for p in range(lo - 1, hi + 2)}
    ranks = {p: _differential_rank(slices[p], slices[p + 1]) for p in range(lo - 1, hi + 1)}
    out = {}
    for p in degrees:
        dim = len(slices[p]) - ranks[p] - ranks[p - 1]
        if dim < 0:
            raise InvariantViolation(f"negative cohomology dimension in degree {p}")
        out[p] = dim
    logger.info(f"Tot cohomology of {scs.name}: {out}")
    return out


def _cech_coords(scs, p):
    return [(n, b) for n, L in enumerate(scs.levels) for b, deg in enumerate(L.degrees) if deg + n == p]


def _cech_basis_elem(scs, n, b):
    levels = [L.zero() for L in scs.levels]
    levels[n] = scs.levels[n].basis(b)
    return CochainElem(scs, levels)


def _cech_rank(scs, p):
    source = _cech_coords(scs, p)
    target = _cech_coords(scs, p + 1)
    if not source or not target:
        return 0
    tindex = {c: i for i, c in enumerate(target)}
    images = []
    for n, b in source:
        image = cech_diff(_cech_basis_elem(scs, n, b))
        vec = [QQ(0)] * len(target)
        for m, v in enumerate(image.levels):
            for c, coef in enumerate(v):
                if coef:
                    vec[tindex[(m, c)]] += coef
        images.append(vec)
    return rank(columns_to_rows(images, len(target)), len(images))


def cech_cohomology(scs, degrees=None):
    degrees = list(degrees if degrees is not None else degree_range(scs))
    out = {}
    for p in degrees:
        dim = len(_cech_coords(scs, p)) - _cech_rank(scs, p) - _cech_rank(scs, p - 1)
        if dim < 0:
            raise InvariantViolation(f"negative Čech cohomology dimension in degree {p}")
        out[p] = dim
    logger.info(f"Čech cohomology of {scs.name}: {out}")
    return out


def complex_cohomology(dims, differentials):
    """
    Cohomology dimensions of a finite complex: dims[p] is the dimension in
    degree p and differentials[p] the row matrix of d: C^p → C^{p+1}.
    """
    for p, mat in differentials.items():
        after = differentials.get(p + 1)
        if mat and after and not is_zero_matrix(mat_mul(after, mat, dims.get(p + 1, 0))):
            raise InvariantViolation(f"d² ≠ 0 from degree {p}")
    ranks = {p: rank(mat, dims.get(p, 0)) if mat else 0 for p, mat in differentials.items()}
    return {p: dims[p] - ranks.get(p, 0) - ranks.get(p - 1, 0) for p in sorted(dims)}


def d_squared_check(scs, p, weight=None):
    """d² = 0 on every basis element of the Tot^p slice; raises InvariantViolation otherwise."""
    for x in tot_slice(scs, p, weight).elements():
        if not tot_diff(tot_diff(x)).is_zero():
            raise InvariantViolation(f"d² ≠ 0 on Tot^{p} of {scs.name}")
    return True
