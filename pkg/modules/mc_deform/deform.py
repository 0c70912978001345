"""
Maurer-Cartan, gauge and BCH calculus over ℚ[t]/(t^N), first-order deformation
spaces of coisotropic submanifolds and the order-by-order extension solver.
"""

import logging
from functools import lru_cache
from math import factorial

from sympy import QQ

from modules.mc_deform.artin import (
    ArtinA, GaugeElem, MCElem, ResidualSeries, Series, series_bracket, series_d,
)
from modules.mc_deform.carriers import (
    CoisotropicCarrier, FinDGLACarrier, NormalCarrier, PolyvectorCarrier, make_carrier,
)
from modules.polycalc.calculus import PVF, Form, holo_d
from modules.polycalc.coiso import NormalPVF, anchor, in_LZ, lichnerowicz, normal_dpi, normal_project
from modules.tot_cech.linalg import InvariantViolation, columns_to_rows, nullspace, rank, solve, span_rank

logger = logging.getLogger(__name__)


class NotClosedError(ValueError):
    pass


# Maurer-Cartan residual and gauge action

def _series_residual(x):
    c, A = x.carrier, x.artin
    dx = series_d(c, x, A, ResidualSeries)
    return dx + series_bracket(c, x, x, A, ResidualSeries).scale(QQ(1, 2))


def _normal_residual(x):
    """Σ_n {ξ,…,ξ}ⁿ/n! for the derived brackets of the chart splitting."""
    c, A = x.carrier, x.artin
    induced = induced_deformation(x)
    return ResidualSeries._raw(c, A, {k: c.project(v) for k, v in induced.items()})


def mc_residual(x):
    """dx + ½[x, x] truncated at t^N; zero exactly when x is Maurer-Cartan."""
    if isinstance(x.carrier, NormalCarrier):
        return _normal_residual(x)
    return _series_residual(x)


def is_mc(x):
    return mc_residual(x).is_zero()


def induced_deformation(x):
    """The bivector deformation e^{−σ(ξ)} ∗ 0 of π induced by normal data ξ."""
    c, A = x.carrier, x.artin
    if not isinstance(c, NormalCarrier):
        raise ValueError(f"induced deformations are defined for normal data, not {c.name}")
    a = GaugeElem._raw(c.pvf, A, {k: c.lift(v) * -1 for k, v in x.items()})
    return gauge(a, MCElem._raw(c.pvf, A, {}))


def _ad(a, y):
    return series_bracket(a.carrier, a, y, a.artin)


def gauge(a, x):
    """e^a ∗ x = x + Σ_{n≥0} ad_a^n / (n+1)! ([a, x] − da)."""
    a._check(x)
    c = a.carrier
    if not c.has_gauge:
        raise ValueError(f"{c.name} carries no gauge action")
    term = _ad(a, x) - series_d(c, a, a.artin)
    total = Series._raw(c, a.artin, dict(x._comps))
    n = 0
    while not term.is_zero():
        total = total + term.scale(QQ(1, factorial(n + 1)))
        term = _ad(a, term)
        n += 1
    return MCElem._raw(c, a.artin, dict(total._comps))


# Baker-Campbell-Hausdorff

def _word_product(u, v, max_len):
    out = {}
    for w1, c1 in u.items():
        for w2, c2 in v.items():
            if len(w1) + len(w2) > max_len:
                continue
            w = w1 + w2
            out[w] = out.get(w, QQ(0)) + c1 * c2
    return {w: c for w, c in out.items() if c}


@lru_cache(maxsize=None)
def bch_words(max_len):
    """
    Coefficients c_w/|w| of log(e^X e^Y) on words of length ≤ max_len, so that
    bch(X, Y) = Σ (c_w/|w|) [...[w1, w2], ..., wm] by Dynkin-Specht-Wever.
    """
    z = {}
    for r in range(max_len + 1):
        for s in range(max_len + 1 - r):
            if r + s:
                z[("X",) * r + ("Y",) * s] = QQ(1, factorial(r) * factorial(s))
    log = {}
    power = dict(z)
    for n in range(1, max_len + 1):
        sign = QQ(1 if n % 2 else -1, n)
        for w, c in power.items():
            log[w] = log.get(w, QQ(0)) + sign * c
        power = _word_product(power, z, max_len)
    return tuple(sorted(((w, c / len(w)) for w, c in log.items() if c), key=lambda wc: (len(wc[0]), wc[0])))


def bch(a, b):
    """a • b with exp(a • b) = exp(a) exp(b), exact modulo t^N."""
    a._check(b)
    c, A = a.carrier, a.artin
    letters = {"X": a, "Y": b}
    cache = {}

    def nested(w):
        if w not in cache:
            if len(w) == 1:
                cache[w] = letters[w[0]]
            else:
                prefix = nested(w[:-1])
                cache[w] = prefix if prefix.is_zero() else series_bracket(c, prefix, letters[w[-1]], A, GaugeElem)
        return cache[w]

    total = GaugeElem._raw(c, A, {})
    for w, coef in bch_words(A.order - 1):
        value = nested(w)
        if not value.is_zero():
            total = total + value.scale(coef)
    return total


def gauge_compose_check(a, b, x, bch_fn=bch):
    """gauge(a, gauge(b, x)) == gauge(a • b, x)."""
    return gauge(a, gauge(b, x)) == gauge(bch_fn(a, b), x)


# finite slices

class GradedSlice:
    """A finite basis of carrier elements together with the matrix of an operator on it."""

    def __init__(self, carrier, basis, op=None):
        self.carrier = carrier
        self.basis = list(basis)
        self.op = op or carrier.d
        self.images = [carrier.coords(self.op(b)) for b in self.basis]
        self.keys = sorted({k for im in self.images for k in im})
        self.matrix = columns_to_rows(
            [[im.get(k, QQ(0)) for k in self.keys] for im in self.images], len(self.keys))
        logger.debug(f"Slice of {len(self.basis)} elements in {carrier.name}, {len(self.keys)} image coordinates")

    def __len__(self):
        return len(self.basis)

    def combine(self, vec):
        c = self.carrier
        out = c.zero()
        for coef, b in zip(vec, self.basis):
            if coef:
                out = c.add(out, c.scale(coef, b))
        return out

    def rank(self):
        return rank(self.matrix, len(self.basis))

    def kernel(self):
        return [self.combine(v) for v in nullspace(self.matrix, len(self.basis))]

    def preimage(self, target):
        """A particular y in the span with op(y) = target, or None."""
        tc = self.carrier.coords(target)
        if not tc:
            return self.carrier.zero()
        if not self.basis or any(k not in self.keys for k in tc):
            return None
        vec = solve(self.matrix, len(self.basis), [tc.get(k, QQ(0)) for k in self.keys])
        return None if vec is None else self.combine(vec)


def _coefficient_window(carrier, d):
    if carrier.truncated:
        logger.warning(f"π has non-homogeneous coefficients; results truncated at coefficient degree {carrier.cap}")
        return list(range(carrier.cap + 1))
    return [d]


def slice_window(setup, d, cap=None):
    """Label of the coefficient degrees a slice at d covers, and whether it is a truncated window."""
    carrier = NormalCarrier(setup, cap)
    if carrier.truncated:
        return f"0..{carrier.cap}", True
    return str(d), False


def normal_slice(setup, degree, d, cap=None):
    carrier = NormalCarrier(setup, cap)
    return [b for e in _coefficient_window(carrier, d) for b in carrier.slice_basis(degree, e)]


def t1_basis(setup, d, cap=None):
    """Kernel of normal_dpi on normal vector fields of coefficient degree d."""
    carrier = NormalCarrier(setup, cap)
    basis = [b for e in _coefficient_window(carrier, d) for b in carrier.slice_basis(1, e)]
    kernel = GradedSlice(carrier, basis).kernel()
    logger.info(f"T1 slice d={d}: {len(kernel)} of {len(basis)} normal fields are closed")
    return kernel


def obstruction_space_basis(setup, d, cap=None):
    """Representatives of ker/im at the ⋀²𝒩 spot of the normal complex, coefficient degree d."""
    carrier = NormalCarrier(setup, cap)
    window = _coefficient_window(carrier, d)
    cocycles = GradedSlice(carrier, [b for e in window for b in carrier.slice_basis(2, e)]).kernel()
    if setup.pi.is_zero():
        sources = []
    elif carrier.truncated:
        sources = window
    else:
        sources = [e - setup.pi_degree + 1 for e in window if e - setup.pi_degree + 1 >= 0]
    boundaries = [carrier.d(b) for e in sources for b in carrier.slice_basis(1, e)]

    coords = [carrier.coords(v) for v in boundaries + cocycles]
    keys = sorted({k for cd in coords for k in cd})
    vecs = [[cd.get(k, QQ(0)) for k in keys] for cd in coords]
    current = vecs[:len(boundaries)]
    r = span_rank(current, len(keys))
    out = []
    for z, vec in zip(cocycles, vecs[len(boundaries):]):
        trial = current + [vec]
        r2 = span_rank(trial, len(keys))
        if r2 > r:
            out.append(z)
            current, r = trial, r2
    logger.info(f"H2 slice d={d}: {len(cocycles)} cocycles, {len(out)} classes")
    return out


def first_order_classes_dimension(setup, d, cap=None):
    """dim {η ∈ Θ_d : P(d_π η) = 0} − dim(ℒ¹_Z ∩ Θ_d), computed in the full chart."""
    setup.require_coisotropic()
    pvf = PolyvectorCarrier(setup, cap)
    cois = CoisotropicCarrier(setup, cap)
    window = _coefficient_window(pvf, d)
    fields = [b for e in window for b in pvf.slice_basis(0, e)]
    closed = GradedSlice(pvf, fields, op=lambda eta: normal_project(setup, lichnerowicz(setup, eta)))
    trivial = sum(len(cois.slice_basis(0, e)) for e in window)
    return len(closed) - closed.rank() - trivial


# order-by-order extension

def _check_lift(x):
    c = x.carrier
    for k, v in x.items():
        if not c.has_degree(v, 1):
            raise InvariantViolation(f"t^{k} component left the degree-1 part of {c.name}")
    if isinstance(c, NormalCarrier):
        for k, v in induced_deformation(x).items():
            if not in_LZ(c.setup, v):
                raise InvariantViolation(f"induced bivector deformation at t^{k} is not in ℒ²_Z")
    if not is_mc(x):
        raise InvariantViolation(f"lift over t^{x.artin.order} has nonzero Maurer-Cartan residual")


def mc_extend(x):
    """
    Extend an MC element over ℚ[t]/(t^k) to ℚ[t]/(t^{k+1}).

    Returns (report, lift) where lift is None when the t^k coefficient of the
    residual is not exact.
    """
    c = x.carrier
    k = x.artin.order
    if not is_mc(x):
        raise ValueError(f"input is not Maurer-Cartan modulo t^{k}")
    x = x.with_order(k + 1)
    obstruction = mc_residual(x)[k]
    report = {"order": k, "truncated": getattr(c, "truncated", False)}
    y = GradedSlice(c, c.solve_basis(obstruction)).preimage(c.scale(-1, obstruction))
    if y is None:
        if not c.is_zero(c.d(obstruction)):
            raise InvariantViolation(f"obstruction at t^{k} is not a cocycle")
        logger.info(f"Obstructed at t^{k} in {c.name}")
        report.update(status="obstructed", obstruction_class=c.to_json(obstruction), lift=None)
        return report, None
    comps = dict(x.items())
    if not c.is_zero(y):
        comps[k] = y
    lift = MCElem._raw(c, x.artin, comps)
    _check_lift(lift)
    logger.info(f"Extended to t^{k} in {c.name}")
    report.update(status="extended", obstruction_class=None, lift=lift.to_json())
    if isinstance(c, NormalCarrier):
        report["induced_deformation"] = induced_deformation(lift).to_json()
    return report, lift


def mc_extend_to(x, order):
    """Yield (report, element) per order until ℚ[t]/(t^order) is reached or an obstruction appears."""
    while x.artin.order < order:
        report, lift = mc_extend(x)
        yield report, lift
        if lift is None:
            return
        x = lift


def anchor_first_order(setup, omega, order=2, cap=None):
    """First-order coisotropic datum P(π^#ω) of a closed 1-form ω on Z."""
    p = setup.codim
    if not isinstance(omega, Form) or omega.nvars != setup.nvars:
        raise ValueError(f"ω must be a form on C^{setup.nvars}")
    if omega.degrees() not in ([], [1]):
        raise ValueError(f"ω must be a 1-form, found degrees {omega.degrees()}")
    for I, f in omega.components.items():
        if I[0] <= p or any(any(m[:p]) for m in f.itermonoms()):
            raise ValueError(f"ω must be a form on Z in z{p + 1}..z{setup.nvars}")
    if not holo_d(omega).is_zero():
        raise NotClosedError("ω is not closed")
    carrier = NormalCarrier(setup, cap)
    nu = normal_project(setup, anchor(setup, omega))
    if not normal_dpi(setup, nu).is_zero():
        raise InvariantViolation("anchor image of a closed form is not normal_dpi-closed")
    return MCElem(carrier, ArtinA(order), {1: nu})


# descent data on a semicosimplicial diagram

def _face_series(scs, carrier, n, k, s, cls):
    return cls._raw(carrier, s.artin, {j: scs.face(n, k, v) for j, v in s.items()})


def descent_check(scs, xs, gs, order):
    """
    Descent shapes for (x, g) with x ∈ MC(L₀ ⊗ m_A), g ∈ L₁⁰ ⊗ m_A:
    x is MC, e^g ∗ ∂₀x = ∂₁x, and ∂₁g = ∂₂g • ∂₀g on level 2.
    """
    A = ArtinA(order)
    carriers = [FinDGLACarrier(L) for L in scs.levels]
    x = MCElem(carriers[0], A, {int(k): scs.levels[0]._vector(v) for k, v in xs.items()})
    out = {"maurer_cartan": is_mc(x)}
    if scs.top >= 1:
        g = GaugeElem(carriers[1], A, {int(k): scs.levels[1]._vector(v) for k, v in gs.items()})
        x0 = _face_series(scs, carriers[1], 1, 0, x, MCElem)
        x1 = _face_series(scs, carriers[1], 1, 1, x, MCElem)
        out["gauge_matching"] = gauge(g, x0) == x1
        if scs.top >= 2:
            g0, g1, g2 = (_face_series(scs, carriers[2], 2, k, g, GaugeElem) for k in range(3))
            out["cocycle"] = g1 == bch(g2, g0)
    out["descent"] = all(out.values())
    return out


def first_order_element(setup, field=None, omega=None, kind="normal", cap=None):
    """x = t·x₁ over ℚ[t]/(t²) from a JSON field list, or from a closed 1-form on Z."""
    if omega is not None:
        return anchor_first_order(setup, Form.from_json(omega, setup.nvars), cap=cap)
    carrier = make_carrier(kind, setup=setup, cap=cap)
    if kind == "koszul":
        return MCElem(carrier, ArtinA(2), {1: Form.from_json(field or [], setup.nvars)})
    value = PVF.from_json(field or [], setup.nvars)
    if isinstance(carrier, NormalCarrier):
        value = NormalPVF(setup, dict(value.components))
    return MCElem(carrier, ArtinA(2), {1: value})
