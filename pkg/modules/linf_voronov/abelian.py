"""
Homotopy-abelianity criterion: a degree −1 bilinear h with

  (1) h(a, b) = −(−1)^{|a||b|} h(b, a)
  (2) [a, b] = d h(a, b) + h(da, b) + (−1)^{|a|} h(a, db)
  (3) ∮[h(a, b), c] + ∮h([a, b], c) = 0

and the equivalent Nijenhuis-Richardson identities [r, q1] = q2, [r, q2] = 0
with r(a, b) = (−1)^{|a|} h(a, b).
"""

import logging
from itertools import combinations_with_replacement, product

from modules.linf_voronov.brackets import DGLAView, SymMap, decalage, nr_bracket
from modules.polycalc.calculus import Form, holo_d
from modules.polycalc.coiso import h_op, koszul
from modules.tot_cech.simplex import SimplexForm, d as simplex_d, simplex_ring, wedge

logger = logging.getLogger(__name__)


def _sign(e):
    return -1 if e % 2 else 1


class HOpWitness:

    def __init__(self, view, h, name=""):
        self.view = view
        self.h = h
        self.name = name or f"h on {view.name}"

    @classmethod
    def from_table(cls, L, table, name=""):
        """h on a FinDGLA from {(i, j): vector} on basis pairs, extended bilinearly."""
        view = DGLAView.of_findgla(L)
        vectors = {k: L._vector(v) for k, v in table.items()}

        def h(u, v):
            out = L.zero()
            for (i, j), vec in vectors.items():
                c = u[i] * v[j]
                if c:
                    out = L.add(out, L.scale(c, vec))
            return out

        return cls(view, h, name)


def koszul_view(setup):
    """(Ω*[1], [·,·]_π, ∂): a k-form has degree k − 1."""
    n = setup.nvars

    def degree(a):
        if a.is_zero():
            return 0
        if a.degree is None:
            raise ValueError(f"form of mixed degrees {a.degrees()}")
        return a.degree - 1

    return DGLAView("koszul", lambda: Form.zero(n), degree, holo_d, lambda a, b: koszul(setup, a, b))


def koszul_witness(setup):
    """
    The homotopy on the Koszul DGLA of a Poisson chart. h_op is the
    contraction written in form degrees; with a k-form placed in degree k − 1
    the sign flips, and −h_op is the choice for which (1)-(3) hold. Passing
    h_op itself fails (2) on any pair with a nonzero bracket.
    """
    setup.require_poisson()
    return HOpWitness(koszul_view(setup), lambda a, b: h_op(setup, a, b) * -1, "koszul")


def _cyclic(view, f, a, b, c):
    da, db, dc = view.degree(a), view.degree(b), view.degree(c)
    return view.sum([
        f(a, b, c),
        view.scale(_sign(da * (db + dc)), f(b, c, a)),
        view.scale(_sign(dc * (da + db)), f(c, a, b)),
    ])


def _condition_failures(witness, spanning):
    view, h = witness.view, witness.h
    deg = view.degree
    for a, b in product(spanning, repeat=2):
        if not view.equal(h(a, b), view.scale(-_sign(deg(a) * deg(b)), h(b, a))):
            yield "antisymmetry"
            break
    for a, b in product(spanning, repeat=2):
        rhs = view.sum([
            view.d(h(a, b)),
            h(view.d(a), b),
            view.scale(_sign(deg(a)), h(a, view.d(b))),
        ])
        if not view.equal(view.bracket(a, b), rhs):
            yield "homotopy"
            break
    for a, b, c in product(spanning, repeat=3):
        first = _cyclic(view, lambda x, y, z: view.bracket(h(x, y), z), a, b, c)
        second = _cyclic(view, lambda x, y, z: h(view.bracket(x, y), z), a, b, c)
        if not view.is_zero(view.add(first, second)):
            yield "cyclic"
            break


def nr_identities(witness, samples):
    """[r, q1]_NR = q2 on pairs and [r, q2]_NR = 0 on triples from samples."""
    view, h = witness.view, witness.h
    q1, q2 = decalage(view)
    r = SymMap(q1.space, 2, 0, lambda a, b: view.scale(_sign(view.degree(a)), h(a, b)), "r")
    for a, b in combinations_with_replacement(samples, 2):
        if not view.equal(nr_bracket(r, q1, [a, b]), q2(a, b)):
            return False
    for args in combinations_with_replacement(samples, 3):
        if not view.is_zero(nr_bracket(r, q2, list(args))):
            return False
    return True


def subalgebra_h_stability(witness, members, contains):
    """h(M × M) ⊆ M checked on a spanning set of M."""
    for a, b in product(members, repeat=2):
        if not contains(witness.h(a, b)):
            return False
    return True


def check_abelianity(witness, spanning, subalgebra=None, nr_samples=None):
    """
    Verify conditions (1)-(3) on the spanning set, the NR identities on
    nr_samples (default: the spanning set) and, given (members, contains),
    stability of a subalgebra under h.
    """
    failures = list(_condition_failures(witness, spanning))
    report = {
        "antisymmetry": "antisymmetry" not in failures,
        "homotopy": "homotopy" not in failures,
        "cyclic": "cyclic" not in failures,
        "nr_identities": nr_identities(witness, spanning if nr_samples is None else nr_samples),
        "subalgebra_stable": None,
    }
    if subalgebra is not None:
        members, contains = subalgebra
        report["subalgebra_stable"] = subalgebra_h_stability(witness, members, contains)
    report["abelian"] = not failures and report["nr_identities"]
    report["failed"] = failures[0] if failures else (None if report["nr_identities"] else "nr_identities")
    logger.info(f"Abelianity check for {witness.name}: {report}")
    return report


def scs_h_check(faces, hs, spanning):
    """
    Face compatibility h_n(∂_k a, ∂_k b) = ∂_k h_{n−1}(a, b).
    faces[n][k] maps level n−1 to level n, hs[n] is h on level n and
    spanning[n] spans level n. Returns (ok, failure or None).
    """
    for n in range(1, len(hs)):
        for k, face in enumerate(faces[n]):
            for a, b in product(spanning[n - 1], repeat=2):
                if face(hs[n - 1](a, b)) != hs[n](face(a), face(b)):
                    failure = f"h does not commute with ∂_{k} into level {n}"
                    logger.info(failure)
                    return False, failure
    return True, None


def findgla_faces(scs):
    """Face maps of an ScsDGLA as callables indexed like scs.faces."""
    return [[(lambda v, n=n, k=k: scs.face(n, k, v)) for k in range(len(fs))] for n, fs in enumerate(scs.faces)]


# scalar extension to Ω₁ ⊗ L

def tensor_view(view):
    """Ω(Δ¹) ⊗ L with elements {(dt indices, t exponents): a}."""
    R = simplex_ring(1)

    def clean(x):
        return {k: a for k, a in x.items() if not view.is_zero(a)}

    def add(x, y):
        out = dict(x)
        for k, a in y.items():
            out[k] = view.add(out[k], a) if k in out else a
        return clean(out)

    def scale(c, x):
        return clean({k: view.scale(c, a) for k, a in x.items()})

    def equal(x, y):
        x, y = clean(x), clean(y)
        return set(x) == set(y) and all(view.equal(a, y[k]) for k, a in x.items())

    def degree(x):
        degs = {len(I) + view.degree(a) for (I, _), a in clean(x).items()}
        if len(degs) > 1:
            raise ValueError("tensor is not homogeneous")
        return degs.pop() if degs else 0

    def form(key):
        I, m = key
        return SimplexForm._raw(1, {I: R.from_dict({m: 1})})

    def tensor(u, a):
        return clean({(I, m): view.scale(c, a) for I, f in u.components.items() for m, c in f.iterterms()})

    def d(x):
        out = {}
        for key, a in x.items():
            u = form(key)
            out = add(out, tensor(simplex_d(u), a))
            out = add(out, tensor(u * _sign(len(key[0])), view.d(a)))
        return out

    def bracket(x, y):
        out = {}
        for (kx, a), (ky, b) in product(x.items(), y.items()):
            sign = _sign(view.degree(a) * len(ky[0]))
            out = add(out, tensor(wedge(form(kx), form(ky)) * sign, view.bracket(a, b)))
        return out

    tv = DGLAView(f"Ω₁⊗{view.name}", dict, degree, d, bracket, add=add, scale=scale, equal=equal)
    tv.tensor = tensor
    tv.form = form
    return tv


def scalar_extension_check(witness, samples):
    """
    Extend h to Ω(Δ¹) ⊗ L by h(u⊗a, v⊗b) = (−1)^{|u|+|v|+|v||a|} uv ⊗ h(a, b)
    and check conditions (1)-(3) on the tensors u⊗a for (u, a) in samples.
    """
    view, h = witness.view, witness.h
    tv = tensor_view(view)

    def th(x, y):
        out = {}
        for (kx, a), (ky, b) in product(x.items(), y.items()):
            du, dv = len(kx[0]), len(ky[0])
            sign = _sign(du + dv + dv * view.degree(a))
            out = tv.add(out, tv.tensor(wedge(tv.form(kx), tv.form(ky)) * sign, h(a, b)))
        return out

    extended = HOpWitness(tv, th, f"{witness.name} ⊗ Ω₁")
    spanning = [tv.tensor(u, a) for u, a in samples]
    failures = list(_condition_failures(extended, spanning))
    logger.info(f"Scalar extension of {witness.name}: failures {failures}")
    return not failures, (failures[0] if failures else None)
