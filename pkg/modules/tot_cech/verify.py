import logging

from modules.tot_cech.dgla import ScsDGLA, load_fixture, quotient_diagram, sub_diagram
from modules.tot_cech.hfiber import check_integration_quasi_iso, hfiber_from_json
from modules.tot_cech.linalg import InvariantViolation, nullspace, span_rank
from modules.tot_cech.totalization import (
    CochainElem, TotElem, cech_cohomology, cech_diff, d_squared_check, degree_range, e_map, natural_inclusion,
    tot_bracket, tot_check, tot_cohomology, tot_diff, tot_slice, whitney_E, whitney_I,
)

logger = logging.getLogger(__name__)


def equalizer_basis(scs):
    """Basis of {x ∈ L_0 : ∂_0 x = ∂_1 x}."""
    L0 = scs.levels[0]
    if scs.top < 1:
        return [L0.basis(i) for i in range(L0.dim)]
    d0, d1 = scs.faces[1]
    rows = [[a - b for a, b in zip(r0, r1)] for r0, r1 in zip(d0, d1)]
    return [tuple(v) for v in nullspace(rows, L0.dim)]


def cech_basis(scs):
    out = []
    for n, L in enumerate(scs.levels):
        for b in range(L.dim):
            levels = [M.zero() for M in scs.levels]
            levels[n] = L.basis(b)
            out.append(CochainElem(scs, levels))
    return out


def check_whitney(scs, weight):
    """I is a chain map on every slice element, I∘E = id and I∘e is the natural inclusion."""
    for p in degree_range(scs):
        d_squared_check(scs, p, weight)
        for x in tot_slice(scs, p, weight).elements():
            if whitney_I(tot_diff(x)) != cech_diff(whitney_I(x)):
                raise InvariantViolation(f"whitney_I is not a chain map on Tot^{p}")
    for c in cech_basis(scs):
        ext = whitney_E(c)
        if not tot_check(ext):
            raise InvariantViolation("Whitney extension leaves Tot")
        if whitney_I(ext) != c:
            raise InvariantViolation("whitney_I ∘ whitney_E is not the identity")
    eq = equalizer_basis(scs)
    for x in eq:
        ex = e_map(scs, x)
        if not tot_check(ex):
            raise InvariantViolation("e_map leaves Tot")
        if whitney_I(ex) != natural_inclusion(scs, x):
            raise InvariantViolation("whitney_I ∘ e is not the natural inclusion")
        for y in eq:
            if e_map(scs, scs.levels[0].bracket(x, y)) != tot_bracket(ex, e_map(scs, y)):
                raise InvariantViolation("e_map does not preserve brackets")
    return len(eq)


def _dims_json(dims):
    return {str(p): d for p, d in sorted(dims.items())}


def _relabel(x, target, labels):
    """Move x into `target` along per-level basis relabelings; components without a label are dropped."""
    levels = [{labels[n][b]: phi for b, phi in lv.items() if b in labels[n]} for n, lv in enumerate(x.levels)]
    return TotElem(target, levels)


def _span_rank(images, dim):
    return span_rank(images, dim) if images else 0


def check_exactness(scs, keep, weight):
    """
    Per degree: 0 → Tot^p(sub) → Tot^p(diagram) → Tot^p(quotient) → 0 is exact.
    The inclusion must be injective, the projection surjective, their
    composite zero and the kernel of the projection no larger than the image
    of the inclusion.
    """
    sub = sub_diagram(scs, keep)
    quot = quotient_diagram(scs, keep)
    incl = [dict(enumerate(keep[n])) for n in range(len(scs.levels))]
    rest = [[i for i in range(L.dim) if i not in set(keep[n])] for n, L in enumerate(scs.levels)]
    proj = [{i: r for r, i in enumerate(idx)} for idx in rest]
    out = {}
    for p in degree_range(scs):
        part, whole, tail = (tot_slice(x, p, weight) for x in (sub, scs, quot))
        included = [_relabel(x, scs, incl) for x in part.elements()]
        projected = [_relabel(y, quot, proj) for y in whole.elements()]
        composite_zero = all(_relabel(y, quot, proj).is_zero() for y in included)
        compatible = all(tot_check(y) for y in included + projected)
        r_incl = _span_rank([whole.to_coords(y) for y in included], len(whole.coords))
        r_proj = _span_rank([tail.to_coords(y) for y in projected], len(tail.coords))
        out[p] = (composite_zero and compatible and r_incl == len(part) and r_proj == len(tail)
                  and len(whole) - r_proj == r_incl)
        if not out[p]:
            logger.warning(f"0 → Tot^{p}(sub) → Tot^{p} → Tot^{p}(quotient) → 0 is not exact for {scs.name}: "
                           f"ranks {r_incl}/{len(part)} and {r_proj}/{len(tail)}, dimension {len(whole)}")
    return out


def verify_scs(scs, weight=None, sub_basis=None):
    weight = len(scs.levels) if weight is None else weight
    scs.validate()
    equalizer_dim = check_whitney(scs, weight)
    tot = tot_cohomology(scs, weight)
    cech = cech_cohomology(scs)
    agree = tot == cech
    if not agree:
        logger.warning(f"Tot and Čech cohomology disagree on {scs.name} at weight {weight}: {tot} vs {cech}")
    report = {
        "fixture": scs.name,
        "kind": "semicosimplicial",
        "levels": [L.dim for L in scs.levels],
        "weight_bound": weight,
        "equalizer_dimension": equalizer_dim,
        "whitney_chain_map": True,
        "tot_cohomology": _dims_json(tot),
        "cech_cohomology": _dims_json(cech),
        "cohomology_agrees": agree,
    }
    if sub_basis is not None:
        report["exact_sequence"] = all(check_exactness(scs, sub_basis, weight).values())
    return report


def verify_hfiber(hf, weight=None):
    weight = len(hf.scs.levels) if weight is None else weight
    check_whitney(hf.scs, weight)
    tot = tot_cohomology(hf.scs, weight)
    report = {
        "fixture": hf.scs.name,
        "kind": "homotopy_fiber",
        "weight_bound": weight,
        "chi_rank": hf.image_rank,
        "injective": hf.injective,
        "hfiber_cohomology": _dims_json(tot),
    }
    if hf.injective:
        check_integration_quasi_iso(hf, weight)
        report["coker_cohomology"] = _dims_json(hf.coker_cohomology())
        report["integration_quasi_iso"] = True
    return report


def tot_verify(fixture, weight=None):
    """Run the Tot/Čech/Whitney checks on a fixture name, path or inline document."""
    doc = fixture if isinstance(fixture, dict) else load_fixture(fixture)
    logger.info(f"Verifying fixture {doc.get('name', '?')}")
    if "chi" in doc:
        report = verify_hfiber(hfiber_from_json(doc), weight)
    else:
        report = verify_scs(ScsDGLA.from_json(doc), weight, doc.get("sub_basis"))
    expected = doc.get("expected_cohomology")
    if expected is not None:
        key = "hfiber_cohomology" if "chi" in doc else "tot_cohomology"
        report["matches_expected"] = all(report[key].get(p, 0) == d for p, d in expected.items())
    return report
