import logging

from modules.linf_voronov.brackets import linf_check, mc_sum
from modules.linf_voronov.splitgla import SplitGLA, derived_brackets, fiber_comparison, normal_derived_brackets
from modules.mc_deform.carriers import NormalCarrier
from modules.mc_deform.deform import mc_residual
from modules.polycalc.grammar import format_rational
from modules.tot_cech.dgla import load_fixture

logger = logging.getLogger(__name__)


def _key(indices):
    return ",".join(str(i) for i in indices)


def bracket_table(S, max_arity):
    """Nonzero {a_{i1}, ..., a_{in}} on sorted A-basis tuples, keyed "i1,...,in" by M index."""
    basis = S.a_basis()
    table = {}
    for q in derived_brackets(S, max_arity):
        for idx, value in q.tabulate(basis).items():
            key = _key(S.a_part[i] for i in idx)
            table[key] = {str(k): format_rational(c) for k, c in enumerate(value) if c}
    return table


def linf_verify(fixture, arity=4, weight=None):
    """Derived brackets, L∞[1] relations up to `arity` and the homotopy-fiber comparison for a split fixture."""
    doc = fixture if isinstance(fixture, dict) else load_fixture(fixture)
    S = SplitGLA.from_json(doc)
    S.validate()
    logger.info(f"Verifying derived brackets of {S.name} up to arity {arity}")
    table = bracket_table(S, arity)
    ok, failure = linf_check(derived_brackets(S, arity), arity, S.a_basis())
    report = {
        "name": S.name,
        "brackets": table,
        "linf_relations": ok,
        "failure": failure,
        **fiber_comparison(S, weight),
    }
    expected = doc.get("expected_brackets")
    if expected is not None:
        arities = {len(k.split(",")) for k in expected}
        seen = {k: v for k, v in table.items() if len(k.split(",")) in arities}
        report["matches_expected_brackets"] = seen == expected
    expected = doc.get("expected_cohomology")
    if expected is not None:
        report["matches_expected"] = all(report["hfiber_cohomology"].get(p, 0) == d for p, d in expected.items())
    return report


def normal_mc_agreement(x):
    """
    Σ_n {ξ,…,ξ}ⁿ/n! from the chart derived brackets against the Maurer-Cartan
    residual of the normal carrier, per power of t.
    """
    c = x.carrier
    if not isinstance(c, NormalCarrier):
        raise ValueError(f"expected normal data, got {c.name}")
    order = x.artin.order
    brackets = normal_derived_brackets(c.setup, max(order - 1, 1))
    total = mc_sum(brackets, dict(x.items()), order)
    residual = dict(mc_residual(x).items())
    return set(total) == set(residual) and all(total[k] == v for k, v in residual.items())
