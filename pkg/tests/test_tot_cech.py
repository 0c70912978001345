import pytest
from sympy import QQ

from modules.tot_cech.dgla import FinDGLA, ScsDGLA, load_fixture, load_scs, quotient_diagram, sub_diagram
from modules.tot_cech.linalg import InvariantViolation, nullspace, rank, solve
from modules.tot_cech.simplex import (
    SimplexForm, barycentric, d, evaluate_at_vertex, face_pullback, simplex_integrate, simplex_ring, wedge,
    whitney_form,
)
from modules.tot_cech.totalization import complex_cohomology, d_squared_check, degree_range
from modules.tot_cech.verify import check_exactness, equalizer_basis, tot_verify


def _t(n, i):
    return simplex_ring(n).gens[i - 1]


@pytest.fixture
def forms_on_triangle():
    t1, t2 = _t(2, 1), _t(2, 2)
    return [
        SimplexForm(2, {(): t1 * t2}),
        SimplexForm(2, {(): t1 ** 2 + 3}),
        SimplexForm(2, {(1,): t2}),
        SimplexForm(2, {(2,): t1 * t2}),
        SimplexForm(2, {(1, 2): t1}),
    ]


def test_linear_algebra_edge_cases():
    assert nullspace([], 2) == [[QQ(1), QQ(0)], [QQ(0), QQ(1)]]
    assert rank([[1, 2], [2, 4]], 2) == 1
    assert solve([[1, 1]], 2, [3]) == [QQ(3), QQ(0)]
    assert solve([[0, 0]], 2, [1]) is None
    assert solve([], 0, []) == []
    assert solve([[QQ(0)]], 0, [1]) is None


def test_d_squares_to_zero(forms_on_triangle):
    for phi in forms_on_triangle:
        assert d(d(phi)).is_zero()


def test_leibniz_rule(forms_on_triangle):
    for phi in forms_on_triangle:
        for psi in forms_on_triangle:
            sign = -1 if phi.degrees()[0] % 2 else 1
            assert d(wedge(phi, psi)) == wedge(d(phi), psi) + wedge(phi, d(psi)) * sign


def test_face_pullback_commutes_with_d(forms_on_triangle):
    for phi in forms_on_triangle:
        for k in range(3):
            assert face_pullback(d(phi), k) == d(face_pullback(phi, k))


def test_faces_of_the_interval():
    t1 = barycentric(1, 1)
    assert face_pullback(t1, 0) == SimplexForm.constant(0, 1)
    assert face_pullback(t1, 1).is_zero()
    with pytest.raises(ValueError):
        face_pullback(t1, 2)


def test_integration():
    assert simplex_integrate(SimplexForm(1, {(1,): 1})) == 1
    assert simplex_integrate(SimplexForm(2, {(1, 2): 1})) == QQ(1, 2)
    assert simplex_integrate(SimplexForm(2, {(1, 2): _t(2, 1)})) == QQ(1, 6)
    assert simplex_integrate(SimplexForm(1, {(): 1})) == 0


def test_stokes_on_the_interval():
    phi = SimplexForm(1, {(): _t(1, 1) ** 3 - 2 * _t(1, 1)})
    assert simplex_integrate(d(phi)) == evaluate_at_vertex(phi, 1) - evaluate_at_vertex(phi, 0)


def test_whitney_forms():
    assert whitney_form(1, (0, 1)) == SimplexForm(1, {(1,): 1})
    assert whitney_form(2, (0,)) == barycentric(2, 0)
    assert simplex_integrate(whitney_form(2, (0, 1, 2))) == 1


def test_scs_validation_rejects_broken_faces():
    L = FinDGLA([0])
    with pytest.raises(ValueError):
        ScsDGLA([L, L], [[], [[[1]]]])


def test_equalizer_of_disk_cover():
    scs = load_scs("disk_three_open")
    assert equalizer_basis(scs) == [(QQ(1), QQ(1), QQ(1))]


@pytest.mark.parametrize("name", ["circle_two_open", "circle_three_arcs", "disk_three_open"])
def test_cover_fixtures(name):
    report = tot_verify(name)
    assert report["kind"] == "semicosimplicial"
    assert report["whitney_chain_map"] is True
    assert report["cohomology_agrees"] is True
    assert report["matches_expected"] is True


def test_homotopy_fiber_fixture():
    report = tot_verify("inclusion_pair")
    assert report["kind"] == "homotopy_fiber"
    assert report["matches_expected"] is True


def test_inline_fixture_document():
    doc = load_fixture("disk_three_open")
    doc["name"] = "inline_disk"
    report = tot_verify(doc)
    assert report["fixture"] == "inline_disk"
    assert report["equalizer_dimension"] == 1


def test_missing_fixture():
    with pytest.raises(FileNotFoundError):
        tot_verify("no_such_fixture")


def test_short_exact_sequence_of_diagrams():
    doc = load_fixture("circle_two_open")
    scs = ScsDGLA.from_json(doc)
    keep = doc["sub_basis"]
    assert [L.dim for L in sub_diagram(scs, keep).levels] == [4, 4]
    assert [L.dim for L in quotient_diagram(scs, keep).levels] == [2, 2]
    report = check_exactness(scs, keep, 2)
    assert set(report) == set(degree_range(scs))
    assert all(report.values())
    assert tot_verify("circle_two_open")["exact_sequence"] is True


def test_quotient_needs_a_bracket_ideal():
    scs = load_scs("circle_two_open")
    keep = [[0, 2, 3, 5], [0, 2, 3, 5]]
    assert [L.dim for L in sub_diagram(scs, keep).levels] == [4, 4]
    with pytest.raises(ValueError, match="not an ideal"):
        quotient_diagram(scs, keep)
    with pytest.raises(ValueError):
        check_exactness(scs, keep, 2)


def test_sub_diagram_must_be_closed_under_d():
    scs = load_scs("circle_two_open")
    with pytest.raises(ValueError):
        sub_diagram(scs, [[0], [0]])


def test_complex_cohomology():
    assert complex_cohomology({0: 2, 1: 2}, {0: [[0, 0], [0, 0]]}) == {0: 2, 1: 2}
    assert complex_cohomology({0: 1, 1: 1}, {0: [[1]]}) == {0: 0, 1: 0}
    with pytest.raises(InvariantViolation):
        complex_cohomology({0: 1, 1: 1, 2: 1}, {0: [[1]], 1: [[1]]})


def test_d_squared_on_tot_slices():
    scs = load_scs("circle_three_arcs")
    for p in range(3):
        assert d_squared_check(scs, p, 2)


@pytest.mark.parametrize("name", ["../manifests/so3", "/etc/passwd", "nested/sl2_eps", ".hidden", ["sl2_eps"], ""])
def test_fixture_names_stay_inside_the_fixture_dir(name):
    with pytest.raises(ValueError):
        load_fixture(name)
