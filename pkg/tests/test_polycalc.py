import random

import pytest

from conftest import bivector, random_form, random_ideal_field, random_normal, random_pvf, setup_of, z
from modules.polycalc.calculus import (
    PVF, Form, holo_d, interior, lie_deriv, permutation_sign, schouten, wedge_form, wedge_pvf,
)
from modules.polycalc.coiso import (
    CoisoSetup, NormalPVF, NotCoisotropicError, NotPoissonError, anchor, coisotropy_characterizations,
    h_op, hamiltonian, ideal_generators, in_IZ, in_LZ, interior_commutator_power, is_coisotropic, is_poisson,
    koszul, lichnerowicz, normal_dpi, normal_lift, normal_project, poisson_bracket, poisson_bracket_via_schouten,
    restrict_form,
)


def _sign(e):
    return -1 if e % 2 else 1


def test_permutation_sign():
    assert permutation_sign((2, 1, 3)) == (-1, (1, 2, 3))
    assert permutation_sign((3, 1, 2)) == (1, (1, 2, 3))
    assert permutation_sign((1, 1)) == (0, None)


def test_construction_normalizes_order():
    xi = PVF(3, {(2, 1): 1})
    assert xi.coeff(1, 2) == -1
    assert xi.coeff(2, 1) == 1
    assert PVF(3, {(1, 1): 1}).is_zero()
    with pytest.raises(ValueError):
        PVF(2, {(3,): 1})


def test_wedge_rejects_mixed_kinds():
    with pytest.raises(TypeError):
        wedge_pvf(PVF.basis(2, 1), Form.basis(2, 1))


def test_interior_sign_convention():
    assert interior(PVF.basis(2, 1, 2), Form.basis(2, 1, 2)).coeff() == -1
    assert interior(PVF.basis(2, 1), Form.basis(2, 1, 2)) == Form.basis(2, 2)


def test_vector_field_on_function():
    n = 2
    assert schouten(PVF.basis(n, 1), PVF.function(n, z(n, 1))).coeff() == 1
    assert schouten(PVF.basis(n, 2), PVF.function(n, z(n, 1))).is_zero()


def test_schouten_graded_antisymmetry(polyvector_pool):
    for x in polyvector_pool:
        for y in polyvector_pool:
            a, b = x.degree - 1, y.degree - 1
            assert schouten(x, y) == schouten(y, x) * (-_sign(a * b))


def test_schouten_jacobi(polyvector_pool):
    for x in polyvector_pool:
        for y in polyvector_pool:
            for w in polyvector_pool:
                a, b = x.degree - 1, y.degree - 1
                lhs = schouten(x, schouten(y, w))
                rhs = schouten(schouten(x, y), w) + schouten(y, schouten(x, w)) * _sign(a * b)
                assert lhs == rhs


def test_schouten_odd_leibniz(polyvector_pool):
    for x in polyvector_pool:
        for y in polyvector_pool:
            for w in polyvector_pool:
                lhs = schouten(x, wedge_pvf(y, w))
                rhs = (wedge_pvf(schouten(x, y), w)
                       + wedge_pvf(y, schouten(x, w)) * _sign((x.degree - 1) * y.degree))
                assert lhs == rhs


def test_holo_d_squares_to_zero(small_forms):
    for a in small_forms:
        assert holo_d(holo_d(a)).is_zero()


def test_lie_derivative_of_function_is_hamiltonian_action(so3):
    n = 3
    f = Form.function(n, z(n, 1) * z(n, 2))
    X = PVF.basis(n, 1, coeff=z(n, 3))
    assert lie_deriv(X, f) == Form.function(n, z(n, 2) * z(n, 3))


def test_poisson_detection(so3, lagrangian):
    assert is_poisson(so3.pi)
    assert is_poisson(lagrangian.pi)
    bad = setup_of(3, 0, {(1, 2): "1", (2, 3): "z2"})
    assert not is_poisson(bad.pi)
    with pytest.raises(NotPoissonError):
        bad.require_poisson()


def test_lichnerowicz_squares_to_zero_only_for_poisson(so3, polyvector_pool):
    for xi in polyvector_pool:
        assert lichnerowicz(so3, lichnerowicz(so3, xi)).is_zero()
    bad = setup_of(3, 0, {(1, 2): "1", (2, 3): "z2"})
    images = [lichnerowicz(bad, lichnerowicz(bad, PVF.function(3, z(3, i)))) for i in (1, 2, 3)]
    assert any(not im.is_zero() for im in images)


def test_so3_bracket(so3):
    n = 3
    z1, z2, z3 = (z(n, i) for i in (1, 2, 3))
    assert poisson_bracket(so3, z1, z2) == -z3
    for f, g in [(z1, z2), (z2 * z3, z1), (z1 ** 2, z3 * z2)]:
        assert poisson_bracket(so3, f, g) == poisson_bracket_via_schouten(so3, f, g)
        assert poisson_bracket(so3, f, g) == -poisson_bracket(so3, g, f)


def test_anchor_on_symplectic_chart(lagrangian):
    n = 4
    assert anchor(lagrangian, Form.basis(n, 3)) == PVF.basis(n, 1)
    assert anchor(lagrangian, Form.basis(n, 4)) == PVF.basis(n, 2)
    assert anchor(lagrangian, Form.basis(n, 1)) == PVF.basis(n, 3, coeff=-1)


def test_anchor_is_a_dgla_morphism(so3, small_forms):
    for a in small_forms:
        assert anchor(so3, holo_d(a)) == lichnerowicz(so3, anchor(so3, a))
        for b in small_forms:
            assert anchor(so3, koszul(so3, a, b)) == schouten(anchor(so3, a), anchor(so3, b))


def test_koszul_on_exact_one_forms(so3):
    n = 3
    df = holo_d(Form.function(n, z(n, 1)))
    dg = holo_d(Form.function(n, z(n, 2)))
    expected = holo_d(Form.function(n, poisson_bracket(so3, z(n, 1), z(n, 2))))
    assert koszul(so3, df, dg) == expected


def test_koszul_derivation_property(so3, small_forms):
    for a in small_forms:
        for b in small_forms:
            lhs = holo_d(koszul(so3, a, b))
            rhs = koszul(so3, holo_d(a), b) + koszul(so3, a, holo_d(b)) * _sign(a.degree - 1)
            assert lhs == rhs


def test_h_op_on_functions_vanishes(so3):
    n = 3
    f = Form.function(n, z(n, 1))
    assert h_op(so3, f, Form.basis(n, 2)).is_zero()
    assert h_op(so3, Form.basis(n, 1), f).is_zero()


@pytest.mark.parametrize("k", [1, 2])
def test_interior_commutator_power_matches_anchor(so3, small_forms, k):
    n = 3
    alphas = [Form.basis(n, 1), Form.basis(n, 2, coeff=z(n, 1))] if k == 1 else [Form.basis(n, 1, 2),
                                                                                  Form.basis(n, 2, 3)]
    betas = small_forms + [Form.basis(n, 1, 2), Form.basis(n, 1, 2, 3)]
    for alpha in alphas:
        op = interior_commutator_power(so3, alpha, k)
        X = anchor(so3, alpha)
        for beta in betas:
            assert op(beta) == interior(X, beta)


def test_coisotropy(lagrangian, symplectic_slice, hypersurface, so3, obstructed_point):
    assert is_coisotropic(lagrangian)
    assert not is_coisotropic(symplectic_slice)
    assert is_coisotropic(hypersurface)
    assert is_coisotropic(so3)
    assert is_coisotropic(obstructed_point)
    with pytest.raises(NotCoisotropicError):
        symplectic_slice.require_coisotropic()


def test_characterizations_agree(lagrangian, symplectic_slice, hypersurface, so3, obstructed_point):
    line = setup_of(3, 2, {(1, 2): "z3"})
    cases = [(lagrangian, True), (hypersurface, True), (so3, True), (obstructed_point, True),
             (symplectic_slice, False), (line, False)]
    for setup, expected in cases:
        values = coisotropy_characterizations(setup)
        assert set(values.values()) == {expected}, values


def test_h_op_leaves_the_ideal_off_coisotropic(symplectic_slice):
    n = 4
    value = interior(symplectic_slice.pi, Form.basis(n, 1, 3))
    assert value.is_zero()
    value = interior(symplectic_slice.pi, Form.basis(n, 1, 2))
    assert value.coeff() == -1
    assert not in_IZ(symplectic_slice, value)


def test_ideal_membership(lagrangian):
    n = 4
    assert [g.degree for g in ideal_generators(lagrangian)] == [0, 0, 1, 1]
    assert in_IZ(lagrangian, Form.basis(n, 1, 3))
    assert in_IZ(lagrangian, Form.basis(n, 3, coeff=z(n, 2)))
    assert not in_IZ(lagrangian, Form.basis(n, 3, 4))
    assert in_LZ(lagrangian, PVF.basis(n, 3, 4))
    assert not in_LZ(lagrangian, PVF.basis(n, 1, coeff=z(n, 3)))


def test_normal_fields(lagrangian):
    n = 4
    nu = NormalPVF(lagrangian, {(1,): z(n, 4), (2,): z(n, 3)})
    assert normal_dpi(lagrangian, nu).is_zero()
    with pytest.raises(ValueError):
        NormalPVF(lagrangian, {(3,): 1})
    with pytest.raises(ValueError):
        NormalPVF(lagrangian, {(1,): z(n, 1)})
    assert normal_project(lagrangian, PVF.basis(n, 1, coeff=z(n, 1) + z(n, 3))) == NormalPVF(
        lagrangian, {(1,): z(n, 3)})


def test_normal_differential_on_lagrangian(lagrangian):
    n = 4
    nu = NormalPVF(lagrangian, {(1,): z(n, 4)})
    assert normal_dpi(lagrangian, nu) == NormalPVF(lagrangian, {(1, 2): -1})


def test_setup_validation():
    with pytest.raises(ValueError):
        CoisoSetup(2, 3, PVF.zero(2))
    with pytest.raises(ValueError):
        CoisoSetup(2, 1, PVF.basis(2, 1))
    doc = {"n": 2, "codim": 1, "poisson": [{"indices": [2, 1], "coeff": "z1"}]}
    setup = CoisoSetup.from_json(doc)
    assert setup.pi.coeff(1, 2) == -z(2, 1)
    assert CoisoSetup.from_json(setup.to_json()).pi == setup.pi


def test_hamiltonian_field_acts_by_bracket(so3):
    n = 3
    z1, z2, z3 = (z(n, i) for i in (1, 2, 3))
    X = hamiltonian(so3, z1)
    assert X == PVF(n, {(2,): -z3, (3,): -z2})
    for g in (z2, z3, z2 * z3):
        assert schouten(X, PVF.function(n, g)) == PVF.function(n, poisson_bracket(so3, z1, g))


def test_restriction_to_the_submanifold(lagrangian):
    n = 4
    alpha = Form(n, {(3,): z(n, 3), (4,): z(n, 1), (1,): 1, (3, 4): z(n, 4) + z(n, 2)})
    assert restrict_form(lagrangian, alpha) == Form(n, {(3,): z(n, 3), (3, 4): z(n, 4)})


def test_interior_of_pi_leaves_the_ideal_on_lagrangian(lagrangian):
    n = 4
    alpha = Form.basis(n, 1, 3)
    assert in_IZ(lagrangian, alpha)
    value = interior(lagrangian.pi, alpha)
    assert value.coeff() == -1
    assert not in_IZ(lagrangian, value)


def test_normal_lift_is_a_section(lagrangian):
    n = 4
    nu = NormalPVF(lagrangian, {(1, 2): z(n, 3)})
    assert normal_lift(nu) == PVF.basis(n, 1, 2, coeff=z(n, 3))
    assert normal_project(lagrangian, normal_lift(nu)) == nu


def _random_triples(seed, count, n=4):
    rng = random.Random(seed)
    return [tuple(random_pvf(rng, n, rng.randint(0, 3)) for _ in range(3)) for _ in range(count)]


def test_gerstenhaber_identities_on_random_triples():
    for x, y, w in _random_triples(2024, 200):
        a, b = x.degree - 1, y.degree - 1
        assert schouten(x, y) == schouten(y, x) * (-_sign(a * b))
        lhs = schouten(x, schouten(y, w))
        rhs = schouten(schouten(x, y), w) + schouten(y, schouten(x, w)) * _sign(a * b)
        assert lhs == rhs
        lhs = schouten(x, wedge_pvf(y, w))
        rhs = wedge_pvf(schouten(x, y), w) + wedge_pvf(y, schouten(x, w)) * _sign(a * y.degree)
        assert lhs == rhs


def test_lichnerowicz_square_detects_poisson():
    rng = random.Random(7)
    n = 3
    setups = [setup_of(3, 0, {(1, 2): "1", (2, 3): "z2"})]
    for k in range(40):
        setups.append(CoisoSetup(n, 0, random_pvf(rng, n, 2, max_coeff=k % 2, terms=3)))
    outcomes = set()
    for setup in setups:
        squares = [lichnerowicz(setup, lichnerowicz(setup, PVF.function(n, z(n, i)))) for i in (1, 2, 3)]
        poisson = is_poisson(setup.pi)
        assert poisson == all(s.is_zero() for s in squares)
        outcomes.add(poisson)
    assert outcomes == {True, False}


@pytest.mark.parametrize("name", ["lagrangian", "so3"])
def test_anchor_is_a_dgla_morphism_on_random_forms(request, name):
    setup = request.getfixturevalue(name)
    n = setup.nvars
    rng = random.Random(31)
    for _ in range(100):
        a = random_form(rng, n, rng.randint(0, 2))
        b = random_form(rng, n, rng.randint(0, 2))
        assert anchor(setup, holo_d(a)) == lichnerowicz(setup, anchor(setup, a))
        assert anchor(setup, koszul(setup, a, b)) == schouten(anchor(setup, a), anchor(setup, b))


def test_koszul_bracket_is_graded_lie(so3):
    rng = random.Random(5)
    n = 3
    for _ in range(60):
        x, y, w = (random_form(rng, n, rng.randint(0, 2), max_coeff=1) for _ in range(3))
        a, b = x.degree - 1, y.degree - 1
        assert koszul(so3, x, y) == koszul(so3, y, x) * (-_sign(a * b))
        lhs = koszul(so3, x, koszul(so3, y, w))
        rhs = koszul(so3, koszul(so3, x, y), w) + koszul(so3, y, koszul(so3, x, w)) * _sign(a * b)
        assert lhs == rhs


def test_wedge_of_coordinate_fields():
    n = 3
    lhs = wedge_pvf(PVF.basis(n, 1, coeff=z(n, 1)), PVF.basis(n, 2, 3, coeff=z(n, 2)))
    assert lhs == PVF.basis(n, 1, 2, 3, coeff=z(n, 1) * z(n, 2))
    assert wedge_pvf(PVF.basis(n, 1), PVF.basis(n, 1)).is_zero()
    assert wedge_pvf(PVF.basis(n, 1), PVF.basis(n, 2)) == wedge_pvf(PVF.basis(n, 2), PVF.basis(n, 1)) * -1


def test_linear_plus_constant_bivector_is_poisson():
    assert is_poisson(bivector(3, {(1, 2): "z1", (2, 3): "1"}))


def test_lie_derivative_matches_interior_formula():
    n = 3
    assert lie_deriv(PVF.basis(n, 1), Form.function(n, z(n, 1))).coeff() == 1
    assert lie_deriv(PVF.basis(n, 1), Form.basis(n, 2)).is_zero()
    value = lie_deriv(PVF.basis(n, 1, 2), Form.basis(n, 2, coeff=z(n, 1)))
    assert value == interior(PVF.basis(n, 1, 2), Form.basis(n, 1, 2))
    assert value.coeff() == -1


COISO_EXTRA = [
    (setup_of(3, 0, {(1, 2): "z3", (2, 3): "z1", (3, 1): "-z2"}), True),
    (setup_of(3, 1, {(1, 2): "z3", (2, 3): "z1", (3, 1): "-z2"}), True),
    (setup_of(3, 2, {}), True),
    (setup_of(3, 2, {(1, 2): "z1"}), True),
    (setup_of(4, 1, {(1, 2): "1", (3, 4): "1"}), True),
    (setup_of(4, 3, {(1, 3): "1", (2, 4): "1"}), False),
    (setup_of(2, 2, {(1, 2): "1"}), False),
]


@pytest.mark.parametrize("setup, expected", COISO_EXTRA)
def test_characterizations_agree_on_more_charts(setup, expected):
    values = coisotropy_characterizations(setup)
    assert set(values.values()) == {expected}, values


@pytest.mark.parametrize("name", ["lagrangian", "hypersurface", "obstructed_point"])
def test_normal_differential_is_independent_of_the_lift(request, name):
    setup = request.getfixturevalue(name)
    rng = random.Random(17)
    for _ in range(20):
        degree = rng.randint(0, setup.codim)
        nu = random_normal(rng, setup, degree)
        eta = random_ideal_field(rng, setup, degree)
        assert in_LZ(setup, eta)
        shifted = normal_project(setup, lichnerowicz(setup, normal_lift(nu) + eta))
        assert shifted == normal_dpi(setup, nu)


@pytest.mark.parametrize("name", ["lagrangian", "hypersurface", "obstructed_point"])
def test_normal_differential_squares_to_zero(request, name):
    setup = request.getfixturevalue(name)
    rng = random.Random(23)
    for _ in range(20):
        nu = random_normal(rng, setup, rng.randint(0, setup.codim))
        assert normal_dpi(setup, normal_dpi(setup, nu)).is_zero()
