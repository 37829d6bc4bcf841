import numpy as np
import pytest
from hypothesis import given, strategies as st

from crossalg.algebra import field_algebra, radical, truncated_polynomial_algebra, try_inverse
from crossalg.crossed import (
    ActionNotFree,
    AlphaNotScalar,
    Condition1Fails,
    Condition2Fails,
    CrossedError,
    IndexNotInvertible,
    NotApplicable,
    NotAutomorphism,
    NotClosed,
    NotUnit,
    ParameterSet,
    action_on_idempotents,
    apply_equivalence,
    basis_change_matrix,
    build_crossed_product,
    canonical_separability_element,
    center_trace_criterion,
    check_separability_element,
    cocycle_identities_check,
    extend_action,
    find_separability_element,
    hom_fixed_points,
    matrix_algebra_certificate,
    normalize_convention,
    normalize_to_skew,
    restrict_to_subgroup,
    structure_constants_match,
    tensor_space,
    trivial_is_projective,
    trivial_representation,
    validate_parameter_set,
)
from crossalg.fixtures import FIXTURES, get_fixture, random_cyclic_module, random_parameter_set, random_unit
from crossalg.group import cyclic_group, sylow_subgroup
from crossalg.homology import pd, simple_modules
from crossalg.linalg import GF

SKEW = [n for n in FIXTURES if get_fixture(n).ps.is_skew()]


def twisted_gf5():
    """GF(5) twisted by C2 with alpha(g, g) = 2, a non-square: the field GF(25)."""
    F = GF(5)
    A = field_algebra(F)
    G = cyclic_group(2)
    alpha = np.array([[[1], [1]], [[1], [2]]])
    return ParameterSet(A, G, np.stack([F.eye(1)] * 2), alpha)


def product_by_formula(ps, u, v):
    """``(a s_x)(b s_y) = a s_x(b) alpha(x, y) s_xy`` summed over components."""
    A, G, F = ps.algebra, ps.group, ps.field
    d = A.dim
    out = F.zeros(d * G.order)
    for x in range(G.order):
        a = u[x * d : (x + 1) * d]
        for y in range(G.order):
            b = v[y * d : (y + 1) * d]
            xy = G.mul(x, y)
            term = A.mul_many(a, ps.apply(x, b), ps.alpha[x, y])
            out[xy * d : (xy + 1) * d] = F.reduce(out[xy * d : (xy + 1) * d] + term)
    return out


@given(st.integers(0, 10**6))
def test_multiplication_matches_formula(seed):
    rng = np.random.default_rng(seed)
    ps = random_parameter_set(rng)
    cp = build_crossed_product(ps)
    F = ps.field
    u, v = F.random_array(rng, (cp.dim,)), F.random_array(rng, (cp.dim,))
    assert np.array_equal(cp.algebra.mul(u, v), product_by_formula(ps, u, v))
    assert cp.dim == ps.algebra.dim * ps.group.order


@given(st.integers(0, 10**6))
def test_identity_is_inverse_alpha_at_one(seed):
    rng = np.random.default_rng(seed)
    ps = random_parameter_set(rng)
    cp = build_crossed_product(ps)
    e = ps.group.identity
    expected = cp.element(try_inverse(ps.algebra, ps.alpha[e, e]), e)
    assert np.array_equal(cp.algebra.one, expected)


@given(st.integers(0, 10**6))
def test_equivalence_is_a_change_of_basis(seed):
    rng = np.random.default_rng(seed)
    ps = random_parameter_set(rng)
    A = ps.algebra
    units = [random_unit(A, rng) for _ in range(ps.group.order)]
    new = apply_equivalence(ps, units)
    old_cp, new_cp = build_crossed_product(ps), build_crossed_product(new)
    assert structure_constants_match(old_cp, new_cp, basis_change_matrix(old_cp, units))


@given(st.integers(0, 10**6))
def test_identities_on_random_sets(seed):
    rng = np.random.default_rng(seed)
    ps = random_parameter_set(rng)
    assert cocycle_identities_check(normalize_convention(ps)).ok


def test_identities_need_normalized_convention():
    ps = twisted_gf5()
    F = ps.field
    shifted = apply_equivalence(ps, [F.asarray([2]), F.asarray([1])])
    assert not shifted.is_normalized()
    with pytest.raises(NotApplicable):
        cocycle_identities_check(shifted)


@given(st.integers(0, 10**6))
def test_normalize_convention(seed):
    ps = random_parameter_set(np.random.default_rng(seed))
    out = normalize_convention(ps)
    assert out.is_normalized()
    assert normalize_convention(out) is out


def test_validation_errors():
    F = GF(3)
    A = truncated_polynomial_algebra(F, 2)
    G = cyclic_group(3)
    neg = F.asarray([[1, 0], [0, 2]])  # X -> -X has order 2, not dividing 3
    with pytest.raises(Condition1Fails):
        validate_parameter_set(ParameterSet.skew(A, G, np.stack([F.eye(2), neg, neg])))
    with pytest.raises(NotAutomorphism) as exc:
        validate_parameter_set(ParameterSet.skew(A, G, np.stack([F.eye(2), F.asarray([[1, 1], [0, 1]]), F.eye(2)])))
    assert exc.value.witness == 1
    ps = ParameterSet.trivial(A, G)
    alpha = ps.alpha.copy()
    alpha[1, 1] = [0, 1]
    with pytest.raises(NotUnit) as exc:
        validate_parameter_set(ParameterSet(A, G, ps.sigma, alpha))
    assert exc.value.witness == (1, 1)
    alpha = ps.alpha.copy()
    alpha[1, 1] = [2, 0]
    with pytest.raises(Condition2Fails):
        validate_parameter_set(ParameterSet(A, G, ps.sigma, alpha))
    with pytest.raises(CrossedError):
        ParameterSet(A, G, ps.sigma[:2], ps.alpha)


def test_extend_action_conflict():
    F = GF(3)
    A = truncated_polynomial_algebra(F, 2)
    with pytest.raises(CrossedError):
        extend_action(A, cyclic_group(3), {1: F.asarray([[1, 0], [0, 2]])})


def test_trivial_module_of_skew_rings():
    for name in SKEW:
        fx = get_fixture(name)
        cp = build_crossed_product(fx.ps)
        tr = trivial_representation(cp)
        assert tr.module.dim == fx.algebra.dim and tr.closure_verified
        # the class of 1 is fixed by every sigma_x
        F = fx.algebra.field
        one = F.matmul(tr.projection, cp.algebra.one.reshape(-1, 1)).reshape(-1)
        for x in range(fx.group.order):
            assert np.array_equal(F.matmul(tr.module.act(cp.sigma(x)), one.reshape(-1, 1)).reshape(-1), one)


@pytest.mark.parametrize("name", ["s3_field_gf5", "s3_field_gf2", "s3_dual_gf5", "s3_dual_gf3", "two_cycle", "cospan", "three_cycle_gf3"])
def test_trace_criterion_agrees_with_resolution(name):
    cp = build_crossed_product(get_fixture(name).ps)
    cert = trivial_is_projective(cp)
    status = pd(trivial_representation(cp).module).status
    assert cert.projective == (status.is_finite and status.value == 0)


def test_trace_criterion_needs_skew():
    with pytest.raises(NotApplicable):
        trivial_is_projective(build_crossed_product(get_fixture("gf3_c3").ps))


def test_group_algebra_radicals():
    # Maschke in characteristic 5; GF(2)S3 is GF(2)C2 x M_2(GF(2)) with a one-dimensional radical
    assert radical(build_crossed_product(get_fixture("s3_field_gf5").ps).algebra).dim == 0
    assert radical(build_crossed_product(get_fixture("s3_field_gf2").ps).algebra).dim == 1


@pytest.mark.parametrize("name", [n for n in SKEW if get_fixture(n).subgroup is not None and get_fixture(n).subgroup.order == 1])
def test_center_trace_matches_exact_decision(name):
    fx = get_fixture(name)
    cp = build_crossed_product(fx.ps)
    A = fx.algebra
    ct = center_trace_criterion(A, fx.ps.sigma, range(fx.group.order))
    space = tensor_space(cp.algebra, cp.base_embedding(), A.generators())
    exact = find_separability_element(space)
    assert ct.separable == (exact is not None)
    if exact is not None:
        assert check_separability_element(space, exact)[0]


def test_separability_element_for_twisted_algebra():
    ps = twisted_gf5()
    cp = build_crossed_product(ps)
    sub = restrict_to_subgroup(cp, ps.group.trivial())
    zeta = canonical_separability_element(cp, sub)
    assert check_separability_element(zeta.space, zeta.matrix)[0]
    # the variant with alpha(x, x^-1) in place of its inverse is not a separability element here
    other = canonical_separability_element(cp, sub, displayed_variant=True)
    assert not check_separability_element(other.space, other.matrix)[0]
    assert not np.array_equal(other.space.multiply_out(other.matrix), cp.algebra.one)


def test_separability_needs_invertible_index():
    fx = get_fixture("two_cycle")
    cp = build_crossed_product(fx.ps)
    with pytest.raises(IndexNotInvertible):
        canonical_separability_element(cp, restrict_to_subgroup(cp, fx.group.trivial()))


def test_separability_needs_normalized_convention():
    ps = twisted_gf5()
    F = ps.field
    odd = apply_equivalence(ps, [F.asarray([2]), F.asarray([1])])
    cp = build_crossed_product(odd)
    with pytest.raises(CrossedError):
        canonical_separability_element(cp, restrict_to_subgroup(cp, ps.group.trivial()))


@pytest.mark.parametrize("name", ["two_cycle", "cospan", "s3_dual_gf5"])
def test_hom_equals_fixed_homs(name):
    cp = build_crossed_product(get_fixture(name).ps)
    rng = np.random.default_rng(1)
    mods = simple_modules(cp.algebra) + [random_cyclic_module(cp.algebra, rng)]
    for M in mods:
        for N in mods:
            assert hom_fixed_points(cp, M, N).ok


def test_normalization_errors():
    fx = get_fixture("gf4_c2")
    S = fx.group.whole()
    with pytest.raises(AlphaNotScalar):
        normalize_to_skew(fx.ps, S)  # the default domain GF(2) misses the GF(4) values
    s3 = get_fixture("s3_dual_gf2")
    with pytest.raises(CrossedError):
        normalize_to_skew(s3.ps, s3.group.whole())


def test_normalization_of_a_trivial_cocycle_is_a_coboundary():
    fx = get_fixture("gf3_c3")
    S = sylow_subgroup(fx.group, 3)
    data = normalize_to_skew(fx.ps, S, fx.domain)
    assert data.result.is_skew() and data.h_identity_verified


def test_idempotent_action():
    fx = get_fixture("two_cycle")
    E = fx.idempotents
    F = fx.algebra.field
    assert action_on_idempotents(fx.ps.sigma, [0, 1], E, F) == {0: [0, 1], 1: [1, 0]}
    # conjugating by 1 + beta moves e_x off the idempotent set
    u = F.reduce(fx.algebra.one + fx.path.arrow("beta"))
    moved = apply_equivalence(fx.ps, [fx.algebra.one, u])
    with pytest.raises(NotClosed) as exc:
        action_on_idempotents(moved.sigma, [0, 1], E, F)
    assert exc.value.witness[0] == 1
    cospan = get_fixture("cospan")
    with pytest.raises(ActionNotFree):
        matrix_algebra_certificate(build_crossed_product(cospan.ps), cospan.idempotents)
