import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from crossalg.algebra import matrix_algebra, split_structure, truncated_polynomial_algebra
from crossalg.crossed import build_crossed_product
from crossalg.fixtures import get_fixture, random_cyclic_module
from crossalg.homology import (
    PD,
    FDModule,
    ModuleError,
    direct_sum,
    ext1_dim,
    ext1_dim_by_hom,
    fdim_probe,
    gldim,
    hom_dim,
    induce_module,
    is_isomorphic,
    module_radical,
    pd,
    pi_delta_check,
    projective_cover,
    regular_module,
    restrict_module,
    simple_module,
    simple_modules,
    submodule,
    syzygy,
    theorem_spotcheck,
    top,
)
from crossalg.linalg import GF, QQ, Subspace, solve
from crossalg.quiver import BoundQuiver, path_algebra

SMALL_FIXTURES = ["two_cycle", "cospan", "s3_dual_gf2", "three_cycle_gf2", "four_cycle"]


def linear_a3(F, relations=()):
    Q = BoundQuiver.from_names(F, ["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")], relations)
    return path_algebra(Q).algebra


def brute_hom_dim(M, N):
    """Count GF(2) matrices commuting with the action, by enumeration."""
    F = M.field
    A = M.algebra
    count = 0
    for bits in itertools.product(range(2), repeat=M.dim * N.dim):
        X = np.array(bits, dtype=np.int64).reshape(N.dim, M.dim)
        if all(np.array_equal(F.matmul(N.action[i], X), F.matmul(X, M.action[i])) for i in range(A.dim)):
            count += 1
    return int(np.log2(count))


@pytest.mark.parametrize("name", ["two_cycle", "cospan"])
def test_hom_dims_match_enumeration(name):
    A = get_fixture(name).algebra
    rng = np.random.default_rng(3)
    mods = simple_modules(A) + [random_cyclic_module(A, rng) for _ in range(3)]
    mods = [M for M in mods if 0 < M.dim <= 3]
    for M in mods:
        for N in mods:
            assert hom_dim(M, N) == brute_hom_dim(M, N)


@pytest.mark.parametrize("name", SMALL_FIXTURES)
def test_ext1_two_ways(name):
    for A in (get_fixture(name).algebra, build_crossed_product(get_fixture(name).ps).algebra):
        S = simple_modules(A)
        for i in range(len(S)):
            for j in range(len(S)):
                assert ext1_dim(A, i, j) == ext1_dim_by_hom(S[i], S[j])


def test_known_global_dimensions():
    F = GF(2)
    assert str(gldim(linear_a3(F)).status) == "Finite(1)"
    assert str(gldim(linear_a3(F, ["b*a"])).status) == "Finite(2)"
    assert str(gldim(linear_a3(QQ, ["b*a"])).status) == "Finite(2)"
    assert str(gldim(matrix_algebra(GF(3), 2)).status) == "Finite(0)"
    dual = gldim(truncated_polynomial_algebra(GF(3), 2)).status
    assert dual.is_infinite and dual.cycle == (0, 1)


def test_two_cycle_syzygies():
    A = get_fixture("two_cycle").algebra
    r = pd(simple_module(A, 0))
    assert r.status.cycle == (0, 2)
    assert r.syzygy_dims == [1, 1, 1]
    assert r.terms == [(1, 0), (0, 1)]
    assert r.minimal


def test_loop_certificate_when_resolution_is_cut_short():
    A = truncated_polynomial_algebra(GF(2), 3)
    rep = gldim(A, cutoff=0)
    assert rep.status.is_infinite and rep.status.loop == 0
    assert str(rep.status) == "Infinite(loop at 0)"
    assert not pd(simple_module(A, 0), cutoff=0).status.determined


def test_pd_ordering():
    assert PD.finite(3).as_number() == 3
    assert PD.infinite().as_number() == float("inf")
    with pytest.raises(ValueError):
        PD.undetermined(5).as_number()


@given(st.sampled_from(SMALL_FIXTURES), st.integers(0, 10**6), st.booleans())
def test_cover_and_syzygy(name, seed, crossed):
    fx = get_fixture(name)
    A = build_crossed_product(fx.ps).algebra if crossed else fx.algebra
    M = random_cyclic_module(A, np.random.default_rng(seed))
    cov = projective_cover(M)
    assert cov.module.dim == M.dim + cov.kernel.dim
    assert cov.kernel.is_subspace_of(module_radical(cov.module))
    assert sum(top(M)) == len(cov.summands)
    Om = syzygy(M)
    assert Om.compatibility_witness() is None


@given(st.sampled_from(SMALL_FIXTURES), st.integers(0, 10**6))
def test_isomorphism_under_base_change(name, seed):
    A = get_fixture(name).algebra
    rng = np.random.default_rng(seed)
    M = random_cyclic_module(A, rng)
    F = A.field
    while True:
        P = F.random_array(rng, (M.dim, M.dim))
        if M.dim == 0 or Subspace.column_space(F, P).dim == M.dim:
            break
    # N = P M P^-1 is isomorphic to M through P
    inv = np.stack([solve(P, F.eye(M.dim)[:, i], F) for i in range(M.dim)], axis=1) if M.dim else P
    N = FDModule(A, np.stack([F.matmul(F.matmul(P, M.action[i]), inv) for i in range(A.dim)]))
    res = is_isomorphic(M, N, rng=rng)
    assert res.isomorphic
    X = res.matrix
    assert all(np.array_equal(F.matmul(N.action[i], X), F.matmul(X, M.action[i])) for i in range(A.dim))


def test_non_isomorphic_simples():
    A = get_fixture("two_cycle").algebra
    S0, S1 = simple_modules(A)
    assert is_isomorphic(S0, S1).isomorphic is False


def test_module_validation():
    A = truncated_polynomial_algebra(GF(3), 2)
    bad = np.stack([np.eye(2, dtype=np.int64), np.eye(2, dtype=np.int64)])  # X acting as 1
    with pytest.raises(ModuleError):
        FDModule(A, bad)
    with pytest.raises(ModuleError):
        submodule(regular_module(A), Subspace.span(GF(3), 2, [[1, 0]]))


@pytest.mark.parametrize("name", SMALL_FIXTURES)
def test_induction_from_base_has_rank_group_order(name):
    fx = get_fixture(name)
    cp = build_crossed_product(fx.ps)
    rng = np.random.default_rng(0)
    for N in simple_modules(fx.algebra) + [random_cyclic_module(fx.algebra, rng)]:
        ind = induce_module(N, cp.algebra, cp.base_embedding())
        assert ind.module.dim == fx.group.order * N.dim
        assert ind.module.compatibility_witness() is None
        well, ident = pi_delta_check(N, cp.algebra, cp.base_embedding(), cp.degree_one_projection())
        assert well and ident


def test_restriction_dimensions():
    fx = get_fixture("cospan")
    cp = build_crossed_product(fx.ps)
    for M in simple_modules(cp.algebra):
        R = restrict_module(M, fx.algebra, cp.base_embedding())
        assert R.dim == M.dim and R.compatibility_witness() is None


def test_spotcheck_and_fdim_probe():
    fx = get_fixture("cospan")
    cp = build_crossed_product(fx.ps)
    for M in simple_modules(cp.algebra):
        assert theorem_spotcheck(M, fx.algebra, cp.base_embedding()).ok
    probe = fdim_probe(simple_modules(fx.algebra) + [regular_module(fx.algebra)])
    assert probe.lower_bound == 1


def test_direct_sum_top():
    A = get_fixture("cospan").algebra
    S = simple_modules(A)
    M = direct_sum([S[0], S[0], S[2]])
    assert top(M) == (2, 0, 1)
    assert len(split_structure(A).classes) == 3
