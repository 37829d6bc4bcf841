import pytest
from hypothesis import given, strategies as st
from sympy.combinatorics import Permutation, PermutationGroup

from crossalg.group import (
    GroupError,
    NoIdentity,
    NoInverse,
    NotAssociative,
    OrderTooLarge,
    all_subgroups,
    coset_members,
    cyclic_group,
    direct_product,
    left_cosets,
    sylow_subgroup,
    symmetric_group,
    validate_group,
)

GROUPS = {
    "c1": lambda: cyclic_group(1),
    "c6": lambda: cyclic_group(6),
    "c8": lambda: cyclic_group(8),
    "s3": lambda: symmetric_group(3),
    "s4": lambda: symmetric_group(4),
    "c2xc2": lambda: direct_product(cyclic_group(2), cyclic_group(2)),
    "c3xs3": lambda: direct_product(cyclic_group(3), symmetric_group(3)),
}


@pytest.mark.parametrize("name,count", [("c6", 4), ("s3", 6), ("s4", 30), ("c2xc2", 5), ("c8", 4)])
def test_subgroup_counts(name, count):
    # known subgroup lattices
    assert len(all_subgroups(GROUPS[name]())) == count


@given(st.sampled_from(sorted(GROUPS)), st.sampled_from([2, 3, 5]))
def test_sylow_properties(name, p):
    G = GROUPS[name]()
    S = sylow_subgroup(G, p)
    S.check()
    n, q = G.order, 1
    while n % p == 0:
        n //= p
        q *= p
    assert S.order == q and S.is_p_group(p)
    sylows = [H for H in all_subgroups(G) if H.order == q]
    assert S in sylows
    assert len(sylows) % p == 1 % p
    assert S.elements == min(H.elements for H in sylows)


def test_sylow_orders_match_sympy():
    perms = [Permutation([1, 0, 2, 3]), Permutation([1, 2, 3, 0])]
    ref = PermutationGroup(perms)
    G = symmetric_group(4)
    for p in (2, 3):
        assert sylow_subgroup(G, p).order == ref.sylow_subgroup(p).order()


@given(st.sampled_from(sorted(GROUPS)))
def test_cosets_partition(name):
    G = GROUPS[name]()
    for H in all_subgroups(G)[:6]:
        reps = left_cosets(G, H)
        blocks = [coset_members(G, H, x) for x in reps]
        assert sorted(x for b in blocks for x in b) == list(range(G.order))
        assert len(reps) * H.order == G.order


def test_symmetric_group_composes_right_to_left():
    G = symmetric_group(3)
    idx = {n: k for k, n in enumerate(G.names)}
    # (p q)(i) = p(q(i)), permutations written as image lists
    swap, cyc = idx["102"], idx["120"]
    assert G.names[G.mul(swap, cyc)] == "021"
    assert G.names[G.mul(cyc, swap)] == "210"


def test_inverses_and_orders():
    G = direct_product(cyclic_group(2), cyclic_group(3))
    for x in range(G.order):
        assert G.mul(x, G.inv(x)) == G.identity
        assert G.power(x, G.element_order(x)) == G.identity
    assert max(G.element_order(x) for x in range(G.order)) == 6


def test_corrupted_cayley_table():
    t = cyclic_group(4).table.copy()
    t[1, 1], t[1, 2] = t[1, 2], t[1, 1]
    with pytest.raises(NotAssociative) as exc:
        validate_group(t)
    x, y, z = exc.value.witness
    assert t[t[x, y], z] != t[x, t[y, z]]


def test_table_errors():
    with pytest.raises(NoIdentity):
        validate_group([[0, 0], [0, 0]])
    with pytest.raises(NoInverse):
        validate_group([[0, 1], [1, 1]])
    with pytest.raises(GroupError):
        validate_group([[0, 2], [1, 0]])
    with pytest.raises(OrderTooLarge):
        cyclic_group(65)


def test_subgroup_as_group():
    G = symmetric_group(3)
    S = sylow_subgroup(G, 3)
    K, incl = S.as_group()
    assert K.order == 3 and [G.name(x) for x in incl] == list(K.names)
    assert max(K.element_order(x) for x in range(3)) == 3
    with pytest.raises(GroupError):
        G.subgroup([0, 1, 2])
