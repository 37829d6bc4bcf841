"""Named example data: algebras with group actions, cocycles and random families.

Every builder returns a :class:`Fixture`.  The quiver fixtures keep the
bound quiver and the symmetry descriptions so they can be written out
as workspaces; the algebraic ones carry explicit matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable

import numpy as np

from .algebra import FDAlgebra, is_unit, truncated_polynomial_algebra, field_algebra
from .crossed import ParameterSet, apply_equivalence, extend_action, CrossedError
from .group import FiniteGroup, Subgroup, cyclic_group, direct_product, symmetric_group, sylow_subgroup
from .homology import FDModule, quotient_module, regular_module, submodule
from .linalg import GF, Field, Subspace
from .quiver import BoundQuiver, PathAlgebra, QuiverSymmetry, path_algebra, symmetry_to_automorphism

__all__ = [
    "Fixture",
    "FIXTURES",
    "get_fixture",
    "two_cycle",
    "cospan",
    "three_cycle",
    "four_cycle",
    "s3_on_dual_numbers",
    "s3_on_field",
    "gf4_cocycle",
    "gf3_cocycle",
    "random_parameter_set",
    "corrupt_alpha",
    "random_cyclic_module",
    "random_unit",
    "polynomial_quotient_algebra",
    "tensor_algebra",
]


@dataclass
class Fixture:
    name: str
    ps: ParameterSet
    path: PathAlgebra | None = None
    group_spec: dict | None = None  # workspace description of the group
    sigma_spec: dict | None = None  # generator name -> quiver symmetry description
    subgroup: Subgroup | None = None  # H for separability checks (|G:H| invertible)
    domain: Subspace | None = None  # central subfield holding scalar cocycle values
    free: bool = False  # the group permutes the vertex idempotents freely
    notes: dict = dc_field(default_factory=dict)

    @property
    def algebra(self) -> FDAlgebra:
        return self.ps.algebra

    @property
    def group(self) -> FiniteGroup:
        return self.ps.group

    @property
    def idempotents(self) -> list[np.ndarray]:
        if self.path is not None:
            return self.path.vertex_idempotents
        return [self.algebra.one]


def _quiver_fixture(name, F, vertices, arrows, relations, G, group_spec, gen_maps, **kw) -> Fixture:
    Q = BoundQuiver.from_names(F, vertices, arrows, relations)
    P = path_algebra(Q)
    images = {}
    spec = {}
    for g, (vmap, amap) in gen_maps.items():
        s = QuiverSymmetry.from_names(Q, vmap, amap)
        images[g] = symmetry_to_automorphism(P, s)
        spec[G.name(g)] = {"vertices": dict(vmap), "arrows": dict(amap)}
    ps = ParameterSet.skew(P.algebra, G, extend_action(P.algebra, G, images))
    return Fixture(name, ps, P, group_spec, spec, **kw)


def two_cycle(p: int = 2) -> Fixture:
    """Two vertices with arrows both ways, all length-two paths zero; C2 swaps them."""
    F = GF(p)
    G = cyclic_group(2)
    H = G.trivial() if p != 2 else None
    return _quiver_fixture(
        f"two_cycle_gf{p}",
        F,
        ["x", "y"],
        [("beta", "x", "y"), ("gamma", "y", "x")],
        ["beta*gamma", "gamma*beta"],
        G,
        {"cyclic": 2},
        {1: ({"x": "y", "y": "x"}, {"beta": "gamma", "gamma": "beta"})},
        subgroup=H,
        free=True,
    )


def cospan(p: int = 2) -> Fixture:
    """``1 -> 2 <- 3`` with C2 exchanging the outer vertices."""
    F = GF(p)
    G = cyclic_group(2)
    return _quiver_fixture(
        f"cospan_gf{p}",
        F,
        ["1", "2", "3"],
        [("a", "1", "2"), ("b", "3", "2")],
        [],
        G,
        {"cyclic": 2},
        {1: ({"1": "3", "3": "1", "2": "2"}, {"a": "b", "b": "a"})},
        subgroup=G.trivial() if p != 2 else None,
    )


def three_cycle(p: int = 3) -> Fixture:
    """Oriented 3-cycle with radical square zero; C3 rotates it."""
    F = GF(p)
    G = cyclic_group(3)
    return _quiver_fixture(
        f"three_cycle_gf{p}",
        F,
        ["1", "2", "3"],
        [("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1")],
        ["b*a", "c*b", "a*c"],
        G,
        {"cyclic": 3},
        {1: ({"1": "2", "2": "3", "3": "1"}, {"a": "b", "b": "c", "c": "a"})},
        subgroup=G.trivial() if p != 3 else None,
        free=True,
    )


def four_cycle(p: int = 2) -> Fixture:
    """Oriented 4-cycle with radical square zero; C2 rotates by two steps."""
    F = GF(p)
    G = cyclic_group(2)
    return _quiver_fixture(
        f"four_cycle_gf{p}",
        F,
        ["1", "2", "3", "4"],
        [("a", "1", "2"), ("b", "2", "3"), ("c", "3", "4"), ("d", "4", "1")],
        ["b*a", "c*b", "d*c", "a*d"],
        G,
        {"cyclic": 2},
        {1: ({"1": "3", "2": "4", "3": "1", "4": "2"}, {"a": "c", "b": "d", "c": "a", "d": "b"})},
        subgroup=G.trivial() if p != 2 else None,
        free=True,
    )


def _sign(G: FiniteGroup) -> list[int]:
    """Sign of each permutation in :func:`symmetric_group` order."""
    out = []
    for x in range(G.order):
        perm = [int(c) for c in G.name(x)]
        inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
        out.append(-1 if inv % 2 else 1)
    return out


def s3_on_dual_numbers(p: int = 5) -> Fixture:
    """``k[X]/(X^2)`` with S3 acting through the sign, ``X -> sign(x) X``."""
    F = GF(p)
    A = truncated_polynomial_algebra(F, 2)
    G = symmetric_group(3)
    sigma = np.stack([F.asarray([[1, 0], [0, s]]) for s in _sign(G)])
    ps = ParameterSet.skew(A, G, sigma)
    sub = _invertible_index_subgroup(G, p)
    return Fixture(f"s3_dual_gf{p}", ps, None, {"symmetric": 3}, None, subgroup=sub)


def s3_on_field(p: int = 5) -> Fixture:
    """The group algebra of S3 over GF(p)."""
    F = GF(p)
    A = field_algebra(F)
    G = symmetric_group(3)
    ps = ParameterSet.trivial(A, G)
    return Fixture(f"s3_field_gf{p}", ps, None, {"symmetric": 3}, None, subgroup=_invertible_index_subgroup(G, p))


def _invertible_index_subgroup(G: FiniteGroup, p: int) -> Subgroup:
    # a Sylow p-subgroup has index prime to p
    return sylow_subgroup(G, p)


# -- auxiliary algebras ------------------------------------------------------------------


def polynomial_quotient_algebra(F: Field, coeffs) -> FDAlgebra:
    """``k[t]/(f)`` for monic ``f`` given by ``coeffs`` (constant term first, leading 1 omitted)."""
    n = len(coeffs)
    c = F.asarray(list(coeffs))

    def reduce_power(k):
        # t^k in the basis 1, t, ..., t^(n-1)
        v = F.zeros(n)
        if k < n:
            v[k] = 1
            return v
        prev = reduce_power(k - 1)
        out = F.zeros(n)
        out[1:] = prev[:-1]
        return F.reduce(out - prev[-1] * c)

    table = F.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            table[i, j] = reduce_power(i + j)
    one = F.zeros(n)
    one[0] = 1
    return FDAlgebra(F, table, one, name="k[t]/(f)")


def tensor_algebra(A: FDAlgebra, B: FDAlgebra) -> FDAlgebra:
    """``A (x) B`` with basis ``a_i (x) b_j`` at index ``i * dim B + j``."""
    F = A.field
    table = np.einsum("ijk,abc->iajbkc", A.table, B.table).reshape(A.dim * B.dim, A.dim * B.dim, A.dim * B.dim)
    return FDAlgebra(F, F.reduce(table), F.reduce(np.kron(A.one, B.one)), name=f"{A.name} (x) {B.name}")


def _cyclic_cocycle(n: int, c, one, scalar):
    """Scalar cocycle on C_n: ``alpha(g^i, g^j) = c`` when ``i + j >= n``."""
    return [[scalar(c) if i + j >= n else one for j in range(n)] for i in range(n)]


def gf4_cocycle(group: str = "c2", *, twist: int = 1, seed: int = 0) -> Fixture:
    """``GF(4)[X]/(X^3)`` over GF(2), ``X -> X + X^2``, cocycle with values in GF(4).

    ``group`` is ``c2``, ``c4`` or ``c2xc2``; ``twist`` is the exponent of
    the generator of GF(4)* used as the wrap-around value.  A random scalar
    coboundary from ``seed`` is applied on top.
    """
    F = GF(2)
    K = polynomial_quotient_algebra(F, [1, 1])  # GF(4) = GF(2)[w]/(w^2 + w + 1)
    B = truncated_polynomial_algebra(F, 3)
    A = tensor_algebra(K, B)
    w = F.asarray([0, 1])

    def scalar(c):
        return F.reduce(np.kron(c, B.one))

    powers = [K.one, w, K.mul(w, w)]
    c = powers[twist % 3]
    phi = F.asarray([[1, 0, 0], [0, 1, 0], [0, 1, 1]])  # X -> X + X^2 on 1, X, X^2
    auto = F.reduce(np.kron(F.eye(2), phi))
    if group == "c2":
        G = cyclic_group(2)
        spec = {"cyclic": 2}
        alpha = _cyclic_cocycle(2, c, A.one, scalar)
        sigma = extend_action(A, G, {1: auto})
    elif group == "c4":
        G = cyclic_group(4)
        spec = {"cyclic": 4}
        alpha = _cyclic_cocycle(4, c, A.one, scalar)
        sigma = extend_action(A, G, {1: auto})
    elif group == "c2xc2":
        C = cyclic_group(2)
        G = direct_product(C, C)
        spec = {"product": [{"cyclic": 2}, {"cyclic": 2}]}
        a1 = _cyclic_cocycle(2, c, K.one, lambda v: v)
        alpha = [[scalar(K.mul(a1[x // 2][y // 2], a1[x % 2][y % 2])) for y in range(4)] for x in range(4)]
        sigma = extend_action(A, G, {2: auto, 1: F.eye(A.dim)})
    else:
        raise ValueError(f"unknown group {group!r}")
    ps = ParameterSet(A, G, sigma, np.array(alpha))
    rng = np.random.default_rng(seed)
    units = [A.one] + [scalar(powers[int(rng.integers(3))]) for _ in range(G.order - 1)]
    units = [units[x] if x != G.identity else A.one for x in range(G.order)]
    ps = apply_equivalence(ps, units)
    domain = Subspace.span(F, A.dim, [scalar(K.one), scalar(w)])
    return Fixture(f"gf4_{group}_t{twist}_s{seed}", ps, None, spec, None, domain=domain)


def gf3_cocycle(twist: int = 2, *, seed: int = 0) -> Fixture:
    """``GF(3)[X]/(X^3)`` with C3 acting by ``X -> X + X^2`` and a scalar wrap-around cocycle."""
    F = GF(3)
    A = truncated_polynomial_algebra(F, 3)
    G = cyclic_group(3)
    auto = F.asarray([[1, 0, 0], [0, 1, 0], [0, 1, 1]])
    sigma = extend_action(A, G, {1: auto})

    def scalar(c):
        return F.reduce(c * A.one)

    alpha = _cyclic_cocycle(3, twist, A.one, scalar)
    ps = ParameterSet(A, G, sigma, np.array(alpha))
    rng = np.random.default_rng(seed)
    units = [A.one if x == G.identity else scalar(int(rng.integers(1, 3))) for x in range(3)]
    ps = apply_equivalence(ps, units)
    return Fixture(f"gf3_c3_t{twist}_s{seed}", ps, None, {"cyclic": 3}, None, domain=Subspace.span(F, 3, [A.one]))


FIXTURES: dict[str, Callable[[], Fixture]] = {
    "two_cycle": lambda: two_cycle(2),
    "two_cycle_gf3": lambda: two_cycle(3),
    "cospan": lambda: cospan(2),
    "cospan_gf3": lambda: cospan(3),
    "three_cycle_gf3": lambda: three_cycle(3),
    "three_cycle_gf2": lambda: three_cycle(2),
    "four_cycle": lambda: four_cycle(2),
    "s3_dual_gf5": lambda: s3_on_dual_numbers(5),
    "s3_dual_gf2": lambda: s3_on_dual_numbers(2),
    "s3_dual_gf3": lambda: s3_on_dual_numbers(3),
    "s3_field_gf5": lambda: s3_on_field(5),
    "s3_field_gf2": lambda: s3_on_field(2),
    "s3_field_gf3": lambda: s3_on_field(3),
    "gf4_c2": lambda: gf4_cocycle("c2"),
    "gf4_c4": lambda: gf4_cocycle("c4", twist=2, seed=1),
    "gf4_c2xc2": lambda: gf4_cocycle("c2xc2", seed=2),
    "gf3_c3": lambda: gf3_cocycle(2, seed=0),
}


def get_fixture(name: str) -> Fixture:
    try:
        return FIXTURES[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {sorted(FIXTURES)}") from None


# -- random families -----------------------------------------------------------------------


def random_unit(A: FDAlgebra, rng, *, tries: int = 200) -> np.ndarray:
    F = A.field
    for _ in range(tries):
        v = F.random_array(rng, (A.dim,))
        if is_unit(A, v):
            return v
    return A.one.copy()


def _group_generators(G: FiniteGroup) -> list[int]:
    gens: list[int] = []
    H = G.trivial()
    for x in range(G.order):
        if x not in H:
            gens.append(x)
            H = G.generated(gens)
        if H.order == G.order:
            break
    return gens


def _random_action(A: FDAlgebra, G: FiniteGroup, candidates: list[np.ndarray], rng) -> np.ndarray:
    """A random homomorphism ``G -> Aut(A)`` with generator images drawn from ``candidates``."""
    gens = _group_generators(G)
    for _ in range(50):
        images = {g: candidates[int(rng.integers(len(candidates)))] for g in gens}
        try:
            return extend_action(A, G, images)
        except CrossedError:
            continue
    return np.stack([A.field.eye(A.dim)] * G.order)


def _base_choices(kind: str, p: int):
    F = GF(p)
    if kind == "field":
        A = field_algebra(F)
        return A, [F.eye(1)]
    if kind == "dual":
        A = truncated_polynomial_algebra(F, 2)
        return A, [F.asarray([[1, 0], [0, c]]) for c in range(1, p)]
    if kind == "two_cycle":
        fx = two_cycle(p)
        return fx.algebra, [F.eye(fx.algebra.dim), fx.ps.sigma[1]]
    raise ValueError(kind)


_GROUPS = {
    "c2": lambda: cyclic_group(2),
    "c3": lambda: cyclic_group(3),
    "c2xc2": lambda: direct_product(cyclic_group(2), cyclic_group(2)),
    "s3": lambda: symmetric_group(3),
}


def random_parameter_set(rng, *, base: str | None = None, group: str | None = None, p: int | None = None) -> ParameterSet:
    """A valid parameter set: random action, scalar cyclic cocycle when available, random coboundary."""
    base = base or ["field", "dual", "two_cycle"][int(rng.integers(3))]
    group = group or list(_GROUPS)[int(rng.integers(len(_GROUPS)))]
    p = p or [2, 3, 5, 7][int(rng.integers(4))]
    A, cands = _base_choices(base, p)
    F = A.field
    G = _GROUPS[group]()
    sigma = _random_action(A, G, cands, rng)
    ps = ParameterSet.skew(A, G, sigma)
    if group in ("c2", "c3"):
        n = G.order
        c = int(rng.integers(1, p))
        ps = ParameterSet(A, G, sigma, np.array(_cyclic_cocycle(n, c, A.one, lambda v: F.reduce(v * A.one))))
    units = [random_unit(A, rng) for _ in range(G.order)]
    return apply_equivalence(ps, units)


def corrupt_alpha(ps: ParameterSet, rng, *, anywhere: bool = False) -> tuple[ParameterSet, tuple[int, int]]:
    """Change one value of alpha: multiply it by a unit other than 1, or set it to 0 if none exists.

    By default the entry sits in the row or column of the identity, where
    any change breaks the cocycle conditions (``alpha(1, y) = alpha(1, 1)``
    and ``alpha(x, 1) = sigma_x(alpha(1, 1))`` hold for every valid set).
    With ``anywhere=True`` the entry is arbitrary and the result may still be valid.
    """
    A, G = ps.algebra, ps.group
    if anywhere:
        x, y = int(rng.integers(G.order)), int(rng.integers(G.order))
    else:
        other = int(rng.integers(G.order))
        x, y = (G.identity, other) if rng.integers(2) else (other, G.identity)
    alpha = ps.alpha.copy()
    w = None
    for _ in range(50):
        u = random_unit(A, rng, tries=20)
        if not np.array_equal(u, A.one):
            w = u
            break
    alpha[x, y] = A.mul(alpha[x, y], w) if w is not None else A.field.zeros(A.dim)
    return ParameterSet(A, G, ps.sigma.copy(), alpha), (x, y)


def random_cyclic_module(A: FDAlgebra, rng, *, kind: str = "quotient") -> FDModule:
    """``A / A v`` (``kind="quotient"``) or ``A v`` for a random ``v``."""
    F = A.field
    v = F.random_array(rng, (A.dim,))
    W = Subspace.column_space(F, A.right_matrix(v))
    reg = regular_module(A)
    if kind == "quotient":
        return quotient_module(reg, W).module
    return submodule(reg, W)
