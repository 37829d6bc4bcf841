"""Parameter sets (sigma, alpha) and the crossed products they define.

A parameter set over an algebra ``A`` (dimension ``d``) and a group ``G``
(order ``n``) stores ``sigma`` as an ``(n, d, d)`` array of automorphism
matrices and ``alpha`` as an ``(n, n, d)`` array of unit coordinates.
The crossed product has basis ``b_i sigma_x`` at flat index ``x * d + i``
and multiplication ``(a sigma_x)(b sigma_y) = a sigma_x(b) alpha(x, y) sigma_xy``.
Maps compose right to left: ``sigma_x sigma_y`` is the matrix product
``sigma[x] @ sigma[y]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .algebra import (
    FDAlgebra,
    NotInvertible,
    Corner,
    automorphism_witness,
    center,
    corner_algebra,
    try_inverse,
)
from .group import FiniteGroup, Subgroup, left_cosets
from .homology import FDModule, hom_space, quotient_module, regular_module, restrict_module
from .linalg import EchelonBasis, Field, NoSolution, Subspace, solve

__all__ = [
    "CrossedError",
    "NotAutomorphism",
    "NotUnit",
    "Condition1Fails",
    "Condition2Fails",
    "NotApplicable",
    "IndexNotInvertible",
    "AlphaNotScalar",
    "RootNotFound",
    "NotClosed",
    "ActionNotFree",
    "ParameterSet",
    "CrossedProduct",
    "TensorSpace",
    "SeparabilityElement",
    "NormalizationData",
    "validate_parameter_set",
    "apply_equivalence",
    "normalize_convention",
    "extend_action",
    "build_crossed_product",
    "restrict_to_subgroup",
    "trivial_representation",
    "fixed_subalgebra",
    "fixed_points",
    "annihilator_of_ideal",
    "hom_fixed_points",
    "trace_matrix",
    "trace_map",
    "trace_image",
    "trivial_is_projective",
    "center_trace_criterion",
    "tensor_space",
    "canonical_separability_element",
    "check_separability_element",
    "find_separability_element",
    "cocycle_identities_check",
    "normalize_to_skew",
    "action_on_idempotents",
    "free_action_check",
    "faithful_action_check",
    "orbit_epsilon",
    "orbit_idempotent_isomorphism",
    "matrix_algebra_certificate",
    "fixed_algebra_free_module_check",
]


class CrossedError(ValueError):
    pass


class NotAutomorphism(CrossedError):
    def __init__(self, x: int, reason=None):
        self.witness = x
        self.reason = reason
        super().__init__(f"sigma[{x}] is not an algebra automorphism ({reason})")


class NotUnit(CrossedError):
    def __init__(self, *witness):
        self.witness = witness
        super().__init__(f"element at {witness} is not a unit")


class Condition1Fails(CrossedError):
    def __init__(self, x: int, y: int):
        self.witness = (x, y)
        super().__init__(f"sigma_x sigma_y != iota(alpha(x, y)) sigma_xy at (x, y) = {(x, y)}")


class Condition2Fails(CrossedError):
    def __init__(self, x: int, y: int, z: int):
        self.witness = (x, y, z)
        super().__init__(f"cocycle condition fails at (x, y, z) = {(x, y, z)}")


class NotApplicable(CrossedError):
    pass


class IndexNotInvertible(CrossedError):
    pass


class AlphaNotScalar(CrossedError):
    def __init__(self, x: int, y: int):
        self.witness = (x, y)
        super().__init__(f"alpha{(x, y)} does not lie in the chosen central domain")


class RootNotFound(CrossedError):
    pass


class NotClosed(CrossedError):
    def __init__(self, x: int, i: int):
        self.witness = (x, i)
        super().__init__(f"sigma_{x}(e_{i}) is not in the idempotent set")


class ActionNotFree(CrossedError):
    def __init__(self, pairs):
        self.witness = pairs
        super().__init__(f"action is not free; fixed pairs {pairs}")


# -- parameter sets --------------------------------------------------------------


@dataclass
class ParameterSet:
    algebra: FDAlgebra
    group: FiniteGroup
    sigma: np.ndarray  # (n, d, d)
    alpha: np.ndarray  # (n, n, d)

    def __post_init__(self):
        F = self.algebra.field
        n, d = self.group.order, self.algebra.dim
        self.sigma = F.asarray(self.sigma)
        self.alpha = F.asarray(self.alpha)
        if self.sigma.shape != (n, d, d):
            raise CrossedError(f"sigma must have shape {(n, d, d)}, got {self.sigma.shape}")
        if self.alpha.shape != (n, n, d):
            raise CrossedError(f"alpha must have shape {(n, n, d)}, got {self.alpha.shape}")

    @classmethod
    def skew(cls, A: FDAlgebra, G: FiniteGroup, sigma) -> "ParameterSet":
        n = G.order
        alpha = np.stack([np.stack([A.one] * n)] * n)
        return cls(A, G, sigma, alpha)

    @classmethod
    def trivial(cls, A: FDAlgebra, G: FiniteGroup) -> "ParameterSet":
        return cls.skew(A, G, np.stack([A.field.eye(A.dim)] * G.order))

    @property
    def field(self) -> Field:
        return self.algebra.field

    def apply(self, x: int, a: np.ndarray) -> np.ndarray:
        """``sigma_x(a)``."""
        return self.field.matmul(self.sigma[x], self.algebra.vec(a).reshape(-1, 1)).reshape(-1)

    def is_skew(self) -> bool:
        return bool((self.alpha == self.algebra.one).all())

    def is_normalized(self) -> bool:
        e = self.group.identity
        one = self.algebra.one
        return bool((self.alpha[e, :] == one).all() and (self.alpha[:, e] == one).all() and np.array_equal(self.sigma[e], self.field.eye(self.algebra.dim)))

    def restrict(self, H: Subgroup) -> tuple["ParameterSet", list[int]]:
        K, incl = H.as_group()
        idx = np.array(incl)
        return ParameterSet(self.algebra, K, self.sigma[idx], self.alpha[np.ix_(idx, idx)]), incl

    def same_as(self, other: "ParameterSet") -> bool:
        return (
            self.algebra.same_as(other.algebra)
            and self.group == other.group
            and np.array_equal(self.sigma, other.sigma)
            and np.array_equal(self.alpha, other.alpha)
        )


def iota_matrix(A: FDAlgebra, u: np.ndarray, u_inv: np.ndarray | None = None) -> np.ndarray:
    """Matrix of ``a -> u a u^-1``."""
    u_inv = try_inverse(A, u) if u_inv is None else u_inv
    return A.field.matmul(A.left_matrix(u), A.right_matrix(u_inv))


@dataclass
class ParameterSetCertificate:
    group_order: int
    automorphisms_checked: int
    unit_pairs_checked: int
    condition1_pairs: int
    condition2_triples: int
    normalized: bool


def validate_parameter_set(ps: ParameterSet) -> ParameterSetCertificate:
    """Exhaustive check of automorphisms, units and the two compatibility conditions."""
    A, G, F = ps.algebra, ps.group, ps.field
    n, d = G.order, A.dim
    for x in range(n):
        w = automorphism_witness(A, ps.sigma[x])
        if w is not None:
            raise NotAutomorphism(x, w)
    inv = np.empty((n, n), dtype=object)
    for x in range(n):
        for y in range(n):
            try:
                inv[x, y] = try_inverse(A, ps.alpha[x, y])
            except NotInvertible:
                raise NotUnit(x, y) from None
    for x in range(n):
        for y in range(n):
            lhs = F.matmul(ps.sigma[x], ps.sigma[y])
            rhs = F.matmul(iota_matrix(A, ps.alpha[x, y], inv[x, y]), ps.sigma[G.mul(x, y)])
            if not np.array_equal(lhs, rhs):
                raise Condition1Fails(x, y)
    # alpha(x,y) alpha(xy,z) == sigma_x(alpha(y,z)) alpha(x,yz)
    for x in range(n):
        # sigma_x(alpha(y, z)) for all y, z at once
        sx_alpha = F.matmul(ps.alpha.reshape(n * n, d), ps.sigma[x].T).reshape(n, n, d)
        for y in range(n):
            xy = G.mul(x, y)
            La = A.left_matrix(ps.alpha[x, y])
            for z in range(n):
                lhs = F.matmul(La, ps.alpha[xy, z].reshape(-1, 1)).reshape(-1)
                rhs = A.mul(sx_alpha[y, z], ps.alpha[x, G.mul(y, z)])
                if not np.array_equal(lhs, rhs):
                    raise Condition2Fails(x, y, z)
    return ParameterSetCertificate(n, n, n * n, n * n, n**3, ps.is_normalized())


def apply_equivalence(ps: ParameterSet, units: Sequence, *, validate: bool = True) -> ParameterSet:
    """Change of basis ``sigma_x -> u_x sigma_x``.

    ``sigma'_x = iota(u_x) o sigma_x`` and
    ``alpha'(x, y) = u_x sigma_x(u_y) alpha(x, y) u_xy^-1``.
    """
    A, G, F = ps.algebra, ps.group, ps.field
    n = G.order
    us = [A.vec(u) for u in units]
    if len(us) != n:
        raise CrossedError("need one unit per group element")
    invs = []
    for x, u in enumerate(us):
        try:
            invs.append(try_inverse(A, u))
        except NotInvertible:
            raise NotUnit(x) from None
    sigma = np.stack([F.matmul(iota_matrix(A, us[x], invs[x]), ps.sigma[x]) for x in range(n)])
    alpha = F.zeros((n, n, A.dim))
    for x in range(n):
        for y in range(n):
            alpha[x, y] = A.mul_many(us[x], ps.apply(x, us[y]), ps.alpha[x, y], invs[G.mul(x, y)])
    out = ParameterSet(A, G, sigma, alpha)
    if validate:
        validate_parameter_set(out)
    return out


def normalize_convention(ps: ParameterSet) -> ParameterSet:
    """Equivalent parameter set with ``alpha(1, y) = alpha(x, 1) = 1`` and ``sigma_1 = id``.

    Uses ``u_1 = alpha(1, 1)^-1`` and ``u_x = 1`` otherwise; validity gives
    ``sigma_1 = iota(alpha(1, 1))`` and ``alpha(1, y) = alpha(1, 1)``,
    ``alpha(x, 1) = sigma_x(alpha(1, 1))``, which the change cancels.
    """
    if ps.is_normalized():
        return ps
    A, G = ps.algebra, ps.group
    units = [A.one.copy() for _ in range(G.order)]
    units[G.identity] = try_inverse(A, ps.alpha[G.identity, G.identity])
    out = apply_equivalence(ps, units)
    if not out.is_normalized():  # pragma: no cover - follows from validity
        raise CrossedError("normalization failed")
    return out


def extend_action(A: FDAlgebra, G: FiniteGroup, images: dict) -> np.ndarray:
    """Extend automorphisms given on generators to a homomorphism ``G -> Aut(A)``."""
    F = A.field
    n = G.order
    sigma: list = [None] * n
    sigma[G.identity] = F.eye(A.dim)
    gens = {int(g): F.asarray(m) for g, m in images.items()}
    frontier = [G.identity]
    while frontier:
        x = frontier.pop(0)
        for g, M in gens.items():
            y = G.mul(x, g)
            img = F.matmul(sigma[x], M)
            if sigma[y] is None:
                sigma[y] = img
                frontier.append(y)
            elif not np.array_equal(sigma[y], img):
                raise CrossedError(f"generator images do not define a group action (conflict at {y})")
    if any(s is None for s in sigma):
        raise CrossedError("the given generators do not generate the group")
    return np.stack(sigma)


# -- the crossed product -------------------------------------------------------------


@dataclass
class CrossedProduct:
    ps: ParameterSet
    algebra: FDAlgebra
    inclusion: np.ndarray | None = None  # into a parent crossed product, when restricted
    group_elements: list[int] | None = None  # parent indices of this group's elements

    @property
    def base(self) -> FDAlgebra:
        return self.ps.algebra

    @property
    def group(self) -> FiniteGroup:
        return self.ps.group

    @property
    def d(self) -> int:
        return self.ps.algebra.dim

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def index(self, i: int, x: int) -> int:
        return x * self.d + i

    def element(self, a, x: int) -> np.ndarray:
        """Coordinates of ``a sigma_x``."""
        v = self.algebra.field.zeros(self.dim)
        v[x * self.d : (x + 1) * self.d] = self.base.vec(a)
        return v

    def sigma(self, x: int) -> np.ndarray:
        return self.element(self.base.one, x)

    def component(self, v: np.ndarray, x: int) -> np.ndarray:
        return v[x * self.d : (x + 1) * self.d].copy()

    def base_embedding(self) -> np.ndarray:
        """Columns: ``b_i sigma_1`` (the degree-one copy of ``A``); needs the normalized convention."""
        F = self.algebra.field
        E = F.zeros((self.dim, self.d))
        e = self.group.identity
        E[e * self.d : (e + 1) * self.d, :] = F.eye(self.d)
        return E

    def degree_one_projection(self) -> np.ndarray:
        """The ``A``-bimodule projection onto the degree-one component (shape d x dim)."""
        return self.base_embedding().T.copy()


def _crossed_table(ps: ParameterSet) -> np.ndarray:
    A, G, F = ps.algebra, ps.group, ps.field
    n, d = G.order, A.dim
    c = A.table
    table = F.zeros((n * d, n * d, n * d))
    for x in range(n):
        # T[i, j, :] = b_i sigma_x(b_j)
        T = F.matmul(np.transpose(c, (0, 2, 1)).reshape(d * d, d), ps.sigma[x]).reshape(d, d, d)
        T = np.transpose(T, (0, 2, 1))
        for y in range(n):
            xy = G.mul(x, y)
            Ra = A.right_matrix(ps.alpha[x, y])
            block = F.matmul(T.reshape(d * d, d), Ra.T).reshape(d, d, d)
            table[x * d : (x + 1) * d, y * d : (y + 1) * d, xy * d : (xy + 1) * d] = block
    return table


def build_crossed_product(ps: ParameterSet, *, validate: bool = True, check: bool = True) -> CrossedProduct:
    """Assemble the structure constants; ``check`` runs the full associativity scan.

    The identity is ``alpha(1, 1)^-1 sigma_1`` which is ``1 sigma_1`` under
    the normalized convention.
    """
    if validate:
        validate_parameter_set(ps)
    A, G, F = ps.algebra, ps.group, ps.field
    d = A.dim
    table = _crossed_table(ps)
    e = G.identity
    try:
        unit_coeff = try_inverse(A, ps.alpha[e, e])
    except NotInvertible:
        unit_coeff = A.one
    one = F.zeros(d * G.order)
    one[e * d : (e + 1) * d] = unit_coeff
    gens = []
    idem = None
    if ps.is_normalized():
        base_gens = A.generators()
        for g in base_gens:
            v = F.zeros(d * G.order)
            v[e * d : (e + 1) * d] = g
            gens.append(v)
        for x in range(G.order):
            if x != e:
                v = F.zeros(d * G.order)
                v[x * d : (x + 1) * d] = A.one
                gens.append(v)
        if A._idempotent_hint is not None:
            idem = []
            for h in A._idempotent_hint:
                v = F.zeros(d * G.order)
                v[e * d : (e + 1) * d] = h
                idem.append(v)
    B = FDAlgebra(F, table, one, check=check, name="crossed product", generators=gens or None, idempotents=idem)
    return CrossedProduct(ps, B)


def restrict_to_subgroup(cp: CrossedProduct, H: Subgroup) -> CrossedProduct:
    """``A^sigma_alpha H`` with its inclusion matrix into ``cp``."""
    ps_h, incl = cp.ps.restrict(H)
    sub = build_crossed_product(ps_h, validate=False, check=False)
    F = cp.algebra.field
    d = cp.d
    inc = F.zeros((cp.dim, sub.dim))
    for k, x in enumerate(incl):
        inc[x * d : (x + 1) * d, k * d : (k + 1) * d] = F.eye(d)
    # the inclusion must be multiplicative: the subalgebra is closed in cp
    lhs = cp.algebra.products(inc, inc)
    rhs = F.matmul(inc, sub.algebra.table.reshape(sub.dim * sub.dim, sub.dim).T)
    if not np.array_equal(lhs, rhs):  # pragma: no cover - follows from the formula
        raise CrossedError("restriction is not a subalgebra")
    sub.inclusion = inc
    sub.group_elements = incl
    return sub


# -- trivial representation and fixed points ------------------------------------------


@dataclass
class TrivialRepresentation:
    module: FDModule
    ideal: Subspace  # the left ideal generated by sigma_x - 1
    projection: np.ndarray
    closure_verified: bool


def trivial_representation(cp: CrossedProduct) -> TrivialRepresentation:
    """``CP / J`` with ``J`` the left ideal generated by ``sigma_x - 1`` (x != 1)."""
    B, F = cp.algebra, cp.algebra.field
    G = cp.group
    gens = [F.reduce(cp.sigma(x) - B.one) for x in range(G.order) if x != G.identity]
    span = EchelonBasis(F, B.dim)
    queue = []
    for g in gens:
        if span.add(g):
            queue.append(g)
    # closure under left multiplication by algebra generators
    mult = B.generators()
    while queue:
        v = queue.pop()
        for s in mult:
            w = B.mul(s, v)
            if span.add(w):
                queue.append(w)
    J = span.subspace()
    closed = all(J.contains_all(F.matmul(B.left_matrix(B.basis_vector(i)), J.basis)) for i in range(B.dim)) if J.dim else True
    q = quotient_module(regular_module(B), J, name="trivial")
    return TrivialRepresentation(q.module, J, q.projection, closed)


def fixed_subalgebra(A: FDAlgebra, sigma: np.ndarray, elements: Sequence[int]) -> Subspace:
    """``A^H``: common fixed vectors of ``sigma[x]`` for ``x`` in ``elements``."""
    F = A.field
    rows = [F.reduce(sigma[x] - F.eye(A.dim)) for x in elements]
    if not rows:
        return Subspace.whole(F, A.dim)
    return Subspace.kernel(F, np.concatenate(rows, axis=0))


def fixed_points(cp: CrossedProduct, M: FDModule, elements: Sequence[int] | None = None) -> Subspace:
    """Vectors of a ``cp``-module fixed by every ``sigma_x``."""
    F = M.field
    els = range(cp.group.order) if elements is None else elements
    if M.dim == 0:
        return Subspace.zero(F, 0)
    rows = [F.reduce(M.act(cp.sigma(x)) - F.eye(M.dim)) for x in els]
    return Subspace.kernel(F, np.concatenate(rows, axis=0))


def annihilator_of_ideal(M: FDModule, J: Subspace) -> Subspace:
    """``{v : J v = 0}``."""
    F = M.field
    if M.dim == 0:
        return Subspace.zero(F, 0)
    if J.dim == 0:
        return Subspace.whole(F, M.dim)
    return Subspace.kernel(F, np.concatenate([M.act(r) for r in J.rows], axis=0))


@dataclass
class HomFixedReport:
    dim_hom_cp: int
    dim_hom_base_fixed: int

    @property
    def ok(self) -> bool:
        return self.dim_hom_cp == self.dim_hom_base_fixed


def hom_fixed_points(cp: CrossedProduct, M: FDModule, N: FDModule) -> HomFixedReport:
    """Compare ``dim Hom_CP(M, N)`` with ``dim Hom_A(M, N)^G`` (G acting by conjugation)."""
    F = M.field
    E = cp.base_embedding()
    MA = restrict_module(M, cp.base, E)
    NA = restrict_module(N, cp.base, E)
    H = hom_space(MA, NA)
    h = H.shape[0]
    big = hom_space(M, N).shape[0]
    if h == 0:
        return HomFixedReport(big, 0)
    m, n = M.dim, N.dim
    Hb = H.reshape(h, n * m).T  # columns
    W = Subspace.column_space(F, Hb)
    conds = []
    for x in range(cp.group.order):
        sM = M.act(cp.sigma(x))
        sN = N.act(cp.sigma(x))
        sM_inv = _matrix_inverse(sM, F)
        imgs = np.stack([F.matmul(F.matmul(sN, H[k]), sM_inv).reshape(-1) for k in range(h)], axis=1)
        conds.append(F.reduce(W.coordinate_matrix(imgs) - W.coordinate_matrix(Hb)))
    ker = Subspace.kernel(F, np.concatenate(conds, axis=0))
    return HomFixedReport(big, ker.dim)


def _matrix_inverse(M: np.ndarray, F: Field) -> np.ndarray:
    n = M.shape[0]
    cols = [solve(M, F.eye(n)[:, i], F) for i in range(n)]
    return np.stack(cols, axis=1) if cols else F.zeros((0, 0))


# -- trace maps --------------------------------------------------------------------


def trace_matrix(A: FDAlgebra, sigma: np.ndarray, elements: Sequence[int]) -> np.ndarray:
    F = A.field
    T = F.zeros((A.dim, A.dim))
    for x in elements:
        T = F.reduce(T + sigma[x])
    return T


def trace_map(A: FDAlgebra, sigma: np.ndarray, elements: Sequence[int], a) -> np.ndarray:
    """``sum_{x in H} sigma_x(a)``."""
    return A.field.matmul(trace_matrix(A, sigma, elements), A.vec(a).reshape(-1, 1)).reshape(-1)


def trace_image(A: FDAlgebra, sigma: np.ndarray, elements: Sequence[int]) -> Subspace:
    return Subspace.column_space(A.field, trace_matrix(A, sigma, elements))


@dataclass
class TraceCertificate:
    projective: bool
    element: np.ndarray | None  # a with trace(a) = 1, when projective


def trivial_is_projective(cp: CrossedProduct) -> TraceCertificate:
    """Skew group rings only: the trivial module is projective iff some ``a`` has trace 1."""
    if not cp.ps.is_skew():
        raise NotApplicable("alpha is not identically 1; use the projective dimension of the trivial module")
    A = cp.base
    T = trace_matrix(A, cp.ps.sigma, range(cp.group.order))
    try:
        a = solve(T, A.one, A.field)
    except NoSolution:
        return TraceCertificate(False, None)
    return TraceCertificate(True, a)


@dataclass
class CenterTraceReport:
    separable: bool
    element: np.ndarray | None  # central c with trace(c) = 1
    center_trace_image: Subspace


def center_trace_criterion(A: FDAlgebra, sigma: np.ndarray, elements: Sequence[int]) -> CenterTraceReport:
    """Skew group ring separable over ``A`` iff some central ``c`` has trace 1."""
    F = A.field
    Z = center(A).basis
    T = trace_matrix(A, sigma, elements)
    TZ = F.matmul(T, Z)
    img = Subspace.column_space(F, TZ) if Z.shape[1] else Subspace.zero(F, A.dim)
    try:
        y = solve(TZ, A.one, F)
    except NoSolution:
        return CenterTraceReport(False, None, img)
    return CenterTraceReport(True, F.matmul(Z, y.reshape(-1, 1)).reshape(-1), img)


# -- separability -----------------------------------------------------------------------


@dataclass
class TensorSpace:
    """``R (x)_S R`` as ``R (x)_k R`` (index ``a * dim R + b``) modulo balancing."""

    R: FDAlgebra
    embedding: np.ndarray  # columns: images in R of the basis of S
    balancing: Subspace

    @property
    def r(self) -> int:
        return self.R.dim

    @property
    def dim(self) -> int:
        return self.r * self.r - self.balancing.dim

    def coordinates(self, C: np.ndarray) -> np.ndarray:
        """Normal form of a coefficient matrix modulo balancing (a canonical vector)."""
        return self.balancing.reduce(self.R.field.asarray(C).reshape(-1))

    def left(self, a: np.ndarray, C: np.ndarray) -> np.ndarray:
        return self.R.field.matmul(self.R.left_matrix(a), C)

    def right(self, C: np.ndarray, a: np.ndarray) -> np.ndarray:
        return self.R.field.matmul(C, self.R.right_matrix(a).T)

    def multiply_out(self, C: np.ndarray) -> np.ndarray:
        """``sum C[a, b] r_a r_b``."""
        r = self.r
        return self.R.field.matmul(C.reshape(1, r * r), self.R.table.reshape(r * r, r)).reshape(-1)


def tensor_space(R: FDAlgebra, embedding: np.ndarray, s_generators: Sequence[np.ndarray]) -> TensorSpace:
    """Balancing relations ``r s (x) r' - r (x) s r'`` for algebra generators ``s`` of ``S`` suffice."""
    F = R.field
    r = R.dim
    cols = []
    E = F.asarray(embedding)
    for g in s_generators:
        s = F.matmul(E, F.asarray(g).reshape(-1, 1)).reshape(-1)
        # (R_s (x) I - I (x) L_s) acting on vec(C), row-major
        cols.append(F.reduce(np.kron(R.right_matrix(s), F.eye(r)) - np.kron(F.eye(r), R.left_matrix(s))))
    B = Subspace.column_space(F, np.concatenate(cols, axis=1)) if cols else Subspace.zero(F, r * r)
    return TensorSpace(R, E, B)


@dataclass
class SeparabilityElement:
    space: TensorSpace
    matrix: np.ndarray  # coefficient matrix C, zeta = sum C[a,b] r_a (x) r_b
    representatives: list[int] = dc_field(default_factory=list)

    @property
    def coordinates(self) -> np.ndarray:
        return self.space.coordinates(self.matrix)


def check_separability_element(space: TensorSpace, C: np.ndarray):
    """``(True, None)`` or ``(False, witness)``; witness ``("commute", i)`` or ``("unit", None)``."""
    R, F = space.R, space.R.field
    C = F.asarray(C)
    for i in range(R.dim):
        b = R.basis_vector(i)
        diff = F.reduce(space.left(b, C) - space.right(C, b))
        if not space.balancing.contains(diff.reshape(-1)):
            return False, ("commute", i)
    if not np.array_equal(space.multiply_out(C), R.one):
        return False, ("unit", None)
    return True, None


def find_separability_element(space: TensorSpace) -> np.ndarray | None:
    """Decide separability exactly: a solution ``C`` of the linear conditions, or None."""
    R, F = space.R, space.R.field
    r = R.dim
    B = space.balancing
    keep = B.complement_indices()
    proj = B.reduce_columns(F.eye(r * r))[keep, :]
    rows = []
    rhs = []
    for g in R.generators():
        op = F.reduce(np.kron(R.left_matrix(g), F.eye(r)) - np.kron(F.eye(r), R.right_matrix(g)))
        rows.append(F.matmul(proj, op))
        rhs.append(F.zeros(len(keep)))
    rows.append(R.table.reshape(r * r, r).T)
    rhs.append(R.one)
    try:
        c = solve(np.concatenate(rows, axis=0), np.concatenate(rhs), F)
    except NoSolution:
        return None
    return c.reshape(r, r)


def canonical_separability_element(
    cp: CrossedProduct,
    sub: CrossedProduct,
    *,
    representatives: str = "least",
    displayed_variant: bool = False,
) -> SeparabilityElement:
    """``|G:H|^-1 sum_{x in G/H} alpha(x, x^-1)^-1 sigma_x (x) sigma_x^-1`` over left cosets.

    ``sub`` is the restriction to ``H`` (from :func:`restrict_to_subgroup`).
    ``representatives`` picks the least or greatest index in each coset.
    ``displayed_variant`` uses ``alpha(x, x^-1)`` instead of its inverse.
    """
    G = cp.group
    F = cp.algebra.field
    A = cp.base
    if not cp.ps.is_normalized():
        raise CrossedError("parameter set must follow the normalized convention")
    Hsub = Subgroup(G, tuple(sorted(sub.group_elements)))
    index = G.order // Hsub.order
    if F.p and index % F.p == 0:
        raise IndexNotInvertible(f"|G:H| = {index} is zero in characteristic {F.p}")
    reps = left_cosets(G, Hsub)
    if representatives == "greatest":
        reps = [max(G.mul(x, h) for h in Hsub.elements) for x in reps]
    elif representatives != "least":
        raise ValueError("representatives must be 'least' or 'greatest'")
    C = F.zeros((cp.dim, cp.dim))
    for x in reps:
        xi = G.inv(x)
        coeff = A.vec(cp.ps.alpha[x, xi]) if displayed_variant else try_inverse(A, cp.ps.alpha[x, xi])
        left = cp.element(coeff, x)
        right = cp.sigma(xi)
        C = F.reduce(C + np.outer(left, right))
    C = F.reduce(C * F.inv(index))
    space = tensor_space(cp.algebra, sub.inclusion, sub.algebra.generators())
    return SeparabilityElement(space, C, reps)


# -- cocycle identities -------------------------------------------------------------------


@dataclass
class IdentityReport:
    pairs: int
    failures: dict  # identity name -> number of failing pairs
    witnesses: dict  # identity name -> first failing (x, y)
    central_checked: bool  # whether the h_x identity applied (alpha central on the subgroup)

    @property
    def discrepancies(self) -> int:
        return sum(self.failures.values())

    @property
    def ok(self) -> bool:
        return self.discrepancies == 0


def _h_values(ps: ParameterSet, elements: Sequence[int]) -> dict:
    A = ps.algebra
    h = {}
    for x in elements:
        v = A.one.copy()
        for y in elements:
            v = A.mul(v, ps.alpha[x, y])
        h[x] = v
    return h


def _alpha_central(ps: ParameterSet, elements: Sequence[int]) -> bool:
    Z = center(ps.algebra)
    return all(Z.contains(ps.alpha[x, y]) for x in elements for y in elements)


def cocycle_identities_check(ps: ParameterSet, elements: Sequence[int] | None = None) -> IdentityReport:
    """Evaluate the four inverse-cocycle identities on every pair of the subgroup.

    With ``x' = x^-1``:

    * ``a(x,x')^-1 s_x(a(x',y')) a(y',yx)^-1 = s_y'(a(yx, x'y'))^-1``
    * ``a(xy,y'x')^-1 s_xy(a(y',x'))^-1 a(xy,y') = a(x,x')^-1``
    * ``a(y',yx) a(x,x'y') = s_y'(a(yx,x'y'))``
    * ``s_xy(a(y',x')) a(xy,y'x') = a(xy,y') a(x,x')``

    and, when alpha is central on the subgroup, ``a(x,y)^|S| h_xy = s_x(h_y) h_x``
    with ``h_x = prod_y a(x, y)``.  The four identities presuppose the
    normalized convention (``alpha(1, 1) = 1``); apply :func:`normalize_convention` first.
    """
    if not ps.is_normalized():
        raise NotApplicable("the identities need the normalized convention; use normalize_convention")
    A, G = ps.algebra, ps.group
    els = list(range(G.order)) if elements is None else list(elements)
    mul, inv = G.mul, G.inv
    al = ps.alpha
    cache: dict = {}

    def ainv(x, y):
        if (x, y) not in cache:
            cache[(x, y)] = try_inverse(A, al[x, y])
        return cache[(x, y)]

    def s(x, v):
        return ps.apply(x, v)

    names = ["inverse-triple", "inverse-pair", "product-triple", "product-pair", "h-power"]
    failures = {k: 0 for k in names}
    witnesses: dict = {}
    central = _alpha_central(ps, els)
    h = _h_values(ps, els) if central else {}
    order = len(els)
    for x in els:
        xi = inv(x)
        for y in els:
            yi = inv(y)
            yx, xy = mul(y, x), mul(x, y)
            xiyi = mul(xi, yi)  # (yx)^-1
            yixi = mul(yi, xi)  # (xy)^-1
            checks = {
                "inverse-triple": (
                    A.mul_many(ainv(x, xi), s(x, al[xi, yi]), ainv(yi, yx)),
                    try_inverse(A, s(yi, al[yx, xiyi])),
                ),
                "inverse-pair": (
                    A.mul_many(ainv(xy, yixi), try_inverse(A, s(xy, al[yi, xi])), al[xy, yi]),
                    ainv(x, xi),
                ),
                "product-triple": (A.mul(al[yi, yx], al[x, xiyi]), s(yi, al[yx, xiyi])),
                "product-pair": (A.mul(s(xy, al[yi, xi]), al[xy, yixi]), A.mul(al[xy, yi], al[x, xi])),
            }
            if central:
                checks["h-power"] = (A.mul(A.power(al[x, y], order), h[xy]), A.mul(s(x, h[y]), h[x]))
            for name, (lhs, rhs) in checks.items():
                if not np.array_equal(lhs, rhs):
                    failures[name] += 1
                    witnesses.setdefault(name, (x, y))
    return IdentityReport(len(els) ** 2, failures, witnesses, central)


# -- normalization to a skew group ring ----------------------------------------------------


@dataclass
class NormalizationData:
    h: dict  # x -> h_x
    u: dict  # x -> u_x (the |S|-th root of h_x)
    result: ParameterSet  # equivalent skew parameter set on S
    source: ParameterSet  # the input restricted to S
    elements: list[int]
    domain_order: int
    roots_verified: bool
    fixed_verified: bool
    h_identity_verified: bool


def _domain_data(A: FDAlgebra, domain: Subspace | None):
    F = A.field
    if domain is None:
        D = Subspace.span(F, A.dim, [A.one])
    else:
        D = domain
    if not D.contains(A.one):
        raise CrossedError("domain must contain the identity")
    prods = A.products(D.basis, D.basis)
    if not D.contains_all(prods):
        raise CrossedError("domain is not closed under multiplication")
    Z = center(A)
    if not D.is_subspace_of(Z):
        raise CrossedError("domain is not central")
    return D


def normalize_to_skew(ps: ParameterSet, S: Subgroup, domain: Subspace | None = None) -> NormalizationData:
    """Equivalent skew parameter set on a p-subgroup ``S`` when alpha takes values in a central field ``D``.

    ``h_x = prod_{y in S} alpha(x, y)``; ``u_x`` is its unique ``|S|``-th root in
    ``D`` (``|D| = p^e``, ``|S| = p^m``: ``u = h^(p^(e j - m))`` for the least
    ``j`` with ``e j >= m``); the change of basis uses ``u_x^-1``.
    """
    A, F = ps.algebra, ps.field
    p = F.p
    if not p:
        raise RootNotFound("roots by inverse Frobenius need a finite field")
    els = list(S.elements)
    n_s = len(els)
    m = 0
    while p**m < n_s:
        m += 1
    if p**m != n_s:
        raise CrossedError("S is not a p-group")
    D = _domain_data(A, domain)
    for x in els:
        if not np.array_equal(A.vec(ps.apply(x, D.basis[:, 0])), D.basis[:, 0]) or not all(
            np.array_equal(ps.apply(x, D.basis[:, k]), D.basis[:, k]) for k in range(D.dim)
        ):
            raise CrossedError(f"domain is not fixed by sigma_{x}")
    for x in els:
        for y in els:
            if not D.contains(ps.alpha[x, y]):
                raise AlphaNotScalar(x, y)
    sub, incl = ps.restrict(S)
    pos = {x: k for k, x in enumerate(incl)}
    e = D.dim
    j = 0
    while e * j < m:
        j += 1
    exponent = p ** (e * j - m)
    h = _h_values(ps, els)
    u = {x: A.power(h[x], exponent) for x in els}
    roots_ok = all(np.array_equal(A.power(u[x], n_s), h[x]) for x in els)
    if not roots_ok:
        raise RootNotFound("inverse Frobenius root check failed")
    fixed_ok = all(np.array_equal(ps.apply(y, u[x]), u[x]) for x in els for y in els)
    ident = cocycle_identities_check(normalize_convention(ps), els)
    h_ok = ident.central_checked and ident.failures["h-power"] == 0
    units = [try_inverse(A, u[x]) for x in incl]
    out = apply_equivalence(sub, units)
    if not out.is_skew():
        bad = next((a, b) for a in range(len(incl)) for b in range(len(incl)) if not np.array_equal(out.alpha[a, b], A.one))
        raise CrossedError(f"normalized alpha is not identically 1 at {bad}")
    return NormalizationData(
        {pos[x]: h[x] for x in els},
        {pos[x]: u[x] for x in els},
        out,
        sub,
        els,
        p**e,
        roots_ok,
        fixed_ok,
        h_ok,
    )


def basis_change_matrix(cp: CrossedProduct, units: Sequence) -> np.ndarray:
    """Columns: coordinates of ``b_i u_x sigma_x`` in the basis ``b_i sigma_x``."""
    A, F = cp.base, cp.algebra.field
    d = cp.d
    T = F.zeros((cp.dim, cp.dim))
    for x, u in enumerate(units):
        Ru = A.right_matrix(A.vec(u))
        T[x * d : (x + 1) * d, x * d : (x + 1) * d] = Ru
    return T


def structure_constants_match(old: CrossedProduct, new: CrossedProduct, T: np.ndarray) -> bool:
    """Whether ``T`` carries the structure constants of ``new`` onto those of ``old`` exactly."""
    F = old.algebra.field
    n = old.dim
    lhs = old.algebra.products(T, T)  # column a*n+b = T_a T_b in old coordinates
    rhs = F.matmul(T, new.algebra.table.reshape(n * n, n).T)
    return bool(np.array_equal(lhs, rhs))


# -- idempotents under the action -------------------------------------------------------------


def action_on_idempotents(sigma: np.ndarray, elements: Sequence[int], E: Sequence[np.ndarray], field: Field) -> dict:
    """``perm[x][i] = j`` with ``sigma_x(e_i) = e_j``; raises :class:`NotClosed`."""
    keys = {tuple(int(v) if field.p else v for v in e): j for j, e in enumerate(E)}
    perm = {}
    for x in elements:
        row = []
        for i, e in enumerate(E):
            img = field.matmul(sigma[x], e.reshape(-1, 1)).reshape(-1)
            k = keys.get(tuple(int(v) if field.p else v for v in img))
            if k is None:
                raise NotClosed(x, i)
            row.append(k)
        perm[x] = row
    return perm


@dataclass
class FreeActionReport:
    free: bool
    fixed_pairs: list[tuple[int, int]]


def free_action_check(perm: dict, identity: int) -> FreeActionReport:
    pairs = [(x, i) for x, row in sorted(perm.items()) if x != identity for i, j in enumerate(row) if i == j]
    return FreeActionReport(not pairs, pairs)


@dataclass
class FaithfulReport:
    faithful: bool
    kernel: list[int]


def faithful_action_check(sigma: np.ndarray, elements: Sequence[int], identity: int, field: Field) -> FaithfulReport:
    eye = field.eye(sigma.shape[1])
    ker = [x for x in elements if np.array_equal(sigma[x], eye)]
    return FaithfulReport(ker == [identity], ker)


def orbit_epsilon(perm: dict, E: Sequence[np.ndarray], field: Field) -> tuple[np.ndarray, list[int]]:
    """Sum of the least-index member of each orbit, and those indices."""
    seen: set = set()
    reps = []
    for i in range(len(E)):
        if i in seen:
            continue
        reps.append(i)
        seen.update(row[i] for row in perm.values())
        seen.add(i)
    eps = field.zeros(len(E[0]))
    for i in reps:
        eps = field.reduce(eps + E[i])
    return eps, reps


@dataclass
class OrbitIsomorphism:
    mu: np.ndarray
    nu: np.ndarray
    mu_nu_ok: bool
    nu_mu_ok: bool

    @property
    def ok(self) -> bool:
        return self.mu_nu_ok and self.nu_mu_ok


def orbit_idempotent_isomorphism(cp: CrossedProduct, e: np.ndarray, x: int) -> OrbitIsomorphism:
    """``mu = sigma_x(e) sigma_x``, ``nu = alpha(x^-1, x)^-1 sigma_x^-1``: ``mu nu = sigma_x(e)``, ``nu mu = e``."""
    A, B, G = cp.base, cp.algebra, cp.group
    xi = G.inv(x)
    se = cp.ps.apply(x, e)
    mu = cp.element(se, x)
    nu = cp.element(try_inverse(A, cp.ps.alpha[xi, x]), xi)
    e_cp = cp.element(e, G.identity)
    se_cp = cp.element(se, G.identity)
    return OrbitIsomorphism(mu, nu, bool(np.array_equal(B.mul(mu, nu), se_cp)), bool(np.array_equal(B.mul(nu, mu), e_cp)))


@dataclass
class MatrixAlgebraReport:
    dim_cp: int
    order: int
    corner_dim: int
    dimension_ok: bool
    decomposition_ok: bool
    isomorphisms_ok: bool
    corner: Corner

    @property
    def ok(self) -> bool:
        return self.dimension_ok and self.decomposition_ok and self.isomorphisms_ok


def matrix_algebra_certificate(cp: CrossedProduct, E: Sequence[np.ndarray]) -> MatrixAlgebraReport:
    """Free action of the group on ``E``: ``CP`` is ``|S| x |S|`` matrices over ``eps CP eps``."""
    A, B, G, F = cp.base, cp.algebra, cp.group, cp.algebra.field
    els = list(range(G.order))
    perm = action_on_idempotents(cp.ps.sigma, els, E, A.field)
    fr = free_action_check(perm, G.identity)
    if not fr.free:
        raise ActionNotFree(fr.fixed_pairs)
    eps, _ = orbit_epsilon(perm, E, A.field)
    eps_cp = cp.element(eps, G.identity)
    corner = corner_algebra(B, eps_cp)
    n = G.order
    dim_ok = cp.dim == n * n * corner.algebra.dim
    # 1 = sum_x sigma_x(eps), orthogonal, and CP sigma_x(eps) ~ CP eps by right multiplication
    parts = [cp.element(cp.ps.apply(x, eps), G.identity) for x in els]
    total = F.reduce(sum(parts, F.zeros(B.dim)))
    decomp = np.array_equal(total, B.one) and all(
        not B.mul(parts[a], parts[b]).any() for a in range(n) for b in range(n) if a != b
    )
    base = Subspace.column_space(F, B.right_matrix(eps_cp))
    iso_ok = True
    for x in els:
        iso = orbit_idempotent_isomorphism(cp, eps, x)
        if not iso.ok:
            iso_ok = False
            break
        Wx = Subspace.column_space(F, B.right_matrix(parts[x]))
        to_base = F.matmul(B.right_matrix(iso.mu), Wx.basis)
        back = F.matmul(B.right_matrix(iso.nu), to_base)
        if Wx.dim != base.dim or not base.contains_all(to_base) or not np.array_equal(back, Wx.basis):
            iso_ok = False
            break
    return MatrixAlgebraReport(cp.dim, n, corner.algebra.dim, dim_ok, bool(decomp), iso_ok, corner)


@dataclass
class FreeModuleReport:
    fixed_dim: int
    left_ok: bool  # A sigma_x(eps) ~ A^S via phi, psi
    right_ok: bool  # sigma_x(eps) A ~ A^S
    trace_image_ok: bool  # A^S = trace image

    @property
    def ok(self) -> bool:
        return self.left_ok and self.right_ok and self.trace_image_ok


def fixed_algebra_free_module_check(ps: ParameterSet, E: Sequence[np.ndarray], x: int | None = None) -> FreeModuleReport:
    """``phi(a) = a sigma_x(eps)`` and ``psi(b) = sum_y sigma_y(b)`` are inverse bijections."""
    A, G, F = ps.algebra, ps.group, ps.field
    els = list(range(G.order))
    if not _alpha_central(ps, els):
        raise NotApplicable("alpha must be central on the group")
    perm = action_on_idempotents(ps.sigma, els, E, F)
    fr = free_action_check(perm, G.identity)
    if not fr.free:
        raise ActionNotFree(fr.fixed_pairs)
    eps, _ = orbit_epsilon(perm, E, F)
    x = G.identity if x is None else x
    f = ps.apply(x, eps)
    fixed = fixed_subalgebra(A, ps.sigma, els)
    T = trace_matrix(A, ps.sigma, els)
    results = []
    for side in ("left", "right"):
        mult = A.right_matrix(f) if side == "left" else A.left_matrix(f)
        W = Subspace.column_space(F, mult)  # A f  or  f A
        phi = F.matmul(mult, fixed.basis)  # A^S -> W
        psi_on_W = F.matmul(T, W.basis)  # W -> A
        ok = fixed.contains_all(psi_on_W) if W.dim else True
        ok = ok and np.array_equal(F.matmul(T, phi), fixed.basis)
        ok = ok and np.array_equal(F.matmul(mult, psi_on_W), W.basis)
        results.append(bool(ok))
    return FreeModuleReport(fixed.dim, results[0], results[1], trace_image(A, ps.sigma, els) == fixed)
