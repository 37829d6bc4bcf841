"""Finite groups given by Cayley tables.

Elements are indices ``0..n-1``; ``table[i][j]`` is the index of
``g_i g_j``.  Every search here is exhaustive, so orders are capped.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "GroupError",
    "NotAssociative",
    "NoIdentity",
    "NoInverse",
    "OrderTooLarge",
    "FiniteGroup",
    "Subgroup",
    "validate_group",
    "cyclic_group",
    "symmetric_group",
    "direct_product",
    "sylow_subgroup",
    "left_cosets",
]

MAX_ORDER = 64


class GroupError(ValueError):
    pass


class NotAssociative(GroupError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"table is not associative at {witness}")


class NoIdentity(GroupError):
    def __init__(self, witness=None):
        self.witness = witness
        super().__init__("table has no two-sided identity")


class NoInverse(GroupError):
    def __init__(self, witness: int):
        self.witness = witness
        super().__init__(f"element {witness} has no inverse")


class OrderTooLarge(GroupError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    table: np.ndarray
    identity: int
    names: tuple[str, ...] | None = None

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def __len__(self):
        return self.order

    def mul(self, x: int, y: int) -> int:
        return int(self.table[x, y])

    @cached_property
    def inverses(self) -> list[int]:
        return [int(np.nonzero(self.table[x] == self.identity)[0][0]) for x in range(self.order)]

    def inv(self, x: int) -> int:
        return self.inverses[x]

    def power(self, x: int, n: int) -> int:
        r = self.identity
        for _ in range(n):
            r = self.mul(r, x)
        return r

    def element_order(self, x: int) -> int:
        n, y = 1, x
        while y != self.identity:
            y = self.mul(y, x)
            n += 1
        return n

    def name(self, x: int) -> str:
        return self.names[x] if self.names else str(x)

    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(range(self.order)))

    def trivial(self) -> "Subgroup":
        return Subgroup(self, (self.identity,))

    def generated(self, gens) -> "Subgroup":
        elems = {self.identity}
        frontier = [self.identity]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.mul(x, g)
                if y not in elems:
                    elems.add(y)
                    frontier.append(y)
        return Subgroup(self, tuple(sorted(elems)))

    def subgroup(self, elements) -> "Subgroup":
        H = Subgroup(self, tuple(sorted(set(int(e) for e in elements))))
        H.check()
        return H

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.identity == other.identity and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.order, self.identity, self.table.tobytes()))


@dataclass(frozen=True)
class Subgroup:
    group: FiniteGroup
    elements: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.elements

    def check(self):
        G = self.group
        s = set(self.elements)
        if G.identity not in s:
            raise GroupError("subgroup misses the identity")
        for x in self.elements:
            if G.inv(x) not in s:
                raise GroupError(f"subgroup is not closed under inverses at {x}")
            for y in self.elements:
                if G.mul(x, y) not in s:
                    raise GroupError(f"subgroup is not closed under products at {(x, y)}")

    def as_group(self) -> tuple[FiniteGroup, list[int]]:
        """The subgroup as a group on indices ``0..|H|-1`` and the inclusion list."""
        pos = {x: k for k, x in enumerate(self.elements)}
        G = self.group
        t = np.array([[pos[G.mul(x, y)] for y in self.elements] for x in self.elements], dtype=np.int64)
        names = tuple(G.name(x) for x in self.elements) if G.names else None
        return FiniteGroup(t, pos[G.identity], names), list(self.elements)

    def is_p_group(self, p: int) -> bool:
        n = self.order
        while n % p == 0:
            n //= p
        return n == 1


def validate_group(table, names=None) -> FiniteGroup:
    """Verify a Cayley table exhaustively and return the group."""
    t = np.asarray(table, dtype=np.int64)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise GroupError("Cayley table must be a nonempty square grid")
    n = t.shape[0]
    if n > MAX_ORDER:
        raise OrderTooLarge(f"order {n} exceeds the cap {MAX_ORDER}")
    if t.min() < 0 or t.max() >= n:
        raise GroupError("table entries out of range")
    # associativity: t[t[x,y], z] == t[x, t[y,z]]
    left = t[t, :]  # left[x,y,z] = t[t[x,y], z]
    right = t[:, t]  # right[x,y,z] = t[x, t[y,z]]
    bad = np.argwhere(left != right)
    if len(bad):
        raise NotAssociative(tuple(int(v) for v in bad[0]))
    ar = np.arange(n)
    ids = [e for e in range(n) if np.array_equal(t[e], ar) and np.array_equal(t[:, e], ar)]
    if not ids:
        raise NoIdentity()
    e = ids[0]
    for x in range(n):
        if not ((t[x] == e).any() and (t[:, x] == e).any()):
            raise NoInverse(x)
    return FiniteGroup(t, e, tuple(names) if names else None)


def cyclic_group(n: int) -> FiniteGroup:
    t = (np.arange(n)[:, None] + np.arange(n)[None, :]) % n
    return validate_group(t, [f"g^{k}" if k > 1 else ("1" if k == 0 else "g") for k in range(n)])


def symmetric_group(n: int) -> FiniteGroup:
    """Permutations of ``0..n-1`` in lexicographic order; composition right to left."""
    perms = list(itertools.permutations(range(n)))
    pos = {p: k for k, p in enumerate(perms)}
    t = [[pos[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms]
    return validate_group(t, ["".join(str(v) for v in p) for p in perms])


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """Elements ``(g, h)`` at index ``g * |H| + h``."""
    n, m = G.order, H.order
    t = np.empty((n * m, n * m), dtype=np.int64)
    for a in range(n * m):
        for b in range(n * m):
            t[a, b] = G.mul(a // m, b // m) * m + H.mul(a % m, b % m)
    names = None
    if G.names and H.names:
        names = [f"({G.name(a // m)},{H.name(a % m)})" for a in range(n * m)]
    return validate_group(t, names)


def _p_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def sylow_subgroup(G: FiniteGroup, p: int) -> Subgroup:
    """The lexicographically least Sylow p-subgroup (as a sorted index tuple)."""
    if G.order > MAX_ORDER:
        raise OrderTooLarge(f"order {G.order} exceeds the cap {MAX_ORDER}")
    target = _p_part(G.order, p)
    if target == 1:
        return G.trivial()
    # grow a p-subgroup greedily; any maximal p-subgroup is Sylow
    H = G.trivial()
    while H.order < target:
        hs = set(H.elements)
        for x in range(G.order):
            if x in hs:
                continue
            K = G.generated(list(H.elements) + [x])
            if K.is_p_group(p):
                H = K
                break
        else:  # pragma: no cover - Sylow's theorem
            raise GroupError("failed to extend a p-subgroup")
    # all Sylow subgroups are conjugate; choose the least one
    best = H.elements
    for g in range(G.order):
        gi = G.inv(g)
        conj = tuple(sorted(G.mul(G.mul(g, h), gi) for h in H.elements))
        if conj < best:
            best = conj
    return Subgroup(G, best)


def left_cosets(G: FiniteGroup, H: Subgroup) -> list[int]:
    """Least-index representative of each left coset ``xH``, in increasing order."""
    seen = set()
    reps = []
    for x in range(G.order):
        if x in seen:
            continue
        reps.append(x)
        seen.update(G.mul(x, h) for h in H.elements)
    return reps


def coset_members(G: FiniteGroup, H: Subgroup, x: int) -> tuple[int, ...]:
    return tuple(sorted(G.mul(x, h) for h in H.elements))


def all_subgroups(G: FiniteGroup) -> list[Subgroup]:
    """Every subgroup, by brute force over generating pairs (fine below the cap)."""
    found = {}
    for x in range(G.order):
        for y in range(x, G.order):
            S = G.generated([x, y])
            found[S.elements] = S
    # subgroups needing more generators arise as joins
    changed = True
    while changed:
        changed = False
        for a in list(found.values()):
            for b in list(found.values()):
                S = G.generated(list(a.elements) + list(b.elements))
                if S.elements not in found:
                    found[S.elements] = S
                    changed = True
    return sorted(found.values(), key=lambda S: (S.order, S.elements))
