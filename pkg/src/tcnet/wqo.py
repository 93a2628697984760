"""Quasi-order combinators: pointwise vectors, products, sequence embedding, subset matching."""
from __future__ import annotations

from typing import Callable, Sequence

Leq = Callable[[object, object], bool]

__all__ = [
    "vec_leq",
    "equality",
    "product_leq",
    "embed_leq",
    "subset_leq",
    "subword_leq",
    "max_bipartite_matching",
]


def vec_leq(u: Sequence[int], v: Sequence[int]) -> bool:
    """Pointwise order on natural-number vectors of equal dimension."""
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} vs {len(v)}")
    return all(a <= b for a, b in zip(u, v))


def equality(a, b) -> bool:
    return a == b


def product_leq(leq_a: Leq, leq_b: Leq) -> Leq:
    """Componentwise product of two orders on pairs."""

    def leq(p, q) -> bool:
        return leq_a(p[0], q[0]) and leq_b(p[1], q[1])

    return leq


def embed_leq(base: Leq) -> Leq:
    """Higman embedding: ``s`` maps into ``t`` by a strictly increasing index map.

    Greedy earliest matching suffices: if any embedding exists, matching each
    ``s[i]`` to the first usable position never loses a solution.
    """

    def leq(s, t) -> bool:
        j = 0
        n = len(t)
        for a in s:
            while j < n and not base(a, t[j]):
                j += 1
            if j == n:
                return False
            j += 1
        return True

    return leq


def max_bipartite_matching(left: Sequence, right: Sequence, edge: Leq) -> int:
    """Size of a maximum matching between ``left`` and ``right`` (augmenting paths)."""
    adj = [[j for j, b in enumerate(right) if edge(a, b)] for a in left]
    owner = [-1] * len(right)

    def augment(i, seen) -> bool:
        for j in adj[i]:
            if j in seen:
                continue
            seen.add(j)
            if owner[j] == -1 or augment(owner[j], seen):
                owner[j] = i
                return True
        return False

    return sum(augment(i, set()) for i in range(len(left)))


def subset_leq(base: Leq) -> Leq:
    """Lift ``base`` to finite sets: an injective map sending each element to a larger one."""

    def leq(a1, a2) -> bool:
        left, right = list(a1), list(a2)
        if len(left) > len(right):
            return False
        return max_bipartite_matching(left, right, base) == len(left)

    return leq


_subword = embed_leq(equality)


def subword_leq(x: Sequence, y: Sequence) -> bool:
    """Scattered-subword order on finite words."""
    return _subword(x, y)
