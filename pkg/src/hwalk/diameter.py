"""Exact Cayley-graph diameters and growth profiles |S^l|."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import log

import numpy as np

from .groups import GenSet, GroupTable, build_slq, mat_identity, subgroup_closure


@dataclass
class GrowthProfile:
    """Layer sizes |S^l| up to the diameter (or subgroup saturation)."""

    sizes: list[int]
    diameter: int
    generates: bool
    reached_order: int
    group_order: int

    def counting_lower_bound(self, genset_size: int) -> float:
        return log(self.group_order) / log(genset_size) if genset_size > 1 else float("inf")


def diameter(table: GroupTable, genset: GenSet) -> GrowthProfile:
    """BFS layers of right multiplication by S; exact diam(G,S) = min{l : S^l = G}.

    Requires 1 in S so the layers are nested.  A non-generating S is not an
    error: the profile then describes the generated subgroup, flagged via
    ``generates``.
    """
    if not genset.contains_identity or 0 not in genset.members:
        raise ValueError("diameter requires 1 in S")
    n = table.order
    perms = [table.right_perm(int(s)) for s in genset.members if s != 0]
    visited = np.zeros(n, dtype=bool)
    visited[0] = True
    frontier = np.array([0], dtype=np.int64)
    sizes = [1]
    l = 0
    while True:
        if sizes[-1] == n:
            break
        new_mask = np.zeros(n, dtype=bool)
        for perm in perms:
            new_mask[perm[frontier]] = True
        new_mask &= ~visited
        if not new_mask.any():
            break  # saturated inside a proper subgroup
        visited |= new_mask
        frontier = np.nonzero(new_mask)[0]
        sizes.append(int(visited.sum()))
        l += 1
    reached = sizes[-1]
    return GrowthProfile(
        sizes=sizes,
        diameter=l,
        generates=reached == n,
        reached_order=reached,
        group_order=n,
    )


def distances(table: GroupTable, genset: GenSet) -> np.ndarray:
    """Word length of every element over S (-1 if unreachable)."""
    if 0 not in genset.members:
        raise ValueError("distances requires 1 in S")
    n = table.order
    perms = [table.right_perm(int(s)) for s in genset.members if s != 0]
    dist = np.full(n, -1, dtype=np.int64)
    dist[0] = 0
    frontier = np.array([0], dtype=np.int64)
    l = 0
    while frontier.size:
        l += 1
        new_mask = np.zeros(n, dtype=bool)
        for perm in perms:
            new_mask[perm[frontier]] = True
        new_mask &= dist < 0
        dist[new_mask] = l
        frontier = np.nonzero(new_mask)[0]
    return dist


@dataclass
class PrimeSplitStep:
    modulus: int
    prime: int
    diam_level: int
    diam_previous: int
    diam_prime: int
    empirical_C: float


@dataclass
class PrimeSplitReport:
    steps: list[PrimeSplitStep] = field(default_factory=list)

    def max_C(self) -> float:
        return max((s.empirical_C for s in self.steps), default=0.0)


def _reduce_gens(gens, d, q):
    return [tuple(int(x) % q for x in g) for g in gens]


def prime_splitting_check(
    d: int, moduli, gen_matrices, cap=None, envelope: float = 6.0
) -> PrimeSplitReport:
    """Diameter recursion across a chain 1 = q_0 | q_1 | ... | q_n with prime ratios.

    For each step reports C_i = diam(q_i) / (diam(q_{i-1}) + diam(p_i)) where
    p_i = q_i/q_{i-1}; the level-0 diameter is 0 by convention.  ``envelope``
    is the generous desk-scale bound diam(q_i) <= envelope * denominator.
    """
    from sympy import isprime

    from .groups import DEFAULT_CAP

    moduli = list(moduli)
    if moduli[0] != 1:
        raise ValueError("chain must start at modulus 1")
    cap = cap or DEFAULT_CAP

    def diam_at(q: int) -> int:
        if q == 1:
            return 0
        table = build_slq(d, q, cap)
        idx = [table.index[g] for g in _reduce_gens(gen_matrices, d, q)]
        gs = GenSet.from_indices(table, idx, add_identity=True, symmetrize=True)
        sub, generates = subgroup_closure(table, gs)
        if not generates:
            raise ValueError(f"generators do not generate SL_{d}(Z/{q})")
        return diameter(table, gs).diameter

    cache: dict[int, int] = {1: 0}
    report = PrimeSplitReport()
    for prev, cur in zip(moduli, moduli[1:]):
        p = cur // prev
        if not isprime(p):
            raise ValueError(f"ratio {p} between {prev} and {cur} is not prime")
        for q in (prev, cur, p):
            if q not in cache:
                cache[q] = diam_at(q)
        denom = cache[prev] + cache[p]
        c = cache[cur] / denom if denom else 1.0
        report.steps.append(
            PrimeSplitStep(
                modulus=cur,
                prime=p,
                diam_level=cache[cur],
                diam_previous=cache[prev],
                diam_prime=cache[p],
                empirical_C=c,
            )
        )
        if cache[cur] > envelope * max(denom, 1):
            raise AssertionError(
                f"diameter {cache[cur]} at q={cur} exceeds {envelope} * {denom}"
            )
    return report
