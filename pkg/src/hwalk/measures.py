"""Probability measures on a GroupTable, convolution, and walk schedules."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from sympy import factorint

from .groups import GroupTable, quotient_map

MASS_TOL = 1e-12

# Above this order, convolution accumulates in extended precision: the trace
# experiments subtract numbers of similar size.
_EXTENDED_PRECISION_ORDER = 100_000


@dataclass
class Measure:
    """A probability distribution on a GroupTable, stored densely."""

    table: GroupTable
    weights: np.ndarray

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float64)
        if self.weights.shape != (self.table.order,):
            raise ValueError("weight vector length must equal the group order")
        if np.any(self.weights < -MASS_TOL):
            raise ValueError("negative weight in measure")
        total = float(self.weights.sum())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"weights sum to {total}, expected 1")
        self.weights = np.clip(self.weights, 0.0, None)
        self.weights /= self.weights.sum()

    def support(self) -> np.ndarray:
        return np.nonzero(self.weights > 0)[0]

    def is_symmetric(self, tol=1e-12) -> bool:
        return bool(np.max(np.abs(self.weights - self.weights[self.table.inverse])) <= tol)

    def tilde(self) -> "Measure":
        """The measure g -> mu(g^{-1})."""
        return Measure(self.table, self.weights[self.table.inverse].copy())


def delta(table: GroupTable, i: int = 0) -> Measure:
    w = np.zeros(table.order)
    w[i] = 1.0
    return Measure(table, w)


def uniform(table: GroupTable) -> Measure:
    return Measure(table, np.full(table.order, 1.0 / table.order))


def uniform_on(table: GroupTable, indices) -> Measure:
    members = getattr(indices, "members", indices)
    w = np.zeros(table.order)
    for i in members:
        w[int(i)] += 1.0
    return Measure(table, w / w.sum())


def random_measure(table: GroupTable, rng, symmetric=False, support=None) -> Measure:
    w = np.zeros(table.order)
    idx = np.arange(table.order) if support is None else np.asarray(list(support))
    w[idx] = rng.random(len(idx))
    if symmetric:
        w = (w + w[table.inverse]) / 2.0
    return Measure(table, w / w.sum())


def _acc_dtype(order: int):
    return np.longdouble if order > _EXTENDED_PRECISION_ORDER else np.float64


def convolve(mu: Measure, nu: Measure) -> Measure:
    """Exact convolution (mu*nu)(g) = sum_h mu(g h^{-1}) nu(h).

    Cost O(|supp mu| * |G|): the sparse left factor is expanded through
    cached left-translation permutations.
    """
    if mu.table is not nu.table:
        raise ValueError("measures live on different tables")
    table = mu.table
    out = np.zeros(table.order, dtype=_acc_dtype(table.order))
    nu_w = nu.weights
    for s in mu.support():
        out[table.left_perm(int(s))] += mu.weights[s] * nu_w
    return Measure(table, np.asarray(out, dtype=np.float64))


def convolution_power(mu: Measure, l: int) -> Measure:
    """mu^{*(l)} by l sparse-left convolutions; l = 0 gives the point mass at 1."""
    if l < 0:
        raise ValueError("power must be >= 0")
    table = mu.table
    acc = np.zeros(table.order, dtype=_acc_dtype(table.order))
    acc[0] = 1.0
    supp = [(int(s), mu.weights[s], table.left_perm(int(s))) for s in mu.support()]
    for _ in range(l):
        nxt = np.zeros_like(acc)
        for _, w, perm in supp:
            nxt[perm] += w * acc
        acc = nxt
    return Measure(table, np.asarray(acc, dtype=np.float64))


def symmetrize(mu: Measure) -> Measure:
    """Returns mu~ * mu, which is symmetric exactly."""
    out = convolve(mu.tilde(), mu)
    # kill the last-bit asymmetry so downstream symmetry checks are exact
    w = (out.weights + out.weights[mu.table.inverse]) / 2.0
    return Measure(mu.table, w)


def pushforward(mu: Measure, qmap: np.ndarray, coarse: GroupTable) -> Measure:
    w = np.zeros(coarse.order)
    np.add.at(w, qmap, mu.weights)
    return Measure(coarse, w)


# ---------------------------------------------------------------------------
# walk-length schedules


@dataclass
class WalkSchedule:
    """Walk length rule l(x) = 2*floor(C0*(10 - log(x)^{-1/10}) * log(x)^{A+1}).

    ``mode`` records what x stands for: the index [G:Gamma] of a finite
    quotient, or the frequency cutoff r on a compact group.
    """

    C0: float
    A: float
    mode: str = "finite"  # or "compact"

    def __post_init__(self):
        if self.C0 < 0:
            raise ValueError("C0 must be nonnegative")
        if self.A <= 0:
            raise ValueError("A must be positive")
        if self.mode not in ("finite", "compact"):
            raise ValueError(f"unknown schedule mode {self.mode!r}")

    def correction(self, x: float) -> float:
        return 10.0 - math.log(x) ** (-0.1)

    def length(self, x: float) -> int:
        if x < math.e:
            raise ValueError(f"schedule argument must be >= e, got {x}")
        lx = math.log(x)
        return 2 * math.floor(self.C0 * self.correction(x) * lx ** (self.A + 1))


def walk_length(schedule: WalkSchedule, x: float) -> int:
    return schedule.length(x)


def calibrate_C0(gap: float, x: float, A: float) -> float:
    """C0 = 1/(gap * log^A x): the base-level calibration of the schedule."""
    if gap <= 0:
        raise ValueError("calibration needs a positive spectral gap")
    if x < math.e:
        raise ValueError(f"calibration argument must be >= e, got {x}")
    return 1.0 / (gap * math.log(x) ** A)


# ---------------------------------------------------------------------------
# quotient chains


def _squarefree_omega2(q: int, max_prime_factors: int) -> bool:
    fac = factorint(q)
    return all(k == 1 for k in fac.values()) and len(fac) <= max_prime_factors


@dataclass
class ChainLevel:
    modulus: int
    table: GroupTable
    map_from_finest: np.ndarray
    omega_class: int  # 1 or 2


@dataclass
class QuotientChain:
    """A divisor chain q_0 | q_1 | ... | q_n of SL_d quotients.

    The finest level is last.  Each level carries the quotient map from the
    finest table and an Omega_1/Omega_2 classification: a level is Omega_2
    iff its modulus is squarefree with at most ``omega2_prime_bound`` prime
    factors.
    """

    levels: list[ChainLevel] = field(default_factory=list)

    @classmethod
    def from_moduli(cls, d: int, moduli, cap=None, omega2_prime_bound: int = 1):
        from .groups import DEFAULT_CAP, build_slq

        moduli = list(moduli)
        for a, b in zip(moduli, moduli[1:]):
            if b % a != 0:
                raise ValueError(f"{a} does not divide {b}: not a chain")
        tables = [build_slq(d, q, cap or DEFAULT_CAP) for q in moduli]
        finest = tables[-1]
        levels = []
        for q, t in zip(moduli, tables):
            levels.append(
                ChainLevel(
                    modulus=q,
                    table=t,
                    map_from_finest=quotient_map(finest, t),
                    omega_class=2 if _squarefree_omega2(q, omega2_prime_bound) else 1,
                )
            )
        return cls(levels=levels)

    @property
    def finest(self) -> GroupTable:
        return self.levels[-1].table

    def consecutive_indices(self) -> list[int]:
        """[Gamma' : Gamma] for consecutive levels (coarse to fine)."""
        return [
            b.table.order // a.table.order for a, b in zip(self.levels, self.levels[1:])
        ]
