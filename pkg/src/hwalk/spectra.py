"""Spectral gaps, regular traces, the dimension-eigenvalue inequality, and
the trace-decay induction experiment on quotient chains."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .groups import GenSet, GroupTable
from .measures import (
    Measure,
    QuotientChain,
    WalkSchedule,
    calibrate_C0,
    convolution_power,
    convolve,
    pushforward,
    symmetrize,
    uniform_on,
)

DENSE_LIMIT = 2048


@dataclass
class GapResult:
    gap: float
    top_nontrivial_modulus: float
    method: str  # "dense" | "iterative"
    iterations: int = 0
    residual: float = 0.0
    converged: bool = True


def regular_operator(table: GroupTable, mu: Measure) -> np.ndarray:
    """Dense matrix of Reg(mu): M[x, y] = mu(x y^{-1})."""
    n = table.order
    M = np.zeros((n, n))
    cols = np.arange(n)
    for s in mu.support():
        M[table.left_perm(int(s)), cols] += mu.weights[s]
    return M


def regular_trace(table: GroupTable, nu: Measure) -> float:
    """chi_G(nu) = |G| * nu(1): the regular character is |G| at 1, 0 elsewhere."""
    return table.order * float(nu.weights[0])


def _apply_deflated(mu: Measure, v: np.ndarray) -> np.ndarray:
    """Reg(mu) restricted to the complement of constants, as conv + projection."""
    table = mu.table
    out = np.zeros_like(v)
    for s in mu.support():
        out[table.left_perm(int(s))] += mu.weights[s] * v
    out -= out.mean()
    return out


def _power_iteration(nu: Measure, tol: float, rng) -> tuple[float, int, float, bool]:
    """Top eigenvalue of the PSD operator Reg°(nu), with constant deflation."""
    n = nu.table.order
    max_iter = int(50 * math.sqrt(n)) + 100
    best = (0.0, 0, np.inf, False)
    v = rng.standard_normal(n)
    v -= v.mean()
    v /= np.linalg.norm(v)
    lam_prev = 0.0
    stagnant = 0
    for it in range(1, max_iter + 1):
        w = _apply_deflated(nu, v)
        lam = float(v @ w)
        res = float(np.linalg.norm(w - lam * v))
        if res < best[2]:
            best = (lam, it, res, res <= tol)
        if res <= tol:
            return lam, it, res, True
        if abs(lam - lam_prev) < 1e-16:
            stagnant += 1
            if stagnant > 50:  # restart on stagnation
                v = rng.standard_normal(n)
                v -= v.mean()
                stagnant = 0
        lam_prev = lam
        norm = np.linalg.norm(w)
        if norm == 0:
            return 0.0, it, 0.0, True
        v = w / norm
    lam, it, res, ok = best
    return lam, max_iter, res, ok


def spectral_gap(
    table: GroupTable, mu: Measure, tol: float = 1e-10, method: str | None = None, seed: int = 0
) -> GapResult:
    """gap(G, mu) = 1 - ||Reg°(mu)||.

    The norm is always computed through the symmetrization mu~ * mu (top
    singular value squared), which also covers nonsymmetric mu.  Dense
    eigensolve up to order 2048, deflated power iteration above.
    """
    nu = convolve(mu.tilde(), mu)
    if method is None:
        method = "dense" if table.order <= DENSE_LIMIT else "iterative"
    if method == "dense":
        M = regular_operator(table, nu)
        M -= 1.0 / table.order
        eigs = np.linalg.eigvalsh(M)
        lam = max(float(eigs[-1]), 0.0)
        norm = math.sqrt(lam)
        return GapResult(gap=1.0 - norm, top_nontrivial_modulus=norm, method="dense")
    rng = np.random.default_rng(seed)
    lam, it, res, ok = _power_iteration(nu, tol, rng)
    norm = math.sqrt(max(lam, 0.0))
    return GapResult(
        gap=1.0 - norm,
        top_nontrivial_modulus=norm,
        method="iterative",
        iterations=it,
        residual=res,
        converged=ok,
    )


def operator_norm_restricted(table: GroupTable, mu: Measure, **kw) -> float:
    return spectral_gap(table, mu, **kw).top_nontrivial_modulus


# ---------------------------------------------------------------------------
# dimension * lambda^2 <= chi_G(mu*mu)


@dataclass
class SarnakXueReport:
    passed: bool
    worst_margin: float
    trace_mu2: float
    rows: list[tuple[float, int, int]]  # (eigenvalue, irrep row, irrep dim)
    ambiguous: list[int] = field(default_factory=list)


def verify_sarnak_xue(
    table: GroupTable, mu: Measure, chartable, tol: float = 1e-8
) -> SarnakXueReport:
    """Checks dim(pi) * lambda^2 <= chi_G(mu*mu) for every eigenvalue of Reg(mu).

    Each eigenvector is resolved into isotypic components by projection.
    Degenerate eigenvalues can mix components, so the check uses the largest
    dimension among all irreps carrying a nonnegligible share of the vector
    (the strongest valid form); vectors split across several irreps are
    counted in ``ambiguous``.
    """
    if not mu.is_symmetric(tol=1e-10):
        raise ValueError("verify_sarnak_xue expects a symmetric measure")
    n = table.order
    if n > DENSE_LIMIT:
        raise ValueError(f"order {n} exceeds the dense limit {DENSE_LIMIT}")
    M = regular_operator(table, mu)
    lams, V = np.linalg.eigh(M)
    trace_mu2 = regular_trace(table, convolve(mu, mu))

    k = len(chartable.dims)
    class_of = chartable.class_of
    cols = np.arange(n)
    # isotypic projector P_pi = (dim/|G|) sum_g conj(chi(g)) Reg(g)
    proj_norms = np.zeros((k, n))
    for r in range(k):
        coeff = np.conj(chartable.chars[r])[class_of]  # per-element character value
        P = np.zeros((n, n), dtype=complex)
        for g in range(n):
            P[table.left_perm(g), cols] += coeff[g]
        P *= chartable.dims[r] / n
        proj_norms[r] = np.linalg.norm(P @ V, axis=0) ** 2

    total = proj_norms.sum(axis=0)
    present = proj_norms > 1e-8 * total  # irreps carrying part of the vector
    dims_arr = np.asarray(chartable.dims)
    ambiguous = [i for i in range(n) if int(present[:, i].sum()) > 1]

    rows = []
    worst = np.inf
    passed = True
    for i in range(n):
        d = int(dims_arr[present[:, i]].max())
        margin = trace_mu2 + tol - d * lams[i] ** 2
        worst = min(worst, margin)
        if margin < 0:
            passed = False
        rows.append((float(lams[i]), int(np.argmax(proj_norms[:, i])), int(d)))
    return SarnakXueReport(
        passed=passed,
        worst_margin=float(worst),
        trace_mu2=trace_mu2,
        rows=rows,
        ambiguous=ambiguous,
    )


# ---------------------------------------------------------------------------
# the folklore sandwich


@dataclass
class SandwichReport:
    diameter: int
    gap: float
    genset_size: int
    group_order: int
    lower: float  # (diam - 1)/log|G|
    upper: float  # |S| diam^2
    passed: bool


def folklore_sandwich(table: GroupTable, genset: GenSet, tol: float = 1e-9) -> SandwichReport:
    """(diam - 1)/log|G| <= gap^{-1} <= |S| diam^2 for symmetric S with 1 in S."""
    from .diameter import diameter as cayley_diameter

    if not genset.symmetric or not genset.contains_identity:
        raise ValueError("the sandwich needs a symmetric S containing 1")
    profile = cayley_diameter(table, genset)
    if not profile.generates:
        raise ValueError("S does not generate G")
    mu = uniform_on(table, genset)
    gap = spectral_gap(table, mu).gap
    diam = profile.diameter
    lower = (diam - 1) / math.log(table.order)
    upper = len(genset.members) * diam**2
    inv_gap = 1.0 / gap if gap > 0 else math.inf
    passed = lower <= inv_gap + tol and inv_gap <= upper + tol
    return SandwichReport(
        diameter=diam,
        gap=gap,
        genset_size=len(genset.members),
        group_order=table.order,
        lower=lower,
        upper=upper,
        passed=passed,
    )


@dataclass
class SymmetrizationGapReport:
    gap_mu: float
    gap_sym: float
    passed: bool


def gap_symmetrization_bounds(table: GroupTable, mu: Measure, tol: float = 1e-9):
    """gap(mu~*mu) >= gap(mu) and gap(mu) >= gap(mu~*mu)/2."""
    nu = symmetrize(mu)
    gap_mu = spectral_gap(table, mu).gap
    gap_sym = spectral_gap(table, nu).gap
    passed = gap_sym >= gap_mu - tol and gap_mu >= gap_sym / 2.0 - tol
    return SymmetrizationGapReport(gap_mu=gap_mu, gap_sym=gap_sym, passed=passed)


# ---------------------------------------------------------------------------
# trace-decay experiment on a quotient chain


@dataclass
class TraceRow:
    index: int  # [G : Gamma]
    walk_length: int
    trace: float
    bound: float
    passed: bool


@dataclass
class TraceReport:
    rows: list[TraceRow]
    C0: float
    A: float
    max_trace: float
    min_trace: float

    @property
    def ratio(self) -> float:
        return self.max_trace / self.min_trace if self.min_trace > 0 else math.inf


def trace_decay_experiment(
    chain: QuotientChain,
    mu: Measure,
    schedule: WalkSchedule | None = None,
    A: float = 2.0,
    M: float | None = None,
) -> TraceReport:
    """Pushes mu down every level and reports chi_{G/Gamma}(mu^{*(l_Gamma)}).

    With ``schedule`` omitted, C0 is calibrated at the coarsest level as
    1/(gap * log^A[G:Gamma]).  Each trace row records whether it stays below
    M (when given); the report's max/min ratio is the single-constant
    boundedness statistic.
    """
    if mu.table is not chain.finest:
        raise ValueError("mu must live on the finest level of the chain")
    if schedule is None:
        base = chain.levels[0]
        mu0 = pushforward(mu, base.map_from_finest, base.table)
        gap0 = spectral_gap(base.table, mu0).gap
        schedule = WalkSchedule(C0=calibrate_C0(gap0, base.table.order, A), A=A)
    rows = []
    for level in chain.levels:
        mu_level = pushforward(mu, level.map_from_finest, level.table)
        x = level.table.order
        l = schedule.length(x)
        power = convolution_power(mu_level, l)
        trace = regular_trace(level.table, power)
        bound = M if M is not None else math.inf
        rows.append(
            TraceRow(index=x, walk_length=l, trace=trace, bound=bound, passed=trace <= bound)
        )
    traces = [r.trace for r in rows]
    return TraceReport(
        rows=rows,
        C0=schedule.C0,
        A=schedule.A,
        max_trace=max(traces),
        min_trace=min(traces),
    )
