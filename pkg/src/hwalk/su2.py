"""SU(2) at desk scale: explicit irreps as symmetric powers, frequency-cutoff
spectral gaps, metric diameters of gate sets, the low-frequency trace
functional with its walk schedule, approximate identities, and the
Solovay-Kitaev exponent fit.

Elements are unit quaternions (a, b, c, d); the bi-invariant metric is
dist(g, h) = arccos(real part of g h^{-1}), with values in [0, pi].  All
epsilon values are in these units.  Weight norms use the finite-dimensional
normalization |m * omega| = m / sqrt(2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .measures import WalkSchedule

SQRT2 = math.sqrt(2.0)
WEIGHT_NORM_UNIT = 1.0 / SQRT2  # |omega| for the defining representation


# ---------------------------------------------------------------------------
# quaternions


def qmul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Hamilton product; supports batched first argument of shape (..., 4)."""
    a1, b1, c1, d1 = np.moveaxis(p, -1, 0)
    a2, b2, c2, d2 = q
    return np.stack(
        [
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        ],
        axis=-1,
    )


def qconj(q: np.ndarray) -> np.ndarray:
    return q * np.array([1.0, -1.0, -1.0, -1.0])


def qnormalize(q: np.ndarray) -> np.ndarray:
    return q / np.linalg.norm(q, axis=-1, keepdims=True)


class SU2Element:
    """A unit quaternion, renormalized after every product."""

    __slots__ = ("q",)

    def __init__(self, a, b=0.0, c=0.0, d=0.0):
        q = np.asarray(a, dtype=np.float64) if np.ndim(a) else np.array([a, b, c, d])
        norm = np.linalg.norm(q)
        if abs(norm - 1.0) > 1e-6:
            raise ValueError(f"quaternion norm {norm} too far from 1")
        self.q = q / norm

    @classmethod
    def identity(cls):
        return cls(1.0)

    @classmethod
    def from_matrix(cls, m) -> "SU2Element":
        m = np.asarray(m, dtype=complex)
        return cls(m[0, 0].real, m[0, 0].imag, m[0, 1].real, m[0, 1].imag)

    def matrix(self) -> np.ndarray:
        a, b, c, d = self.q
        alpha, beta = a + 1j * b, c + 1j * d
        return np.array([[alpha, beta], [-np.conj(beta), np.conj(alpha)]])

    def __mul__(self, other: "SU2Element") -> "SU2Element":
        return SU2Element(qnormalize(qmul(self.q, other.q)))

    def inv(self) -> "SU2Element":
        return SU2Element(qconj(self.q))

    def angle(self) -> float:
        """Rotation half-angle theta in [0, pi]; dist(g, 1) in the metric."""
        return math.acos(min(1.0, max(-1.0, float(self.q[0]))))

    def __repr__(self):
        return f"SU2Element({np.round(self.q, 6)})"


def dist(g: SU2Element, h: SU2Element) -> float:
    return (g * h.inv()).angle()


# ---------------------------------------------------------------------------
# irreps: m-th symmetric power of the defining representation


def rep_matrix(m: int, g: SU2Element) -> np.ndarray:
    """Unitary (m+1)x(m+1) matrix of the weight-m irrep.

    Realized on degree-m homogeneous polynomials in two variables with the
    orthonormal monomial basis sqrt(binom(m, k)) z1^{m-k} z2^k.
    """
    if m < 0:
        raise ValueError("weight label must be >= 0")
    a = float(g.q[0])
    vec = np.asarray(g.q[1:], dtype=np.float64)
    vnorm = float(np.linalg.norm(vec))
    if vnorm < 1e-15:
        return (np.sign(a) ** m) * np.eye(m + 1, dtype=complex)
    n1, n2, n3 = vec / vnorm
    theta = math.atan2(vnorm, a)
    # pi_m(g) = exp(2 i theta (n1 Jz + n2 Jy + n3 Jx)) in the spin-m/2 ladder
    # basis; the exponential goes through an eigendecomposition of the
    # Hermitian tridiagonal generator, which stays stable at large m.
    jj = m / 2.0
    mz = jj - np.arange(m + 1)  # Jz diagonal, descending
    c = np.sqrt(jj * (jj + 1) - mz[1:] * (mz[1:] + 1))  # ladder couplings
    A = np.diag(n1 * mz).astype(complex)
    off_up = 0.5 * (n3 - 1j * n2) * c  # (Jx + i*(-Jy) parts) at (k-1, k)
    idx = np.arange(m)
    A[idx, idx + 1] = off_up
    A[idx + 1, idx] = np.conj(off_up)
    w, V = np.linalg.eigh(A)
    return (V * np.exp(2j * theta * w)) @ V.conj().T


def character(m: int, g: SU2Element) -> float:
    """Closed-form trace sin((m+1) theta) / sin(theta), and m+1 at theta = 0."""
    theta = g.angle()
    if min(theta, math.pi - theta) < 1e-8:
        sign = 1.0 if theta < 1e-8 else math.cos(math.pi * m)
        return sign * (m + 1)
    return math.sin((m + 1) * theta) / math.sin(theta)


# ---------------------------------------------------------------------------
# finitely supported measures


@dataclass
class CompactMeasure:
    """A finitely supported probability measure on SU(2)."""

    points: list[SU2Element]
    weights: np.ndarray

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=np.float64)
        if np.any(self.weights < 0):
            raise ValueError("negative weight")
        total = self.weights.sum()
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"weights sum to {total}")
        self.weights = self.weights / total

    @classmethod
    def uniform(cls, points) -> "CompactMeasure":
        points = list(points)
        return cls(points, np.full(len(points), 1.0 / len(points)))

    @classmethod
    def delta(cls, g: SU2Element) -> "CompactMeasure":
        return cls([g], np.array([1.0]))

    def is_symmetric(self, tol=1e-9) -> bool:
        for g, w in zip(self.points, self.weights):
            gi = g.inv().q
            match = sum(
                w2
                for h, w2 in zip(self.points, self.weights)
                if np.linalg.norm(h.q - gi) < tol
            )
            if abs(match - w) > tol:
                return False
        return True

    def symmetrized(self) -> "CompactMeasure":
        """mu~ * mu: the law of X^{-1} Y for independent X, Y ~ mu."""
        pts, wts = [], []
        seen = {}
        for gi, wi in zip(self.points, self.weights):
            for gj, wj in zip(self.points, self.weights):
                g = gi.inv() * gj
                key = tuple(np.round(g.q, 12))
                if key in seen:
                    wts[seen[key]] += wi * wj
                else:
                    seen[key] = len(pts)
                    pts.append(g)
                    wts.append(wi * wj)
        return CompactMeasure(pts, np.array(wts))


def irrep_operator(m: int, mu: CompactMeasure) -> np.ndarray:
    """pi_m(mu) = sum_i w_i pi_m(g_i); operator norm <= 1."""
    out = np.zeros((m + 1, m + 1), dtype=complex)
    for g, w in zip(mu.points, mu.weights):
        out += w * rep_matrix(m, g)
    return out


def weight_norm(m: int) -> float:
    return m * WEIGHT_NORM_UNIT


def max_weight_in_ball(r: float) -> int:
    """Largest m with |m * omega| <= r."""
    return max(0, math.floor(r * SQRT2 + 1e-12))


def gap_r(mu: CompactMeasure, r: float) -> float:
    """1 - max over 0 < |m omega| <= r of ||pi_m(mu)||.

    An empty weight range returns 1 (maximum over the empty set taken as 0;
    the convention that keeps gap_r monotone in r).
    """
    if r < 0:
        raise ValueError("radius must be >= 0")
    top = 0.0
    for m in range(1, max_weight_in_ball(r) + 1):
        top = max(top, float(np.linalg.svd(irrep_operator(m, mu), compute_uv=False)[0]))
    return 1.0 - top


# ---------------------------------------------------------------------------
# Clebsch-Gordan bookkeeping


def tensor_support(a: int, b: int) -> list[int]:
    """Constituents of pi_a (x) pi_b: {|a-b|, |a-b|+2, ..., a+b}."""
    return list(range(abs(a - b), a + b + 1, 2))


def tensor_support_check(a: int, b: int) -> dict:
    support = tensor_support(a, b)
    dim_sum = sum(c + 1 for c in support)
    return {
        "support": support,
        "dim_product": (a + 1) * (b + 1),
        "dim_sum": dim_sum,
        "passed": dim_sum == (a + 1) * (b + 1),
    }


def character_square_multiplicities(max_m: int) -> np.ndarray:
    """Multiplicity of chi_c in (sum_{m <= max_m} chi_m)^2, for c = 0..2*max_m."""
    mult = np.zeros(2 * max_m + 1, dtype=np.int64)
    for a in range(max_m + 1):
        for b in range(max_m + 1):
            mult[abs(a - b) : a + b + 1 : 2] += 1
    return mult


# ---------------------------------------------------------------------------
# the chi_r trace functional


@dataclass
class ChiRResult:
    r: float
    max_weight: int
    walk_length: int
    value: float
    bound: float | None
    passed: bool | None


def chi_r_trace(
    mu: CompactMeasure,
    r: float,
    schedule: WalkSchedule,
    E: float | None = None,
    weight_cap: int = 400,
) -> ChiRResult:
    """chi_r(mu^{*(l_r)}) where chi_r = (sum_{|v| <= r} chi_v)^2 / r.

    The square expands through the Clebsch-Gordan rule; each constituent
    trace tr(pi_c(mu)^{l_r}) is an eigenvalue power sum of the Hermitian
    operator pi_c(mu).  A nonsymmetric mu is symmetrized first.
    """
    if not mu.is_symmetric():
        mu = mu.symmetrized()
    M = max_weight_in_ball(r)
    if 2 * M > weight_cap:
        raise ValueError(f"cutoff r={r} needs irreps up to {2 * M} > cap {weight_cap}")
    l = schedule.length(r)
    mult = character_square_multiplicities(M)
    total = 0.0
    for c in range(2 * M + 1):
        if mult[c] == 0:
            continue
        eigs = np.linalg.eigvalsh(irrep_operator(c, mu))
        total += mult[c] * float(np.sum(eigs**l))
    value = total / r  # dim of the maximal torus is 1
    return ChiRResult(
        r=r,
        max_weight=M,
        walk_length=l,
        value=value,
        bound=E,
        passed=None if E is None else value <= E,
    )


def positivity_check(mu: CompactMeasure, ms) -> dict:
    """tr pi_m(nu*nu) >= 0 for symmetric nu, as squared Frobenius norms."""
    if not mu.is_symmetric():
        raise ValueError("positivity_check expects a symmetric measure")
    nu2 = mu.symmetrized()  # nu~ * nu = nu * nu here
    rows = []
    passed = True
    for m in ms:
        direct = float(np.trace(irrep_operator(m, nu2)).real)
        frob = float(np.linalg.norm(irrep_operator(m, mu)) ** 2)
        ok = direct >= -1e-10 and abs(direct - frob) <= 1e-8 * max(1.0, frob)
        passed &= ok
        rows.append({"m": m, "trace": direct, "frobenius_sq": frob, "passed": ok})
    return {"rows": rows, "passed": passed}


# ---------------------------------------------------------------------------
# approximate identity f_r = c_r (chi(g) + 2)^{floor(r / r_0)}


@dataclass
class ApproxIdentityResult:
    r: float
    power: int
    c_r: float
    integral: float  # independent re-estimate of int f_r (should be ~1)
    integral_se: float
    l2_norm: float
    dist_integral: float
    samples: int


def haar_sample(n: int, rng) -> np.ndarray:
    """Exact Haar on SU(2) = uniform on S^3, via normalized Gaussians."""
    q = rng.standard_normal((n, 4))
    return q / np.linalg.norm(q, axis=1, keepdims=True)


def approx_identity_check(r: float, samples: int = 1_000_000, seed: int = 0):
    """Monte Carlo estimates of the normalization, L2 norm, and distance
    integral of f_r, with the base character of the defining representation
    (chi(g) + 2 = 2 + 2 Re g >= 0)."""
    r0 = WEIGHT_NORM_UNIT
    if r < r0:
        raise ValueError(f"r must be >= r_0 = {r0}")
    k = math.floor(r / r0)
    rng = np.random.default_rng(seed)

    q = haar_sample(samples, rng)
    base = 2.0 + 2.0 * q[:, 0]
    c_r = 1.0 / float(np.mean(base**k))

    q2 = haar_sample(samples, rng)  # fresh stream for the independent check
    f2 = c_r * (2.0 + 2.0 * q2[:, 0]) ** k
    integral = float(np.mean(f2))
    integral_se = float(np.std(f2) / math.sqrt(samples))
    theta = np.arccos(np.clip(q2[:, 0], -1.0, 1.0))
    return ApproxIdentityResult(
        r=r,
        power=k,
        c_r=c_r,
        integral=integral,
        integral_se=integral_se,
        l2_norm=float(math.sqrt(np.mean(f2**2))),
        dist_integral=float(np.mean(f2 * theta)),
        samples=samples,
    )


def loglog_slope(xs, ys) -> float:
    return float(np.polyfit(np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float)), 1)[0])


# ---------------------------------------------------------------------------
# metric diameters of gate sets


@dataclass
class CoverResult:
    eps: float
    diameter: int  # first l with a certified eps-cover (-1 if cap hit)
    certified_radius: float  # S^l is within this of every group element
    separation_radius: float  # S^{l-1} missed some element by at least this
    rep_counts: list[int]
    capped: bool


_PACK_BASE = 512
_PACK_SHIFT = 256


def _pack_cells(cells: np.ndarray) -> np.ndarray:
    out = np.zeros(len(cells), dtype=np.int64)
    for axis in range(4):
        out = out * _PACK_BASE + (cells[:, axis] + _PACK_SHIFT)
    return out


def _surface_cells(H: float) -> np.ndarray:
    """Packed codes of every grid cell of side H intersecting the unit S^3."""
    lo = math.floor(-1.0 / H) - 1
    hi = math.floor(1.0 / H) + 1
    idx = np.arange(lo, hi + 1)
    left = idx * H
    right = (idx + 1) * H
    # per-axis squared distance range of the cell interval to 0
    straddles = (left <= 0) & (right >= 0)
    minsq = np.where(straddles, 0.0, np.minimum(np.abs(left), np.abs(right)) ** 2)
    maxsq = np.maximum(np.abs(left), np.abs(right)) ** 2

    m3min = minsq[:, None, None] + minsq[None, :, None] + minsq[None, None, :]
    m3max = maxsq[:, None, None] + maxsq[None, :, None] + maxsq[None, None, :]
    keep = m3min <= 1.0
    ii, jj, kk = np.nonzero(keep)
    wlo = np.sqrt(np.maximum(0.0, 1.0 - m3max[ii, jj, kk]))
    whi = np.sqrt(np.maximum(0.0, 1.0 - m3min[ii, jj, kk]))

    codes = []
    base3 = (
        (idx[ii] + _PACK_SHIFT) * _PACK_BASE**3
        + (idx[jj] + _PACK_SHIFT) * _PACK_BASE**2
        + (idx[kk] + _PACK_SHIFT) * _PACK_BASE
    )
    for sign in (1.0, -1.0):
        a = np.minimum(sign * whi, sign * wlo)
        b = np.maximum(sign * whi, sign * wlo)
        l0 = np.floor(a / H).astype(np.int64)
        l1 = np.floor(b / H).astype(np.int64)
        counts = l1 - l0 + 1
        rows = np.repeat(np.arange(len(ii)), counts)
        offsets = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
        ls = l0[rows] + offsets
        codes.append(base3[rows] + ls + _PACK_SHIFT)
    return np.unique(np.concatenate(codes))


_NEIGHBOR_OFFSETS = np.array(
    [
        di * _PACK_BASE**3 + dj * _PACK_BASE**2 + dk * _PACK_BASE + dl
        for di in (-1, 0, 1)
        for dj in (-1, 0, 1)
        for dk in (-1, 0, 1)
        for dl in (-1, 0, 1)
    ],
    dtype=np.int64,
)


def _is_covered(surface: np.ndarray, occupied: np.ndarray) -> bool:
    """Every surface cell has an occupied cell in its 3^4 neighborhood."""
    if occupied.size * len(_NEIGHBOR_OFFSETS) < surface.size:
        return False  # cannot possibly cover yet
    remaining = surface
    for off in _NEIGHBOR_OFFSETS:
        if remaining.size == 0:
            return True
        pos = np.searchsorted(occupied, remaining - off)
        pos = np.clip(pos, 0, occupied.size - 1)
        hit = occupied[pos] == remaining - off
        remaining = remaining[~hit]
    return remaining.size == 0


def diam_eps(
    gates, eps: float, depth_cap: int = 40
) -> CoverResult:
    """First l at which every element of SU(2) is within eps of S^l.

    Layered product growth on a grid of side H = eps/(2 pi), keeping one
    actually-reached representative per cell.  Occupancy of every
    sphere-intersecting cell's 3^4 neighborhood certifies an eps-cover
    (adjacent cells differ by at most 2H per coordinate, so the metric
    distance is at most 2 pi H = eps).  Cell pruning can only delay
    coverage, so the reported l is a certified upper bound for diam_eps.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if eps > math.pi:
        # the whole group is within pi <= eps of the identity
        return CoverResult(
            eps=eps, diameter=0, certified_radius=eps, separation_radius=0.0,
            rep_counts=[1], capped=False,
        )
    gates = list(gates)
    if not any(np.linalg.norm(g.q - np.array([1.0, 0, 0, 0])) < 1e-12 for g in gates):
        raise ValueError("gate set must contain the identity")
    H = eps / (2.0 * math.pi)
    surface = _surface_cells(H)
    gate_arr = [g.q for g in gates if g.angle() > 1e-15]

    reps = np.array([[1.0, 0.0, 0.0, 0.0]])
    codes = _pack_cells(np.floor(reps / H).astype(np.int64))
    counts = []
    for l in range(depth_cap + 1):
        counts.append(len(reps))
        if _is_covered(surface, codes):
            return CoverResult(
                eps=eps,
                diameter=l,
                certified_radius=eps,
                separation_radius=H,
                rep_counts=counts,
                capped=False,
            )
        new_codes, new_reps = [], []
        for gq in gate_arr:
            prod = qnormalize(qmul(reps, gq))
            pc = _pack_cells(np.floor(prod / H).astype(np.int64))
            pos = np.clip(np.searchsorted(codes, pc), 0, codes.size - 1)
            fresh = codes[pos] != pc  # cells not yet occupied at level start
            u, first = np.unique(pc[fresh], return_index=True)
            new_codes.append(u)
            new_reps.append(prod[fresh][first])
        add_codes = np.concatenate(new_codes)
        add_reps = np.concatenate(new_reps)
        u, first = np.unique(add_codes, return_index=True)  # dedupe across gates
        codes = np.concatenate([codes, u])
        reps = np.concatenate([reps, add_reps[first]])
        order = np.argsort(codes)
        codes = codes[order]
        reps = reps[order]
    return CoverResult(
        eps=eps,
        diameter=-1,
        certified_radius=eps,
        separation_radius=H,
        rep_counts=counts,
        capped=True,
    )


def covering_number_lower_bound(eps: float) -> float:
    """Volume bound: N(eps) >= vol(SU(2)) / vol(ball of radius eps)."""
    eps = min(eps, math.pi)
    ball = 2.0 * math.pi * (eps - math.sin(eps) * math.cos(eps))
    return 2.0 * math.pi**2 / ball


@dataclass
class SKFitResult:
    eps_grid: list[float]
    diameters: list[int]
    exponent: float | None
    prefactor: float | None
    degenerate: bool
    lower_bounds_ok: bool
    monotone: bool


def solovay_kitaev_fit(gates, eps_grid, depth_cap: int = 40) -> SKFitResult:
    """Fits l ~ a * log^b(1/eps) over a decreasing eps grid.

    Degenerate data (too few points, or too little variation in l) is
    reported as such rather than fitted.
    """
    eps_grid = list(eps_grid)
    if len(eps_grid) < 4:
        raise ValueError("need at least 4 grid points for a fit")
    if any(b >= a for a, b in zip(eps_grid, eps_grid[1:])):
        raise ValueError("eps grid must be strictly decreasing")
    n_gates = len(gates)
    diams = [diam_eps(gates, eps, depth_cap).diameter for eps in eps_grid]
    lower_ok = all(
        d >= math.log(covering_number_lower_bound(eps)) / math.log(n_gates) - 1e-9
        for d, eps in zip(diams, eps_grid)
        if d >= 0
    )
    monotone = all(b >= a for a, b in zip(diams, diams[1:]))
    # the fit variable is log log(1/eps): only eps < 1 and l >= 1 are usable
    usable = [(e, d) for e, d in zip(eps_grid, diams) if d >= 1 and e < 1.0]
    if len(usable) < 4 or len({d for _, d in usable}) < 2:
        return SKFitResult(eps_grid, diams, None, None, True, lower_ok, monotone)
    x = np.log(np.log([1.0 / e for e, _ in usable]))
    y = np.log([d for _, d in usable])
    b, loga = np.polyfit(x, y, 1)
    return SKFitResult(
        eps_grid=eps_grid,
        diameters=diams,
        exponent=float(b),
        prefactor=float(math.exp(loga)),
        degenerate=False,
        lower_bounds_ok=lower_ok,
        monotone=monotone,
    )
