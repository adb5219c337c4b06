"""Exact root-system combinatorics for the nine families A-G.

Every invariant is an exact equality in rational/integer arithmetic; floating
point appears only as a hint inside _iinvert, where the guessed inverse is
re-verified exactly before use.  The Weyl-invariant inner product is
normalized so short roots have squared length 2, with the scale factor
recorded on the RootSystem.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
import math
from math import isqrt

import numpy as np

Vector = tuple[Fraction, ...]

_CLASSICAL_RANK_CAP = 12

_POSITIVE_COUNTS = {
    "A": lambda n: n * (n + 1) // 2,
    "B": lambda n: n * n,
    "C": lambda n: n * n,
    "D": lambda n: n * (n - 1),
    "E6": lambda n: 36,
    "E7": lambda n: 63,
    "E8": lambda n: 120,
    "F4": lambda n: 24,
    "G2": lambda n: 6,
}


def _dot(u: Vector, v: Vector) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def _vec(*xs) -> Vector:
    return tuple(Fraction(x) for x in xs)


def _basis(dim: int, i: int, value=1) -> Vector:
    return tuple(Fraction(value) if j == i else Fraction(0) for j in range(dim))


def _add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def _scale(c, u):
    c = Fraction(c)
    return tuple(c * a for a in u)


def _simple_roots(family: str, rank: int) -> list[Vector]:
    if family == "A":
        if rank < 1:
            raise ValueError("A_n needs n >= 1")
        dim = rank + 1
        return [_sub(_basis(dim, i), _basis(dim, i + 1)) for i in range(rank)]
    if family == "B":
        if rank < 2:
            raise ValueError("B_n needs n >= 2")
        roots = [_sub(_basis(rank, i), _basis(rank, i + 1)) for i in range(rank - 1)]
        roots.append(_basis(rank, rank - 1))
        return roots
    if family == "C":
        if rank < 2:
            raise ValueError("C_n needs n >= 2")
        roots = [_sub(_basis(rank, i), _basis(rank, i + 1)) for i in range(rank - 1)]
        roots.append(_basis(rank, rank - 1, 2))
        return roots
    if family == "D":
        if rank < 3:
            raise ValueError("D_n needs n >= 3")
        roots = [_sub(_basis(rank, i), _basis(rank, i + 1)) for i in range(rank - 1)]
        roots.append(_add(_basis(rank, rank - 2), _basis(rank, rank - 1)))
        return roots
    if family == "G2":
        return [_vec(1, -1, 0), _vec(-2, 1, 1)]
    if family == "F4":
        return [
            _vec(0, 1, -1, 0),
            _vec(0, 0, 1, -1),
            _vec(0, 0, 0, 1),
            _vec(Fraction(1, 2), Fraction(-1, 2), Fraction(-1, 2), Fraction(-1, 2)),
        ]
    if family in ("E6", "E7", "E8"):
        half = Fraction(1, 2)
        e8 = [
            (half, -half, -half, -half, -half, -half, -half, half),
            _vec(1, 1, 0, 0, 0, 0, 0, 0),
            _vec(-1, 1, 0, 0, 0, 0, 0, 0),
            _vec(0, -1, 1, 0, 0, 0, 0, 0),
            _vec(0, 0, -1, 1, 0, 0, 0, 0),
            _vec(0, 0, 0, -1, 1, 0, 0, 0),
            _vec(0, 0, 0, 0, -1, 1, 0, 0),
            _vec(0, 0, 0, 0, 0, -1, 1, 0),
        ]
        return e8[: {"E6": 6, "E7": 7, "E8": 8}[family]]
    raise ValueError(f"unknown family {family!r}")


def _reflection_closure(simples: list[tuple[int, ...]]) -> set[tuple[int, ...]]:
    """Orbit of the simple roots under their own reflections, in doubled
    integer coordinates.  Root pairings 2<v,a>/<a,a> are exact integers."""
    roots = set(simples) | {tuple(-x for x in a) for a in simples}
    changed = True
    while changed:
        changed = False
        for a in simples:
            aa = sum(x * x for x in a)
            new = set()
            for v in roots:
                c, r = divmod(2 * sum(x * y for x, y in zip(v, a)), aa)
                if r:
                    raise RuntimeError("non-integral root pairing in closure")
                image = tuple(x - c * y for x, y in zip(v, a))
                if image not in roots:
                    new.add(image)
            if new:
                roots |= new
                changed = True
    return roots


def _doubled(v: Vector) -> tuple[int, ...]:
    """v scaled by 2 as exact integers (every coordinate is a half-integer)."""
    out = []
    for x in v:
        x = Fraction(x)
        if x.denominator == 1:
            out.append(2 * x.numerator)
        elif x.denominator == 2:
            out.append(x.numerator)
        else:
            raise ValueError(f"coordinate {x} is not a half-integer")
    return tuple(out)


def _ibasis(dim: int, i: int, value: int) -> tuple[int, ...]:
    return tuple(value if j == i else 0 for j in range(dim))


def _ipair(dim: int, i: int, j: int, vi: int, vj: int) -> tuple[int, ...]:
    return tuple(vi if d == i else vj if d == j else 0 for d in range(dim))


def _closed_form_roots2(family: str, rank: int) -> list[tuple[int, ...]]:
    """Direct enumeration of the full root set in doubled integer
    coordinates (a superset for E6/E7: the E8 roots, filtered down to the
    simple-root span by the caller)."""
    roots: list[tuple[int, ...]] = []
    if family == "A":
        dim = rank + 1
        for i in range(dim):
            for j in range(dim):
                if i != j:
                    roots.append(_ipair(dim, i, j, 2, -2))
    elif family in ("B", "C", "D"):
        for i in range(rank):
            for j in range(i + 1, rank):
                for si in (2, -2):
                    for sj in (2, -2):
                        roots.append(_ipair(rank, i, j, si, sj))
        if family == "B":
            for i in range(rank):
                roots.append(_ibasis(rank, i, 2))
                roots.append(_ibasis(rank, i, -2))
        elif family == "C":
            for i in range(rank):
                roots.append(_ibasis(rank, i, 4))
                roots.append(_ibasis(rank, i, -4))
    elif family == "G2":
        for short in ((2, -2, 0), (2, 0, -2), (0, 2, -2)):
            roots.append(short)
            roots.append(tuple(-x for x in short))
        for long in ((4, -2, -2), (-2, 4, -2), (-2, -2, 4)):
            roots.append(long)
            roots.append(tuple(-x for x in long))
    elif family == "F4":
        for i in range(4):
            for j in range(i + 1, 4):
                for si in (2, -2):
                    for sj in (2, -2):
                        roots.append(_ipair(4, i, j, si, sj))
        for i in range(4):
            roots.append(_ibasis(4, i, 2))
            roots.append(_ibasis(4, i, -2))
        roots.extend(product((1, -1), repeat=4))
    elif family in ("E6", "E7", "E8"):
        for i in range(8):
            for j in range(i + 1, 8):
                for si in (2, -2):
                    for sj in (2, -2):
                        roots.append(_ipair(8, i, j, si, sj))
        for signs in product((1, -1), repeat=8):
            if sum(1 for s in signs if s < 0) % 2 == 0:
                roots.append(signs)
    else:
        raise ValueError(f"unknown family {family!r}")
    return roots


@dataclass
class RootSystem:
    family: str
    rank: int
    simple_roots: list[Vector]
    positive_roots: list[Vector]
    pos_coeffs: list[tuple[int, ...]]  # expansion over simple roots, integers
    scale: Fraction  # inner(u, v) = scale * dot(u, v); short roots get length^2 = 2
    rho: Vector
    fundamental_weights: list[Vector]
    cartan: list[list[int]]

    @property
    def type_name(self) -> str:
        return f"{self.family}{self.rank}" if self.family in "ABCD" else self.family

    def inner(self, u: Vector, v: Vector) -> Fraction:
        return self.scale * _dot(u, v)

    def simple_halfnorms(self) -> list[Fraction]:
        """d_i = <alpha_i, alpha_i>/2 in the normalized inner product."""
        return [self.inner(a, a) / 2 for a in self.simple_roots]

    def weight_gram(self) -> list[list[Fraction]]:
        return [
            [self.inner(wi, wj) for wj in self.fundamental_weights]
            for wi in self.fundamental_weights
        ]


def build_rootsystem(family: str, rank: int | None = None) -> RootSystem:
    """Exact construction; all invariants are verified at build time."""
    family = family.upper()
    if family in ("E6", "E7", "E8", "F4", "G2"):
        implied = int(family[1])
        if rank is not None and rank != implied:
            raise ValueError(f"{family} has rank {implied}")
        rank = implied
    elif family in "ABCD":
        if rank is None:
            raise ValueError("classical families need an explicit rank")
        if rank > _CLASSICAL_RANK_CAP:
            raise ValueError(f"rank cap is {_CLASSICAL_RANK_CAP}")
    else:
        raise ValueError(f"unknown family {family!r}")

    simples = _simple_roots(family, rank)
    n = len(simples)
    dim = len(simples[0])

    # All coordinates are half-integers; the heavy per-root work runs on
    # doubled integer coordinates (denominators cancel throughout).
    s2 = [_doubled(a) for a in simples]
    gram2 = [[sum(a * b for a, b in zip(u, v)) for v in s2] for u in s2]
    num, den = _iinvert(gram2)

    # Solve each +/- pair once: the candidates come in opposite pairs and
    # coeffs(-v) = -coeffs(v), so keep the lexicographically larger member.
    candidates = {
        v for v in _closed_form_roots2(family, rank) if v > tuple(-x for x in v)
    }
    span_filter = family in ("E6", "E7")  # candidates are the full E8 root set

    pairs, pos2, positives, coeffs = 0, [], [], []
    for v2 in sorted(candidates):
        rhs = [sum(a * b for a, b in zip(v2, row)) for row in s2]
        cnum = [sum(a * b for a, b in zip(row, rhs)) for row in num]  # den * coeffs
        in_span = all(
            sum(cnum[k] * s2[k][d] for k in range(n)) == den * v2[d] for d in range(dim)
        )
        if not in_span:
            if span_filter:
                continue
            raise RuntimeError("root outside the simple-root span")
        pairs += 1
        if all(x <= 0 for x in cnum):
            v2, cnum = tuple(-x for x in v2), [-x for x in cnum]
        if not all(x >= 0 for x in cnum):
            raise RuntimeError("root with mixed-sign coefficients")
        if any(x % den for x in cnum):
            raise RuntimeError("non-integral root coefficients")
        pos2.append(v2)
        positives.append(tuple(Fraction(x, 2) for x in v2))
        coeffs.append(tuple(x // den for x in cnum))

    order = sorted(range(len(pos2)), key=lambda i: pos2[i])
    pos2 = [pos2[i] for i in order]
    positives = [positives[i] for i in order]
    coeffs = [coeffs[i] for i in order]

    if rank <= 4:
        full = {v for p in pos2 for v in (p, tuple(-x for x in p))}
        if full != _reflection_closure(s2):
            raise RuntimeError("closed-form roots disagree with the reflection closure")

    expected = _POSITIVE_COUNTS[family[0] if family[0] in "ABCD" else family](rank)
    if len(positives) != expected or pairs != expected:
        raise RuntimeError(
            f"{family}{rank}: built {len(positives)} positive roots, expected {expected}"
        )

    min_len = Fraction(min(sum(x * x for x in v2) for v2 in candidates), 4)
    scale = Fraction(2) / min_len

    rho = tuple(Fraction(sum(v[i] for v in pos2), 4) for i in range(dim))

    # Cartan matrix A[i][j] = <alpha_j, alpha_i^vee> and fundamental weights
    cartan = [[2 * gram2[i][j] // gram2[i][i] for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            if cartan[i][j] * gram2[i][i] != 2 * gram2[i][j]:
                raise RuntimeError("non-integral Cartan entry")
    # omega_i = sum_k B[i][k] alpha_k with B = (A^T)^{-1}
    bnum, bden = _iinvert([[cartan[j][i] for j in range(n)] for i in range(n)])
    weights = [
        tuple(
            Fraction(sum(bnum[i][k] * s2[k][d] for k in range(n)), 2 * bden)
            for d in range(dim)
        )
        for i in range(n)
    ]

    rs = RootSystem(
        family=family,
        rank=rank,
        simple_roots=simples,
        positive_roots=positives,
        pos_coeffs=coeffs,
        scale=scale,
        rho=rho,
        fundamental_weights=weights,
        cartan=cartan,
    )
    _verify(rs)
    return rs


def _iinvert(M: list[list[int]]) -> tuple[list[list[int]], int]:
    """Exact inverse of an integer matrix as (numerators, positive denominator):
    inv = num / den.  Fast path uses floating point to guess the adjugate and
    then verifies M @ num == den * I in exact integer arithmetic."""
    n = len(M)
    A = np.array(M, dtype=float)
    try:
        det = round(float(np.linalg.det(A)))
        if det != 0:
            adj = np.rint(np.linalg.inv(A) * det)
            num = [[int(adj[i, j]) for j in range(n)] for i in range(n)]
            if det < 0:
                det = -det
                num = [[-x for x in row] for row in num]
            ok = all(
                sum(M[i][k] * num[k][j] for k in range(n)) == (det if i == j else 0)
                for i in range(n)
                for j in range(n)
            )
            if ok:
                return num, det
    except np.linalg.LinAlgError:
        pass
    inv = _invert([[Fraction(x) for x in row] for row in M])
    den = math.lcm(*(x.denominator for row in inv for x in row))
    return [[int(x * den) for x in row] for row in inv], den


def _invert(M: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(M)
    A = [row[:] + [Fraction(1) if i == j else Fraction(0) for j in range(n)]
         for i, row in enumerate(M)]
    for col in range(n):
        piv = next(r for r in range(col, n) if A[r][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        inv = 1 / A[col][col]
        A[col] = [x * inv for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [row[n:] for row in A]


def _verify(rs: RootSystem):
    s2 = [_doubled(a) for a in rs.simple_roots]
    p2 = [_doubled(a) for a in rs.positive_roots]
    for a2, coeffs in zip(p2, rs.pos_coeffs):
        for i in range(len(a2)):
            if sum(c * s[i] for c, s in zip(coeffs, s2)) != a2[i]:
                raise RuntimeError("coefficient expansion mismatch")
    # Pairing checks on cleared denominators (the scale factor cancels):
    # 2<v, a>/<a, a> = 4 (vL . a2) / (L (a2 . a2)) for vL = L*v integral, a2 = 2a.
    norms2 = [sum(x * x for x in a2) for a2 in s2]
    rho4 = [x.numerator * (4 // x.denominator) for x in rs.rho]
    for j, a2 in enumerate(s2):
        if sum(r * x for r, x in zip(rho4, a2)) != norms2[j]:
            raise RuntimeError("rho does not pair to 1 with a simple coroot")
    for i, w in enumerate(rs.fundamental_weights):
        L = math.lcm(*(x.denominator for x in w))
        wL = [x.numerator * (L // x.denominator) for x in w]
        for j, a2 in enumerate(s2):
            expected = L * norms2[j] if i == j else 0
            if 4 * sum(u * x for u, x in zip(wL, a2)) != expected:
                raise RuntimeError("fundamental weights are not dual to the coroots")
    min_norm2 = min(sum(x * x for x in a2) for a2 in p2)
    if rs.scale * Fraction(min_norm2, 4) != 2:
        raise RuntimeError("short-root normalization failed")


# ---------------------------------------------------------------------------
# operations


def weyl_dimension(rs: RootSystem, weight) -> int:
    """dim pi_v = prod_{u in R_+} <u, v+rho> / <u, rho>, exact.

    ``weight`` gives the nonnegative coordinates of v in the
    fundamental-weight basis.
    """
    m = [int(x) for x in weight]
    if len(m) != rs.rank:
        raise ValueError(f"weight needs {rs.rank} coordinates")
    if any(x < 0 for x in m):
        raise ValueError("weight is not dominant")
    halfnorms = rs.simple_halfnorms()
    dim = Fraction(1)
    for coeffs in rs.pos_coeffs:
        num = sum((Fraction(c) * d * (mi + 1) for c, d, mi in zip(coeffs, halfnorms, m)),
                  Fraction(0))
        den = sum((Fraction(c) * d for c, d in zip(coeffs, halfnorms)), Fraction(0))
        dim *= num / den
    if dim.denominator != 1:
        raise RuntimeError(f"Weyl product is not an integer: {dim}")
    return int(dim)


def exponent_A(rs: RootSystem) -> Fraction:
    """The gap-decay exponent 1 + |S| / |R_+|, exact rational."""
    return 1 + Fraction(rs.rank, len(rs.positive_roots))


@dataclass
class RootsLemmaReport:
    passed: bool
    bound: Fraction  # A(G) - 1
    worst_ratio: Fraction
    worst_subset: tuple[int, ...]
    subsets_checked: int


def verify_roots_lemma(rs: RootSystem) -> RootsLemmaReport:
    """(|S| - |S'|) / (|R_+| - |R'|) <= A(G) - 1 over all proper subsets S' of S.

    R' is the set of positive roots supported on S' (exact integer support
    test); the enumeration is exhaustive over the 2^rank - 1 proper subsets.
    """
    n = rs.rank
    npos = len(rs.positive_roots)
    bound = exponent_A(rs) - 1
    supports = [sum(1 << i for i, c in enumerate(coeffs) if c) for coeffs in rs.pos_coeffs]
    worst = Fraction(-1)
    worst_subset = ()
    passed = True
    count = 0
    for mask in range((1 << n) - 1):  # every proper subset of the simple roots
        count += 1
        r_sub = sum(1 for s in supports if s & ~mask == 0)
        ratio = Fraction(n - bin(mask).count("1"), npos - r_sub)
        if ratio > worst:
            worst = ratio
            worst_subset = tuple(i for i in range(n) if mask >> i & 1)
        if ratio > bound:
            passed = False
    return RootsLemmaReport(
        passed=passed,
        bound=bound,
        worst_ratio=worst,
        worst_subset=worst_subset,
        subsets_checked=count,
    )


def dominant_weights_in_ball(rs: RootSystem, r) -> list[tuple[int, ...]]:
    """All dominant integral weights with |v| <= r in the fixed normalization."""
    r = Fraction(r)
    if r < 0:
        raise ValueError("radius must be >= 0")
    r2 = r * r
    gram = rs.weight_gram()
    n = rs.rank
    # Gram entries are positive for connected diagrams, so the diagonal bounds
    # each coordinate: m_i^2 * G_ii <= |v|^2.
    bounds = [isqrt(int(r2 / gram[i][i])) if gram[i][i] <= r2 else 0 for i in range(n)]
    out = []
    for m in product(*(range(b + 1) for b in bounds)):
        norm2 = sum(
            (m[i] * m[j] * gram[i][j] for i in range(n) for j in range(n)), Fraction(0)
        )
        if norm2 <= r2:
            out.append(m)
    return out


def all_types(max_rank: int = 8):
    """Every admissible (family, rank) pair with rank <= max_rank."""
    pairs = []
    for n in range(1, max_rank + 1):
        pairs.append(("A", n))
    for n in range(2, max_rank + 1):
        pairs.append(("B", n))
        pairs.append(("C", n))
    for n in range(3, max_rank + 1):
        pairs.append(("D", n))
    for fam in ("E6", "E7", "E8", "F4", "G2"):
        if int(fam[1]) <= max_rank:
            pairs.append((fam, int(fam[1])))
    return pairs
