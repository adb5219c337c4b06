"""Conjugacy classes, exact complex character tables via the Burnside-Dixon
finite-field method, quasirandomness certificates, and the normal-subgroup
trace refinement."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from math import lcm

import numpy as np
from sympy import isprime
from sympy.ntheory import primitive_root
from sympy.ntheory.residue_ntheory import sqrt_mod

from .groups import GroupTable, is_normal, quotient_table, subgroup_table
from .measures import Measure, convolution_power, pushforward

CLASS_CAP = 256
ORDER_CAP = 1 << 17
ORTHOGONALITY_TOL = 1e-8


class CapExceededError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# conjugacy classes


@dataclass
class ClassData:
    reps: list[int]  # representative indices, identity class first
    sizes: list[int]
    class_of: np.ndarray  # element index -> class position

    def __len__(self):
        return len(self.reps)


def conjugacy_classes(table: GroupTable) -> ClassData:
    """Orbits of the conjugation action, via closure under a generating set."""
    n = table.order
    if n > ORDER_CAP:
        raise CapExceededError(f"order {n} exceeds the class-computation cap {ORDER_CAP}")
    conjugators = table.generator_indices() or list(range(n))
    class_of = np.full(n, -1, dtype=np.int64)
    reps, sizes = [], []
    for x in range(n):
        if class_of[x] >= 0:
            continue
        cid = len(reps)
        orbit = [x]
        class_of[x] = cid
        frontier = [x]
        while frontier:
            new = []
            for y in frontier:
                for g in conjugators:
                    z = table.multiply(table.multiply(table.invert(g), y), g)
                    if class_of[z] < 0:
                        class_of[z] = cid
                        orbit.append(z)
                        new.append(z)
            frontier = new
        reps.append(x)
        sizes.append(len(orbit))
    return ClassData(reps=reps, sizes=sizes, class_of=class_of)


# ---------------------------------------------------------------------------
# modular linear algebra over F_ell (numpy int64, entries in [0, ell))


def _inv_mod(a: int, ell: int) -> int:
    return pow(int(a) % ell, ell - 2, ell)


def _mod_matmul(A: np.ndarray, B: np.ndarray, ell: int) -> np.ndarray:
    """A @ B mod ell with chunking so int64 never overflows."""
    k = A.shape[1]
    chunk = max(1, (1 << 62) // (ell * ell))
    if k <= chunk:
        return (A @ B) % ell
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for lo in range(0, k, chunk):
        out = (out + A[:, lo : lo + chunk] @ B[lo : lo + chunk]) % ell
    return out


def _rref(A: np.ndarray, ell: int) -> tuple[np.ndarray, list[int]]:
    A = A.copy() % ell
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        A[[r, p]] = A[[p, r]]
        A[r] = A[r] * _inv_mod(A[r, c], ell) % ell
        mask = np.ones(rows, dtype=bool)
        mask[r] = False
        A[mask] = (A[mask] - np.outer(A[mask, c], A[r])) % ell
        pivots.append(c)
        r += 1
    return A, pivots


def _nullspace(A: np.ndarray, ell: int) -> np.ndarray:
    """Columns spanning ker(A) over F_ell."""
    R, pivots = _rref(A, ell)
    cols = A.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for j, fc in enumerate(free):
        basis[fc, j] = 1
        for r, pc in enumerate(pivots):
            basis[pc, j] = (-R[r, fc]) % ell
    return basis


def _solve_in_span(B: np.ndarray, Y: np.ndarray, ell: int) -> np.ndarray:
    """X with B @ X = Y (B has full column rank; the system is consistent)."""
    m = B.shape[1]
    R, pivots = _rref(np.hstack([B, Y]) % ell, ell)
    if pivots[:m] != list(range(m)):
        raise RuntimeError("basis matrix is rank deficient")
    return R[:m, m:]


def _min_poly(A: np.ndarray, ell: int, rng) -> np.ndarray:
    """Minimal polynomial (monic, ascending coefficients) of a Krylov vector."""
    m = A.shape[0]
    v = rng.integers(1, ell, size=m, dtype=np.int64)
    krylov = [v % ell]
    for _ in range(m):
        krylov.append(_mod_matmul(A, krylov[-1][:, None], ell)[:, 0])
        K = np.stack(krylov, axis=1)
        ns = _nullspace(K, ell)
        if ns.shape[1]:
            coeffs = ns[:, 0]
            lead = coeffs[-1]
            if lead == 0:  # dependency not involving the top power; trim
                nz = np.nonzero(coeffs)[0]
                coeffs = coeffs[: nz[-1] + 1]
                lead = coeffs[-1]
            return coeffs * _inv_mod(lead, ell) % ell
    raise RuntimeError("minimal polynomial not found")


def _poly_roots(coeffs: np.ndarray, ell: int) -> list[int]:
    xs = np.arange(ell, dtype=np.int64)
    vals = np.zeros(ell, dtype=np.int64)
    for c in coeffs[::-1]:
        vals = (vals * xs + int(c)) % ell
    return [int(x) for x in np.nonzero(vals == 0)[0]]


def _split_subspace(B: np.ndarray, N: np.ndarray, ell: int, rng) -> list[np.ndarray]:
    """Split span(B) into eigenspaces of the commuting operator N."""
    m = B.shape[1]
    if m == 1:
        return [B]
    A = _solve_in_span(B, _mod_matmul(N, B, ell), ell)
    roots = _poly_roots(_min_poly(A, ell, rng), ell)
    pieces = []
    covered = 0
    for lam in roots:
        E = _nullspace((A - lam * np.eye(m, dtype=np.int64)) % ell, ell)
        if E.shape[1]:
            pieces.append(_mod_matmul(B, E, ell))
            covered += E.shape[1]
    if covered != m:
        # fallback: the random Krylov vector missed an eigenvalue; full scan
        pieces, covered = [], 0
        for lam in range(ell):
            E = _nullspace((A - lam * np.eye(m, dtype=np.int64)) % ell, ell)
            if E.shape[1]:
                pieces.append(_mod_matmul(B, E, ell))
                covered += E.shape[1]
        if covered != m:
            raise RuntimeError("class matrix is not diagonalizable mod ell")
    return pieces


# ---------------------------------------------------------------------------
# the character table


@dataclass
class CharacterTable:
    table: GroupTable
    classes: ClassData
    chars: np.ndarray  # complex, rows = irreps, cols = classes
    dims: list[int]
    prime: int
    class_of: np.ndarray = field(init=False)

    def __post_init__(self):
        self.class_of = self.classes.class_of

    def n_irreps(self) -> int:
        return len(self.dims)

    def kernel_size(self, row: int, tol: float = 1e-6) -> int:
        d = self.dims[row]
        return sum(
            size
            for val, size in zip(self.chars[row], self.classes.sizes)
            if abs(val - d) < tol
        )

    def row_inner(self, i: int, j: int) -> complex:
        sizes = np.array(self.classes.sizes)
        return complex(
            np.sum(sizes * self.chars[i] * np.conj(self.chars[j])) / self.table.order
        )


def _dixon_prime(order: int, exponent: int) -> int:
    bound = 2 * math.isqrt(order) + 1
    ell = exponent + 1
    while True:
        if ell > bound and isprime(ell):
            return ell
        ell += exponent


def _class_matrices(table: GroupTable, classes: ClassData) -> list[np.ndarray]:
    """Transposed class-sum multiplication matrices N_i = M_i^T.

    Simultaneous right eigenvectors of the N_i carry the central characters
    omega_i = |C_i| chi(g_i) / chi(1).
    """
    k = len(classes)
    mats = np.zeros((k, k, k), dtype=np.int64)
    for kk, z in enumerate(classes.reps):
        for x in range(table.order):
            i = classes.class_of[x]
            j = classes.class_of[table.multiply(table.invert(x), z)]
            mats[i, kk, j] += 1
    return [mats[i].T.copy() for i in range(k)]


def character_table(table: GroupTable, seed: int = 7) -> CharacterTable:
    """Complete complex character table via Dixon's finite-field method."""
    classes = conjugacy_classes(table)
    k = len(classes)
    if k > CLASS_CAP:
        raise CapExceededError(f"{k} classes exceed the cap {CLASS_CAP}")
    n = table.order
    exponent = 1
    for r in classes.reps:
        exponent = lcm(exponent, table.element_order(r))
    ell = _dixon_prime(n, exponent)
    rng = np.random.default_rng(seed)

    mats = _class_matrices(table, classes)
    spaces = [np.eye(k, dtype=np.int64)]
    for N in mats:
        if all(B.shape[1] == 1 for B in spaces):
            break
        nxt = []
        for B in spaces:
            nxt.extend(_split_subspace(B, N, ell, rng))
        spaces = nxt
    if len(spaces) != k:
        raise RuntimeError("simultaneous diagonalization did not fully split")

    inv_class = [classes.class_of[table.invert(r)] for r in classes.reps]
    sizes = classes.sizes

    # central characters and dimensions
    omegas = np.zeros((k, k), dtype=np.int64)  # row per irrep
    dims = []
    for row, B in enumerate(spaces):
        v = B[:, 0]
        j = int(np.nonzero(v)[0][0])
        vj_inv = _inv_mod(v[j], ell)
        for i, N in enumerate(mats):
            omegas[row, i] = _mod_matmul(N, v[:, None], ell)[j, 0] * vj_inv % ell
        s = 0
        for i in range(k):
            s = (s + omegas[row, i] * omegas[row, inv_class[i]] * _inv_mod(sizes[i], ell)) % ell
        d2 = n * _inv_mod(s, ell) % ell
        root = sqrt_mod(d2, ell)
        if root is None:
            raise RuntimeError("dimension is not a square mod ell")
        dims.append(min(root, ell - root))

    # chi mod ell on each class
    chi_mod = np.zeros((k, k), dtype=np.int64)
    for row in range(k):
        for i in range(k):
            chi_mod[row, i] = dims[row] * omegas[row, i] * _inv_mod(sizes[i], ell) % ell

    # power map t -> class of g_i^t, for the cyclotomic lifting
    power_class = np.zeros((k, exponent), dtype=np.int64)
    for i, r in enumerate(classes.reps):
        g = 0
        for t in range(exponent):
            power_class[i, t] = classes.class_of[g]
            g = table.multiply(g, r)

    # lift: m_{j} = (1/e) sum_t chi(g^t) z^{-jt},  chi = sum_j m_j zeta^j
    e = exponent
    z = pow(primitive_root(ell), (ell - 1) // e, ell)
    z_inv_pows = np.array([pow(_inv_mod(z, ell), x, ell) for x in range(e)], dtype=np.int64)
    Z = z_inv_pows[np.outer(np.arange(e), np.arange(e)) % e]
    inv_e = _inv_mod(e, ell)
    zeta = np.exp(2j * np.pi * np.arange(e) / e)

    chars = np.zeros((k, k), dtype=complex)
    for row in range(k):
        V = chi_mod[row][power_class.T]  # (e, k): V[t, i] = chi(g_i^t) mod ell
        mult = _mod_matmul(Z, V, ell) * inv_e % ell
        chars[row] = zeta @ mult

    # trivial character first, then ascending dimension (deterministic tiebreak)
    def sort_key(row):
        trivial = dims[row] == 1 and np.allclose(chars[row], 1.0, atol=1e-8)
        return (not trivial, dims[row], tuple(np.round(chars[row].real, 6)),
                tuple(np.round(chars[row].imag, 6)))

    order = sorted(range(k), key=sort_key)
    chars = chars[order]
    dims = [int(dims[r]) for r in order]

    ct = CharacterTable(table=table, classes=classes, chars=chars, dims=dims, prime=ell)
    _validate(ct)
    return ct


def _validate(ct: CharacterTable):
    if sum(d * d for d in ct.dims) != ct.table.order:
        raise RuntimeError("sum of squared dimensions does not match the group order")
    k = ct.n_irreps()
    sizes = np.array(ct.classes.sizes)
    gram = (ct.chars * sizes) @ np.conj(ct.chars.T) / ct.table.order
    if np.max(np.abs(gram - np.eye(k))) > ORTHOGONALITY_TOL:
        raise RuntimeError("character rows are not orthonormal")
    for row in range(k):
        if abs(ct.chars[row, 0] - ct.dims[row]) > 1e-6:
            raise RuntimeError("character at identity disagrees with the dimension")


# ---------------------------------------------------------------------------
# quasirandomness certificates


@dataclass
class QuasirandomCert:
    alpha: float
    c: float
    min_nontrivial_dim: int
    rows: list[tuple[int, int]]  # (dim, [G : Ker pi]) per nontrivial irrep


def quasirandom_cert(table: GroupTable, alpha: float, chartable=None) -> QuasirandomCert:
    """Largest c with dim(pi) >= c * [G:Ker(pi)]^alpha over nontrivial irreps."""
    ct = chartable or character_table(table)
    rows = []
    c = math.inf
    min_dim = None
    for r in range(1, ct.n_irreps()):
        d = ct.dims[r]
        index = table.order // ct.kernel_size(r)
        rows.append((d, index))
        c = min(c, d / index**alpha)
        min_dim = d if min_dim is None else min(min_dim, d)
    return QuasirandomCert(alpha=alpha, c=c, min_nontrivial_dim=min_dim or 1, rows=rows)


# ---------------------------------------------------------------------------
# Clifford data for a normal subgroup and the refined trace bound


@dataclass
class CliffordData:
    dims: list[int]  # dim(rho_j)
    conjugates: list[int]  # a(rho_j)
    min_containing_dim: list[int]  # d(rho_j)


def clifford_data(tableG: GroupTable, normal_indices, ctG=None) -> CliffordData:
    """a(rho_j), d(rho_j), dim(rho_j) for the irreps of a normal subgroup."""
    N, embed = subgroup_table(tableG, normal_indices)
    ctN = character_table(N)
    ctG = ctG or character_table(tableG)
    kN = ctN.n_irreps()

    # conjugation by generators of G permutes the N-classes; orbit-close
    conjugators = tableG.generator_indices() or list(range(tableG.order))
    n_index = {g: i for i, g in enumerate(N.elements)}
    perms = []
    for g in conjugators:
        gi = tableG.invert(g)
        perm = []
        for rep_local in ctN.classes.reps:
            x = embed[rep_local]
            y = tableG.multiply(tableG.multiply(g, x), gi)
            perm.append(ctN.classes.class_of[n_index[tableG.elements[y]]])
        perms.append(perm)

    def conj_rows(row):
        base = tuple(np.round(ctN.chars[row], 8))
        seen = {base}
        frontier = [np.array(ctN.chars[row])]
        while frontier:
            new = []
            for vec in frontier:
                for perm in perms:
                    moved = vec[perm]
                    key = tuple(np.round(moved, 8))
                    if key not in seen:
                        seen.add(key)
                        new.append(moved)
            frontier = new
        return len(seen)

    sizesN = np.array(ctN.classes.sizes)
    # chi_G restricted to N, expressed over N-classes
    g_class_of_n = [ctG.class_of[embed[r]] for r in ctN.classes.reps]
    conjugates, min_dims = [], []
    for j in range(kN):
        conjugates.append(conj_rows(j))
        best = None
        for r in range(ctG.n_irreps()):
            restricted = ctG.chars[r][g_class_of_n]
            inner = np.sum(sizesN * restricted * np.conj(ctN.chars[j])) / N.order
            if inner.real > 0.5:
                best = ctG.dims[r] if best is None else min(best, ctG.dims[r])
        if best is None:
            raise RuntimeError("no G-irrep restricts onto this N-irrep")
        min_dims.append(best)
    return CliffordData(dims=list(ctN.dims), conjugates=conjugates, min_containing_dim=min_dims)


@dataclass
class CliffordReport:
    applicable: bool
    passed: bool
    lhs: float
    rhs: float
    hypothesis_trace: float
    M: float


def clifford_bound_check(
    tableG: GroupTable,
    normal_indices,
    mu: Measure,
    l: int,
    lp: int,
    M: float,
    tol: float = 1e-6,
) -> CliffordReport:
    """chi_G(mu^{*(2l')}) <= sum_j dim_j^2 M (a_j dim_j^2 M / d_j)^{(l'-l)/l}.

    The hypothesis chi_{G/N}(mu^{*(2l)}) <= M is asserted first; when it
    fails the proposition does not apply and the report says so.
    """
    if lp <= l:
        raise ValueError("need l' > l")
    if not mu.is_symmetric(tol=1e-10):
        raise ValueError("clifford_bound_check expects a symmetric measure")
    if not is_normal(tableG, normal_indices):
        raise ValueError("subgroup is not normal")

    quot, qmap = quotient_table(tableG, normal_indices)
    mu_q = pushforward(mu, qmap, quot)
    hyp = quot.order * float(convolution_power(mu_q, 2 * l).weights[0])
    if hyp > M:
        return CliffordReport(
            applicable=False, passed=False, lhs=math.nan, rhs=math.nan,
            hypothesis_trace=hyp, M=M,
        )

    data = clifford_data(tableG, normal_indices)
    expo = (lp - l) / l
    rhs = sum(
        d * d * M * (a * d * d * M / dd) ** expo
        for d, a, dd in zip(data.dims, data.conjugates, data.min_containing_dim)
    )
    lhs = tableG.order * float(convolution_power(mu, 2 * lp).weights[0])
    return CliffordReport(
        applicable=True, passed=lhs <= rhs + tol, lhs=lhs, rhs=rhs,
        hypothesis_trace=hyp, M=M,
    )
